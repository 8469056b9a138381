#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "stationary_lab/dynamics.hpp"
#include "stationary_lab/kernel.hpp"
#include "stationary_lab/state_graph.hpp"

namespace stationary_lab {

enum class ProcessKind { incentive, wright_fisher, k_fold, variable_population, cycle_graph };

std::string to_string(ProcessKind kind);
ProcessKind process_kind_from_string(const std::string& name);

/// Birth probability as a function of the current population size M in [1, N].
class BirthCurve {
 public:
  enum class Shape { step, sigmoid };

  /// 1 at M = 1, 1/2 for 1 < M < N, 0 at M = N.
  static BirthCurve step();
  /// 1 / (1 + exp(steepness * (M - midpoint))); midpoint defaults to N / 2 when negative.
  static BirthCurve sigmoid(double steepness, double midpoint = -1.0);

  double operator()(int M, int N) const;
  Shape shape() const { return shape_; }
  double steepness() const { return steepness_; }
  double midpoint() const { return midpoint_; }

 private:
  Shape shape_ = Shape::step;
  double steepness_ = 0.0;
  double midpoint_ = -1.0;
};

struct ProcessModel {
  ProcessKind kind = ProcessKind::incentive;
  IncentiveSpec incentive;
  MutationRule mutation;
  int types = 2;
  int population = 2;  // N (maximum size for variable populations, vertex count on a cycle)
  int k = 1;
  BirthCurve birth = BirthCurve::step();
  int cycle_cap = 14;

  /// Throws std::invalid_argument when the parameters are inconsistent.
  void validate() const;

  /// p(x) for a population of the given size.
  Eigen::VectorXd selection(const Distribution& x, int size) const;
  Eigen::VectorXd selection(const PopulationState& state) const;
};

/// The state space a model's chain runs on.
std::shared_ptr<const StateGraph> make_state_graph(const ProcessModel& model);

/// T_a^{a + i_{alpha,beta}} = p_alpha(a/N) a_beta/N; self-loop takes the remainder.
TransitionRow incentive_row(const ProcessModel& model, const StateGraph& graph, std::size_t state);

/// Multinomial row over the simplex lattice for sampling probabilities p.
TransitionRow multinomial_row(const StateGraph& graph, std::size_t source, const Eigen::VectorXd& p);

/// T_a^b = multinomial(N; b) prod_i p_i(a/N)^{b_i} over every lattice state b.
TransitionRow wright_fisher_row(const ProcessModel& model, const StateGraph& graph, std::size_t state);

/// Coin flip between a birth (type i with probability p_i) and a uniform death. A death at
/// M = 1 or a birth at M = N leaves the state unchanged.
TransitionRow variable_population_row(const ProcessModel& model, const StateGraph& graph,
                                      std::size_t state);

/// Parent u chosen with probability phibar_{type(u)} / a_{type(u)}, offspring type drawn from
/// the mutation row of the parent, offspring replaces a uniform cycle-neighbour of u.
TransitionRow cycle_graph_row(const ProcessModel& model, const StateGraph& graph, std::size_t state);

/// The row appropriate to the model kind (k-fold rows are incentive rows).
TransitionRow process_row(const ProcessModel& model, const StateGraph& graph, std::size_t state);

struct BuildLimits {
  std::size_t max_states = 500'000;
  /// Stored transitions above which Wright-Fisher kernels stay lazy and k-fold powers
  /// fall back to repeated application.
  std::size_t max_stored_transitions = 25'000'000;
  int threads = 1;
};

/// Every row of the model's base chain (the incentive kernel for k-fold models).
Kernel build_kernel(const ProcessModel& model, const BuildLimits& limits = {});

/// The k-th power of an incentive kernel.
Kernel kfold_kernel(const Kernel& incentive_kernel, int k, const BuildLimits& limits = {});
Kernel kfold_kernel(const ProcessModel& model, const BuildLimits& limits = {});

/// Wright-Fisher transitions evaluated on demand from per-state selection probabilities.
class LazyWrightFisher : public TransitionOperator {
 public:
  LazyWrightFisher(const ProcessModel& model, std::shared_ptr<const StateGraph> graph, int threads);
  std::size_t size() const override { return graph_->size(); }
  void propagate(std::span<const double> x, std::span<double> y, int threads) const override;
  double probability(std::size_t from, std::size_t to) const;

 private:
  std::shared_ptr<const StateGraph> graph_;
  int population_;
  std::vector<std::vector<double>> log_p_;  // per source state
  std::vector<double> log_coefficient_;     // per target state
};

/// The operator whose stationary distribution the model defines: a materialized kernel when
/// it fits the limits, otherwise a lazy Wright-Fisher operator or repeated incentive steps.
struct ChainOperator {
  std::shared_ptr<const StateGraph> graph;
  std::shared_ptr<const TransitionOperator> op;
  std::shared_ptr<const Kernel> kernel;  // null when lazy
};
ChainOperator build_operator(const ProcessModel& model, const BuildLimits& limits = {});

/// log(n!) exactly for n <= 170, lgamma beyond.
double log_factorial(int n);

/// Rotation classes of cycle configurations: class id per state (ids follow the smallest
/// member code) and the representative state of each class.
struct RotationClasses {
  std::vector<std::size_t> class_of;
  std::vector<std::size_t> representative;
  std::vector<std::size_t> members;  // member count per class
};
RotationClasses cycle_rotation_classes(const StateGraph& graph);

/// Number of maximal runs of equal types around the cycle (0 for a monochrome cycle counts as 1 arc).
int cycle_arc_count(const Counts& configuration);

}  // namespace stationary_lab
