#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stationary_lab/kernel.hpp"
#include "stationary_lab/state_graph.hpp"

namespace stationary_lab {

enum class SolveMethod { exact_product, power_iteration };

std::string to_string(SolveMethod method);

struct StationaryResult {
  std::vector<double> probabilities;
  SolveMethod method = SolveMethod::power_iteration;
  double residual = 0.0;  // ||sT - s||_1
  std::size_t iterations = 0;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual, std::size_t iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  std::size_t iterations() const { return iterations_; }

 private:
  double residual_;
  std::size_t iterations_;
};

struct PowerIterationOptions {
  double tolerance = 1e-13;
  std::size_t max_iterations = 1'000'000;
  std::vector<double> initial;  // empty: uniform
  int threads = 1;
  double laziness = 0.0;  // iterate with lambda I + (1 - lambda) T; same stationary vector, aperiodic
};

/// Iterates x <- xT (renormalized) until ||xT - x||_1 is at most the tolerance, then reports it.
/// Throws ConvergenceError after max_iterations.
StationaryResult power_iteration(const TransitionOperator& op, const PowerIterationOptions& options = {});

/// Product formula s_j ∝ prod_{i<j} T_i^{i+1} / T_{i+1}^i along a birth-death line whose states
/// are ordered by id. Accumulated in log space, normalized by log-sum-exp.
/// Throws std::domain_error when the kernel is not a line or a path transition is zero.
StationaryResult exact_stationary(const Kernel& kernel);

/// max |s_a - (sT)_a|; equals the largest imbalance between probability outflow and inflow.
double global_balance_residual(const TransitionOperator& op, std::span<const double> s, int threads = 1);

struct BalanceCheck {
  bool balanced = false;
  double max_violation = 0.0;
};

/// max over pairs a != b with a transition in either direction of |s_a T_a^b - s_b T_b^a|.
BalanceCheck detailed_balance_check(const Kernel& kernel, std::span<const double> s,
                                    double tolerance = 1e-10);

/// |sum_b T_a^b - sum_b T_b^a| over b != a, per state; equals |1 - (1T)_a|.
std::vector<double> flow_residuals(const TransitionOperator& op, int threads = 1);

enum class ExtremumClass { local_max, local_min, neither };

std::string to_string(ExtremumClass c);

struct StateExtremum {
  ExtremumClass kind = ExtremumClass::neither;
  bool plateau = false;  // equal to every neighbour
};

/// Local maxima are >= every lattice neighbour and > at least one; minima symmetric.
/// Values within a relative tie_tolerance, or within absolute_tolerance, compare equal.
std::vector<StateExtremum> classify_extrema(std::span<const double> values, const StateGraph& graph,
                                            double tie_tolerance = 1e-12, double absolute_tolerance = 0.0);

struct ExtremumReport {
  std::vector<StateExtremum> states;
  std::vector<double> flow_residual;

  std::vector<std::size_t> maxima() const;
  std::vector<std::size_t> minima() const;
};

ExtremumReport find_extrema(std::span<const double> s, const StateGraph& graph, const TransitionOperator& op,
                            double tie_tolerance = 1e-12, int threads = 1);

}  // namespace stationary_lab
