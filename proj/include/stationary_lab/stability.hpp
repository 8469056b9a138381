#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stationary_lab/processes.hpp"
#include "stationary_lab/stationary.hpp"

namespace stationary_lab {

/// Divergence family parameter d in [0, 1]: 0 is half squared Euclidean distance, 1 is
/// relative entropy.
class DivergenceParam {
 public:
  explicit DivergenceParam(double d);
  double value() const { return d_; }

 private:
  double d_;
};

/// D_d(x, y). For 0 < d < 1 this is the Bregman divergence of t^{2-d} / ((1-d)(2-d)):
///   sum_i (x_i^{2-d} - y_i^{2-d}) / ((1-d)(2-d)) - y_i^{1-d} (x_i - y_i) / (1-d)
/// which is non-negative and increasing in d. d = 1 is sum_i x_i log(x_i / y_i) - x_i + y_i, the
/// relative entropy on distributions; nullopt when an entry is not positive. Vectors need not sum
/// to one.
std::optional<double> divergence(DivergenceParam d, const Distribution& x, const Distribution& y);
std::optional<double> divergence(double d, const Distribution& x, const Distribution& y);

/// sum_i (x_i - y_i)^2 / x_i; nullopt when some x_i is zero.
std::optional<double> chi_squared(const Distribution& x, const Distribution& y);

/// The distribution the state is compared against: counts over their own total.
Distribution state_distribution(const StateGraph& graph, std::size_t state);

/// Expected next distribution E(a):
///   incentive: ((N-1)/N) a/N + p/N
///   wright-fisher: p
///   k-fold: the incentive map applied k times
///   variable-population: expected counts over the expected total
///   cycle-graph: expected type counts over N
Distribution expected_state(const ProcessModel& model, const StateGraph& graph, std::size_t state);

/// Incentive map at a continuous simplex point x.
Distribution expected_incentive_point(const ProcessModel& model, const Distribution& x);

/// (1/N) sum_b b T_a^b over the explicit transition row (incentive and k-fold models).
Distribution expected_state_by_moves(const ProcessModel& model, const StateGraph& graph, std::size_t state);

/// ||p(a) - a||_1.
double iss_residual(const ProcessModel& model, const StateGraph& graph, std::size_t state);

struct IssCandidate {
  std::optional<std::size_t> state;  // lattice state, or nearest one for refined roots
  Distribution point;
  double residual = 0.0;
  bool refined = false;  // continuous root of p(x) = x
};

/// Lattice local minima of the ISS residual that fall below the tolerance (and every state with
/// residual <= 1e-12). With refine and two types, also the continuous roots of p_1(x) - x_1
/// found by bisection between sign changes on the lattice grid, plus exact zeros on the grid.
std::vector<IssCandidate> iss_candidates(const ProcessModel& model, const StateGraph& graph, double tolerance,
                                         bool refine);

enum class SolverChoice { automatic, exact, power };

std::string to_string(SolverChoice choice);
SolverChoice solver_choice_from_string(const std::string& name);

struct SolverConfig {
  SolverChoice solver = SolverChoice::automatic;
  PowerIterationOptions power;
  BuildLimits limits;
  std::vector<double> divergences{0.0, 0.5, 1.0};
  double tie_tolerance = 1e-12;
  /// ISS candidate tolerance on ||p(a) - a||_1; non-positive means 2n / N.
  double iss_tolerance = -1.0;
  bool refine_iss = true;
};

/// Solves the model's stationary distribution with the configured solver. The exact product
/// formula is used automatically for birth-death lines.
StationaryResult solve_stationary(const ProcessModel& model, const ChainOperator& chain, const SolverConfig& config);

struct StateStability {
  double stationary = 0.0;
  Distribution expected;
  std::vector<std::optional<double>> divergence;  // one per configured d
  std::optional<double> chi_squared;
  double iss_residual = 0.0;
  StateExtremum extremum;
  double flow_residual = 0.0;
};

struct StabilityReport {
  std::shared_ptr<const StateGraph> graph;
  StationaryResult stationary;
  std::vector<double> divergence_params;
  std::vector<StateStability> states;

  std::vector<std::size_t> stationary_maxima;  // stationary stable states
  std::vector<std::size_t> stationary_minima;
  std::vector<std::vector<std::size_t>> divergence_minima;  // per configured d
  std::vector<IssCandidate> iss;
  /// min and max of D_1 / chi^2 over interior states (nan when undefined).
  double divergence_chi2_ratio_min = 0.0;
  double divergence_chi2_ratio_max = 0.0;

  std::vector<std::size_t> divergence_minima_for(double d) const;
};

/// Stationary extrema of a solved chain. Flow residuals of a k-fold chain are taken
/// from its one-step incentive kernel.
ExtremumReport stationary_extrema(const ProcessModel& model, const ChainOperator& chain,
                                  const StationaryResult& stationary, const SolverConfig& config);

/// Stationary distribution, extrema, divergence landscapes, ISS residuals and flow residuals
/// for every state. Propagates ConvergenceError from the solver.
StabilityReport stability_report(const ProcessModel& model, const SolverConfig& config = {});
/// Same, reusing an operator and a solved stationary distribution.
StabilityReport stability_report(const ProcessModel& model, const ChainOperator& chain, StationaryResult stationary,
                                 const SolverConfig& config);

struct TheoremCheckOptions {
  int radius = 1;
  std::vector<double> divergences{0.0, 1.0};
  /// Bound on the flow residual at interior stationary extrema; non-positive means 4 / N.
  double flow_bound = -1.0;
};

struct TheoremViolation {
  std::size_t state = 0;
  std::string reason;
  double d = 0.0;
  int offset = -1;  // lattice distance to the nearest match, -1 when beyond the search radius
};

struct TheoremCheck {
  std::string theorem;  // theorem1 | theorem2 | theorem3 | theorem4 | extension
  bool pass = true;
  int worst_offset = 0;
  double worst_flow_residual = 0.0;
  std::vector<TheoremViolation> violations;
};

/// Which theorem a model's check exercises.
std::string theorem_for(const ProcessModel& model);

/// Every stationary local max/min must lie within the radius of a local minimum of D_d for each
/// configured d (d = 1 only for interior extrema). Interior extrema must also have a flow residual
/// within the bound.
/// Wright-Fisher checks the global maximum against ISS candidates and D_d minima instead.
TheoremCheck theorem_check(const ProcessModel& model, const StabilityReport& report,
                           const TheoremCheckOptions& options = {});

}  // namespace stationary_lab
