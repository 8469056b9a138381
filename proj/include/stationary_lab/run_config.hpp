#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "stationary_lab/processes.hpp"
#include "stationary_lab/stability.hpp"

namespace stationary_lab {

/// Rejected configuration values. The CLI maps this to a usage error.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exactly one way of giving the mutation rates should be set.
struct MutationConfig {
  std::optional<double> mu;
  std::optional<double> mu12;
  std::optional<double> mu21;
  std::optional<Eigen::MatrixXd> matrix;
  std::optional<double> mu_scale;     // mu = c * (3/2) / N
  std::optional<double> mu_exponent;  // (2/3) mu = N^{-e}
};

struct RunConfig {
  std::string process = "incentive";
  int N = 100;
  Eigen::MatrixXd game;  // n x n
  std::string incentive = "replicator";
  double q = 1.0;
  double beta = 1.0;
  std::string self_interaction = "with";
  MutationConfig mutation;
  int k = 1;
  std::string birth_curve = "step";
  double birth_steepness = 1.0;
  double birth_midpoint = -1.0;
  std::string solver = "auto";
  double tol = 1e-13;
  std::optional<std::size_t> max_iters;
  std::vector<double> divergences{0.0, 0.5, 1.0};
  int threads = 1;
  bool allow_absorbing = false;
  int cycle_cap = 14;
  int radius = 1;
  double flow_bound = -1.0;

  int types() const { return static_cast<int>(game.rows()); }
};

/// The uniform rate implied by mu, mu_scale or mu_exponent (nullopt for pairwise or matrix rules).
std::optional<double> resolved_mu(const RunConfig& config);

/// Range checks on every field; throws ConfigError.
void validate(const RunConfig& config);

ProcessModel to_model(const RunConfig& config);
SolverConfig to_solver_config(const RunConfig& config);
TheoremCheckOptions to_theorem_options(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);
/// Fields present in the JSON override the base. A string "game" is resolved through the catalog.
RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base = {});

}  // namespace stationary_lab
