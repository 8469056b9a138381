#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include <Eigen/Core>

#include "stationary_lab/statespace.hpp"

namespace stationary_lab {

/// Raised when an incentive cannot be normalized (all zero, negative or non-finite).
class DegenerateIncentive : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Square payoff matrix with finite entries.
class GameMatrix {
 public:
  GameMatrix() = default;
  explicit GameMatrix(Eigen::MatrixXd payoffs);

  /// ((a, b), (c, d)).
  static GameMatrix two_by_two(double a, double b, double c, double d);
  /// All payoffs equal to one.
  static GameMatrix neutral(int n);

  int types() const { return static_cast<int>(payoffs_.rows()); }
  const Eigen::MatrixXd& payoffs() const { return payoffs_; }

 private:
  Eigen::MatrixXd payoffs_;
};

enum class SelfInteraction { with, without };

struct FitnessLandscape {
  GameMatrix game;
  SelfInteraction convention = SelfInteraction::with;

  /// f(x) = A x with self-interaction; otherwise f_i = (sum_j A_ij a_j - A_ii) / (P - 1)
  /// with a = P x the counts of a population of size P.
  Eigen::VectorXd fitness(const Distribution& x, int population) const;
};

enum class IncentiveKind { projection, replicator, q_replicator, q_fermi, best_reply };

std::string to_string(IncentiveKind kind);
IncentiveKind incentive_kind_from_string(const std::string& name);

struct IncentiveSpec {
  IncentiveKind kind = IncentiveKind::replicator;
  double q = 1.0;     // exponent for the q-families
  double beta = 1.0;  // selection intensity, q-Fermi only
  FitnessLandscape landscape;

  static IncentiveSpec replicator(GameMatrix game);
  static IncentiveSpec projection(GameMatrix game);
  static IncentiveSpec q_replicator(GameMatrix game, double q);
  static IncentiveSpec fermi(GameMatrix game, double beta, double q = 1.0);
  static IncentiveSpec best_reply(GameMatrix game);
};

/// phi(x) for a population of the given size. Non-negative on every valid state; q-Fermi
/// output is already normalized. Throws DegenerateIncentive on negative or non-finite values.
Eigen::VectorXd incentive_values(const IncentiveSpec& spec, const Distribution& x, int population);
Eigen::VectorXd incentive_values(const IncentiveSpec& spec, const PopulationState& state);

/// phi / sum(phi). For best reply with no best-response type present, falls back to the
/// uniform distribution over the argmax set. For the q-replicator family, a state where every
/// phi_i is zero selects by x_i^q alone (a zero-fitness vertex reproduces its resident type).
Eigen::VectorXd normalized_incentive(const IncentiveSpec& spec, const Distribution& x, int population);

/// Row-stochastic mutation matrices, M_ij = probability that an offspring of type i is type j.
class MutationRule {
 public:
  using StateDependent = std::function<Eigen::MatrixXd(const Distribution&)>;

  MutationRule() = default;

  /// M_ii = 1 - mu, M_ij = mu / (n - 1).
  static MutationRule uniform(double mu);
  /// Two types: M_12 = mu12, M_21 = mu21.
  static MutationRule pairwise(double mu12, double mu21);
  static MutationRule constant(Eigen::MatrixXd matrix);
  static MutationRule state_dependent(StateDependent rule);

  /// The matrix at distribution x (n = x.size()). Validates row-stochasticity.
  Eigen::MatrixXd matrix(const Distribution& x) const;

  std::optional<double> uniform_rate() const;

 private:
  struct Uniform {
    double mu = 0.0;
  };
  explicit MutationRule(std::variant<Uniform, Eigen::MatrixXd, StateDependent> rule)
      : rule_(std::move(rule)) {}

  std::variant<Uniform, Eigen::MatrixXd, StateDependent> rule_{Uniform{}};
};

/// Throws std::invalid_argument unless every row sums to 1 within 1e-12 with entries in [0, 1].
void check_row_stochastic(const Eigen::MatrixXd& m, const std::string& what);

/// p_i(x) = sum_k phibar_k M_ki.
Eigen::VectorXd selection_distribution(const IncentiveSpec& spec, const MutationRule& rule,
                                       const Distribution& x, int population);
Eigen::VectorXd selection_distribution(const IncentiveSpec& spec, const MutationRule& rule,
                                       const PopulationState& state);

}  // namespace stationary_lab
