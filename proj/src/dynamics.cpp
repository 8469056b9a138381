#include "stationary_lab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace stationary_lab {

namespace {

constexpr double kStochasticSlack = 1e-12;

void require_distribution(const IncentiveSpec& spec, const Distribution& x, int population) {
  if (x.size() != spec.landscape.game.types()) {
    throw std::invalid_argument("distribution has " + std::to_string(x.size()) +
                                " types but the game has " +
                                std::to_string(spec.landscape.game.types()));
  }
  if (population < 1) throw std::invalid_argument("population size must be positive");
}

void require_finite_nonnegative(const Eigen::VectorXd& phi, IncentiveKind kind) {
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    if (!std::isfinite(phi[i])) {
      throw DegenerateIncentive(to_string(kind) + " incentive is not finite");
    }
    if (phi[i] < 0.0) {
      throw DegenerateIncentive(to_string(kind) +
                                " incentive is negative; the landscape needs positive fitness "
                                "(or use the q-Fermi incentive)");
    }
  }
}

// Uniform weight on argmax f, ties within a relative 1e-12.
Eigen::VectorXd best_response(const Eigen::VectorXd& f) {
  const double top = f.maxCoeff();
  const double slack = 1e-12 * std::max(1.0, std::abs(top));
  Eigen::VectorXd br = Eigen::VectorXd::Zero(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (f[i] >= top - slack) br[i] = 1.0;
  }
  return br / br.sum();
}

}  // namespace

GameMatrix::GameMatrix(Eigen::MatrixXd payoffs) : payoffs_(std::move(payoffs)) {
  if (payoffs_.rows() != payoffs_.cols()) throw std::invalid_argument("game matrix must be square");
  if (payoffs_.rows() < 2) throw std::invalid_argument("game matrix needs at least 2 types");
  if (!payoffs_.allFinite()) throw std::invalid_argument("game matrix has non-finite entries");
}

GameMatrix GameMatrix::two_by_two(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return GameMatrix(std::move(m));
}

GameMatrix GameMatrix::neutral(int n) { return GameMatrix(Eigen::MatrixXd::Ones(n, n)); }

Eigen::VectorXd FitnessLandscape::fitness(const Distribution& x, int population) const {
  const Eigen::MatrixXd& A = game.payoffs();
  if (convention == SelfInteraction::with) return A * x;
  if (population < 2) {
    throw std::invalid_argument("a landscape without self-interaction needs a population of 2 or more");
  }
  const Eigen::VectorXd counts = x * static_cast<double>(population);
  return (A * counts - A.diagonal()) / static_cast<double>(population - 1);
}

std::string to_string(IncentiveKind kind) {
  switch (kind) {
    case IncentiveKind::projection: return "projection";
    case IncentiveKind::replicator: return "replicator";
    case IncentiveKind::q_replicator: return "q-replicator";
    case IncentiveKind::q_fermi: return "q-fermi";
    case IncentiveKind::best_reply: return "best-reply";
  }
  return "unknown";
}

IncentiveKind incentive_kind_from_string(const std::string& name) {
  if (name == "projection") return IncentiveKind::projection;
  if (name == "replicator") return IncentiveKind::replicator;
  if (name == "q-replicator") return IncentiveKind::q_replicator;
  if (name == "q-fermi" || name == "fermi") return IncentiveKind::q_fermi;
  if (name == "best-reply") return IncentiveKind::best_reply;
  throw std::invalid_argument("unknown incentive '" + name +
                              "' (projection, replicator, q-replicator, q-fermi, best-reply)");
}

IncentiveSpec IncentiveSpec::replicator(GameMatrix game) {
  return {IncentiveKind::replicator, 1.0, 1.0, {std::move(game), SelfInteraction::with}};
}

IncentiveSpec IncentiveSpec::projection(GameMatrix game) {
  return {IncentiveKind::projection, 0.0, 1.0, {std::move(game), SelfInteraction::with}};
}

IncentiveSpec IncentiveSpec::q_replicator(GameMatrix game, double q) {
  return {IncentiveKind::q_replicator, q, 1.0, {std::move(game), SelfInteraction::with}};
}

IncentiveSpec IncentiveSpec::fermi(GameMatrix game, double beta, double q) {
  return {IncentiveKind::q_fermi, q, beta, {std::move(game), SelfInteraction::with}};
}

IncentiveSpec IncentiveSpec::best_reply(GameMatrix game) {
  return {IncentiveKind::best_reply, 1.0, 1.0, {std::move(game), SelfInteraction::with}};
}

Eigen::VectorXd incentive_values(const IncentiveSpec& spec, const Distribution& x, int population) {
  require_distribution(spec, x, population);
  const Eigen::VectorXd f = spec.landscape.fitness(x, population);
  const Eigen::Index n = x.size();
  Eigen::VectorXd phi(n);

  switch (spec.kind) {
    case IncentiveKind::projection:
      phi = f;
      break;
    case IncentiveKind::replicator:
      phi = x.cwiseProduct(f);
      break;
    case IncentiveKind::q_replicator:
      for (Eigen::Index i = 0; i < n; ++i) {
        if (spec.q < 0.0 && x[i] <= 0.0) {
          throw std::invalid_argument("q-replicator with q < 0 is only defined on interior states");
        }
        phi[i] = std::pow(x[i], spec.q) * f[i];  // pow(0, 0) == 1
      }
      break;
    case IncentiveKind::q_fermi: {
      // log weights q log x_i + beta f_i, shifted by their maximum before exponentiating
      std::vector<double> logw(static_cast<std::size_t>(n));
      double top = -std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < n; ++i) {
        double lw;
        if (x[i] > 0.0) {
          lw = spec.q * std::log(x[i]) + spec.beta * f[i];
        } else if (spec.q == 0.0) {
          lw = spec.beta * f[i];
        } else if (spec.q > 0.0) {
          lw = -std::numeric_limits<double>::infinity();
        } else {
          throw std::invalid_argument("q-Fermi with q < 0 is only defined on interior states");
        }
        logw[static_cast<std::size_t>(i)] = lw;
        top = std::max(top, lw);
      }
      if (!std::isfinite(top)) throw DegenerateIncentive("q-Fermi incentive has no positive weight");
      for (Eigen::Index i = 0; i < n; ++i) phi[i] = std::exp(logw[static_cast<std::size_t>(i)] - top);
      phi /= phi.sum();
      break;
    }
    case IncentiveKind::best_reply:
      phi = x.cwiseProduct(best_response(f));
      break;
  }
  require_finite_nonnegative(phi, spec.kind);
  return phi;
}

Eigen::VectorXd incentive_values(const IncentiveSpec& spec, const PopulationState& state) {
  return incentive_values(spec, state.distribution(), state.size());
}

Eigen::VectorXd normalized_incentive(const IncentiveSpec& spec, const Distribution& x, int population) {
  const Eigen::VectorXd phi = incentive_values(spec, x, population);
  const double total = phi.sum();
  if (total > 0.0) return phi / total;
  if (spec.kind == IncentiveKind::best_reply) {
    return best_response(spec.landscape.fitness(x, population));
  }
  if (total == 0.0 && spec.kind != IncentiveKind::q_fermi) {
    // every fitness term vanished: select by the x^q weights alone
    const double q = spec.kind == IncentiveKind::projection ? 0.0
                     : spec.kind == IncentiveKind::replicator ? 1.0
                                                               : spec.q;
    Eigen::VectorXd w(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) w[i] = x[i] == 0.0 && q != 0.0 ? 0.0 : std::pow(x[i], q);
    const double wt = w.sum();
    if (wt > 0.0 && std::isfinite(wt)) return w / wt;
  }
  throw DegenerateIncentive(to_string(spec.kind) + " incentive is zero for every type");
}

MutationRule MutationRule::uniform(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("mutation rate must lie in [0, 1]");
  return MutationRule(Uniform{mu});
}

MutationRule MutationRule::pairwise(double mu12, double mu21) {
  if (!(mu12 >= 0.0 && mu12 <= 1.0 && mu21 >= 0.0 && mu21 <= 1.0)) {
    throw std::invalid_argument("pairwise mutation rates must lie in [0, 1]");
  }
  Eigen::MatrixXd m(2, 2);
  m << 1.0 - mu12, mu12, mu21, 1.0 - mu21;
  return MutationRule(std::move(m));
}

MutationRule MutationRule::constant(Eigen::MatrixXd matrix) {
  check_row_stochastic(matrix, "mutation matrix");
  return MutationRule(std::move(matrix));
}

MutationRule MutationRule::state_dependent(StateDependent rule) {
  if (!rule) throw std::invalid_argument("state-dependent mutation rule is empty");
  return MutationRule(std::move(rule));
}

Eigen::MatrixXd MutationRule::matrix(const Distribution& x) const {
  const Eigen::Index n = x.size();
  if (const auto* u = std::get_if<Uniform>(&rule_)) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, u->mu / static_cast<double>(n - 1));
    m.diagonal().setConstant(1.0 - u->mu);
    return m;
  }
  if (const auto* fixed = std::get_if<Eigen::MatrixXd>(&rule_)) {
    if (fixed->rows() != n) {
      throw std::invalid_argument("mutation matrix is " + std::to_string(fixed->rows()) +
                                  "x" + std::to_string(fixed->cols()) + " but the state has " +
                                  std::to_string(n) + " types");
    }
    return *fixed;
  }
  Eigen::MatrixXd m = std::get<StateDependent>(rule_)(x);
  if (m.rows() != n) throw std::invalid_argument("state-dependent mutation matrix has the wrong size");
  check_row_stochastic(m, "state-dependent mutation matrix");
  return m;
}

std::optional<double> MutationRule::uniform_rate() const {
  if (const auto* u = std::get_if<Uniform>(&rule_)) return u->mu;
  return std::nullopt;
}

void check_row_stochastic(const Eigen::MatrixXd& m, const std::string& what) {
  if (m.rows() != m.cols() || m.rows() < 2) throw std::invalid_argument(what + " must be square, n >= 2");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (!(m(i, j) >= 0.0 && m(i, j) <= 1.0)) {
        throw std::invalid_argument(what + " has an entry outside [0, 1]");
      }
    }
    if (std::abs(m.row(i).sum() - 1.0) > kStochasticSlack) {
      throw std::invalid_argument(what + " row " + std::to_string(i) + " does not sum to 1");
    }
  }
}

Eigen::VectorXd selection_distribution(const IncentiveSpec& spec, const MutationRule& rule,
                                       const Distribution& x, int population) {
  const Eigen::VectorXd phibar = normalized_incentive(spec, x, population);
  Eigen::VectorXd p = rule.matrix(x).transpose() * phibar;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] < -kStochasticSlack || p[i] > 1.0 + kStochasticSlack) {
      throw DegenerateIncentive("selection probability outside [0, 1]");
    }
    p[i] = std::clamp(p[i], 0.0, 1.0);
  }
  return p;
}

Eigen::VectorXd selection_distribution(const IncentiveSpec& spec, const MutationRule& rule,
                                       const PopulationState& state) {
  return selection_distribution(spec, rule, state.distribution(), state.size());
}

}  // namespace stationary_lab
