#include <doctest.h>

#include <cmath>

#include "stationary_lab/dynamics.hpp"

using namespace stationary_lab;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

bool near(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double tol = 1e-14) {
  return x.size() == y.size() && (x - y).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

TEST_CASE("fitness with and without self-interaction") {
  const GameMatrix g = GameMatrix::two_by_two(1, 2, 3, 4);
  const FitnessLandscape with{g, SelfInteraction::with};
  CHECK(near(with.fitness(vec({0.25, 0.75}), 4), vec({1.75, 3.75})));
  const FitnessLandscape without{g, SelfInteraction::without};
  // counts (1, 3): f1 = (1*1 + 2*3 - 1) / 3, f2 = (3*1 + 4*3 - 4) / 3
  CHECK(near(without.fitness(vec({0.25, 0.75}), 4), vec({2.0, 11.0 / 3.0})));
}

TEST_CASE("incentive values") {
  const GameMatrix neutral = GameMatrix::neutral(2);
  const PopulationState s({1, 2});
  CHECK(near(incentive_values(IncentiveSpec::replicator(neutral), s), vec({1.0 / 3, 2.0 / 3})));

  const GameMatrix g = GameMatrix::two_by_two(1, 2, 3, 4);
  const Eigen::VectorXd x = vec({0.25, 0.75});
  const Eigen::VectorXd f = FitnessLandscape{g}.fitness(x, 4);
  CHECK(near(incentive_values(IncentiveSpec::projection(g), x, 4), f));

  CHECK(near(normalized_incentive(IncentiveSpec::fermi(g, 0.0), vec({0.5, 0.5}), 2), vec({0.5, 0.5})));
  const Eigen::VectorXd w = vec({0.25 * std::exp(f[0]), 0.75 * std::exp(f[1])});
  CHECK(near(normalized_incentive(IncentiveSpec::fermi(g, 1.0), x, 4), w / w.sum()));

  // q-replicator with q = 2: x_i^2 f_i
  const Eigen::VectorXd q2 = vec({0.0625 * f[0], 0.5625 * f[1]});
  CHECK(near(normalized_incentive(IncentiveSpec::q_replicator(g, 2.0), x, 4), q2 / q2.sum()));
}

TEST_CASE("best reply splits ties and falls back") {
  const GameMatrix coordination = GameMatrix::two_by_two(1, 0, 0, 1);
  const auto br = IncentiveSpec::best_reply(coordination);
  CHECK(near(normalized_incentive(br, vec({0.75, 0.25}), 4), vec({1.0, 0.0})));
  CHECK(near(normalized_incentive(br, vec({0.5, 0.5}), 2), vec({0.5, 0.5})));
  CHECK(near(normalized_incentive(br, vec({1.0, 0.0}), 4), vec({1.0, 0.0})));
  // the best response type is absent
  const GameMatrix anti = GameMatrix::two_by_two(0, 1, 1, 0);
  CHECK(near(normalized_incentive(IncentiveSpec::best_reply(anti), vec({1.0, 0.0}), 4), vec({0.0, 1.0})));
}

TEST_CASE("zero-fitness vertex reproduces its resident type") {
  const GameMatrix g = GameMatrix::two_by_two(0, 1, 1, 0);
  CHECK(near(normalized_incentive(IncentiveSpec::replicator(g), vec({1.0, 0.0}), 4), vec({1.0, 0.0})));
  const GameMatrix zero_column = GameMatrix::two_by_two(0, 1, 0, 1);
  CHECK(near(normalized_incentive(IncentiveSpec::projection(zero_column), vec({1.0, 0.0}), 4), vec({0.5, 0.5})));
}

TEST_CASE("degenerate incentives signal") {
  const GameMatrix negative = GameMatrix::two_by_two(-1, -1, -1, -1);
  CHECK_THROWS_AS(normalized_incentive(IncentiveSpec::replicator(negative), vec({0.5, 0.5}), 2),
                  DegenerateIncentive);
  Eigen::MatrixXd bad(2, 2);
  bad << 1, std::nan(""), 0, 1;
  CHECK_THROWS(GameMatrix(bad));
  CHECK_THROWS(GameMatrix(Eigen::MatrixXd::Zero(2, 3)));
}

TEST_CASE("mutation matrices") {
  const Eigen::MatrixXd m = MutationRule::uniform(0.3).matrix(vec({0.2, 0.3, 0.5}));
  CHECK(m(0, 0) == doctest::Approx(0.7));
  CHECK(m(0, 1) == doctest::Approx(0.15));
  const Eigen::MatrixXd p = MutationRule::pairwise(0.1, 0.01).matrix(vec({0.5, 0.5}));
  CHECK(p(0, 1) == doctest::Approx(0.1));
  CHECK(p(1, 0) == doctest::Approx(0.01));
  CHECK_THROWS(MutationRule::uniform(1.5).matrix(vec({0.5, 0.5})));
  Eigen::MatrixXd not_stochastic(2, 2);
  not_stochastic << 0.5, 0.4, 0.0, 1.0;
  CHECK_THROWS(check_row_stochastic(not_stochastic, "M"));
  CHECK_THROWS(MutationRule::constant(not_stochastic).matrix(vec({0.5, 0.5})));
}

TEST_CASE("selection distribution") {
  const GameMatrix neutral = GameMatrix::neutral(2);
  const PopulationState s({1, 2});
  CHECK(near(selection_distribution(IncentiveSpec::replicator(neutral), MutationRule::uniform(0.5), s),
             vec({0.5, 0.5})));
  CHECK(near(selection_distribution(IncentiveSpec::replicator(neutral), MutationRule::uniform(0.0), s),
             vec({1.0 / 3, 2.0 / 3})));

  const GameMatrix rsp((Eigen::MatrixXd(3, 3) << 0, -1, 1, 1, 0, -1, -1, 1, 0).finished());
  const Eigen::VectorXd third = Eigen::VectorXd::Constant(3, 1.0 / 3);
  CHECK(near(selection_distribution(IncentiveSpec::fermi(rsp, 1.0), MutationRule::uniform(2.0 / 3),
                                    vec({0.7, 0.2, 0.1}), 10),
             third));
}

TEST_CASE("x = (1/2, 1/2) is fixed for the q-replicator on a=1=d, b=2=c") {
  const GameMatrix g = GameMatrix::two_by_two(1, 2, 2, 1);
  const Eigen::VectorXd half = vec({0.5, 0.5});
  for (double q : {0.0, 0.5, 1.0, 2.0}) {
    for (double mu : {0.0, 0.1}) {
      const Eigen::VectorXd p = selection_distribution(IncentiveSpec::q_replicator(g, q), MutationRule::uniform(mu),
                                                       half, 100);
      CHECK(near(p, half));
    }
  }
}
