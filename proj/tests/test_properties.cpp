#include <doctest.h>

#include "criteria.hpp"

namespace {

void check(const criteria::Verdict& v) {
  INFO(v.detail);
  CHECK(v.pass);
}

}  // namespace

TEST_CASE("kernel rows are stochastic") { check(criteria::row_stochasticity()); }

TEST_CASE("divergences are positive definite and nondecreasing in d") {
  for (unsigned seed : {1u, 2u, 3u}) check(criteria::divergence_properties(seed, 100));
}

TEST_CASE("both forms of the expected next state agree") { check(criteria::expected_state_forms()); }

TEST_CASE("barycenter equivalences at the uniform mutation rate") { check(criteria::barycenter_equivalences()); }

TEST_CASE("converged solves satisfy global balance") { check(criteria::global_balance()); }

TEST_CASE("symmetric games give symmetric stationary distributions") { check(criteria::type_swap_symmetry()); }

TEST_CASE("divergence properties on a small sample") {
  const criteria::Verdict v = criteria::divergence_properties(7u, 10);
  CHECK(v.pass);
  CHECK(v.detail.find("10 pairs") != std::string::npos);
}
