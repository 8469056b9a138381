#include <doctest.h>

#include <algorithm>
#include <set>

#include "stationary_lab/catalog.hpp"
#include "stationary_lab/run_config.hpp"

using namespace stationary_lab;
using nlohmann::json;

namespace {

bool has(const std::vector<CatalogEntry>& entries, const std::string& id) {
  return std::any_of(entries.begin(), entries.end(), [&](const CatalogEntry& e) { return e.id == id; });
}

}  // namespace

TEST_CASE("catalog entries") {
  Eigen::MatrixXd bomze2(3, 3);
  bomze2 << 0, 0, 1, 0, 0, 1, 1, 0, 0;
  CHECK(catalog_get("bomze-2").config.game == bomze2);
  Eigen::MatrixXd rsp(3, 3);
  rsp << 0, -1, 1, 1, 0, -1, -1, 1, 0;
  CHECK(catalog_get("rsp").config.game == rsp);
  CHECK(catalog_get("m4").config.types() == 4);

  std::set<std::string> ids;
  for (const auto& e : catalog()) {
    CHECK(ids.insert(e.id).second);
    CHECK_NOTHROW(validate(e.config));
    CHECK((e.provenance == "printed" || e.provenance == "assumed" || e.provenance == "transcribed"));
  }
}

TEST_CASE("catalog_get suggests close ids") {
  try {
    catalog_get("bomze-4");
    FAIL("expected std::out_of_range");
  } catch (const std::out_of_range& e) {
    CHECK(std::string(e.what()).find("bomze-47") != std::string::npos);
  }
}

TEST_CASE("catalog filters") {
  CatalogFilter three;
  three.types = 3;
  const auto t = catalog_list(three);
  for (const char* id : {"bomze-2", "bomze-20", "bomze-47", "rsp"}) CHECK(has(t, id));
  for (const auto& e : t) CHECK(e.config.types() == 3);

  CatalogFilter fig;
  fig.figure = "fig2";
  const auto f = catalog_list(fig);
  REQUIRE(has(f, "fig2"));
  const RunConfig& c = catalog_get("fig2").config;
  CHECK(c.N == 100);
  CHECK(*resolved_mu(c) == doctest::Approx(0.001));

  CatalogFilter wf;
  wf.process = "wright-fisher";
  for (const auto& e : catalog_list(wf)) CHECK(e.config.process == "wright-fisher");

  CHECK(catalog_list().size() == catalog().size());
}

TEST_CASE("catalog entries round-trip through JSON") {
  for (const auto& e : catalog()) {
    const CatalogEntry back = catalog_entry_from_json(to_json(e));
    CHECK(back.id == e.id);
    CHECK(to_json(back) == to_json(e));
  }
}

TEST_CASE("mutation scale conventions") {
  RunConfig c;
  c.N = 60;
  c.game = Eigen::MatrixXd::Ones(2, 2);
  c.mutation.mu_scale = 1.0;
  CHECK(*resolved_mu(c) == doctest::Approx(1.5 / 60));
  c.mutation = {};
  c.mutation.mu_exponent = 0.5;
  CHECK(*resolved_mu(c) == doctest::Approx(1.5 / std::sqrt(60.0)));
  c.mutation = {};
  c.mutation.mu12 = 0.1;
  c.mutation.mu21 = 0.01;
  CHECK_FALSE(resolved_mu(c).has_value());
}

TEST_CASE("run config validation") {
  RunConfig c = catalog_get("fig2").config;
  CHECK_NOTHROW(validate(c));

  RunConfig big_mu = c;
  big_mu.mutation = {};
  big_mu.mutation.mu = 1.5;
  CHECK_THROWS_AS(validate(big_mu), ConfigError);

  RunConfig absorbing = c;
  absorbing.mutation = {};
  absorbing.mutation.mu = 0.0;
  CHECK_THROWS_AS(validate(absorbing), ConfigError);
  absorbing.allow_absorbing = true;
  CHECK_NOTHROW(validate(absorbing));

  RunConfig two_forms = c;
  two_forms.mutation.mu_scale = 1.0;
  CHECK_THROWS_AS(validate(two_forms), ConfigError);

  RunConfig bad_n = c;
  bad_n.N = 0;
  CHECK_THROWS_AS(validate(bad_n), ConfigError);

  RunConfig bad_process = c;
  bad_process.process = "moran-ish";
  CHECK_THROWS_AS(validate(bad_process), ConfigError);
}

TEST_CASE("run config JSON") {
  const RunConfig c = catalog_get("rsp").config;
  const RunConfig back = run_config_from_json(to_json(c));
  CHECK(to_json(back) == to_json(c));

  const RunConfig patched = run_config_from_json(json{{"catalog", "fig2"}, {"N", 50}, {"incentive", {{"kind", "q-replicator"}, {"q", 2.0}}}});
  CHECK(patched.N == 50);
  CHECK(patched.incentive == "q-replicator");
  CHECK(patched.q == 2.0);
  CHECK(patched.game == catalog_get("fig2").config.game);

  const RunConfig named = run_config_from_json(json{{"game", "rsp"}, {"mutation", {{"mu", 0.1}}}});
  CHECK(named.game == catalog_get("rsp").config.game);

  CHECK_THROWS(run_config_from_json(json{{"game", "rsp"}, {"n", 2}}));
}
