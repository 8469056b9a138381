#include "stationary_lab/catalog.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace stationary_lab {

namespace {

Eigen::MatrixXd matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Eigen::MatrixXd two_by_two(double a, double b, double c, double d) { return matrix({{a, b}, {c, d}}); }

const Eigen::MatrixXd kRsp = matrix({{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}});
const Eigen::MatrixXd kBomze2 = matrix({{0, 0, 1}, {0, 0, 1}, {1, 0, 0}});
const Eigen::MatrixXd kBomze20 = matrix({{0, 0, 0}, {0, 0, -1}, {0, -1, 0}});
const Eigen::MatrixXd kBomze47 = matrix({{0, 2, 0}, {2, 0, 0}, {1, 1, 0}});
const Eigen::MatrixXd kBomze7Printed = matrix({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
const Eigen::MatrixXd kM4 = matrix({{0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {0, 0, 0, 1}});

RunConfig base(const std::string& process, int N, Eigen::MatrixXd game, const std::string& incentive) {
  RunConfig c;
  c.process = process;
  c.N = N;
  c.game = std::move(game);
  c.incentive = incentive;
  return c;
}

RunConfig with_mu(RunConfig c, double mu) {
  c.mutation = {};
  c.mutation.mu = mu;
  return c;
}

RunConfig with_scale(RunConfig c, double scale) {
  c.mutation = {};
  c.mutation.mu_scale = scale;
  return c;
}

RunConfig fermi(RunConfig c, double beta) {
  c.incentive = "q-fermi";
  c.q = 1.0;
  c.beta = beta;
  return c;
}

RunConfig q_replicator(RunConfig c, double q) {
  c.incentive = "q-replicator";
  c.q = q;
  return c;
}

std::vector<CatalogEntry> build() {
  std::vector<CatalogEntry> out;
  auto add = [&](std::string id, std::string description, std::string provenance, std::vector<std::string> figures,
                 RunConfig config) {
    out.push_back({std::move(id), std::move(description), std::move(provenance), std::move(figures), std::move(config)});
  };

  add("closed-form", "a=0=d, b=1=c, replicator; stationary distribution known in closed form", "printed",
      {"closed-form"}, with_mu(base("incentive", 20, two_by_two(0, 1, 1, 0), "replicator"), 0.1));
  add("fig2", "a=1=d, b=2, c=3, replicator; interior ESS near x1 = 1/3", "printed", {"fig2"},
      with_mu(base("incentive", 100, two_by_two(1, 2, 3, 1), "replicator"), 0.001));
  add("corollary", "a=1=d, b=0=c, mu = 6/25; two interior maxima at 2/5 and 3/5", "printed", {"corollary"},
      with_mu(base("incentive", 100, two_by_two(1, 0, 0, 1), "replicator"), 6.0 / 25.0));
  for (double q : {0.0, 1.0, 2.0}) {
    const std::string id = "q-family-q" + std::to_string(static_cast<int>(q));
    add(id, "a=2=b, c=1=d, q-replicator with q = " + std::to_string(static_cast<int>(q)), "printed", {"q-family"},
        with_mu(q_replicator(base("incentive", 100, two_by_two(2, 2, 1, 1), "q-replicator"), q), 0.001));
  }
  add("multimax-neutral", "neutral landscape, q = 3/2, two interior stationary maxima", "printed", {"multimax"},
      with_mu(q_replicator(base("incentive", 50, two_by_two(1, 1, 1, 1), "q-replicator"), 1.5), 0.1));
  {
    RunConfig c = q_replicator(base("incentive", 50, two_by_two(20, 1, 7, 10), "q-replicator"), 0.5);
    c.mutation.mu12 = 0.1;
    c.mutation.mu21 = 0.01;
    add("multimax-boundary", "game (20,1;7,10), q = 1/2, asymmetric mutation; interior and boundary maxima",
        "printed", {"multimax"}, c);
  }
  add("anticoordination", "a=1=d, b=2=c, replicator; ISS candidate at (1/2, 1/2)", "printed", {"q-family"},
      with_mu(base("incentive", 100, two_by_two(1, 2, 2, 1), "replicator"), 0.01));

  add("bomze-7-as-printed", "all-ones off-diagonal matrix, Fermi beta = 0.1",
      "printed", {"fig1"}, with_scale(fermi(base("incentive", 60, kBomze7Printed, ""), 0.1), 1.0));
  add("bomze-2", "Bomze matrix 2, Fermi beta = 1, mu = 3/(2N)", "printed", {"fig4"},
      with_scale(fermi(base("incentive", 60, kBomze2, ""), 1.0), 1.0));
  add("bomze-17", "Bomze matrix 17 (rock-scissors-paper), Fermi beta = 1, mu = 3/(2N)", "printed", {"fig3"},
      with_scale(fermi(base("incentive", 60, kRsp, ""), 1.0), 1.0));
  add("bomze-20", "Bomze matrix 20, Fermi beta = 1, mu = 3/(2N)", "printed", {"fig4"},
      with_scale(fermi(base("incentive", 60, kBomze20, ""), 1.0), 1.0));
  add("bomze-47", "Bomze matrix 47, Fermi beta = 1, mu = 3/(2N)", "printed", {"fig4"},
      with_scale(fermi(base("incentive", 60, kBomze47, ""), 1.0), 1.0));

  add("rsp", "rock-scissors-paper, Fermi beta = 1, (2/3) mu = 1/N", "printed", {"fig5"},
      with_scale(fermi(base("incentive", 60, kRsp, ""), 1.0), 1.0));
  {
    RunConfig c = fermi(base("incentive", 60, kRsp, ""), 1.0);
    c.mutation.mu_exponent = 0.5;
    add("rsp-sqrt", "rock-scissors-paper, Fermi beta = 1, (2/3) mu = N^{-1/2}", "printed", {"fig5"}, c);
    c.mutation.mu_exponent = 1.5;
    add("rsp-n32", "rock-scissors-paper, Fermi beta = 1, (2/3) mu = N^{-3/2}", "printed", {"fig5"}, c);
  }
  {
    RunConfig c = with_scale(fermi(base("k-fold", 80, kRsp, ""), 1.0), 1.0);
    c.k = 40;
    add("rsp-kfold", "40-fold process, rock-scissors-paper, Fermi beta = 1, N = 80; mu = 3/(2N) assumed",
        "assumed", {"fig3"}, c);
  }
  add("m4", "four-type matrix M4, N = 40; Fermi beta = 1 and mu = 3/(2N) assumed", "assumed", {"fig6"},
      with_scale(fermi(base("incentive", 40, kM4, ""), 1.0), 1.0));

  add("bomze-2-wf", "Wright-Fisher, Bomze matrix 2, Fermi beta = 1, mu = 3/(2N)", "printed", {"fig7"},
      with_scale(fermi(base("wright-fisher", 60, kBomze2, ""), 1.0), 1.0));
  add("bomze-20-wf", "Wright-Fisher, Bomze matrix 20, Fermi beta = 1, mu = 3/(2N)", "printed", {"fig7"},
      with_scale(fermi(base("wright-fisher", 60, kBomze20, ""), 1.0), 1.0));
  add("bomze-47-wf", "Wright-Fisher, Bomze matrix 47, Fermi beta = 1, mu = 3/(2N)", "printed", {"fig7"},
      with_scale(fermi(base("wright-fisher", 60, kBomze47, ""), 1.0), 1.0));
  add("bomze-2-wf-low", "Wright-Fisher, Bomze matrix 2, Fermi beta = 1, mu = 1/(2N)", "printed", {"fig7"},
      with_scale(fermi(base("wright-fisher", 60, kBomze2, ""), 1.0), 1.0 / 3.0));
  add("bomze-20-wf-low", "Wright-Fisher, Bomze matrix 20, Fermi beta = 1, mu = 1/(2N)", "printed", {"fig7"},
      with_scale(fermi(base("wright-fisher", 60, kBomze20, ""), 1.0), 1.0 / 3.0));
  add("bomze-47-wf-low", "Wright-Fisher, Bomze matrix 47, Fermi beta = 1, mu = 1/(2N)", "printed", {"fig7"},
      with_scale(fermi(base("wright-fisher", 60, kBomze47, ""), 1.0), 1.0 / 3.0));
  add("wf-anticoordination", "Wright-Fisher, a=1=d, b=2=c, Fermi beta = 1, mu = 3/(2N)", "printed", {"wright-fisher"},
      with_scale(fermi(base("wright-fisher", 100, two_by_two(1, 2, 2, 1), ""), 1.0), 1.0));

  add("vps", "variable population size, a=1=d, b=2=c, replicator, step birth curve", "printed", {"fig8"},
      with_mu(base("variable-population", 40, two_by_two(1, 2, 2, 1), "replicator"), 0.01));
  add("cycle-n2", "cycle of 2 vertices, a=1=d, b=2=c, replicator, mu = 1/3", "printed", {"cycle"},
      with_mu(base("cycle-graph", 2, two_by_two(1, 2, 2, 1), "replicator"), 1.0 / 3.0));
  add("cycle", "cycle of 10 vertices, a=1=d, b=2=c, replicator, mu = 1/N", "printed", {"cycle"},
      with_mu(base("cycle-graph", 10, two_by_two(1, 2, 2, 1), "replicator"), 0.1));
  add("cycle-neutral", "cycle of 10 vertices, neutral landscape, replicator, mu = 1/N", "printed", {"cycle"},
      with_mu(base("cycle-graph", 10, two_by_two(1, 1, 1, 1), "replicator"), 0.1));
  add("neutral-3", "three-type neutral landscape, replicator, uniform mutation", "printed", {"neutral"},
      with_mu(base("incentive", 12, matrix({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}), "replicator"), 0.1));
  return out;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    prev.swap(cur);
  }
  return prev[b.size()];
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = build();
  return entries;
}

const CatalogEntry& catalog_get(const std::string& id) {
  const auto& entries = catalog();
  for (const auto& e : entries) {
    if (e.id == id) return e;
  }
  std::vector<std::tuple<std::size_t, bool, std::string>> scored;
  for (const auto& e : entries) {
    const bool shares_prefix = !id.empty() && e.id.rfind(id.substr(0, std::min<std::size_t>(id.size(), 4)), 0) == 0;
    scored.emplace_back(edit_distance(id, e.id), !shares_prefix, e.id);
  }
  std::sort(scored.begin(), scored.end());
  std::string hint;
  for (std::size_t i = 0; i < std::min<std::size_t>(3, scored.size()); ++i) {
    hint += (i ? ", " : "") + std::get<2>(scored[i]);
  }
  throw std::out_of_range("unknown catalog id '" + id + "'; closest: " + hint);
}

std::vector<CatalogEntry> catalog_list(const CatalogFilter& filter) {
  std::vector<CatalogEntry> out;
  for (const auto& e : catalog()) {
    if (filter.types && e.config.types() != *filter.types) continue;
    if (filter.process && process_kind_from_string(*filter.process) != process_kind_from_string(e.config.process)) {
      continue;
    }
    if (filter.figure && std::find(e.figures.begin(), e.figures.end(), *filter.figure) == e.figures.end()) continue;
    out.push_back(e);
  }
  return out;
}

nlohmann::json to_json(const CatalogEntry& entry) {
  nlohmann::json j;
  j["id"] = entry.id;
  j["description"] = entry.description;
  j["provenance"] = entry.provenance;
  j["figures"] = entry.figures;
  j["config"] = to_json(entry.config);
  return j;
}

CatalogEntry catalog_entry_from_json(const nlohmann::json& j) {
  CatalogEntry e;
  e.id = j.at("id").get<std::string>();
  e.description = j.value("description", "");
  e.provenance = j.value("provenance", "");
  e.figures = j.value("figures", std::vector<std::string>{});
  e.config = run_config_from_json(j.at("config"));
  return e;
}

}  // namespace stationary_lab
