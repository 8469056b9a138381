#include "criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "oracles.hpp"
#include "stationary_lab/catalog.hpp"
#include "stationary_lab/run_config.hpp"

namespace criteria {

using namespace stationary_lab;
using nlohmann::json;

namespace {

struct Solved {
  ProcessModel model;
  SolverConfig solver;
  TheoremCheckOptions theorem;
  StabilityReport report;
};

RunConfig catalog_config(const std::string& id, json patch = json::object()) {
  patch["catalog"] = id;
  RunConfig config = run_config_from_json(patch);
  validate(config);
  return config;
}

Solved solve(const std::string& id, const json& patch = json::object()) {
  const RunConfig config = catalog_config(id, patch);
  Solved s{to_model(config), to_solver_config(config), to_theorem_options(config), {}};
  s.report = stability_report(s.model, s.solver);
  return s;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void note(Verdict& v, const std::string& text) {
  if (!v.detail.empty()) v.detail += "; ";
  v.detail += text;
}

std::string fixed(double x, int digits = 3) {
  std::ostringstream out;
  out.precision(digits);
  out << x;
  return out.str();
}

std::string label(const StateGraph& g, std::size_t s) {
  std::string out = "(";
  const Counts& c = g.counts(s);
  for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "," : "") + std::to_string(c[i]);
  return out + ")";
}

std::string labels(const StateGraph& g, const std::vector<std::size_t>& states) {
  std::string out = "[";
  for (std::size_t i = 0; i < states.size(); ++i) out += (i ? " " : "") + label(g, states[i]);
  return out + "]";
}

std::vector<std::size_t> interior(const StateGraph& g, const std::vector<std::size_t>& states) {
  std::vector<std::size_t> out;
  for (std::size_t s : states) {
    if (g.interior(s)) out.push_back(s);
  }
  return out;
}

bool near(const StateGraph& g, std::size_t s, const std::vector<std::size_t>& targets, int radius) {
  return std::any_of(targets.begin(), targets.end(),
                     [&](std::size_t t) { return lattice_distance(g, s, t, radius).has_value(); });
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

StationaryResult tight_power(const TransitionOperator& op, double tolerance) {
  PowerIterationOptions options;
  options.tolerance = tolerance;
  return power_iteration(op, options);
}

void absorb_theorem(Verdict& v, const std::string& id, const StateGraph& g, const TheoremCheck& check) {
  if (check.pass) return;
  std::vector<std::size_t> states;
  for (const auto& violation : check.violations) {
    if (std::find(states.begin(), states.end(), violation.state) == states.end()) states.push_back(violation.state);
  }
  require(v, false, id + " theorem check violations at " + labels(g, states));
}

}  // namespace

void require(Verdict& v, bool ok, const std::string& what) {
  if (ok) return;
  v.pass = false;
  note(v, "FAILED " + what);
}

ProcessModel catalog_model(const std::string& id) { return to_model(catalog_get(id).config); }

Verdict closed_form_oracle() {
  Verdict v;
  const Stopwatch clock;
  double worst_exact = 0.0, worst_power = 0.0;
  for (double mu : {0.5, 0.1, 0.01}) {
    for (int N = 2; N <= 20; ++N) {
      const ProcessModel m = to_model(catalog_config("closed-form", {{"N", N}, {"mutation", {{"mu", mu}}}}));
      const Kernel k = build_kernel(m);
      const auto expected = oracle::closed_form(N, mu);
      worst_exact = std::max(worst_exact, oracle::max_abs_difference(exact_stationary(k).probabilities, expected));
      worst_power = std::max(worst_power, oracle::max_abs_difference(tight_power(k, 1e-14).probabilities, expected));
    }
  }
  const double elapsed = clock.seconds();
  note(v, "max error exact " + fixed(worst_exact) + ", power " + fixed(worst_power) + ", " + fixed(elapsed) + " s");
  require(v, worst_exact <= 1e-10, "exact product within 1e-10");
  require(v, worst_power <= 1e-10, "power iteration within 1e-10");
  require(v, elapsed < 1.0, "runtime under 1 s");
  return v;
}

Verdict fig2_entry() {
  Verdict v;
  const Stopwatch clock;
  const Solved s = solve("fig2");
  const StateGraph& g = *s.report.graph;
  const auto maxima = interior(g, s.report.stationary_maxima);
  const TheoremCheck check = theorem_check(s.model, s.report, s.theorem);
  const double elapsed = clock.seconds();
  note(v, "interior maxima " + labels(g, maxima) + ", " + fixed(elapsed) + " s");
  require(v, maxima.size() == 1, "a unique interior stationary maximum");
  if (maxima.size() == 1) {
    const int i = g.counts(maxima[0])[0];
    require(v, i >= 32 && i <= 34, "maximum at i in {32, 33, 34}");
    require(v, near(g, maxima[0], interior(g, s.report.divergence_minima_for(1.0)), 1),
            "interior D_1 minimum within distance 1");
  }
  absorb_theorem(v, "fig2", g, check);
  require(v, elapsed < 1.0, "runtime under 1 s");
  return v;
}

Verdict corollary_maxima() {
  Verdict v;
  const Stopwatch clock;
  const Solved s = solve("corollary");
  const StateGraph& g = *s.report.graph;
  std::set<int> found;
  for (std::size_t m : interior(g, s.report.stationary_maxima)) found.insert(g.counts(m)[0]);
  std::set<int> roots;
  for (const auto& c : s.report.iss) {
    if (c.refined) roots.insert(static_cast<int>(std::lround(c.point[0] * g.population())));
  }
  const double elapsed = clock.seconds();
  std::string text = "interior maxima at i =";
  for (int i : found) text += " " + std::to_string(i);
  text += ", fixed points at i =";
  for (int i : roots) text += " " + std::to_string(i);
  note(v, text + ", " + fixed(elapsed) + " s");
  require(v, found == std::set<int>{40, 60}, "maxima exactly at i = 40 and 60");
  require(v, elapsed < 1.0, "runtime under 1 s");
  return v;
}

Verdict q_family() {
  Verdict v;
  const Solved q1 = solve("q-family-q1");
  const StateGraph& g = *q1.report.graph;
  const auto m1 = interior(g, q1.report.stationary_maxima);
  note(v, "q=1 interior maxima " + labels(g, m1));
  require(v, m1.empty(), "q=1 has no interior maximum");

  const Solved q0 = solve("q-family-q0");
  const auto m0 = interior(g, q0.report.stationary_maxima);
  note(v, "q=0 interior maxima " + labels(g, m0));
  require(v, m0.size() == 1 && g.counts(m0[0])[0] == 67, "q=0 maximum at i = 67");

  const Solved q2 = solve("q-family-q2");
  const auto m2 = interior(g, q2.report.stationary_maxima);
  const std::size_t target = g.index({33, 67});
  note(v, "q=2 interior maxima " + labels(g, m2));
  require(v, m2.empty(), "q=2 has no interior maximum");
  for (double d : q2.report.divergence_params) {
    require(v, near(g, target, interior(g, q2.report.divergence_minima_for(d)), 1),
            "q=2 D_" + fixed(d) + " minimum near i = 33");
  }
  return v;
}

Verdict multiple_maxima() {
  Verdict v;
  const Solved neutral = solve("multimax-neutral");
  const StateGraph& g = *neutral.report.graph;
  const auto two = interior(g, neutral.report.stationary_maxima);
  note(v, "neutral q=3/2 maxima " + labels(g, neutral.report.stationary_maxima));
  require(v, two.size() == 2, "exactly two interior maxima");

  const Solved mixed = solve("multimax-boundary");
  const auto& maxima = mixed.report.stationary_maxima;
  const std::size_t inner = interior(g, maxima).size();
  note(v, "asymmetric q=1/2 maxima " + labels(g, maxima));
  require(v, inner >= 1, "an interior maximum");
  require(v, maxima.size() > inner, "a boundary maximum");
  return v;
}

Verdict kfold_invariance() {
  Verdict v;
  double worst = 0.0;
  for (const std::string id : {"fig2", "rsp"}) {
    const RunConfig base = catalog_config(id);
    const ProcessModel one = to_model(base);
    const Kernel t = build_kernel(one);
    const std::vector<double> s =
        one.types == 2 ? exact_stationary(t).probabilities : tight_power(t, 1e-14).probabilities;
    for (int k : {2, base.N}) {
      const ProcessModel power = to_model(catalog_config(id, {{"process", "k-fold"}, {"k", k}}));
      const ChainOperator chain = build_operator(power);
      const double diff = oracle::max_abs_difference(tight_power(*chain.op, 1e-14).probabilities, s);
      worst = std::max(worst, diff);
      require(v, diff <= 1e-10, id + " k=" + std::to_string(k) + " stationary within 1e-10");
      if (one.types == 2) {
        require(v, chain.kernel != nullptr, id + " k=" + std::to_string(k) + " kernel materialized");
        if (chain.kernel) {
          const BalanceCheck balance = detailed_balance_check(*chain.kernel, s);
          require(v, balance.balanced, id + " k=" + std::to_string(k) + " detailed balance (violation " +
                                           fixed(balance.max_violation) + ")");
        }
      }
    }
  }
  note(v, "max difference " + fixed(worst));
  return v;
}

Verdict three_type_theorem() {
  Verdict v;
  const Stopwatch clock;
  TheoremCheckOptions options;
  options.radius = 1;
  options.divergences = {0.0, 1.0};
  options.flow_bound = std::numeric_limits<double>::infinity();
  for (const std::string id : {"rsp", "bomze-2", "bomze-20", "bomze-47"}) {
    const Solved s = solve(id);
    const StateGraph& g = *s.report.graph;
    const TheoremCheck check = theorem_check(s.model, s.report, options);
    note(v, id + " " + std::to_string(check.violations.size()) + " violations");
    absorb_theorem(v, id, g, check);
    if (id == "rsp") {
      const std::size_t mode = argmax(s.report.stationary.probabilities);
      note(v, "rsp mode " + label(g, mode));
      require(v, g.counts(mode) == Counts{20, 20, 20}, "rsp mode at (20,20,20)");
      const Kernel k = build_kernel(s.model);
      require(v, !detailed_balance_check(k, s.report.stationary.probabilities).balanced,
              "rsp is not detailed balanced");
    }
  }
  const double elapsed = clock.seconds();
  note(v, fixed(elapsed) + " s");
  require(v, elapsed < 120.0, "runtime under 2 min");
  return v;
}

Verdict barycenter_maximum() {
  Verdict v;
  const Solved s = solve("bomze-7-as-printed");
  const StateGraph& g = *s.report.graph;
  const std::size_t center = g.index({20, 20, 20});
  note(v, "maxima " + labels(g, s.report.stationary_maxima));
  require(v, near(g, center, s.report.stationary_maxima, 1), "a stationary maximum within 1 of the barycenter");
  return v;
}

Verdict wright_fisher(const std::filesystem::path& output_dir) {
  Verdict v;
  const Solved s = solve("wf-anticoordination");
  const StateGraph& g = *s.report.graph;
  const int N = g.population();
  const std::size_t mode = argmax(s.report.stationary.probabilities);
  note(v, "global max " + label(g, mode));
  require(v, lattice_distance(g, mode, g.index({N / 2, N - N / 2}), 1).has_value(), "global max within 1 of N/2");

  const Kernel k = build_kernel(s.model);
  double worst = 0.0;
  for (std::size_t a = 0; a < g.size(); ++a) {
    const Eigen::VectorXd p = s.model.selection(g.state(a));
    Eigen::VectorXd moves = Eigen::VectorXd::Zero(p.size());
    const auto targets = k.row_targets(a);
    const auto probs = k.row_probabilities(a);
    for (std::size_t e = 0; e < targets.size(); ++e) {
      const Counts& b = g.counts(targets[e]);
      for (Eigen::Index i = 0; i < p.size(); ++i) moves[i] += probs[e] * b[static_cast<std::size_t>(i)];
    }
    moves /= N;
    worst = std::max({worst, (moves - p).cwiseAbs().maxCoeff(), (expected_state(s.model, g, a) - p).cwiseAbs().maxCoeff()});
  }
  note(v, "max |E - p| " + fixed(worst));
  require(v, worst <= 1e-12, "E = p within 1e-12");

  std::filesystem::create_directories(output_dir);
  for (const std::string id : {"bomze-2-wf", "bomze-20-wf", "bomze-47-wf"}) {
    const auto path = output_dir / (id + ".csv");
    const std::vector<std::string> args{"stationary-lab", "stability", "--catalog", id, "-N", "60", "-o", path.string()};
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    std::ifstream in(path);
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    require(v, code == cli::ok && rows == simplex_size(3, 60) + 1, id + " heatmap CSV written");
  }
  note(v, "heatmap CSVs in " + output_dir.string());
  return v;
}

Verdict cycle_graph() {
  Verdict v;
  const Stopwatch clock;
  auto consolidated = [](const Solved& s) {
    const StateGraph& g = *s.report.graph;
    const RotationClasses classes = cycle_rotation_classes(g);
    std::vector<double> mass(classes.representative.size(), 0.0);
    for (std::size_t a = 0; a < g.size(); ++a) mass[classes.class_of[a]] += s.report.stationary.probabilities[a];
    return std::make_pair(classes, mass);
  };

  const double threshold = *resolved_mu(catalog_get("cycle-n2").config);
  auto mixed_margin = [&](double mu) {
    const Solved s = solve("cycle-n2", {{"mutation", {{"mu", mu}}}});
    const auto [classes, mass] = consolidated(s);
    const StateGraph& g = *s.report.graph;
    double mixed = 0.0, pure = 0.0;
    for (std::size_t c = 0; c < mass.size(); ++c) {
      const Counts& counts = g.counts(classes.representative[c]);
      if (counts[0] == 1) {
        mixed = mass[c];
      } else {
        pure = std::max(pure, mass[c]);
      }
    }
    return mixed - pure;
  };
  const double at = mixed_margin(threshold), above = mixed_margin(threshold + 0.01),
               below = mixed_margin(threshold - 0.01);
  note(v, "N=2 mixed minus pure mass: " + fixed(below) + " below, " + fixed(at) + " at, " + fixed(above) +
              " above mu = 1/3");
  require(v, std::abs(at) <= 1e-12 && above > 0.0 && below < 0.0, "mixed class becomes stable at mu = 1/3");

  for (int N = 4; N <= 10; ++N) {
    const Solved s = solve("cycle", {{"N", N}, {"mutation", {{"mu", 1.0 / N}}}});
    const auto [classes, mass] = consolidated(s);
    const StateGraph& g = *s.report.graph;
    const double top = *std::max_element(mass.begin(), mass.end());
    std::string modal;
    bool segregated = true;
    for (std::size_t c = 0; c < mass.size(); ++c) {
      if (mass[c] < top * (1.0 - 1e-12)) continue;
      const std::size_t rep = classes.representative[c];
      modal += (modal.empty() ? "" : " ") + g.label_string(rep);
      const Counts& counts = g.counts(rep);
      segregated = segregated && cycle_arc_count(g.label(rep)) == 2 && std::abs(counts[0] - counts[1]) <= 1;
    }
    note(v, "N=" + std::to_string(N) + " modal " + modal);
    require(v, segregated, "N=" + std::to_string(N) + " modal classes are two equal arcs");
  }
  const double elapsed = clock.seconds();
  note(v, fixed(elapsed) + " s");
  require(v, elapsed < 60.0, "runtime under 1 min");
  return v;
}

Verdict variable_population() {
  Verdict v;
  const Solved s = solve("vps");
  const StateGraph& g = *s.report.graph;
  const auto minima = s.report.divergence_minima_for(0.0);
  std::vector<std::size_t> off;
  for (std::size_t m : minima) {
    if (g.counts(m)[0] != g.counts(m)[1]) off.push_back(m);
  }
  note(v, std::to_string(minima.size()) + " D_0 minima, " + std::to_string(off.size()) + " off the diagonal");
  if (!off.empty()) {
    std::vector<std::size_t> sample(off.begin(), off.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(off.size(), 5)));
    note(v, "e.g. " + labels(g, sample));
  }
  require(v, off.empty(), "D_0 minima on a_1 = a_2");
  require(v, std::find(minima.begin(), minima.end(), g.index({20, 20})) != minima.end(), "a D_0 minimum at (20,20)");
  return v;
}

Verdict row_stochasticity() {
  Verdict v;
  const std::vector<std::pair<std::string, json>> models{
      {"fig2", json::object()},
      {"rsp", {{"N", 20}}},
      {"m4", {{"N", 10}}},
      {"multimax-boundary", json::object()},
      {"wf-anticoordination", {{"N", 30}}},
      {"bomze-47-wf", {{"N", 12}}},
      {"vps", json::object()},
      {"cycle", {{"N", 8}}},
      {"fig2", {{"process", "k-fold"}, {"k", 3}, {"N", 30}}},
  };
  double worst = 0.0;
  for (const auto& [id, patch] : models) {
    const ProcessModel m = to_model(catalog_config(id, patch));
    const Kernel k = m.kind == ProcessKind::k_fold ? kfold_kernel(m) : build_kernel(m);
    bool entries = true;
    for (std::size_t a = 0; a < k.size(); ++a) {
      double total = 0.0;
      for (double p : k.row_probabilities(a)) {
        entries = entries && p >= 0.0 && p <= 1.0;
        total += p;
      }
      worst = std::max(worst, std::abs(total - 1.0));
    }
    require(v, entries, id + " entries in [0, 1]");
  }
  note(v, std::to_string(models.size()) + " kernels, max |row sum - 1| " + fixed(worst));
  require(v, worst <= 1e-12, "rows sum to 1 within 1e-12");
  return v;
}

Verdict divergence_properties(unsigned seed, int pairs) {
  Verdict v;
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> types(2, 4);
  std::exponential_distribution<double> weight(1.0);
  auto interior_point = [&](int n) {
    Distribution x(n);
    for (int i = 0; i < n; ++i) x[i] = weight(rng) + 1e-3;
    return Distribution(x / x.sum());
  };
  const std::vector<double> ds{0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0};
  int positive = 0, monotone = 0, zero = 0;
  for (int pair = 0; pair < pairs; ++pair) {
    const int n = types(rng);
    const Distribution x = interior_point(n), y = interior_point(n);
    bool pos = true, mono = true, self = true;
    double previous = 0.0;
    for (std::size_t j = 0; j < ds.size(); ++j) {
      const double value = *divergence(ds[j], x, y);
      pos = pos && value > 0.0;
      if (j > 0) mono = mono && value >= previous - 1e-12 * std::abs(previous);
      previous = value;
      self = self && std::abs(*divergence(ds[j], x, x)) <= 1e-15;
    }
    positive += pos;
    monotone += mono;
    zero += self;
  }
  note(v, std::to_string(pairs) + " pairs: " + std::to_string(positive) + " positive, " + std::to_string(monotone) +
              " nondecreasing in d, " + std::to_string(zero) + " vanish on the diagonal");
  require(v, positive == pairs && monotone == pairs && zero == pairs, "positive definite and nondecreasing in d");
  return v;
}

Verdict expected_state_forms() {
  Verdict v;
  double worst = 0.0;
  std::size_t states = 0;
  const std::vector<std::pair<std::string, json>> models{{"fig2", json::object()},
                                                         {"multimax-boundary", json::object()},
                                                         {"rsp", {{"N", 30}}},
                                                         {"bomze-47", {{"N", 30}}},
                                                         {"m4", {{"N", 12}}}};
  for (const auto& [id, patch] : models) {
    const ProcessModel m = to_model(catalog_config(id, patch));
    const auto g = make_state_graph(m);
    for (std::size_t a = 0; a < g->size(); ++a, ++states) {
      worst = std::max(worst, (expected_state(m, *g, a) - expected_state_by_moves(m, *g, a)).cwiseAbs().maxCoeff());
    }
  }
  note(v, std::to_string(states) + " states, max difference " + fixed(worst));
  require(v, worst <= 1e-14, "both forms of E agree within 1e-14");
  return v;
}

Verdict barycenter_equivalences() {
  Verdict v;
  int checked = 0;
  for (const std::string id : {"fig2", "rsp", "m4"}) {
    const RunConfig base = catalog_config(id);
    const int n = base.types();
    for (const std::string process : {"incentive", "wright-fisher"}) {
      const ProcessModel m = to_model(
          catalog_config(id, {{"N", 12}, {"process", process}, {"mutation", {{"mu", (n - 1.0) / n}}}}));
      const auto g = make_state_graph(m);
      const Counts center(static_cast<std::size_t>(n), 12 / n);
      for (std::size_t a = 0; a < g->size(); ++a) {
        const Distribution x = state_distribution(*g, a);
        const Distribution e = expected_state(m, *g, a);
        const bool fixed_p = (m.selection(g->state(a)) - x).lpNorm<1>() < 1e-12;
        const bool fixed_e = (e - x).lpNorm<1>() < 1e-12;
        bool small = true;
        for (double d : {0.0, 0.5}) small = small && *divergence(d, x, e) < 1e-20;
        const bool bary = g->counts(a) == center;
        require(v, fixed_p == fixed_e && fixed_e == small && small == bary,
                id + " " + process + " equivalence at " + label(*g, a));
        ++checked;
      }
    }
  }
  note(v, std::to_string(checked) + " states checked");
  return v;
}

Verdict global_balance() {
  Verdict v;
  const std::vector<std::pair<std::string, json>> models{{"fig2", json::object()},
                                                         {"corollary", json::object()},
                                                         {"multimax-neutral", json::object()},
                                                         {"rsp", {{"N", 30}}},
                                                         {"wf-anticoordination", {{"N", 40}}},
                                                         {"vps", json::object()},
                                                         {"cycle", {{"N", 8}}},
                                                         {"fig2", {{"process", "k-fold"}, {"k", 5}}}};
  double worst = 0.0;
  for (const auto& [id, patch] : models) {
    const RunConfig config = catalog_config(id, patch);
    const ProcessModel m = to_model(config);
    const SolverConfig solver = to_solver_config(config);
    const ChainOperator chain = build_operator(m);
    const StationaryResult s = solve_stationary(m, chain, solver);
    const double r = global_balance_residual(*chain.op, s.probabilities);
    worst = std::max(worst, r);
    require(v, r <= config.tol, id + " global balance within tol (" + fixed(r) + ")");
  }
  note(v, std::to_string(models.size()) + " solves, max residual " + fixed(worst));
  return v;
}

Verdict type_swap_symmetry() {
  Verdict v;
  double worst = 0.0;
  auto relative = [](double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); };
  for (const std::string id : {"anticoordination", "closed-form", "corollary", "multimax-neutral", "wf-anticoordination"}) {
    const Solved s = solve(id);
    const StateGraph& g = *s.report.graph;
    const auto& p = s.report.stationary.probabilities;
    double w = 0.0;
    for (std::size_t a = 0; a < g.size(); ++a) {
      const Counts& c = g.counts(a);
      w = std::max(w, relative(p[a], p[g.index({c[1], c[0]})]));
    }
    worst = std::max(worst, w);
    require(v, w <= 1e-9, id + " symmetric under a type swap (" + fixed(w) + ")");
  }
  const Solved rsp = solve("rsp", {{"N", 30}});
  const StateGraph& g = *rsp.report.graph;
  const auto& p = rsp.report.stationary.probabilities;
  double w = 0.0;
  for (std::size_t a = 0; a < g.size(); ++a) {
    const Counts& c = g.counts(a);
    w = std::max(w, std::abs(p[a] - p[g.index({c[2], c[0], c[1]})]));
  }
  worst = std::max(worst, w);
  require(v, w <= 1e-10, "rsp symmetric under a cyclic shift (" + fixed(w) + ")");
  note(v, "max deviation " + fixed(worst));
  return v;
}

Verdict property_suites() {
  Verdict v;
  const std::vector<std::pair<std::string, Verdict>> parts{
      {"row-stochasticity", row_stochasticity()},
      {"divergence", divergence_properties(20240613u, 100)},
      {"E forms", expected_state_forms()},
      {"barycenter", barycenter_equivalences()},
      {"global balance", global_balance()},
      {"symmetry", type_swap_symmetry()},
  };
  for (const auto& [name, part] : parts) {
    note(v, name + (part.pass ? " ok" : " failed (" + part.detail + ")"));
    v.pass = v.pass && part.pass;
  }
  return v;
}

}  // namespace criteria
