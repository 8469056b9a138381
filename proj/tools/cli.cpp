#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stationary_lab/catalog.hpp"
#include "stationary_lab/run_config.hpp"
#include "stationary_lab/stability.hpp"

namespace stationary_lab::cli {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct ConfigFlags {
  std::string config_file, catalog, process, game, incentive, self_interaction, mutation_matrix, birth_curve, solver;
  int N = 0, k = 1, threads = 1, cycle_cap = 14, radius = 1;
  double q = 1, beta = 1, mu = 0, mu12 = 0, mu21 = 0, mu_scale = 1, mu_exponent = 1, tol = 1e-13, flow_bound = -1;
  double birth_steepness = 1, birth_midpoint = -1;
  std::size_t max_iters = 0;
  std::vector<double> divergences;
  bool allow_absorbing = false;
  std::map<std::string, CLI::Option*> given;

  bool has(const std::string& name) const {
    auto it = given.find(name);
    return it != given.end() && it->second->count() > 0;
  }
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
  auto& g = f.given;
  g["config"] = cmd->add_option("--config", f.config_file, "JSON run configuration");
  g["catalog"] = cmd->add_option("--catalog", f.catalog, "catalog entry used as the base configuration");
  g["process"] = cmd->add_option("--process", f.process, "incentive | wright-fisher | k-fold | variable-population | cycle-graph");
  g["N"] = cmd->add_option("-N,--N", f.N, "population size");
  g["game"] = cmd->add_option("--game", f.game, "game matrix as JSON rows, or a catalog id");
  g["incentive"] = cmd->add_option("--incentive", f.incentive, "projection | replicator | q-replicator | q-fermi | best-reply");
  g["q"] = cmd->add_option("--q", f.q, "exponent of the q-families");
  g["beta"] = cmd->add_option("--beta", f.beta, "q-Fermi selection intensity");
  g["self_interaction"] = cmd->add_option("--self-interaction", f.self_interaction, "with | without");
  g["mu"] = cmd->add_option("--mu", f.mu, "uniform mutation rate");
  g["mu12"] = cmd->add_option("--mu12", f.mu12, "2-type mutation rate from type 1 to type 2");
  g["mu21"] = cmd->add_option("--mu21", f.mu21, "2-type mutation rate from type 2 to type 1");
  g["matrix"] = cmd->add_option("--mutation-matrix", f.mutation_matrix, "full mutation matrix as JSON rows");
  g["mu_scale"] = cmd->add_option("--mu-scale", f.mu_scale, "mu = c * (3/2) / N");
  g["mu_exponent"] = cmd->add_option("--mu-exponent", f.mu_exponent, "(2/3) mu = N^-e");
  g["k"] = cmd->add_option("--k", f.k, "steps per k-fold transition");
  g["birth_curve"] = cmd->add_option("--birth-curve", f.birth_curve, "step | sigmoid");
  g["birth_steepness"] = cmd->add_option("--birth-steepness", f.birth_steepness, "sigmoid steepness");
  g["birth_midpoint"] = cmd->add_option("--birth-midpoint", f.birth_midpoint, "sigmoid midpoint (default N/2)");
  g["solver"] = cmd->add_option("--solver", f.solver, "auto | exact | power");
  g["tol"] = cmd->add_option("--tol", f.tol, "power iteration L1 tolerance");
  g["max_iters"] = cmd->add_option("--max-iters", f.max_iters, "power iteration limit");
  g["divergences"] = cmd->add_option("--divergences", f.divergences, "divergence parameters d in [0, 1]")->delimiter(',');
  g["threads"] = cmd->add_option("--threads", f.threads, "worker threads (default STATIONARY_LAB_THREADS or 1)");
  g["allow_absorbing"] = cmd->add_flag("--allow-absorbing", f.allow_absorbing, "accept zero mutation");
  g["cycle_cap"] = cmd->add_option("--cycle-cap", f.cycle_cap, "largest cycle size");
  g["radius"] = cmd->add_option("--radius", f.radius, "theorem check lattice radius");
  g["flow_bound"] = cmd->add_option("--flow-bound", f.flow_bound, "theorem check flow residual bound (default 4/N)");
}

json parse_json_arg(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + what + " as JSON: " + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
}

RunConfig resolve(const ConfigFlags& f) {
  RunConfig c = f.has("catalog") ? catalog_get(f.catalog).config : RunConfig{};
  c.threads = default_thread_count();
  if (f.has("config")) c = run_config_from_json(read_json_file(f.config_file), c);

  json patch = json::object();
  if (f.has("process")) patch["process"] = f.process;
  if (f.has("N")) patch["N"] = f.N;
  if (f.has("game")) {
    const bool looks_like_json = f.game.find('[') != std::string::npos;
    patch["game"] = looks_like_json ? parse_json_arg(f.game, "--game") : json(f.game);
  }
  if (f.has("incentive")) patch["incentive"] = {{"kind", f.incentive}};
  if (f.has("q")) patch["q"] = f.q;
  if (f.has("beta")) patch["beta"] = f.beta;
  if (f.has("self_interaction")) patch["self_interaction"] = f.self_interaction;
  json mutation = json::object();
  if (f.has("mu")) mutation["mu"] = f.mu;
  if (f.has("mu12")) mutation["mu12"] = f.mu12;
  if (f.has("mu21")) mutation["mu21"] = f.mu21;
  if (f.has("matrix")) mutation["matrix"] = parse_json_arg(f.mutation_matrix, "--mutation-matrix");
  if (f.has("mu_scale")) mutation["mu_scale"] = f.mu_scale;
  if (f.has("mu_exponent")) mutation["mu_exponent"] = f.mu_exponent;
  if (!mutation.empty()) patch["mutation"] = mutation;
  if (f.has("k")) patch["k"] = f.k;
  if (f.has("birth_curve") || f.has("birth_steepness") || f.has("birth_midpoint")) {
    json b = json::object();
    if (f.has("birth_curve")) b["shape"] = f.birth_curve;
    if (f.has("birth_steepness")) b["steepness"] = f.birth_steepness;
    if (f.has("birth_midpoint")) b["midpoint"] = f.birth_midpoint;
    patch["birth_curve"] = b;
  }
  if (f.has("solver")) patch["solver"] = f.solver;
  if (f.has("tol")) patch["tol"] = f.tol;
  if (f.has("max_iters")) patch["max_iters"] = f.max_iters;
  if (f.has("divergences")) patch["divergences"] = f.divergences;
  if (f.has("threads")) patch["threads"] = f.threads;
  if (f.has("allow_absorbing")) patch["allow_absorbing"] = f.allow_absorbing;
  if (f.has("cycle_cap")) patch["cycle_cap"] = f.cycle_cap;
  if (f.has("radius")) patch["radius"] = f.radius;
  if (f.has("flow_bound")) patch["flow_bound"] = f.flow_bound;
  c = run_config_from_json(patch, c);
  if (c.game.size() == 0) throw ConfigError("no game given (use --game, --catalog or --config)");
  validate(c);
  return c;
}

/// Writes to the named file, or to the fallback stream for "" and "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::string state_header(const StateGraph& graph) {
  std::string h = graph.kind() == StateSpaceKind::cycle ? "configuration," : "";
  for (int i = 1; i <= graph.types(); ++i) h += (i > 1 ? ",a" : "a") + std::to_string(i);
  return h;
}

std::string state_cells(const StateGraph& graph, std::size_t s) {
  std::string row = graph.kind() == StateSpaceKind::cycle ? graph.label_string(s) + "," : "";
  const Counts& c = graph.counts(s);
  for (std::size_t i = 0; i < c.size(); ++i) row += (i ? "," : "") + std::to_string(c[i]);
  return row;
}

json state_json(const StateGraph& graph, std::size_t s) {
  if (graph.kind() == StateSpaceKind::cycle) return graph.label_string(s);
  return graph.counts(s);
}

struct Solved {
  ProcessModel model;
  ChainOperator chain;
  StationaryResult stationary;
  SolverConfig solver;
};

Solved solve(const RunConfig& config) {
  Solved out{to_model(config), {}, {}, to_solver_config(config)};
  out.chain = build_operator(out.model, out.solver.limits);
  out.stationary = solve_stationary(out.model, out.chain, out.solver);
  return out;
}

int cmd_stationary(const RunConfig& config, const std::string& output, std::ostream& out, std::ostream& err) {
  const Solved s = solve(config);
  const StateGraph& graph = *s.chain.graph;
  const ExtremumReport extrema = stationary_extrema(s.model, s.chain, s.stationary, s.solver);
  Sink sink(output, out);
  *sink << state_header(graph) << ",stationary,extremum,flow_residual\n";
  for (std::size_t a = 0; a < graph.size(); ++a) {
    *sink << state_cells(graph, a) << ',' << fmt(s.stationary.probabilities[a]) << ','
          << to_string(extrema.states[a].kind) << ',' << fmt(extrema.flow_residual[a]) << '\n';
  }
  err << "method " << to_string(s.stationary.method) << ", iterations " << s.stationary.iterations << ", residual "
      << short_num(s.stationary.residual) << '\n';
  return ok;
}

json iss_json(const StateGraph& graph, const IssCandidate& c) {
  json j;
  j["state"] = c.state ? state_json(graph, *c.state) : json(nullptr);
  j["point"] = std::vector<double>(c.point.data(), c.point.data() + c.point.size());
  j["residual"] = c.residual;
  j["refined"] = c.refined;
  return j;
}

json theorem_json(const StateGraph& graph, const TheoremCheck& t) {
  json j;
  j["theorem"] = t.theorem;
  j["verdict"] = t.pass ? "pass" : "fail";
  j["worst_offset"] = t.worst_offset;
  j["worst_flow_residual"] = t.worst_flow_residual;
  json v = json::array();
  for (const auto& x : t.violations) {
    v.push_back({{"state", state_json(graph, x.state)}, {"reason", x.reason}, {"d", x.d}, {"offset", x.offset}});
  }
  j["violations"] = v;
  if (!t.pass) j["note"] = "extrema not matched at this N; the theorems only promise agreement for sufficiently large N";
  return j;
}

int cmd_stability(const RunConfig& config, const std::string& output, const std::string& summary, std::ostream& out,
                  std::ostream& err) {
  Solved s = solve(config);
  const StabilityReport report = stability_report(s.model, s.chain, s.stationary, s.solver);
  const TheoremCheck check = theorem_check(s.model, report, to_theorem_options(config));
  const StateGraph& graph = *report.graph;

  if (!output.empty()) {
    Sink sink(output, out);
    *sink << state_header(graph) << ",stationary,extremum,flow_residual";
    for (double d : report.divergence_params) *sink << ",D_" << short_num(d);
    *sink << ",chi2,iss_residual";
    for (int i = 1; i <= graph.types(); ++i) *sink << ",E" << i;
    *sink << '\n';
    for (std::size_t a = 0; a < graph.size(); ++a) {
      const auto& st = report.states[a];
      *sink << state_cells(graph, a) << ',' << fmt(st.stationary) << ',' << to_string(st.extremum.kind) << ','
            << fmt(st.flow_residual);
      for (const auto& d : st.divergence) *sink << ',' << fmt(d);
      *sink << ',' << fmt(st.chi_squared) << ',' << fmt(st.iss_residual);
      for (Eigen::Index i = 0; i < st.expected.size(); ++i) *sink << ',' << fmt(st.expected[i]);
      *sink << '\n';
    }
  }

  json j;
  j["config"] = to_json(config);
  j["states"] = graph.size();
  j["method"] = to_string(report.stationary.method);
  j["iterations"] = report.stationary.iterations;
  j["residual"] = report.stationary.residual;
  json stable = json::array(), minima = json::array(), iss = json::array();
  for (auto a : report.stationary_maxima) stable.push_back(state_json(graph, a));
  for (auto a : report.stationary_minima) minima.push_back(state_json(graph, a));
  for (const auto& c : report.iss) iss.push_back(iss_json(graph, c));
  j["stationary_stable"] = stable;
  j["stationary_minima"] = minima;
  j["iss_candidates"] = iss;
  json dmin = json::object();
  for (std::size_t k = 0; k < report.divergence_params.size(); ++k) {
    json list = json::array();
    for (auto a : report.divergence_minima[k]) list.push_back(state_json(graph, a));
    dmin[short_num(report.divergence_params[k])] = list;
  }
  j["divergence_minima"] = dmin;
  j["divergence_chi2_ratio"] = {{"min", report.divergence_chi2_ratio_min}, {"max", report.divergence_chi2_ratio_max}};
  j["theorem_check"] = theorem_json(graph, check);
  j[check.theorem] = check.pass ? "pass" : "fail";

  Sink sink(summary.empty() && !output.empty() ? output + ".json" : summary, out);
  *sink << j.dump(2) << '\n';
  err << "method " << to_string(report.stationary.method) << ", iterations " << report.stationary.iterations << ", "
      << check.theorem << ' ' << (check.pass ? "pass" : "fail") << '\n';
  return ok;
}

int cmd_transitions(const RunConfig& config, const std::string& output, std::ostream& out) {
  const ProcessModel model = to_model(config);
  const auto graph = make_state_graph(model);
  Sink sink(output, out);
  *sink << "source_id,source,target_id,target,probability\n";
  const bool powered = model.kind == ProcessKind::k_fold && model.k > 1;
  std::shared_ptr<const Kernel> kernel;
  if (powered) kernel = std::make_shared<const Kernel>(kfold_kernel(model, to_solver_config(config).limits));
  for (std::size_t a = 0; a < graph->size(); ++a) {
    const TransitionRow row = kernel ? kernel->row(a) : process_row(model, *graph, a);
    for (const auto& t : row.entries) {
      *sink << a << ',' << graph->label_string(a) << ',' << t.target << ',' << graph->label_string(t.target) << ','
            << fmt(t.probability) << '\n';
    }
  }
  return ok;
}

const char* kDefaultSuite = R"({
  "configurations": [
    {"catalog": "fig2", "expect": "pass"},
    {"catalog": "corollary", "expect": "fail"},
    {"catalog": "closed-form", "overrides": {"N": 100}, "expect": "pass"},
    {"catalog": "anticoordination", "expect": "pass"},
    {"catalog": "q-family-q0", "expect": "fail"},
    {"catalog": "q-family-q1", "expect": "pass"},
    {"catalog": "q-family-q2", "expect": "pass"},
    {"catalog": "fig2", "overrides": {"process": "k-fold", "k": 2}, "expect": "pass"},
    {"catalog": "fig2", "overrides": {"process": "k-fold", "k": 100}, "expect": "pass"},
    {"catalog": "corollary", "overrides": {"process": "k-fold", "k": 2}, "expect": "fail"},
    {"catalog": "corollary", "overrides": {"process": "k-fold", "k": 100}, "expect": "fail"},
    {"catalog": "wf-anticoordination", "expect": "pass"},
    {"catalog": "bomze-2-wf", "expect": "report"},
    {"catalog": "bomze-20-wf", "expect": "report"},
    {"catalog": "bomze-47-wf", "expect": "report"},
    {"catalog": "rsp", "expect": "report"},
    {"catalog": "rsp-sqrt", "expect": "report"},
    {"catalog": "rsp-n32", "expect": "report"},
    {"catalog": "bomze-2", "expect": "report"},
    {"catalog": "bomze-20", "expect": "report"},
    {"catalog": "bomze-47", "expect": "report"},
    {"catalog": "bomze-7-as-printed", "expect": "report"},
    {"catalog": "vps", "expect": "report"},
    {"catalog": "cycle", "expect": "report"},
    {"catalog": "neutral-3", "expect": "report"}
  ]
})";

int cmd_theorem_check(const std::string& suite_path, const std::string& output, int threads, std::ostream& out,
                      std::ostream& err) {
  const json suite = suite_path.empty() ? json::parse(kDefaultSuite) : read_json_file(suite_path);
  if (!suite.contains("configurations") || !suite.at("configurations").is_array()) {
    throw ConfigError("suite needs a 'configurations' array");
  }
  // resolve every row before running any of them so a bad id fails fast
  struct Row {
    std::string label, expect;
    RunConfig config;
  };
  std::vector<Row> rows;
  for (const json& entry : suite.at("configurations")) {
    const std::string id = entry.at("catalog").get<std::string>();
    RunConfig c = catalog_get(id).config;
    c.threads = threads;
    std::string label = id;
    if (entry.contains("overrides")) {
      c = run_config_from_json(entry.at("overrides"), c);
      label += " " + entry.at("overrides").dump();
    }
    validate(c);
    const std::string expect = entry.value("expect", "pass");
    if (expect != "pass" && expect != "fail" && expect != "report") {
      throw ConfigError("expect must be pass, fail or report (got '" + expect + "')");
    }
    rows.push_back({label, expect, c});
  }

  Sink sink(output, out);
  *sink << "configuration\ttheorem\tverdict\texpected\tworst_offset\tworst_flow_residual\tviolations\n";
  bool unexpected = false;
  for (const auto& row : rows) {
    std::string theorem = "-", verdict;
    int offset = 0;
    double flow = 0.0;
    std::size_t violations = 0;
    try {
      Solved s = solve(row.config);
      const StabilityReport report = stability_report(s.model, s.chain, s.stationary, s.solver);
      const TheoremCheck check = theorem_check(s.model, report, to_theorem_options(row.config));
      theorem = check.theorem;
      verdict = check.pass ? "pass" : "fail";
      offset = check.worst_offset;
      flow = check.worst_flow_residual;
      violations = check.violations.size();
    } catch (const ConvergenceError& e) {
      verdict = "no-convergence";
      err << row.label << ": " << e.what() << '\n';
    }
    if (row.expect != "report" && verdict != row.expect) unexpected = true;
    *sink << row.label << '\t' << theorem << '\t' << verdict << '\t' << row.expect << '\t' << offset << '\t'
          << short_num(flow) << '\t' << violations << '\n';
  }
  return unexpected ? unexpected_verdict : ok;
}

int cmd_catalog(const std::optional<int>& types, const std::string& process, const std::string& figure,
                const std::string& show, std::ostream& out) {
  if (!show.empty()) {
    out << to_json(catalog_get(show)).dump(2) << '\n';
    return ok;
  }
  CatalogFilter filter;
  filter.types = types;
  if (!process.empty()) filter.process = process;
  if (!figure.empty()) filter.figure = figure;
  out << "id\tn\tN\tprocess\tprovenance\tfigures\tdescription\n";
  for (const auto& e : catalog_list(filter)) {
    std::string figs;
    for (const auto& f : e.figures) figs += (figs.empty() ? "" : ",") + f;
    out << e.id << '\t' << e.config.types() << '\t' << e.config.N << '\t' << e.config.process << '\t' << e.provenance
        << '\t' << figs << '\t' << e.description << '\n';
  }
  return ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stationary distributions and stability of evolutionary Markov processes", "stationary-lab"};
  app.require_subcommand(1);

  ConfigFlags stationary_flags, stability_flags, transitions_flags;
  std::string stationary_out, stability_out, stability_summary, transitions_out, suite, suite_out, figure, process, show;
  int suite_threads = default_thread_count();
  int types = 0;

  auto* stationary = app.add_subcommand("stationary", "solve the stationary distribution and write per-state CSV");
  add_config_flags(stationary, stationary_flags);
  stationary->add_option("-o,--output", stationary_out, "CSV path (default stdout)");

  auto* stability = app.add_subcommand("stability", "per-state stability CSV and JSON summary");
  add_config_flags(stability, stability_flags);
  stability->add_option("-o,--output", stability_out, "CSV path (omitted: no CSV)");
  stability->add_option("--summary", stability_summary, "JSON path (default stdout, or <output>.json with --output)");

  auto* theorem = app.add_subcommand("theorem-check", "run a suite of theorem checks");
  theorem->add_option("--suite", suite, "suite JSON (default: embedded suite)");
  theorem->add_option("-o,--output", suite_out, "table path (default stdout)");
  theorem->add_option("--threads", suite_threads, "worker threads");

  auto* cat = app.add_subcommand("catalog", "list catalog entries");
  auto* types_opt = cat->add_option("--n", types, "number of types");
  cat->add_option("--process", process, "process kind");
  cat->add_option("--figure", figure, "figure tag");
  cat->add_option("--show", show, "print one entry as JSON");

  auto* transitions = app.add_subcommand("transitions", "dump transition rows as CSV");
  add_config_flags(transitions, transitions_flags);
  transitions->add_option("-o,--output", transitions_out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? ok : usage;
  }

  try {
    if (stationary->parsed()) return cmd_stationary(resolve(stationary_flags), stationary_out, out, err);
    if (stability->parsed()) {
      return cmd_stability(resolve(stability_flags), stability_out, stability_summary, out, err);
    }
    if (theorem->parsed()) return cmd_theorem_check(suite, suite_out, suite_threads, out, err);
    if (cat->parsed()) {
      return cmd_catalog(types_opt->count() ? std::optional<int>(types) : std::nullopt, process, figure, show, out);
    }
    if (transitions->parsed()) return cmd_transitions(resolve(transitions_flags), transitions_out, out);
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return not_converged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  }
  return usage;
}

}  // namespace stationary_lab::cli
