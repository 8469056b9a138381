#include "stationary_lab/run_config.hpp"

#include <cmath>

#include "stationary_lab/catalog.hpp"

namespace stationary_lab {

namespace {

using nlohmann::json;

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

int mutation_forms(const MutationConfig& m) {
  return static_cast<int>(m.mu.has_value()) + static_cast<int>(m.mu12.has_value() || m.mu21.has_value()) +
         static_cast<int>(m.matrix.has_value()) + static_cast<int>(m.mu_scale.has_value()) +
         static_cast<int>(m.mu_exponent.has_value());
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& what) {
  require(j.is_array() && !j.empty(), what + " must be a non-empty array of rows");
  const std::size_t n = j.size();
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    require(j[i].is_array() && j[i].size() == n, what + " must be square");
    for (std::size_t k = 0; k < n; ++k) {
      require(j[i][k].is_number(), what + " entries must be numbers");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j[i][k].get<double>();
    }
  }
  return m;
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <typename T>
void read_optional(const json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    out.reset();
    return;
  }
  T value{};
  read(j, key, value);
  out = value;
}

}  // namespace

std::optional<double> resolved_mu(const RunConfig& config) {
  const auto& m = config.mutation;
  if (m.mu) return *m.mu;
  if (m.mu_scale) return *m.mu_scale * 1.5 / config.N;
  if (m.mu_exponent) return 1.5 * std::pow(static_cast<double>(config.N), -*m.mu_exponent);
  return std::nullopt;
}

void validate(const RunConfig& c) {
  ProcessKind kind{};
  try {
    kind = process_kind_from_string(c.process);
    incentive_kind_from_string(c.incentive);
    solver_choice_from_string(c.solver);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  require(c.N >= 1, "N must be at least 1");
  require(c.game.rows() >= 2 && c.game.rows() == c.game.cols(), "game must be a square matrix with n >= 2");
  require(c.game.allFinite(), "game entries must be finite");
  require(std::isfinite(c.q), "q must be finite");
  require(std::isfinite(c.beta), "beta must be finite");
  require(c.self_interaction == "with" || c.self_interaction == "without",
          "self_interaction must be 'with' or 'without'");
  require(c.self_interaction == "with" || c.N >= 2, "the landscape without self-interaction needs N >= 2");
  require(c.k >= 1, "k must be at least 1");
  require(c.birth_curve == "step" || c.birth_curve == "sigmoid", "birth_curve must be 'step' or 'sigmoid'");
  require(std::isfinite(c.birth_steepness) && std::isfinite(c.birth_midpoint), "birth curve parameters must be finite");
  require(c.tol > 0.0 && std::isfinite(c.tol), "tol must be positive");
  require(!c.max_iters || *c.max_iters >= 1, "max_iters must be at least 1");
  require(!c.divergences.empty(), "divergences must not be empty");
  for (double d : c.divergences) require(in_unit(d), "divergence parameters must lie in [0, 1]");
  require(c.threads >= 1, "threads must be at least 1");
  require(c.cycle_cap >= 2 && c.cycle_cap <= 24, "cycle_cap must lie in [2, 24]");
  require(c.radius >= 0, "radius must be non-negative");
  require(std::isfinite(c.flow_bound), "flow_bound must be finite");
  if (kind == ProcessKind::variable_population || kind == ProcessKind::cycle_graph) {
    require(c.types() == 2, c.process + " processes are limited to 2 types");
    require(c.N >= 2, c.process + " processes need N >= 2");
  }

  const auto& m = c.mutation;
  const int forms = mutation_forms(m);
  require(forms > 0, "no mutation given (use mu, mu12/mu21, mutation matrix, mu_scale or mu_exponent)");
  require(forms == 1, "give the mutation in exactly one form");
  bool absorbing = false;
  if (m.mu12 || m.mu21) {
    require(m.mu12 && m.mu21, "mu12 and mu21 must be given together");
    require(c.types() == 2, "mu12/mu21 need a 2-type game");
    require(in_unit(*m.mu12) && in_unit(*m.mu21), "mu12 and mu21 must lie in [0, 1]");
    absorbing = *m.mu12 == 0.0 || *m.mu21 == 0.0;
  } else if (m.matrix) {
    require(m.matrix->rows() == c.types() && m.matrix->cols() == c.types(), "mutation matrix must be n x n");
    try {
      check_row_stochastic(*m.matrix, "mutation matrix");
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    absorbing = m.matrix->isIdentity(0.0);
  } else {
    if (m.mu_scale) require(*m.mu_scale > 0.0 && std::isfinite(*m.mu_scale), "mu_scale must be positive");
    if (m.mu_exponent) require(std::isfinite(*m.mu_exponent), "mu_exponent must be finite");
    const double mu = *resolved_mu(c);
    require(in_unit(mu), "mutation rate mu = " + std::to_string(mu) + " must lie in [0, 1]");
    absorbing = mu == 0.0;
  }
  require(!absorbing || c.allow_absorbing,
          "zero mutation makes boundary states absorbing and the stationary distribution may not exist; "
          "pass --allow-absorbing to run anyway");
}

ProcessModel to_model(const RunConfig& c) {
  validate(c);
  ProcessModel model;
  model.kind = process_kind_from_string(c.process);
  model.types = c.types();
  model.population = c.N;
  model.k = model.kind == ProcessKind::k_fold ? c.k : 1;
  model.cycle_cap = c.cycle_cap;
  model.birth = c.birth_curve == "step" ? BirthCurve::step() : BirthCurve::sigmoid(c.birth_steepness, c.birth_midpoint);
  model.incentive.kind = incentive_kind_from_string(c.incentive);
  model.incentive.q = c.q;
  model.incentive.beta = c.beta;
  model.incentive.landscape.game = GameMatrix(c.game);
  model.incentive.landscape.convention =
      c.self_interaction == "with" ? SelfInteraction::with : SelfInteraction::without;
  if (model.incentive.kind == IncentiveKind::replicator) model.incentive.q = 1.0;
  if (model.incentive.kind == IncentiveKind::projection) model.incentive.q = 0.0;
  const auto& m = c.mutation;
  if (m.mu12) {
    model.mutation = MutationRule::pairwise(*m.mu12, *m.mu21);
  } else if (m.matrix) {
    model.mutation = MutationRule::constant(*m.matrix);
  } else {
    model.mutation = MutationRule::uniform(*resolved_mu(c));
  }
  model.validate();
  return model;
}

SolverConfig to_solver_config(const RunConfig& c) {
  SolverConfig s;
  s.solver = solver_choice_from_string(c.solver);
  s.power.tolerance = c.tol;
  s.power.threads = c.threads;
  s.power.max_iterations = c.max_iters.value_or(c.process == "wright-fisher" || c.process == "wf" ? 100'000 : 1'000'000);
  s.limits.threads = c.threads;
  s.divergences = c.divergences;
  return s;
}

TheoremCheckOptions to_theorem_options(const RunConfig& c) {
  TheoremCheckOptions t;
  t.radius = c.radius;
  t.flow_bound = c.flow_bound;
  return t;
}

json to_json(const RunConfig& c) {
  json j;
  j["process"] = c.process;
  j["n"] = c.types();
  j["N"] = c.N;
  j["game"] = matrix_to_json(c.game);
  j["incentive"] = {{"kind", c.incentive}, {"q", c.q}, {"beta", c.beta}};
  j["self_interaction"] = c.self_interaction;
  json mutation = json::object();
  if (c.mutation.mu) mutation["mu"] = *c.mutation.mu;
  if (c.mutation.mu12) mutation["mu12"] = *c.mutation.mu12;
  if (c.mutation.mu21) mutation["mu21"] = *c.mutation.mu21;
  if (c.mutation.matrix) mutation["matrix"] = matrix_to_json(*c.mutation.matrix);
  if (c.mutation.mu_scale) mutation["mu_scale"] = *c.mutation.mu_scale;
  if (c.mutation.mu_exponent) mutation["mu_exponent"] = *c.mutation.mu_exponent;
  j["mutation"] = mutation;
  j["k"] = c.k;
  j["birth_curve"] = {{"shape", c.birth_curve}, {"steepness", c.birth_steepness}, {"midpoint", c.birth_midpoint}};
  j["solver"] = c.solver;
  j["tol"] = c.tol;
  if (c.max_iters) j["max_iters"] = *c.max_iters;
  j["divergences"] = c.divergences;
  j["threads"] = c.threads;
  j["allow_absorbing"] = c.allow_absorbing;
  j["cycle_cap"] = c.cycle_cap;
  j["radius"] = c.radius;
  j["flow_bound"] = c.flow_bound;
  return j;
}

RunConfig run_config_from_json(const json& j, RunConfig c) {
  require(j.is_object(), "config must be a JSON object");
  if (j.contains("catalog")) {
    std::string id;
    read(j, "catalog", id);
    c = catalog_get(id).config;
  }
  read(j, "process", c.process);
  read(j, "N", c.N);
  if (j.contains("game")) {
    const json& g = j.at("game");
    if (g.is_string()) {
      c.game = catalog_get(g.get<std::string>()).config.game;
    } else {
      c.game = matrix_from_json(g, "game");
    }
  }
  if (j.contains("n")) {
    int n = 0;
    read(j, "n", n);
    require(n == c.types(), "n = " + std::to_string(n) + " does not match the " + std::to_string(c.types()) +
                                "-type game");
  }
  if (j.contains("incentive")) {
    const json& inc = j.at("incentive");
    if (inc.is_string()) {
      c.incentive = inc.get<std::string>();
    } else {
      read(inc, "kind", c.incentive);
      read(inc, "q", c.q);
      read(inc, "beta", c.beta);
    }
  }
  read(j, "q", c.q);
  read(j, "beta", c.beta);
  read(j, "self_interaction", c.self_interaction);
  if (j.contains("mutation")) {
    const json& m = j.at("mutation");
    require(m.is_object(), "mutation must be an object");
    c.mutation = {};
    read_optional(m, "mu", c.mutation.mu);
    read_optional(m, "mu12", c.mutation.mu12);
    read_optional(m, "mu21", c.mutation.mu21);
    read_optional(m, "mu_scale", c.mutation.mu_scale);
    read_optional(m, "mu_exponent", c.mutation.mu_exponent);
    if (m.contains("matrix") && !m.at("matrix").is_null()) c.mutation.matrix = matrix_from_json(m.at("matrix"), "mutation matrix");
  }
  read(j, "k", c.k);
  if (j.contains("birth_curve")) {
    const json& b = j.at("birth_curve");
    if (b.is_string()) {
      c.birth_curve = b.get<std::string>();
    } else {
      read(b, "shape", c.birth_curve);
      read(b, "steepness", c.birth_steepness);
      read(b, "midpoint", c.birth_midpoint);
    }
  }
  read(j, "solver", c.solver);
  read(j, "tol", c.tol);
  read_optional(j, "max_iters", c.max_iters);
  read(j, "divergences", c.divergences);
  read(j, "threads", c.threads);
  read(j, "allow_absorbing", c.allow_absorbing);
  read(j, "cycle_cap", c.cycle_cap);
  read(j, "radius", c.radius);
  read(j, "flow_bound", c.flow_bound);
  return c;
}

}  // namespace stationary_lab
