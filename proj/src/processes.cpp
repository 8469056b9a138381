#include "stationary_lab/processes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <omp.h>

namespace stationary_lab {

namespace {

constexpr double kMultinomialRowTolerance = 1e-10;
// k-fold powers are materialized only for chains this small; larger ones use repeated steps.
constexpr std::size_t kMaxMaterializedPowerStates = 600;

std::array<double, 171> exact_log_factorials() {
  std::array<double, 171> out{};
  double f = 1.0;
  out[0] = 0.0;
  for (int n = 1; n <= 170; ++n) {
    f *= n;  // exact up to 22!, correctly rounded products beyond
    out[static_cast<std::size_t>(n)] = std::log(f);
  }
  return out;
}

double term_log(int count, double log_p) { return count == 0 ? 0.0 : count * log_p; }

void require_kind(const ProcessModel& model, std::initializer_list<ProcessKind> kinds, const char* op) {
  for (auto k : kinds) {
    if (model.kind == k) return;
  }
  throw std::invalid_argument(std::string(op) + " does not apply to a " + to_string(model.kind) +
                              " process");
}

}  // namespace

std::string to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::incentive: return "incentive";
    case ProcessKind::wright_fisher: return "wright-fisher";
    case ProcessKind::k_fold: return "k-fold";
    case ProcessKind::variable_population: return "variable-population";
    case ProcessKind::cycle_graph: return "cycle-graph";
  }
  return "unknown";
}

ProcessKind process_kind_from_string(const std::string& name) {
  if (name == "incentive" || name == "moran") return ProcessKind::incentive;
  if (name == "wright-fisher" || name == "wf") return ProcessKind::wright_fisher;
  if (name == "k-fold" || name == "kfold") return ProcessKind::k_fold;
  if (name == "variable-population" || name == "variable") return ProcessKind::variable_population;
  if (name == "cycle-graph" || name == "cycle") return ProcessKind::cycle_graph;
  throw std::invalid_argument("unknown process '" + name +
                              "' (incentive, wright-fisher, k-fold, variable-population, cycle-graph)");
}

BirthCurve BirthCurve::step() { return BirthCurve{}; }

BirthCurve BirthCurve::sigmoid(double steepness, double midpoint) {
  if (!std::isfinite(steepness)) throw std::invalid_argument("sigmoid steepness must be finite");
  BirthCurve c;
  c.shape_ = Shape::sigmoid;
  c.steepness_ = steepness;
  c.midpoint_ = midpoint;
  return c;
}

double BirthCurve::operator()(int M, int N) const {
  if (M < 1 || M > N) {
    throw std::out_of_range("population size " + std::to_string(M) + " outside [1, " +
                            std::to_string(N) + "]");
  }
  if (shape_ == Shape::step) {
    if (M == 1) return 1.0;
    if (M == N) return 0.0;
    return 0.5;
  }
  const double mid = midpoint_ < 0.0 ? N / 2.0 : midpoint_;
  return 1.0 / (1.0 + std::exp(steepness_ * (M - mid)));
}

void ProcessModel::validate() const {
  if (types < 2) throw std::invalid_argument("a process needs at least 2 types");
  if (population < 1) throw std::invalid_argument("population size must be >= 1");
  if (incentive.landscape.game.types() != types) {
    throw std::invalid_argument("game has " + std::to_string(incentive.landscape.game.types()) +
                                " types but the process has " + std::to_string(types));
  }
  if (kind == ProcessKind::k_fold && k < 1) {
    throw std::invalid_argument("k-fold process needs k >= 1, got " + std::to_string(k));
  }
  if (kind == ProcessKind::variable_population || kind == ProcessKind::cycle_graph) {
    if (types != 2) throw std::invalid_argument(to_string(kind) + " processes are limited to 2 types");
    if (population < 2) throw std::invalid_argument(to_string(kind) + " processes need N >= 2");
  }
  if (kind == ProcessKind::variable_population &&
      incentive.landscape.convention == SelfInteraction::without) {
    throw std::invalid_argument("variable populations reach size 1; use the self-interaction landscape");
  }
  if (kind == ProcessKind::cycle_graph && population > cycle_cap) {
    throw BudgetExceeded("cycle of " + std::to_string(population) + " vertices exceeds the cap of " +
                             std::to_string(cycle_cap) + " (2^N configurations)",
                         std::size_t{1} << std::min(population, 62));
  }
  if (incentive.kind == IncentiveKind::q_fermi && !std::isfinite(incentive.beta)) {
    throw std::invalid_argument("q-Fermi beta must be finite");
  }
}

Eigen::VectorXd ProcessModel::selection(const Distribution& x, int size) const {
  return selection_distribution(incentive, mutation, x, size);
}

Eigen::VectorXd ProcessModel::selection(const PopulationState& state) const {
  return selection_distribution(incentive, mutation, state);
}

std::shared_ptr<const StateGraph> make_state_graph(const ProcessModel& model) {
  model.validate();
  switch (model.kind) {
    case ProcessKind::variable_population: return StateGraph::variable_population(model.population);
    case ProcessKind::cycle_graph: return StateGraph::cycle(model.population);
    default: return StateGraph::simplex(model.types, model.population);
  }
}

TransitionRow incentive_row(const ProcessModel& model, const StateGraph& graph, std::size_t state) {
  require_kind(model, {ProcessKind::incentive, ProcessKind::k_fold}, "incentive_row");
  const PopulationState a = graph.state(state);
  const int N = a.size();
  const Eigen::VectorXd p = model.selection(a);
  TransitionRow row{state, {}};
  double moving = 0.0;
  for (const auto& [move, next] : neighbors(a)) {
    const double t = p[move.alpha] * a[static_cast<std::size_t>(move.beta)] / static_cast<double>(N);
    if (t > 0.0) {
      row.entries.push_back({graph.index(next.counts()), t});
      moving += t;
    }
  }
  row.entries.push_back({state, 1.0 - moving});
  finalize_row(row);
  return row;
}

double log_factorial(int n) {
  static const std::array<double, 171> table = exact_log_factorials();
  if (n < 0) throw std::invalid_argument("factorial of a negative number");
  if (n <= 170) return table[static_cast<std::size_t>(n)];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

TransitionRow multinomial_row(const StateGraph& graph, std::size_t source, const Eigen::VectorXd& p) {
  if (graph.kind() != StateSpaceKind::simplex) {
    throw std::invalid_argument("multinomial rows need a simplex state space");
  }
  const int N = graph.population();
  std::vector<double> log_p(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    log_p[static_cast<std::size_t>(i)] = p[i] > 0.0 ? std::log(p[i]) : -std::numeric_limits<double>::infinity();
  }
  TransitionRow row{source, {}};
  const double log_n = log_factorial(N);
  double total = 0.0;
  for (std::size_t b = 0; b < graph.size(); ++b) {
    const Counts& counts = graph.counts(b);
    double lw = log_n;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      lw += term_log(counts[i], log_p[i]) - log_factorial(counts[i]);
    }
    const double w = std::exp(lw);
    if (w > 0.0) {
      row.entries.push_back({b, w});
      total += w;
    }
  }
  if (std::abs(total - 1.0) > kMultinomialRowTolerance) {
    throw std::domain_error("multinomial row " + std::to_string(source) + " sums to " + std::to_string(total));
  }
  for (auto& e : row.entries) e.probability /= total;
  finalize_row(row);
  return row;
}

TransitionRow wright_fisher_row(const ProcessModel& model, const StateGraph& graph, std::size_t state) {
  require_kind(model, {ProcessKind::wright_fisher}, "wright_fisher_row");
  return multinomial_row(graph, state, model.selection(graph.state(state)));
}

TransitionRow variable_population_row(const ProcessModel& model, const StateGraph& graph,
                                      std::size_t state) {
  require_kind(model, {ProcessKind::variable_population}, "variable_population_row");
  if (graph.kind() != StateSpaceKind::variable_population) {
    throw std::invalid_argument("variable population rows need a variable population state space");
  }
  const Counts& a = graph.counts(state);
  const int M = a[0] + a[1];
  const int N = model.population;
  if (M < 1 || M > N) {
    throw std::out_of_range("population size " + std::to_string(M) + " outside [1, " + std::to_string(N) + "]");
  }
  const PopulationState current(a);
  const Distribution x = current.distribution();
  const double birth = model.birth(M, N);
  TransitionRow row{state, {}};
  double self = 0.0;
  if (birth > 0.0) {
    if (M < N) {
      const Eigen::VectorXd p = model.selection(current);
      for (int i = 0; i < 2; ++i) {
        Counts next = a;
        ++next[static_cast<std::size_t>(i)];
        row.entries.push_back({graph.index(next), birth * p[i]});
      }
    } else {
      self += birth;
    }
  }
  if (birth < 1.0) {
    if (M > 1) {
      for (int i = 0; i < 2; ++i) {
        if (a[static_cast<std::size_t>(i)] == 0) continue;
        Counts next = a;
        --next[static_cast<std::size_t>(i)];
        row.entries.push_back({graph.index(next), (1.0 - birth) * x[i]});
      }
    } else {
      self += 1.0 - birth;
    }
  }
  row.entries.push_back({state, self});
  finalize_row(row);
  // drop the zero self-loop and zero-probability births that finalize kept
  std::erase_if(row.entries, [&](const Transition& t) { return t.probability == 0.0 && t.target != state; });
  return row;
}

TransitionRow cycle_graph_row(const ProcessModel& model, const StateGraph& graph, std::size_t state) {
  require_kind(model, {ProcessKind::cycle_graph}, "cycle_graph_row");
  if (graph.kind() != StateSpaceKind::cycle) {
    throw std::invalid_argument("cycle rows need a cycle state space");
  }
  const int N = graph.population();
  if (N > model.cycle_cap) {
    throw BudgetExceeded("cycle of " + std::to_string(N) + " vertices exceeds the cap of " +
                             std::to_string(model.cycle_cap),
                         std::size_t{1} << N);
  }
  const Counts& config = graph.label(state);
  const PopulationState counts(graph.counts(state));
  const Distribution x = counts.distribution();
  const Eigen::VectorXd phibar = normalized_incentive(model.incentive, x, N);
  const Eigen::MatrixXd mutation = model.mutation.matrix(x);

  const std::size_t code = state;  // state ids are the configuration codes
  auto bit = [N](int v) { return std::size_t{1} << (N - 1 - v); };
  TransitionRow row{state, {}};
  for (int u = 0; u < N; ++u) {
    const int parent = config[static_cast<std::size_t>(u)];
    const double choose = phibar[parent] / counts[static_cast<std::size_t>(parent)];
    if (choose == 0.0) continue;
    const std::array<int, 2> sides{(u + N - 1) % N, (u + 1) % N};
    for (int child = 0; child < 2; ++child) {
      const double w = choose * mutation(parent, child) * 0.5;
      if (w == 0.0) continue;
      for (int v : sides) {
        const std::size_t target =
            child == 1 ? (code | bit(v)) : (code & ~bit(v));
        row.entries.push_back({target, w});
      }
    }
  }
  finalize_row(row);
  return row;
}

TransitionRow process_row(const ProcessModel& model, const StateGraph& graph, std::size_t state) {
  switch (model.kind) {
    case ProcessKind::incentive:
    case ProcessKind::k_fold: return incentive_row(model, graph, state);
    case ProcessKind::wright_fisher: return wright_fisher_row(model, graph, state);
    case ProcessKind::variable_population: return variable_population_row(model, graph, state);
    case ProcessKind::cycle_graph: return cycle_graph_row(model, graph, state);
  }
  throw std::logic_error("unhandled process kind");
}

namespace {

Kernel build_from_graph(const ProcessModel& model, std::shared_ptr<const StateGraph> graph,
                        const BuildLimits& limits) {
  const std::size_t S = graph->size();
  if (S > limits.max_states) {
    throw BudgetExceeded("state space of " + std::to_string(S) + " states exceeds the limit of " +
                             std::to_string(limits.max_states),
                         S);
  }
  if (model.kind == ProcessKind::wright_fisher && S * S > limits.max_stored_transitions) {
    throw BudgetExceeded("dense Wright-Fisher kernel needs " + std::to_string(S * S) +
                             " transitions; use the lazy operator",
                         S * S);
  }
  std::vector<TransitionRow> rows(S);
  parallel_for(S, limits.threads, [&](std::size_t i) { rows[i] = process_row(model, *graph, i); });
  return Kernel(std::move(graph), std::move(rows));
}

}  // namespace

Kernel build_kernel(const ProcessModel& model, const BuildLimits& limits) {
  return build_from_graph(model, make_state_graph(model), limits);
}

Kernel kfold_kernel(const Kernel& incentive_kernel, int k, const BuildLimits& limits) {
  if (k < 1) throw std::invalid_argument("k-fold process needs k >= 1, got " + std::to_string(k));
  return incentive_kernel.power(k, limits.max_stored_transitions);
}

Kernel kfold_kernel(const ProcessModel& model, const BuildLimits& limits) {
  require_kind(model, {ProcessKind::k_fold}, "kfold_kernel");
  return kfold_kernel(build_kernel(model, limits), model.k, limits);
}

LazyWrightFisher::LazyWrightFisher(const ProcessModel& model, std::shared_ptr<const StateGraph> graph,
                                   int threads)
    : graph_(std::move(graph)), population_(model.population) {
  require_kind(model, {ProcessKind::wright_fisher}, "LazyWrightFisher");
  const std::size_t S = graph_->size();
  log_p_.resize(S);
  log_coefficient_.resize(S);
  parallel_for(S, threads, [&](std::size_t a) {
    const Eigen::VectorXd p = model.selection(graph_->state(a));
    auto& lp = log_p_[a];
    lp.resize(static_cast<std::size_t>(p.size()));
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      lp[static_cast<std::size_t>(i)] = p[i] > 0.0 ? std::log(p[i]) : -std::numeric_limits<double>::infinity();
    }
    double c = log_factorial(population_);
    for (int b : graph_->counts(a)) c -= log_factorial(b);
    log_coefficient_[a] = c;
  });
}

double LazyWrightFisher::probability(std::size_t from, std::size_t to) const {
  const Counts& b = graph_->counts(to);
  double lw = log_coefficient_[to];
  for (std::size_t i = 0; i < b.size(); ++i) lw += term_log(b[i], log_p_[from][i]);
  return std::exp(lw);
}

void LazyWrightFisher::propagate(std::span<const double> x, std::span<double> y, int threads) const {
  const long S = static_cast<long>(size());
#pragma omp parallel for schedule(static) num_threads(std::max(1, threads)) if (threads > 1)
  for (long b = 0; b < S; ++b) {
    double acc = 0.0;
    for (std::size_t a = 0; a < static_cast<std::size_t>(S); ++a) {
      if (x[a] != 0.0) acc += x[a] * probability(a, static_cast<std::size_t>(b));
    }
    y[static_cast<std::size_t>(b)] = acc;
  }
}

ChainOperator build_operator(const ProcessModel& model, const BuildLimits& limits) {
  auto graph = make_state_graph(model);
  const std::size_t S = graph->size();
  if (model.kind == ProcessKind::wright_fisher && S * S > limits.max_stored_transitions) {
    if (S > limits.max_states) {
      throw BudgetExceeded("state space of " + std::to_string(S) + " states exceeds the limit", S);
    }
    return {graph, std::make_shared<LazyWrightFisher>(model, graph, limits.threads), nullptr};
  }
  auto base = std::make_shared<const Kernel>(build_from_graph(model, graph, limits));
  if (model.kind != ProcessKind::k_fold || model.k == 1) return {graph, base, base};
  if (S <= kMaxMaterializedPowerStates) {
    try {
      auto powered = std::make_shared<const Kernel>(kfold_kernel(*base, model.k, limits));
      return {graph, powered, powered};
    } catch (const BudgetExceeded&) {
      // fall through to repeated application
    }
  }
  return {graph, std::make_shared<RepeatedOperator>(base, model.k), nullptr};
}

RotationClasses cycle_rotation_classes(const StateGraph& graph) {
  if (graph.kind() != StateSpaceKind::cycle) throw std::invalid_argument("rotation classes need a cycle");
  const int N = graph.population();
  const std::size_t S = graph.size();
  const std::size_t mask = (std::size_t{1} << N) - 1;
  RotationClasses out;
  out.class_of.assign(S, 0);
  std::vector<std::size_t> class_of_canonical(S, S);
  for (std::size_t code = 0; code < S; ++code) {
    std::size_t best = code;
    std::size_t r = code;
    for (int s = 1; s < N; ++s) {
      r = ((r << 1) | (r >> (N - 1))) & mask;
      best = std::min(best, r);
    }
    if (class_of_canonical[best] == S) {
      class_of_canonical[best] = out.representative.size();
      out.representative.push_back(best);
      out.members.push_back(0);
    }
    out.class_of[code] = class_of_canonical[best];
    ++out.members[out.class_of[code]];
  }
  return out;
}

int cycle_arc_count(const Counts& configuration) {
  const std::size_t N = configuration.size();
  int changes = 0;
  for (std::size_t v = 0; v < N; ++v) {
    if (configuration[v] != configuration[(v + 1) % N]) ++changes;
  }
  return changes == 0 ? 1 : changes;
}

}  // namespace stationary_lab
