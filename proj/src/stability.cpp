#include "stationary_lab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stationary_lab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kExactFixedPoint = 1e-12;
constexpr double kDivergenceZero = kExactFixedPoint * kExactFixedPoint;  // rounding level of a squared residual

void require_same_shape(const Distribution& x, const Distribution& y) {
  if (x.size() != y.size() || x.size() == 0) throw std::invalid_argument("distributions must have the same length");
}

bool is_line_chain(const ProcessModel& model) {
  return model.kind == ProcessKind::incentive && model.types == 2;
}

// sum_b T_a^b b over sum_b T_a^b |b|
Distribution expected_from_row(const TransitionRow& row, const StateGraph& graph) {
  Distribution counts = Distribution::Zero(graph.types());
  double total = 0.0;
  for (const auto& t : row.entries) {
    const Counts& b = graph.counts(t.target);
    for (int i = 0; i < graph.types(); ++i) {
      counts[i] += t.probability * b[static_cast<std::size_t>(i)];
      total += t.probability * b[static_cast<std::size_t>(i)];
    }
  }
  return counts / total;
}

double l1(const Distribution& x, const Distribution& y) { return (x - y).cwiseAbs().sum(); }

std::vector<std::size_t> minima_of(const std::vector<double>& values, const StateGraph& graph, double tie) {
  std::vector<std::size_t> out;
  const auto classes = classify_extrema(values, graph, tie, kDivergenceZero);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i].kind == ExtremumClass::local_min) out.push_back(i);
  }
  return out;
}

}  // namespace

DivergenceParam::DivergenceParam(double d) : d_(d) {
  if (!(d >= 0.0 && d <= 1.0)) throw std::invalid_argument("divergence parameter d must lie in [0, 1]");
}

std::optional<double> divergence(DivergenceParam param, const Distribution& x, const Distribution& y) {
  require_same_shape(x, y);
  const double d = param.value();
  if (d == 0.0) return 0.5 * (x - y).squaredNorm();
  if (d == 1.0) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::nullopt;
      total += x[i] * std::log(x[i] / y[i]) - x[i] + y[i];
    }
    return std::max(0.0, total);
  }
  const double e = 2.0 - d;
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = std::max(0.0, x[i]);
    const double yi = std::max(0.0, y[i]);
    total += (std::pow(xi, e) - std::pow(yi, e)) / e - std::pow(yi, 1.0 - d) * (xi - yi);
  }
  return std::max(0.0, total / (1.0 - d));
}

std::optional<double> divergence(double d, const Distribution& x, const Distribution& y) {
  return divergence(DivergenceParam(d), x, y);
}

std::optional<double> chi_squared(const Distribution& x, const Distribution& y) {
  require_same_shape(x, y);
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) return std::nullopt;
    total += (x[i] - y[i]) * (x[i] - y[i]) / x[i];
  }
  return total;
}

Distribution state_distribution(const StateGraph& graph, std::size_t state) {
  return PopulationState(graph.counts(state)).distribution();
}

Distribution expected_incentive_point(const ProcessModel& model, const Distribution& x) {
  const double N = model.population;
  return ((N - 1.0) / N) * x + model.selection(x, model.population) / N;
}

Distribution expected_state(const ProcessModel& model, const StateGraph& graph, std::size_t state) {
  switch (model.kind) {
    case ProcessKind::incentive: return expected_incentive_point(model, state_distribution(graph, state));
    case ProcessKind::wright_fisher: return model.selection(graph.state(state));
    case ProcessKind::k_fold: {
      Distribution x = state_distribution(graph, state);
      for (int step = 0; step < model.k; ++step) x = expected_incentive_point(model, x);
      return x;
    }
    case ProcessKind::variable_population:
    case ProcessKind::cycle_graph: return expected_from_row(process_row(model, graph, state), graph);
  }
  throw std::logic_error("unhandled process kind");
}

Distribution expected_state_by_moves(const ProcessModel& model, const StateGraph& graph, std::size_t state) {
  if (model.kind != ProcessKind::incentive && model.kind != ProcessKind::k_fold) {
    throw std::invalid_argument("move form of E needs an incentive model");
  }
  const TransitionRow row = incentive_row(model, graph, state);
  const Counts& a = graph.counts(state);
  Distribution out = state_distribution(graph, state);
  const double N = graph.population();
  for (const auto& t : row.entries) {
    if (t.target == state) continue;
    const Counts& b = graph.counts(t.target);
    for (std::size_t i = 0; i < a.size(); ++i) out[static_cast<Eigen::Index>(i)] += t.probability * (b[i] - a[i]) / N;
  }
  return out;
}

double iss_residual(const ProcessModel& model, const StateGraph& graph, std::size_t state) {
  const PopulationState a = graph.state(state);
  return l1(model.selection(a), a.distribution());
}

std::vector<IssCandidate> iss_candidates(const ProcessModel& model, const StateGraph& graph, double tolerance,
                                         bool refine) {
  const std::size_t S = graph.size();
  std::vector<double> residual(S);
  for (std::size_t i = 0; i < S; ++i) {
    try {
      residual[i] = iss_residual(model, graph, i);
    } catch (const DegenerateIncentive&) {
      residual[i] = kNaN;
    }
  }
  const auto classes = classify_extrema(residual, graph, 0.0);
  std::vector<IssCandidate> out;
  for (std::size_t i = 0; i < S; ++i) {
    if (std::isnan(residual[i])) continue;
    const bool minimum = classes[i].kind == ExtremumClass::local_min && residual[i] < tolerance;
    if (minimum || residual[i] <= kExactFixedPoint) {
      out.push_back({i, state_distribution(graph, i), residual[i], false});
    }
  }
  if (!refine || graph.kind() != StateSpaceKind::simplex || graph.types() != 2) return out;

  const int N = graph.population();
  auto gap = [&](double t) -> std::optional<double> {
    Distribution x(2);
    x << t, 1.0 - t;
    try {
      return model.selection(x, N)[0] - t;
    } catch (const DegenerateIncentive&) {
      return std::nullopt;
    }
  };
  auto record = [&](double t, double g) {
    Distribution x(2);
    x << t, 1.0 - t;
    Counts nearest{static_cast<int>(std::lround(t * N)), 0};
    nearest[1] = N - nearest[0];
    out.push_back({graph.find(nearest), x, 2.0 * std::abs(g), true});
  };
  std::optional<double> prev = gap(0.0);
  if (prev && *prev == 0.0) record(0.0, 0.0);
  for (int i = 1; i <= N; ++i) {
    const double hi = static_cast<double>(i) / N;
    const std::optional<double> cur = gap(hi);
    if (prev && cur && ((*prev < 0.0 && *cur > 0.0) || (*prev > 0.0 && *cur < 0.0))) {
      double lo_t = static_cast<double>(i - 1) / N, hi_t = hi;
      double g_lo = *prev;
      for (int it = 0; it < 200 && hi_t - lo_t > 1e-15; ++it) {
        const double mid = 0.5 * (lo_t + hi_t);
        const double g_mid = *gap(mid);
        if (g_mid == 0.0) {
          lo_t = hi_t = mid;
          break;
        }
        if ((g_mid < 0.0) == (g_lo < 0.0)) {
          lo_t = mid;
          g_lo = g_mid;
        } else {
          hi_t = mid;
        }
      }
      const double root = 0.5 * (lo_t + hi_t);
      record(root, *gap(root));
    }
    if (cur && *cur == 0.0) record(hi, 0.0);
    prev = cur;
  }
  return out;
}

std::string to_string(SolverChoice choice) {
  switch (choice) {
    case SolverChoice::automatic: return "auto";
    case SolverChoice::exact: return "exact";
    case SolverChoice::power: return "power";
  }
  return "auto";
}

SolverChoice solver_choice_from_string(const std::string& name) {
  if (name == "auto") return SolverChoice::automatic;
  if (name == "exact") return SolverChoice::exact;
  if (name == "power") return SolverChoice::power;
  throw std::invalid_argument("unknown solver '" + name + "' (expected auto, exact or power)");
}

StationaryResult solve_stationary(const ProcessModel& model, const ChainOperator& chain, const SolverConfig& config) {
  const bool line = chain.kernel && is_line_chain(model);
  if (config.solver == SolverChoice::exact) {
    if (!line) throw std::invalid_argument("the exact solver needs a two-type incentive process");
    return exact_stationary(*chain.kernel);
  }
  if (config.solver == SolverChoice::automatic && (line || (model.kind == ProcessKind::k_fold && model.types == 2))) {
    try {
      if (line) return exact_stationary(*chain.kernel);
      // T^k shares the stationary distribution of T
      ProcessModel step = model;
      step.kind = ProcessKind::incentive;
      step.k = 1;
      return exact_stationary(build_kernel(step, config.limits));
    } catch (const std::domain_error&) {
      // zero transitions on the path: fall back to iteration
    }
  }
  PowerIterationOptions power = config.power;
  if (model.kind == ProcessKind::variable_population && power.laziness == 0.0) power.laziness = 0.5;  // period 2
  return power_iteration(*chain.op, power);
}

std::vector<std::size_t> StabilityReport::divergence_minima_for(double d) const {
  for (std::size_t k = 0; k < divergence_params.size(); ++k) {
    if (divergence_params[k] == d) return divergence_minima[k];
  }
  throw std::invalid_argument("divergence d = " + std::to_string(d) + " was not computed");
}

ExtremumReport stationary_extrema(const ProcessModel& model, const ChainOperator& chain,
                                  const StationaryResult& stationary, const SolverConfig& config) {
  ExtremumReport out = find_extrema(stationary.probabilities, *chain.graph, *chain.op, config.tie_tolerance,
                                    config.limits.threads);
  if (model.kind == ProcessKind::k_fold && model.k > 1) {
    // one-step incentive flow
    ProcessModel step = model;
    step.kind = ProcessKind::incentive;
    step.k = 1;
    out.flow_residual = flow_residuals(*build_operator(step, config.limits).op, config.limits.threads);
  }
  return out;
}

StabilityReport stability_report(const ProcessModel& model, const SolverConfig& config) {
  const ChainOperator chain = build_operator(model, config.limits);
  StationaryResult stationary = solve_stationary(model, chain, config);
  return stability_report(model, chain, std::move(stationary), config);
}

StabilityReport stability_report(const ProcessModel& model, const ChainOperator& chain, StationaryResult stationary,
                                 const SolverConfig& config) {
  const StateGraph& graph = *chain.graph;
  const std::size_t S = graph.size();
  if (stationary.probabilities.size() != S) throw std::invalid_argument("stationary vector has the wrong length");

  StabilityReport report;
  report.graph = chain.graph;
  report.divergence_params = config.divergences;
  std::vector<DivergenceParam> params;
  for (double d : config.divergences) params.emplace_back(d);

  const ExtremumReport extrema = stationary_extrema(model, chain, stationary, config);
  report.states.resize(S);
  parallel_for(S, config.limits.threads, [&](std::size_t a) {
    StateStability& st = report.states[a];
    const Distribution current = state_distribution(graph, a);
    st.stationary = stationary.probabilities[a];
    st.expected = expected_state(model, graph, a);
    for (const auto& d : params) st.divergence.push_back(divergence(d, st.expected, current));
    st.chi_squared = chi_squared(st.expected, current);
    st.iss_residual = iss_residual(model, graph, a);
    st.extremum = extrema.states[a];
    st.flow_residual = extrema.flow_residual[a];
  });

  report.stationary_maxima = extrema.maxima();
  report.stationary_minima = extrema.minima();
  for (std::size_t k = 0; k < params.size(); ++k) {
    std::vector<double> values(S);
    for (std::size_t a = 0; a < S; ++a) {
      const auto& v = report.states[a].divergence[k];
      values[a] = v ? *v : kNaN;
    }
    report.divergence_minima.push_back(minima_of(values, graph, config.tie_tolerance));
  }

  const double tol = config.iss_tolerance > 0.0 ? config.iss_tolerance : 2.0 * graph.types() / graph.population();
  report.iss = iss_candidates(model, graph, tol, config.refine_iss);

  double lo = kNaN, hi = kNaN;
  for (std::size_t a = 0; a < S; ++a) {
    const auto& st = report.states[a];
    if (!st.chi_squared || !(*st.chi_squared > 0.0)) continue;
    const auto kl = divergence(1.0, st.expected, state_distribution(graph, a));
    if (!kl) continue;
    const double r = *kl / *st.chi_squared;
    lo = std::isnan(lo) ? r : std::min(lo, r);
    hi = std::isnan(hi) ? r : std::max(hi, r);
  }
  report.divergence_chi2_ratio_min = lo;
  report.divergence_chi2_ratio_max = hi;
  report.stationary = std::move(stationary);
  return report;
}

std::string theorem_for(const ProcessModel& model) {
  switch (model.kind) {
    case ProcessKind::incentive: return model.types == 2 ? "theorem1" : "theorem2";
    case ProcessKind::k_fold: return model.types == 2 ? "theorem1" : "theorem3";
    case ProcessKind::wright_fisher: return "theorem4";
    case ProcessKind::variable_population:
    case ProcessKind::cycle_graph: return "extension";
  }
  return "extension";
}

TheoremCheck theorem_check(const ProcessModel& model, const StabilityReport& report,
                           const TheoremCheckOptions& options) {
  if (options.radius < 0) throw std::invalid_argument("theorem check radius must be non-negative");
  const StateGraph& graph = *report.graph;
  TheoremCheck out;
  out.theorem = theorem_for(model);
  const double flow_bound = options.flow_bound > 0.0 ? options.flow_bound : 4.0 / graph.population();

  std::vector<std::vector<int>> reach;  // distance to the nearest D_d minimum, per checked d
  for (double d : options.divergences) reach.push_back(distances_from(graph, report.divergence_minima_for(d), options.radius));

  auto check_minima = [&](std::size_t state) {
    for (std::size_t k = 0; k < options.divergences.size(); ++k) {
      const double d = options.divergences[k];
      if (d == 1.0 && !graph.interior(state)) continue;
      const int dist = reach[k][state];
      if (dist < 0) {
        out.violations.push_back({state, "no local minimum of D_d within the radius", d, -1});
        out.worst_offset = -1;
      } else if (out.worst_offset >= 0) {
        out.worst_offset = std::max(out.worst_offset, dist);
      }
    }
  };

  if (model.kind == ProcessKind::wright_fisher) {
    const auto& s = report.stationary.probabilities;
    const std::size_t top = static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin());
    check_minima(top);
    std::vector<std::size_t> iss;
    for (const auto& c : report.iss) {
      if (c.state) iss.push_back(*c.state);
    }
    const auto iss_reach = distances_from(graph, iss, options.radius);
    if (iss_reach[top] < 0) {
      out.violations.push_back({top, "global maximum is not within the radius of an ISS candidate", 0.0, -1});
      out.worst_offset = -1;
    } else if (out.worst_offset >= 0) {
      out.worst_offset = std::max(out.worst_offset, iss_reach[top]);
    }
  } else {
    std::vector<std::size_t> extrema = report.stationary_maxima;
    extrema.insert(extrema.end(), report.stationary_minima.begin(), report.stationary_minima.end());
    std::sort(extrema.begin(), extrema.end());
    for (std::size_t state : extrema) {
      check_minima(state);
      if (!graph.interior(state)) continue;
      const double flow = report.states[state].flow_residual;
      out.worst_flow_residual = std::max(out.worst_flow_residual, flow);
      if (flow > flow_bound) {
        out.violations.push_back({state, "flow residual " + std::to_string(flow) + " exceeds the bound", 0.0, 0});
      }
    }
  }
  out.pass = out.violations.empty();
  return out;
}

}  // namespace stationary_lab
