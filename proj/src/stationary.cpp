#include "stationary_lab/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace stationary_lab {

namespace {

double l1_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

void normalize(std::span<double> x) {
  const double total = std::accumulate(x.begin(), x.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw std::domain_error("iterate lost all probability mass");
  }
  for (double& v : x) v /= total;
}

}  // namespace

std::string to_string(SolveMethod method) {
  return method == SolveMethod::exact_product ? "exact-product" : "power-iteration";
}

std::string to_string(ExtremumClass c) {
  switch (c) {
    case ExtremumClass::local_max: return "local-max";
    case ExtremumClass::local_min: return "local-min";
    case ExtremumClass::neither: return "neither";
  }
  return "neither";
}

StationaryResult power_iteration(const TransitionOperator& op, const PowerIterationOptions& options) {
  const std::size_t S = op.size();
  if (S == 0) throw std::invalid_argument("power iteration on an empty chain");
  if (!(options.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  std::vector<double> x;
  if (options.initial.empty()) {
    x.assign(S, 1.0 / static_cast<double>(S));
  } else {
    if (options.initial.size() != S) throw std::invalid_argument("initial vector has the wrong length");
    for (double v : options.initial) {
      if (!(v >= 0.0)) throw std::invalid_argument("initial vector must be non-negative");
    }
    x = options.initial;
    normalize(x);
  }
  const double lazy = options.laziness;
  if (!(lazy >= 0.0 && lazy < 1.0)) throw std::invalid_argument("laziness must lie in [0, 1)");
  std::vector<double> y(S);
  double diff = std::numeric_limits<double>::infinity();
  std::size_t it = 0;
  while (it < options.max_iterations) {
    op.propagate(x, y, options.threads);
    ++it;
    // the unnormalized step is the residual of x itself
    diff = l1_distance(x, y);
    if (diff <= options.tolerance) return {std::move(x), SolveMethod::power_iteration, diff, it};
    if (lazy > 0.0) {
      for (std::size_t i = 0; i < S; ++i) y[i] = lazy * x[i] + (1.0 - lazy) * y[i];
    }
    normalize(y);
    x.swap(y);
  }
  throw ConvergenceError("power iteration did not converge after " + std::to_string(it) +
                             " iterations (residual " + std::to_string(diff) + ")",
                         diff, it);
}

StationaryResult exact_stationary(const Kernel& kernel) {
  const std::size_t S = kernel.size();
  for (std::size_t i = 0; i < S; ++i) {
    for (std::size_t t : kernel.row_targets(i)) {
      if (t + 1 < i || t > i + 1) {
        throw std::domain_error("exact product formula needs a birth-death line; state " + std::to_string(i) +
                                " jumps to " + std::to_string(t));
      }
    }
  }
  std::vector<double> log_s(S, 0.0);
  for (std::size_t j = 0; j + 1 < S; ++j) {
    const double up = kernel.probability(j, j + 1);
    const double down = kernel.probability(j + 1, j);
    if (!(up > 0.0) || !(down > 0.0)) {
      throw std::domain_error("zero transition between states " + std::to_string(j) + " and " +
                              std::to_string(j + 1) + "; the product formula needs nonzero neighbours");
    }
    log_s[j + 1] = log_s[j] + std::log(up) - std::log(down);
  }
  const double top = *std::max_element(log_s.begin(), log_s.end());
  double total = 0.0;
  for (double v : log_s) total += std::exp(v - top);
  const double log_norm = top + std::log(total);
  StationaryResult out;
  out.method = SolveMethod::exact_product;
  out.probabilities.resize(S);
  for (std::size_t j = 0; j < S; ++j) out.probabilities[j] = std::exp(log_s[j] - log_norm);
  std::vector<double> next(S);
  kernel.propagate(out.probabilities, next, 1);
  out.residual = l1_distance(out.probabilities, next);
  return out;
}

double global_balance_residual(const TransitionOperator& op, std::span<const double> s, int threads) {
  std::vector<double> next(op.size());
  op.propagate(s, next, threads);
  double worst = 0.0;
  for (std::size_t a = 0; a < next.size(); ++a) worst = std::max(worst, std::abs(s[a] - next[a]));
  return worst;
}

BalanceCheck detailed_balance_check(const Kernel& kernel, std::span<const double> s, double tolerance) {
  BalanceCheck out;
  for (std::size_t a = 0; a < kernel.size(); ++a) {
    const auto targets = kernel.row_targets(a);
    const auto probs = kernel.row_probabilities(a);
    for (std::size_t k = 0; k < targets.size(); ++k) {
      const std::size_t b = targets[k];
      if (b == a) continue;
      const double v = std::abs(s[a] * probs[k] - s[b] * kernel.probability(b, a));
      out.max_violation = std::max(out.max_violation, v);
    }
  }
  out.balanced = out.max_violation <= tolerance;
  return out;
}

std::vector<double> flow_residuals(const TransitionOperator& op, int threads) {
  const std::vector<double> ones(op.size(), 1.0);
  std::vector<double> inflow(op.size());
  op.propagate(ones, inflow, threads);
  for (double& v : inflow) v = std::abs(1.0 - v);
  return inflow;
}

std::vector<StateExtremum> classify_extrema(std::span<const double> values, const StateGraph& graph,
                                            double tie_tolerance, double absolute_tolerance) {
  if (values.size() != graph.size()) throw std::invalid_argument("value count does not match the state graph");
  std::vector<StateExtremum> out(values.size());
  for (std::size_t a = 0; a < values.size(); ++a) {
    const double va = values[a];
    if (std::isnan(va)) continue;
    bool ge_all = true, le_all = true, gt_some = false, lt_some = false;
    int compared = 0;
    for (std::size_t b : graph.neighbors(a)) {
      const double vb = values[b];
      if (std::isnan(vb)) continue;
      ++compared;
      const double slack = std::max(tie_tolerance * std::max(std::abs(va), std::abs(vb)), absolute_tolerance);
      if (std::abs(va - vb) <= slack) continue;
      if (va > vb) {
        gt_some = true;
        le_all = false;
      } else {
        lt_some = true;
        ge_all = false;
      }
    }
    if (compared == 0) continue;
    if (ge_all && gt_some) {
      out[a].kind = ExtremumClass::local_max;
    } else if (le_all && lt_some) {
      out[a].kind = ExtremumClass::local_min;
    } else if (ge_all && le_all) {
      out[a].plateau = true;
    }
  }
  return out;
}

std::vector<std::size_t> ExtremumReport::maxima() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].kind == ExtremumClass::local_max) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> ExtremumReport::minima() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].kind == ExtremumClass::local_min) out.push_back(i);
  }
  return out;
}

ExtremumReport find_extrema(std::span<const double> s, const StateGraph& graph, const TransitionOperator& op,
                            double tie_tolerance, int threads) {
  return {classify_extrema(s, graph, tie_tolerance), flow_residuals(op, threads)};
}

}  // namespace stationary_lab
