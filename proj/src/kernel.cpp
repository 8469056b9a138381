#include "stationary_lab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <string>

#include <omp.h>

namespace stationary_lab {

namespace {

constexpr double kProbabilitySlack = 1e-12;

}  // namespace

double TransitionRow::total() const {
  double sum = 0.0;
  for (const auto& e : entries) sum += e.probability;
  return sum;
}

double TransitionRow::probability(std::size_t target) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), target,
                             [](const Transition& e, std::size_t t) { return e.target < t; });
  if (it != entries.end() && it->target == target) return it->probability;
  return 0.0;
}

void finalize_row(TransitionRow& row, double sum_tolerance) {
  auto& e = row.entries;
  std::sort(e.begin(), e.end(), [](const Transition& l, const Transition& r) { return l.target < r.target; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (out > 0 && e[out - 1].target == e[i].target) {
      e[out - 1].probability += e[i].probability;
    } else {
      e[out++] = e[i];
    }
  }
  e.resize(out);
  for (auto& t : e) {
    if (!(t.probability >= -kProbabilitySlack && t.probability <= 1.0 + kProbabilitySlack)) {
      throw std::domain_error("transition probability " + std::to_string(t.probability) +
                              " outside [0, 1] in row " + std::to_string(row.source));
    }
    t.probability = std::clamp(t.probability, 0.0, 1.0);
  }
  const double total = row.total();
  if (std::abs(total - 1.0) > sum_tolerance) {
    throw std::domain_error("row " + std::to_string(row.source) + " sums to " + std::to_string(total));
  }
}

Kernel::Kernel(std::shared_ptr<const StateGraph> graph, std::vector<TransitionRow> rows)
    : graph_(std::move(graph)) {
  const std::size_t n = rows.size();
  if (graph_ && graph_->size() != n) {
    throw std::invalid_argument("kernel has " + std::to_string(n) + " rows but the state graph has " +
                                std::to_string(graph_->size()) + " states");
  }
  row_start_.assign(n + 1, 0);
  std::vector<std::size_t> col_count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].source != i) throw std::invalid_argument("kernel rows must be ordered by source");
    row_start_[i + 1] = row_start_[i] + rows[i].entries.size();
    for (const auto& t : rows[i].entries) {
      if (t.target >= n) throw std::out_of_range("transition target outside the state space");
      ++col_count[t.target];
    }
  }
  targets_.reserve(row_start_[n]);
  probabilities_.reserve(row_start_[n]);
  for (auto& r : rows) {
    for (const auto& t : r.entries) {
      targets_.push_back(t.target);
      probabilities_.push_back(t.probability);
    }
    std::vector<Transition>().swap(r.entries);
  }
  col_start_.assign(n + 1, 0);
  for (std::size_t j = 0; j < n; ++j) col_start_[j + 1] = col_start_[j] + col_count[j];
  sources_.resize(targets_.size());
  col_probabilities_.resize(targets_.size());
  std::vector<std::size_t> fill(col_start_.begin(), col_start_.end() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = row_start_[i]; p < row_start_[i + 1]; ++p) {
      const std::size_t slot = fill[targets_[p]]++;
      sources_[slot] = i;
      col_probabilities_[slot] = probabilities_[p];
    }
  }
}

void Kernel::propagate(std::span<const double> x, std::span<double> y, int threads) const {
  const long n = static_cast<long>(size());
#pragma omp parallel for schedule(static) num_threads(std::max(1, threads)) if (threads > 1)
  for (long j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t p = col_start_[j]; p < col_start_[j + 1]; ++p) {
      acc += x[sources_[p]] * col_probabilities_[p];
    }
    y[static_cast<std::size_t>(j)] = acc;
  }
}

TransitionRow Kernel::row(std::size_t i) const {
  TransitionRow r{i, {}};
  r.entries.reserve(row_start_[i + 1] - row_start_[i]);
  for (std::size_t p = row_start_[i]; p < row_start_[i + 1]; ++p) {
    r.entries.push_back({targets_[p], probabilities_[p]});
  }
  return r;
}

std::span<const std::size_t> Kernel::row_targets(std::size_t i) const {
  return {targets_.data() + row_start_[i], row_start_[i + 1] - row_start_[i]};
}

std::span<const double> Kernel::row_probabilities(std::size_t i) const {
  return {probabilities_.data() + row_start_[i], row_start_[i + 1] - row_start_[i]};
}

double Kernel::probability(std::size_t from, std::size_t to) const {
  auto first = targets_.begin() + static_cast<std::ptrdiff_t>(row_start_[from]);
  auto last = targets_.begin() + static_cast<std::ptrdiff_t>(row_start_[from + 1]);
  auto it = std::lower_bound(first, last, to);
  if (it != last && *it == to) return probabilities_[static_cast<std::size_t>(it - targets_.begin())];
  return 0.0;
}

Kernel Kernel::multiply(const Kernel& other, std::size_t max_nonzeros) const {
  const std::size_t n = size();
  if (other.size() != n) throw std::invalid_argument("kernel sizes differ");
  std::vector<TransitionRow> rows(n);
  std::vector<double> scratch(n, 0.0);
  std::vector<char> used(n, 0);
  std::vector<std::size_t> touched;
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    touched.clear();
    for (std::size_t p = row_start_[i]; p < row_start_[i + 1]; ++p) {
      const std::size_t k = targets_[p];
      const double a = probabilities_[p];
      for (std::size_t q = other.row_start_[k]; q < other.row_start_[k + 1]; ++q) {
        const std::size_t j = other.targets_[q];
        if (!used[j]) {
          used[j] = 1;
          touched.push_back(j);
        }
        scratch[j] += a * other.probabilities_[q];
      }
    }
    std::sort(touched.begin(), touched.end());
    rows[i].source = i;
    rows[i].entries.reserve(touched.size());
    for (std::size_t j : touched) {
      if (scratch[j] > 0.0) rows[i].entries.push_back({j, scratch[j]});
      scratch[j] = 0.0;
      used[j] = 0;
    }
    total += rows[i].entries.size();
    if (total > max_nonzeros) {
      throw BudgetExceeded("kernel product needs more than " + std::to_string(max_nonzeros) +
                               " stored transitions",
                           total);
    }
  }
  return Kernel(graph_, std::move(rows));
}

Kernel Kernel::power(int k, std::size_t max_nonzeros) const {
  if (k < 1) throw std::invalid_argument("kernel power needs k >= 1, got " + std::to_string(k));
  Kernel base = *this;
  std::optional<Kernel> result;
  while (true) {
    if (k & 1) result = result ? result->multiply(base, max_nonzeros) : base;
    k >>= 1;
    if (!k) break;
    base = base.multiply(base, max_nonzeros);
  }
  return *result;
}

RepeatedOperator::RepeatedOperator(std::shared_ptr<const TransitionOperator> base, int k)
    : base_(std::move(base)), k_(k) {
  if (k_ < 1) throw std::invalid_argument("repeated operator needs k >= 1");
}

void RepeatedOperator::propagate(std::span<const double> x, std::span<double> y, int threads) const {
  if (k_ == 1) {
    base_->propagate(x, y, threads);
    return;
  }
  std::vector<double> a(x.begin(), x.end());
  std::vector<double> b(x.size());
  for (int step = 0; step < k_; ++step) {
    base_->propagate(a, b, threads);
    a.swap(b);
  }
  std::copy(a.begin(), a.end(), y.begin());
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  const long n = static_cast<long>(count);
  // The lowest failing index wins so the reported error does not depend on scheduling.
  std::mutex guard;
  long failed_at = n;
  std::exception_ptr failure;
#pragma omp parallel for schedule(static) num_threads(std::max(1, threads)) if (threads > 1)
  for (long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(guard);
      if (i < failed_at) {
        failed_at = i;
        failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
}

int default_thread_count() {
  if (const char* env = std::getenv("STATIONARY_LAB_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) return t;
  }
  return 1;
}

}  // namespace stationary_lab
