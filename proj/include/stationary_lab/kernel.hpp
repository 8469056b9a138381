#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "stationary_lab/state_graph.hpp"

namespace stationary_lab {

struct Transition {
  std::size_t target = 0;
  double probability = 0.0;
};

/// One row of a transition kernel: distinct targets, probabilities in [0, 1], summing to 1
/// (self-loop included).
struct TransitionRow {
  std::size_t source = 0;
  std::vector<Transition> entries;

  double total() const;
  /// Probability of moving to target, zero when absent.
  double probability(std::size_t target) const;
};

/// Sorts entries by target, merges duplicates and validates the row invariants.
/// Throws std::domain_error on a probability outside [0, 1] (1e-12 slack) or a bad row sum.
void finalize_row(TransitionRow& row, double sum_tolerance = 1e-12);

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::size_t requested)
      : std::runtime_error(what), requested_(requested) {}
  std::size_t requested() const { return requested_; }

 private:
  std::size_t requested_;
};

/// Left action of a stochastic matrix on distributions.
class TransitionOperator {
 public:
  virtual ~TransitionOperator() = default;
  virtual std::size_t size() const = 0;
  /// y = x T. Each y_b is reduced in a fixed order, so the result does not depend on threads.
  virtual void propagate(std::span<const double> x, std::span<double> y, int threads) const = 0;
};

/// Materialized sparse kernel, stored by rows and by columns.
class Kernel : public TransitionOperator {
 public:
  Kernel(std::shared_ptr<const StateGraph> graph, std::vector<TransitionRow> rows);

  std::size_t size() const override { return row_start_.size() - 1; }
  void propagate(std::span<const double> x, std::span<double> y, int threads) const override;

  const StateGraph& graph() const { return *graph_; }
  std::shared_ptr<const StateGraph> graph_ptr() const { return graph_; }

  TransitionRow row(std::size_t i) const;
  std::span<const std::size_t> row_targets(std::size_t i) const;
  std::span<const double> row_probabilities(std::size_t i) const;
  double probability(std::size_t from, std::size_t to) const;
  std::size_t nonzeros() const { return targets_.size(); }

  /// this * other; both over the same states.
  Kernel multiply(const Kernel& other, std::size_t max_nonzeros) const;
  /// k-th matrix power by repeated squaring; k >= 1.
  Kernel power(int k, std::size_t max_nonzeros) const;

 private:
  std::shared_ptr<const StateGraph> graph_;
  std::vector<std::size_t> row_start_;
  std::vector<std::size_t> targets_;
  std::vector<double> probabilities_;
  std::vector<std::size_t> col_start_;
  std::vector<std::size_t> sources_;
  std::vector<double> col_probabilities_;
};

/// k applications of a base operator per propagate.
class RepeatedOperator : public TransitionOperator {
 public:
  RepeatedOperator(std::shared_ptr<const TransitionOperator> base, int k);
  std::size_t size() const override { return base_->size(); }
  void propagate(std::span<const double> x, std::span<double> y, int threads) const override;

 private:
  std::shared_ptr<const TransitionOperator> base_;
  int k_;
};

/// Runs body(i) for i in [0, count) on up to `threads` OpenMP threads, static schedule.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

/// Threads from STATIONARY_LAB_THREADS, default 1.
int default_thread_count();

}  // namespace stationary_lab
