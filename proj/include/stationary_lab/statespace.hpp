#pragma once

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace stationary_lab {

using Counts = std::vector<int>;
using Distribution = Eigen::VectorXd;

/// Integer count vector over n >= 2 types with a positive total.
class PopulationState {
 public:
  PopulationState() = default;
  explicit PopulationState(Counts counts);

  const Counts& counts() const { return counts_; }
  int types() const { return static_cast<int>(counts_.size()); }
  int size() const { return total_; }
  int operator[](std::size_t i) const { return counts_[i]; }

  /// counts / size, on the probability simplex.
  Distribution distribution() const;

  bool operator==(const PopulationState& other) const = default;

 private:
  Counts counts_;
  int total_ = 0;
};

/// Move i_{alpha,beta}: one individual of type beta replaced by one of type alpha.
/// alpha == beta is the identity move.
struct AdjacencyMove {
  int alpha = 0;
  int beta = 0;

  bool is_identity() const { return alpha == beta; }
  bool operator==(const AdjacencyMove&) const = default;
};

/// Applies a move, or returns nullopt when the result would have a negative count.
std::optional<PopulationState> apply_move(const PopulationState& state, AdjacencyMove move);

/// All states of n types summing to N, descending-lexicographic on counts.
std::vector<PopulationState> enumerate_states(int n, int N);

/// Every feasible a + i_{alpha,beta} with alpha != beta, ordered by (alpha, beta).
std::vector<std::pair<AdjacencyMove, PopulationState>> neighbors(const PopulationState& state);

bool is_boundary(const PopulationState& state);

/// C(N + n - 1, n - 1), the number of lattice states.
std::size_t simplex_size(int n, int N);

struct CountsHash {
  std::size_t operator()(const Counts& counts) const noexcept;
};

/// Dense bijection between the simplex lattice and 0..S-1.
class StateIndex {
 public:
  StateIndex(int n, int N);

  int types() const { return types_; }
  int population() const { return population_; }
  std::size_t size() const { return states_.size(); }

  const PopulationState& state_of(std::size_t k) const { return states_.at(k); }
  const std::vector<PopulationState>& states() const { return states_; }

  std::optional<std::size_t> find(const Counts& counts) const;
  /// Throws std::out_of_range for counts outside the lattice.
  std::size_t index(const Counts& counts) const;

 private:
  int types_;
  int population_;
  std::vector<PopulationState> states_;
  std::unordered_map<Counts, std::size_t, CountsHash> lookup_;
};

}  // namespace stationary_lab
