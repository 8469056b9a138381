#include "stationary_lab/statespace.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace stationary_lab {

PopulationState::PopulationState(Counts counts) : counts_(std::move(counts)) {
  if (counts_.size() < 2) {
    throw std::invalid_argument("population state needs at least 2 types");
  }
  long total = 0;
  for (int c : counts_) {
    if (c < 0) throw std::invalid_argument("population state has a negative count");
    total += c;
  }
  if (total < 1) throw std::invalid_argument("population state must have a positive total");
  total_ = static_cast<int>(total);
}

Distribution PopulationState::distribution() const {
  Distribution x(types());
  for (int i = 0; i < types(); ++i) {
    x[i] = static_cast<double>(counts_[i]) / total_;
  }
  return x;
}

std::optional<PopulationState> apply_move(const PopulationState& state, AdjacencyMove move) {
  if (move.alpha < 0 || move.beta < 0 || move.alpha >= state.types() ||
      move.beta >= state.types()) {
    throw std::out_of_range("move references a type outside the state");
  }
  if (move.is_identity()) return state;
  if (state[move.beta] == 0) return std::nullopt;
  Counts next = state.counts();
  ++next[move.alpha];
  --next[move.beta];
  return PopulationState(std::move(next));
}

namespace {

void enumerate_into(int type, int remaining, Counts& prefix, std::vector<PopulationState>& out) {
  const int n = static_cast<int>(prefix.size());
  if (type == n - 1) {
    prefix[type] = remaining;
    out.emplace_back(prefix);
    return;
  }
  for (int c = remaining; c >= 0; --c) {
    prefix[type] = c;
    enumerate_into(type + 1, remaining - c, prefix, out);
  }
}

}  // namespace

std::size_t simplex_size(int n, int N) {
  if (n < 2) throw std::invalid_argument("need at least 2 types, got " + std::to_string(n));
  if (N < 1) throw std::invalid_argument("population size must be >= 1, got " + std::to_string(N));
  // C(N + n - 1, n - 1) by the multiplicative formula; every partial product is integral.
  std::size_t result = 1;
  for (int k = 1; k <= n - 1; ++k) {
    result = result * static_cast<std::size_t>(N + k) / static_cast<std::size_t>(k);
  }
  return result;
}

std::vector<PopulationState> enumerate_states(int n, int N) {
  std::vector<PopulationState> out;
  out.reserve(simplex_size(n, N));
  Counts prefix(static_cast<std::size_t>(n), 0);
  enumerate_into(0, N, prefix, out);
  return out;
}

std::vector<std::pair<AdjacencyMove, PopulationState>> neighbors(const PopulationState& state) {
  std::vector<std::pair<AdjacencyMove, PopulationState>> out;
  const int n = state.types();
  for (int alpha = 0; alpha < n; ++alpha) {
    for (int beta = 0; beta < n; ++beta) {
      if (alpha == beta) continue;
      AdjacencyMove move{alpha, beta};
      if (auto next = apply_move(state, move)) out.emplace_back(move, std::move(*next));
    }
  }
  return out;
}

bool is_boundary(const PopulationState& state) {
  for (int c : state.counts()) {
    if (c == 0) return true;
  }
  return false;
}

std::size_t CountsHash::operator()(const Counts& counts) const noexcept {
  // FNV-1a over the raw counts.
  std::size_t h = 1469598103934665603ull;
  for (int c : counts) {
    h ^= static_cast<std::size_t>(static_cast<unsigned>(c));
    h *= 1099511628211ull;
  }
  return h;
}

StateIndex::StateIndex(int n, int N)
    : types_(n), population_(N), states_(enumerate_states(n, N)) {
  lookup_.reserve(states_.size());
  for (std::size_t k = 0; k < states_.size(); ++k) {
    lookup_.emplace(states_[k].counts(), k);
  }
}

std::optional<std::size_t> StateIndex::find(const Counts& counts) const {
  auto it = lookup_.find(counts);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t StateIndex::index(const Counts& counts) const {
  if (auto k = find(counts)) return *k;
  throw std::out_of_range("counts are not a state of this lattice");
}

}  // namespace stationary_lab
