#include "stationary_lab/state_graph.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace stationary_lab {

StateGraph::StateGraph(StateSpaceKind kind, int types, int population)
    : kind_(kind), types_(types), population_(population) {}

void StateGraph::add(Counts label, Counts counts) {
  labels_.push_back(std::move(label));
  counts_.push_back(std::move(counts));
}

void StateGraph::finish_lookup() {
  lookup_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) lookup_.emplace(labels_[i], i);
  neighbors_.assign(labels_.size(), {});
}

std::shared_ptr<const StateGraph> StateGraph::simplex(int n, int N) {
  std::shared_ptr<StateGraph> g(new StateGraph(StateSpaceKind::simplex, n, N));
  for (auto& s : enumerate_states(n, N)) g->add(s.counts(), s.counts());
  g->finish_lookup();
  for (std::size_t i = 0; i < g->size(); ++i) {
    for (const auto& [move, next] : stationary_lab::neighbors(g->state(i))) {
      g->neighbors_[i].push_back(g->index(next.counts()));
    }
    std::sort(g->neighbors_[i].begin(), g->neighbors_[i].end());
  }
  return g;
}

std::shared_ptr<const StateGraph> StateGraph::variable_population(int N) {
  if (N < 2) throw std::invalid_argument("variable population needs a maximum size of at least 2");
  std::shared_ptr<StateGraph> g(new StateGraph(StateSpaceKind::variable_population, 2, N));
  for (int total = 1; total <= N; ++total) {
    for (int a1 = total; a1 >= 0; --a1) g->add({a1, total - a1}, {a1, total - a1});
  }
  g->finish_lookup();
  static constexpr int kSteps[6][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}};
  for (std::size_t i = 0; i < g->size(); ++i) {
    const Counts& c = g->counts_[i];
    for (const auto& step : kSteps) {
      if (auto j = g->find({c[0] + step[0], c[1] + step[1]})) g->neighbors_[i].push_back(*j);
    }
    std::sort(g->neighbors_[i].begin(), g->neighbors_[i].end());
  }
  return g;
}

std::shared_ptr<const StateGraph> StateGraph::cycle(int N) {
  if (N < 2) throw std::invalid_argument("a cycle needs at least 2 vertices");
  if (N > 24) throw std::invalid_argument("cycle configurations limited to 24 vertices");
  std::shared_ptr<StateGraph> g(new StateGraph(StateSpaceKind::cycle, 2, N));
  const std::size_t total = std::size_t{1} << N;
  for (std::size_t code = 0; code < total; ++code) {
    Counts label(static_cast<std::size_t>(N));
    int ones = 0;
    for (int v = 0; v < N; ++v) {
      label[static_cast<std::size_t>(v)] = static_cast<int>((code >> (N - 1 - v)) & 1u);
      ones += label[static_cast<std::size_t>(v)];
    }
    g->add(std::move(label), {N - ones, ones});
  }
  g->finish_lookup();
  for (std::size_t code = 0; code < total; ++code) {
    for (int v = 0; v < N; ++v) g->neighbors_[code].push_back(code ^ (std::size_t{1} << v));
    std::sort(g->neighbors_[code].begin(), g->neighbors_[code].end());
  }
  return g;
}

bool StateGraph::interior(std::size_t i) const {
  return std::all_of(counts_[i].begin(), counts_[i].end(), [](int c) { return c > 0; });
}

std::optional<std::size_t> StateGraph::find(const Counts& label) const {
  auto it = lookup_.find(label);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t StateGraph::index(const Counts& label) const {
  if (auto i = find(label)) return *i;
  throw std::out_of_range("label is not a state of this chain");
}

std::string StateGraph::label_string(std::size_t i) const {
  std::string out;
  if (kind_ == StateSpaceKind::cycle) {
    for (int t : labels_[i]) out.push_back(static_cast<char>('0' + t));
    return out;
  }
  for (std::size_t k = 0; k < counts_[i].size(); ++k) {
    if (k) out.push_back(' ');
    out += std::to_string(counts_[i][k]);
  }
  return out;
}

std::vector<int> distances_from(const StateGraph& graph, const std::vector<std::size_t>& sources,
                                int max_distance) {
  std::vector<int> dist(graph.size(), -1);
  std::deque<std::size_t> queue;
  for (std::size_t s : sources) {
    if (dist[s] < 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    if (dist[u] >= max_distance) continue;
    for (std::size_t v : graph.neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

std::optional<int> lattice_distance(const StateGraph& graph, std::size_t from, std::size_t to,
                                    int max_distance) {
  const int d = distances_from(graph, {from}, max_distance)[to];
  if (d < 0) return std::nullopt;
  return d;
}

}  // namespace stationary_lab
