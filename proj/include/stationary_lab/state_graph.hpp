#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "stationary_lab/statespace.hpp"

namespace stationary_lab {

enum class StateSpaceKind { simplex, variable_population, cycle };

/// States of a chain together with the lattice adjacency used for extremum detection.
///
/// simplex: the fixed-N lattice, adjacency by moves i_{alpha,beta}.
/// variable_population: two types with 1 <= a_1 + a_2 <= N; adjacency is one birth, one
///   death, or one replacement.
/// cycle: binary vertex configurations of a cycle of N vertices; adjacency is a single
///   vertex changing type. Labels hold the vertex types, counts the type totals.
class StateGraph {
 public:
  static std::shared_ptr<const StateGraph> simplex(int n, int N);
  static std::shared_ptr<const StateGraph> variable_population(int N);
  static std::shared_ptr<const StateGraph> cycle(int N);

  StateSpaceKind kind() const { return kind_; }
  int types() const { return types_; }
  /// N for simplex and cycle, the maximum size for variable populations.
  int population() const { return population_; }
  std::size_t size() const { return labels_.size(); }

  const Counts& label(std::size_t i) const { return labels_[i]; }
  const Counts& counts(std::size_t i) const { return counts_[i]; }
  PopulationState state(std::size_t i) const { return PopulationState(counts_[i]); }
  const std::vector<std::size_t>& neighbors(std::size_t i) const { return neighbors_[i]; }

  bool interior(std::size_t i) const;
  std::optional<std::size_t> find(const Counts& label) const;
  std::size_t index(const Counts& label) const;

  /// "33 67" for count states, "0011" for cycle configurations.
  std::string label_string(std::size_t i) const;

 private:
  StateGraph(StateSpaceKind kind, int types, int population);
  void add(Counts label, Counts counts);
  void finish_lookup();

  StateSpaceKind kind_;
  int types_;
  int population_;
  std::vector<Counts> labels_;
  std::vector<Counts> counts_;
  std::vector<std::vector<std::size_t>> neighbors_;
  std::unordered_map<Counts, std::size_t, CountsHash> lookup_;
};

/// Lattice graph distance, or nullopt when it exceeds max_distance.
std::optional<int> lattice_distance(const StateGraph& graph, std::size_t from, std::size_t to,
                                    int max_distance);

/// States within max_distance of any source (breadth first).
std::vector<int> distances_from(const StateGraph& graph, const std::vector<std::size_t>& sources,
                                int max_distance);

}  // namespace stationary_lab
