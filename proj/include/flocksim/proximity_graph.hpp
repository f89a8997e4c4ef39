#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "flocksim/geometry.hpp"

namespace flocksim {

/// Hysteresis thresholds: links form below R - eps2 and break at R.
struct GraphParams {
  double R = 8.0;
  double eps1 = 1.0;
  double eps2 = 3.0;

  /// eps2 in (0, R), eps1 in (0, R - eps2). Throws std::invalid_argument.
  void validate() const;
  double add_threshold() const { return R - eps2; }
};

/// Unordered pair stored with first < second.
using Edge = std::pair<std::size_t, std::size_t>;

struct SwitchEvent {
  double t = 0.0;
  std::vector<Edge> added;
  std::vector<Edge> removed;
};

/// Path-compressed, union-by-rank disjoint sets.
class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n);
  std::size_t find(std::size_t x);
  bool unite(std::size_t x, std::size_t y);
  std::size_t components() const { return components_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned char> rank_;
  std::size_t components_;
};

/// Undirected communication graph G(t). Neighbor lists are kept sorted so that
/// every sum over N_i runs in the same order regardless of update history.
class ProximityGraph {
 public:
  ProximityGraph() = default;
  /// Graph on n nodes with the given edge list (no switch log entry).
  ProximityGraph(std::size_t n, std::span<const Edge> edges);

  /// E(0): eps1 < |q_i - q_j| < R - eps2. Throws CollisionError on coincident positions.
  static ProximityGraph initial(std::span<const Vec2> positions, const GraphParams& params);

  /// Applies the add/keep/drop rules against E(t-) and logs any change at time t.
  /// Returns the event (empty added/removed when nothing changed).
  SwitchEvent update(std::span<const Vec2> positions, double t, const GraphParams& params);

  std::size_t size() const { return neighbors_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  bool has_edge(std::size_t i, std::size_t j) const { return adjacency_[i * size() + j] != 0; }
  std::span<const std::size_t> neighbors(std::size_t i) const { return neighbors_[i]; }
  std::vector<Edge> edges() const;
  bool is_connected() const;

  const std::vector<SwitchEvent>& switch_log() const { return switch_log_; }

  void add_edge(std::size_t i, std::size_t j);
  void remove_edge(std::size_t i, std::size_t j);

 private:
  void rebuild_neighbors();

  std::vector<unsigned char> adjacency_;
  std::vector<std::vector<std::size_t>> neighbors_;
  std::size_t edge_count_ = 0;
  std::vector<SwitchEvent> switch_log_;
};

}  // namespace flocksim
