#include "flocksim/proximity_graph.hpp"

#include <numeric>
#include <stdexcept>

#include "flocksim/errors.hpp"

namespace flocksim {

void GraphParams::validate() const {
  if (!(eps2 > 0.0 && eps2 < R)) throw std::invalid_argument("graph: eps2 must lie in (0, R)");
  if (!(eps1 > 0.0 && eps1 < R - eps2))
    throw std::invalid_argument("graph: eps1 must lie in (0, R - eps2)");
}

DisjointSet::DisjointSet(std::size_t n) : parent_(n), rank_(n, 0), components_(n) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSet::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool DisjointSet::unite(std::size_t x, std::size_t y) {
  x = find(x);
  y = find(y);
  if (x == y) return false;
  if (rank_[x] < rank_[y]) std::swap(x, y);
  parent_[y] = x;
  if (rank_[x] == rank_[y]) ++rank_[x];
  --components_;
  return true;
}

ProximityGraph::ProximityGraph(std::size_t n, std::span<const Edge> edges)
    : adjacency_(n * n, 0), neighbors_(n) {
  for (const auto& [i, j] : edges) {
    if (i >= n || j >= n) throw std::out_of_range("edge endpoint outside graph");
    if (i == j) throw std::invalid_argument("self-loops are not allowed");
    if (!has_edge(i, j)) {
      adjacency_[i * n + j] = adjacency_[j * n + i] = 1;
      ++edge_count_;
    }
  }
  rebuild_neighbors();
}

ProximityGraph ProximityGraph::initial(std::span<const Vec2> positions, const GraphParams& params) {
  const std::size_t n = positions.size();
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = (positions[i] - positions[j]).norm();
      if (!(d > 0.0)) throw CollisionError("coincident initial positions");
      if (d > params.eps1 && d < params.add_threshold()) edges.emplace_back(i, j);
    }
  }
  return ProximityGraph(n, edges);
}

SwitchEvent ProximityGraph::update(std::span<const Vec2> positions, double t,
                                   const GraphParams& params) {
  const std::size_t n = size();
  if (positions.size() != n) throw std::invalid_argument("update: position count mismatch");
  SwitchEvent event{t, {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = (positions[i] - positions[j]).norm();
      if (has_edge(i, j)) {
        if (!(d < params.R)) event.removed.emplace_back(i, j);
      } else if (d < params.add_threshold()) {
        event.added.emplace_back(i, j);
      }
    }
  }
  if (event.added.empty() && event.removed.empty()) return event;
  for (const auto& [i, j] : event.added) {
    adjacency_[i * n + j] = adjacency_[j * n + i] = 1;
  }
  for (const auto& [i, j] : event.removed) {
    adjacency_[i * n + j] = adjacency_[j * n + i] = 0;
  }
  edge_count_ = edge_count_ + event.added.size() - event.removed.size();
  rebuild_neighbors();
  switch_log_.push_back(event);
  return event;
}

std::vector<Edge> ProximityGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j : neighbors_[i])
      if (j > i) out.emplace_back(i, j);
  return out;
}

bool ProximityGraph::is_connected() const {
  if (size() <= 1) return true;
  DisjointSet sets(size());
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j : neighbors_[i])
      if (j > i) sets.unite(i, j);
  return sets.components() == 1;
}

void ProximityGraph::add_edge(std::size_t i, std::size_t j) {
  if (i == j) throw std::invalid_argument("self-loops are not allowed");
  if (has_edge(i, j)) return;
  adjacency_[i * size() + j] = adjacency_[j * size() + i] = 1;
  ++edge_count_;
  rebuild_neighbors();
}

void ProximityGraph::remove_edge(std::size_t i, std::size_t j) {
  if (!has_edge(i, j)) return;
  adjacency_[i * size() + j] = adjacency_[j * size() + i] = 0;
  --edge_count_;
  rebuild_neighbors();
}

void ProximityGraph::rebuild_neighbors() {
  const std::size_t n = neighbors_.size();
  for (std::size_t i = 0; i < n; ++i) {
    neighbors_[i].clear();
    for (std::size_t j = 0; j < n; ++j)
      if (adjacency_[i * n + j]) neighbors_[i].push_back(j);
  }
}

}  // namespace flocksim
