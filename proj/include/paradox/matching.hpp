#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace paradox {

/// Bipartite adjacency in compressed rows: the neighbors of left vertex u
/// are targets[offsets[u] .. offsets[u+1]).
class BipartiteGraph {
 public:
  explicit BipartiteGraph(int right_count) : right_count_(right_count) {}

  // Starts the next left vertex; subsequent add_edge calls attach to it.
  void add_left() { offsets_.push_back(static_cast<int>(targets_.size())); }
  void add_edge(int right) { targets_.push_back(right); }
  void reserve(std::size_t left, std::size_t edges) {
    offsets_.reserve(left + 1);
    targets_.reserve(edges);
  }

  int left_count() const { return static_cast<int>(offsets_.size()); }
  int right_count() const { return right_count_; }
  std::span<const int> neighbors(int u) const {
    const auto begin = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(u)]);
    const auto end = static_cast<std::size_t>(u) + 1 < offsets_.size()
                         ? static_cast<std::size_t>(offsets_[static_cast<std::size_t>(u) + 1])
                         : targets_.size();
    return std::span<const int>(targets_).subspan(begin, end - begin);
  }

 private:
  int right_count_;
  std::vector<int> offsets_;
  std::vector<int> targets_;
};

// Maximum bipartite matching on vertices 0..L-1 (left) and 0..R-1 (right).
struct Matching {
  std::vector<int> left_to_right;  // -1 if unmatched
  std::vector<int> right_to_left;  // -1 if unmatched
  int size = 0;
};

/// Hopcroft–Karp. Adjacency lists are scanned in the given order, so the
/// result is a deterministic function of the input.
Matching hopcroft_karp(const BipartiteGraph& adj);

// Left vertices reachable by alternating paths from unmatched left
// vertices. When the matching is maximum and not left-perfect, this set Z
// has |N(Z)| < |Z| (König / Hall).
std::vector<bool> alternating_reachable_left(const BipartiteGraph& adj, const Matching& m);

/// Dinic max-flow with integer capacities.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes);

  int add_edge(int from, int to, std::int64_t cap);
  std::int64_t run(int source, int sink);

  std::int64_t flow_on(int edge) const;
  // Nodes reachable from source in the residual graph after run().
  std::vector<bool> residual_reachable(int source) const;

 private:
  struct Edge {
    int to;
    std::int64_t cap;
    std::int64_t original;
  };

  bool bfs(int s, int t);
  std::int64_t dfs(int v, int t, std::int64_t pushed);

  std::vector<Edge> edges_;
  std::vector<std::vector<int>> graph_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
};

}  // namespace paradox
