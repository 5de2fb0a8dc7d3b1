#include "paradox/matching.hpp"

#include <deque>
#include <limits>

namespace paradox {

namespace {

constexpr int kInf = std::numeric_limits<int>::max();

}  // namespace

Matching hopcroft_karp(const BipartiteGraph& adj) {
  const int n = adj.left_count();
  Matching m;
  m.left_to_right.assign(static_cast<std::size_t>(n), -1);
  m.right_to_left.assign(static_cast<std::size_t>(adj.right_count()), -1);
  std::vector<int> dist(static_cast<std::size_t>(n));
  std::vector<std::size_t> it(static_cast<std::size_t>(n));
  std::vector<int> queue;
  std::vector<int> stack;
  queue.reserve(static_cast<std::size_t>(n));

  auto bfs = [&]() {
    queue.clear();
    bool found = false;
    for (int u = 0; u < n; ++u) {
      if (m.left_to_right[u] < 0) {
        dist[u] = 0;
        queue.push_back(u);
      } else {
        dist[u] = kInf;
      }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int u = queue[head];
      for (int v : adj.neighbors(u)) {
        const int w = m.right_to_left[v];
        if (w < 0) {
          found = true;
        } else if (dist[w] == kInf) {
          dist[w] = dist[u] + 1;
          queue.push_back(w);
        }
      }
    }
    return found;
  };

  // Iterative layered DFS to stay safe on long augmenting paths.
  auto augment = [&](int root) {
    stack.assign(1, root);
    while (!stack.empty()) {
      const int u = stack.back();
      const auto next = adj.neighbors(u);
      bool advanced = false;
      while (it[u] < next.size()) {
        const int v = next[it[u]];
        const int w = m.right_to_left[v];
        if (w < 0) {
          // Flip the path root ... u -> v.
          int right = v;
          for (auto k = stack.size(); k-- > 0;) {
            const int left = stack[k];
            const int prev = m.left_to_right[left];
            m.left_to_right[left] = right;
            m.right_to_left[right] = left;
            right = prev;
          }
          return true;
        }
        if (dist[w] == dist[u] + 1) {
          stack.push_back(w);
          advanced = true;
          break;
        }
        ++it[u];
      }
      if (!advanced) {
        dist[u] = kInf;
        stack.pop_back();
        if (!stack.empty()) ++it[stack.back()];
      }
    }
    return false;
  };

  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (int u = 0; u < n; ++u) {
      if (m.left_to_right[u] < 0 && augment(u)) ++m.size;
    }
  }
  return m;
}

std::vector<bool> alternating_reachable_left(const BipartiteGraph& adj, const Matching& m) {
  const auto n = static_cast<std::size_t>(adj.left_count());
  std::vector<bool> left(n, false);
  std::vector<bool> right(m.right_to_left.size(), false);
  std::deque<int> queue;
  for (std::size_t u = 0; u < n; ++u) {
    if (m.left_to_right[u] < 0) {
      left[u] = true;
      queue.push_back(static_cast<int>(u));
    }
  }
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : adj.neighbors(u)) {
      if (right[v]) continue;
      right[v] = true;
      const int w = m.right_to_left[v];
      if (w >= 0 && !left[w]) {
        left[w] = true;
        queue.push_back(w);
      }
    }
  }
  return left;
}

MaxFlow::MaxFlow(int nodes) : graph_(static_cast<std::size_t>(nodes)) {}

int MaxFlow::add_edge(int from, int to, std::int64_t cap) {
  const int id = static_cast<int>(edges_.size());
  edges_.push_back({to, cap, cap});
  graph_[from].push_back(id);
  edges_.push_back({from, 0, 0});
  graph_[to].push_back(id + 1);
  return id;
}

bool MaxFlow::bfs(int s, int t) {
  level_.assign(graph_.size(), -1);
  std::deque<int> queue{s};
  level_[s] = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int id : graph_[v]) {
      const auto& e = edges_[id];
      if (e.cap > 0 && level_[e.to] < 0) {
        level_[e.to] = level_[v] + 1;
        queue.push_back(e.to);
      }
    }
  }
  return level_[t] >= 0;
}

std::int64_t MaxFlow::dfs(int v, int t, std::int64_t pushed) {
  if (v == t) return pushed;
  for (auto& i = next_[v]; i < graph_[v].size(); ++i) {
    const int id = graph_[v][i];
    auto& e = edges_[id];
    if (e.cap <= 0 || level_[e.to] != level_[v] + 1) continue;
    const std::int64_t got = dfs(e.to, t, std::min(pushed, e.cap));
    if (got > 0) {
      e.cap -= got;
      edges_[id ^ 1].cap += got;
      return got;
    }
  }
  return 0;
}

std::int64_t MaxFlow::run(int source, int sink) {
  std::int64_t total = 0;
  while (bfs(source, sink)) {
    next_.assign(graph_.size(), 0);
    while (std::int64_t f = dfs(source, sink, std::numeric_limits<std::int64_t>::max())) total += f;
  }
  return total;
}

std::int64_t MaxFlow::flow_on(int edge) const { return edges_[edge].original - edges_[edge].cap; }

std::vector<bool> MaxFlow::residual_reachable(int source) const {
  std::vector<bool> seen(graph_.size(), false);
  std::deque<int> queue{source};
  seen[source] = true;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int id : graph_[v]) {
      const auto& e = edges_[id];
      if (e.cap > 0 && !seen[e.to]) {
        seen[e.to] = true;
        queue.push_back(e.to);
      }
    }
  }
  return seen;
}

}  // namespace paradox
