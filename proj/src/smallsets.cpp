#include "paradox/smallsets.hpp"

#include <unordered_map>
#include <unordered_set>

#include "paradox/errors.hpp"
#include "paradox/matching.hpp"

namespace paradox {

namespace {

using ElemSet = std::unordered_set<Elem, ElemHash>;

// Adds x_k x_l^-1 x_m for all triples touching the newest index.
void extend_forbidden(const Group& g, const std::vector<Elem>& seq, ElemSet& forbidden) {
  const std::size_t n = seq.size() - 1;
  std::vector<Elem> inv;
  inv.reserve(seq.size());
  for (const auto& x : seq) inv.push_back(g.inv(x));
  for (std::size_t k = 0; k <= n; ++k) {
    for (std::size_t l = 0; l <= n; ++l) {
      const Elem kl = g.mul(seq[k], inv[l]);
      for (std::size_t m = 0; m <= n; ++m) {
        if (k != n && l != n && m != n) continue;
        forbidden.insert(g.mul(kl, seq[m]));
      }
    }
  }
}

}  // namespace

std::vector<Elem> greedy_small_set(const Group& g, int n, std::size_t max_enumerated) {
  if (n < 1) throw Error("greedy small set needs N >= 1");
  std::vector<Elem> seq;
  ElemSet forbidden;
  ShortlexEnumerator en(g);
  while (static_cast<int>(seq.size()) < n) {
    if (en.produced() >= max_enumerated) {
      throw Error("greedy enumeration exceeded " + std::to_string(max_enumerated) + " elements");
    }
    Elem x = en.next().elem;
    if (forbidden.count(x)) continue;
    seq.push_back(std::move(x));
    extend_forbidden(g, seq, forbidden);
  }
  return seq;
}

std::optional<std::size_t> greedy_exclusion_violation(const Group& g, std::span<const Elem> seq) {
  // Direct triple scan per index, independent of the incremental forbidden set.
  for (std::size_t n = 1; n < seq.size(); ++n) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t l = 0; l < n; ++l) {
        const Elem kl = g.mul(seq[k], g.inv(seq[l]));
        for (std::size_t m = 0; m < n; ++m) {
          if (g.mul(kl, seq[m]) == seq[n]) return n;
        }
      }
    }
  }
  return std::nullopt;
}

PairIntersection check_pair_intersections(const Group& g, std::span<const Elem> a, int r) {
  const ElemSet members(a.begin(), a.end());
  PairIntersection best;
  const Window ball = g.ball(r);
  for (const auto& s : ball.elements()) {
    if (g.is_identity(s)) continue;
    std::size_t hits = 0;
    for (const auto& x : members) hits += members.count(g.mul(s, x));
    if (!best.attained_by || hits > best.max_size) {
      best.max_size = hits;
      best.attained_by = s;
    }
  }
  return best;
}

std::optional<Elem> absorbing_check(const SetExpr& a, std::span<const Elem> f, const Window& w) {
  if (f.empty()) throw Error("absorbing check needs a nonempty F");
  const Group& grp = w.group();
  const int budget = w.budget();
  for (const auto& g : w.elements()) {
    bool ok = true;
    for (const auto& t : f) {
      if (!contains(a, grp.mul(t, g), budget)) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  return std::nullopt;
}

std::optional<Elem> absorbing_check_by_intersection(const SetExpr& a, std::span<const Elem> f,
                                                    const Window& w) {
  if (f.empty()) throw Error("absorbing check needs a nonempty F");
  const Group& grp = w.group();
  SetExpr meet = SetExpr::all(grp);
  for (const auto& t : f) meet = SetExpr::intersect(meet, SetExpr::translate(grp.inv(t), a));
  const auto hits = materialize_exact(meet, w);
  if (hits.empty()) return std::nullopt;
  return hits.front();
}

std::optional<PwT> small_check(const SetExpr& a, const SetExpr& b, std::span<const Elem> s,
                               const Window& w) {
  const Group& grp = w.group();
  const int budget = w.budget();
  const auto left = materialize_exact(a, w);
  std::vector<Elem> right;
  std::unordered_map<Elem, int, ElemHash> index;
  std::vector<std::vector<int>> adj(left.size());
  std::vector<std::vector<int>> via(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    for (std::size_t k = 0; k < s.size(); ++k) {
      Elem y = grp.mul(s[k], left[i]);
      auto it = index.find(y);
      if (it == index.end()) {
        int id = -1;
        if (!contains(b, y, budget)) {
          id = static_cast<int>(right.size());
          right.push_back(y);
        }
        it = index.emplace(std::move(y), id).first;
      }
      if (it->second < 0) continue;
      adj[i].push_back(it->second);
      via[i].push_back(static_cast<int>(k));
    }
  }
  BipartiteGraph graph(static_cast<int>(right.size()));
  for (const auto& row : adj) {
    graph.add_left();
    for (int r : row) graph.add_edge(r);
  }
  const Matching m = hopcroft_karp(graph);
  if (m.size != static_cast<int>(left.size())) return std::nullopt;

  std::vector<std::vector<Elem>> by_translator(s.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    for (std::size_t q = 0; q < adj[i].size(); ++q) {
      if (adj[i][q] == m.left_to_right[i]) {
        by_translator[static_cast<std::size_t>(via[i][q])].push_back(left[i]);
        break;
      }
    }
  }
  std::vector<Piece> pieces;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!by_translator[k].empty()) pieces.push_back({SetExpr::finite(grp, by_translator[k]), s[k]});
  }
  return PwT(SetExpr::finite(grp, left), std::move(pieces));
}

}  // namespace paradox
