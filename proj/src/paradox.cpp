#include "paradox/paradox.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "paradox/errors.hpp"
#include "paradox/matching.hpp"

namespace paradox {

namespace {

std::vector<Elem> distinct(std::span<const Elem> xs) {
  std::unordered_set<Elem, ElemHash> seen;
  std::vector<Elem> out;
  for (const auto& x : xs) {
    if (seen.insert(x).second) out.push_back(x);
  }
  return out;
}

// Bipartite neighborhoods x -> {s·x in target}, shared by the doubling
// matching and the type-order flow.
struct Neighborhoods {
  std::vector<Elem> left;
  std::vector<Elem> right;
  // (right index, translator index) pairs; left vertex i owns
  // pairs[offsets[i] .. offsets[i+1]).
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::size_t> offsets{0};

  std::span<const std::pair<int, int>> edges(std::size_t i) const {
    return std::span<const std::pair<int, int>>(pairs).subspan(offsets[i], offsets[i + 1] - offsets[i]);
  }
};

Neighborhoods build_neighborhoods(const SetExpr& source, const SetExpr& target,
                                  const std::vector<Elem>& s, const Window& w, int slack) {
  const Group& grp = w.group();
  const int budget = w.budget(slack);
  Neighborhoods nb;
  nb.left = materialize_exact(source, w, slack);
  nb.offsets.reserve(nb.left.size() + 1);
  nb.pairs.reserve(nb.left.size() * s.size());
  std::unordered_map<Elem, int, ElemHash> index;  // -1: not in target
  index.reserve(nb.left.size() * s.size());
  for (std::size_t i = 0; i < nb.left.size(); ++i) {
    for (std::size_t k = 0; k < s.size(); ++k) {
      Elem y = grp.mul(s[k], nb.left[i]);
      auto it = index.find(y);
      if (it == index.end()) {
        int id = -1;
        if (contains(target, y, budget)) {
          id = static_cast<int>(nb.right.size());
          nb.right.push_back(y);
        }
        it = index.emplace(std::move(y), id).first;
      }
      if (it->second >= 0) nb.pairs.emplace_back(it->second, static_cast<int>(k));
    }
    nb.offsets.push_back(nb.pairs.size());
  }
  return nb;
}

int translator_for(std::span<const std::pair<int, int>> edges, int right) {
  for (const auto& [r, k] : edges) {
    if (r == right) return k;
  }
  throw InvariantViolation("matched edge not found");
}

}  // namespace

DoublingResult doubling_matching(const SetExpr& a, std::span<const Elem> s_in, const Window& w,
                                 int slack) {
  if (s_in.empty()) throw Error("translator set must be nonempty");
  const auto s = distinct(s_in);
  const Neighborhoods nb = build_neighborhoods(a, a, s, w, slack);
  const std::size_t n = nb.left.size();

  // Two copies of each left vertex with the same neighbors.
  BipartiteGraph adj(static_cast<int>(nb.right.size()));
  adj.reserve(2 * n, 2 * n * s.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (int copy = 0; copy < 2; ++copy) {
      adj.add_left();
      for (const auto& [r, k] : nb.edges(i)) adj.add_edge(r);
    }
  }
  const Matching m = hopcroft_karp(adj);

  if (m.size == static_cast<int>(2 * n)) {
    MatchCert cert{a, s, w, {}};
    cert.assignment.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      int k1 = translator_for(nb.edges(i), m.left_to_right[2 * i]);
      int k2 = translator_for(nb.edges(i), m.left_to_right[2 * i + 1]);
      // Both copies of x share their neighborhood, so the pair can be listed in S order.
      if (k2 < k1) std::swap(k1, k2);
      cert.assignment.push_back({nb.left[i], s[static_cast<std::size_t>(k1)], s[static_cast<std::size_t>(k2)]});
    }
    return cert;
  }

  const auto reach = alternating_reachable_left(adj, m);
  DeficiencyCert cert{a, s, w, {}, {}};
  std::vector<bool> seen(nb.right.size(), false);
  for (std::size_t i = 0; i < n; ++i) {
    if (!reach[2 * i] && !reach[2 * i + 1]) continue;
    cert.violator.push_back(nb.left[i]);
    for (const auto& [r, k] : nb.edges(i)) {
      if (!seen[static_cast<std::size_t>(r)]) {
        seen[static_cast<std::size_t>(r)] = true;
        cert.neighborhood.push_back(nb.right[static_cast<std::size_t>(r)]);
      }
    }
  }
  if (cert.neighborhood.size() >= 2 * cert.violator.size()) {
    throw InvariantViolation("extracted violator does not witness a Hall deficiency");
  }
  return cert;
}

ParadoxWitness witness_from_matching(const MatchCert& c) {
  const Group& grp = c.window.group();
  ParadoxWitness w{c.set, {}, 0};
  for (int family = 0; family < 2; ++family) {
    for (const auto& s : c.translators) {
      std::vector<Elem> images;
      for (const auto& e : c.assignment) {
        const Elem& used = family == 0 ? e.s1 : e.s2;
        if (used == s) images.push_back(grp.mul(s, e.x));
      }
      if (images.empty()) continue;
      w.parts.push_back({SetExpr::finite(grp, std::move(images)), grp.inv(s)});
    }
    if (family == 0) w.split = w.parts.size();
  }
  return w;
}

std::optional<ParadoxWitness> uniform_witness(const MatchCert& c) {
  if (c.assignment.empty()) return std::nullopt;
  const Elem s1 = c.assignment.front().s1;
  const Elem s2 = c.assignment.front().s2;
  for (const auto& e : c.assignment) {
    if (!(e.s1 == s1) || !(e.s2 == s2)) return std::nullopt;
  }
  const Group& grp = c.window.group();
  ParadoxWitness w{c.set, {}, 1};
  w.parts.push_back({SetExpr::translate(s1, c.set), grp.inv(s1)});
  w.parts.push_back({SetExpr::translate(s2, c.set), grp.inv(s2)});
  return w;
}

ValidationReport witness_check(const ParadoxWitness& w, const Window& win, int slack) {
  const Group& grp = win.group();
  const int budget = win.budget(slack);
  ValidationReport r;
  for (const char* name : {"shape", "pieces-in-set", "pieces-disjoint", "first-family-covers",
                           "second-family-covers", "translates-in-set", "translates-disjoint"}) {
    r.pass(name);
  }
  if (w.split > w.parts.size()) {
    r.fail("shape", "split index exceeds the number of parts");
    return r;
  }
  for (const auto& p : w.parts) {
    if (!(p.set.group() == grp) || !grp.owns(p.translator)) {
      r.fail("shape", "part over a different group");
      return r;
    }
  }
  auto check = [&](const SetExpr& e, const Elem& x) {
    const auto m = member(e, x, budget);
    if (m == Membership::Unknown) {
      r.fail("membership-decided", "membership of " + grp.format(x) + " in " + e.to_string() +
                                       " exceeds the budget");
    }
    return m == Membership::Yes;
  };

  // Points where piece-level facts are checked: the window plus every
  // explicitly listed piece element.
  std::vector<Elem> piece_points(win.elements().begin(), win.elements().end());
  std::unordered_set<Elem, ElemHash> in_points(piece_points.begin(), piece_points.end());
  std::vector<Elem> translate_points = piece_points;
  std::unordered_set<Elem, ElemHash> in_translate_points = in_points;
  for (const auto& p : w.parts) {
    if (p.set.kind() != SetKind::Finite) continue;
    for (const auto& y : p.set.elements()) {
      if (in_points.insert(y).second) piece_points.push_back(y);
      Elem ty = grp.mul(p.translator, y);
      if (in_translate_points.insert(ty).second) translate_points.push_back(std::move(ty));
    }
  }

  for (const auto& x : piece_points) {
    int owner = -1;
    for (std::size_t j = 0; j < w.parts.size(); ++j) {
      if (!check(w.parts[j].set, x)) continue;
      if (owner >= 0) {
        r.fail("pieces-disjoint", grp.format(x) + " lies in parts " + std::to_string(owner) + " and " +
                                      std::to_string(j));
      }
      owner = static_cast<int>(j);
    }
    if (owner >= 0 && !check(w.set, x)) {
      r.fail("pieces-in-set", grp.format(x) + " lies in part " + std::to_string(owner) +
                                  " but not in the set");
    }
  }

  std::vector<Elem> inverses;
  for (const auto& p : w.parts) inverses.push_back(grp.inv(p.translator));
  auto in_translate = [&](std::size_t j, const Elem& x) {
    return check(w.parts[j].set, grp.mul(inverses[j], x));
  };
  const std::size_t families[3] = {0, w.split, w.parts.size()};
  for (int f = 0; f < 2; ++f) {
    const std::string cover_name = f == 0 ? "first-family-covers" : "second-family-covers";
    for (const auto& x : translate_points) {
      int owner = -1;
      for (std::size_t j = families[f]; j < families[f + 1]; ++j) {
        if (!in_translate(j, x)) continue;
        if (owner >= 0) {
          r.fail("translates-disjoint", grp.format(x) + " lies in the translates of parts " +
                                            std::to_string(owner) + " and " + std::to_string(j));
        }
        owner = static_cast<int>(j);
      }
      const bool in_set = check(w.set, x);
      if (owner >= 0 && !in_set) {
        r.fail("translates-in-set", grp.format(x) + " lies in the translate of part " +
                                        std::to_string(owner) + " but not in the set");
      }
      if (owner < 0 && in_set && win.contains(x)) {
        r.fail(cover_name, grp.format(x) + " is not covered");
      }
    }
  }
  return r;
}

std::variant<ParadoxWitness, SemigroupCollision> free_semigroup_witness(const Group& g, const Elem& s,
                                                                         const Elem& t, int max_len) {
  if (max_len < 1) throw Error("word length bound must be at least 1");
  g.require_owns(s);
  g.require_owns(t);
  struct Word {
    std::string text;
    Elem value;
  };
  std::unordered_map<Elem, std::string, ElemHash> seen;
  std::vector<Word> layer{{"", g.identity()}};
  seen.emplace(g.identity(), "e");
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    next.reserve(layer.size() * 2);
    for (const auto& w : layer) {
      for (int letter = 0; letter < 2; ++letter) {
        Word child{w.text + (w.text.empty() ? "" : " ") + (letter == 0 ? "s" : "t"),
                   g.mul(w.value, letter == 0 ? s : t)};
        auto [it, fresh] = seen.emplace(child.value, child.text);
        if (!fresh) return SemigroupCollision{it->second, child.text, child.value, len};
        next.push_back(std::move(child));
      }
    }
    layer = std::move(next);
  }
  const SetExpr a = SetExpr::semigroup(g, {s, t}, true);
  ParadoxWitness w{a, {}, 1};
  w.parts.push_back({SetExpr::translate(s, a), g.inv(s)});
  w.parts.push_back({SetExpr::translate(t, a), g.inv(t)});
  return w;
}

std::pair<PwT, PwT> base_maps(const ParadoxWitness& w) {
  const Group& grp = w.set.group();
  std::vector<Piece> plus;
  std::vector<Piece> minus;
  for (std::size_t j = 0; j < w.parts.size(); ++j) {
    const auto& p = w.parts[j];
    Piece piece{SetExpr::translate(p.translator, p.set), grp.inv(p.translator)};
    (j < w.split ? plus : minus).push_back(std::move(piece));
  }
  return {PwT(w.set, std::move(plus)), PwT(w.set, std::move(minus))};
}

std::vector<PwT> iterate_disjoint(const ParadoxWitness& w, int n, const Window& win, int slack) {
  if (n < 2) throw Error("iterate_disjoint needs n >= 2");
  const auto report = witness_check(w, win, slack);
  if (!report.passed()) throw InvariantViolation("invalid witness: " + report.summary());
  const auto [plus, minus] = base_maps(w);
  int depth = 0;
  while ((1 << depth) < n) ++depth;
  std::vector<PwT> out;
  for (int leaf = 0; leaf < n; ++leaf) {
    // Bit d-1 (most significant) selects the outermost map; 0 is plus.
    std::optional<PwT> acc;
    for (int level = 0; level < depth; ++level) {
      const bool is_minus = ((leaf >> level) & 1) != 0;
      const PwT& step = is_minus ? minus : plus;
      acc = acc ? pwt_compose(step, *acc, win, slack) : step;
    }
    out.push_back(*acc);
  }
  return out;
}

ValidationReport images_disjoint(const std::vector<PwT>& maps, const Window& win, int slack) {
  ValidationReport r;
  r.pass("images-disjoint");
  if (maps.empty()) return r;
  const Group& grp = win.group();
  const int budget = win.budget(slack);
  std::unordered_map<Elem, std::size_t, ElemHash> owner;
  for (std::size_t k = 0; k < maps.size(); ++k) {
    for (const auto& x : win.elements()) {
      if (!contains(maps[k].domain(), x, budget)) continue;
      const Elem y = pwt_apply(maps[k], x, budget);
      auto [it, fresh] = owner.emplace(y, k);
      if (!fresh && it->second != k) {
        r.fail("images-disjoint", grp.format(y) + " is in the images of maps " +
                                      std::to_string(it->second) + " and " + std::to_string(k));
      }
    }
  }
  return r;
}

TypeOrderResult type_order(int m, const SetExpr& a, int n, const SetExpr& b, std::span<const Elem> s_in,
                           const Window& w, int slack) {
  if (m < 1 || n < 1) throw Error("type_order needs m, n >= 1");
  if (s_in.empty()) throw Error("translator set must be nonempty");
  const auto s = distinct(s_in);
  const Neighborhoods nb = build_neighborhoods(a, b, s, w, slack);
  const int left = static_cast<int>(nb.left.size());
  const int right = static_cast<int>(nb.right.size());
  const int source = 0;
  const int sink = 1 + left * m + right;
  auto copy_node = [&](int i, int c) { return 1 + i * m + c; };
  auto right_node = [&](int r) { return 1 + left * m + r; };

  MaxFlow flow(sink + 1);
  const std::int64_t unbounded = static_cast<std::int64_t>(left) * m + 1;
  std::vector<std::vector<std::vector<int>>> edge_ids(static_cast<std::size_t>(left));
  for (int i = 0; i < left; ++i) {
    edge_ids[i].resize(static_cast<std::size_t>(m));
    for (int c = 0; c < m; ++c) {
      flow.add_edge(source, copy_node(i, c), 1);
      for (const auto& [r, k] : nb.edges(i)) {
        edge_ids[i][c].push_back(flow.add_edge(copy_node(i, c), right_node(r), unbounded));
      }
    }
  }
  for (int r = 0; r < right; ++r) flow.add_edge(right_node(r), sink, n);
  const auto total = flow.run(source, sink);

  if (total == static_cast<std::int64_t>(left) * m) {
    FlowCert cert{m, n, a, b, s, w, {}};
    for (int i = 0; i < left; ++i) {
      FlowCert::Entry e{nb.left[i], {}};
      for (int c = 0; c < m; ++c) {
        for (std::size_t q = 0; q < edge_ids[i][c].size(); ++q) {
          if (flow.flow_on(edge_ids[i][c][q]) > 0) {
            e.translators.push_back(s[static_cast<std::size_t>(nb.edges(i)[q].second)]);
            break;
          }
        }
      }
      cert.assignment.push_back(std::move(e));
    }
    return cert;
  }

  const auto reach = flow.residual_reachable(source);
  FlowDeficiency cert{m, n, a, b, s, w, {}, {}};
  std::vector<bool> seen(static_cast<std::size_t>(right), false);
  for (int i = 0; i < left; ++i) {
    bool any = false;
    for (int c = 0; c < m; ++c) any = any || reach[copy_node(i, c)];
    if (!any) continue;
    cert.violator.push_back(nb.left[i]);
    for (const auto& [r, k] : nb.edges(i)) {
      if (!seen[r]) {
        seen[r] = true;
        cert.neighborhood.push_back(nb.right[r]);
      }
    }
  }
  if (static_cast<std::int64_t>(n) * static_cast<std::int64_t>(cert.neighborhood.size()) >=
      static_cast<std::int64_t>(m) * static_cast<std::int64_t>(cert.violator.size())) {
    throw InvariantViolation("residual cut does not witness a deficiency");
  }
  return cert;
}

}  // namespace paradox
