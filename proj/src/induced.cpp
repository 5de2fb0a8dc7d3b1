#include "paradox/induced.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace paradox {

namespace {

std::string pair_label(const Group& g, const Elem& r, const std::string& x) {
  return "(" + g.format(r) + ", " + x + ")";
}

std::size_t word_size(const Elem& g) { return g.word().size(); }

}  // namespace

// ---------------------------------------------------------------------------
// SubgroupSpec

SubgroupSpec SubgroupSpec::cyclic(const Group& g, const Elem& w) {
  if (g.kind() != GroupKind::Free) throw Unsupported("cyclic subgroups are supported in free groups only");
  g.require_owns(w);
  SubgroupSpec h(g, SubgroupKind::Cyclic);
  h.w_ = w;
  // Peel matching letters off both ends: w = u c u^-1.
  const FreeWord& word = w.word();
  std::size_t k = 0;
  while (2 * k + 1 < word.size() && word[k] == -word[word.size() - 1 - k]) ++k;
  h.conjugator_ = Elem(FreeWord(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(k)));
  h.core_ = Elem(FreeWord(word.begin() + static_cast<std::ptrdiff_t>(k),
                          word.end() - static_cast<std::ptrdiff_t>(k)));
  return h;
}

SubgroupSpec SubgroupSpec::coordinates(const Group& g, std::vector<int> axes) {
  if (g.kind() != GroupKind::Zn) throw Unsupported("coordinate subgroups are supported in Z^d only");
  std::sort(axes.begin(), axes.end());
  axes.erase(std::unique(axes.begin(), axes.end()), axes.end());
  for (int a : axes) {
    if (a < 0 || a >= g.rank()) throw Error("axis " + std::to_string(a) + " out of range for " + g.spec());
  }
  SubgroupSpec h(g, SubgroupKind::Coordinates);
  h.axes_ = std::move(axes);
  return h;
}

SubgroupSpec SubgroupSpec::slope_kernel(const Group& g) {
  if (g.kind() != GroupKind::DyadicAffine) throw Unsupported("the slope kernel exists only in bs12");
  return SubgroupSpec(g, SubgroupKind::SlopeKernel);
}

SubgroupSpec SubgroupSpec::parse(const Group& g, std::string_view text) {
  if (text == "kernel") return slope_kernel(g);
  if (text.rfind("cyclic:", 0) == 0) return cyclic(g, g.parse_elem(text.substr(7), 7));
  if (text.rfind("coords:", 0) == 0) {
    std::vector<int> axes;
    std::size_t pos = 7;
    while (pos <= text.size()) {
      const std::size_t comma = std::min(text.find(',', pos), text.size());
      int value = 0;
      const auto field = text.substr(pos, comma - pos);
      const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc() || end != field.data() + field.size() || field.empty()) {
        throw ParseError("expected an axis index", pos);
      }
      axes.push_back(value);
      pos = comma + 1;
    }
    return coordinates(g, std::move(axes));
  }
  throw ParseError("subgroup must be 'cyclic:<word>', 'coords:<i,j,...>' or 'kernel'", 0);
}

std::string SubgroupSpec::to_string() const {
  switch (kind_) {
    case SubgroupKind::Cyclic: return "cyclic:" + group_.format(w_);
    case SubgroupKind::Coordinates: {
      std::string out = "coords:";
      for (std::size_t i = 0; i < axes_.size(); ++i) out += (i ? "," : "") + std::to_string(axes_[i]);
      return out;
    }
    case SubgroupKind::SlopeKernel: return "kernel";
  }
  return {};
}

std::vector<Elem> SubgroupSpec::generators() const {
  switch (kind_) {
    case SubgroupKind::Cyclic: return {w_};
    case SubgroupKind::Coordinates: {
      std::vector<Elem> out;
      for (int a : axes_) {
        IntVector v(static_cast<std::size_t>(group_.rank()), 0);
        v[static_cast<std::size_t>(a)] = 1;
        out.emplace_back(std::move(v));
      }
      return out;
    }
    case SubgroupKind::SlopeKernel: return {};
  }
  return {};
}

std::optional<std::vector<std::int64_t>> SubgroupSpec::exponents(const Elem& r) const {
  group_.require_owns(r);
  switch (kind_) {
    case SubgroupKind::Cyclic: {
      if (group_.is_identity(r)) return std::vector<std::int64_t>{0};
      if (group_.is_identity(core_)) return std::nullopt;
      // u^-1 r u is a power of the cyclically reduced c, whose powers never cancel.
      const Elem inner = group_.mul(group_.inv(conjugator_), group_.mul(r, conjugator_));
      const std::size_t len = word_size(inner);
      if (len % word_size(core_) != 0) return std::nullopt;
      const auto k = static_cast<std::int64_t>(len / word_size(core_));
      for (std::int64_t e : {k, -k}) {
        if (group_.pow(w_, e) == r) return std::vector<std::int64_t>{e};
      }
      return std::nullopt;
    }
    case SubgroupKind::Coordinates: {
      const auto& v = r.vec();
      std::vector<std::int64_t> out;
      for (std::size_t i = 0; i < v.size(); ++i) {
        const bool on_axis = std::binary_search(axes_.begin(), axes_.end(), static_cast<int>(i));
        if (on_axis) {
          out.push_back(v[i]);
        } else if (v[i] != 0) {
          return std::nullopt;
        }
      }
      return out;
    }
    case SubgroupKind::SlopeKernel: return std::nullopt;
  }
  return std::nullopt;
}

bool SubgroupSpec::contains(const Elem& r) const { return group_.is_identity(coset_normalize(*this, r).first); }

std::pair<Elem, Elem> coset_normalize(const SubgroupSpec& h, const Elem& g) {
  const Group& grp = h.group_;
  grp.require_owns(g);
  switch (h.kind_) {
    case SubgroupKind::Cyclic: {
      if (grp.is_identity(h.core_)) return {g, grp.identity()};
      // Every element of (g u)<c> no longer than g u lies within K steps.
      const Elem start = grp.mul(g, h.conjugator_);
      const Elem c_inv = grp.inv(h.core_);
      const auto bound = static_cast<std::int64_t>(2 * word_size(start) / word_size(h.core_) + 2);
      Elem best = start;
      Elem up = start;
      Elem down = start;
      for (std::int64_t k = 1; k <= bound; ++k) {
        up = grp.mul(up, h.core_);
        down = grp.mul(down, c_inv);
        for (const Elem* cand : {&up, &down}) {
          if (*cand < best) best = *cand;
        }
      }
      Elem rep = grp.mul(best, grp.inv(h.conjugator_));
      Elem r = grp.mul(grp.inv(rep), g);
      return {std::move(rep), std::move(r)};
    }
    case SubgroupKind::Coordinates: {
      IntVector rep = g.vec();
      IntVector r(rep.size(), 0);
      for (int a : h.axes_) {
        std::swap(rep[static_cast<std::size_t>(a)], r[static_cast<std::size_t>(a)]);
      }
      return {Elem(std::move(rep)), Elem(std::move(r))};
    }
    case SubgroupKind::SlopeKernel: {
      // (a, b) = (a, 0)·(1, b/a).
      const auto& x = g.affine();
      return {Elem(Affine{x.log2a, Dyadic(0)}), Elem(Affine{0, x.b.shifted(-x.log2a)})};
    }
  }
  throw Unsupported("unsupported subgroup");
}

// ---------------------------------------------------------------------------
// Action tables

void ActionTable::set(const Elem& r, const std::string& x, const std::string& y) {
  if (!h_.contains(r)) {
    throw DomainError(h_.group().format(r) + " is not in the subgroup " + h_.to_string());
  }
  entries_[{r, x}] = y;
}

std::string ActionTable::act_generator(const Elem& gen, std::int64_t power, const std::string& x) const {
  const Group& g = h_.group();
  const Elem back = g.inv(gen);
  std::string cur = x;
  for (std::int64_t i = 0; i < std::abs(power); ++i) {
    const Elem& step = power > 0 ? gen : back;
    if (auto it = entries_.find({step, cur}); it != entries_.end()) {
      cur = it->second;
      continue;
    }
    // Invert the opposite entry: find y with other.y = cur.
    const Elem& other = power > 0 ? back : gen;
    const std::string* found = nullptr;
    for (const auto& [key, value] : entries_) {
      if (key.first == other && value == cur) {
        found = &key.second;
        break;
      }
    }
    if (found == nullptr) throw IncompleteTable("no entry for " + pair_label(g, step, cur));
    cur = *found;
  }
  return cur;
}

std::string ActionTable::act(const Elem& r, const std::string& x) const {
  const Group& g = h_.group();
  if (g.is_identity(r)) return x;
  if (auto it = entries_.find({r, x}); it != entries_.end()) return it->second;
  const auto exps = h_.exponents(r);
  if (!exps) throw IncompleteTable("the action table has no entry for " + pair_label(g, r, x));
  const auto gens = h_.generators();
  try {
    std::string cur = x;
    for (std::size_t i = gens.size(); i-- > 0;) cur = act_generator(gens[i], (*exps)[i], cur);
    return cur;
  } catch (const IncompleteTable& e) {
    throw IncompleteTable("the action table cannot evaluate " + pair_label(g, r, x) + ": " + e.what());
  }
}

ValidationReport ActionTable::validate() const {
  const Group& g = h_.group();
  ValidationReport rep;
  rep.pass("identity");
  rep.pass("composition");
  for (const auto& [key, y] : entries_) {
    const auto& [r, x] = key;
    if (g.is_identity(r) && y != x) rep.fail("identity", "e." + x + " = " + y);
    for (const auto& [key2, z] : entries_) {
      if (key2.second != y) continue;
      const Elem rr = g.mul(key2.first, r);
      auto it = entries_.find({rr, x});
      if (it != entries_.end() && it->second != z) {
        rep.fail("composition", "(" + g.format(key2.first) + "·" + g.format(r) + ")." + x + " = " + it->second +
                                    " but " + g.format(key2.first) + ".(" + g.format(r) + "." + x + ") = " + z);
      }
    }
  }
  return rep;
}

YPoint y_point(const ActionTable& table, const Elem& g, const std::string& x) {
  auto [rep, r] = coset_normalize(table.subgroup(), g);
  return {std::move(rep), table.act(r, x)};
}

YPoint induced_act(const ActionTable& table, const Elem& s, const YPoint& p) {
  const Group& g = table.subgroup().group();
  return y_point(table, g.mul(s, p.rep), p.token);
}

// ---------------------------------------------------------------------------
// Token witnesses

ValidationReport check_token_witness(const SubgroupSpec& h, const TokenWitness& w) {
  const Group& g = h.group();
  ValidationReport r;
  r.pass("shape");
  r.pass("translators-in-subgroup");
  r.pass("disjoint-asserted");
  r.pass("within-asserted");
  r.pass("covers-asserted");
  const std::size_t n = w.pieces.size();
  if (w.translators.size() != n) {
    r.fail("shape", std::to_string(n) + " pieces but " + std::to_string(w.translators.size()) + " translators");
    return r;
  }
  if (w.split < 1 || w.split >= n) {
    r.fail("shape", "split " + std::to_string(w.split) + " must leave both families nonempty");
    return r;
  }
  std::set<std::string> names{w.set};
  for (const auto& p : w.pieces) {
    if (!names.insert(p).second) r.fail("shape", "token " + p + " is used twice");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!g.owns(w.translators[j]) || !h.contains(w.translators[j])) {
      r.fail("translators-in-subgroup",
             "t_" + std::to_string(j) + " = " + (g.owns(w.translators[j]) ? g.format(w.translators[j]) : "?") +
                 " is not in " + h.to_string());
    }
  }
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (auto [i, j] : w.disjoint) {
    if (i >= n || j >= n || i == j) {
      r.fail("disjoint-asserted", "invalid pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      continue;
    }
    pairs.insert({std::min(i, j), std::max(i, j)});
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!pairs.count({i, j})) r.fail("disjoint-asserted", w.pieces[i] + " ∩ " + w.pieces[j] + " = ∅ is not asserted");
    }
  }
  const std::set<std::size_t> within(w.within.begin(), w.within.end());
  for (std::size_t j = 0; j < n; ++j) {
    if (!within.count(j)) r.fail("within-asserted", w.pieces[j] + " ⊆ " + w.set + " is not asserted");
  }
  std::set<std::size_t> first;
  std::set<std::size_t> second;
  for (std::size_t j = 0; j < n; ++j) (j < w.split ? first : second).insert(j);
  bool has_first = false;
  bool has_second = false;
  for (const auto& family : w.covers) {
    const std::set<std::size_t> f(family.begin(), family.end());
    has_first = has_first || f == first;
    has_second = has_second || f == second;
  }
  if (!has_first) r.fail("covers-asserted", "no asserted cover of " + w.set + " by the first family");
  if (!has_second) r.fail("covers-asserted", "no asserted cover of " + w.set + " by the second family");
  return r;
}

InducedWitness induce_witness(const SubgroupSpec& h, const TokenWitness& w, const Elem& t) {
  const Group& g = h.group();
  g.require_owns(t);
  const auto report = check_token_witness(h, w);
  if (!report.passed()) throw InvariantViolation("malformed token witness: " + report.summary());
  auto [rep, r] = coset_normalize(h, t);
  InducedWitness out{t, w, YSet{rep, r, w.set}, {}, {}};
  const Elem t_inv = g.inv(t);
  for (std::size_t j = 0; j < w.pieces.size(); ++j) {
    out.pieces.push_back(YSet{rep, r, w.pieces[j]});
    out.translators.push_back(g.mul(g.mul(t, w.translators[j]), t_inv));
  }
  return out;
}

ValidationReport check_induced_witness(const SubgroupSpec& h, const InducedWitness& w) {
  const Group& g = h.group();
  ValidationReport r;
  const auto x_facts = check_token_witness(h, w.source);
  r.pass("x-facts");
  if (!x_facts.passed()) {
    r.fail("x-facts", x_facts.summary());
    return r;
  }
  r.pass("shape");
  r.pass("fibers");
  r.pass("conjugation");
  r.pass("coset-bookkeeping");
  const std::size_t n = w.source.pieces.size();
  if (w.pieces.size() != n || w.translators.size() != n) {
    r.fail("shape", "the induced witness needs one piece and one translator per X-piece");
    return r;
  }
  const auto [rep, rt] = coset_normalize(h, w.t);
  // F and every F_j live in the single fiber π({t} × X), where π is injective,
  // so their disjointness and containment are exactly the X-facts.
  if (!(w.set == YSet{rep, rt, w.source.set})) r.fail("fibers", "F is not π({t} × " + w.source.set + ")");
  for (std::size_t j = 0; j < n; ++j) {
    if (!(w.pieces[j] == YSet{rep, rt, w.source.pieces[j]})) {
      r.fail("fibers", "F_" + std::to_string(j) + " is not π({t} × " + w.source.pieces[j] + ")");
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    const Elem& s = w.translators[j];
    const Elem& tj = w.source.translators[j];
    if (!g.owns(s)) {
      r.fail("conjugation", "s_" + std::to_string(j) + " is not in " + g.spec());
      continue;
    }
    const Elem lhs = g.mul(s, w.t);
    const Elem rhs = g.mul(w.t, tj);
    if (!(lhs == rhs)) {
      r.fail("conjugation", "s_" + std::to_string(j) + "·t = " + g.format(lhs) + " but t·t_" + std::to_string(j) +
                                " = " + g.format(rhs));
      continue;
    }
    // s_j.F_j = π({s_j t} × E_j) = π({t} × t_j.E_j): same coset, Γ0-part r_t·t_j.
    const auto [rep_j, r_j] = coset_normalize(h, lhs);
    if (!(rep_j == rep) || !(r_j == g.mul(rt, tj))) {
      r.fail("coset-bookkeeping", "s_" + std::to_string(j) + "·t leaves the coset of t");
    }
  }
  return r;
}

}  // namespace paradox
