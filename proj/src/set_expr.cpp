#include "paradox/set_expr.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "paradox/errors.hpp"
#include "paradox/smallsets.hpp"

namespace paradox {

namespace {

// Linear functional h on the group with h(g) > 0 for every semigroup
// generator. Positive words of length n then satisfy h >= n * min_gen, which
// bounds the search for a representing word.
struct Height {
  std::vector<std::int64_t> coeffs;  // dyadic: {c}; zn: c; free: per generator
  std::int64_t min_gen = 0;
};

std::int64_t apply_height(const Group& grp, const std::vector<std::int64_t>& c, const Elem& g) {
  switch (grp.kind()) {
    case GroupKind::DyadicAffine: return c[0] * g.affine().log2a;
    case GroupKind::Zn: {
      std::int64_t s = 0;
      const auto& v = g.vec();
      for (std::size_t i = 0; i < v.size(); ++i) s += c[i] * v[i];
      return s;
    }
    case GroupKind::Free: {
      std::int64_t s = 0;
      for (auto l : g.word()) s += (l > 0 ? 1 : -1) * c[static_cast<std::size_t>(std::abs(l) - 1)];
      return s;
    }
  }
  return 0;
}

std::optional<Height> find_height(const Group& grp, const std::vector<Elem>& gens) {
  if (gens.empty()) return std::nullopt;
  const std::size_t dim = grp.kind() == GroupKind::DyadicAffine ? 1 : static_cast<std::size_t>(grp.rank());
  auto try_coeffs = [&](const std::vector<std::int64_t>& c) -> std::optional<Height> {
    std::int64_t lo = std::numeric_limits<std::int64_t>::max();
    for (const auto& g : gens) {
      const auto h = apply_height(grp, c, g);
      if (h <= 0) return std::nullopt;
      lo = std::min(lo, h);
    }
    return Height{c, lo};
  };
  // Small integer box first; it covers every generating set used in practice.
  const int box = dim <= 3 ? 3 : (dim <= 5 ? 1 : 0);
  if (box > 0) {
    std::vector<std::int64_t> c(dim, -box);
    for (;;) {
      if (auto h = try_coeffs(c)) return h;
      std::size_t i = 0;
      while (i < dim && c[i] == box) c[i++] = -box;
      if (i == dim) break;
      ++c[i];
    }
  }
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::int64_t sign : {1, -1}) {
      std::vector<std::int64_t> c(dim, 0);
      c[i] = sign;
      if (auto h = try_coeffs(c)) return h;
    }
  }
  return std::nullopt;
}

bool is_binary(SetKind k) {
  return k == SetKind::Union || k == SetKind::Intersect || k == SetKind::Diff;
}

}  // namespace

struct SetExpr::Node {
  Group group;
  SetKind kind;
  std::vector<Elem> elems;
  std::unordered_set<Elem, ElemHash> elem_set;
  std::optional<Elem> t;
  std::optional<SetExpr> a;
  std::optional<SetExpr> b;
  int radius = 0;
  int count = 0;
  bool include_identity = false;
  Rational alpha, beta, gamma;
  std::optional<Window> ball_window;
  std::optional<Height> height;
  std::string text;

  Node(Group g, SetKind k) : group(std::move(g)), kind(k) {}
};

namespace {

using NodePtr = std::shared_ptr<SetExpr::Node>;

std::string wrap(const SetExpr& e) {
  return is_binary(e.kind()) ? "(" + e.to_string() + ")" : e.to_string();
}

std::string elem_list(const Group& g, const std::vector<Elem>& elems) {
  std::string out;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (i) out += ',';
    out += g.format(elems[i]);
  }
  return out;
}

void finish_text(SetExpr::Node& n) {
  switch (n.kind) {
    case SetKind::All: n.text = "all"; break;
    case SetKind::Empty: n.text = "empty"; break;
    case SetKind::Finite: n.text = "finite{" + elem_list(n.group, n.elems) + "}"; break;
    case SetKind::Ball: n.text = "ball(" + std::to_string(n.radius) + ")"; break;
    case SetKind::Translate: n.text = n.group.format(*n.t) + "*" + wrap(*n.a); break;
    case SetKind::Union: n.text = wrap(*n.a) + "|" + wrap(*n.b); break;
    case SetKind::Intersect: n.text = wrap(*n.a) + "&" + wrap(*n.b); break;
    case SetKind::Diff: n.text = wrap(*n.a) + "\\" + wrap(*n.b); break;
    case SetKind::Semigroup:
      n.text = "semigroup(" + elem_list(n.group, n.elems) + (n.include_identity ? ";e)" : ")");
      break;
    case SetKind::Slab:
      n.text = "slab(" + rational_to_string(n.alpha) + "," + rational_to_string(n.beta) + "," +
               rational_to_string(n.gamma) + ")";
      break;
    case SetKind::Greedy: n.text = "greedy(" + std::to_string(n.count) + ")"; break;
  }
}

SetExpr make(NodePtr n) {
  finish_text(*n);
  return SetExpr(std::move(n));
}

void require_same_group(const SetExpr& a, const SetExpr& b) {
  if (!(a.group() == b.group())) throw GroupMismatch("set expressions over different groups");
}

}  // namespace

SetExpr SetExpr::all(const Group& g) { return make(std::make_shared<Node>(g, SetKind::All)); }

SetExpr SetExpr::empty(const Group& g) { return make(std::make_shared<Node>(g, SetKind::Empty)); }

SetExpr SetExpr::finite(const Group& g, std::vector<Elem> elems) {
  auto n = std::make_shared<Node>(g, SetKind::Finite);
  for (auto& x : elems) {
    g.require_owns(x);
    if (n->elem_set.insert(x).second) n->elems.push_back(std::move(x));
  }
  return make(std::move(n));
}

SetExpr SetExpr::ball(const Group& g, int radius) {
  if (radius < 0) throw Error("ball radius must be nonnegative");
  auto n = std::make_shared<Node>(g, SetKind::Ball);
  n->radius = radius;
  if (g.kind() == GroupKind::DyadicAffine) n->ball_window = g.ball(radius);
  return make(std::move(n));
}

SetExpr SetExpr::translate(const Elem& t, const SetExpr& a) {
  const Group& g = a.group();
  g.require_owns(t);
  if (g.is_identity(t) || a.kind() == SetKind::All || a.kind() == SetKind::Empty) return a;
  if (a.kind() == SetKind::Translate) return translate(g.mul(t, a.translator()), a.lhs());
  auto n = std::make_shared<Node>(g, SetKind::Translate);
  n->t = t;
  n->a = a;
  return make(std::move(n));
}

SetExpr SetExpr::unite(const SetExpr& a, const SetExpr& b) {
  require_same_group(a, b);
  if (a.kind() == SetKind::Empty || b.kind() == SetKind::All) return b;
  if (b.kind() == SetKind::Empty || a.kind() == SetKind::All) return a;
  if (same_syntax(a, b)) return a;
  auto n = std::make_shared<Node>(a.group(), SetKind::Union);
  n->a = a;
  n->b = b;
  return make(std::move(n));
}

SetExpr SetExpr::intersect(const SetExpr& a, const SetExpr& b) {
  require_same_group(a, b);
  if (a.kind() == SetKind::Empty || b.kind() == SetKind::All) return a;
  if (b.kind() == SetKind::Empty || a.kind() == SetKind::All) return b;
  if (same_syntax(a, b)) return a;
  auto n = std::make_shared<Node>(a.group(), SetKind::Intersect);
  n->a = a;
  n->b = b;
  return make(std::move(n));
}

SetExpr SetExpr::diff(const SetExpr& a, const SetExpr& b) {
  require_same_group(a, b);
  if (a.kind() == SetKind::Empty || b.kind() == SetKind::Empty) return a;
  if (b.kind() == SetKind::All || same_syntax(a, b)) return empty(a.group());
  auto n = std::make_shared<Node>(a.group(), SetKind::Diff);
  n->a = a;
  n->b = b;
  return make(std::move(n));
}

SetExpr SetExpr::semigroup(const Group& g, std::vector<Elem> gens, bool include_identity) {
  if (gens.empty()) throw Error("semigroup needs at least one generator");
  auto n = std::make_shared<Node>(g, SetKind::Semigroup);
  for (auto& x : gens) g.require_owns(x);
  n->elems = std::move(gens);
  n->include_identity = include_identity;
  n->height = find_height(g, n->elems);
  return make(std::move(n));
}

SetExpr SetExpr::slab(const Group& g, Rational alpha, Rational beta, Rational gamma) {
  if (g.kind() != GroupKind::DyadicAffine) throw Unsupported("slab sets exist only in bs12");
  if (alpha > beta) throw Error("slab requires alpha <= beta");
  auto n = std::make_shared<Node>(g, SetKind::Slab);
  n->alpha = std::move(alpha);
  n->beta = std::move(beta);
  n->gamma = std::move(gamma);
  return make(std::move(n));
}

SetExpr SetExpr::greedy(const Group& g, int count) {
  if (count < 0) throw Error("greedy count must be nonnegative");
  auto n = std::make_shared<Node>(g, SetKind::Greedy);
  n->count = count;
  if (count > 0) n->elems = greedy_small_set(g, count);
  n->elem_set.insert(n->elems.begin(), n->elems.end());
  return make(std::move(n));
}

const Group& SetExpr::group() const { return node_->group; }
SetKind SetExpr::kind() const { return node_->kind; }
std::string SetExpr::to_string() const { return node_->text; }
const std::vector<Elem>& SetExpr::elements() const { return node_->elems; }
const Elem& SetExpr::translator() const { return *node_->t; }
const SetExpr& SetExpr::lhs() const { return *node_->a; }
const SetExpr& SetExpr::rhs() const { return *node_->b; }
int SetExpr::radius() const { return node_->radius; }
int SetExpr::count() const { return node_->count; }
bool SetExpr::includes_identity() const { return node_->include_identity; }

namespace {

// Integer row echelon form of a set of vectors in Z^d: each row has a
// positive pivot strictly to the right of the previous row's pivot, and the
// rows generate the same lattice as the input.
struct Lattice {
  std::vector<std::vector<std::int64_t>> rows;
  std::vector<std::size_t> pivots;
};

Lattice echelon(const std::vector<Elem>& gens, int dim) {
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& x : gens) rows.emplace_back(x.vec().begin(), x.vec().end());
  Lattice out;
  std::size_t top = 0;
  for (std::size_t col = 0; col < static_cast<std::size_t>(dim) && top < rows.size(); ++col) {
    // Euclid on column col among rows top..end.
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = top; i < rows.size(); ++i) {
        if (rows[i][col] != 0 && (best == rows.size() || std::abs(rows[i][col]) < std::abs(rows[best][col]))) best = i;
      }
      if (best == rows.size()) break;
      std::swap(rows[top], rows[best]);
      bool reduced = true;
      for (std::size_t i = top + 1; i < rows.size(); ++i) {
        const std::int64_t q = rows[i][col] / rows[top][col];
        for (std::size_t c = col; c < rows[i].size(); ++c) rows[i][c] -= q * rows[top][c];
        reduced = reduced && rows[i][col] == 0;
      }
      if (reduced) {
        if (rows[top][col] < 0) {
          for (auto& v : rows[top]) v = -v;
        }
        out.rows.push_back(rows[top]);
        out.pivots.push_back(col);
        ++top;
        break;
      }
    }
  }
  return out;
}

bool in_lattice(const Lattice& l, const IntVector& g) {
  std::vector<std::int64_t> t(g.begin(), g.end());
  for (std::size_t i = 0; i < l.rows.size(); ++i) {
    const auto p = l.pivots[i];
    if (t[p] % l.rows[i][p] != 0) return false;
    const std::int64_t q = t[p] / l.rows[i][p];
    for (std::size_t c = p; c < t.size(); ++c) t[c] -= q * l.rows[i][c];
  }
  return std::all_of(t.begin(), t.end(), [](std::int64_t v) { return v == 0; });
}

bool in_rational_span(const Lattice& l, const IntVector& g) {
  std::vector<Rational> t(g.begin(), g.end());
  for (std::size_t i = 0; i < l.rows.size(); ++i) {
    const auto p = l.pivots[i];
    const Rational q = t[p] / l.rows[i][p];
    for (std::size_t c = p; c < t.size(); ++c) t[c] -= q * l.rows[i][c];
  }
  return std::all_of(t.begin(), t.end(), [](const Rational& v) { return v == 0; });
}

// Exact membership of t in the additive semigroup of Z generated by gens,
// with 0 added when include_zero. nullopt when t is too large to tabulate.
std::optional<bool> int_semigroup_member(const std::vector<std::int64_t>& gens, std::int64_t t, bool include_zero) {
  bool pos = false;
  bool neg = false;
  bool zero = false;
  std::int64_t d = 0;
  for (auto x : gens) {
    d = std::gcd(d, x);
    pos = pos || x > 0;
    neg = neg || x < 0;
    zero = zero || x == 0;
  }
  if (t == 0) return include_zero || zero || (pos && neg);
  if (pos && neg) return t % d == 0;
  if ((t > 0 && !pos) || (t < 0 && !neg)) return false;
  const std::int64_t target = t < 0 ? -t : t;
  if (target > 1'000'000) return std::nullopt;
  std::vector<char> reach(static_cast<std::size_t>(target) + 1, 0);
  reach[0] = 1;
  for (std::int64_t v = 1; v <= target; ++v) {
    for (auto x : gens) {
      const std::int64_t a = x < 0 ? -x : x;
      if (a > 0 && a <= v && reach[static_cast<std::size_t>(v - a)]) {
        reach[static_cast<std::size_t>(v)] = 1;
        break;
      }
    }
  }
  return reach[static_cast<std::size_t>(target)] != 0;
}

// Coordinates of g over linearly independent generators of Z^d, or nullopt
// if the generators are dependent or g is outside their span.
std::optional<std::vector<Rational>> independent_coordinates(const std::vector<Elem>& gens, const IntVector& g) {
  const std::size_t d = g.size();
  const std::size_t k = gens.size();
  // Augmented d x (k+1) matrix with the generators as columns.
  std::vector<std::vector<Rational>> m(d, std::vector<Rational>(k + 1));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < k; ++j) m[i][j] = gens[j].vec()[i];
    m[i][k] = g[i];
  }
  std::size_t row = 0;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = row;
    while (piv < d && m[piv][col] == 0) ++piv;
    if (piv == d) return std::nullopt;
    std::swap(m[row], m[piv]);
    for (std::size_t i = 0; i < d; ++i) {
      if (i == row || m[i][col] == 0) continue;
      const Rational q = m[i][col] / m[row][col];
      for (std::size_t c = col; c <= k; ++c) m[i][c] -= q * m[row][c];
    }
    ++row;
  }
  for (std::size_t i = row; i < d; ++i) {
    if (m[i][k] != 0) return std::nullopt;
  }
  std::vector<Rational> out(k);
  for (std::size_t j = 0; j < k; ++j) out[j] = m[j][k] / m[j][j];
  return out;
}

// Dyadic offsets scaled to integers by 2^exp, if they fit.
std::optional<std::int64_t> scaled_int(const Dyadic& b, std::int64_t exp) {
  const Dyadic x = b.shifted(exp);
  if (x.exponent() != 0 || x.numerator() > std::numeric_limits<std::int64_t>::max() ||
      x.numerator() < std::numeric_limits<std::int64_t>::min()) {
    return std::nullopt;
  }
  return x.numerator().convert_to<std::int64_t>();
}

Membership semigroup_member(const SetExpr::Node& n, const Elem& g, int budget) {
  const Group& grp = n.group;
  if (n.include_identity && grp.is_identity(g)) return Membership::Yes;

  // In Z, generators of both signs generate the subgroup gcd·Z.
  if (grp.kind() == GroupKind::Zn && grp.rank() == 1 && !n.height) {
    std::int64_t d = 0;
    bool pos = false;
    bool neg = false;
    for (const auto& x : n.elems) {
      d = std::gcd(d, x.vec()[0]);
      pos = pos || x.vec()[0] > 0;
      neg = neg || x.vec()[0] < 0;
    }
    if (pos && neg) return g.vec()[0] % d == 0 ? Membership::Yes : Membership::No;
  }

  // In Z^d the semigroup lies in the rational span of its generators, and a
  // generating set closed under negation generates the whole lattice.
  if (grp.kind() == GroupKind::Zn && !n.elems.empty()) {
    const Lattice lattice = echelon(n.elems, grp.rank());
    if (!in_rational_span(lattice, g.vec())) return Membership::No;
    bool symmetric = true;
    for (const auto& x : n.elems) {
      symmetric = symmetric && std::find(n.elems.begin(), n.elems.end(), grp.inv(x)) != n.elems.end();
    }
    if (symmetric) return in_lattice(lattice, g.vec()) ? Membership::Yes : Membership::No;
    // Independent generators: g is a product iff its coordinates are
    // nonnegative integers, not all zero.
    std::vector<Elem> distinct;
    for (const auto& x : n.elems) {
      if (std::find(distinct.begin(), distinct.end(), x) == distinct.end()) distinct.push_back(x);
    }
    if (lattice.rows.size() == distinct.size()) {
      if (const auto coords = independent_coordinates(distinct, g.vec())) {
        bool nonzero = false;
        for (const auto& c : *coords) {
          if (c < 0 || denominator(c) != 1) return Membership::No;
          nonzero = nonzero || c != 0;
        }
        return nonzero ? Membership::Yes : Membership::No;
      }
    }
  }

  if (grp.kind() == GroupKind::DyadicAffine && !n.elems.empty()) {
    bool translations = true;
    bool dilations = true;
    std::int64_t max_exp = 0;
    for (const auto& x : n.elems) {
      translations = translations && x.affine().log2a == 0;
      dilations = dilations && x.affine().b.is_zero();
      max_exp = std::max(max_exp, x.affine().b.exponent());
    }
    const auto& ag = g.affine();
    // Translations x -> x + b_i compose additively; rescaled by 2^max_exp
    // this is a semigroup of integers.
    if (translations) {
      if (ag.log2a != 0 || ag.b.exponent() > max_exp) return Membership::No;
      std::vector<std::int64_t> ints;
      bool fits = true;
      for (const auto& x : n.elems) {
        const auto v = scaled_int(x.affine().b, max_exp);
        fits = fits && v.has_value();
        if (v) ints.push_back(*v);
      }
      const auto t = scaled_int(ag.b, max_exp);
      if (fits && t) {
        if (const auto r = int_semigroup_member(ints, *t, false)) return *r ? Membership::Yes : Membership::No;
      }
    }
    // Dilations x -> 2^k x compose by adding exponents.
    if (dilations) {
      if (!ag.b.is_zero()) return Membership::No;
      std::vector<std::int64_t> ks;
      for (const auto& x : n.elems) ks.push_back(x.affine().log2a);
      if (const auto r = int_semigroup_member(ks, ag.log2a, false)) return *r ? Membership::Yes : Membership::No;
    }
  }

  // Single letters of a free group generate exactly the reduced words over
  // those letters, plus e when a letter and its inverse are both present.
  if (grp.kind() == GroupKind::Free && !n.elems.empty()) {
    bool letters = true;
    std::set<std::int32_t> allowed;
    for (const auto& x : n.elems) {
      letters = letters && x.word().size() == 1;
      if (letters) allowed.insert(x.word().front());
    }
    if (letters) {
      if (g.word().empty()) {
        for (auto l : allowed) {
          if (allowed.count(-l)) return Membership::Yes;
        }
        return Membership::No;
      }
      for (auto l : g.word()) {
        if (!allowed.count(l)) return Membership::No;
      }
      return Membership::Yes;
    }
  }

  int limit = budget;
  bool exact = false;
  std::int64_t min_gen = 0;

  // In a free group, when no generator's last letter cancels against any
  // generator's first letter, products have additive length, so a word of
  // length L needs at most L / (shortest generator) factors.
  if (grp.kind() == GroupKind::Free && !n.elems.empty()) {
    bool additive = true;
    std::size_t shortest = std::numeric_limits<std::size_t>::max();
    for (const auto& x : n.elems) {
      if (x.word().empty()) additive = false;
      shortest = std::min(shortest, x.word().size());
    }
    for (const auto& x : n.elems) {
      for (const auto& y : n.elems) {
        if (additive && x.word().back() == -y.word().front()) additive = false;
      }
    }
    if (additive) {
      const auto n_max = g.word().size() / shortest;
      if (n_max <= static_cast<std::size_t>(budget)) {
        limit = static_cast<int>(n_max);
        exact = true;
      }
    }
  }

  if (n.height) {
    const auto hg = apply_height(grp, n.height->coeffs, g);
    min_gen = n.height->min_gen;
    if (hg < min_gen) return Membership::No;
    const auto n_max = hg / min_gen;
    if (n_max <= budget) {
      limit = static_cast<int>(n_max);
      exact = true;
    }
  }

  // Dyadic-affine generators that never contract (a >= 1) with offsets of
  // one sign: in a product, b = sum of P_i b_i with prefix slopes P_i >= 1, so
  // each factor adds at least 1 to log2 a or at least min |b_i| to |b|. That
  // bounds the number of factors. Generators that all contract reduce to
  // this case through g in S(X) iff g^-1 in S(X^-1).
  if (grp.kind() == GroupKind::DyadicAffine && !n.elems.empty() && !exact) {
    for (int orientation = 0; orientation < 2; ++orientation) {
      bool ok = true;
      int sign = 0;
      std::optional<Dyadic> min_step;
      for (const auto& x0 : n.elems) {
        const Elem x = orientation == 0 ? x0 : grp.inv(x0);
        const auto& ax = x.affine();
        if (ax.log2a < 0) ok = false;
        if (ax.b.sign() != 0) {
          if (sign != 0 && ax.b.sign() != sign) ok = false;
          sign = ax.b.sign();
        }
        if (ax.log2a == 0 && !ax.b.is_zero()) {
          const Dyadic step = ax.b.sign() < 0 ? -ax.b : ax.b;
          if (!min_step || step < *min_step) min_step = step;
        }
      }
      if (!ok) continue;
      const Elem h = orientation == 0 ? g : grp.inv(g);
      const auto& ah = h.affine();
      if (ah.log2a < 0 || (ah.b.sign() != 0 && ah.b.sign() != sign)) return Membership::No;
      std::int64_t n_max = ah.log2a;
      if (min_step) {
        const Rational ratio = (ah.b.sign() < 0 ? -ah.b : ah.b).to_rational() / min_step->to_rational();
        const BigInt steps = numerator(ratio) / denominator(ratio);
        if (steps > budget) break;
        n_max += steps.convert_to<std::int64_t>();
      } else if (!ah.b.is_zero() && n_max == 0) {
        return Membership::No;
      }
      if (n_max <= budget) {
        if (n_max == 0) {
          const bool unit = std::any_of(n.elems.begin(), n.elems.end(), [&](const Elem& x) { return grp.is_identity(x); });
          return grp.is_identity(g) && unit ? Membership::Yes : Membership::No;
        }
        limit = static_cast<int>(n_max);
        exact = true;
      }
      break;
    }
  }

  // Dyadic-affine generators that all expand (a >= 2): a product (a, b) has
  // b = sum of P_i b_i with integer prefix slopes P_i summing to less than a,
  // so b lies in [min(b_i, 0) a, max(b_i, 0) a] and has no larger
  // denominator than the generators. Anything else is not a nonempty product.
  std::function<bool(const Elem&)> impossible = [](const Elem&) { return false; };
  if (grp.kind() == GroupKind::DyadicAffine && !n.elems.empty()) {
    bool expanding = true;
    Dyadic lo = 0;
    Dyadic hi = 0;
    std::int64_t max_exp = 0;
    for (const auto& x : n.elems) {
      const auto& ax = x.affine();
      expanding = expanding && ax.log2a >= 1;
      lo = std::min(lo, ax.b);
      hi = std::max(hi, ax.b);
      max_exp = std::max(max_exp, ax.b.exponent());
    }
    if (expanding) {
      impossible = [lo, hi, max_exp](const Elem& r) {
        const auto& ar = r.affine();
        if (ar.log2a < 1 || ar.b.exponent() > max_exp) return true;
        return ar.b < lo.shifted(ar.log2a) || ar.b > hi.shifted(ar.log2a);
      };
      if (impossible(g)) return Membership::No;
    }
  }

  std::vector<Elem> inverses;
  inverses.reserve(n.elems.size());
  for (const auto& x : n.elems) inverses.push_back(grp.inv(x));

  // Depth-first search for g = x_1 x_2 ... x_k, peeling generators off the
  // left. failed[r] records the largest remaining depth already refuted.
  std::unordered_map<Elem, int, ElemHash> failed;
  auto search = [&](auto&& self, const Elem& r, int depth_left) -> bool {
    for (std::size_t i = 0; i < inverses.size(); ++i) {
      Elem rest = grp.mul(inverses[i], r);
      if (grp.is_identity(rest)) return true;
      if (depth_left <= 1) continue;
      if (n.height && apply_height(grp, n.height->coeffs, rest) < min_gen) continue;
      if (impossible(rest)) continue;
      auto it = failed.find(rest);
      if (it != failed.end() && it->second >= depth_left - 1) continue;
      if (self(self, rest, depth_left - 1)) return true;
      failed[rest] = std::max(failed[rest], depth_left - 1);
    }
    return false;
  };
  if (limit >= 1 && search(search, g, limit)) return Membership::Yes;
  return exact ? Membership::No : Membership::Unknown;
}

bool slab_member(const SetExpr::Node& n, const Elem& g) {
  const auto& x = g.affine();
  const Rational a = Dyadic::pow2(x.log2a).to_rational();
  const Rational v = a * n.gamma + x.b.to_rational();
  return n.alpha <= v && v <= n.beta;
}

Membership and3(Membership x, Membership y) {
  if (x == Membership::No || y == Membership::No) return Membership::No;
  if (x == Membership::Yes && y == Membership::Yes) return Membership::Yes;
  return Membership::Unknown;
}

Membership or3(Membership x, Membership y) {
  if (x == Membership::Yes || y == Membership::Yes) return Membership::Yes;
  if (x == Membership::No && y == Membership::No) return Membership::No;
  return Membership::Unknown;
}

Membership not3(Membership x) {
  if (x == Membership::Yes) return Membership::No;
  if (x == Membership::No) return Membership::Yes;
  return Membership::Unknown;
}

Membership from_bool(bool b) { return b ? Membership::Yes : Membership::No; }

}  // namespace

Membership member(const SetExpr& a, const Elem& g, int budget) {
  const auto& n = a.node();
  n.group.require_owns(g);
  switch (n.kind) {
    case SetKind::All: return Membership::Yes;
    case SetKind::Empty: return Membership::No;
    case SetKind::Finite:
    case SetKind::Greedy: return from_bool(n.elem_set.count(g) != 0);
    case SetKind::Ball:
      if (n.ball_window) return from_bool(n.ball_window->contains(g));
      return from_bool(n.group.word_length(g, n.radius).has_value());
    case SetKind::Translate: return member(*n.a, n.group.mul(n.group.inv(*n.t), g), budget);
    case SetKind::Union: {
      const auto x = member(*n.a, g, budget);
      if (x == Membership::Yes) return x;
      return or3(x, member(*n.b, g, budget));
    }
    case SetKind::Intersect: {
      const auto x = member(*n.a, g, budget);
      if (x == Membership::No) return x;
      return and3(x, member(*n.b, g, budget));
    }
    case SetKind::Diff: {
      const auto x = member(*n.a, g, budget);
      if (x == Membership::No) return x;
      return and3(x, not3(member(*n.b, g, budget)));
    }
    case SetKind::Semigroup: return semigroup_member(n, g, budget);
    case SetKind::Slab: return from_bool(slab_member(n, g));
  }
  return Membership::Unknown;
}

bool contains(const SetExpr& a, const Elem& g, int budget) {
  const auto m = member(a, g, budget);
  if (m == Membership::Unknown) {
    throw BudgetExceeded("membership of " + a.group().format(g) + " in " + a.to_string() +
                         " undecided with word budget " + std::to_string(budget) +
                         "; increase the budget slack");
  }
  return m == Membership::Yes;
}

Materialized materialize(const SetExpr& a, const Window& w, int slack) {
  Materialized out;
  const int budget = w.budget(slack);
  for (const auto& g : w.elements()) {
    switch (member(a, g, budget)) {
      case Membership::Yes: out.elements.push_back(g); break;
      case Membership::No: break;
      case Membership::Unknown: out.undecided.push_back(g); break;
    }
  }
  return out;
}

std::vector<Elem> materialize_exact(const SetExpr& a, const Window& w, int slack) {
  auto m = materialize(a, w, slack);
  if (m.budget_exceeded()) {
    throw BudgetExceeded("membership of " + w.group().format(m.undecided.front()) + " in " +
                         a.to_string() + " undecided with word budget " +
                         std::to_string(w.budget(slack)) + "; increase the budget slack");
  }
  return std::move(m.elements);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class SetParser {
 public:
  SetParser(const Group& g, std::string_view text) : g_(g), s_(text) {}

  SetExpr parse() {
    SetExpr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " in set expression '" + std::string(s_) + "'", pos_);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  // Index one past the bracket matching the opener at s_[i].
  std::size_t match(std::size_t i, char open, char close) const {
    int depth = 0;
    for (std::size_t j = i; j < s_.size(); ++j) {
      if (s_[j] == open) ++depth;
      if (s_[j] == close && --depth == 0) return j + 1;
    }
    throw ParseError(std::string("unbalanced '") + open + "'", i);
  }

  SetExpr expr() {
    SetExpr lhs = term();
    for (;;) {
      const char c = peek();
      if (c != '|' && c != '&' && c != '\\') return lhs;
      ++pos_;
      SetExpr rhs = term();
      if (c == '|') lhs = SetExpr::unite(lhs, rhs);
      if (c == '&') lhs = SetExpr::intersect(lhs, rhs);
      if (c == '\\') lhs = SetExpr::diff(lhs, rhs);
    }
  }

  SetExpr translate_from(std::size_t elem_start, std::size_t elem_end) {
    const Elem t = g_.parse_elem(s_.substr(elem_start, elem_end - elem_start), elem_start);
    pos_ = elem_end;
    expect('*');
    return SetExpr::translate(t, term());
  }

  SetExpr term() {
    const char c = peek();
    if (c == '\0') fail("expected a set expression");
    if (c == '(') {
      const std::size_t close = match(pos_, '(', ')');
      std::size_t k = close;
      while (k < s_.size() && std::isspace(static_cast<unsigned char>(s_[k]))) ++k;
      if (k < s_.size() && s_[k] == '*') return translate_from(pos_, close);
      ++pos_;
      SetExpr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = pos_;
      while (j < s_.size() && std::isalpha(static_cast<unsigned char>(s_[j]))) ++j;
      const std::string_view ident = s_.substr(pos_, j - pos_);
      std::size_t k = j;
      while (k < s_.size() && std::isspace(static_cast<unsigned char>(s_[k]))) ++k;
      const char next = k < s_.size() ? s_[k] : '\0';
      if ((ident == "all" || ident == "empty") && next != '*') {
        pos_ = j;
        return ident == "all" ? SetExpr::all(g_) : SetExpr::empty(g_);
      }
      if ((ident == "finite" && next == '{') ||
          ((ident == "ball" || ident == "semigroup" || ident == "slab" || ident == "greedy") &&
           next == '(')) {
        pos_ = k;
        return atom(ident);
      }
    }
    // An element followed by '*'.
    const auto star = s_.find('*', pos_);
    if (star == std::string_view::npos) fail("expected a set expression");
    return translate_from(pos_, star);
  }

  int int_arg() {
    const std::size_t close = match(pos_, '(', ')');
    const auto inner = s_.substr(pos_ + 1, close - pos_ - 2);
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(std::string(inner), &used);
    } catch (const std::exception&) {
      fail("expected an integer argument");
    }
    if (used == 0) fail("expected an integer argument");
    pos_ = close;
    return v;
  }

  SetExpr atom(std::string_view ident) {
    if (ident == "finite") {
      const std::size_t close = match(pos_, '{', '}');
      const auto inner = s_.substr(pos_ + 1, close - pos_ - 2);
      std::vector<Elem> elems;
      if (inner.find_first_not_of(" \t\n") != std::string_view::npos) elems = parse_list(inner, pos_ + 1);
      pos_ = close;
      return SetExpr::finite(g_, std::move(elems));
    }
    if (ident == "ball") return SetExpr::ball(g_, int_arg());
    if (ident == "greedy") return SetExpr::greedy(g_, int_arg());
    const std::size_t open = pos_;
    const std::size_t close = match(pos_, '(', ')');
    const auto inner = s_.substr(open + 1, close - open - 2);
    pos_ = close;
    if (ident == "semigroup") {
      int depth = 0;
      std::size_t semi = std::string_view::npos;
      for (std::size_t i = 0; i < inner.size(); ++i) {
        if (inner[i] == '(') ++depth;
        if (inner[i] == ')') --depth;
        if (inner[i] == ';' && depth == 0) semi = i;
      }
      bool with_e = false;
      auto gens_text = inner;
      if (semi != std::string_view::npos) {
        auto tail = inner.substr(semi + 1);
        while (!tail.empty() && std::isspace(static_cast<unsigned char>(tail.front()))) tail.remove_prefix(1);
        while (!tail.empty() && std::isspace(static_cast<unsigned char>(tail.back()))) tail.remove_suffix(1);
        if (tail != "e") throw ParseError("expected ';e' in semigroup", open + 1 + semi);
        with_e = true;
        gens_text = inner.substr(0, semi);
      }
      return SetExpr::semigroup(g_, parse_list(gens_text, open + 1), with_e);
    }
    // slab(alpha,beta,gamma)
    std::vector<Rational> args;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= inner.size(); ++i) {
      if (i == inner.size() || inner[i] == ',') {
        args.push_back(parse_rational(inner.substr(start, i - start), open + 1 + start));
        start = i + 1;
      }
    }
    if (args.size() != 3) throw ParseError("slab takes three rationals", open);
    return SetExpr::slab(g_, args[0], args[1], args[2]);
  }

  std::vector<Elem> parse_list(std::string_view text, std::size_t offset) {
    try {
      return g_.parse_elem_list(text);
    } catch (const ParseError& e) {
      throw ParseError(e.message(), offset + e.position());
    }
  }

  const Group& g_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

SetExpr SetExpr::parse(const Group& g, std::string_view text) { return SetParser(g, text).parse(); }

}  // namespace paradox
