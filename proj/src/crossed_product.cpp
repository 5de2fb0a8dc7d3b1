#include "paradox/crossed_product.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "paradox/errors.hpp"

namespace paradox {

namespace {

using ElemSet = std::unordered_set<Elem, ElemHash>;

// Translates finite sets elementwise so that products of finite pieces stay
// finite and can be intersected exactly.
SetExpr translate_set(const Elem& t, const SetExpr& a) {
  if (a.kind() != SetKind::Finite) return SetExpr::translate(t, a);
  const Group& g = a.group();
  std::vector<Elem> moved;
  moved.reserve(a.elements().size());
  for (const auto& x : a.elements()) moved.push_back(g.mul(t, x));
  return SetExpr::finite(g, std::move(moved));
}

SetExpr meet(const SetExpr& a, const SetExpr& b) {
  if (a.kind() == SetKind::Finite && b.kind() == SetKind::Finite) {
    const ElemSet right(b.elements().begin(), b.elements().end());
    std::vector<Elem> both;
    for (const auto& x : a.elements()) {
      if (right.count(x)) both.push_back(x);
    }
    if (both.empty()) return SetExpr::empty(a.group());
    return SetExpr::finite(a.group(), std::move(both));
  }
  return SetExpr::intersect(a, b);
}

void require_same_group(const Group& a, const Group& b) {
  if (!(a == b)) throw GroupMismatch("crossed-product operands from different groups");
}

// Index of the bracket closing the one at `open`.
std::size_t closing(std::string_view text, std::size_t open, char left, char right) {
  int depth = 0;
  for (std::size_t i = open; i < text.size(); ++i) {
    if (text[i] == left) ++depth;
    if (text[i] == right && --depth == 0) return i;
  }
  throw ParseError(std::string("unbalanced '") + left + "'", open);
}

std::size_t skip_space(std::string_view text, std::size_t pos) {
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  return pos;
}

}  // namespace

// ---------------------------------------------------------------------------
// Coefficient

Coefficient Coefficient::indicator(const SetExpr& a, const Rational& q) {
  Coefficient c(a.group());
  c.add(a, q);
  return c;
}

void Coefficient::add(const SetExpr& a, const Rational& q) {
  require_same_group(group_, a.group());
  if (q == 0 || a.kind() == SetKind::Empty) return;
  const std::string key = a.to_string();
  auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                             [](const Term& t, const std::string& k) { return t.set.to_string() < k; });
  if (it != terms_.end() && it->set.to_string() == key) {
    it->q += q;
    if (it->q == 0) terms_.erase(it);
    return;
  }
  terms_.insert(it, Term{a, q});
}

Coefficient& Coefficient::operator+=(const Coefficient& other) {
  for (const auto& t : other.terms_) add(t.set, t.q);
  return *this;
}

Coefficient Coefficient::scaled(const Rational& q) const {
  Coefficient out(group_);
  for (const auto& t : terms_) out.add(t.set, t.q * q);
  return out;
}

Coefficient Coefficient::translated(const Elem& t) const {
  Coefficient out(group_);
  for (const auto& term : terms_) out.add(translate_set(t, term.set), term.q);
  return out;
}

Coefficient operator*(const Coefficient& x, const Coefficient& y) {
  require_same_group(x.group_, y.group_);
  Coefficient out(x.group_);
  for (const auto& a : x.terms_) {
    for (const auto& b : y.terms_) out.add(meet(a.set, b.set), a.q * b.q);
  }
  return out;
}

Rational Coefficient::at(const Elem& point, int budget) const {
  Rational sum = 0;
  for (const auto& t : terms_) {
    if (contains(t.set, point, budget)) sum += t.q;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// CPElem

CPElem CPElem::term(const SetExpr& a, const Elem& t, const Rational& q) {
  CPElem x(a.group());
  x.add(t, Coefficient::indicator(a, q));
  return x;
}

CPElem CPElem::indicator(const SetExpr& a) { return term(a, a.group().identity()); }

CPElem CPElem::unitary(const Group& g, const Elem& t) { return term(SetExpr::all(g), t); }

void CPElem::add(const Elem& t, const Coefficient& f) {
  group_.require_owns(t);
  require_same_group(group_, f.group());
  if (f.is_zero()) return;
  auto [it, fresh] = coeffs_.try_emplace(t, f);
  if (fresh) return;
  it->second += f;
  if (it->second.is_zero()) coeffs_.erase(it);
}

Rational CPElem::at(const Elem& t, const Elem& point, int budget) const {
  auto it = coeffs_.find(t);
  return it == coeffs_.end() ? Rational(0) : it->second.at(point, budget);
}

std::string CPElem::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (const auto& [t, f] : coeffs_) {
    for (const auto& term : f.terms()) {
      if (!out.empty()) out += " + ";
      out += rational_to_string(term.q) + "*[" + term.set.to_string() + "]u(" + group_.format(t) + ")";
    }
  }
  return out;
}

CPElem CPElem::parse(const Group& g, std::string_view text) {
  CPElem x(g);
  std::size_t pos = skip_space(text, 0);
  if (pos < text.size() && text[pos] == '0' && skip_space(text, pos + 1) == text.size()) return x;
  while (true) {
    const std::size_t star = text.find('*', pos);
    if (star == std::string_view::npos || star + 1 >= text.size() || text[star + 1] != '[') {
      throw ParseError("expected 'q*[set]u(t)'", pos);
    }
    const Rational q = parse_rational(text.substr(pos, star - pos), pos);
    const std::size_t set_end = closing(text, star + 1, '[', ']');
    SetExpr set = [&] {
      try {
        return SetExpr::parse(g, text.substr(star + 2, set_end - star - 2));
      } catch (const ParseError& e) {
        throw ParseError(e.message(), star + 2 + e.position());
      }
    }();
    std::size_t p = set_end + 1;
    if (text.substr(p, 2) != "u(") throw ParseError("expected 'u(' after the coefficient set", p);
    const std::size_t t_end = closing(text, p + 1, '(', ')');
    Elem t = [&] {
      try {
        return g.parse_elem(text.substr(p + 2, t_end - p - 2));
      } catch (const ParseError& e) {
        throw ParseError(e.message(), p + 2 + e.position());
      }
    }();
    x.add(t, Coefficient::indicator(set, q));
    pos = skip_space(text, t_end + 1);
    if (pos == text.size()) return x;
    if (text[pos] != '+') throw ParseError("expected '+' between terms", pos);
    pos = skip_space(text, pos + 1);
  }
}

CPElem cp_add(const CPElem& x, const CPElem& y) {
  require_same_group(x.group(), y.group());
  CPElem out = x;
  for (const auto& [t, f] : y.support()) out.add(t, f);
  return out;
}

CPElem cp_scale(const CPElem& x, const Rational& q) {
  CPElem out(x.group());
  for (const auto& [t, f] : x.support()) out.add(t, f.scaled(q));
  return out;
}

CPElem cp_sub(const CPElem& x, const CPElem& y) { return cp_add(x, cp_scale(y, -1)); }

CPElem cp_mul(const CPElem& x, const CPElem& y) {
  require_same_group(x.group(), y.group());
  const Group& g = x.group();
  CPElem out(g);
  for (const auto& [t, f] : x.support()) {
    for (const auto& [r, h] : y.support()) out.add(g.mul(t, r), f * h.translated(t));
  }
  return out;
}

CPElem cp_adjoint(const CPElem& x) {
  const Group& g = x.group();
  CPElem out(g);
  for (const auto& [t, f] : x.support()) {
    const Elem inv = g.inv(t);
    out.add(inv, f.translated(inv));
  }
  return out;
}

std::optional<CPDifference> cp_compare(const CPElem& x, const CPElem& y, const Window& w, int slack) {
  require_same_group(x.group(), y.group());
  const int budget = w.budget(slack);
  std::vector<Elem> ts;
  for (const auto& [t, f] : x.support()) ts.push_back(t);
  for (const auto& [t, f] : y.support()) {
    if (!x.support().count(t)) ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  for (const auto& t : ts) {
    for (const auto& point : w.elements()) {
      Rational lhs = x.at(t, point, budget);
      Rational rhs = y.at(t, point, budget);
      if (lhs != rhs) return CPDifference{t, point, std::move(lhs), std::move(rhs)};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Proper infiniteness

PIWitness pi_witness(const ParadoxWitness& w) {
  const Group& g = w.set.group();
  if (w.split > w.parts.size()) throw InvariantViolation("witness split exceeds its number of pieces");
  PIWitness pw{w.set, CPElem::indicator(w.set), CPElem(g), CPElem(g)};
  for (std::size_t j = 0; j < w.parts.size(); ++j) {
    const auto& piece = w.parts[j];
    // p_j u_{t_j}^* = 1_{A_j} u_{t_j^-1}.
    const CPElem term = CPElem::term(piece.set, g.inv(piece.translator));
    auto& target = j < w.split ? pw.v : pw.w;
    target = cp_add(target, term);
  }
  return pw;
}

PIWitness pi_witness(const ParadoxWitness& w, const Window& win, int slack) {
  const auto report = witness_check(w, win, slack);
  if (!report.passed()) throw InvariantViolation("invalid witness: " + report.summary());
  return pi_witness(w);
}

ValidationReport verify_pi_witness(const PIWitness& pw, const Window& win, int slack) {
  ValidationReport r;
  const Group& g = win.group();
  const CPElem zero(g);
  const CPElem vs = cp_adjoint(pw.v);
  const CPElem ws = cp_adjoint(pw.w);
  const CPElem vvs = cp_mul(pw.v, vs);
  const CPElem wws = cp_mul(pw.w, ws);
  auto check = [&](const std::string& name, const CPElem& lhs, const CPElem& rhs) {
    r.pass(name);
    if (auto d = cp_compare(lhs, rhs, win, slack)) {
      r.fail(name, "coefficient of u(" + g.format(d->t) + ") at " + g.format(d->point) + " is " +
                       rational_to_string(d->lhs) + ", expected " + rational_to_string(d->rhs));
    }
  };
  check("v*v=p", cp_mul(vs, pw.v), pw.p);
  check("w*w=p", cp_mul(ws, pw.w), pw.p);
  check("vv*ww*=0", cp_mul(vvs, wws), zero);
  check("p vv*=vv*", cp_mul(pw.p, vvs), vvs);
  check("p ww*=ww*", cp_mul(pw.p, wws), wws);
  return r;
}

// ---------------------------------------------------------------------------
// Corners

std::size_t CornerReport::max_support() const {
  std::size_t best = 0;
  for (const auto& e : off_diagonal) best = std::max(best, e.support);
  return best;
}

CornerReport corner_compress(const SetExpr& a, const CPElem& x, const Window& w, int slack) {
  const Group& g = a.group();
  const CPElem p = CPElem::indicator(a);
  CornerReport rep{cp_mul(cp_mul(p, x), p), {}};
  const int budget = w.budget(slack);
  for (const auto& [t, f] : rep.result.support()) {
    if (g.is_identity(t)) continue;
    CornerReport::Entry e{t, 0};
    for (const auto& point : w.elements()) {
      if (f.at(point, budget) != 0) ++e.support;
    }
    rep.off_diagonal.push_back(std::move(e));
  }
  return rep;
}

}  // namespace paradox
