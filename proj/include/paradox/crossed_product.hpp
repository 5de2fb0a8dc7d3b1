#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "paradox/dyadic.hpp"
#include "paradox/group.hpp"
#include "paradox/paradox.hpp"
#include "paradox/report.hpp"
#include "paradox/set_expr.hpp"

namespace paradox {

/// Formal rational combination Σ q_i·1_{A_i} of indicator functions.
/// Terms with syntactically equal sets are merged, zero and empty terms are
/// dropped, and the terms are kept sorted by the printed set.
class Coefficient {
 public:
  struct Term {
    SetExpr set;
    Rational q;
  };

  explicit Coefficient(const Group& g) : group_(g) {}
  static Coefficient indicator(const SetExpr& a, const Rational& q = 1);

  const Group& group() const { return group_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const SetExpr& a, const Rational& q);
  Coefficient& operator+=(const Coefficient& other);
  Coefficient scaled(const Rational& q) const;
  // t.f, the function x -> f(t^-1 x); every set is translated by t.
  Coefficient translated(const Elem& t) const;
  // Pointwise product, using 1_A·1_B = 1_{A∩B}.
  friend Coefficient operator*(const Coefficient& x, const Coefficient& y);

  Rational at(const Elem& point, int budget = kDefaultBudget) const;

 private:
  Group group_;
  std::vector<Term> terms_;
};

/// Finite sum Σ_t f_t u_t in the algebraic crossed product, with
/// multiplication (f u_t)(g u_r) = f·(t.g) u_{tr} and involution
/// (f u_t)* = (t^-1.f) u_{t^-1}.
class CPElem {
 public:
  explicit CPElem(const Group& g) : group_(g) {}
  // q·1_A u_t.
  static CPElem term(const SetExpr& a, const Elem& t, const Rational& q = 1);
  static CPElem indicator(const SetExpr& a);  // 1_A u_e
  static CPElem unitary(const Group& g, const Elem& t);  // 1_all u_t

  const Group& group() const { return group_; }
  const std::map<Elem, Coefficient>& support() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  void add(const Elem& t, const Coefficient& f);

  // f_t evaluated at a point; zero for t outside the support.
  Rational at(const Elem& t, const Elem& point, int budget = kDefaultBudget) const;

  // "q*[set]u(t) + ...", or "0".
  std::string to_string() const;
  static CPElem parse(const Group& g, std::string_view text);

 private:
  Group group_;
  std::map<Elem, Coefficient> coeffs_;
};

CPElem cp_add(const CPElem& x, const CPElem& y);
CPElem cp_sub(const CPElem& x, const CPElem& y);
CPElem cp_scale(const CPElem& x, const Rational& q);
CPElem cp_mul(const CPElem& x, const CPElem& y);
CPElem cp_adjoint(const CPElem& x);

/// A point where two elements differ: x_t(point) != y_t(point).
struct CPDifference {
  Elem t;
  Elem point;
  Rational lhs;
  Rational rhs;
};

/// Extensional comparison of every coefficient on the window; nullopt when
/// x and y agree at every (t, point) with point in W.
std::optional<CPDifference> cp_compare(const CPElem& x, const CPElem& y, const Window& w, int slack = 4);

/// Projection p = 1_A and isometries v, w with v*v = p = w*w and
/// orthogonal ranges inside p.
struct PIWitness {
  SetExpr set;
  CPElem p;
  CPElem v;
  CPElem w;
};

/// From A = ∪_{j<split} t_j A_j = ∪_{j>=split} t_j A_j, with p_j = 1_{A_j}:
/// v = Σ_{j<split} p_j u_{t_j}^*, w = Σ_{j>=split} p_j u_{t_j}^*.
/// The overload with a window first runs witness_check and throws
/// InvariantViolation if it fails.
PIWitness pi_witness(const ParadoxWitness& w);
PIWitness pi_witness(const ParadoxWitness& w, const Window& win, int slack = 4);

/// Checks v*v = p, w*w = p, vv*·ww* = 0, p·vv* = vv* and p·ww* = ww*
/// symbolically, comparing coefficients extensionally on W.
ValidationReport verify_pi_witness(const PIWitness& pw, const Window& win, int slack = 4);

struct CornerReport {
  struct Entry {
    Elem t;
    std::size_t support = 0;  // points of W where the t-coefficient is nonzero
  };
  CPElem result;
  std::vector<Entry> off_diagonal;  // t != e, in support order
  std::size_t max_support() const;
};

/// 1_A·x·1_A = Σ_t 1_{A∩tA}·f_t u_t, with the window support of every
/// off-diagonal coefficient.
CornerReport corner_compress(const SetExpr& a, const CPElem& x, const Window& w, int slack = 4);

}  // namespace paradox
