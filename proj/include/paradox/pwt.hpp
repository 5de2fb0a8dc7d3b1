#pragma once

#include <optional>
#include <vector>

#include "paradox/group.hpp"
#include "paradox/report.hpp"
#include "paradox/set_expr.hpp"

namespace paradox {

struct Piece {
  SetExpr set;
  Elem translator;
};

/// Piecewise translation x -> t(x)·x where t(x) is the translator of the
/// unique piece containing x. Pieces may be infinite; disjointness, cover
/// and injectivity are only ever checked on windows (pwt_validate).
class PwT {
 public:
  // An empty displacement list is filled with the distinct piece translators.
  PwT(SetExpr domain, std::vector<Piece> pieces, std::vector<Elem> displacements = {});

  static PwT identity(const SetExpr& domain);
  static PwT translation(const SetExpr& domain, const Elem& t);

  const Group& group() const { return domain_.group(); }
  const SetExpr& domain() const { return domain_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  const std::vector<Elem>& displacements() const { return displacements_; }

 private:
  SetExpr domain_;
  std::vector<Piece> pieces_;
  std::vector<Elem> displacements_;
};

// Throws DomainError outside the domain or when no piece contains g,
// InvariantViolation when two pieces do.
Elem pwt_apply(const PwT& sigma, const Elem& g, int budget = kDefaultBudget);

/// tau ∘ sigma on the common refinement {P_i ∩ s_i^-1·Q_j}, translators
/// t_j·s_i. The image of sigma on the window must lie in tau's domain.
PwT pwt_compose(const PwT& tau, const PwT& sigma, const Window& w, int slack = 4);

// Checks pieces-disjoint, pieces-cover-domain, injective and
// displacements-in-S on the window.
ValidationReport pwt_validate(const PwT& sigma, const Window& w, int slack = 4);

/// A ∼ B via partsA[j] = translators[j]·partsB[j].
struct EquiWitness {
  SetExpr set_a;
  SetExpr set_b;
  std::vector<SetExpr> parts_a;
  std::vector<SetExpr> parts_b;
  std::vector<Elem> translators;
};

ValidationReport check_equi_witness(const EquiWitness& w, const Window& win, int slack = 4);

struct BoundedResult {
  // F with A∩W ⊆ ∪_{t∈F} t·B, in ball order; empty optional when none exists in ball(r).
  std::optional<std::vector<Elem>> cover;
  // When not found: B is finite and |A∩W| > |ball(r)|·|B|, so no F ⊆ ball(r)
  // can exist on this window for counting reasons alone.
  bool refuted_by_counting = false;
};

/// Searches F ⊆ ball(r) with A∩W ⊆ ∪ t·B by greedy set cover followed by
/// removal of redundant translators. Not finding one is inconclusive for A ∝ B.
BoundedResult bounded_check(const SetExpr& a, const SetExpr& b, int search_radius, const Window& w,
                            int slack = 4);

// True iff A∩W ⊆ ∪_{t∈F} t·B.
bool covers(const SetExpr& a, const SetExpr& b, const std::vector<Elem>& f, const Window& w,
            int slack = 4);

}  // namespace paradox
