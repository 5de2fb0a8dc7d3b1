#pragma once

#include <optional>
#include <span>
#include <vector>

#include "paradox/group.hpp"
#include "paradox/pwt.hpp"
#include "paradox/set_expr.hpp"

namespace paradox {

/// Greedy sequence x_0, x_1, ... in shortlex order with
/// x_n not in {x_k x_l^-1 x_m : k, l, m < n}. Such a set A satisfies
/// |sA ∩ A| <= 2 for every s != e.
///
/// Throws Error if more than max_enumerated elements would be scanned.
std::vector<Elem> greedy_small_set(const Group& g, int n, std::size_t max_enumerated = 5'000'000);

// Independent re-verification of the defining exclusion; returns the first
// offending index, if any.
std::optional<std::size_t> greedy_exclusion_violation(const Group& g, std::span<const Elem> seq);

struct PairIntersection {
  std::size_t max_size = 0;
  std::optional<Elem> attained_by;  // first s in ball order attaining the maximum
};

// max over s in ball(r) \ {e} of |sA ∩ A|.
PairIntersection check_pair_intersections(const Group& g, std::span<const Elem> a, int r);

/// First g in the window with F·g ⊆ A, found by scanning the window.
std::optional<Elem> absorbing_check(const SetExpr& a, std::span<const Elem> f, const Window& w);

/// The same query computed as the first window element of the intersection
/// of the translates t·A, t in F^-1.
std::optional<Elem> absorbing_check_by_intersection(const SetExpr& a, std::span<const Elem> f,
                                                    const Window& w);

/// Window-level semidecider for A ≾ Γ∖B: an injective map of A∩W into the
/// complement of B with displacements in S. nullopt means nothing was found
/// for this S and W, which proves nothing.
std::optional<PwT> small_check(const SetExpr& a, const SetExpr& b, std::span<const Elem> s,
                               const Window& w);

}  // namespace paradox
