#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "paradox/group.hpp"
#include "paradox/pwt.hpp"
#include "paradox/report.hpp"
#include "paradox/set_expr.hpp"

namespace paradox {

/// Window shadow of a paradoxical decomposition: every x in A∩W gets two
/// translators s1(x), s2(x) in S such that all images s_i(x)·x are pairwise
/// distinct and lie in A.
struct MatchCert {
  struct Entry {
    Elem x;
    Elem s1;
    Elem s2;
  };
  SetExpr set;
  std::vector<Elem> translators;
  Window window;
  std::vector<Entry> assignment;  // window order
};

/// Hall obstruction: D ⊆ A∩W with |N_S(D) ∩ A| < 2|D|.
struct DeficiencyCert {
  SetExpr set;
  std::vector<Elem> translators;
  Window window;
  std::vector<Elem> violator;      // window order
  std::vector<Elem> neighborhood;  // N_S(D) ∩ A, first-seen order
};

using DoublingResult = std::variant<MatchCert, DeficiencyCert>;

/// Decides whether A∩W admits two injections into A with displacements in
/// S and disjoint images. Exactly one certificate is returned.
///
/// Left vertices are (x, i) for x in A∩W, i in {1, 2}; right vertices are
/// the points s·x in A. A maximum matching is computed with Hopcroft–Karp
/// and, when it is not left-perfect, the alternating-reachable left set is
/// collapsed to a violator D (both copies of x share their neighborhood, so
/// they are reached together). Throws BudgetExceeded when a semigroup
/// membership is undecidable within the window budget.
DoublingResult doubling_matching(const SetExpr& a, std::span<const Elem> s, const Window& w,
                                 int slack = 4);

/// A = ∪_{j<split} t_j·A_j = ∪_{j>=split} t_j·A_j with pairwise disjoint
/// pieces A_j ⊆ A.
struct ParadoxWitness {
  SetExpr set;
  std::vector<Piece> parts;
  std::size_t split = 0;
};

ParadoxWitness witness_from_matching(const MatchCert& c);

// If every point uses the same translator pair (s1, s2), the symbolic
// witness with pieces s1·A, s2·A; nullopt otherwise.
std::optional<ParadoxWitness> uniform_witness(const MatchCert& c);

/// Checks on W: pieces disjoint and inside A, each family of translates
/// covers A∩W, stays inside A and is pairwise disjoint.
ValidationReport witness_check(const ParadoxWitness& w, const Window& win, int slack = 4);

struct SemigroupCollision {
  std::string word_a;  // e.g. "s s", "t"; empty word is "e"
  std::string word_b;
  Elem value;
  int length = 0;  // length of the longer word
};

/// Enumerates the 2^(L+1)-1 positive words in {s, t} of length <= L. If they
/// are pairwise distinct, returns the witness with A = semigroup(s,t;e) and
/// parts (s·A, s^-1), (t·A, t^-1); otherwise the first collision.
std::variant<ParadoxWitness, SemigroupCollision> free_semigroup_witness(const Group& g, const Elem& s,
                                                                         const Elem& t, int max_len);

// The two maps A -> A with disjoint images carried by a witness:
// sigma_plus(x) = t_j^-1 x on t_j·A_j for j < split, sigma_minus likewise.
std::pair<PwT, PwT> base_maps(const ParadoxWitness& w);

/// n maps A -> A with pairwise disjoint images, the first n leaves of the
/// depth-ceil(log2 n) composition tree of the base maps (+ before -).
std::vector<PwT> iterate_disjoint(const ParadoxWitness& w, int n, const Window& win, int slack = 4);

// Checks the maps have pairwise disjoint images on A∩W.
ValidationReport images_disjoint(const std::vector<PwT>& maps, const Window& win, int slack = 4);

/// m[A] <= n[B] on the window: each x in A∩W gets m translators with
/// images in B, every point of B used at most n times.
struct FlowCert {
  struct Entry {
    Elem x;
    std::vector<Elem> translators;  // one per copy
  };
  int m = 1;
  int n = 1;
  SetExpr set_a;
  SetExpr set_b;
  std::vector<Elem> translators;
  Window window;
  std::vector<Entry> assignment;
};

/// n·|N_S(D) ∩ B| < m·|D| for the violator D ⊆ A∩W.
struct FlowDeficiency {
  int m = 1;
  int n = 1;
  SetExpr set_a;
  SetExpr set_b;
  std::vector<Elem> translators;
  Window window;
  std::vector<Elem> violator;
  std::vector<Elem> neighborhood;
};

using TypeOrderResult = std::variant<FlowCert, FlowDeficiency>;

/// Integer max-flow source -> (A∩W)×m -> B -> sink with B-capacities n.
/// The violator of a non-saturating flow is read off the residual cut.
TypeOrderResult type_order(int m, const SetExpr& a, int n, const SetExpr& b, std::span<const Elem> s,
                           const Window& w, int slack = 4);

}  // namespace paradox
