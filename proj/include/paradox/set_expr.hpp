#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "paradox/dyadic.hpp"
#include "paradox/group.hpp"

namespace paradox {

enum class SetKind {
  All,
  Empty,
  Finite,
  Ball,
  Translate,
  Union,
  Intersect,
  Diff,
  Semigroup,
  Slab,
  Greedy,
};

/// Immutable symbolic subset of a group. Cheap to copy.
///
/// Membership is exact for every constructor except Semigroup, whose
/// membership is decided by a bounded search over positive words; see
/// member(). The factory functions apply only syntactic simplifications
/// (merging nested translates, dropping identities, absorbing all/empty),
/// so two equal sets may print differently. Set equality is only ever
/// decided extensionally on a window.
class SetExpr {
 public:
  static SetExpr all(const Group& g);
  static SetExpr empty(const Group& g);
  static SetExpr finite(const Group& g, std::vector<Elem> elems);
  static SetExpr ball(const Group& g, int radius);
  static SetExpr translate(const Elem& t, const SetExpr& a);
  static SetExpr unite(const SetExpr& a, const SetExpr& b);
  static SetExpr intersect(const SetExpr& a, const SetExpr& b);
  static SetExpr diff(const SetExpr& a, const SetExpr& b);
  static SetExpr semigroup(const Group& g, std::vector<Elem> gens, bool include_identity);
  // {(a,b) : alpha <= a*gamma + b <= beta}; dyadic-affine group only.
  static SetExpr slab(const Group& g, Rational alpha, Rational beta, Rational gamma);
  // The first n elements of the greedy small-set sequence.
  static SetExpr greedy(const Group& g, int n);

  static SetExpr parse(const Group& g, std::string_view text);

  const Group& group() const;
  SetKind kind() const;
  std::string to_string() const;

  // Accessors; only meaningful for the matching kind.
  const std::vector<Elem>& elements() const;  // Finite, Greedy (in order), Semigroup generators
  const Elem& translator() const;             // Translate
  const SetExpr& lhs() const;                 // Translate child, binary left
  const SetExpr& rhs() const;                 // binary right
  int radius() const;                         // Ball
  int count() const;                          // Greedy
  bool includes_identity() const;             // Semigroup

  struct Node;
  explicit SetExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  const Node& node() const { return *node_; }

  friend bool same_syntax(const SetExpr& a, const SetExpr& b) {
    return a.node_ == b.node_ || a.to_string() == b.to_string();
  }

 private:
  std::shared_ptr<const Node> node_;
};

enum class Membership { No, Yes, Unknown };

// Default membership budget (maximal positive-word length searched) used
// when no window is involved.
inline constexpr int kDefaultBudget = 16;

/// Exact membership test. Unknown is returned only when a semigroup
/// membership could not be settled by words of length <= budget; it is
/// never a wrong answer.
Membership member(const SetExpr& a, const Elem& g, int budget = kDefaultBudget);

// As member(), but Unknown raises BudgetExceeded naming the element.
bool contains(const SetExpr& a, const Elem& g, int budget = kDefaultBudget);

struct Materialized {
  std::vector<Elem> elements;  // window order
  std::vector<Elem> undecided;  // budget exceeded
  bool budget_exceeded() const { return !undecided.empty(); }
};

Materialized materialize(const SetExpr& a, const Window& w, int slack = 4);

// Materialize, raising BudgetExceeded if any membership is undecided.
std::vector<Elem> materialize_exact(const SetExpr& a, const Window& w, int slack = 4);

}  // namespace paradox
