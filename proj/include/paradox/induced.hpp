#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "paradox/errors.hpp"
#include "paradox/group.hpp"
#include "paradox/report.hpp"

namespace paradox {

/// The Γ0-action table has no entry for r.x.
class IncompleteTable : public DomainError {
 public:
  using DomainError::DomainError;
};

enum class SubgroupKind {
  Cyclic,       // <w> in a free group
  Coordinates,  // span of some coordinate axes in Z^d
  SlopeKernel,  // {(1, b)} in the dyadic-affine group
};

/// A subgroup Γ0 with a canonical transversal: every g splits as g = rep·r
/// with r in Γ0 and rep depending only on the coset gΓ0.
class SubgroupSpec {
 public:
  static SubgroupSpec cyclic(const Group& g, const Elem& w);
  static SubgroupSpec coordinates(const Group& g, std::vector<int> axes);
  static SubgroupSpec slope_kernel(const Group& g);

  /// "cyclic:<word>", "coords:0,2" or "kernel".
  static SubgroupSpec parse(const Group& g, std::string_view text);

  const Group& group() const { return group_; }
  SubgroupKind kind() const { return kind_; }
  std::string to_string() const;

  // Generators of Γ0 (w; the unit vectors of the axes). Empty for the kernel,
  // which is not finitely generated.
  std::vector<Elem> generators() const;

  /// Exponents of r over generators(), or nullopt if r is not such a
  /// product (always nullopt for the kernel).
  std::optional<std::vector<std::int64_t>> exponents(const Elem& r) const;

  bool contains(const Elem& r) const;

 private:
  friend std::pair<Elem, Elem> coset_normalize(const SubgroupSpec& h, const Elem& g);

  SubgroupSpec(Group g, SubgroupKind kind) : group_(std::move(g)), kind_(kind) {}

  Group group_;
  SubgroupKind kind_;
  Elem w_;                // Cyclic generator
  Elem conjugator_;       // w = u c u^-1 with c cyclically reduced
  Elem core_;             // c
  std::vector<int> axes_;  // Coordinates
};

/// g = rep·r with r in Γ0 and rep the canonical coset representative.
/// For <w> with w = u c u^-1, c cyclically reduced, the representative is
/// m·u^-1 where m is the least element of the coset (g u)<c> in the
/// length-then-lexicographic element order.
std::pair<Elem, Elem> coset_normalize(const SubgroupSpec& h, const Elem& g);

/// Partial Γ0-action on opaque X-tokens. Entries for generators extend to
/// their powers and products; other elements must be listed explicitly.
class ActionTable {
 public:
  explicit ActionTable(SubgroupSpec h) : h_(std::move(h)) {}

  const SubgroupSpec& subgroup() const { return h_; }
  void set(const Elem& r, const std::string& x, const std::string& y);
  const std::map<std::pair<Elem, std::string>, std::string>& entries() const { return entries_; }

  /// r.x. Throws IncompleteTable naming (r, x) when the table has a gap.
  std::string act(const Elem& r, const std::string& x) const;

  /// Consistency of the listed entries: identities fix tokens, and
  /// (r'r).x = r'.(r.x) whenever all three are listed.
  ValidationReport validate() const;

 private:
  std::string act_generator(const Elem& gen, std::int64_t power, const std::string& x) const;

  SubgroupSpec h_;
  std::map<std::pair<Elem, std::string>, std::string> entries_;
};

/// A point π(rep, x) of the induced space Y = (Γ × X)/Γ0.
struct YPoint {
  Elem rep;
  std::string token;

  friend bool operator==(const YPoint&, const YPoint&) = default;
};

// π(g, x) with g normalized: (rep, r.x) for g = rep·r.
YPoint y_point(const ActionTable& table, const Elem& g, const std::string& x);

/// s.(rep, x): s·rep = rep'·r, giving (rep', r.x).
YPoint induced_act(const ActionTable& table, const Elem& s, const YPoint& p);

/// Token-level (X, Γ0)-paradox witness: E = ∪_{j<split} t_j.E_j =
/// ∪_{j>=split} t_j.E_j with pairwise disjoint E_j ⊆ E. The facts about X
/// are asserted, not computed.
struct TokenWitness {
  std::string set;
  std::vector<std::string> pieces;
  std::vector<Elem> translators;  // in Γ0
  std::size_t split = 0;
  std::vector<std::pair<std::size_t, std::size_t>> disjoint;  // asserted E_i ∩ E_j = ∅
  std::vector<std::vector<std::size_t>> covers;             // asserted E = ∪_{j in family} t_j.E_j
  std::vector<std::size_t> within;                          // asserted E_j ⊆ E
};

/// The compact-open set π({g} × E) of Y, kept with g split as rep·r.
struct YSet {
  Elem rep;
  Elem r;
  std::string token;

  friend bool operator==(const YSet&, const YSet&) = default;
};

/// F = π({t}×E), F_j = π({t}×E_j) and s_j = t t_j t^-1, so s_j t = t t_j.
struct InducedWitness {
  Elem t;
  TokenWitness source;
  YSet set;
  std::vector<YSet> pieces;
  std::vector<Elem> translators;  // s_j in Γ
};

/// Structural check of a token witness: sizes, translators in Γ0 and the
/// asserted facts covering every pair and both families.
ValidationReport check_token_witness(const SubgroupSpec& h, const TokenWitness& w);

InducedWitness induce_witness(const SubgroupSpec& h, const TokenWitness& w, const Elem& t);

/// Replays the reduction of the induced witness to the X-facts:
/// s_j·t = t·t_j exactly, every F_j lies in the t-fiber over E_j, and the
/// disjointness and covering facts are those asserted for X.
ValidationReport check_induced_witness(const SubgroupSpec& h, const InducedWitness& w);

}  // namespace paradox
