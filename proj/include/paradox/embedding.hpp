#pragma once

#include <array>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "paradox/paradox.hpp"
#include "paradox/pwt.hpp"
#include "paradox/report.hpp"

namespace paradox {

/// Data of the recursive injective Lipschitz map f: F2 -> Γ.
///
/// f(e) = base_point, f(a^±1 x') = sigma±(f(x')), f(b^±1 x') = tau±(f(x')).
/// The maps are sigma+ ∘ sigma_ε ∘ sigma_δ for the four sign pairs, so all
/// four images lie in the image of sigma+, while base_point = sigma-(a0)
/// lies in the image of sigma-. Evaluation is memoized behind a mutex; a
/// copy starts with an empty memo, so editing a copy's maps is safe.
struct EmbeddingData {
  struct Memo {
    Memo() = default;
    Memo(const Memo&) {}
    Memo& operator=(const Memo&) {
      std::lock_guard lock(mutex);
      values.clear();
      return *this;
    }

    mutable std::mutex mutex;
    mutable std::unordered_map<Elem, Elem, ElemHash> values;
  };

  Group group;
  SetExpr domain;
  // Order: sigma+, sigma-, tau+, tau- (letters a, a^-1, b, b^-1).
  std::array<std::optional<PwT>, 4> maps;
  Elem base_point;
  int budget = kDefaultBudget;
  Memo memo;

  const PwT& map_for(std::int32_t letter) const;
};

// The free group on a, b that f is defined on.
Group f2();

/// Derives the four maps and s0 from a witness validated on win. Membership
/// during evaluation uses the window budget, raised to cover F2 words of
/// length depth_hint when each letter adds three semigroup generators.
EmbeddingData build_embedding(const ParadoxWitness& w, const Window& win, int slack = 4, int depth_hint = 0);

// Checks that the four images and the base point are pairwise disjoint on A∩W.
ValidationReport embedding_disjointness(const EmbeddingData& e, const Window& win, int slack = 4);

/// f(x) for a reduced word x over F2. Non-reduced input raises DomainError;
/// leaving the region where the maps are defined raises DomainError with a
/// request for a larger window.
Elem eval_embedding(const EmbeddingData& e, const FreeWord& x);

struct LipschitzReport {
  int radius = 0;
  std::size_t evaluated = 0;
  bool injective = true;
  std::optional<std::pair<Elem, Elem>> collision;  // F2 words with equal values
  // T = T' ∪ T'^-1, T' the observed f(x)f(y)^-1 over pairs with xy^-1 in {a^±1, b^±1}.
  std::vector<Elem> t_set;
  std::vector<Elem> t_prime;
  // Pairs whose displacement is outside the displacement sets of the four
  // maps and their inverses.
  std::vector<std::string> violations;

  bool passed() const { return injective && violations.empty(); }
};

LipschitzReport check_injective_lipschitz(const EmbeddingData& e, int radius);

/// Explicit finite map between two groups.
struct FiniteMap {
  Group source;
  Group target;
  std::vector<std::pair<Elem, Elem>> pairs;

  std::optional<Elem> at(const Elem& x) const;
};

FiniteMap embedding_map(const EmbeddingData& e, int radius);
FiniteMap identity_map(const Window& w);

/// tau with tau(f(x)) = f(sigma(x)) for x in W ∩ dom(sigma), emitted with
/// one finite piece per observed displacement f(sigma(x)) f(x)^-1.
/// Throws InvariantViolation if f is not injective on W, DomainError if f is
/// undefined at x or sigma(x).
PwT transported_pwt(const FiniteMap& f, const PwT& sigma, const Window& w, int slack = 4);

}  // namespace paradox
