#include "paradox/pwt.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "paradox/errors.hpp"

namespace paradox {

namespace {

std::vector<Elem> dedup(std::vector<Elem> xs) {
  std::unordered_set<Elem, ElemHash> seen;
  std::vector<Elem> out;
  for (auto& x : xs) {
    if (seen.insert(x).second) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

PwT::PwT(SetExpr domain, std::vector<Piece> pieces, std::vector<Elem> displacements)
    : domain_(std::move(domain)), pieces_(std::move(pieces)) {
  for (const auto& p : pieces_) {
    if (!(p.set.group() == domain_.group())) throw GroupMismatch("piece over a different group");
    domain_.group().require_owns(p.translator);
  }
  if (displacements.empty()) {
    for (const auto& p : pieces_) displacements.push_back(p.translator);
  }
  displacements_ = dedup(std::move(displacements));
}

PwT PwT::identity(const SetExpr& domain) {
  return PwT(domain, {{domain, domain.group().identity()}});
}

PwT PwT::translation(const SetExpr& domain, const Elem& t) { return PwT(domain, {{domain, t}}); }

Elem pwt_apply(const PwT& sigma, const Elem& g, int budget) {
  const Group& grp = sigma.group();
  if (!contains(sigma.domain(), g, budget)) {
    throw DomainError(grp.format(g) + " is outside the domain " + sigma.domain().to_string());
  }
  const Piece* hit = nullptr;
  for (const auto& p : sigma.pieces()) {
    if (!contains(p.set, g, budget)) continue;
    if (hit != nullptr) {
      throw InvariantViolation(grp.format(g) + " lies in two pieces: " + hit->set.to_string() +
                               " and " + p.set.to_string());
    }
    hit = &p;
  }
  if (hit == nullptr) throw DomainError(grp.format(g) + " is not covered by any piece");
  return grp.mul(hit->translator, g);
}

PwT pwt_compose(const PwT& tau, const PwT& sigma, const Window& w, int slack) {
  const Group& grp = sigma.group();
  if (!(grp == tau.group())) throw GroupMismatch("composing maps over different groups");
  const int budget = w.budget(slack);
  for (const auto& g : w.elements()) {
    if (!contains(sigma.domain(), g, budget)) continue;
    const Elem image = pwt_apply(sigma, g, budget);
    if (!contains(tau.domain(), image, budget)) {
      throw DomainError("not composable: sigma(" + grp.format(g) + ") = " + grp.format(image) +
                        " is outside the domain of tau");
    }
  }
  std::vector<Piece> pieces;
  for (const auto& p : sigma.pieces()) {
    const Elem back = grp.inv(p.translator);
    for (const auto& q : tau.pieces()) {
      pieces.push_back({SetExpr::intersect(p.set, SetExpr::translate(back, q.set)),
                        grp.mul(q.translator, p.translator)});
    }
  }
  std::vector<Elem> disp;
  for (const auto& t : tau.displacements()) {
    for (const auto& s : sigma.displacements()) disp.push_back(grp.mul(t, s));
  }
  return PwT(sigma.domain(), std::move(pieces), std::move(disp));
}

ValidationReport pwt_validate(const PwT& sigma, const Window& w, int slack) {
  const Group& grp = sigma.group();
  const int budget = w.budget(slack);
  ValidationReport r;
  r.pass("pieces-disjoint");
  r.pass("pieces-cover-domain");
  r.pass("injective");
  r.pass("displacements-in-S");
  std::unordered_set<Elem, ElemHash> allowed(sigma.displacements().begin(), sigma.displacements().end());
  std::unordered_map<Elem, Elem, ElemHash> preimage;
  for (const auto& g : w.elements()) {
    const auto in_domain = member(sigma.domain(), g, budget);
    const Piece* hit = nullptr;
    int hits = 0;
    bool undecided = in_domain == Membership::Unknown;
    for (const auto& p : sigma.pieces()) {
      const auto m = member(p.set, g, budget);
      if (m == Membership::Unknown) undecided = true;
      if (m != Membership::Yes) continue;
      if (hit != nullptr) {
        r.fail("pieces-disjoint", grp.format(g) + " lies in " + hit->set.to_string() + " and " +
                                      p.set.to_string());
      }
      hit = &p;
      ++hits;
    }
    if (undecided) {
      r.fail("membership-decided", "membership of " + grp.format(g) + " exceeds the budget");
      continue;
    }
    if (hits > 0 && in_domain == Membership::No) {
      r.fail("pieces-cover-domain", grp.format(g) + " lies in a piece but not in the domain");
    }
    if (in_domain == Membership::Yes && hits == 0) {
      r.fail("pieces-cover-domain", grp.format(g) + " is in the domain but in no piece");
    }
    if (in_domain != Membership::Yes || hits != 1) continue;
    if (!allowed.count(hit->translator)) {
      r.fail("displacements-in-S", "displacement " + grp.format(hit->translator) + " at " +
                                       grp.format(g) + " is not in S");
    }
    Elem image = grp.mul(hit->translator, g);
    auto [it, fresh] = preimage.emplace(image, g);
    if (!fresh) {
      r.fail("injective", grp.format(it->second) + " and " + grp.format(g) + " both map to " +
                              grp.format(image));
    }
  }
  return r;
}

ValidationReport check_equi_witness(const EquiWitness& w, const Window& win, int slack) {
  const Group& grp = win.group();
  const int budget = win.budget(slack);
  ValidationReport r;
  r.pass("shape");
  r.pass("partition-a");
  r.pass("partition-b");
  r.pass("translation");
  if (w.parts_a.size() != w.parts_b.size() || w.parts_a.size() != w.translators.size()) {
    r.fail("shape", "parts and translators differ in length");
    return r;
  }
  auto check_partition = [&](const SetExpr& whole, const std::vector<SetExpr>& parts,
                             const std::string& name) {
    for (const auto& g : win.elements()) {
      int hits = 0;
      for (const auto& p : parts) hits += contains(p, g, budget) ? 1 : 0;
      const bool in = contains(whole, g, budget);
      if (hits > 1) r.fail(name, grp.format(g) + " lies in two parts");
      if (hits > 0 && !in) r.fail(name, grp.format(g) + " lies in a part but not in the set");
      if (in && hits == 0) r.fail(name, grp.format(g) + " is not covered by the parts");
    }
  };
  check_partition(w.set_a, w.parts_a, "partition-a");
  check_partition(w.set_b, w.parts_b, "partition-b");
  for (std::size_t j = 0; j < w.translators.size(); ++j) {
    const Elem& t = w.translators[j];
    const Elem t_inv = grp.inv(t);
    for (const auto& x : win.elements()) {
      if (contains(w.parts_a[j], x, budget) && !contains(w.parts_b[j], grp.mul(t_inv, x), budget)) {
        r.fail("translation", grp.format(x) + " is in part A" + std::to_string(j) +
                                  " but its preimage is not in part B" + std::to_string(j));
      }
      if (contains(w.parts_b[j], x, budget) && !contains(w.parts_a[j], grp.mul(t, x), budget)) {
        r.fail("translation", grp.format(x) + " is in part B" + std::to_string(j) +
                                  " but its image is not in part A" + std::to_string(j));
      }
    }
  }
  return r;
}

bool covers(const SetExpr& a, const SetExpr& b, const std::vector<Elem>& f, const Window& w,
            int slack) {
  const Group& grp = w.group();
  const int budget = w.budget(slack);
  std::vector<Elem> f_inv;
  for (const auto& t : f) f_inv.push_back(grp.inv(t));
  for (const auto& x : materialize_exact(a, w, slack)) {
    const bool hit = std::any_of(f_inv.begin(), f_inv.end(),
                                 [&](const Elem& ti) { return contains(b, grp.mul(ti, x), budget); });
    if (!hit) return false;
  }
  return true;
}

BoundedResult bounded_check(const SetExpr& a, const SetExpr& b, int search_radius, const Window& w,
                            int slack) {
  const Group& grp = w.group();
  const int budget = w.budget(slack);
  const auto universe = materialize_exact(a, w, slack);
  const Window candidates = grp.ball(search_radius);

  // coverage[c] = indices into universe covered by candidates[c]·B
  std::vector<std::vector<std::size_t>> coverage(candidates.size());
  std::vector<bool> coverable(universe.size(), false);
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const Elem ti = grp.inv(candidates[c]);
    for (std::size_t i = 0; i < universe.size(); ++i) {
      if (contains(b, grp.mul(ti, universe[i]), budget)) {
        coverage[c].push_back(i);
        coverable[i] = true;
      }
    }
  }

  BoundedResult result;
  if (std::find(coverable.begin(), coverable.end(), false) != coverable.end()) {
    if (b.kind() == SetKind::Finite || b.kind() == SetKind::Greedy) {
      result.refuted_by_counting = universe.size() > candidates.size() * b.elements().size();
    }
    return result;
  }

  std::vector<bool> covered(universe.size(), false);
  std::size_t remaining = universe.size();
  std::vector<std::size_t> chosen;
  while (remaining > 0) {
    std::size_t best = 0;
    std::size_t best_gain = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      std::size_t gain = 0;
      for (auto i : coverage[c]) gain += covered[i] ? 0 : 1;
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    chosen.push_back(best);
    for (auto i : coverage[best]) {
      if (!covered[i]) {
        covered[i] = true;
        --remaining;
      }
    }
  }

  // Drop translators whose coverage is implied by the rest, latest first.
  std::vector<std::size_t> multiplicity(universe.size(), 0);
  for (auto c : chosen) {
    for (auto i : coverage[c]) ++multiplicity[i];
  }
  std::vector<bool> keep(chosen.size(), true);
  for (std::size_t k = chosen.size(); k-- > 0;) {
    const auto& cov = coverage[chosen[k]];
    const bool redundant = std::all_of(cov.begin(), cov.end(), [&](auto i) { return multiplicity[i] > 1; });
    if (redundant) {
      keep[k] = false;
      for (auto i : cov) --multiplicity[i];
    }
  }
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    if (keep[k]) kept.push_back(chosen[k]);
  }
  std::sort(kept.begin(), kept.end());
  std::vector<Elem> f;
  for (auto c : kept) f.push_back(candidates[c]);
  result.cover = std::move(f);
  return result;
}

}  // namespace paradox
