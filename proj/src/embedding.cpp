#include "paradox/embedding.hpp"

#include <algorithm>
#include <unordered_set>

#include "paradox/errors.hpp"

namespace paradox {

namespace {

using ElemSet = std::unordered_set<Elem, ElemHash>;

std::size_t letter_slot(std::int32_t letter) {
  switch (letter) {
    case 1: return 0;
    case -1: return 1;
    case 2: return 2;
    case -2: return 3;
    default: throw DomainError("letter " + std::to_string(letter) + " is not a generator of F2");
  }
}

const char* const kMapNames[4] = {"sigma+", "sigma-", "tau+", "tau-"};

}  // namespace

Group f2() { return Group::free(2); }

const PwT& EmbeddingData::map_for(std::int32_t letter) const { return *maps[letter_slot(letter)]; }

EmbeddingData build_embedding(const ParadoxWitness& w, const Window& win, int slack, int depth_hint) {
  const auto report = witness_check(w, win, slack);
  if (!report.passed()) throw InvariantViolation("invalid witness: " + report.summary());
  const Group& grp = win.group();
  const auto domain = materialize_exact(w.set, win, slack);
  if (domain.empty()) throw DomainError("the witness set has no points in the window");

  const auto [plus, minus] = base_maps(w);
  EmbeddingData e{grp, w.set, {}, Elem{}, std::max(win.budget(slack), 3 * depth_hint + 1 + slack), {}};
  const PwT plus_plus = pwt_compose(plus, plus, win, slack);
  const PwT plus_minus = pwt_compose(plus, minus, win, slack);
  // sigma+ ∘ sigma_eps ∘ sigma_delta; the innermost map is applied first.
  e.maps[0] = pwt_compose(plus_plus, plus, win, slack);
  e.maps[1] = pwt_compose(plus_plus, minus, win, slack);
  e.maps[2] = pwt_compose(plus_minus, plus, win, slack);
  e.maps[3] = pwt_compose(plus_minus, minus, win, slack);
  e.base_point = pwt_apply(minus, domain.front(), e.budget);
  return e;
}

ValidationReport embedding_disjointness(const EmbeddingData& e, const Window& win, int slack) {
  ValidationReport r;
  r.pass("images-disjoint");
  r.pass("base-point-outside-images");
  const Group& grp = e.group;
  const int budget = std::max(e.budget, win.budget(slack));
  std::unordered_map<Elem, std::size_t, ElemHash> owner;
  for (const auto& x : materialize_exact(e.domain, win, slack)) {
    for (std::size_t k = 0; k < 4; ++k) {
      const Elem y = pwt_apply(*e.maps[k], x, budget);
      auto [it, fresh] = owner.emplace(y, k);
      if (!fresh && it->second != k) {
        r.fail("images-disjoint", grp.format(y) + " is in the images of " + kMapNames[it->second] +
                                      " and " + kMapNames[k]);
      }
    }
  }
  if (auto it = owner.find(e.base_point); it != owner.end()) {
    r.fail("base-point-outside-images",
           "s0 = " + grp.format(e.base_point) + " is in the image of " + kMapNames[it->second]);
  }
  return r;
}

Elem eval_embedding(const EmbeddingData& e, const FreeWord& x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    letter_slot(x[i]);
    if (i + 1 < x.size() && x[i] == -x[i + 1]) {
      throw DomainError("f is only evaluated on reduced words; " + f2().format(Elem(x)) + " is not reduced");
    }
  }
  // Find the longest memoized suffix, then apply the maps outward.
  std::size_t start = x.size();
  Elem value = e.base_point;
  {
    std::lock_guard lock(e.memo.mutex);
    for (std::size_t i = 0; i <= x.size(); ++i) {
      const Elem suffix(FreeWord(x.begin() + static_cast<std::ptrdiff_t>(i), x.end()));
      if (auto it = e.memo.values.find(suffix); it != e.memo.values.end()) {
        start = i;
        value = it->second;
        break;
      }
    }
  }
  std::vector<std::pair<Elem, Elem>> fresh;
  for (std::size_t i = start; i-- > 0;) {
    try {
      value = pwt_apply(e.map_for(x[i]), value, e.budget);
    } catch (const BudgetExceeded&) {
      throw DomainError("f(" + f2().format(Elem(x)) + ") needs membership beyond word budget " +
                        std::to_string(e.budget) + "; rebuild the embedding with a larger window or slack");
    } catch (const DomainError& err) {
      throw DomainError("f(" + f2().format(Elem(x)) + ") leaves the region where the maps are defined (" +
                        err.what() + "); rebuild the embedding with a larger window");
    }
    fresh.emplace_back(Elem(FreeWord(x.begin() + static_cast<std::ptrdiff_t>(i), x.end())), value);
  }
  if (start == x.size() && x.empty()) fresh.emplace_back(Elem(FreeWord{}), value);
  std::lock_guard lock(e.memo.mutex);
  for (auto& [k, v] : fresh) e.memo.values.emplace(std::move(k), std::move(v));
  return value;
}

LipschitzReport check_injective_lipschitz(const EmbeddingData& e, int radius) {
  if (radius < 1) throw Error("check_injective_lipschitz needs L >= 1");
  const Group src = f2();
  const Group& grp = e.group;
  LipschitzReport rep;
  rep.radius = radius;
  const Window ball = src.ball(radius);

  std::unordered_map<Elem, Elem, ElemHash> value;
  std::unordered_map<Elem, Elem, ElemHash> preimage;
  for (const auto& x : ball.elements()) {
    Elem fx = eval_embedding(e, x.word());
    ++rep.evaluated;
    auto [it, fresh] = preimage.emplace(fx, x);
    if (!fresh && rep.injective) {
      rep.injective = false;
      rep.collision = std::make_pair(it->second, x);
    }
    value.emplace(x, std::move(fx));
  }

  // Displacements the construction allows: those of the four maps and their inverses.
  ElemSet allowed;
  for (const auto& m : e.maps) {
    for (const auto& d : m->displacements()) {
      allowed.insert(d);
      allowed.insert(grp.inv(d));
    }
  }

  ElemSet seen;
  auto record = [&](const Elem& d) {
    if (seen.insert(d).second) rep.t_prime.push_back(d);
  };
  for (const auto& y : ball.elements()) {
    for (const auto& c : src.generators()) {
      const Elem x = src.mul(c, y);
      auto xi = value.find(x);
      if (xi == value.end()) continue;
      const Elem d = grp.mul(xi->second, grp.inv(value.at(y)));
      record(d);
      if (!allowed.count(d)) {
        rep.violations.push_back("f(" + src.format(x) + ") f(" + src.format(y) + ")^-1 = " + grp.format(d) +
                                 " is not a displacement of the maps");
      }
    }
  }
  ElemSet in_t;
  for (const auto& d : rep.t_prime) {
    for (const Elem& z : {d, grp.inv(d)}) {
      if (in_t.insert(z).second) rep.t_set.push_back(z);
    }
  }
  return rep;
}

std::optional<Elem> FiniteMap::at(const Elem& x) const {
  for (const auto& [k, v] : pairs) {
    if (k == x) return v;
  }
  return std::nullopt;
}

FiniteMap embedding_map(const EmbeddingData& e, int radius) {
  FiniteMap f{f2(), e.group, {}};
  const Window ball = f2().ball(radius);
  for (const auto& x : ball.elements()) f.pairs.emplace_back(x, eval_embedding(e, x.word()));
  return f;
}

FiniteMap identity_map(const Window& w) {
  FiniteMap f{w.group(), w.group(), {}};
  for (const auto& x : w.elements()) f.pairs.emplace_back(x, x);
  return f;
}

PwT transported_pwt(const FiniteMap& f, const PwT& sigma, const Window& w, int slack) {
  const Group& src = f.source;
  const Group& dst = f.target;
  if (!(sigma.group() == src)) throw GroupMismatch("sigma does not act on the source group of f");
  std::unordered_map<Elem, Elem, ElemHash> table;
  std::unordered_map<Elem, Elem, ElemHash> preimage;
  for (const auto& [x, y] : f.pairs) {
    table.emplace(x, y);
    auto [it, fresh] = preimage.emplace(y, x);
    if (!fresh && !(it->second == x) && w.contains(x) && w.contains(it->second)) {
      throw InvariantViolation("f is not injective on the window: f(" + src.format(it->second) + ") = f(" +
                               src.format(x) + ") = " + dst.format(y));
    }
  }
  auto image = [&](const Elem& x) -> const Elem& {
    auto it = table.find(x);
    if (it == table.end()) throw DomainError("f is undefined at " + src.format(x));
    return it->second;
  };

  const int budget = w.budget(slack);
  std::vector<Elem> domain;
  std::vector<Elem> displacements;
  std::vector<std::vector<Elem>> groups;
  std::unordered_map<Elem, std::size_t, ElemHash> slot;
  for (const auto& x : w.elements()) {
    if (!contains(sigma.domain(), x, budget)) continue;
    const Elem& fx = image(x);
    const Elem& fsx = image(pwt_apply(sigma, x, budget));
    Elem d = dst.mul(fsx, dst.inv(fx));
    auto [it, fresh] = slot.emplace(d, groups.size());
    if (fresh) {
      displacements.push_back(std::move(d));
      groups.emplace_back();
    }
    groups[it->second].push_back(fx);
    domain.push_back(fx);
  }
  std::vector<Piece> pieces;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    pieces.push_back({SetExpr::finite(dst, groups[k]), displacements[k]});
  }
  return PwT(SetExpr::finite(dst, domain), std::move(pieces), displacements);
}

}  // namespace paradox
