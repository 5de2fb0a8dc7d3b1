#include "paradox/verify.hpp"

#include <unordered_map>
#include <unordered_set>

namespace paradox {

namespace {

using ElemSet = std::unordered_set<Elem, ElemHash>;

// Neighborhood {s·x in target : s in S, x in D}.
ElemSet neighborhood(const Group& grp, const SetExpr& target, const std::vector<Elem>& s,
                     const std::vector<Elem>& d, int budget) {
  ElemSet out;
  out.reserve(d.size() * s.size());
  for (const auto& x : d) {
    for (const auto& t : s) {
      Elem y = grp.mul(t, x);
      if (!out.count(y) && contains(target, y, budget)) out.insert(std::move(y));
    }
  }
  return out;
}

// Checks that `points` lists exactly source∩W, each once.
void check_domain(ValidationReport& r, const std::string& name, const SetExpr& source,
                  const Window& w, const std::vector<Elem>& points, int slack) {
  const Group& grp = w.group();
  ElemSet listed;
  listed.reserve(points.size());
  for (const auto& x : points) {
    if (!listed.insert(x).second) r.fail(name, grp.format(x) + " is assigned twice");
  }
  const auto expected = materialize_exact(source, w, slack);
  for (const auto& x : expected) {
    if (!listed.count(x)) r.fail(name, grp.format(x) + " in the set is not assigned");
  }
  ElemSet expected_set(expected.begin(), expected.end());
  for (const auto& x : points) {
    if (!expected_set.count(x)) r.fail(name, grp.format(x) + " is assigned but not in set∩window");
  }
}

void check_violator(ValidationReport& r, const SetExpr& source, const Window& w,
                    const std::vector<Elem>& violator, int slack) {
  const Group& grp = w.group();
  const int budget = w.budget(slack);
  r.pass("violator-in-domain");
  if (violator.empty()) r.fail("violator-in-domain", "violator is empty");
  ElemSet seen;
  seen.reserve(violator.size());
  for (const auto& x : violator) {
    if (!grp.owns(x)) {
      r.fail("violator-in-domain", "violator element from another group");
      continue;
    }
    if (!seen.insert(x).second) r.fail("violator-in-domain", grp.format(x) + " listed twice");
    if (!w.contains(x) || !contains(source, x, budget)) {
      r.fail("violator-in-domain", grp.format(x) + " is not in set∩window");
    }
  }
}

void check_recorded_neighborhood(ValidationReport& r, const Group& grp, const ElemSet& actual,
                                 const std::vector<Elem>& recorded) {
  r.pass("neighborhood-recorded");
  ElemSet rec;
  rec.reserve(recorded.size());
  for (const auto& y : recorded) {
    if (!grp.owns(y) || !rec.insert(y).second || !actual.count(y)) {
      r.fail("neighborhood-recorded", "recorded neighbor " + (grp.owns(y) ? grp.format(y) : "?") +
                                          " is not a distinct member of N_S(D)");
    }
  }
  if (rec.size() != actual.size()) {
    r.fail("neighborhood-recorded", "recorded neighborhood has " + std::to_string(rec.size()) +
                                        " points, recomputed " + std::to_string(actual.size()));
  }
}

}  // namespace

ValidationReport verify_match(const MatchCert& c, int slack) {
  const Group& grp = c.window.group();
  const int budget = c.window.budget(slack);
  ValidationReport r;
  r.pass("assignment-domain");
  r.pass("translators-in-S");
  r.pass("images-in-set");
  r.pass("images-distinct");
  std::vector<Elem> points;
  for (const auto& e : c.assignment) points.push_back(e.x);
  for (const auto& x : points) {
    if (!grp.owns(x)) {
      r.fail("assignment-domain", "element from another group");
      return r;
    }
  }
  check_domain(r, "assignment-domain", c.set, c.window, points, slack);
  ElemSet s(c.translators.begin(), c.translators.end());
  std::unordered_map<Elem, std::string, ElemHash> images;
  for (const auto& e : c.assignment) {
    for (int i = 0; i < 2; ++i) {
      const Elem& t = i == 0 ? e.s1 : e.s2;
      const std::string label = "s" + std::to_string(i + 1) + "(" + grp.format(e.x) + ")";
      if (!grp.owns(t) || !s.count(t)) {
        r.fail("translators-in-S", label + " is not in S");
        continue;
      }
      Elem y = grp.mul(t, e.x);
      if (!contains(c.set, y, budget)) r.fail("images-in-set", label + "·x = " + grp.format(y) + " is not in the set");
      auto [it, fresh] = images.emplace(y, label);
      if (!fresh) {
        r.fail("images-distinct", "collision: " + it->second + " and " + label + " both give " + grp.format(y));
      }
    }
  }
  return r;
}

ValidationReport verify_deficiency(const DeficiencyCert& c, int slack) {
  const Group& grp = c.window.group();
  const int budget = c.window.budget(slack);
  ValidationReport r;
  check_violator(r, c.set, c.window, c.violator, slack);
  r.pass("hall-deficiency");
  if (!r.passed()) return r;
  const auto n = neighborhood(grp, c.set, c.translators, c.violator, budget);
  check_recorded_neighborhood(r, grp, n, c.neighborhood);
  if (n.size() >= 2 * c.violator.size()) {
    r.fail("hall-deficiency", "|N_S(D)| = " + std::to_string(n.size()) + " is not < 2|D| = " +
                                  std::to_string(2 * c.violator.size()));
  }
  return r;
}

ValidationReport verify_flow(const FlowCert& c, int slack) {
  const Group& grp = c.window.group();
  const int budget = c.window.budget(slack);
  ValidationReport r;
  r.pass("shape");
  r.pass("assignment-domain");
  r.pass("translators-in-S");
  r.pass("images-in-target");
  r.pass("capacity");
  if (c.m < 1 || c.n < 1) {
    r.fail("shape", "m and n must be positive");
    return r;
  }
  std::vector<Elem> points;
  for (const auto& e : c.assignment) {
    if (!grp.owns(e.x)) {
      r.fail("assignment-domain", "element from another group");
      return r;
    }
    points.push_back(e.x);
    if (e.translators.size() != static_cast<std::size_t>(c.m)) {
      r.fail("shape", grp.format(e.x) + " has " + std::to_string(e.translators.size()) +
                          " copies, expected " + std::to_string(c.m));
    }
  }
  check_domain(r, "assignment-domain", c.set_a, c.window, points, slack);
  ElemSet s(c.translators.begin(), c.translators.end());
  std::unordered_map<Elem, int, ElemHash> load;
  for (const auto& e : c.assignment) {
    for (const auto& t : e.translators) {
      if (!grp.owns(t) || !s.count(t)) {
        r.fail("translators-in-S", "translator at " + grp.format(e.x) + " is not in S");
        continue;
      }
      Elem y = grp.mul(t, e.x);
      if (!contains(c.set_b, y, budget)) r.fail("images-in-target", grp.format(y) + " is not in B");
      if (++load[y] > c.n) {
        r.fail("capacity", grp.format(y) + " is used more than " + std::to_string(c.n) + " times");
      }
    }
  }
  return r;
}

ValidationReport verify_flow_deficiency(const FlowDeficiency& c, int slack) {
  const Group& grp = c.window.group();
  const int budget = c.window.budget(slack);
  ValidationReport r;
  check_violator(r, c.set_a, c.window, c.violator, slack);
  r.pass("capacity-deficiency");
  if (!r.passed()) return r;
  if (c.m < 1 || c.n < 1) {
    r.fail("capacity-deficiency", "m and n must be positive");
    return r;
  }
  const auto n = neighborhood(grp, c.set_b, c.translators, c.violator, budget);
  check_recorded_neighborhood(r, grp, n, c.neighborhood);
  const auto lhs = static_cast<std::int64_t>(c.n) * static_cast<std::int64_t>(n.size());
  const auto rhs = static_cast<std::int64_t>(c.m) * static_cast<std::int64_t>(c.violator.size());
  if (lhs >= rhs) {
    r.fail("capacity-deficiency", "n|N_S(D)| = " + std::to_string(lhs) + " is not < m|D| = " + std::to_string(rhs));
  }
  return r;
}

}  // namespace paradox
