#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "paradox/errors.hpp"
#include "paradox/pwt.hpp"
#include "paradox/set_expr.hpp"

using namespace paradox;

namespace {

const Group kBs = Group::dyadic_affine();
const Group kZ = Group::zn(1);
const Group kF = Group::free(2);

Elem bs(const char* text) { return kBs.parse_elem(text); }
Elem z(std::int64_t n) { return Elem(IntVector{n}); }

// Products of all positive words of length <= n in the given generators.
std::vector<Elem> positive_products(const Group& g, const std::vector<Elem>& gens, int n) {
  std::vector<Elem> out{g.identity()};
  std::vector<Elem> layer{g.identity()};
  for (int len = 1; len <= n; ++len) {
    std::vector<Elem> next;
    for (const auto& w : layer) {
      for (const auto& x : gens) next.push_back(g.mul(w, x));
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

std::vector<std::string> formatted(const Group& g, const std::vector<Elem>& xs) {
  std::vector<std::string> out;
  for (const auto& x : xs) out.push_back(g.format(x));
  return out;
}

SetExpr evens() { return SetExpr::parse(kZ, "semigroup((2),(-2);e)"); }

}  // namespace

TEST_CASE("membership examples") {
  CHECK(member(SetExpr::slab(kBs, 0, 1, 0), bs("(2,1)")) == Membership::Yes);
  const auto sg = SetExpr::semigroup(kBs, {bs("(2,0)"), bs("(2,1)")}, true);
  CHECK(member(sg, bs("(4,2)")) == Membership::Yes);
  CHECK(member(SetExpr::ball(kF, 1), kF.parse_elem("a b")) == Membership::No);
  CHECK(member(sg, bs("(1,1)")) == Membership::No);
  CHECK(member(sg, bs("(1/2,0)")) == Membership::No);
}

TEST_CASE("semigroup membership agrees with brute-force enumeration") {
  const std::vector<Elem> gens{bs("(2,0)"), bs("(2,1)")};
  const auto sg = SetExpr::semigroup(kBs, gens, true);
  const auto products = positive_products(kBs, gens, 5);
  const std::set<Elem> expected(products.begin(), products.end());
  const Window w = positive_words_window(kBs, gens, 5);
  for (const auto& x : w.elements()) {
    CHECK(member(sg, x) == (expected.count(x) ? Membership::Yes : Membership::No));
  }
  // Elements of the ball that are not positive words are rejected exactly.
  const Window ball = kBs.ball(5);
  for (const auto& x : ball.elements()) {
    if (x.affine().log2a > 5) continue;
    CHECK(member(sg, x) == (expected.count(x) ? Membership::Yes : Membership::No));
  }
}

TEST_CASE("exact membership rules agree with enumeration for other generators") {
  // Expanding affine maps with negative and fractional offsets.
  const std::vector<Elem> gens{bs("(4,-1/2)"), bs("(2,3)")};
  const auto sg = SetExpr::semigroup(kBs, gens, false);
  const auto products = positive_products(kBs, gens, 4);
  std::set<Elem> expected(products.begin(), products.end());
  expected.erase(kBs.identity());
  const Window ball = kBs.ball(4);
  for (const auto& x : ball.elements()) {
    if (x.affine().log2a > 4) continue;
    CHECK(member(sg, x) == (expected.count(x) ? Membership::Yes : Membership::No));
  }
  // Free generators whose products never cancel.
  const std::vector<Elem> fg{kF.parse_elem("a b"), kF.parse_elem("b")};
  const auto fs = SetExpr::semigroup(kF, fg, false);
  const auto fprod = positive_products(kF, fg, 6);
  std::set<Elem> fexpected(fprod.begin(), fprod.end());
  fexpected.erase(kF.identity());
  const Window fball = kF.ball(6);
  for (const auto& x : fball.elements()) {
    CHECK(member(fs, x) == (fexpected.count(x) ? Membership::Yes : Membership::No));
  }
}

TEST_CASE("semigroup without a height reports budget exhaustion, never a wrong answer") {
  // s and s^-1 generate a group, so no positive functional exists.
  const auto sg = SetExpr::semigroup(kZ, {z(2), z(-3)}, false);
  CHECK(member(sg, z(-1), 4) == Membership::Yes);
  CHECK(member(sg, z(0), 4) == Membership::Yes);
  const auto sparse = SetExpr::semigroup(kF, {kF.parse_elem("a"), kF.parse_elem("a^-1 b")}, false);
  CHECK(member(sparse, kF.parse_elem("b")) == Membership::Yes);
  CHECK(member(sparse, kF.parse_elem("b^-1")) == Membership::No);
  CHECK(member(evens(), z(-7)) == Membership::No);
  CHECK(member(evens(), z(-8)) == Membership::Yes);
  const Group z2 = Group::zn(2);
  // A cycle of three generators summing to zero: a group with no positive
  // functional and no symmetric generating set.
  const auto cycle = SetExpr::semigroup(
      z2, {z2.parse_elem("(1,0)"), z2.parse_elem("(-1,1)"), z2.parse_elem("(0,-1)")}, false);
  CHECK(member(cycle, z2.parse_elem("(20,20)"), 3) == Membership::Unknown);
  CHECK_THROWS_AS(contains(cycle, z2.parse_elem("(20,20)"), 3), BudgetExceeded);
}

TEST_CASE("one-parameter and non-contracting dyadic semigroups are decided exactly") {
  const std::vector<std::string> gen_sets{"(2,0),(1,1)", "(2,0),(1,-1)", "(1/2,0),(1,1)", "(1,1),(1,-1)",
                                          "(2,0),(1/2,0)", "(1,1/2),(1,3/4)", "(2,1),(1,1/2)", "(1/2,-1),(1,-1)",
                                          "(4,0),(1,3)"};
  const Window ball = kBs.ball(3);
  for (const auto& text : gen_sets) {
    const auto gens = kBs.parse_elem_list(text);
    const auto sg = SetExpr::semigroup(kBs, gens, false);
    std::set<Elem> products;
    for (const auto& p : positive_products(kBs, gens, 9)) {
      for (const auto& x : gens) products.insert(kBs.mul(x, p));
    }
    for (const auto& x : ball.elements()) {
      const auto m = member(sg, x, 7);
      CHECK_MESSAGE(m != Membership::Unknown, text, " at ", kBs.format(x));
      if (products.count(x)) CHECK_MESSAGE(m == Membership::Yes, text, " at ", kBs.format(x));
    }
  }
  const auto translations = SetExpr::semigroup(kBs, kBs.parse_elem_list("(1,1),(1,-1)"), false);
  CHECK(member(translations, bs("(1,1/2)")) == Membership::No);
  CHECK(member(translations, bs("(1,-300)")) == Membership::Yes);
  const auto affine = SetExpr::semigroup(kBs, kBs.parse_elem_list("(2,0),(1,1)"), false);
  CHECK(member(affine, bs("(1,0)")) == Membership::No);
  CHECK(member(affine, bs("(4,3)")) == Membership::Yes);
  CHECK(member(affine, bs("(4,-1)")) == Membership::No);
  CHECK(member(affine, bs("(4,1/2)")) == Membership::No);
}

TEST_CASE("lattice and letter rules agree with enumeration") {
  const Group z2 = Group::zn(2);
  const std::vector<Elem> gens{z2.parse_elem("(1,0)"), z2.parse_elem("(-1,0)"), z2.parse_elem("(0,2)"),
                               z2.parse_elem("(0,-2)")};
  const auto lattice = SetExpr::semigroup(z2, gens, false);
  const Window ball = z2.ball(6);
  for (const auto& x : ball.elements()) {
    CHECK(member(lattice, x, 1) == (x.vec()[1] % 2 == 0 ? Membership::Yes : Membership::No));
  }
  const auto line = SetExpr::semigroup(z2, {z2.parse_elem("(1,0)"), z2.parse_elem("(-1,0)")}, false);
  CHECK(member(line, z2.parse_elem("(0,1)"), 1) == Membership::No);
  CHECK(member(line, z2.parse_elem("(-40,0)"), 1) == Membership::Yes);
  const Group z3 = Group::zn(3);
  const auto plane = SetExpr::semigroup(z3, {z3.parse_elem("(1,1,0)"), z3.parse_elem("(2,0,0)")}, false);
  CHECK(member(plane, z3.parse_elem("(0,0,1)"), 1) == Membership::No);
  CHECK(member(plane, z3.parse_elem("(3,1,0)"), 4) == Membership::Yes);

  for (const char* letters : {"a,a^-1", "a,b^-1", "a,a^-1,b"}) {
    const auto fg = kF.parse_elem_list(letters);
    const auto sg = SetExpr::semigroup(kF, fg, false);
    // Every reduced word of length <= 3 over the letters is a product of at
    // most 3 generators, and e = x x^-1 needs 2.
    // Nonempty products only: x·p with p a product of at most 4 generators.
    std::set<Elem> expected;
    for (const auto& p : positive_products(kF, fg, 4)) {
      for (const auto& x : fg) expected.insert(kF.mul(x, p));
    }
    const Window fball = kF.ball(3);
    for (const auto& x : fball.elements()) {
      CHECK(member(sg, x, 1) == (expected.count(x) ? Membership::Yes : Membership::No));
    }
  }
}

TEST_CASE("materialize") {
  const auto all = materialize_exact(SetExpr::all(kZ), kZ.ball(2));
  std::set<std::int64_t> values;
  for (const auto& x : all) values.insert(x.vec()[0]);
  CHECK(values == std::set<std::int64_t>{-2, -1, 0, 1, 2});

  const Window ball = kBs.ball(2);
  std::vector<Elem> expected;
  for (const auto& x : ball.elements()) {
    const Rational b = x.affine().b.to_rational();
    if (b >= 0 && b <= 1) expected.push_back(x);
  }
  CHECK(materialize_exact(SetExpr::slab(kBs, 0, 1, 0), ball) == expected);

  const std::vector<Elem> gens{bs("(2,0)"), bs("(2,1)")};
  const Window w = positive_words_window(kBs, gens, 2);
  const auto m = materialize_exact(SetExpr::semigroup(kBs, gens, true), w);
  CHECK(m.size() == 7);
  CHECK(formatted(kBs, m) ==
        std::vector<std::string>{"(1,0)", "(2,0)", "(2,1)", "(4,0)", "(4,2)", "(4,1)", "(4,3)"});
}

TEST_CASE("materialize is monotone in the window") {
  const std::vector<SetExpr> sets{SetExpr::slab(kBs, 0, 1, 0),
                                  SetExpr::parse(kBs, "(2,1)*slab(-1,1/2,1) | ball(1)"),
                                  SetExpr::semigroup(kBs, {bs("(2,0)"), bs("(2,1)")}, true)};
  const Window small = kBs.ball(2);
  const Window big = kBs.ball(4);
  for (const auto& a : sets) {
    const auto in_big = materialize_exact(a, big);
    std::vector<Elem> restricted;
    for (const auto& x : in_big) {
      if (small.contains(x)) restricted.push_back(x);
    }
    std::set<Elem> lhs(restricted.begin(), restricted.end());
    const auto in_small = materialize_exact(a, small);
    CHECK(std::set<Elem>(in_small.begin(), in_small.end()) == lhs);
  }
}

TEST_CASE("translation dictionary laws hold on windows") {
  const std::vector<SetExpr> sets{SetExpr::slab(kBs, 0, 1, 0), SetExpr::ball(kBs, 1),
                                  SetExpr::semigroup(kBs, {bs("(2,0)"), bs("(2,1)")}, true),
                                  SetExpr::parse(kBs, "slab(0,3,1) \\ finite{(1,0),(2,1)}")};
  const Window ts = kBs.ball(1);
  const Window w = kBs.ball(3);
  for (const auto& a : sets) {
    for (const auto& b : sets) {
      for (const auto& t : ts.elements()) {
        for (const auto& u : ts.elements()) {
          // A union with itself minus nothing keeps the inner translate from being merged.
          const SetExpr inner = SetExpr::unite(SetExpr::translate(u, a), SetExpr::finite(kBs, {}));
          const SetExpr nested = SetExpr::translate(t, inner);
          const SetExpr merged = SetExpr::translate(kBs.mul(t, u), a);
          CHECK(materialize_exact(nested, w) == materialize_exact(merged, w));
        }
        const SetExpr lhs = SetExpr::intersect(SetExpr::translate(t, a), SetExpr::translate(t, b));
        const SetExpr rhs = SetExpr::translate(t, SetExpr::intersect(a, b));
        CHECK(materialize_exact(lhs, w) == materialize_exact(rhs, w));
      }
    }
  }
}

TEST_CASE("factories simplify syntactically") {
  const auto a = SetExpr::slab(kBs, 0, 1, 0);
  CHECK(SetExpr::translate(kBs.identity(), a).to_string() == a.to_string());
  CHECK(SetExpr::translate(bs("(2,0)"), SetExpr::translate(bs("(2,1)"), a)).to_string() == "(4,2)*slab(0,1,0)");
  CHECK(SetExpr::unite(a, SetExpr::empty(kBs)).to_string() == a.to_string());
  CHECK(SetExpr::intersect(a, SetExpr::all(kBs)).to_string() == a.to_string());
  CHECK(SetExpr::intersect(a, SetExpr::empty(kBs)).kind() == SetKind::Empty);
  CHECK_THROWS(SetExpr::slab(kBs, 2, 1, 0));
  CHECK_THROWS(SetExpr::slab(kZ, 0, 1, 0));
}

TEST_CASE("set grammar round trips") {
  const std::vector<std::pair<Group, std::string>> cases{
      {kBs, "semigroup((2,0),(2,1);e)"},
      {kBs, "slab(0,1,0)"},
      {kBs, "slab(-1/2,3/4,1)"},
      {kBs, "(2,1)*slab(0,1,0)"},
      {kBs, "(slab(0,1,0)|ball(2))\\finite{(1,0),(2,1)}"},
      {kZ, "(3)*(all\\ball(2))"},
      {kZ, "greedy(4)"},
      {kF, "a b^-1*semigroup(a,b)"},
      {kF, "finite{e,a,b^-1}&ball(1)"},
      {kF, "empty"},
  };
  for (const auto& [g, text] : cases) {
    CAPTURE(text);
    const auto e = SetExpr::parse(g, text);
    CHECK(e.to_string() == text);
    CHECK(SetExpr::parse(g, e.to_string()).to_string() == e.to_string());
  }
  CHECK(SetExpr::parse(kZ, "1*all").to_string() == "all");
  CHECK(SetExpr::parse(kZ, "greedy(4)").elements() == std::vector<Elem>{z(0), z(1), z(-2), z(5)});
  CHECK_THROWS_AS(SetExpr::parse(kBs, "slab(0,1)"), ParseError);
  CHECK_THROWS_AS(SetExpr::parse(kBs, "semigroup((2,0);x)"), ParseError);
  CHECK_THROWS_AS(SetExpr::parse(kBs, "ball(2) |"), ParseError);
  CHECK_THROWS_AS(SetExpr::parse(kBs, "finite{(2,0)"), ParseError);
}

TEST_CASE("pwt_apply") {
  const auto sg = SetExpr::semigroup(kBs, {bs("(2,0)"), bs("(2,1)")}, true);
  const PwT plus = PwT::translation(sg, bs("(2,0)"));
  CHECK(pwt_apply(plus, bs("(2,1)")) == bs("(4,2)"));
  const PwT id = PwT::identity(SetExpr::all(kZ));
  CHECK(pwt_apply(id, z(17)) == z(17));
  const SetExpr odds = SetExpr::translate(z(1), evens());
  const PwT shift(SetExpr::all(kZ), {{evens(), z(1)}, {odds, z(-1)}});
  CHECK(pwt_apply(shift, z(4)) == z(5));
  CHECK(pwt_apply(shift, z(5)) == z(4));
  CHECK_THROWS_AS(pwt_apply(plus, bs("(1,1)")), DomainError);
  const PwT overlap(SetExpr::all(kZ), {{evens(), z(0)}, {SetExpr::all(kZ), z(0)}});
  CHECK_THROWS_AS(pwt_apply(overlap, z(0)), InvariantViolation);
}

TEST_CASE("pwt_compose") {
  const std::vector<Elem> gens{bs("(2,0)"), bs("(2,1)")};
  const auto sg = SetExpr::semigroup(kBs, gens, true);
  const Window w = positive_words_window(kBs, gens, 3);
  const PwT plus = PwT::translation(sg, gens[0]);
  const PwT minus = PwT::translation(sg, gens[1]);

  const PwT pp = pwt_compose(plus, plus, w);
  REQUIRE(pp.pieces().size() == 1);
  CHECK(pp.pieces()[0].translator == bs("(4,0)"));
  const PwT pm = pwt_compose(plus, minus, w);
  REQUIRE(pm.pieces().size() == 1);
  CHECK(pm.pieces()[0].translator == bs("(4,2)"));

  const PwT id = PwT::identity(sg);
  const PwT same = pwt_compose(plus, id, w);
  REQUIRE(same.pieces().size() == 1);
  CHECK(same.pieces()[0].translator == gens[0]);

  // Pointwise agreement with sequential application.
  const SetExpr odds = SetExpr::translate(z(1), evens());
  const PwT shift(SetExpr::all(kZ), {{evens(), z(1)}, {odds, z(-1)}});
  const PwT step(SetExpr::all(kZ), {{SetExpr::parse(kZ, "all\\ball(2)"), z(3)}, {SetExpr::ball(kZ, 2), z(-7)}});
  const Window zw = kZ.ball(10);
  const PwT comp = pwt_compose(step, shift, zw);
  for (const auto& x : zw.elements()) CHECK(pwt_apply(comp, x) == pwt_apply(step, pwt_apply(shift, x)));

  // The image of a map on the window must lie in the outer domain.
  const PwT into_evens = PwT::translation(evens(), z(1));
  CHECK_THROWS(pwt_compose(into_evens, into_evens, zw));
}

TEST_CASE("pwt_validate") {
  const std::vector<Elem> gens{bs("(2,0)"), bs("(2,1)")};
  const auto sg = SetExpr::semigroup(kBs, gens, true);
  CHECK(pwt_validate(PwT::translation(sg, gens[0]), kBs.ball(3)).passed());

  const PwT overlap(SetExpr::all(kZ), {{evens(), z(0)}, {SetExpr::all(kZ), z(1)}});
  const auto r = pwt_validate(overlap, kZ.ball(3));
  CHECK_FALSE(r.passed());
  REQUIRE(r.find("pieces-disjoint") != nullptr);
  CHECK_FALSE(r.find("pieces-disjoint")->passed);
  CHECK(r.find("pieces-disjoint")->detail.find("(0)") != std::string::npos);

  const SetExpr odds = SetExpr::translate(z(1), evens());
  const PwT collide(SetExpr::all(kZ), {{evens(), z(1)}, {odds, z(0)}});
  const auto r2 = pwt_validate(collide, kZ.ball(3));
  REQUIRE(r2.find("injective") != nullptr);
  CHECK_FALSE(r2.find("injective")->passed);

  const PwT outside(SetExpr::all(kZ), {{SetExpr::all(kZ), z(2)}}, {z(1)});
  CHECK_FALSE(pwt_validate(outside, kZ.ball(2)).find("displacements-in-S")->passed);
}

TEST_CASE("check_equi_witness") {
  const SetExpr a = SetExpr::slab(kBs, 0, 1, 0);
  const Window w = kBs.ball(3);
  CHECK(check_equi_witness({a, a, {a}, {a}, {kBs.identity()}}, w).passed());
  const SetExpr odds = SetExpr::translate(z(1), evens());
  CHECK(check_equi_witness({evens(), odds, {evens()}, {odds}, {z(1)}}, kZ.ball(6)).passed());
  const auto bad = check_equi_witness({evens(), odds, {evens()}, {odds}, {z(2)}}, kZ.ball(6));
  REQUIRE_FALSE(bad.passed());
  CHECK(bad.first_failure()->name == "translation");
  CHECK_FALSE(bad.first_failure()->detail.empty());
}

TEST_CASE("bounded_check") {
  const SetExpr s1 = SetExpr::slab(kBs, 0, 1, 0);
  const SetExpr s2 = SetExpr::slab(kBs, 0, 2, 0);
  const Window w = kBs.ball(4);
  const auto r1 = bounded_check(s1, s2, 2, w);
  REQUIRE(r1.cover);
  CHECK(*r1.cover == std::vector<Elem>{kBs.identity()});

  // Slab(0,2,0) is covered by Slab(0,1,0) and its (1,1)-translate.
  const std::vector<Elem> pair{kBs.identity(), bs("(1,1)")};
  CHECK(covers(s2, s1, pair, w));
  CHECK_FALSE(covers(s2, s1, {kBs.identity()}, w));
  const auto r2 = bounded_check(s2, s1, 2, w);
  REQUIRE(r2.cover);
  CHECK(covers(s2, s1, *r2.cover, w));
  CHECK(r2.cover->size() <= 2);

  const auto r3 = bounded_check(SetExpr::all(kZ), SetExpr::finite(kZ, {z(0)}), 2, kZ.ball(4));
  CHECK_FALSE(r3.cover);
  CHECK(r3.refuted_by_counting);
}
