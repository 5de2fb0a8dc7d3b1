#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "paradox/induced.hpp"

using namespace paradox;

namespace {

const Group kF = Group::free(2);
const Group kZ2 = Group::zn(2);
const Group kBs = Group::dyadic_affine();

Elem f(const char* text) { return kF.parse_elem(text); }

// Brute-force coset test: g^-1 h is a power w^k with |k| <= 12.
bool same_coset_oracle(const Elem& w, const Elem& g, const Elem& h) {
  const Elem d = kF.mul(kF.inv(g), h);
  for (int k = -12; k <= 12; ++k) {
    if (kF.pow(w, k) == d) return true;
  }
  return false;
}

// Γ0 = <gen> acting on "x0".."x{n-1}" by x_i -> x_{i+1 mod n}.
ActionTable rotation_table(const SubgroupSpec& h, const Elem& gen, int n) {
  ActionTable table(h);
  for (int i = 0; i < n; ++i) table.set(gen, "x" + std::to_string(i), "x" + std::to_string((i + 1) % n));
  return table;
}

TokenWitness two_piece_witness(const Elem& t1, const Elem& t2) {
  TokenWitness w;
  w.set = "E";
  w.pieces = {"E1", "E2"};
  w.translators = {t1, t2};
  w.split = 1;
  w.disjoint = {{0, 1}};
  w.covers = {{0}, {1}};
  w.within = {0, 1};
  return w;
}

}  // namespace

TEST_CASE("coset_normalize examples") {
  const auto a = SubgroupSpec::cyclic(kF, f("a"));
  auto [rep, r] = coset_normalize(a, f("b a a"));
  CHECK(kF.format(rep) == "b");
  CHECK(kF.format(r) == "a a");
  auto [rep2, r2] = coset_normalize(a, f("a^-1 a^-1 a^-1"));
  CHECK(kF.is_identity(rep2));
  CHECK(r2 == f("a^-1 a^-1 a^-1"));

  const auto axis = SubgroupSpec::coordinates(kZ2, {0});
  auto [zrep, zr] = coset_normalize(axis, kZ2.parse_elem("(3,5)"));
  CHECK(kZ2.format(zrep) == "(0,5)");
  CHECK(kZ2.format(zr) == "(3,0)");

  const auto kernel = SubgroupSpec::slope_kernel(kBs);
  auto [brep, br] = coset_normalize(kernel, kBs.parse_elem("(4,3)"));
  CHECK(kBs.format(brep) == "(4,0)");
  CHECK(kBs.format(br) == "(1,3/4)");

  CHECK_THROWS_AS(SubgroupSpec::cyclic(kZ2, kZ2.parse_elem("(1,0)")), Unsupported);
  CHECK_THROWS_AS(SubgroupSpec::slope_kernel(kF), Unsupported);
  CHECK(SubgroupSpec::parse(kF, "cyclic:a b").to_string() == "cyclic:a b");
  CHECK(SubgroupSpec::parse(kZ2, "coords:1,0").to_string() == "coords:0,1");
  CHECK_THROWS_AS(SubgroupSpec::parse(kZ2, "coords:x"), ParseError);
  CHECK_THROWS_AS(SubgroupSpec::parse(kF, "center"), ParseError);
}

TEST_CASE("coset representatives are canonical for cyclic subgroups") {
  const Window ball = kF.ball(3);
  for (const char* word : {"a", "a b", "b a b^-1", "a a b a^-1", "a b a b", "b^-1"}) {
    const Elem w = f(word);
    const auto h = SubgroupSpec::cyclic(kF, w);
    for (const auto& g : ball.elements()) {
      const auto [rep, r] = coset_normalize(h, g);
      CHECK(kF.mul(rep, r) == g);
      REQUIRE(h.exponents(r));
      CHECK(kF.pow(w, (*h.exponents(r))[0]) == r);
      // Normalizing a representative is a fixed point.
      const auto [rep2, r2] = coset_normalize(h, rep);
      CHECK(rep2 == rep);
      CHECK(kF.is_identity(r2));
      for (int k : {-2, -1, 1, 3}) CHECK(coset_normalize(h, kF.mul(g, kF.pow(w, k))).first == rep);
    }
    // Equal representatives exactly on equal cosets.
    const Window small = kF.ball(2);
    for (const auto& g : small.elements()) {
      for (const auto& x : small.elements()) {
        const bool same = coset_normalize(h, g).first == coset_normalize(h, x).first;
        CHECK(same == same_coset_oracle(w, g, x));
      }
    }
  }
}

TEST_CASE("coordinate and kernel transversals") {
  const Group z3 = Group::zn(3);
  const auto h = SubgroupSpec::coordinates(z3, {0, 2});
  const Window ball = z3.ball(3);
  for (const auto& g : ball.elements()) {
    const auto [rep, r] = coset_normalize(h, g);
    CHECK(z3.mul(rep, r) == g);
    CHECK(rep.vec()[0] == 0);
    CHECK(rep.vec()[2] == 0);
    CHECK(rep.vec()[1] == g.vec()[1]);
    CHECK(h.contains(r));
  }
  const auto k = SubgroupSpec::slope_kernel(kBs);
  const Window bb = kBs.ball(3);
  for (const auto& g : bb.elements()) {
    const auto [rep, r] = coset_normalize(k, g);
    CHECK(kBs.mul(rep, r) == g);
    CHECK(r.affine().log2a == 0);
    CHECK(coset_normalize(k, rep).first == rep);
    CHECK(k.contains(g) == (g.affine().log2a == 0));
  }
}

TEST_CASE("action tables") {
  const auto h = SubgroupSpec::cyclic(kF, f("a"));
  const ActionTable table = rotation_table(h, f("a"), 3);
  CHECK(table.act(kF.identity(), "x0") == "x0");
  CHECK(table.act(f("a a"), "x0") == "x2");
  CHECK(table.act(f("a^-1"), "x0") == "x2");
  CHECK(table.act(kF.pow(f("a"), 7), "x1") == "x2");
  CHECK_THROWS_AS(table.act(f("a"), "y"), IncompleteTable);
  CHECK(table.validate().passed());

  ActionTable bad = table;
  bad.set(f("a a"), "x0", "x1");
  CHECK_FALSE(bad.validate().passed());
  CHECK_THROWS_AS(bad.set(f("b"), "x0", "x1"), DomainError);

  const auto kernel = SubgroupSpec::slope_kernel(kBs);
  ActionTable kt(kernel);
  kt.set(kBs.parse_elem("(1,1/2)"), "p", "q");
  CHECK(kt.act(kBs.parse_elem("(1,1/2)"), "p") == "q");
  CHECK_THROWS_AS(kt.act(kBs.parse_elem("(1,1)"), "p"), IncompleteTable);
}

TEST_CASE("induced_act examples and the action law") {
  const auto h = SubgroupSpec::cyclic(kF, f("a"));
  const ActionTable table = rotation_table(h, f("a"), 3);
  const YPoint p{kF.identity(), "x0"};
  CHECK(induced_act(table, kF.identity(), p) == p);
  CHECK(induced_act(table, f("a"), p) == YPoint{kF.identity(), "x1"});
  CHECK(induced_act(table, f("b"), p) == YPoint{f("b"), "x0"});
  CHECK(induced_act(table, f("b a"), p) == YPoint{f("b"), "x1"});

  const Window ball = kF.ball(2);
  for (const auto& s : ball.elements()) {
    for (const auto& s2 : ball.elements()) {
      for (const auto& g : ball.elements()) {
        const YPoint q = y_point(table, g, "x1");
        CHECK(induced_act(table, s2, induced_act(table, s, q)) == induced_act(table, kF.mul(s2, s), q));
      }
    }
  }

  const auto axis = SubgroupSpec::coordinates(kZ2, {0});
  const ActionTable zt = rotation_table(axis, kZ2.parse_elem("(1,0)"), 4);
  const Window zb = kZ2.ball(2);
  for (const auto& s : zb.elements()) {
    for (const auto& s2 : zb.elements()) {
      const YPoint q{kZ2.parse_elem("(0,1)"), "x3"};
      CHECK(induced_act(zt, s2, induced_act(zt, s, q)) == induced_act(zt, kZ2.mul(s2, s), q));
    }
  }
}

TEST_CASE("induce_witness") {
  const auto h = SubgroupSpec::cyclic(kF, f("a"));
  const TokenWitness tw = two_piece_witness(f("a"), f("a^-1 a^-1"));
  CHECK(check_token_witness(h, tw).passed());

  const auto same = induce_witness(h, tw, kF.identity());
  CHECK(same.translators == tw.translators);
  CHECK(check_induced_witness(h, same).passed());

  const auto at_b = induce_witness(h, tw, f("b"));
  CHECK(at_b.translators[0] == f("b a b^-1"));
  CHECK(at_b.translators[1] == f("b a^-1 a^-1 b^-1"));
  CHECK(check_induced_witness(h, at_b).passed());
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(kF.mul(at_b.translators[j], at_b.t) == kF.mul(at_b.t, tw.translators[j]));
  }

  // Fibers over different cosets are disjoint.
  const auto at_ba = induce_witness(h, tw, f("b a"));
  CHECK(at_ba.set.rep == at_b.set.rep);
  const auto at_a_b = induce_witness(h, tw, f("a b"));
  CHECK_FALSE(at_a_b.set.rep == at_b.set.rep);

  InducedWitness tampered = at_b;
  tampered.translators[1] = f("b a b^-1");
  const auto rep = check_induced_witness(h, tampered);
  CHECK_FALSE(rep.passed());
  CHECK(rep.first_failure()->name == "conjugation");

  InducedWitness moved = at_b;
  moved.pieces[0].token = "E2";
  CHECK_FALSE(check_induced_witness(h, moved).passed());

  TokenWitness missing = tw;
  missing.disjoint.clear();
  CHECK_FALSE(check_token_witness(h, missing).passed());
  CHECK_THROWS_AS(induce_witness(h, missing, f("b")), InvariantViolation);

  TokenWitness outside = tw;
  outside.translators[0] = f("b");
  CHECK(check_token_witness(h, outside).first_failure()->name == "translators-in-subgroup");
}

TEST_CASE("randomized token witnesses transport") {
  std::mt19937 rng(3);
  const std::vector<SubgroupSpec> specs{
      SubgroupSpec::cyclic(kF, f("a b")),
      SubgroupSpec::coordinates(kZ2, {1}),
      SubgroupSpec::slope_kernel(kBs),
  };
  for (const auto& h : specs) {
    const Group& g = h.group();
    const Window ball = g.ball(3);
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t n = 2 + rng() % 4;
      TokenWitness w;
      w.set = "E";
      w.split = 1 + rng() % (n - 1);
      std::vector<std::size_t> first;
      std::vector<std::size_t> second;
      for (std::size_t j = 0; j < n; ++j) {
        w.pieces.push_back("E" + std::to_string(j));
        // A random Γ0 element: the Γ0-part of a random ball element.
        w.translators.push_back(coset_normalize(h, ball.elements()[rng() % ball.size()]).second);
        w.within.push_back(j);
        (j < w.split ? first : second).push_back(j);
        for (std::size_t i = 0; i < j; ++i) w.disjoint.emplace_back(i, j);
      }
      w.covers = {first, second};
      const Elem t = ball.elements()[rng() % ball.size()];
      const auto out = induce_witness(h, w, t);
      CHECK(check_induced_witness(h, out).passed());
      for (std::size_t j = 0; j < n; ++j) CHECK(g.mul(out.translators[j], t) == g.mul(t, w.translators[j]));
    }
  }
}
