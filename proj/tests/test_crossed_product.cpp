#include <doctest.h>

#include <random>
#include <set>
#include <string>
#include <vector>

#include "paradox/crossed_product.hpp"
#include "paradox/errors.hpp"
#include "paradox/smallsets.hpp"

using namespace paradox;

namespace {

const Group kZ = Group::zn(1);
const Group kBs = Group::dyadic_affine();
const Group kF = Group::free(2);

Elem z(std::int64_t n) { return Elem(IntVector{n}); }
Elem bs(const char* text) { return kBs.parse_elem(text); }

// Dense oracle for products: (xy)_t(p) = Σ_r x_r(p)·y_{r^-1 t}(r^-1 p).
Rational product_at(const CPElem& x, const CPElem& y, const Elem& t, const Elem& p) {
  const Group& g = x.group();
  Rational sum = 0;
  for (const auto& [r, f] : x.support()) {
    const Elem ri = g.inv(r);
    sum += f.at(p) * y.at(g.mul(ri, t), g.mul(ri, p));
  }
  return sum;
}

// (x*)_t(p) = x_{t^-1}(t^-1 p).
Rational adjoint_at(const CPElem& x, const Elem& t, const Elem& p) {
  const Group& g = x.group();
  const Elem ti = g.inv(t);
  return x.at(ti, g.mul(ti, p));
}

std::vector<Elem> all_ts(const CPElem& x, const Group& g, int r) {
  std::set<Elem> ts;
  for (const auto& [t, f] : x.support()) ts.insert(t);
  const Window ball = g.ball(r);
  for (const auto& t : ball.elements()) ts.insert(t);
  return {ts.begin(), ts.end()};
}

// Small random elements of Z with interval, parity and finite coefficients.
CPElem random_z(std::mt19937& rng) {
  const std::vector<SetExpr> sets{
      SetExpr::all(kZ),
      SetExpr::ball(kZ, 2),
      SetExpr::semigroup(kZ, {z(2), z(-2)}, true),
      SetExpr::finite(kZ, {z(0), z(3), z(-1)}),
      SetExpr::diff(SetExpr::all(kZ), SetExpr::semigroup(kZ, {z(-1)}, false)),
  };
  CPElem x(kZ);
  const int terms = 1 + static_cast<int>(rng() % 3);
  for (int i = 0; i < terms; ++i) {
    const auto& a = sets[rng() % sets.size()];
    const auto t = z(static_cast<std::int64_t>(rng() % 5) - 2);
    const Rational q(static_cast<int>(rng() % 5) - 2, 1 + static_cast<int>(rng() % 2));
    x = cp_add(x, CPElem::term(a, t, q));
  }
  return x;
}

ParadoxWitness example_witness() {
  return std::get<ParadoxWitness>(free_semigroup_witness(kBs, bs("(2,0)"), bs("(2,1)"), 6));
}

}  // namespace

TEST_CASE("cp_mul examples") {
  const SetExpr a = SetExpr::ball(kZ, 2);
  const SetExpr b = SetExpr::semigroup(kZ, {z(1)}, true);
  const CPElem ab = cp_mul(CPElem::indicator(a), CPElem::indicator(b));
  REQUIRE(ab.support().size() == 1);
  const auto& terms = ab.support().begin()->second.terms();
  REQUIRE(terms.size() == 1);
  CHECK(same_syntax(terms[0].set, SetExpr::intersect(a, b)));
  CHECK(kZ.is_identity(ab.support().begin()->first));

  // u_s 1_A = 1_{sA} u_s.
  const Elem s = bs("(2,0)");
  const SetExpr sg = SetExpr::semigroup(kBs, {bs("(2,0)"), bs("(2,1)")}, true);
  const CPElem us_a = cp_mul(CPElem::unitary(kBs, s), CPElem::indicator(sg));
  REQUIRE(us_a.support().size() == 1);
  CHECK(us_a.support().begin()->first == s);
  CHECK(same_syntax(us_a.support().begin()->second.terms()[0].set, SetExpr::translate(s, sg)));

  // (1_{sA} u_s)* (1_{sA} u_s) = 1_A u_e.
  const CPElem v = CPElem::term(SetExpr::translate(s, sg), s);
  const CPElem vv = cp_mul(cp_adjoint(v), v);
  CHECK(vv.to_string() == CPElem::indicator(sg).to_string());
}

TEST_CASE("cp_adjoint examples") {
  const SetExpr a = SetExpr::ball(kZ, 3);
  CHECK(cp_adjoint(CPElem::indicator(a)).to_string() == CPElem::indicator(a).to_string());
  const Elem s = z(2);
  const CPElem x = CPElem::term(SetExpr::translate(s, a), s);
  CHECK(cp_adjoint(x).to_string() == CPElem::term(a, z(-2)).to_string());
  CHECK(cp_adjoint(CPElem(kZ)).is_zero());
}

TEST_CASE("products and adjoints agree with the dense oracle") {
  std::mt19937 rng(11);
  const Window w = kZ.ball(6);
  for (int trial = 0; trial < 40; ++trial) {
    const CPElem x = random_z(rng);
    const CPElem y = random_z(rng);
    const CPElem xy = cp_mul(x, y);
    const CPElem xs = cp_adjoint(x);
    for (const auto& t : all_ts(xy, kZ, 4)) {
      for (const auto& p : w.elements()) {
        CHECK(xy.at(t, p) == product_at(x, y, t, p));
        CHECK(xs.at(t, p) == adjoint_at(x, t, p));
      }
    }
  }
}

TEST_CASE("algebra laws hold extensionally on windows") {
  std::mt19937 rng(5);
  const Window w = kZ.ball(8);
  for (int trial = 0; trial < 25; ++trial) {
    const CPElem x = random_z(rng);
    const CPElem y = random_z(rng);
    const CPElem c = random_z(rng);
    CHECK_FALSE(cp_compare(cp_mul(cp_mul(x, y), c), cp_mul(x, cp_mul(y, c)), w));
    CHECK_FALSE(cp_compare(cp_mul(x, cp_add(y, c)), cp_add(cp_mul(x, y), cp_mul(x, c)), w));
    CHECK_FALSE(cp_compare(cp_mul(cp_add(x, y), c), cp_add(cp_mul(x, c), cp_mul(y, c)), w));
    CHECK_FALSE(cp_compare(cp_adjoint(cp_mul(x, y)), cp_mul(cp_adjoint(y), cp_adjoint(x)), w));
    CHECK(cp_adjoint(cp_adjoint(x)).to_string() == x.to_string());
    CHECK(cp_sub(x, x).is_zero());
  }
}

TEST_CASE("covariance u_t 1_A = 1_{tA} u_t") {
  const Window w = kBs.ball(3);
  const std::vector<SetExpr> sets{
      SetExpr::semigroup(kBs, {bs("(2,0)"), bs("(2,1)")}, true),
      SetExpr::slab(kBs, 0, 1, 0),
      SetExpr::ball(kBs, 1),
      SetExpr::finite(kBs, {bs("(1,1)"), bs("(1/2,0)")}),
  };
  const Window ts = kBs.ball(2);
  for (const auto& a : sets) {
    for (const auto& t : ts.elements()) {
      const CPElem lhs = cp_mul(CPElem::unitary(kBs, t), CPElem::indicator(a));
      const CPElem rhs = CPElem::term(SetExpr::translate(t, a), t);
      CHECK_FALSE(cp_compare(lhs, rhs, w));
    }
  }
}

TEST_CASE("text form round trips") {
  const Elem s = bs("(2,0)");
  const SetExpr sg = SetExpr::semigroup(kBs, {bs("(2,0)"), bs("(2,1)")}, true);
  const CPElem x = cp_add(CPElem::term(SetExpr::translate(s, sg), s, Rational(3, 2)),
                          CPElem::term(SetExpr::slab(kBs, 0, 1, 0), kBs.identity(), -1));
  const std::string text = x.to_string();
  CHECK(text.find("3/2*[") != std::string::npos);
  CHECK(CPElem::parse(kBs, text).to_string() == text);
  CHECK(CPElem::parse(kBs, "0").is_zero());
  CHECK(CPElem::parse(kF, "1*[all]u(a b) + 2*[ball(1)]u(e)").support().size() == 2);
  CHECK_THROWS_AS(CPElem::parse(kF, "1*[all]u(a"), ParseError);
  CHECK_THROWS_AS(CPElem::parse(kF, "1*[all]v(a)"), ParseError);
  CHECK_THROWS_AS(CPElem::parse(kF, "1*[all]u(a) 2*[all]u(b)"), ParseError);
}

TEST_CASE("pi_witness for the 2x, 2x+1 witness") {
  const auto w = example_witness();
  const PIWitness pw = pi_witness(w);
  const Elem s = bs("(2,0)");
  const Elem t = bs("(2,1)");
  REQUIRE(pw.v.support().size() == 1);
  REQUIRE(pw.w.support().size() == 1);
  CHECK(pw.v.support().begin()->first == s);
  CHECK(pw.w.support().begin()->first == t);
  CHECK(same_syntax(pw.v.support().begin()->second.terms()[0].set, SetExpr::translate(s, w.set)));

  const Window win = positive_words_window(kBs, std::vector<Elem>{s, t}, 4);
  const auto rep = verify_pi_witness(pw, win);
  CHECK(rep.passed());
  CHECK(rep.checks.size() == 5);

  // v*v reduces to 1_A symbolically.
  CHECK(cp_mul(cp_adjoint(pw.v), pw.v).to_string() == pw.p.to_string());

  PIWitness tampered = pw;
  tampered.v = CPElem::term(SetExpr::translate(s, w.set), t);
  const auto bad = verify_pi_witness(tampered, win);
  CHECK_FALSE(bad.passed());
  REQUIRE(bad.first_failure() != nullptr);
  CHECK(bad.first_failure()->name == "v*v=p");
  CHECK(bad.first_failure()->detail.find(" at ") != std::string::npos);

  const PIWitness empty = pi_witness(ParadoxWitness{SetExpr::empty(kBs), {}, 0});
  CHECK(empty.p.is_zero());
  CHECK(verify_pi_witness(empty, win).passed());

  ParadoxWitness broken = w;
  broken.parts[0].translator = t;
  CHECK_THROWS_AS(pi_witness(broken, win), InvariantViolation);
  broken.split = 5;
  CHECK_THROWS_AS(pi_witness(broken), InvariantViolation);
}

TEST_CASE("pi_witness from a matching witness and translator mutations") {
  const Window b1 = kF.ball(1);
  const std::vector<Elem> s(b1.elements().begin(), b1.elements().end());
  const Window win = kF.ball(3);
  const auto m = std::get<MatchCert>(doubling_matching(SetExpr::all(kF), s, win));
  const auto w = witness_from_matching(m);
  const PIWitness pw = pi_witness(w, win);
  CHECK(verify_pi_witness(pw, win).passed());

  // Moving any single term to another translator breaks an identity.
  for (int which = 0; which < 2; ++which) {
    const CPElem& target = which == 0 ? pw.v : pw.w;
    for (const auto& [t, f] : target.support()) {
      for (const auto& term : f.terms()) {
        PIWitness mutated = pw;
        CPElem moved = cp_sub(target, CPElem::term(term.set, t, term.q));
        moved = cp_add(moved, CPElem::term(term.set, kF.mul(kF.parse_elem("b"), t), term.q));
        (which == 0 ? mutated.v : mutated.w) = moved;
        CHECK_FALSE(verify_pi_witness(mutated, win).passed());
      }
    }
  }
}

TEST_CASE("corner_compress") {
  const SetExpr a = SetExpr::greedy(kZ, 50);
  const auto seq = greedy_small_set(kZ, 50);
  const std::set<Elem> members(seq.begin(), seq.end());
  const Window w = kZ.ball(60);

  const auto rep = corner_compress(a, CPElem::unitary(kZ, z(1)), w);
  REQUIRE(rep.off_diagonal.size() == 1);
  std::size_t oracle = 0;
  for (const auto& x : seq) oracle += members.count(kZ.mul(z(1), x)) && w.contains(kZ.mul(z(1), x));
  CHECK(rep.off_diagonal[0].t == z(1));
  CHECK(rep.off_diagonal[0].support == oracle);
  CHECK(rep.max_support() <= 2);

  const SetExpr f = SetExpr::ball(kZ, 40);
  const auto diag = corner_compress(a, CPElem::indicator(f), w);
  CHECK(diag.off_diagonal.empty());
  for (const auto& p : w.elements()) {
    CHECK(diag.result.at(kZ.identity(), p) == Rational(members.count(p) && contains(f, p) ? 1 : 0));
  }

  CPElem x(kZ);
  for (std::int64_t t : {0, 1, -2}) x = cp_add(x, CPElem::unitary(kZ, z(t)));
  const auto three = corner_compress(a, x, w);
  CHECK(three.off_diagonal.size() == 2);
  CHECK(three.max_support() <= 2);
  for (const auto& e : three.off_diagonal) {
    std::size_t count = 0;
    for (const auto& y : seq) count += members.count(kZ.mul(e.t, y)) && w.contains(kZ.mul(e.t, y));
    CHECK(e.support == count);
  }
}
