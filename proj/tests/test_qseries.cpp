#include <catch2/catch_amalgamated.hpp>

#include "modforms/eisenstein.hpp"
#include "modforms/gamma0.hpp"
#include "modforms/qexp.hpp"
#include "oracles.hpp"

using namespace modforms;

static QExpansion one_plus_q(long prec) {
  QExpansion f(2, 1, prec);
  f.coeffs[0] = 1;
  f.coeffs[1] = 1;
  return f;
}

TEST_CASE("sturm bound examples") {
  REQUIRE(sturm_bound(12, 1) == 2);
  REQUIRE(sturm_bound(2, 11) == 3);
  REQUIRE(sturm_bound(2, 33) == 9);
  REQUIRE_THROWS_AS(sturm_bound(3, 1), Error);
  REQUIRE_THROWS_AS(sturm_bound(2, 0), Error);
}

TEST_CASE("add and scale") {
  QExpansion f = one_plus_q(3);
  QExpansion zero(2, 1, 3);
  REQUIRE(add(f, zero) == f);
  REQUIRE(is_zero(add(f, scale(f, Rat(-1)))));
  QExpansion g(2, 1, 1);
  g.coeffs[0] = 1;
  g.coeffs[1] = -1;
  QExpansion s = add(truncate(f, 1), g);
  REQUIRE(s.prec == 1);
  REQUIRE(cmp(s.c(0), Rat(2)) == 0);
  REQUIRE(sgn(s.c(1)) == 0);
  QExpansion wrong_weight(4, 1, 3);
  REQUIRE_THROWS_AS(add(f, wrong_weight), Error);
}

TEST_CASE("mul basics and weight addition") {
  QExpansion f = one_plus_q(4);
  QExpansion one(2, 1, 4);
  one.coeffs[0] = 1;
  QExpansion fo = mul(f, one);
  REQUIRE(fo.weight == 4);
  REQUIRE(fo.coeffs == f.coeffs);
  QExpansion sq = mul(f, f);
  REQUIRE(cmp(sq.c(0), Rat(1)) == 0);
  REQUIRE(cmp(sq.c(1), Rat(2)) == 0);
  REQUIRE(cmp(sq.c(2), Rat(1)) == 0);
  REQUIRE(sgn(sq.c(3)) == 0);
}

TEST_CASE("eisenstein series against divisor-sum oracle") {
  QExpansion e4 = eisenstein(4, 2);
  REQUIRE(cmp(e4.c(0), Rat(1)) == 0);
  REQUIRE(cmp(e4.c(1), Rat(240)) == 0);
  REQUIRE(cmp(e4.c(2), Rat(2160)) == 0);

  QExpansion e6 = eisenstein(6, 2);
  REQUIRE(cmp(e6.c(1), Rat(-504)) == 0);
  REQUIRE(cmp(e6.c(2), Rat(-16632)) == 0);

  REQUIRE_THROWS_AS(eisenstein(5, 2), Error);
  REQUIRE_THROWS_AS(eisenstein(2, 2), Error);

  // E4*E4 equals E8 on the window, E8 checked against brute sigma_7
  QExpansion e8 = mul(eisenstein(4, 2), eisenstein(4, 2));
  REQUIRE(cmp(e8.c(1), Rat(480) * Rat(oracles::sigma_brute(1, 7))) == 0);
  REQUIRE(cmp(e8.c(2), Rat(480) * Rat(oracles::sigma_brute(2, 7))) == 0);
  REQUIRE(cmp(e8.c(1), Rat(480)) == 0);
  REQUIRE(cmp(e8.c(2), Rat(61920)) == 0);
}

TEST_CASE("v_operator reindexing") {
  QExpansion f(2, 1, 2);
  f.coeffs = {Rat(1), Rat(1), Rat(1)};  // 1 + q + q^2
  REQUIRE(v_operator(f, 1) == f);

  QExpansion v2 = v_operator(f, 2);
  REQUIRE(v2.prec == 4);
  REQUIRE(v2.level == 2);
  REQUIRE(cmp(v2.c(0), Rat(1)) == 0);
  REQUIRE(sgn(v2.c(1)) == 0);
  REQUIRE(cmp(v2.c(2), Rat(1)) == 0);
  REQUIRE(sgn(v2.c(3)) == 0);
  REQUIRE(cmp(v2.c(4), Rat(1)) == 0);

  // composition: v_3(v_2(f)) = v_6(f)
  QExpansion a = v_operator(v_operator(f, 2), 3);
  QExpansion b = v_operator(f, 6);
  REQUIRE(a == b);
}

TEST_CASE("v_operator is a ring homomorphism") {
  QExpansion f = eisenstein(4, 6);
  QExpansion g = eisenstein(6, 6);
  for (long d : {2L, 3L}) {
    QExpansion lhs = v_operator(mul(f, g), d);
    QExpansion rhs = mul(v_operator(f, d), v_operator(g, d));
    REQUIRE(lhs == rhs);
  }
}

TEST_CASE("phi2 generator") {
  QExpansion p2 = phi2(2, 2);
  REQUIRE(cmp(p2.c(0), Rat(-1)) == 0);
  REQUIRE(cmp(p2.c(1), Rat(-24)) == 0);
  REQUIRE(cmp(p2.c(2), Rat(-24)) == 0);
  for (long d : {2L, 3L, 5L, 6L}) {
    REQUIRE(cmp(phi2(d, 3).c(0), Rat(1 - d)) == 0);
  }
  REQUIRE_THROWS_AS(phi2(1, 3), Error);
}

TEST_CASE("mul is commutative, associative, distributive") {
  QExpansion a = eisenstein(4, 8);
  QExpansion b = eisenstein(6, 8);
  QExpansion c = eisenstein(8, 8);
  REQUIRE(mul(a, b) == mul(b, a));
  REQUIRE(mul(mul(a, b), c) == mul(a, mul(b, c)));
  // distributivity over add at equal weights: a*(b + b') = a*b + a*b'
  QExpansion b2 = scale(b, Rat(5));
  REQUIRE(mul(a, add(b, b2)) == add(mul(a, b), mul(a, b2)));
}

TEST_CASE("E4^3 - E6^2 = 1728 Delta against product-expansion oracle") {
  long prec = 10;
  QExpansion e4 = eisenstein(4, prec);
  QExpansion e6 = eisenstein(6, prec);
  QExpansion lhs = add(mul(mul(e4, e4), e4), scale(mul(e6, e6), Rat(-1)));
  QExpansion delta = oracles::delta_oracle(prec);
  REQUIRE(lhs == scale(delta, Rat(1728)));
  // spot-check the oracle itself: tau(2) = -24, tau(3) = 252, tau(4) = -1472
  REQUIRE(cmp(delta.c(2), Rat(-24)) == 0);
  REQUIRE(cmp(delta.c(3), Rat(252)) == 0);
  REQUIRE(cmp(delta.c(4), Rat(-1472)) == 0);
}

TEST_CASE("eta quotient oracle matches the known level 11 form") {
  QExpansion f = oracles::eta11_oracle(6);
  std::vector<long> expect = {0, 1, -2, -1, 2, 1, 2};
  for (long m = 0; m <= 6; ++m) REQUIRE(cmp(f.c(m), Rat(expect[m])) == 0);
}
