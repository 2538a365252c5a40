#include <catch2/catch_amalgamated.hpp>

#include "modforms/degeneracy.hpp"
#include "modforms/space_basis.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace modforms;

TEST_CASE("degeneracy_i coefficient reindexing") {
  QExpansion f = oracles::eta11_oracle(3);  // q - 2q^2 - q^3
  QExpansion img = degeneracy_i(f, {11, 22, 2});
  REQUIRE(img.level == 22);
  REQUIRE(img.prec == 6);
  std::vector<long> expect = {0, 0, 1, 0, -2, 0, -1};
  for (long m = 0; m <= 6; ++m) REQUIRE(cmp(img.c(m), Rat(expect[m])) == 0);

  // d = 1: identity with the level tag replaced
  QExpansion inc = degeneracy_i(f, {11, 33, 1});
  REQUIRE(inc.level == 33);
  REQUIRE(inc.coeffs == f.coeffs);

  // i_2 then i_3 equals i_6
  QExpansion f66 = degeneracy_i(degeneracy_i(f, {11, 22, 2}), {22, 66, 3});
  QExpansion f66b = degeneracy_i(f, {11, 66, 6});
  REQUIRE(f66 == f66b);

  REQUIRE_THROWS_AS(degeneracy_i(f, {11, 22, 11}), Error);
  REQUIRE_THROWS_AS(degeneracy_i(f, {11, 23, 1}), Error);
}

TEST_CASE("degeneracy_i agrees with v_operator on coefficients") {
  QExpansion f = oracles::eta11_oracle(6);
  QExpansion a = degeneracy_i(f, {11, 33, 3});
  QExpansion b = v_operator(f, 3);
  REQUIRE(a.coeffs == b.coeffs);
}

TEST_CASE("pi_filter") {
  QExpansion f(2, 6, 3);
  f.coeffs = {Rat(1), Rat(1), Rat(1), Rat(1)};  // 1 + q + q^2 + q^3
  REQUIRE(pi_filter(f, 1) == f);
  QExpansion g = pi_filter(f, 2);
  std::vector<long> expect = {1, 0, 1, 0};
  for (long m = 0; m <= 3; ++m) REQUIRE(cmp(g.c(m), Rat(expect[m])) == 0);
  // pi_2 after pi_3 equals pi_6 on level divisible by 6
  QExpansion h(2, 6, 3);
  h.coeffs = {Rat(5), Rat(4), Rat(3), Rat(2)};
  REQUIRE(pi_filter(pi_filter(h, 2), 3) == pi_filter(h, 6));
  REQUIRE_THROWS_AS(pi_filter(f, 4), Error);
}

TEST_CASE("pi_projector keeps exactly the prime-to-N coefficients") {
  QExpansion f(2, 6, 6);
  for (long m = 0; m <= 6; ++m) f.coeffs[m] = Rat(m + 1);
  QExpansion p = pi_projector(f, 6);
  for (long m = 0; m <= 6; ++m) {
    if (std::gcd(m, 6L) == 1)
      REQUIRE(cmp(p.c(m), f.c(m)) == 0);
    else
      REQUIRE(sgn(p.c(m)) == 0);
  }

  // prime level: pi = 1 - pi_p
  QExpansion g(2, 5, 5);
  for (long m = 0; m <= 5; ++m) g.coeffs[m] = Rat(2 * m - 3);
  QExpansion direct = add(g, scale(pi_filter(g, 5), Rat(-1)));
  REQUIRE(pi_projector(g, 5) == direct);

  // idempotence on random coefficients
  testutil::Rng rng(5);
  for (int iter = 0; iter < 10; ++iter) {
    QExpansion h2(2, 12, 12);
    for (long m = 0; m <= 12; ++m) h2.coeffs[m] = Rat(rng.range(-9, 9));
    QExpansion once = pi_projector(h2, 12);
    REQUIRE(pi_projector(once, 12) == once);
  }
}

TEST_CASE("k0_subspace spec examples") {
  // (2,11): the only cusp form has c_1 = 1, so K_0 = 0
  SpaceBasis s11 = sk_basis(2, 11, sturm_bound(2, 11));
  REQUIRE(k0_subspace(s11).dim() == 0);

  // (2,22): K_0 is one-dimensional, spanned by i_2(f11)
  long prec22 = sturm_bound(2, 22);
  SpaceBasis s22 = sk_basis(2, 22, prec22);
  Subspace k0 = k0_subspace(s22);
  REQUIRE(k0.dim() == 1);
  QExpansion f11 = oracles::eta11_oracle(prec22);
  QExpansion i2 = degeneracy_i(f11, {11, 22, 2}, prec22);
  REQUIRE(k0.contains(i2.coeffs));

  // N = 1: every index is coprime, so K_0 = 0
  SpaceBasis s1 = sk_basis(12, 1, sturm_bound(12, 1));
  REQUIRE(k0_subspace(s1).dim() == 0);
}

TEST_CASE("k0 equals the kernel of pi on the space") {
  long prec = sturm_bound(2, 22);
  SpaceBasis s = sk_basis(2, 22, prec);
  Subspace k0 = k0_subspace(s);
  // pi kills a space element iff it lies in K_0
  testutil::Rng rng(77);
  for (int iter = 0; iter < 20; ++iter) {
    std::vector<Rat> x(s.basis.rows);
    for (Rat& c : x) c = Rat(rng.range(-4, 4));
    std::vector<Rat> form = vecmat(x, s.basis);
    QExpansion f(s.weight, s.level, s.prec);
    f.coeffs = form;
    bool killed = is_zero(pi_projector(f, s.level));
    REQUIRE(killed == k0.contains(form));
  }
}

TEST_CASE("oldsum_subspace spec examples") {
  long prec22 = sturm_bound(2, 22);
  Subspace old22 = oldsum_subspace(2, 22, prec22);
  REQUIRE(old22.dim() == 1);

  // prime level over S_2(Gamma0(1)) = 0
  Subspace old11 = oldsum_subspace(2, 11, sturm_bound(2, 11));
  REQUIRE(old11.dim() == 0);

  // (2,33): i_3(S_2(11)) is 1-dim, i_11(S_2(3)) = 0
  Subspace old33 = oldsum_subspace(2, 33, sturm_bound(2, 33));
  REQUIRE(old33.dim() == 1);
}

TEST_CASE("verify_theorem1 spec examples") {
  Theorem1Report r22 = verify_theorem1(2, 22);
  REQUIRE(r22.pass());
  REQUIRE(r22.dim_k0 == 1);
  REQUIRE(r22.dim_oldsum == 1);

  Theorem1Report r11 = verify_theorem1(2, 11);
  REQUIRE(r11.pass());
  REQUIRE(r11.dim_k0 == 0);

  Theorem1Report r61 = verify_theorem1(6, 1);
  REQUIRE(r61.pass());
  REQUIRE(r61.dim_k0 == 0);

  // full M_k variant runs alongside where bases exist
  REQUIRE(r22.mk_dim_k0 >= 0);
  REQUIRE(r22.mk_equal);
}

TEST_CASE("quotient_space") {
  long prec = sturm_bound(2, 22);
  SpaceBasis s = sk_basis(2, 22, prec);
  QuotientSpace q = quotient_space(s);
  REQUIRE(q.dim() == 1);
  REQUIRE(q.k0.dim() == 1);

  // projection composed with inclusion is the identity on the section
  std::vector<Rat> y = {Rat(7)};
  std::vector<Rat> back = q.project(q.include(y));
  REQUIRE(back == y);

  // K_0 = 0: the quotient is the identity presentation
  SpaceBasis s11 = sk_basis(2, 11, sturm_bound(2, 11));
  QuotientSpace q11 = quotient_space(s11);
  REQUIRE(q11.dim() == 1);
  REQUIRE(q11.k0.dim() == 0);
  REQUIRE(q11.section_forms == s11.basis);
  // c_1 functional well-defined on the quotient
  REQUIRE(cmp(q11.coefficient({Rat(1)}, 1), Rat(1)) == 0);
  REQUIRE_THROWS_AS(q11.coefficient({Rat(1)}, 11), Error);
}

TEST_CASE("theorem1 JSON report shape") {
  Theorem1Report r = verify_theorem1(2, 22);
  nlohmann::json j = theorem1_report_to_json(r);
  REQUIRE(j["k"] == 2);
  REQUIRE(j["N"] == 22);
  REQUIRE(j["dim_K0"] == 1);
  REQUIRE(j["dim_oldsum"] == 1);
  REQUIRE(j["equal"] == true);
  REQUIRE(j.contains("bases"));
}
