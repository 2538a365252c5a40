#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "modforms/basis_io.hpp"
#include "modforms/gamma0.hpp"
#include "modforms/space_basis.hpp"
#include "oracles.hpp"

using namespace modforms;

TEST_CASE("gamma0 invariants at spec points") {
  Gamma0Invariants i1 = gamma0_invariants(1);
  REQUIRE(i1.index_mu == 1);
  REQUIRE(i1.nu2 == 1);
  REQUIRE(i1.nu3 == 1);
  REQUIRE(i1.nu_inf == 1);
  REQUIRE(i1.genus == 0);

  Gamma0Invariants i11 = gamma0_invariants(11);
  REQUIRE(i11.index_mu == 12);
  REQUIRE(i11.nu2 == 0);
  REQUIRE(i11.nu3 == 0);
  REQUIRE(i11.nu_inf == 2);
  REQUIRE(i11.genus == 1);

  REQUIRE(gamma0_invariants(6).index_mu == 12);
  REQUIRE(gamma0_invariants(22).genus == 2);
  REQUIRE(gamma0_invariants(33).genus == 3);
  REQUIRE_THROWS_AS(gamma0_invariants(0), Error);
}

TEST_CASE("index equals size of P^1(Z/N) for N <= 100") {
  for (long n = 1; n <= 100; ++n)
    REQUIRE(gamma0_invariants(n).index_mu == oracles::p1_size_brute(n));
}

TEST_CASE("cusp enumeration: counts and widths") {
  REQUIRE(enumerate_cusps(1).size() == 1);
  REQUIRE(enumerate_cusps(4).size() == 3);
  REQUIRE(enumerate_cusps(11).size() == 2);
  for (long n = 1; n <= 100; ++n) {
    Gamma0Invariants inv = gamma0_invariants(n);
    auto cusps = enumerate_cusps(n);
    REQUIRE(static_cast<long>(cusps.size()) == inv.nu_inf);
    long width_sum = 0;
    for (const Cusp& c : cusps) {
      REQUIRE(n % c.den == 0);
      REQUIRE(std::gcd(c.num, c.den) == 1);
      width_sum += c.width;
    }
    REQUIRE(width_sum == inv.index_mu);
  }
}

TEST_CASE("dimension formulas at spec points") {
  REQUIRE(dim_spaces(2, 11).dim_s == 1);
  REQUIRE(dim_spaces(12, 1).dim_s == 1);
  REQUIRE(dim_spaces(12, 1).dim_m == 2);
  REQUIRE(dim_spaces(2, 22).dim_s == 2);
  REQUIRE(dim_spaces(2, 1).dim_m == 0);
  REQUIRE(dim_spaces(4, 1).dim_m == 1);
  REQUIRE_THROWS_AS(dim_spaces(3, 1), Error);
}

TEST_CASE("build_mk_basis via products at level 1") {
  SpaceBasis m4 = build_mk_basis(4, 1, 6);
  REQUIRE(m4.dim() == 1);
  REQUIRE(cmp(m4.basis.at(0, 1), Rat(240)) == 0);  // E4 echelonized is E4

  SpaceBasis m12 = build_mk_basis(12, 1, 6);
  REQUIRE(m12.dim() == 2);
  REQUIRE(cmp(m12.basis.at(0, 0), Rat(1)) == 0);
  REQUIRE(sgn(m12.basis.at(0, 1)) == 0);
  REQUIRE(sgn(m12.basis.at(1, 0)) == 0);
  REQUIRE(cmp(m12.basis.at(1, 1), Rat(1)) == 0);

  SpaceBasis m2 = build_mk_basis(2, 1, 3);
  REQUIRE(m2.dim() == 0);
}

TEST_CASE("generator cusp constants") {
  // phi2(2) at level 2: infinity class (den 2) gives the q^0 coefficient,
  // the zero cusp (den 1) gives 1 - 1/2
  Generator g = detail::make_generator({{GenFactor::phi2_gen, 2, 2}}, 2, 4);
  auto cusps = enumerate_cusps(2);
  REQUIRE(cusps.size() == 2);
  for (const Cusp& c : cusps) {
    Rat val = generator_cusp_constant(g, c);
    if (c.den == 2) REQUIRE(cmp(val, Rat(-1)) == 0);
    if (c.den == 1) REQUIRE(cmp(val, make_rat(1, 2)) == 0);
  }
  // infinity-class constant equals c_0 for lifted Eisenstein factors too
  for (long d : {1L, 2L, 4L}) {
    Generator ge = detail::make_generator({{GenFactor::eis_lift, 4, d}}, 4, 4);
    auto c4 = enumerate_cusps(4);
    for (const Cusp& c : c4)
      if (c.den == 4)
        REQUIRE(cmp(generator_cusp_constant(ge, c), ge.series.c(0)) == 0);
  }
}

TEST_CASE("build_sk_basis at (12,1) matches the Delta oracle") {
  SpaceBasis s = build_sk_basis(12, 1, 8);
  REQUIRE(s.dim() == 1);
  QExpansion delta = oracles::delta_oracle(8);
  for (long m = 0; m <= 8; ++m)
    REQUIRE(cmp(s.basis.at(0, m), delta.c(m)) == 0);
}

TEST_CASE("weight 2 spaces need the ratio fallback") {
  // products alone cannot reach the genus-1 cusp form at level 11
  REQUIRE_THROWS_AS(build_sk_basis(2, 11, 8), Error);
  SpaceBasis s = sk_basis(2, 11, 8);
  REQUIRE(s.strategy == "augmented");
  REQUIRE(s.dim() == 1);
  QExpansion f = oracles::eta11_oracle(8);
  for (long m = 0; m <= 8; ++m) REQUIRE(cmp(s.basis.at(0, m), f.c(m)) == 0);
  // spec window: q - 2q^2 - q^3 + 2q^4 + q^5 + 2q^6
  std::vector<long> expect = {0, 1, -2, -1, 2, 1, 2};
  for (long m = 0; m <= 6; ++m) REQUIRE(cmp(s.basis.at(0, m), Rat(expect[m])) == 0);

  SpaceBasis s1 = sk_basis(2, 1, 3);
  REQUIRE(s1.dim() == 0);
}

TEST_CASE("export and ingest round-trip") {
  SpaceBasis s = sk_basis(2, 11, 8);
  std::string path = "/tmp/modforms_test_basis.json";
  export_basis(s, path);
  SpaceBasis t = ingest_basis(path);
  REQUIRE(t.weight == s.weight);
  REQUIRE(t.level == s.level);
  REQUIRE(t.prec == s.prec);
  REQUIRE(t.cuspidal == s.cuspidal);
  REQUIRE(t.basis == s.basis);
  REQUIRE(export_basis_string(t) == export_basis_string(s));
  std::remove(path.c_str());
}

TEST_CASE("ingest rejects bad files") {
  SpaceBasis s = sk_basis(2, 11, 8);
  nlohmann::json j = basis_to_json(s);

  nlohmann::json wrong_rows = j;
  wrong_rows["basis"].push_back(wrong_rows["basis"][0]);
  REQUIRE_THROWS_WITH(ingest_basis_json(wrong_rows),
                      Catch::Matchers::ContainsSubstring("dimension-mismatch"));

  nlohmann::json low_prec = j;
  low_prec["prec"] = 2;
  REQUIRE_THROWS_WITH(ingest_basis_json(low_prec),
                      Catch::Matchers::ContainsSubstring("insufficient-precision"));

  nlohmann::json garbage = j;
  garbage["basis"][0][1] = "not-a-number";
  REQUIRE_THROWS_WITH(ingest_basis_json(garbage),
                      Catch::Matchers::ContainsSubstring("parse-error"));
}

TEST_CASE("basis construction across a sample grid") {
  // a slice of the full grid: every successful construction must hit the
  // dimension formula on the nose (the builders assert it), and slicing
  // preserves canonical form
  for (long n : {1L, 2L, 3L, 4L, 5L, 6L, 8L, 9L, 10L, 11L, 12L}) {
    for (int k : {2, 4, 6}) {
      long prec = sturm_bound(k, n) + 2;
      SpaceBasis m = mk_basis(k, n, prec);
      SpaceBasis s = sk_basis(k, n, prec);
      REQUIRE(m.dim() == dim_spaces(k, n).dim_m);
      REQUIRE(s.dim() == dim_spaces(k, n).dim_s);
      for (long i = 0; i < s.dim(); ++i)
        REQUIRE(sgn(s.basis.at(i, 0)) == 0);
    }
  }
}
