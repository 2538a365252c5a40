#include <catch2/catch_amalgamated.hpp>

#include "modforms/tensor.hpp"
#include "test_util.hpp"

using namespace modforms;
using testutil::diag;
using testutil::mat;
using testutil::random_matrix;
using testutil::random_subspace;
using testutil::span;

TEST_CASE("kron spec examples") {
  REQUIRE(kron(RatMatrix::identity(2), RatMatrix::identity(3)) ==
          RatMatrix::identity(6));
  REQUIRE(kron(diag({0, 1}), diag({1, 0})) == diag({0, 0, 1, 0}));
  REQUIRE(kron(mat({{1, 1}, {0, 1}}), mat({{2}})) == mat({{2, 2}, {0, 2}}));
}

TEST_CASE("kron associativity and rank multiplicativity") {
  Rng rng(11);
  for (int iter = 0; iter < 40; ++iter) {
    size_t r1 = static_cast<size_t>(rng.range(1, 3));
    size_t c1 = static_cast<size_t>(rng.range(1, 3));
    size_t r2 = static_cast<size_t>(rng.range(1, 3));
    size_t c2 = static_cast<size_t>(rng.range(1, 3));
    size_t r3 = static_cast<size_t>(rng.range(1, 3));
    size_t c3 = static_cast<size_t>(rng.range(1, 3));
    RatMatrix a = random_matrix(rng, r1, c1, -3, 3);
    RatMatrix b = random_matrix(rng, r2, c2, -3, 3);
    RatMatrix c = random_matrix(rng, r3, c3, -3, 3);
    REQUIRE(kron(kron(a, b), c) == kron(a, kron(b, c)));
    REQUIRE(rank(kron(a, b)) == rank(a) * rank(b));
  }
}

TEST_CASE("lemma_ker_rhs spec examples") {
  {
    TensorFactors t{{{2, diag({0, 1})}, {2, diag({1, 0})}}};
    Subspace rhs = lemma_ker_rhs(t);
    REQUIRE(rhs == span(4, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}}));
    REQUIRE(rhs == lemma_ker_lhs(t));
  }
  {
    // all factors invertible: kernel is zero
    TensorFactors t{{{2, mat({{1, 1}, {0, 1}})}, {2, diag({2, 3})}}};
    REQUIRE(lemma_ker_rhs(t) == Subspace::zero(4));
    REQUIRE(lemma_ker_lhs(t) == Subspace::zero(4));
  }
}

TEST_CASE("kernel lemma fuzzed against Kronecker oracle") {
  Rng rng(2024);
  for (int iter = 0; iter < 120; ++iter) {
    size_t n = static_cast<size_t>(rng.range(1, 3));
    TensorFactors t;
    for (size_t i = 0; i < n; ++i) {
      size_t d = static_cast<size_t>(rng.range(1, 4));
      t.factors.push_back({d, random_matrix(rng, d, d, -3, 3)});
    }
    REQUIRE(lemma_ker_rhs(t) == lemma_ker_lhs(t));
  }
}

TEST_CASE("lemma_main_rhs spec examples") {
  {
    // all V' and V'' full: both sides the full space
    TensorSubspacePair t{{{2, Subspace::full(2), Subspace::full(2)},
                          {3, Subspace::full(3), Subspace::full(3)}}};
    auto sides = lemma_main_rhs(t);
    REQUIRE(sides.lhs == Subspace::full(6));
    REQUIRE(sides.rhs == Subspace::full(6));
  }
  {
    // n=2: V'_1 = span(e1), V''_1 = span(e2), second factor full/full:
    // both sides span(e2) (x) full
    TensorSubspacePair t{{{2, span(2, {{1, 0}}), span(2, {{0, 1}})},
                          {2, Subspace::full(2), Subspace::full(2)}}};
    auto sides = lemma_main_rhs(t);
    Subspace expect = span(4, {{0, 0, 1, 0}, {0, 0, 0, 1}});
    REQUIRE(sides.lhs == expect);
    REQUIRE(sides.rhs == expect);
  }
}

TEST_CASE("intersection lemma fuzzed") {
  Rng rng(777);
  for (int iter = 0; iter < 120; ++iter) {
    size_t n = static_cast<size_t>(rng.range(1, 3));
    TensorSubspacePair t;
    for (size_t i = 0; i < n; ++i) {
      size_t d = static_cast<size_t>(rng.range(1, 4));
      t.factors.push_back(
          {d, random_subspace(rng, d), random_subspace(rng, d)});
    }
    auto sides = lemma_main_rhs(t);
    REQUIRE(sides.lhs == sides.rhs);
  }
}
