#pragma once

#include <cstdint>
#include <vector>

#include "modforms/poly.hpp"
#include "modforms/primes64.hpp"
#include "modforms/rat.hpp"
#include "modforms/rat_matrix.hpp"

namespace modforms {
namespace detail {

// Characteristic polynomial over F_p via Hessenberg reduction; entries of
// `a` are reduced mod p, row-major, n x n.
inline std::vector<uint64_t> charpoly_mod_p(std::vector<uint64_t> a, size_t n,
                                            uint64_t p) {
  auto at = [&](size_t i, size_t j) -> uint64_t& { return a[i * n + j]; };
  // similarity-reduce to upper Hessenberg form
  for (size_t j = 0; j + 2 < n; ++j) {
    size_t piv = j + 1;
    while (piv < n && at(piv, j) == 0) ++piv;
    if (piv == n) continue;
    if (piv != j + 1) {
      for (size_t k = 0; k < n; ++k) std::swap(at(piv, k), at(j + 1, k));
      for (size_t k = 0; k < n; ++k) std::swap(at(k, piv), at(k, j + 1));
    }
    uint64_t inv = powmod_u64(at(j + 1, j), p - 2, p);
    for (size_t i = j + 2; i < n; ++i) {
      if (at(i, j) == 0) continue;
      uint64_t u = mulmod_u64(at(i, j), inv, p);
      for (size_t k = 0; k < n; ++k)
        at(i, k) = (at(i, k) + p - mulmod_u64(u, at(j + 1, k), p)) % p;
      for (size_t k = 0; k < n; ++k)
        at(k, j + 1) = (at(k, j + 1) + mulmod_u64(u, at(k, i), p)) % p;
    }
  }
  // recurrence on leading principal minors of the Hessenberg form
  std::vector<std::vector<uint64_t>> ps(n + 1);
  ps[0] = {1};
  for (size_t m = 1; m <= n; ++m) {
    // ps[m] = (x - a[m-1][m-1]) * ps[m-1] - sum over i of
    //   a[m-1-i][m-1] * (prod of subdiagonal) * ps[m-1-i]
    std::vector<uint64_t> cur(m + 1, 0);
    const std::vector<uint64_t>& prev = ps[m - 1];
    for (size_t k = 0; k < prev.size(); ++k) {
      cur[k + 1] = (cur[k + 1] + prev[k]) % p;
      cur[k] = (cur[k] + p - mulmod_u64(at(m - 1, m - 1), prev[k], p)) % p;
    }
    uint64_t prod = 1;
    for (size_t i = 1; i < m; ++i) {
      prod = mulmod_u64(prod, at(m - i, m - i - 1), p);
      if (prod == 0) break;
      uint64_t coef = mulmod_u64(at(m - 1 - i, m - 1), prod, p);
      if (coef == 0) continue;
      const std::vector<uint64_t>& q = ps[m - 1 - i];
      for (size_t k = 0; k < q.size(); ++k)
        cur[k] = (cur[k] + p - mulmod_u64(coef, q[k], p)) % p;
    }
    ps[m] = std::move(cur);
  }
  return ps[n];
}

}  // namespace detail

// Exact characteristic polynomial (monic, ascending coefficients) of a
// square rational matrix. Denominators are cleared, the integer problem is
// solved modulo enough word primes to cover a Hadamard-style bound, and
// the result is CRT-reconstructed.
inline Poly charpoly(const RatMatrix& m) {
  if (m.rows != m.cols) fail_data("shape-mismatch", "charpoly needs square");
  size_t n = m.rows;
  if (n == 0) return {Rat(1)};

  Int den(1);
  for (const Rat& e : m.entries) {
    Int d(e.get_den());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
  }
  std::vector<Int> a(n * n);
  for (size_t i = 0; i < n * n; ++i) {
    Rat scaled = m.entries[i] * Rat(den);
    a[i] = Int(scaled.get_num());
  }

  // |coeff_i| <= binom(n, i) * H^i with H bounding every row 2-norm
  Int h2(1);
  for (size_t i = 0; i < n; ++i) {
    Int s(0);
    for (size_t j = 0; j < n; ++j) s += a[i * n + j] * a[i * n + j];
    if (s > h2) h2 = s;
  }
  Int hbound;
  mpz_sqrt(hbound.get_mpz_t(), h2.get_mpz_t());
  hbound += 1;
  Int coeff_bound;
  mpz_pow_ui(coeff_bound.get_mpz_t(), hbound.get_mpz_t(),
             static_cast<unsigned long>(n));
  Int two_n;
  mpz_ui_pow_ui(two_n.get_mpz_t(), 2, static_cast<unsigned long>(n));
  coeff_bound *= two_n;

  std::vector<Int> crt(n + 1, Int(0));
  Int modulus(1);
  uint64_t p = (1ULL << 30);
  while (modulus <= 2 * coeff_bound) {
    p = next_prime_u64(p);
    std::vector<uint64_t> ap(n * n);
    for (size_t i = 0; i < n * n; ++i)
      ap[i] = mpz_fdiv_ui(a[i].get_mpz_t(), p);
    std::vector<uint64_t> cp = detail::charpoly_mod_p(std::move(ap), n, p);
    // combine: crt' = crt + modulus * ((cp - crt) * modulus^{-1} mod p)
    uint64_t minv =
        powmod_u64(mpz_fdiv_ui(modulus.get_mpz_t(), p), p - 2, p);
    for (size_t k = 0; k <= n; ++k) {
      uint64_t cur = mpz_fdiv_ui(crt[k].get_mpz_t(), p);
      uint64_t delta = mulmod_u64((cp[k] + p - cur) % p, minv, p);
      crt[k] += modulus * Int(static_cast<unsigned long>(delta));
    }
    modulus *= Int(static_cast<unsigned long>(p));
  }
  Int half = modulus / 2;
  Poly out(n + 1);
  // charpoly(m)(x) = den^-n * charpoly(den*m)(den*x)
  Int dpow(1);
  for (size_t k = n + 1; k-- > 0;) {
    Int c = crt[k];
    if (c > half) c -= modulus;
    out[k] = make_rat(c, dpow);
    dpow *= den;
  }
  return out;
}

}  // namespace modforms
