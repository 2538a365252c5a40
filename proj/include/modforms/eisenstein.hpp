#pragma once

#include <vector>

#include "modforms/qexp.hpp"
#include "modforms/rat.hpp"

namespace modforms {

// Exact Bernoulli numbers via the defining recurrence; B_1 = -1/2.
inline Rat bernoulli(int n) {
  static std::vector<Rat> cache;  // guarded by callers being sequential at
                                  // first touch; values are append-only
  if (n < 0) fail_data("invalid-weight", "bernoulli needs n >= 0");
  while (static_cast<int>(cache.size()) <= n) {
    int m = static_cast<int>(cache.size());
    if (m == 0) {
      cache.emplace_back(1);
      continue;
    }
    // sum_{j=0}^{m} binom(m+1, j) B_j = 0
    Rat s(0);
    Int binom;
    for (int j = 0; j < m; ++j) {
      mpz_bin_uiui(binom.get_mpz_t(), m + 1, j);
      s += Rat(binom) * cache[j];
    }
    cache.push_back(-s / Rat(m + 1));
  }
  return cache[n];
}

namespace detail {

// sigma_{k-1}(n) for n = 1..prec by divisor sieve.
inline std::vector<Int> sigma_table(int k_minus_1, long prec) {
  std::vector<Int> sig(prec + 1, Int(0));
  Int dp;
  for (long d = 1; d <= prec; ++d) {
    mpz_ui_pow_ui(dp.get_mpz_t(), static_cast<unsigned long>(d),
                  static_cast<unsigned long>(k_minus_1));
    for (long m = d; m <= prec; m += d) sig[m] += dp;
  }
  return sig;
}

}  // namespace detail

// E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n, weight k level 1.
inline QExpansion eisenstein(int k, long prec) {
  if (k < 4 || k % 2 != 0)
    fail_data("invalid-weight", "eisenstein needs even weight >= 4");
  QExpansion e(k, 1, prec);
  Rat factor = Rat(-2 * k) / bernoulli(k);
  auto sig = detail::sigma_table(k - 1, prec);
  e.coeffs[0] = 1;
  for (long m = 1; m <= prec; ++m) e.coeffs[m] = factor * Rat(sig[m]);
  return e;
}

// E_2(q) - d*E_2(q^d): a genuine weight-2 form of level d, d >= 2.
inline QExpansion phi2(long d, long prec) {
  if (d < 2) fail_data("invalid-divisor", "phi2 needs d >= 2");
  QExpansion f(2, d, prec);
  auto sig = detail::sigma_table(1, prec);
  f.coeffs[0] = Rat(1 - d);
  for (long m = 1; m <= prec; ++m) {
    f.coeffs[m] = Rat(-24) * Rat(sig[m]);
    if (m % d == 0) f.coeffs[m] += Rat(24 * d) * Rat(sig[m / d]);
  }
  return f;
}

}  // namespace modforms
