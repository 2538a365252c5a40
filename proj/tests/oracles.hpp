#pragma once

// Independent brute-force oracles used by the tests. Everything here is
// computed by first principles (product expansions, direct enumeration)
// and never calls into the construction paths it checks.

#include <numeric>
#include <set>
#include <vector>

#include "modforms/qexp.hpp"
#include "modforms/rat.hpp"

namespace oracles {

using modforms::Int;
using modforms::QExpansion;
using modforms::Rat;

// sigma_e(n) by direct divisor enumeration.
inline Int sigma_brute(long n, int e) {
  Int s(0), dp;
  for (long d = 1; d <= n; ++d) {
    if (n % d) continue;
    mpz_ui_pow_ui(dp.get_mpz_t(), static_cast<unsigned long>(d),
                  static_cast<unsigned long>(e));
    s += dp;
  }
  return s;
}

// Coefficients of prod_{n>=1} (1 - q^n)^e up to prec, by repeated
// polynomial multiplication.
inline std::vector<Rat> eta_product(long prec, int e) {
  std::vector<Rat> acc(prec + 1, Rat(0));
  acc[0] = 1;
  for (long n = 1; n <= prec; ++n) {
    for (int rep = 0; rep < e; ++rep) {
      // multiply by (1 - q^n)
      for (long m = prec; m >= n; --m) acc[m] -= acc[m - n];
    }
  }
  return acc;
}

// Delta = q * prod (1-q^n)^24, weight 12 level 1.
inline QExpansion delta_oracle(long prec) {
  QExpansion d(12, 1, prec);
  auto p = eta_product(prec, 24);
  for (long m = 1; m <= prec; ++m) d.coeffs[m] = p[m - 1];
  return d;
}

// eta(z)^2 eta(11z)^2 = q * prod (1-q^n)^2 (1-q^{11n})^2: the weight 2
// level 11 cusp form.
inline QExpansion eta11_oracle(long prec) {
  QExpansion f(2, 11, prec);
  auto a = eta_product(prec, 2);
  std::vector<Rat> acc(prec + 1, Rat(0));
  acc[0] = 1;
  for (long n = 1; 11 * n <= prec; ++n)
    for (int rep = 0; rep < 2; ++rep)
      for (long m = prec; m >= 11 * n; --m) acc[m] -= acc[m - 11 * n];
  // multiply a * acc, shift by q
  std::vector<Rat> prod(prec + 1, Rat(0));
  for (long i = 0; i <= prec; ++i) {
    if (sgn(a[i]) == 0) continue;
    for (long j = 0; i + j <= prec; ++j) prod[i + j] += a[i] * acc[j];
  }
  for (long m = 1; m <= prec; ++m) f.coeffs[m] = prod[m - 1];
  return f;
}

// |P^1(Z/N)| by canonicalizing every pair (a:c) under the unit action.
inline long p1_size_brute(long n) {
  if (n == 1) return 1;
  std::vector<long> units;
  for (long u = 1; u < n; ++u)
    if (std::gcd(u, n) == 1) units.push_back(u);
  std::set<std::pair<long, long>> reps;
  for (long a = 0; a < n; ++a)
    for (long c = 0; c < n; ++c) {
      if (std::gcd(std::gcd(a, c), n) != 1) continue;
      std::pair<long, long> best{n, n};
      for (long u : units) {
        std::pair<long, long> cand{(u * a) % n, (u * c) % n};
        if (cand < best) best = cand;
      }
      reps.insert(best);
    }
  return static_cast<long>(reps.size());
}

}  // namespace oracles
