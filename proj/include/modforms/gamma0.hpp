#pragma once

#include <numeric>
#include <vector>

#include "modforms/errors.hpp"
#include "modforms/rat.hpp"

namespace modforms {

inline std::vector<std::pair<long, int>> factorize(long n) {
  if (n < 1) fail_data("invalid-level", "factorize needs n >= 1");
  std::vector<std::pair<long, int>> out;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::vector<long> prime_divisors(long n) {
  std::vector<long> out;
  for (const auto& [p, e] : factorize(n)) out.push_back(p);
  return out;
}

inline std::vector<long> divisors(long n) {
  std::vector<long> out = {1};
  for (const auto& [p, e] : factorize(n)) {
    size_t sz = out.size();
    long pk = 1;
    for (int i = 1; i <= e; ++i) {
      pk *= p;
      for (size_t j = 0; j < sz; ++j) out.push_back(out[j] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline long euler_phi(long n) {
  long r = n;
  for (const auto& [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

inline long sigma0(long n) { return static_cast<long>(divisors(n).size()); }

struct Gamma0Invariants {
  long level;
  long index_mu;
  long nu2;
  long nu3;
  long nu_inf;
  long genus;
};

// Index, elliptic point counts, cusp count and genus of X_0(N).
inline Gamma0Invariants gamma0_invariants(long n) {
  if (n < 1) fail_data("invalid-level", "level must be >= 1");
  auto fac = factorize(n);

  long mu = n;
  for (const auto& [p, e] : fac) mu = mu / p * (p + 1);

  long nu2 = 1;
  if (n % 4 == 0) {
    nu2 = 0;
  } else {
    for (const auto& [p, e] : fac) {
      if (p == 2) continue;  // 2||N contributes a factor 1
      nu2 *= (p % 4 == 1) ? 2 : 0;
    }
  }

  long nu3 = 1;
  if (n % 9 == 0) {
    nu3 = 0;
  } else {
    for (const auto& [p, e] : fac) {
      if (p == 3) continue;  // 3||N contributes a factor 1
      if (p == 2) {
        nu3 = 0;
        break;
      }
      nu3 *= (p % 3 == 1) ? 2 : 0;
    }
  }

  long nu_inf = 0;
  for (long d : divisors(n)) nu_inf += euler_phi(std::gcd(d, n / d));

  long twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * nu_inf;
  if (twelve_g % 12 != 0)
    fail_data("invariants-internal", "genus formula not integral");
  Gamma0Invariants inv{n, mu, nu2, nu3, nu_inf, twelve_g / 12};
  if (inv.genus < 0 || inv.nu_inf < 1)
    fail_data("invariants-internal", "invariants out of range");
  return inv;
}

struct SpaceDims {
  long dim_m;
  long dim_s;
  long dim_eis;
};

inline SpaceDims dim_spaces(int k, long n) {
  if (k < 2 || k % 2 != 0) fail_data("invalid-weight", "weight must be even >= 2");
  Gamma0Invariants inv = gamma0_invariants(n);
  long dim_s;
  if (k == 2) {
    dim_s = inv.genus;
  } else {
    dim_s = (k - 1) * (inv.genus - 1) + (k / 2 - 1) * inv.nu_inf +
            (k / 4) * inv.nu2 + (k / 3) * inv.nu3;
  }
  long dim_m = dim_s + inv.nu_inf - (k == 2 ? 1 : 0);
  if (dim_m < 0) dim_m = 0;  // k = 2, N = 1
  if (dim_s < 0) dim_s = 0;
  return {dim_m, dim_s, dim_m - dim_s};
}

// Sturm bound: forms in M_k(Gamma0(N)) agreeing on c_0..bound coincide.
inline long sturm_bound(int k, long n) {
  if (k < 2 || k % 2 != 0) fail_data("invalid-weight", "weight must be even >= 2");
  long mu = gamma0_invariants(n).index_mu;
  return (static_cast<long>(k) * mu) / 12 + 1;
}

// Working precision for a space on which Hecke operators up to the given
// prime bound will act: T_p at row index m reads coefficient p*m.
struct PrecisionPolicy {
  long sturm;
  long hecke_margin;  // largest prime whose Hecke operator is applied
  long working;

  PrecisionPolicy(int k, long n, long margin = 1)
      : sturm(sturm_bound(k, n)),
        hecke_margin(margin < 1 ? 1 : margin),
        working(std::max(sturm, hecke_margin * sturm)) {}
};

struct Cusp {
  long num;    // representative a/c in lowest terms
  long den;    // c, a divisor of N
  long width;  // ramification width over the j-line cusp
};

// One representative per cusp class: a/c with c | N and a running over
// residues mod gcd(c, N/c) coprime to c.
inline std::vector<Cusp> enumerate_cusps(long n) {
  std::vector<Cusp> out;
  for (long c : divisors(n)) {
    long g = std::gcd(c, n / c);
    long width = n / std::gcd(c * c, n);
    std::vector<long> seen;
    for (long a = 0; static_cast<long>(seen.size()) < euler_phi(g); ++a) {
      if (std::gcd(a, c) != 1) continue;
      long res = a % g;
      bool dup = false;
      for (long s : seen)
        if (s == res) dup = true;
      if (dup) continue;
      seen.push_back(res);
      out.push_back({a, c, width});
    }
  }
  return out;
}

}  // namespace modforms
