#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "modforms/poly.hpp"
#include "modforms/primes64.hpp"
#include "modforms/rat.hpp"
#include "modforms/rng.hpp"

namespace modforms {

// Factorization of monic rational polynomials: squarefree decomposition,
// then the squarefree parts are factored over Z by reduction mod p,
// Hensel lifting, and subset recombination.

using ZPoly = std::vector<Int>;  // ascending coefficients

namespace detail {

inline void ztrim(ZPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

inline long zdeg(const ZPoly& p) { return static_cast<long>(p.size()) - 1; }

// Division by a monic divisor stays in Z[x].
inline std::pair<ZPoly, ZPoly> z_divrem_monic(const ZPoly& a, const ZPoly& b) {
  ZPoly rem = a, quot;
  long db = zdeg(b);
  if (zdeg(a) >= db) quot.assign(a.size() - b.size() + 1, Int(0));
  Int t;
  while (zdeg(rem) >= db) {
    long k = zdeg(rem) - db;
    Int c = rem.back();
    quot[k] = c;
    for (long i = 0; i <= db; ++i) {
      t = c * b[i];
      rem[k + i] -= t;
    }
    ztrim(rem);
  }
  ztrim(quot);
  return {std::move(quot), std::move(rem)};
}

// ---- polynomials over F_p, word-sized p ----

using FpPoly = std::vector<uint64_t>;

inline void fp_trim(FpPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline long fp_deg(const FpPoly& p) { return static_cast<long>(p.size()) - 1; }

inline FpPoly fp_from_z(const ZPoly& f, uint64_t p) {
  FpPoly r(f.size());
  for (size_t i = 0; i < f.size(); ++i)
    r[i] = mpz_fdiv_ui(f[i].get_mpz_t(), p);
  fp_trim(r);
  return r;
}

inline FpPoly fp_mul(const FpPoly& a, const FpPoly& b, uint64_t p) {
  if (a.empty() || b.empty()) return {};
  FpPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + static_cast<__uint128_t>(a[i]) * b[j]) % p;
  }
  fp_trim(r);
  return r;
}

inline FpPoly fp_sub(const FpPoly& a, const FpPoly& b, uint64_t p) {
  FpPoly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + p - b[i]) % p;
  fp_trim(r);
  return r;
}

inline uint64_t fp_inv(uint64_t a, uint64_t p) { return powmod_u64(a, p - 2, p); }

inline FpPoly fp_scale(const FpPoly& a, uint64_t c, uint64_t p) {
  FpPoly r = a;
  for (uint64_t& e : r) e = mulmod_u64(e, c, p);
  fp_trim(r);
  return r;
}

inline FpPoly fp_monic(const FpPoly& a, uint64_t p) {
  if (a.empty()) return a;
  return fp_scale(a, fp_inv(a.back(), p), p);
}

inline std::pair<FpPoly, FpPoly> fp_divrem(const FpPoly& a, const FpPoly& b,
                                           uint64_t p) {
  FpPoly rem = a, quot;
  long db = fp_deg(b);
  if (fp_deg(a) >= db) quot.assign(a.size() - b.size() + 1, 0);
  uint64_t lead_inv = fp_inv(b.back(), p);
  while (fp_deg(rem) >= db) {
    long k = fp_deg(rem) - db;
    uint64_t c = mulmod_u64(rem.back(), lead_inv, p);
    quot[k] = c;
    for (long i = 0; i <= db; ++i)
      rem[k + i] = (rem[k + i] + p - mulmod_u64(c, b[i], p)) % p;
    fp_trim(rem);
  }
  fp_trim(quot);
  return {std::move(quot), std::move(rem)};
}

inline FpPoly fp_mod(const FpPoly& a, const FpPoly& b, uint64_t p) {
  return fp_divrem(a, b, p).second;
}

inline FpPoly fp_gcd(FpPoly a, FpPoly b, uint64_t p) {
  while (!b.empty()) {
    FpPoly r = fp_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return fp_monic(a, p);
}

// (g, u, v) with u*a + v*b = g, g monic.
inline void fp_extgcd(FpPoly a, FpPoly b, uint64_t p, FpPoly* g, FpPoly* u,
                      FpPoly* v) {
  FpPoly u0 = {1}, v0 = {}, u1 = {}, v1 = {1};
  while (!b.empty()) {
    auto [q, r] = fp_divrem(a, b, p);
    a = std::move(b);
    b = std::move(r);
    FpPoly u2 = fp_sub(u0, fp_mul(q, u1, p), p);
    FpPoly v2 = fp_sub(v0, fp_mul(q, v1, p), p);
    u0 = std::move(u1);
    v0 = std::move(v1);
    u1 = std::move(u2);
    v1 = std::move(v2);
  }
  uint64_t inv = fp_inv(a.back(), p);
  *g = fp_scale(a, inv, p);
  *u = fp_scale(u0, inv, p);
  *v = fp_scale(v0, inv, p);
}

inline FpPoly fp_powmod(const FpPoly& base, const Int& e, const FpPoly& mod,
                        uint64_t p) {
  FpPoly r = {1};
  FpPoly b = fp_mod(base, mod, p);
  size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  if (sgn(e) == 0) return r;
  for (size_t i = bits; i-- > 0;) {
    r = fp_mod(fp_mul(r, r, p), mod, p);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = fp_mod(fp_mul(r, b, p), mod, p);
  }
  return r;
}

// Cantor-Zassenhaus equal-degree splitting: f monic squarefree with all
// irreducible factors of degree d; p odd.
inline void fp_equal_degree(const FpPoly& f, long d, uint64_t p, Rng& rng,
                            std::vector<FpPoly>* out) {
  if (fp_deg(f) == d) {
    out->push_back(f);
    return;
  }
  Int exponent;
  mpz_ui_pow_ui(exponent.get_mpz_t(), p, static_cast<unsigned long>(d));
  exponent = (exponent - 1) / 2;
  for (;;) {
    FpPoly a(static_cast<size_t>(fp_deg(f)), 0);
    for (uint64_t& c : a) c = rng.next() % p;
    fp_trim(a);
    if (fp_deg(a) < 1) continue;
    FpPoly b = fp_powmod(a, exponent, f, p);
    b = fp_sub(b, FpPoly{1}, p);
    FpPoly g = fp_gcd(b, f, p);
    if (fp_deg(g) > 0 && fp_deg(g) < fp_deg(f)) {
      fp_equal_degree(g, d, p, rng, out);
      fp_equal_degree(fp_divrem(f, g, p).first, d, p, rng, out);
      return;
    }
  }
}

// Full factorization of a monic squarefree f over F_p (distinct-degree
// then equal-degree stages).
inline std::vector<FpPoly> fp_factor_squarefree(FpPoly f, uint64_t p,
                                                Rng& rng) {
  std::vector<FpPoly> out;
  FpPoly h = {0, 1};  // x
  long d = 0;
  while (fp_deg(f) >= 2 * (d + 1)) {
    ++d;
    h = fp_powmod(h, Int(static_cast<unsigned long>(p)), f, p);
    FpPoly g = fp_gcd(fp_sub(h, FpPoly{0, 1}, p), f, p);
    if (fp_deg(g) > 0) {
      fp_equal_degree(g, d, p, rng, &out);
      f = fp_divrem(f, g, p).first;
      h = fp_mod(h, f, p);
    }
  }
  if (fp_deg(f) > 0) out.push_back(f);
  return out;
}

// ---- polynomials over Z/m, big modulus m (Hensel stage) ----

inline ZPoly zm_reduce(ZPoly a, const Int& m) {
  for (Int& c : a) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
  ztrim(a);
  return a;
}

inline ZPoly zm_from_fp(const FpPoly& a) {
  ZPoly r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = Int(static_cast<unsigned long>(a[i]));
  return r;
}

inline ZPoly zm_mul(const ZPoly& a, const ZPoly& b, const Int& m) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, Int(0));
  Int t;
  for (size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      t = a[i] * b[j];
      r[i + j] += t;
    }
  }
  return zm_reduce(std::move(r), m);
}

inline ZPoly zm_add(const ZPoly& a, const ZPoly& b, const Int& m) {
  ZPoly r(std::max(a.size(), b.size()), Int(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return zm_reduce(std::move(r), m);
}

inline ZPoly zm_sub(const ZPoly& a, const ZPoly& b, const Int& m) {
  ZPoly r(std::max(a.size(), b.size()), Int(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return zm_reduce(std::move(r), m);
}

// Divisor must be monic mod m.
inline std::pair<ZPoly, ZPoly> zm_divrem_monic(const ZPoly& a, const ZPoly& b,
                                               const Int& m) {
  ZPoly rem = a, quot;
  long db = zdeg(b);
  if (zdeg(a) >= db) quot.assign(a.size() - b.size() + 1, Int(0));
  Int t;
  while (zdeg(rem) >= db) {
    long k = zdeg(rem) - db;
    Int c = rem.back();
    quot[k] = c;
    for (long i = 0; i <= db; ++i) {
      t = c * b[i];
      rem[k + i] -= t;
    }
    rem = zm_reduce(std::move(rem), m);
  }
  ztrim(rem);
  quot = zm_reduce(std::move(quot), m);
  return {std::move(quot), std::move(rem)};
}

// Centered representative in (-m/2, m/2].
inline ZPoly zm_center(ZPoly a, const Int& m) {
  Int half = m / 2;
  for (Int& c : a) {
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    if (c > half) c -= m;
  }
  ztrim(a);
  return a;
}

// One quadratic Hensel step: from a factorization valid mod m to one valid
// mod m^2, keeping the Bezout pair in sync. All of f, g, h are monic.
struct HenselPair {
  ZPoly g, h, s, t;
};

inline HenselPair hensel_step(const ZPoly& f, const HenselPair& in,
                              const Int& m) {
  Int m2 = m * m;
  ZPoly fred = zm_reduce(f, m2);
  ZPoly e = zm_sub(fred, zm_mul(in.g, in.h, m2), m2);
  auto [q, r] = zm_divrem_monic(zm_mul(in.s, e, m2), in.h, m2);
  ZPoly g1 = zm_add(in.g, zm_add(zm_mul(in.t, e, m2), zm_mul(q, in.g, m2), m2), m2);
  ZPoly h1 = zm_add(in.h, r, m2);
  ZPoly b = zm_sub(zm_add(zm_mul(in.s, g1, m2), zm_mul(in.t, h1, m2), m2),
                   ZPoly{Int(1)}, m2);
  auto [c, d] = zm_divrem_monic(zm_mul(in.s, b, m2), h1, m2);
  ZPoly s1 = zm_sub(in.s, d, m2);
  ZPoly t1 = zm_sub(in.t, zm_add(zm_mul(in.t, b, m2), zm_mul(c, g1, m2), m2), m2);
  return {std::move(g1), std::move(h1), std::move(s1), std::move(t1)};
}

// Lifts the mod-p factorization f = prod(facs) (all monic, pairwise
// coprime mod p) to the modulus mfinal (a power of p); recursive splitting
// into two halves with quadratic lifting of each pair.
inline void hensel_lift_tree(const ZPoly& f, const std::vector<FpPoly>& facs,
                             size_t lo, size_t hi, uint64_t p,
                             const Int& mfinal, std::vector<ZPoly>* out) {
  if (hi - lo == 1) {
    out->push_back(zm_reduce(f, mfinal));
    return;
  }
  size_t mid = lo + (hi - lo) / 2;
  FpPoly g0 = {1}, h0 = {1};
  for (size_t i = lo; i < mid; ++i) g0 = fp_mul(g0, facs[i], p);
  for (size_t i = mid; i < hi; ++i) h0 = fp_mul(h0, facs[i], p);
  FpPoly gg, u, v;
  fp_extgcd(g0, h0, p, &gg, &u, &v);
  if (fp_deg(gg) != 0)
    fail_data("factor-internal", "modular factors not coprime");

  HenselPair cur{zm_from_fp(g0), zm_from_fp(h0), zm_from_fp(u), zm_from_fp(v)};
  Int m(static_cast<unsigned long>(p));
  while (m < mfinal) {
    cur = hensel_step(f, cur, m);
    m = m * m;
  }
  cur.g = zm_reduce(cur.g, mfinal);
  cur.h = zm_reduce(cur.h, mfinal);
  hensel_lift_tree(cur.g, facs, lo, mid, p, mfinal, out);
  hensel_lift_tree(cur.h, facs, mid, hi, p, mfinal, out);
}

inline Int zpoly_norm2_bound(const ZPoly& f) {
  Int s = 0;
  for (const Int& c : f) s += c * c;
  Int r;
  mpz_sqrt(r.get_mpz_t(), s.get_mpz_t());
  return r + 1;
}

inline Int binomial_int(unsigned long n, unsigned long k) {
  Int r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// Zassenhaus factorization of a monic squarefree integer polynomial.
inline std::vector<ZPoly> factor_squarefree_monic_z(const ZPoly& f) {
  std::vector<ZPoly> out;
  long n = zdeg(f);
  if (n <= 0) return out;
  if (n == 1) {
    out.push_back(f);
    return out;
  }

  // Pick the prime (f squarefree mod p) giving the fewest modular factors.
  Rng rng(0x5eedULL ^ static_cast<uint64_t>(n));
  uint64_t p_best = 0;
  std::vector<FpPoly> facs_best;
  uint64_t p = 1000003 - 2;
  int usable = 0;
  while (usable < 3) {
    p = next_prime_u64(p);
    FpPoly fp = fp_from_z(f, p);
    if (fp_deg(fp) != n) continue;  // lc divisible by p (impossible: monic)
    FpPoly der(fp.size() - 1);
    for (size_t i = 1; i < fp.size(); ++i)
      der[i - 1] = mulmod_u64(fp[i], i % p, p);
    fp_trim(der);
    if (fp_deg(fp_gcd(fp, der, p)) != 0) continue;  // not squarefree mod p
    ++usable;
    std::vector<FpPoly> facs = fp_factor_squarefree(fp_monic(fp, p), p, rng);
    if (p_best == 0 || facs.size() < facs_best.size()) {
      p_best = p;
      facs_best = std::move(facs);
    }
    if (facs_best.size() == 1) break;
  }
  if (facs_best.size() == 1) {
    out.push_back(f);
    return out;
  }

  // Landau-Mignotte bound for coefficients of monic factors.
  Int bound = binomial_int(static_cast<unsigned long>(n),
                           static_cast<unsigned long>(n / 2)) *
              zpoly_norm2_bound(f);
  Int mfinal(static_cast<unsigned long>(p_best));
  while (mfinal < 2 * bound + 1) mfinal = mfinal * mfinal;

  std::vector<ZPoly> lifted;
  hensel_lift_tree(f, facs_best, 0, facs_best.size(), p_best, mfinal, &lifted);

  // Subset recombination.
  ZPoly rem_f = f;
  std::vector<size_t> alive(lifted.size());
  for (size_t i = 0; i < alive.size(); ++i) alive[i] = i;

  size_t s = 1;
  while (2 * s <= alive.size()) {
    // iterate over size-s subsets of alive, lexicographically
    std::vector<size_t> idx(s);
    for (size_t i = 0; i < s; ++i) idx[i] = i;
    bool found = false;
    for (;;) {
      ZPoly cand = {Int(1)};
      for (size_t i : idx) cand = zm_mul(cand, lifted[alive[i]], mfinal);
      cand = zm_center(cand, mfinal);
      auto [q, r] = z_divrem_monic(rem_f, cand);
      if (r.empty()) {
        out.push_back(cand);
        rem_f = q;
        std::vector<size_t> keep;
        for (size_t i = 0, k = 0; i < alive.size(); ++i) {
          if (k < idx.size() && idx[k] == i) {
            ++k;
            continue;
          }
          keep.push_back(alive[i]);
        }
        alive = std::move(keep);
        found = true;
        break;
      }
      // next subset
      long i = static_cast<long>(s) - 1;
      while (i >= 0 && idx[i] == alive.size() - s + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (size_t j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!found) ++s;
  }
  if (zdeg(rem_f) > 0) out.push_back(rem_f);
  return out;
}

}  // namespace detail

// Monic irreducible factors with multiplicities; input must be monic.
inline std::vector<std::pair<Poly, int>> factor_monic_rational(const Poly& f) {
  if (f.empty() || cmp(f.back(), Rat(1)) != 0)
    fail_data("factor-nonmonic", "factorization requires a monic polynomial");
  std::vector<std::pair<Poly, int>> out;
  for (const auto& [part, mult] : squarefree_decomposition(f)) {
    long n = poly_deg(part);
    if (n < 1) continue;
    // substitute x = y/e, e = lcm of denominators: monic integer poly in y
    Int e(1);
    for (const Rat& c : part) {
      Int den(c.get_den());
      mpz_lcm(e.get_mpz_t(), e.get_mpz_t(), den.get_mpz_t());
    }
    ZPoly zp(part.size());
    Int epow(1);
    for (long i = n; i >= 0; --i) {
      Rat scaled = part[i] * Rat(epow);
      if (cmp(Int(scaled.get_den()), Int(1)) != 0)
        fail_data("factor-internal", "denominator survived substitution");
      zp[i] = Int(scaled.get_num());
      epow *= e;
    }
    for (const ZPoly& zfac : detail::factor_squarefree_monic_z(zp)) {
      // back-substitute x = y/e: coefficient of x^i is z_i / e^(d-i),
      // monic because zfac is monic
      long d = detail::zdeg(zfac);
      Poly g(d + 1);
      Int ep(1);
      for (long i = d; i >= 0; --i) {
        g[i] = make_rat(zfac[i], ep);
        ep *= e;
      }
      out.emplace_back(std::move(g), mult);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    int c = poly_cmp(a.first, b.first);
    return c != 0 ? c < 0 : a.second < b.second;
  });
  return out;
}

inline bool poly_is_irreducible(const Poly& f) {
  if (poly_deg(f) < 1) return false;
  auto facs = factor_monic_rational(poly_monic(f));
  return facs.size() == 1 && facs[0].second == 1 &&
         poly_deg(facs[0].first) == poly_deg(f);
}

}  // namespace modforms
