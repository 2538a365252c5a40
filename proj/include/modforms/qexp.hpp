#pragma once

#include <vector>

#include "modforms/errors.hpp"
#include "modforms/rat.hpp"

namespace modforms {

// Truncated q-expansion with exact rational coefficients c_0..c_prec,
// tagged with weight and level.
struct QExpansion {
  int weight = 0;
  long level = 1;
  long prec = 1;
  std::vector<Rat> coeffs;  // prec + 1 entries

  QExpansion() : coeffs(2) {}

  QExpansion(int k, long n, long b) : weight(k), level(n), prec(b) {
    if (k <= 0 || k % 2 != 0)
      fail_data("invalid-weight", "q-expansion weight must be even positive");
    if (n < 1) fail_data("invalid-level", "q-expansion level must be >= 1");
    if (b < 1) fail_data("invalid-precision", "q-expansion prec must be >= 1");
    coeffs.assign(b + 1, Rat(0));
  }

  const Rat& c(long m) const {
    if (m < 0 || m > prec)
      fail_data("insufficient-precision", "coefficient index out of window");
    return coeffs[m];
  }

  Rat& c(long m) {
    if (m < 0 || m > prec)
      fail_data("insufficient-precision", "coefficient index out of window");
    return coeffs[m];
  }

  bool operator==(const QExpansion& o) const = default;
};

inline QExpansion add(const QExpansion& f, const QExpansion& g) {
  if (f.weight != g.weight || f.level != g.level)
    fail_data("tag-mismatch", "add needs equal weight and level tags");
  QExpansion r(f.weight, f.level, std::min(f.prec, g.prec));
  for (long m = 0; m <= r.prec; ++m) r.coeffs[m] = f.coeffs[m] + g.coeffs[m];
  return r;
}

inline QExpansion scale(const QExpansion& f, const Rat& c) {
  QExpansion r = f;
  for (Rat& e : r.coeffs) e *= c;
  return r;
}

namespace detail {

// Clears denominators: x = nums / den with den the lcm.
inline Int to_common_denominator(const std::vector<Rat>& x, long count,
                                 std::vector<Int>* nums) {
  Int den(1);
  for (long i = 0; i < count; ++i) {
    Int d(x[i].get_den());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
  }
  nums->assign(count, Int(0));
  for (long i = 0; i < count; ++i) {
    Int scale = den / Int(x[i].get_den());
    (*nums)[i] = Int(x[i].get_num()) * scale;
  }
  return den;
}

}  // namespace detail

// Cauchy product truncated at the smaller precision; weights add. Runs
// over the integers after clearing denominators.
inline QExpansion mul(const QExpansion& f, const QExpansion& g) {
  if (f.level != g.level) fail_data("tag-mismatch", "mul needs equal level tags");
  QExpansion r(f.weight + g.weight, f.level, std::min(f.prec, g.prec));
  std::vector<Int> fa, gb;
  Int df = detail::to_common_denominator(f.coeffs, r.prec + 1, &fa);
  Int dg = detail::to_common_denominator(g.coeffs, r.prec + 1, &gb);
  std::vector<Int> acc(r.prec + 1, Int(0));
  for (long i = 0; i <= r.prec; ++i) {
    if (sgn(fa[i]) == 0) continue;
    for (long j = 0; i + j <= r.prec; ++j) {
      if (sgn(gb[j]) == 0) continue;
      mpz_addmul(acc[i + j].get_mpz_t(), fa[i].get_mpz_t(), gb[j].get_mpz_t());
    }
  }
  Int den = df * dg;
  for (long m = 0; m <= r.prec; ++m) r.coeffs[m] = make_rat(acc[m], den);
  return r;
}

// Reindexes q -> q^d; level tag multiplies by d. The default target
// precision d*prec(f) is everything the source window determines.
inline QExpansion v_operator(const QExpansion& f, long d, long target_prec = -1) {
  if (d < 1) fail_data("invalid-divisor", "v_operator needs d >= 1");
  if (target_prec < 0) target_prec = f.prec * d;
  if (f.prec < target_prec / d)
    fail_data("insufficient-precision", "v_operator source window too short");
  QExpansion r(f.weight, f.level * d, target_prec);
  for (long m = 0; m <= target_prec; ++m)
    if (m % d == 0) r.coeffs[m] = f.coeffs[m / d];
  return r;
}

// Inclusion M_k(Gamma0(N)) into M_k(Gamma0(M)) for N | M: coefficients
// unchanged, level tag replaced.
inline QExpansion with_level(const QExpansion& f, long m) {
  if (m % f.level != 0)
    fail_data("invalid-level", "with_level needs the old level to divide");
  QExpansion r = f;
  r.level = m;
  return r;
}

inline QExpansion truncate(const QExpansion& f, long prec) {
  if (prec > f.prec)
    fail_data("insufficient-precision", "cannot extend a window by truncation");
  QExpansion r(f.weight, f.level, prec);
  for (long m = 0; m <= prec; ++m) r.coeffs[m] = f.coeffs[m];
  return r;
}

inline bool is_zero(const QExpansion& f) {
  for (const Rat& e : f.coeffs)
    if (sgn(e) != 0) return false;
  return true;
}

}  // namespace modforms
