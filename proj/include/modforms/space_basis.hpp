#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "modforms/eisenstein.hpp"
#include "modforms/gamma0.hpp"
#include "modforms/qexp.hpp"
#include "modforms/subspace.hpp"

namespace modforms {

// One factor of a tracked generator product: either a level-1 Eisenstein
// series lifted by v_d, or the weight-2 generator phi2(d).
struct GenFactor {
  enum Kind { eis_lift, phi2_gen };
  Kind kind;
  int weight;  // k' for eis_lift, always 2 for phi2_gen
  long d;

  auto key() const { return std::tuple(static_cast<int>(kind), weight, d); }
  bool operator<(const GenFactor& o) const { return key() < o.key(); }
};

struct Generator {
  std::vector<GenFactor> factors;  // sorted; product is the tracked series
  QExpansion series;               // tagged at the ambient level
};

// Value of the generator at the cusp a/c. Per factor:
//   v_d(E_k'): (gcd(c,d)/d)^k'        phi2(d): 1 - gcd(c,d)^2/d
// The value at the infinity class (c = N) equals the q^0 coefficient.
inline Rat generator_cusp_constant(const Generator& g, const Cusp& cusp) {
  Rat val(1);
  for (const GenFactor& f : g.factors) {
    long gc = std::gcd(cusp.den, f.d);
    if (f.kind == GenFactor::eis_lift) {
      Int num, den;
      mpz_ui_pow_ui(num.get_mpz_t(), static_cast<unsigned long>(gc),
                    static_cast<unsigned long>(f.weight));
      mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(f.d),
                    static_cast<unsigned long>(f.weight));
      val *= make_rat(num, den);
    } else {
      val *= Rat(1) - make_rat(Int(gc * gc), Int(f.d));
    }
  }
  return val;
}

struct SpaceBasis {
  int weight = 0;
  long level = 1;
  long prec = 0;
  bool cuspidal = false;
  RatMatrix basis;  // RREF, rows = dim, columns c_0..c_prec
  std::vector<size_t> pivots;
  std::string strategy;  // "products", "augmented", "ratio", "fixture"

  long dim() const { return static_cast<long>(basis.rows); }

  QExpansion row_expansion(size_t i) const {
    QExpansion f(weight, level, prec);
    for (long m = 0; m <= prec; ++m) f.coeffs[m] = basis.at(i, m);
    return f;
  }
};

// Maintains a reduced row echelon basis under row insertion.
class IncrementalRref {
 public:
  explicit IncrementalRref(size_t width) : width_(width) {}

  size_t rank() const { return rows_.size(); }

  // Returns true if the row increased the rank.
  bool add_row(std::vector<Rat> v) {
    if (v.size() != width_) fail_data("shape-mismatch", "row width mismatch");
    Rat t;
    for (size_t i = 0; i < rows_.size(); ++i) {
      const Rat& c = v[pivots_[i]];
      if (sgn(c) == 0) continue;
      Rat f = c;
      for (size_t j = 0; j < width_; ++j) {
        if (sgn(rows_[i][j]) == 0) continue;
        t = f * rows_[i][j];
        v[j] -= t;
      }
    }
    size_t p = 0;
    while (p < width_ && sgn(v[p]) == 0) ++p;
    if (p == width_) return false;
    Rat inv = 1 / v[p];
    for (size_t j = p; j < width_; ++j) v[j] *= inv;
    for (size_t i = 0; i < rows_.size(); ++i) {
      const Rat& c = rows_[i][p];
      if (sgn(c) == 0) continue;
      Rat f = c;
      for (size_t j = p; j < width_; ++j) {
        if (sgn(v[j]) == 0) continue;
        t = f * v[j];
        rows_[i][j] -= t;
      }
    }
    size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < p) ++pos;
    pivots_.insert(pivots_.begin() + pos, p);
    rows_.insert(rows_.begin() + pos, std::move(v));
    return true;
  }

  RatMatrix matrix() const {
    RatMatrix m(rows_.size(), width_);
    for (size_t i = 0; i < rows_.size(); ++i)
      for (size_t j = 0; j < width_; ++j) m.at(i, j) = rows_[i][j];
    return m;
  }

  const std::vector<size_t>& pivots() const { return pivots_; }

 private:
  size_t width_;
  std::vector<std::vector<Rat>> rows_;
  std::vector<size_t> pivots_;
};

namespace detail {

inline QExpansion factor_series(const GenFactor& f, long level, long prec) {
  QExpansion s = [&] {
    if (f.kind == GenFactor::eis_lift) {
      long src = prec / f.d + 1;
      return v_operator(eisenstein(f.weight, src), f.d, prec);
    }
    return truncate(phi2(f.d, prec), prec);
  }();
  return with_level(s, level);
}

inline Generator make_generator(std::vector<GenFactor> factors, long level,
                                long prec) {
  std::sort(factors.begin(), factors.end());
  QExpansion series = factor_series(factors[0], level, prec);
  for (size_t i = 1; i < factors.size(); ++i)
    series = mul(series, factor_series(factors[i], level, prec));
  return {std::move(factors), std::move(series)};
}

// Candidate generators of weight k at level N: single pool members of
// weight k plus all weight-compatible pairwise products.
inline std::vector<Generator> mk_candidates(int k, long n, long prec) {
  std::set<std::vector<GenFactor>> keys;
  auto consider = [&](std::vector<GenFactor> fs) {
    std::sort(fs.begin(), fs.end());
    keys.insert(std::move(fs));
  };
  std::vector<long> divs = divisors(n);
  if (k >= 4)
    for (long d : divs) consider({{GenFactor::eis_lift, k, d}});
  if (k == 2)
    for (long d : divs)
      if (d >= 2) consider({{GenFactor::phi2_gen, 2, d}});
  for (int k1 = 4; 2 * k1 <= k; k1 += 2) {
    int k2 = k - k1;
    for (long d1 : divs)
      for (long d2 : divs)
        consider({{GenFactor::eis_lift, k1, d1}, {GenFactor::eis_lift, k2, d2}});
  }
  if (k >= 6)
    for (long d1 : divs)
      for (long d2 : divs)
        if (d1 >= 2)
          consider({{GenFactor::phi2_gen, 2, d1}, {GenFactor::eis_lift, k - 2, d2}});
  if (k == 4)
    for (long d1 : divs)
      for (long d2 : divs)
        if (d1 >= 2 && d2 >= 2 && d1 <= d2)
          consider({{GenFactor::phi2_gen, 2, d1}, {GenFactor::phi2_gen, 2, d2}});

  std::vector<Generator> out;
  out.reserve(keys.size());
  for (const auto& fs : keys) out.push_back(make_generator(fs, n, prec));
  return out;
}

inline RatMatrix candidate_rows(const std::vector<Generator>& gens, long prec) {
  RatMatrix m(gens.size(), prec + 1);
  for (size_t i = 0; i < gens.size(); ++i)
    for (long j = 0; j <= prec; ++j) m.at(i, j) = gens[i].series.coeffs[j];
  return m;
}

}  // namespace detail

// Span of Eisenstein lifts, phi2 generators and their pairwise products,
// echelonized; the dimension formula is the arbiter of completeness.
inline SpaceBasis build_mk_basis(int k, long n, long prec) {
  SpaceDims dims = dim_spaces(k, n);
  if (prec < sturm_bound(k, n))
    fail_data("insufficient-precision", "basis precision below Sturm bound");
  auto gens = detail::mk_candidates(k, n, prec);
  auto [echelon, pivots] = rref(detail::candidate_rows(gens, prec));
  if (static_cast<long>(echelon.rows) != dims.dim_m)
    fail_data("basis-incomplete",
              "generator products span " + std::to_string(echelon.rows) +
                  " of " + std::to_string(dims.dim_m) + " dimensions at k=" +
                  std::to_string(k) + " N=" + std::to_string(n));
  return {k, n, prec, false, std::move(echelon), std::move(pivots), "products"};
}

// Constant terms of one tracked generator at every cusp of the level.
inline std::vector<Rat> cusp_constant_terms(const Generator& g, long n) {
  std::vector<Rat> out;
  for (const Cusp& c : enumerate_cusps(n))
    out.push_back(generator_cusp_constant(g, c));
  return out;
}

namespace detail {

// Cuspidal combinations of tracked generators: kernel of the constant-term
// matrix applied to the candidate rows. No dimension assertion here.
inline RatMatrix cuspidal_combo_rows(const std::vector<Generator>& gens,
                                     long n, long prec) {
  if (gens.empty()) return RatMatrix(0, prec + 1);
  std::vector<Cusp> cusps = enumerate_cusps(n);
  RatMatrix ct(gens.size(), cusps.size());
  for (size_t i = 0; i < gens.size(); ++i)
    for (size_t j = 0; j < cusps.size(); ++j)
      ct.at(i, j) = generator_cusp_constant(gens[i], cusps[j]);
  Subspace combos = kernel(transpose(ct));
  return matmul(combos.basis(), candidate_rows(gens, prec));
}

}  // namespace detail

// S_k as the kernel of the cusp constant-term map on the product span;
// the kernel dimension must equal dim_S exactly.
inline SpaceBasis build_sk_basis(int k, long n, long prec) {
  SpaceDims dims = dim_spaces(k, n);
  if (prec < sturm_bound(k, n))
    fail_data("insufficient-precision", "basis precision below Sturm bound");
  auto gens = detail::mk_candidates(k, n, prec);
  if (static_cast<long>(rank(detail::candidate_rows(gens, prec))) != dims.dim_m)
    fail_data("basis-incomplete", "generator products do not span M_k");
  auto [echelon, pivots] = rref(detail::cuspidal_combo_rows(gens, n, prec));
  if (static_cast<long>(echelon.rows) != dims.dim_s)
    fail_data("cusp-filter-inconsistent",
              "cusp filter kernel has dimension " +
                  std::to_string(echelon.rows) + ", expected " +
                  std::to_string(dims.dim_s));
  for (size_t i = 0; i < echelon.rows; ++i)
    if (sgn(echelon.at(i, 0)) != 0)
      fail_data("cusp-filter-inconsistent", "cusp form with nonzero c_0");
  return {k, n, prec, true, std::move(echelon), std::move(pivots), "products"};
}

// ---- eta quotients ----

// Holomorphic cuspidal eta quotients prod eta(d z)^{r_d} over divisors d
// of N with nonnegative exponents: weight w needs sum r_d = 2w, the two
// classical congruences mod 24 must hold, the exponent product must be a
// perfect square times a power of... (trivial character), and the order
// at every cusp must be strictly positive.
struct EtaQuotient {
  long level;
  std::vector<std::pair<long, int>> exponents;  // (divisor, r_d), r_d != 0
};

namespace detail {

inline bool eta_character_trivial(const EtaQuotient& e) {
  // nebentypus is the Kronecker symbol of (-1)^w * prod d^{r_d}; for even
  // weight it is trivial iff the product is a rational square
  Int s(1);
  for (auto [d, r] : e.exponents)
    for (int i = 0; i < r; ++i) s *= d;
  return mpz_perfect_square_p(s.get_mpz_t()) != 0;
}

// Sign of the vanishing order at the cusp with denominator c.
inline long eta_order_numerator(const EtaQuotient& e, long c, long n) {
  long acc = 0;
  for (auto [d, r] : e.exponents) {
    long g = std::gcd(c, d);
    acc += g * g * r * (n / d);
  }
  return acc;
}

inline bool eta_is_cuspidal_holomorphic(const EtaQuotient& e, long n) {
  for (long c : divisors(n))
    if (eta_order_numerator(e, c, n) <= 0) return false;
  return true;
}

// All cuspidal eta quotients of the given weight with nonnegative
// exponents supported on divisors of n.
inline std::vector<EtaQuotient> eta_quotients(long n, int weight) {
  std::vector<long> divs = divisors(n);
  std::vector<EtaQuotient> out;
  std::vector<int> r(divs.size(), 0);
  long target = 2L * weight;

  auto rec = [&](auto&& self, size_t idx, long remaining) -> void {
    if (idx == divs.size()) {
      if (remaining != 0) return;
      long s1 = 0, s2 = 0;
      for (size_t i = 0; i < divs.size(); ++i) {
        s1 += divs[i] * r[i];
        s2 += (n / divs[i]) * r[i];
      }
      if (s1 % 24 != 0 || s2 % 24 != 0) return;
      EtaQuotient e{n, {}};
      for (size_t i = 0; i < divs.size(); ++i)
        if (r[i] != 0) e.exponents.emplace_back(divs[i], r[i]);
      if (e.exponents.empty()) return;
      if (!eta_character_trivial(e)) return;
      if (!eta_is_cuspidal_holomorphic(e, n)) return;
      out.push_back(std::move(e));
      return;
    }
    for (long v = remaining; v >= 0; --v) {
      r[idx] = static_cast<int>(v);
      self(self, idx + 1, remaining - v);
    }
    r[idx] = 0;
  };
  rec(rec, 0, target);
  return out;
}

// Generalized pentagonal exponents with signs: prod (1-x^n) = sum of
// sign * x^g over these terms (Euler).
inline std::vector<std::pair<long, int>> pentagonal_terms(long bound) {
  std::vector<std::pair<long, int>> t;
  t.emplace_back(0, 1);
  for (long k = 1;; ++k) {
    long g1 = k * (3 * k - 1) / 2;
    long g2 = k * (3 * k + 1) / 2;
    int s = (k % 2 == 0) ? 1 : -1;
    bool any = false;
    if (g1 <= bound) {
      t.emplace_back(g1, s);
      any = true;
    }
    if (g2 <= bound) {
      t.emplace_back(g2, s);
      any = true;
    }
    if (!any) break;
  }
  return t;
}

// q-expansion of an eta quotient: leading power (sum d*r_d)/24 times
// prod_d P(q^d)^{r_d} with P the sparse pentagonal series. Negative
// exponents divide by P, solving forward from the constant term 1.
inline QExpansion eta_series(const EtaQuotient& e, long level, int weight,
                             long prec) {
  long lead = 0;
  for (auto [d, r] : e.exponents) lead += d * r;
  lead /= 24;
  std::vector<Int> acc(prec + 1, Int(0));
  acc[0] = 1;
  std::vector<Int> next(prec + 1);
  for (auto [d, r] : e.exponents) {
    auto terms = pentagonal_terms(prec / d);
    for (int rep = 0; rep < (r > 0 ? r : -r); ++rep) {
      if (r > 0) {
        std::fill(next.begin(), next.end(), Int(0));
        for (auto [g, s] : terms) {
          long off = d * g;
          for (long j = 0; j + off <= prec; ++j) {
            if (s > 0)
              next[j + off] += acc[j];
            else
              next[j + off] -= acc[j];
          }
        }
        std::swap(acc, next);
      } else {
        // out * P(q^d) = acc, solved coefficient by coefficient
        std::vector<Int> out(prec + 1, Int(0));
        for (long j = 0; j <= prec; ++j) {
          Int v = acc[j];
          for (auto [g, s] : terms) {
            long off = d * g;
            if (off == 0 || off > j) continue;
            if (s > 0)
              v -= out[j - off];
            else
              v += out[j - off];
          }
          out[j] = std::move(v);
        }
        acc = std::move(out);
      }
    }
  }
  QExpansion f(weight, level, prec);
  for (long m = lead; m <= prec; ++m) f.coeffs[m] = Rat(acc[m - lead]);
  return f;
}

// ---- character-pair Eisenstein series ----
//
// E_k^{psi, psibar} for a primitive character psi mod f is an Eisenstein
// newform of level f^2 with trivial nebentypus and vanishing constant
// term at infinity; its Galois orbit spans a rational subspace. These
// fill the Eisenstein directions the level-1 lifts miss (levels with
// nu_inf > sigma_0). Conductors 3, 4, 5 cover every level below 49.

// psi values are in {0, +-1, +-i}, stored as exact (re, im) pairs.
struct CharValue {
  int re;
  int im;
};

inline const std::vector<std::vector<CharValue>>& characters_mod(long f) {
  static const std::vector<std::vector<CharValue>> none;
  static const std::vector<std::vector<CharValue>> mod3 = {
      // chi_(-3): quadratic
      {{0, 0}, {1, 0}, {-1, 0}},
  };
  static const std::vector<std::vector<CharValue>> mod4 = {
      // chi_(-4): quadratic
      {{0, 0}, {1, 0}, {0, 0}, {-1, 0}},
  };
  static const std::vector<std::vector<CharValue>> mod5 = {
      // chi_5: quadratic (squares mod 5 are 1, 4)
      {{0, 0}, {1, 0}, {-1, 0}, {-1, 0}, {1, 0}},
      // quartic with psi(2) = i; its conjugate spans the same rational pair
      {{0, 0}, {1, 0}, {0, 1}, {0, -1}, {-1, 0}},
  };
  switch (f) {
    case 3:
      return mod3;
    case 4:
      return mod4;
    case 5:
      return mod5;
    default:
      return none;
  }
}

namespace char_eis_detail {

inline bool is_real(const std::vector<CharValue>& psi) {
  for (const CharValue& v : psi)
    if (v.im != 0) return false;
  return true;
}

}  // namespace char_eis_detail

// All v_d-lifted rational rows coming from character-pair Eisenstein
// series at level n (possibly none), each tagged at level n.
inline std::vector<QExpansion> char_eisenstein_rows(long n, int k, long prec) {
  std::vector<QExpansion> out;
  for (long f : {3L, 4L, 5L}) {
    if (n % (f * f) != 0) continue;
    for (const auto& psi : characters_mod(f)) {
      // coefficient(m) = sum over d | m of psi(m/d) * conj(psi)(d) * d^(k-1)
      std::vector<Int> re(prec + 1, Int(0)), im(prec + 1, Int(0));
      Int dp;
      for (long d = 1; d <= prec; ++d) {
        mpz_ui_pow_ui(dp.get_mpz_t(), static_cast<unsigned long>(d),
                      static_cast<unsigned long>(k - 1));
        CharValue pd = psi[d % f];
        if (pd.re == 0 && pd.im == 0) continue;
        CharValue pdc{pd.re, -pd.im};  // conj(psi)(d)
        for (long m = d; m <= prec; m += d) {
          CharValue pm = psi[(m / d) % f];
          if (pm.re == 0 && pm.im == 0) continue;
          // psi(m/d) * conj(psi)(d)
          int cre = pm.re * pdc.re - pm.im * pdc.im;
          int cim = pm.re * pdc.im + pm.im * pdc.re;
          if (cre > 0)
            re[m] += dp;
          else if (cre < 0)
            re[m] -= dp;
          if (cim > 0)
            im[m] += dp;
          else if (cim < 0)
            im[m] -= dp;
        }
      }
      bool real_char = char_eis_detail::is_real(psi);
      for (long d : divisors(n / (f * f))) {
        QExpansion e_re(k, n, prec);
        QExpansion e_im(k, n, prec);
        bool has_im = false;
        for (long m = 1; m * d <= prec; ++m) {
          e_re.coeffs[m * d] = Rat(re[m]);
          e_im.coeffs[m * d] = Rat(im[m]);
          if (sgn(im[m]) != 0) has_im = true;
        }
        out.push_back(std::move(e_re));
        if (!real_char && has_im) out.push_back(std::move(e_im));
      }
    }
  }
  return out;
}

// ---- augmented span construction ----
//
// Partial spans are cached per (weight, level, cuspidal): the widest
// echelonized row space assembled so far, possibly short of the space
// dimension. Construction feeds candidates in a deterministic order and
// stops when the dimension formula's target is reached.

struct SpanCache {
  std::mutex mu;
  std::map<std::tuple<int, long, bool>, std::pair<long, RatMatrix>> entries;
};

inline SpanCache& span_cache() {
  static SpanCache cache;
  return cache;
}

inline RatMatrix augmented_span(int k, long n, long prec, bool cuspidal,
                                bool* complete);

inline void feed_matrix(IncrementalRref& acc, const RatMatrix& rows,
                        long prec) {
  for (size_t i = 0; i < rows.rows; ++i) {
    std::vector<Rat> v(prec + 1);
    for (long j = 0; j <= prec; ++j) v[j] = rows.at(i, j);
    acc.add_row(std::move(v));
  }
}

inline RatMatrix augmented_span_impl(int k, long n, long prec, bool cuspidal) {
  SpaceDims dims = dim_spaces(k, n);
  long target = cuspidal ? dims.dim_s : dims.dim_m;
  IncrementalRref acc(prec + 1);
  if (target == 0) return acc.matrix();

  auto done = [&] { return static_cast<long>(acc.rank()) >= target; };

  // 1. tracked generator products (Eisenstein lifts, phi2, pairs); for the
  //    cuspidal space, their constant-term-kernel combinations; plus the
  //    character-pair Eisenstein rows for the full space
  auto gens = mk_candidates(k, n, prec);
  if (cuspidal) {
    feed_matrix(acc, cuspidal_combo_rows(gens, n, prec), prec);
  } else {
    feed_matrix(acc, candidate_rows(gens, prec), prec);
    for (const QExpansion& e : char_eisenstein_rows(n, k, prec)) {
      acc.add_row(e.coeffs);
      if (done()) return acc.matrix();
    }
  }
  if (done()) return acc.matrix();

  // 2. cuspidal eta quotients of weight k (enumeration grows like
  //    compositions of 2k over the divisors, so cap the weight)
  if (k <= 12) {
    for (const EtaQuotient& e : eta_quotients(n, k)) {
      QExpansion f = eta_series(e, n, k, prec);
      acc.add_row(f.coeffs);
      if (done()) return acc.matrix();
    }
  }

  // 3. degeneracy lifts of spans at proper divisor levels
  for (long m : divisors(n)) {
    if (m == n) continue;
    bool sub_complete = false;
    RatMatrix sub = augmented_span(k, m, prec, cuspidal, &sub_complete);
    for (long d : divisors(n / m)) {
      for (size_t i = 0; i < sub.rows; ++i) {
        std::vector<Rat> v(prec + 1, Rat(0));
        for (long j = 0; d * j <= prec; ++j) v[d * j] = sub.at(i, j);
        acc.add_row(std::move(v));
      }
    }
    if (done()) return acc.matrix();
  }

  // 4. products of lower-weight spans at this level; for the cuspidal
  //    space one factor must be cuspidal
  for (int k1 = 2; k1 <= k - 2; k1 += 2) {
    int k2 = k - k1;
    if (!cuspidal && k1 > k2) break;
    bool c1 = false, c2 = false;
    RatMatrix a = augmented_span(k1, n, prec, cuspidal, &c1);
    RatMatrix b = augmented_span(k2, n, prec, false, &c2);
    for (size_t i = 0; i < a.rows && !done(); ++i) {
      QExpansion fa(k1, n, prec);
      for (long j = 0; j <= prec; ++j) fa.coeffs[j] = a.at(i, j);
      for (size_t j2 = 0; j2 < b.rows && !done(); ++j2) {
        QExpansion fb(k2, n, prec);
        for (long j = 0; j <= prec; ++j) fb.coeffs[j] = b.at(j2, j);
        acc.add_row(mul(fa, fb).coeffs);
      }
    }
    if (done()) return acc.matrix();
  }
  return acc.matrix();
}

inline RatMatrix augmented_span(int k, long n, long prec, bool cuspidal,
                                bool* complete) {
  SpaceDims dims = dim_spaces(k, n);
  long target = cuspidal ? dims.dim_s : dims.dim_m;
  {
    std::lock_guard<std::mutex> lock(span_cache().mu);
    auto it = span_cache().entries.find({k, n, cuspidal});
    if (it != span_cache().entries.end() && it->second.first >= prec) {
      const RatMatrix& wide = it->second.second;
      RatMatrix out(wide.rows, prec + 1);
      for (size_t i = 0; i < wide.rows; ++i)
        for (long j = 0; j <= prec; ++j) out.at(i, j) = wide.at(i, j);
      if (complete) *complete = static_cast<long>(wide.rows) == target;
      return out;
    }
  }
  RatMatrix span = augmented_span_impl(k, n, prec, cuspidal);
  {
    std::lock_guard<std::mutex> lock(span_cache().mu);
    auto& slot = span_cache().entries[{k, n, cuspidal}];
    if (slot.first < prec) slot = {prec, span};
  }
  if (complete) *complete = static_cast<long>(span.rows) == target;
  return span;
}

inline SpaceBasis build_augmented_basis(int k, long n, long prec,
                                        bool cuspidal) {
  SpaceDims dims = dim_spaces(k, n);
  long target = cuspidal ? dims.dim_s : dims.dim_m;
  bool complete = false;
  RatMatrix span = augmented_span(k, n, prec, cuspidal, &complete);
  if (!complete)
    fail_data("basis-incomplete",
              "augmented span reaches " + std::to_string(span.rows) + " of " +
                  std::to_string(target) + " dimensions at k=" +
                  std::to_string(k) + " N=" + std::to_string(n));
  auto [echelon, pivots] = rref(span);
  if (cuspidal)
    for (size_t i = 0; i < echelon.rows; ++i)
      if (sgn(echelon.at(i, 0)) != 0)
        fail_data("cusp-filter-inconsistent", "cusp form with nonzero c_0");
  return {k, n, prec, cuspidal, std::move(echelon), std::move(pivots),
          "augmented"};
}

// Membership-residual operator for a column vector against an RREF row
// space: v - basis^T * (v at pivots) vanishes iff v lies in the span.
inline RatMatrix residual_matrix(const SpaceBasis& s, long width) {
  RatMatrix r = RatMatrix::identity(width);
  for (size_t i = 0; i < s.basis.rows; ++i) {
    size_t p = s.pivots[i];
    for (long m = 0; m < width; ++m) r.at(m, p) -= s.basis.at(i, m);
  }
  return r;
}

// Lower-triangular multiplication-by-series operator on coefficient
// windows (the series has constant term 1).
inline RatMatrix mul_by_series_matrix(const QExpansion& e, long width) {
  RatMatrix u(width, width);
  for (long m = 0; m < width; ++m)
    for (long j = 0; j <= m; ++j) u.at(m, j) = e.coeffs[m - j];
  return u;
}

inline SpaceBasis space_basis_pipeline(int k, long n, long prec, bool cuspidal,
                                       int depth);

// Ratio bootstrap: f lies in M_k iff f*E4 lies in M_{k+4} and f*E6 lies
// in M_{k+6}; windows of length sturm(k+10) pin both memberships exactly
// (the two auxiliary spaces are exact, E4 and E6 have disjoint zero sets
// on the upper half plane, and both are nonzero at every cusp). For the
// cuspidal space the E4 route runs against S_{k+4}.
inline SpaceBasis build_ratio_basis(int k, long n, long prec, bool cuspidal,
                                    int depth) {
  SpaceDims dims = dim_spaces(k, n);
  long w = std::max(prec, sturm_bound(k + 10, n)) + 1;  // window length
  SpaceBasis a = space_basis_pipeline(k + 4, n, w - 1, cuspidal, depth);
  SpaceBasis b = space_basis_pipeline(k + 6, n, w - 1, false, depth);
  RatMatrix c4 = matmul(residual_matrix(a, w),
                        mul_by_series_matrix(eisenstein(4, w - 1), w));
  RatMatrix c6 = matmul(residual_matrix(b, w),
                        mul_by_series_matrix(eisenstein(6, w - 1), w));
  Subspace sol = kernel(vstack(c4, c6));
  auto [echelon, pivots] = rref(sol.basis());
  long expect = cuspidal ? dims.dim_s : dims.dim_m;
  if (static_cast<long>(echelon.rows) != expect)
    fail_data("basis-incomplete",
              "ratio construction found " + std::to_string(echelon.rows) +
                  " dims, expected " + std::to_string(expect) + " at k=" +
                  std::to_string(k) + " N=" + std::to_string(n));
  return {k, n, w - 1, cuspidal, std::move(echelon), std::move(pivots),
          "ratio"};
}

}  // namespace detail

inline SpaceBasis slice_basis(const SpaceBasis& s, long prec) {
  if (prec == s.prec) return s;
  if (prec > s.prec)
    fail_data("insufficient-precision", "cannot widen a basis by slicing");
  if (prec < sturm_bound(s.weight, s.level))
    fail_data("insufficient-precision", "slice below Sturm bound");
  SpaceBasis out;
  out.weight = s.weight;
  out.level = s.level;
  out.prec = prec;
  out.cuspidal = s.cuspidal;
  out.strategy = s.strategy;
  out.pivots = s.pivots;
  out.basis = RatMatrix(s.basis.rows, prec + 1);
  for (size_t i = 0; i < s.basis.rows; ++i)
    for (long j = 0; j <= prec; ++j) out.basis.at(i, j) = s.basis.at(i, j);
  return out;
}

namespace detail {

struct BasisCache {
  std::mutex mu;
  std::map<std::tuple<int, long, bool>, SpaceBasis> entries;
};

inline BasisCache& basis_cache() {
  static BasisCache cache;
  return cache;
}

inline SpaceBasis space_basis_pipeline(int k, long n, long prec, bool cuspidal,
                                       int depth) {
  {
    std::lock_guard<std::mutex> lock(basis_cache().mu);
    auto it = basis_cache().entries.find({k, n, cuspidal});
    if (it != basis_cache().entries.end() && it->second.prec >= prec)
      return slice_basis(it->second, prec);
  }
  SpaceBasis built;
  bool ok = false;
  try {
    built = cuspidal ? build_sk_basis(k, n, prec) : build_mk_basis(k, n, prec);
    ok = true;
  } catch (const Error& e) {
    if (e.code() != "basis-incomplete" && e.code() != "cusp-filter-inconsistent")
      throw;
  }
  if (!ok) {
    try {
      built = build_augmented_basis(k, n, prec, cuspidal);
      ok = true;
    } catch (const Error& e) {
      if (e.code() != "basis-incomplete" &&
          e.code() != "cusp-filter-inconsistent")
        throw;
    }
  }
  if (!ok) {
    if (depth >= 5)
      fail_data("basis-incomplete",
                "construction failed at k=" + std::to_string(k) +
                    " N=" + std::to_string(n));
    built = build_ratio_basis(k, n, prec, cuspidal, depth + 1);
  }
  {
    std::lock_guard<std::mutex> lock(basis_cache().mu);
    auto& slot = basis_cache().entries[{k, n, cuspidal}];
    if (slot.prec < built.prec) slot = built;
  }
  {
    // completed bases also serve as spans for the augmented construction
    std::lock_guard<std::mutex> lock(span_cache().mu);
    auto& slot = span_cache().entries[{k, n, cuspidal}];
    if (slot.first < built.prec ||
        (slot.first == built.prec && slot.second.rows < built.basis.rows))
      slot = {built.prec, built.basis};
  }
  return slice_basis(built, prec);
}

}  // namespace detail

// Preferred constructors: spec generator products first, then the
// augmented span (eta quotients, degeneracy lifts, cross-weight products),
// then the ratio bootstrap. Process-wide cache keyed by
// (weight, level, cuspidal).
inline SpaceBasis mk_basis(int k, long n, long prec) {
  return detail::space_basis_pipeline(k, n, prec, false, 0);
}

inline SpaceBasis sk_basis(int k, long n, long prec) {
  return detail::space_basis_pipeline(k, n, prec, true, 0);
}

inline void clear_basis_cache() {
  std::lock_guard<std::mutex> lock(detail::basis_cache().mu);
  detail::basis_cache().entries.clear();
  std::lock_guard<std::mutex> lock2(detail::span_cache().mu);
  detail::span_cache().entries.clear();
}

}  // namespace modforms
