#pragma once

#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "modforms/block_decomp.hpp"
#include "modforms/degeneracy.hpp"
#include "modforms/space_basis.hpp"

namespace modforms {

// Matrix of T_m on the basis coordinates of a space (column convention:
// coordinates of T_m f are mat * coordinates of f).
struct HeckeMatrix {
  int weight = 0;
  long level = 1;
  long m = 1;
  RatMatrix mat;
};

namespace detail {

// Coefficients of T_p f on the window 0..out_prec from the coefficients
// of f: c_n(T_p f) = c_{np}(f) + p^{k-1} c_{n/p}(f).
inline std::vector<Rat> hecke_prime_image(const std::vector<Rat>& coeffs,
                                          int weight, long p, long out_prec) {
  Int pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p),
                static_cast<unsigned long>(weight - 1));
  Rat pkr(pk);
  std::vector<Rat> out(out_prec + 1);
  for (long n = 0; n <= out_prec; ++n) {
    out[n] = coeffs[n * p];
    if (n % p == 0) out[n] += pkr * coeffs[n / p];
  }
  return out;
}

inline RatMatrix hecke_prime_matrix(const SpaceBasis& s, long p) {
  long out_prec = s.prec / p;
  if (out_prec < sturm_bound(s.weight, s.level))
    fail_data("insufficient-precision",
              "T_" + std::to_string(p) + " needs basis precision >= " +
                  std::to_string(p * sturm_bound(s.weight, s.level)));
  size_t dim = s.basis.rows;
  RatMatrix mat(dim, dim);
  for (size_t i = 0; i < dim; ++i) {
    std::vector<Rat> row(s.prec + 1);
    for (long j = 0; j <= s.prec; ++j) row[j] = s.basis.at(i, j);
    std::vector<Rat> image = hecke_prime_image(row, s.weight, p, out_prec);
    // pivot columns sit inside the Sturm window, so coordinates are the
    // image entries at the pivots; then verify membership exactly
    std::vector<Rat> coords(dim);
    for (size_t j = 0; j < dim; ++j) coords[j] = image[s.pivots[j]];
    std::vector<Rat> recon(out_prec + 1, Rat(0));
    Rat t;
    for (size_t j = 0; j < dim; ++j) {
      if (sgn(coords[j]) == 0) continue;
      for (long n = 0; n <= out_prec; ++n) {
        if (sgn(s.basis.at(j, n)) == 0) continue;
        t = coords[j] * s.basis.at(j, n);
        recon[n] += t;
      }
    }
    for (long n = 0; n <= out_prec; ++n)
      if (cmp(recon[n], image[n]) != 0)
        fail_data("not-in-space",
                  "Hecke image leaves the space at k=" +
                      std::to_string(s.weight) + " N=" +
                      std::to_string(s.level) + " p=" + std::to_string(p));
    for (size_t j = 0; j < dim; ++j) mat.at(j, i) = coords[j];
  }
  return mat;
}

}  // namespace detail

// T_m for gcd(m, N) = 1, built from prime matrices via
// T_{p^{r+1}} = T_p T_{p^r} - p^{k-1} T_{p^{r-1}} and multiplicativity.
inline HeckeMatrix hecke_matrix(const SpaceBasis& s, long m) {
  if (m < 1 || std::gcd(m, s.level) != 1)
    fail_usage("hecke_matrix needs gcd(m, N) = 1");
  size_t dim = s.basis.rows;
  RatMatrix acc = RatMatrix::identity(dim);
  for (auto [p, e] : factorize(m)) {
    RatMatrix tp = detail::hecke_prime_matrix(s, p);
    RatMatrix prev = RatMatrix::identity(dim);
    RatMatrix cur = tp;
    Int pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p),
                  static_cast<unsigned long>(s.weight - 1));
    Rat pkr(pk);
    for (int i = 1; i < e; ++i) {
      RatMatrix next = sub(matmul(tp, cur), scale(prev, pkr));
      prev = cur;
      cur = next;
    }
    acc = matmul(acc, cur);
  }
  return {s.weight, s.level, m, std::move(acc)};
}

// The coefficient-window operator of T_m: rows n = 0..out_prec over
// columns 0..in_prec with c'_n = sum over e | gcd(n, m) of
// e^{k-1} c_{nm/e^2}. Used as an independent route in tests.
inline RatMatrix hecke_window_matrix(int weight, long m, long in_prec) {
  long out_prec = in_prec / m;
  RatMatrix w(out_prec + 1, in_prec + 1);
  Int ek;
  for (long n = 0; n <= out_prec; ++n) {
    long g = std::gcd(n, m);
    for (long e = 1; e <= g; ++e) {
      if (g % e) continue;
      long idx = n / e * (m / e);
      if (idx > in_prec) continue;
      mpz_ui_pow_ui(ek.get_mpz_t(), static_cast<unsigned long>(e),
                    static_cast<unsigned long>(weight - 1));
      w.at(n, idx) += Rat(ek);
    }
  }
  return w;
}

// A rationally irreducible Hecke-invariant block: the subspace (in basis
// coordinates), the characteristic polynomial of each T_p restricted to
// it (a power of a single irreducible), and the minimal level once known.
struct OrbitComponent {
  int weight = 0;
  long level = 1;
  Subspace subspace;  // basis coordinates of the ambient SpaceBasis
  std::map<long, Poly> charpolys;
  std::map<long, Poly> irreducibles;  // the unique irreducible per prime
  long minimal_level = 0;             // 0 until computed
  bool is_new = false;

  long dim() const { return static_cast<long>(subspace.dim()); }
};

namespace detail {

inline int orbit_cmp(const OrbitComponent& a, const OrbitComponent& b) {
  if (a.dim() != b.dim()) return a.dim() < b.dim() ? -1 : 1;
  auto ia = a.charpolys.begin();
  auto ib = b.charpolys.begin();
  for (; ia != a.charpolys.end() && ib != b.charpolys.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
    int c = poly_cmp(ia->second, ib->second);
    if (c != 0) return c;
  }
  return subspace_cmp(a.subspace, b.subspace);
}

}  // namespace detail

// Simultaneous rational block decomposition of the T_p for the given
// primes; blocks ordered by (dim, charpolys) for reproducible reports.
inline std::vector<OrbitComponent> isotypic_decompose(
    const SpaceBasis& s, const std::vector<long>& primes,
    uint64_t seed = kDefaultSeed) {
  for (long p : primes)
    if (std::gcd(p, s.level) != 1)
      fail_usage("isotypic_decompose needs primes coprime to the level");
  std::vector<RatMatrix> mats;
  for (long p : primes) mats.push_back(hecke_matrix(s, p).mat);
  std::vector<OrbitComponent> out;
  if (s.basis.rows == 0) return out;
  for (const Subspace& block : invariant_block_decomposition(mats, seed)) {
    OrbitComponent c;
    c.weight = s.weight;
    c.level = s.level;
    c.subspace = block;
    for (size_t i = 0; i < primes.size(); ++i) {
      Poly cp = charpoly(restrict_operator(mats[i], block));
      auto facs = factor_monic_rational(cp);
      if (facs.size() != 1)
        fail_data("decomposition-internal",
                  "restricted charpoly is not a power of one irreducible");
      c.irreducibles[primes[i]] = facs[0].first;
      c.charpolys[primes[i]] = std::move(cp);
    }
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return detail::orbit_cmp(a, b) < 0;
  });
  return out;
}

// Induced matrix on the section coordinates of the quotient; requires
// T(K_0) inside K_0, which the theory guarantees.
inline RatMatrix quotient_hecke(const HeckeMatrix& t, const QuotientSpace& q) {
  if (t.weight != q.ambient.weight || t.level != q.ambient.level)
    fail_usage("quotient_hecke tags disagree");
  if (std::gcd(t.m, t.level) != 1)
    fail_usage("quotient_hecke needs gcd(m, N) = 1");
  for (size_t i = 0; i < q.k0_basis_coords.dim(); ++i) {
    std::vector<Rat> img = matvec(t.mat, q.k0_basis_coords.basis_row(i));
    if (!q.k0_basis_coords.contains(img))
      fail_verification("does-not-descend",
                        "T_" + std::to_string(t.m) + " does not preserve K_0");
  }
  RatMatrix out(q.section.size(), q.section.size());
  for (size_t j = 0; j < q.section.size(); ++j) {
    std::vector<Rat> e(q.ambient.basis.rows, Rat(0));
    e[q.section[j]] = 1;
    std::vector<Rat> img = q.project(matvec(t.mat, e));
    for (size_t i = 0; i < q.section.size(); ++i) out.at(i, j) = img[i];
  }
  return out;
}

// Hecke primes used for a space: all p <= sturm_bound(k, N) with p
// coprime to N (the documented default).
inline std::vector<long> default_hecke_primes(int k, long n) {
  std::vector<long> out;
  long bound = sturm_bound(k, n);
  for (long p = 2; p <= bound; p = static_cast<long>(next_prime_u64(p)))
    if (n % p != 0) out.push_back(p);
  return out;
}

inline long working_precision(int k, long n, const std::vector<long>& primes) {
  long pmax = 1;
  for (long p : primes) pmax = std::max(pmax, p);
  return PrecisionPolicy(k, n, pmax).working;
}

// ---- multiplicity one on the quotient ----

struct MultOneReport {
  int weight = 0;
  long level = 1;
  long quotient_dim = 0;
  std::vector<long> block_dims;
  long rational_blocks_checked = 0;  // degree-1 blocks with c_m = lambda_m c_1
  long coefficient_checks = 0;
  std::string failure;  // empty on pass
  bool pass() const { return failure.empty(); }
};

namespace detail {

// Scalar of T_m on a one-dimensional block from the prime scalars, via
// T_{p^{r+1}} = T_p T_{p^r} - p^{k-1} T_{p^{r-1}} and multiplicativity.
inline Rat eigenvalue_from_primes(const std::map<long, Rat>& prime_eigen,
                                  int weight, long m) {
  Rat out(1);
  for (auto [p, e] : factorize(m)) {
    Rat lp = prime_eigen.at(p);
    Int pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p),
                  static_cast<unsigned long>(weight - 1));
    Rat prev(1), cur = lp;
    for (int i = 1; i < e; ++i) {
      Rat next = lp * cur - Rat(pk) * prev;
      prev = cur;
      cur = next;
    }
    out *= cur;
  }
  return out;
}

}  // namespace detail

// Proposition check: every Hecke block of the quotient is simple (a
// seeded random combination has squarefree restricted charpoly of full
// degree), and rational eigenforms satisfy c_m = lambda_m c_1 on the
// Sturm window for gcd(m, N) = 1.
inline MultOneReport mult_one_check(int k, long n, uint64_t seed = kDefaultSeed) {
  MultOneReport rep;
  rep.weight = k;
  rep.level = n;
  std::vector<long> primes = default_hecke_primes(k, n);
  long sturm = sturm_bound(k, n);
  long prec = working_precision(k, n, primes);
  SpaceBasis s = sk_basis(k, n, prec);
  QuotientSpace q = quotient_space(s);
  rep.quotient_dim = q.dim();
  if (q.dim() == 0) return rep;

  std::vector<RatMatrix> qmats;
  std::map<long, size_t> prime_index;
  for (long p : primes) {
    prime_index[p] = qmats.size();
    qmats.push_back(quotient_hecke(hecke_matrix(s, p), q));
  }

  Rng rng(seed);
  auto blocks = invariant_block_decomposition(qmats, seed);
  for (const Subspace& block : blocks) {
    rep.block_dims.push_back(static_cast<long>(block.dim()));
    bool simple = false;
    for (int attempt = 0; attempt < 8 && !simple; ++attempt) {
      RatMatrix combo(q.dim(), q.dim());
      for (const RatMatrix& op : qmats) {
        Rat c(rng.range(1, 64));
        for (size_t i = 0; i < combo.entries.size(); ++i)
          combo.entries[i] += c * op.entries[i];
      }
      Poly cp = charpoly(restrict_operator(combo, block));
      if (poly_is_squarefree(cp) &&
          poly_deg(cp) == static_cast<long>(block.dim()))
        simple = true;
    }
    if (!simple) {
      bool all_powers = true;
      for (const RatMatrix& op : qmats)
        if (poly_is_squarefree(charpoly(restrict_operator(op, block))))
          all_powers = false;
      rep.failure = all_powers ? "mult-one-violation"
                               : "degenerate-random-combination-exhaustion";
      return rep;
    }
    if (block.dim() == 1) {
      std::vector<Rat> y = block.basis_row(0);
      Rat c1 = q.coefficient(y, 1);
      if (sgn(c1) == 0) {
        rep.failure = "mult-one-violation";
        return rep;
      }
      Rat inv = 1 / c1;
      for (Rat& c : y) c *= inv;
      std::map<long, Rat> prime_eigen;
      for (long p : primes) {
        RatMatrix r = restrict_operator(qmats[prime_index[p]], block);
        prime_eigen[p] = r.at(0, 0);
      }
      for (long m = 1; m <= sturm; ++m) {
        if (std::gcd(m, n) != 1) continue;
        Rat lam = detail::eigenvalue_from_primes(prime_eigen, k, m);
        if (cmp(q.coefficient(y, m), lam) != 0) {
          rep.failure = "mult-one-violation";
          return rep;
        }
        ++rep.coefficient_checks;
      }
      ++rep.rational_blocks_checked;
    }
  }
  return rep;
}

// ---- eigensystem keys and cross-level matching ----

struct EigenSystemKey {
  std::vector<std::pair<long, Poly>> factors;  // (prime, monic irreducible)

  bool operator==(const EigenSystemKey& o) const = default;
};

// Level-independent fingerprint from the primes p with p coprime to N*D.
inline EigenSystemKey eigensystem_key(const OrbitComponent& c, long exclude_d) {
  EigenSystemKey key;
  for (const auto& [p, g] : c.irreducibles) {
    if (exclude_d % p == 0) continue;
    key.factors.emplace_back(p, g);
  }
  if (key.factors.empty())
    fail_data("missing-charpoly", "eigensystem key has no usable primes");
  return key;
}

struct AlmostAllReport {
  bool keys_agree = false;  // agreement away from D
  long primes_compared_at_d = 0;
  bool pass = true;
};

// If two components at the same level share all eigenvalue factors away
// from D, they must share them at the primes dividing D as well. An
// empirical check of the cited global result.
inline AlmostAllReport almost_all_check(const OrbitComponent& a,
                                        const OrbitComponent& b, long d) {
  if (a.level != b.level || a.weight != b.weight)
    fail_usage("almost_all_check needs components at one level and weight");
  AlmostAllReport rep;
  EigenSystemKey ka = eigensystem_key(a, d);
  EigenSystemKey kb = eigensystem_key(b, d);
  rep.keys_agree = ka == kb;
  if (!rep.keys_agree) return rep;  // vacuous pass
  for (const auto& [p, g] : a.irreducibles) {
    if (d % p != 0) continue;
    auto it = b.irreducibles.find(p);
    if (it == b.irreducibles.end()) continue;
    ++rep.primes_compared_at_d;
    if (!(it->second == g)) rep.pass = false;
  }
  return rep;
}

}  // namespace modforms
