#pragma once

#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "modforms/space_basis.hpp"
#include "modforms/subspace.hpp"

namespace modforms {

// Level-raising data: i_d maps level N forms to level M forms when N | M
// and d | (M/N).
struct DegeneracySpec {
  long source_level;
  long target_level;
  long d;

  void validate() const {
    if (source_level < 1 || target_level % source_level != 0 ||
        (target_level / source_level) % d != 0)
      fail_data("invalid-divisor", "degeneracy map needs N | M and d | (M/N)");
  }
};

// c_m(i_d f) = c_{m/d}(f) when d | m, else 0; level tag becomes M.
inline QExpansion degeneracy_i(const QExpansion& f, const DegeneracySpec& spec,
                               long target_prec = -1) {
  spec.validate();
  if (f.level != spec.source_level)
    fail_data("invalid-level", "degeneracy source level tag mismatch");
  if (target_prec < 0) target_prec = f.prec * spec.d;
  if (f.prec < (target_prec + spec.d - 1) / spec.d)
    fail_data("insufficient-precision", "degeneracy source window too short");
  QExpansion r(f.weight, spec.target_level, target_prec);
  for (long m = 0; m <= target_prec; ++m)
    if (m % spec.d == 0) r.coeffs[m] = f.coeffs[m / spec.d];
  return r;
}

// Keeps the coefficients at indices divisible by d.
inline QExpansion pi_filter(const QExpansion& f, long d) {
  if (d < 1 || f.level % d != 0)
    fail_data("invalid-divisor", "pi_filter needs d | level");
  QExpansion r = f;
  for (long m = 0; m <= f.prec; ++m)
    if (m % d != 0) r.coeffs[m] = 0;
  return r;
}

// Inclusion-exclusion over the primes of N: the surviving coefficients
// are exactly those with gcd(m, N) = 1.
inline QExpansion pi_projector(const QExpansion& f, long n) {
  if (f.level != n) fail_data("invalid-level", "pi_projector level mismatch");
  std::vector<long> primes = prime_divisors(n);
  QExpansion acc(f.weight, f.level, f.prec);
  size_t subsets = 1ULL << primes.size();
  for (size_t mask = 0; mask < subsets; ++mask) {
    long d = 1;
    int bits = 0;
    for (size_t i = 0; i < primes.size(); ++i)
      if (mask & (1ULL << i)) {
        d *= primes[i];
        ++bits;
      }
    QExpansion term = pi_filter(f, d);
    if (bits % 2 == 1) term = scale(term, Rat(-1));
    acc = add(acc, term);
  }
  return acc;
}

// The subspace of forms in the row space of S with c_m = 0 for every
// window index m with gcd(m, N) = 1, in coefficient coordinates. This is
// the kernel of pi on the space.
inline Subspace k0_subspace(const SpaceBasis& s) {
  if (s.prec < sturm_bound(s.weight, s.level))
    fail_data("insufficient-precision", "k0_subspace below Sturm bound");
  std::vector<long> constrained;
  for (long m = 0; m <= s.prec; ++m)
    if (std::gcd(m, s.level) == 1) constrained.push_back(m);
  RatMatrix a(constrained.size(), s.basis.rows);
  for (size_t i = 0; i < constrained.size(); ++i)
    for (size_t j = 0; j < s.basis.rows; ++j)
      a.at(i, j) = s.basis.at(j, constrained[i]);
  Subspace combos = kernel(a);
  return Subspace::from_rows(s.prec + 1, matmul(combos.basis(), s.basis));
}

// Sum over primes p | N of the degeneracy images i_p(S_k(Gamma0(N/p))),
// in the coefficient coordinates of the level-N window.
inline Subspace oldsum_subspace(int k, long n, long prec, bool cuspidal = true) {
  RatMatrix rows(0, prec + 1);
  for (long p : prime_divisors(n)) {
    long sub_prec = (prec + p - 1) / p;
    sub_prec = std::max(sub_prec, sturm_bound(k, n / p));
    SpaceBasis sub = cuspidal ? sk_basis(k, n / p, sub_prec)
                              : mk_basis(k, n / p, sub_prec);
    DegeneracySpec spec{n / p, n, p};
    RatMatrix lifted(sub.basis.rows, prec + 1);
    for (size_t i = 0; i < sub.basis.rows; ++i) {
      QExpansion img = degeneracy_i(sub.row_expansion(i), spec, prec);
      for (long m = 0; m <= prec; ++m) lifted.at(i, m) = img.coeffs[m];
    }
    rows = vstack(rows, lifted);
  }
  return Subspace::from_rows(prec + 1, rows);
}

struct Theorem1Report {
  int weight = 0;
  long level = 0;
  long prec = 0;
  long dim_k0 = 0;
  long dim_oldsum = 0;
  bool trivial_inclusion = false;  // oldsum inside K_0, checked directly
  bool equal = false;
  long mk_dim_k0 = -1;  // full M_k variant, -1 when unavailable
  long mk_dim_oldsum = -1;
  bool mk_equal = false;
  Subspace k0;
  Subspace oldsum;

  bool pass() const {
    return equal && trivial_inclusion && (mk_dim_k0 < 0 || mk_equal);
  }
};

namespace detail {

// Every coefficient with gcd(m, N) = 1 vanishes on each basis row.
inline bool coprime_window_vanishes(const Subspace& s, long n) {
  for (size_t i = 0; i < s.dim(); ++i)
    for (size_t m = 0; m < s.ambient_dim(); ++m)
      if (std::gcd(static_cast<long>(m), n) == 1 &&
          sgn(s.basis().at(i, m)) != 0)
        return false;
  return true;
}

}  // namespace detail

// Checks K_0(N) = sum over p | N of i_p(S_k(Gamma0(N/p))) as a canonical
// subspace identity on the Sturm window, plus the full M_k variant.
inline Theorem1Report verify_theorem1(int k, long n) {
  long prec = sturm_bound(k, n);
  Theorem1Report rep;
  rep.weight = k;
  rep.level = n;
  rep.prec = prec;

  SpaceBasis s = sk_basis(k, n, prec);
  rep.k0 = k0_subspace(s);
  rep.oldsum = oldsum_subspace(k, n, prec, true);
  rep.dim_k0 = static_cast<long>(rep.k0.dim());
  rep.dim_oldsum = static_cast<long>(rep.oldsum.dim());
  rep.trivial_inclusion = detail::coprime_window_vanishes(rep.oldsum, n) &&
                          rep.k0.contains(rep.oldsum);
  rep.equal = rep.k0 == rep.oldsum;

  try {
    SpaceBasis m = mk_basis(k, n, prec);
    Subspace k0m = k0_subspace(m);
    Subspace oldm = oldsum_subspace(k, n, prec, false);
    rep.mk_dim_k0 = static_cast<long>(k0m.dim());
    rep.mk_dim_oldsum = static_cast<long>(oldm.dim());
    rep.mk_equal = k0m == oldm;
  } catch (const Error& e) {
    if (e.code() != "basis-incomplete") throw;
  }
  return rep;
}

// Quotient presentation of S_k(Gamma0(N)) / K_0(N): the section is the
// canonical pivot complement of K_0's echelon basis in basis coordinates.
struct QuotientSpace {
  SpaceBasis ambient;
  Subspace k0;               // coefficient coordinates
  Subspace k0_basis_coords;  // the same subspace in basis coordinates
  std::vector<size_t> section;  // non-pivot basis coordinate indices
  RatMatrix section_forms;      // rows: coset representatives, coeff coords

  long dim() const { return static_cast<long>(section.size()); }

  // basis coordinates -> section coordinates, killing the K_0 component
  std::vector<Rat> project(const std::vector<Rat>& basis_coords) const {
    std::vector<Rat> x = basis_coords;
    Rat t;
    for (size_t i = 0; i < k0_basis_coords.dim(); ++i) {
      size_t p = k0_basis_coords.pivots()[i];
      if (sgn(x[p]) == 0) continue;
      Rat c = x[p];
      for (size_t j = 0; j < x.size(); ++j) {
        if (sgn(k0_basis_coords.basis().at(i, j)) == 0) continue;
        t = c * k0_basis_coords.basis().at(i, j);
        x[j] -= t;
      }
    }
    std::vector<Rat> out(section.size());
    for (size_t j = 0; j < section.size(); ++j) out[j] = x[section[j]];
    return out;
  }

  // section coordinates -> basis coordinates of the coset representative
  std::vector<Rat> include(const std::vector<Rat>& section_coords) const {
    std::vector<Rat> x(ambient.basis.rows, Rat(0));
    for (size_t j = 0; j < section.size(); ++j) x[section[j]] = section_coords[j];
    return x;
  }

  // c_m of the coset representative; well-defined exactly for gcd(m,N)=1
  Rat coefficient(const std::vector<Rat>& section_coords, long m) const {
    if (std::gcd(m, ambient.level) != 1)
      fail_usage("quotient coefficients need gcd(m, N) = 1");
    if (m > ambient.prec)
      fail_data("insufficient-precision", "quotient coefficient out of window");
    std::vector<Rat> x = include(section_coords);
    Rat out(0);
    for (size_t j = 0; j < x.size(); ++j)
      if (sgn(x[j]) != 0) out += x[j] * ambient.basis.at(j, m);
    return out;
  }
};

inline QuotientSpace quotient_space(const SpaceBasis& s) {
  QuotientSpace q;
  q.ambient = s;
  q.k0 = k0_subspace(s);
  // coefficient rows of K_0 lie in the row space of S; their coordinates
  // are the entries at S's pivot columns
  RatMatrix coords(q.k0.dim(), s.basis.rows);
  for (size_t i = 0; i < q.k0.dim(); ++i)
    for (size_t j = 0; j < s.basis.rows; ++j)
      coords.at(i, j) = q.k0.basis().at(i, s.pivots[j]);
  q.k0_basis_coords = Subspace::from_rows(s.basis.rows, coords);
  std::vector<bool> is_pivot(s.basis.rows, false);
  for (size_t p : q.k0_basis_coords.pivots()) is_pivot[p] = true;
  for (size_t j = 0; j < s.basis.rows; ++j)
    if (!is_pivot[j]) q.section.push_back(j);
  q.section_forms = RatMatrix(q.section.size(), s.prec + 1);
  for (size_t j = 0; j < q.section.size(); ++j)
    for (long m = 0; m <= s.prec; ++m)
      q.section_forms.at(j, m) = s.basis.at(q.section[j], m);
  return q;
}

// ---- JSON serialization of reports ----

inline nlohmann::json subspace_to_json(const Subspace& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (size_t i = 0; i < s.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (size_t j = 0; j < s.ambient_dim(); ++j)
      row.push_back(format_rat(s.basis().at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::json theorem1_report_to_json(const Theorem1Report& r) {
  nlohmann::json j{{"k", r.weight},
                   {"N", r.level},
                   {"prec", r.prec},
                   {"dim_K0", r.dim_k0},
                   {"dim_oldsum", r.dim_oldsum},
                   {"equal", r.equal},
                   {"trivial_inclusion", r.trivial_inclusion},
                   {"pass", r.pass()},
                   {"bases", {{"K0", subspace_to_json(r.k0)},
                              {"oldsum", subspace_to_json(r.oldsum)}}}};
  if (r.mk_dim_k0 >= 0) {
    j["mk_variant"] = {{"dim_K0", r.mk_dim_k0},
                       {"dim_oldsum", r.mk_dim_oldsum},
                       {"equal", r.mk_equal}};
  }
  return j;
}

}  // namespace modforms
