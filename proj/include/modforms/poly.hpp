#pragma once

#include <string>
#include <utility>
#include <vector>

#include "modforms/rat.hpp"
#include "modforms/rat_matrix.hpp"

namespace modforms {

// Polynomial over Q, coefficients ascending. The zero polynomial is the
// empty vector; every stored polynomial has a nonzero leading coefficient.
using Poly = std::vector<Rat>;

inline void poly_trim(Poly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

inline long poly_deg(const Poly& p) { return static_cast<long>(p.size()) - 1; }

inline Poly poly_from(std::initializer_list<long> coeffs) {
  Poly p;
  for (long c : coeffs) p.push_back(Rat(c));
  poly_trim(p);
  return p;
}

inline Poly poly_add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  poly_trim(r);
  return r;
}

inline Poly poly_sub(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  poly_trim(r);
  return r;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1);
  Rat t;
  for (size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      if (sgn(b[j]) == 0) continue;
      t = a[i] * b[j];
      r[i + j] += t;
    }
  }
  poly_trim(r);
  return r;
}

inline Poly poly_scale(const Poly& a, const Rat& c) {
  if (sgn(c) == 0) return {};
  Poly r = a;
  for (Rat& e : r) e *= c;
  return r;
}

inline std::pair<Poly, Poly> poly_divrem(const Poly& a, const Poly& b) {
  if (b.empty()) fail_data("poly-division-by-zero", "poly_divrem");
  Poly rem = a, quot;
  long db = poly_deg(b);
  if (poly_deg(a) >= db) quot.assign(a.size() - b.size() + 1, Rat(0));
  Rat lead_inv = 1 / b.back();
  Rat t;
  while (poly_deg(rem) >= db) {
    long k = poly_deg(rem) - db;
    Rat c = rem.back() * lead_inv;
    quot[k] = c;
    for (long i = 0; i <= db; ++i) {
      if (sgn(b[i]) == 0) continue;
      t = c * b[i];
      rem[k + i] -= t;
    }
    poly_trim(rem);
  }
  poly_trim(quot);
  return {std::move(quot), std::move(rem)};
}

inline Poly poly_monic(const Poly& p) {
  if (p.empty()) return p;
  return poly_scale(p, 1 / p.back());
}

inline Poly poly_gcd(Poly a, Poly b) {
  while (!b.empty()) {
    Poly r = poly_divrem(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(a);
}

inline Poly poly_derivative(const Poly& p) {
  if (p.size() <= 1) return {};
  Poly d(p.size() - 1);
  for (size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * Rat(static_cast<long>(i));
  poly_trim(d);
  return d;
}

inline bool poly_is_squarefree(const Poly& p) {
  if (p.empty()) return false;
  return poly_deg(poly_gcd(p, poly_derivative(p))) == 0;
}

// Yun's algorithm: monic input, returns monic squarefree parts with their
// multiplicities, product over (part^mult) recovering the input.
inline std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& f) {
  std::vector<std::pair<Poly, int>> out;
  if (poly_deg(f) < 1) return out;
  Poly fp = poly_derivative(f);
  Poly g = poly_gcd(f, fp);
  if (poly_deg(g) == 0) {
    out.emplace_back(poly_monic(f), 1);
    return out;
  }
  Poly w = poly_divrem(f, g).first;
  Poly y = poly_divrem(fp, g).first;
  Poly z = poly_sub(y, poly_derivative(w));
  int i = 1;
  while (poly_deg(w) > 0) {
    Poly h = poly_gcd(w, z);
    if (poly_deg(h) > 0) out.emplace_back(h, i);
    w = poly_divrem(w, h).first;
    y = poly_divrem(z, h).first;
    z = poly_sub(y, poly_derivative(w));
    ++i;
  }
  return out;
}

// Horner evaluation of g at a square matrix.
inline RatMatrix poly_eval_matrix(const Poly& g, const RatMatrix& m) {
  size_t n = m.rows;
  RatMatrix r(n, n);
  if (g.empty()) return r;
  for (size_t i = 0; i < n; ++i) r.at(i, i) = g.back();
  for (long k = poly_deg(g) - 1; k >= 0; --k) {
    r = matmul(r, m);
    for (size_t i = 0; i < n; ++i) r.at(i, i) += g[k];
  }
  return r;
}

inline RatMatrix matrix_pow(const RatMatrix& m, unsigned long e) {
  RatMatrix r = RatMatrix::identity(m.rows);
  RatMatrix b = m;
  while (e) {
    if (e & 1) r = matmul(r, b);
    if ((e >>= 1)) b = matmul(b, b);
  }
  return r;
}

// Total order used for deterministic report sorting.
inline int poly_cmp(const Poly& a, const Poly& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = a.size(); i-- > 0;) {
    int c = cmp(a[i], b[i]);
    if (c != 0) return c;
  }
  return 0;
}

inline std::vector<std::string> poly_to_strings(const Poly& p) {
  std::vector<std::string> out;
  out.reserve(p.size());
  for (const Rat& c : p) out.push_back(format_rat(c));
  return out;
}

}  // namespace modforms
