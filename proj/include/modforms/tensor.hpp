#pragma once

#include <vector>

#include "modforms/subspace.hpp"

namespace modforms {

// Kronecker product with the row-major index convention: component
// (i (x) j) of a (x) b sits at flat index i*cols(b) + j.
inline RatMatrix kron(const RatMatrix& a, const RatMatrix& b) {
  RatMatrix r(a.rows * b.rows, a.cols * b.cols);
  Rat t;
  for (size_t ia = 0; ia < a.rows; ++ia)
    for (size_t ja = 0; ja < a.cols; ++ja) {
      const Rat& av = a.at(ia, ja);
      if (sgn(av) == 0) continue;
      for (size_t ib = 0; ib < b.rows; ++ib)
        for (size_t jb = 0; jb < b.cols; ++jb) {
          const Rat& bv = b.at(ib, jb);
          if (sgn(bv) == 0) continue;
          t = av * bv;
          r.at(ia * b.rows + ib, ja * b.cols + jb) = t;
        }
    }
  return r;
}

// Ordered factor spaces with one endomorphism each.
struct TensorFactors {
  struct Factor {
    size_t dim;
    RatMatrix endo;  // square, size dim
  };
  std::vector<Factor> factors;

  void validate() const {
    if (factors.empty()) fail_usage("TensorFactors: empty factor list");
    for (const Factor& f : factors)
      if (f.endo.rows != f.dim || f.endo.cols != f.dim)
        fail_data("shape-mismatch", "factor endomorphism size mismatch");
  }

  size_t product_dim() const {
    size_t d = 1;
    for (const Factor& f : factors) d *= f.dim;
    return d;
  }
};

// Ordered factor spaces with a pair of subspaces each.
struct TensorSubspacePair {
  struct Factor {
    size_t dim;
    Subspace vprime;
    Subspace vdoubleprime;
  };
  std::vector<Factor> factors;

  void validate() const {
    if (factors.empty()) fail_usage("TensorSubspacePair: empty factor list");
    for (const Factor& f : factors)
      if (f.vprime.ambient_dim() != f.dim ||
          f.vdoubleprime.ambient_dim() != f.dim)
        fail_data("shape-mismatch", "subspace ambient dim mismatch");
  }
};

namespace detail {

// Subspace of the product space spanned by all Kronecker products of one
// basis row per factor.
inline Subspace kron_span(const std::vector<const Subspace*>& parts) {
  size_t total = 1;
  for (const Subspace* s : parts) total *= s->ambient_dim();
  for (const Subspace* s : parts)
    if (s->dim() == 0) return Subspace::zero(total);
  RatMatrix rows(1, 1);
  rows.at(0, 0) = 1;
  for (const Subspace* s : parts) rows = kron(rows, s->basis());
  return Subspace::from_rows(total, rows);
}

}  // namespace detail

// Right-hand side of the kernel lemma: sum over i of
// V_1 (x) ... (x) ker(f_i) (x) ... (x) V_n, assembled with Kronecker
// lifts of each kernel against full standard bases of the other factors.
inline Subspace lemma_ker_rhs(const TensorFactors& t) {
  t.validate();
  size_t total = t.product_dim();
  Subspace acc = Subspace::zero(total);
  for (size_t i = 0; i < t.factors.size(); ++i) {
    Subspace ker_i = kernel(t.factors[i].endo);
    std::vector<Subspace> parts;
    parts.reserve(t.factors.size());
    for (size_t j = 0; j < t.factors.size(); ++j) {
      if (j == i)
        parts.push_back(ker_i);
      else
        parts.push_back(Subspace::full(t.factors[j].dim));
    }
    std::vector<const Subspace*> ptrs;
    for (const Subspace& s : parts) ptrs.push_back(&s);
    acc = subspace_sum(acc, detail::kron_span(ptrs));
  }
  return acc;
}

// Kernel of the full Kronecker product of all factor endomorphisms; the
// lemma asserts this equals lemma_ker_rhs.
inline Subspace lemma_ker_lhs(const TensorFactors& t) {
  t.validate();
  RatMatrix prod(1, 1);
  prod.at(0, 0) = 1;
  for (const auto& f : t.factors) prod = kron(prod, f.endo);
  return kernel(prod);
}

struct LemmaMainSides {
  Subspace lhs;
  Subspace rhs;
};

// Both sides of the intersection lemma, computed independently:
//   lhs = (sum_i V_1 (x)..(x) V'_i (x)..(x) V_n) `intersect` (V''_1 (x)..(x) V''_n)
//   rhs = sum_i V''_1 (x)..(x) (V'_i `intersect` V''_i) (x)..(x) V''_n
inline LemmaMainSides lemma_main_rhs(const TensorSubspacePair& t) {
  t.validate();
  size_t n = t.factors.size();
  size_t total = 1;
  for (const auto& f : t.factors) total *= f.dim;

  Subspace sum_lhs = Subspace::zero(total);
  for (size_t i = 0; i < n; ++i) {
    std::vector<Subspace> parts;
    for (size_t j = 0; j < n; ++j)
      parts.push_back(j == i ? t.factors[j].vprime
                             : Subspace::full(t.factors[j].dim));
    std::vector<const Subspace*> ptrs;
    for (const Subspace& s : parts) ptrs.push_back(&s);
    sum_lhs = subspace_sum(sum_lhs, detail::kron_span(ptrs));
  }
  std::vector<const Subspace*> dbl;
  for (const auto& f : t.factors) dbl.push_back(&f.vdoubleprime);
  Subspace lhs = subspace_intersect(sum_lhs, detail::kron_span(dbl));

  Subspace rhs = Subspace::zero(total);
  for (size_t i = 0; i < n; ++i) {
    Subspace mid =
        subspace_intersect(t.factors[i].vprime, t.factors[i].vdoubleprime);
    std::vector<Subspace> parts;
    for (size_t j = 0; j < n; ++j)
      parts.push_back(j == i ? mid : t.factors[j].vdoubleprime);
    std::vector<const Subspace*> ptrs;
    for (const Subspace& s : parts) ptrs.push_back(&s);
    rhs = subspace_sum(rhs, detail::kron_span(ptrs));
  }
  return {lhs, rhs};
}

}  // namespace modforms
