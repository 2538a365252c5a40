#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "modforms/rat_matrix.hpp"

namespace modforms {

// A subspace of Q^n stored as the reduced row echelon basis of its row
// space. The representation is canonical: two subspaces are equal iff
// their basis matrices compare equal entry by entry.
class Subspace {
 public:
  Subspace() = default;

  static Subspace from_rows(size_t ambient_dim, const RatMatrix& rows) {
    if (rows.rows > 0 && rows.cols != ambient_dim)
      fail_data("shape-mismatch", "subspace rows wider than ambient");
    Subspace s;
    s.ambient_ = ambient_dim;
    auto [basis, pivots] = rref(rows.rows == 0 ? RatMatrix(0, ambient_dim)
                                               : rows);
    basis.cols = ambient_dim;
    s.basis_ = std::move(basis);
    s.pivots_ = std::move(pivots);
    return s;
  }

  static Subspace zero(size_t ambient_dim) {
    return from_rows(ambient_dim, RatMatrix(0, ambient_dim));
  }

  static Subspace full(size_t ambient_dim) {
    return from_rows(ambient_dim, RatMatrix::identity(ambient_dim));
  }

  size_t ambient_dim() const { return ambient_; }
  size_t dim() const { return basis_.rows; }
  const RatMatrix& basis() const { return basis_; }
  const std::vector<size_t>& pivots() const { return pivots_; }

  std::vector<Rat> basis_row(size_t i) const {
    std::vector<Rat> v(ambient_);
    for (size_t j = 0; j < ambient_; ++j) v[j] = basis_.at(i, j);
    return v;
  }

  // Coordinates of v in this basis when v lies in the subspace. Because
  // the basis is in RREF, the coordinates are just v's pivot entries.
  // Returns false if v is not in the subspace.
  bool coordinates(const std::vector<Rat>& v, std::vector<Rat>* coords) const {
    if (v.size() != ambient_)
      fail_data("shape-mismatch", "vector/ambient mismatch");
    std::vector<Rat> c(basis_.rows);
    for (size_t i = 0; i < basis_.rows; ++i) c[i] = v[pivots_[i]];
    // residual = v - sum c_i * row_i must vanish
    std::vector<Rat> res = v;
    Rat t;
    for (size_t i = 0; i < basis_.rows; ++i) {
      if (sgn(c[i]) == 0) continue;
      for (size_t j = 0; j < ambient_; ++j) {
        if (sgn(basis_.at(i, j)) == 0) continue;
        t = c[i] * basis_.at(i, j);
        res[j] -= t;
      }
    }
    for (const Rat& e : res)
      if (sgn(e) != 0) return false;
    if (coords) *coords = std::move(c);
    return true;
  }

  bool contains(const std::vector<Rat>& v) const {
    return coordinates(v, nullptr);
  }

  bool contains(const Subspace& other) const {
    if (other.ambient_ != ambient_)
      fail_data("ambient-mismatch", "subspace ambient dims differ");
    for (size_t i = 0; i < other.dim(); ++i)
      if (!contains(other.basis_row(i))) return false;
    return true;
  }

  bool operator==(const Subspace& o) const {
    return ambient_ == o.ambient_ && basis_ == o.basis_;
  }

 private:
  size_t ambient_ = 0;
  RatMatrix basis_;  // RREF, exactly dim() rows
  std::vector<size_t> pivots_;
};

// Right null space of m: all v with m*v = 0.
inline Subspace kernel(const RatMatrix& m) {
  auto [r, pivots] = rref(m);
  std::vector<bool> is_pivot(m.cols, false);
  for (size_t p : pivots) is_pivot[p] = true;
  size_t nfree = m.cols - pivots.size();
  RatMatrix rows(nfree, m.cols);
  size_t row = 0;
  for (size_t f = 0; f < m.cols; ++f) {
    if (is_pivot[f]) continue;
    rows.at(row, f) = 1;
    for (size_t i = 0; i < pivots.size(); ++i)
      rows.at(row, pivots[i]) = -r.at(i, f);
    ++row;
  }
  return Subspace::from_rows(m.cols, rows);
}

inline Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim())
    fail_data("ambient-mismatch", "subspace_sum ambient dims differ");
  return Subspace::from_rows(a.ambient_dim(), vstack(a.basis(), b.basis()));
}

// Zassenhaus: row reduce [A|A; B|0]; rows whose left half vanished carry
// a basis of the intersection in their right half.
inline Subspace subspace_intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim())
    fail_data("ambient-mismatch", "subspace_intersect ambient dims differ");
  size_t n = a.ambient_dim();
  RatMatrix block(a.dim() + b.dim(), 2 * n);
  for (size_t i = 0; i < a.dim(); ++i)
    for (size_t j = 0; j < n; ++j) {
      block.at(i, j) = a.basis().at(i, j);
      block.at(i, n + j) = a.basis().at(i, j);
    }
  for (size_t i = 0; i < b.dim(); ++i)
    for (size_t j = 0; j < n; ++j) block.at(a.dim() + i, j) = b.basis().at(i, j);
  auto [r, pivots] = rref(std::move(block));
  RatMatrix rows(0, n);
  for (size_t i = 0; i < r.rows; ++i) {
    bool left_zero = true;
    for (size_t j = 0; j < n && left_zero; ++j)
      if (sgn(r.at(i, j)) != 0) left_zero = false;
    if (!left_zero) continue;
    RatMatrix one(1, n);
    for (size_t j = 0; j < n; ++j) one.at(0, j) = r.at(i, n + j);
    rows = vstack(rows, one);
  }
  return Subspace::from_rows(n, rows);
}

// Image of a subspace under the operator m (acting on column vectors):
// each basis row v maps to v * m^T.
inline Subspace subspace_image(const RatMatrix& m, const Subspace& s) {
  if (m.cols != s.ambient_dim())
    fail_data("shape-mismatch", "operator/subspace mismatch");
  RatMatrix rows(s.dim(), m.rows);
  for (size_t i = 0; i < s.dim(); ++i) {
    std::vector<Rat> y = matvec(m, s.basis_row(i));
    for (size_t j = 0; j < m.rows; ++j) rows.at(i, j) = y[j];
  }
  return Subspace::from_rows(m.rows, rows);
}

}  // namespace modforms
