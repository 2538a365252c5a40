#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "modforms/errors.hpp"
#include "modforms/rat.hpp"

namespace modforms {

// Dense row-major matrix over the rationals. Values are immutable by
// convention: every operation returns a fresh matrix.
struct RatMatrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<Rat> entries;  // rows * cols, row-major

  RatMatrix() = default;
  RatMatrix(size_t r, size_t c) : rows(r), cols(c), entries(r * c) {}

  Rat& at(size_t i, size_t j) { return entries[i * cols + j]; }
  const Rat& at(size_t i, size_t j) const { return entries[i * cols + j]; }

  static RatMatrix identity(size_t n) {
    RatMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  bool is_zero() const {
    for (const Rat& e : entries)
      if (sgn(e) != 0) return false;
    return true;
  }

  bool operator==(const RatMatrix& o) const {
    return rows == o.rows && cols == o.cols && entries == o.entries;
  }
};

inline RatMatrix matmul(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols != b.rows) fail_data("shape-mismatch", "matmul shapes disagree");
  RatMatrix c(a.rows, b.cols);
  Rat t;
  for (size_t i = 0; i < a.rows; ++i)
    for (size_t k = 0; k < a.cols; ++k) {
      const Rat& aik = a.at(i, k);
      if (sgn(aik) == 0) continue;
      for (size_t j = 0; j < b.cols; ++j) {
        const Rat& bkj = b.at(k, j);
        if (sgn(bkj) == 0) continue;
        t = aik * bkj;
        c.at(i, j) += t;
      }
    }
  return c;
}

inline RatMatrix transpose(const RatMatrix& m) {
  RatMatrix t(m.cols, m.rows);
  for (size_t i = 0; i < m.rows; ++i)
    for (size_t j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
  return t;
}

inline RatMatrix vstack(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows == 0) return b;
  if (b.rows == 0) return a;
  if (a.cols != b.cols) fail_data("shape-mismatch", "vstack widths disagree");
  RatMatrix c(a.rows + b.rows, a.cols);
  c.entries = a.entries;
  c.entries.insert(c.entries.end(), b.entries.begin(), b.entries.end());
  return c;
}

inline RatMatrix scale(const RatMatrix& m, const Rat& c) {
  RatMatrix out = m;
  for (Rat& e : out.entries) e *= c;
  return out;
}

inline RatMatrix add(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    fail_data("shape-mismatch", "matrix add shapes disagree");
  RatMatrix c = a;
  for (size_t i = 0; i < c.entries.size(); ++i) c.entries[i] += b.entries[i];
  return c;
}

inline RatMatrix sub(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    fail_data("shape-mismatch", "matrix sub shapes disagree");
  RatMatrix c = a;
  for (size_t i = 0; i < c.entries.size(); ++i) c.entries[i] -= b.entries[i];
  return c;
}

// Matrix times column vector.
inline std::vector<Rat> matvec(const RatMatrix& m, const std::vector<Rat>& x) {
  if (m.cols != x.size()) fail_data("shape-mismatch", "matvec shape disagrees");
  std::vector<Rat> y(m.rows);
  Rat t;
  for (size_t i = 0; i < m.rows; ++i)
    for (size_t j = 0; j < m.cols; ++j) {
      if (sgn(m.at(i, j)) == 0 || sgn(x[j]) == 0) continue;
      t = m.at(i, j) * x[j];
      y[i] += t;
    }
  return y;
}

// Row vector times matrix; used for pushing basis rows through operators.
inline std::vector<Rat> vecmat(const std::vector<Rat>& x,
                                  const RatMatrix& m) {
  if (m.rows != x.size())
    fail_data("shape-mismatch", "vecmat shape disagrees");
  std::vector<Rat> y(m.cols);
  Rat t;
  for (size_t i = 0; i < m.rows; ++i) {
    if (sgn(x[i]) == 0) continue;
    for (size_t j = 0; j < m.cols; ++j) {
      if (sgn(m.at(i, j)) == 0) continue;
      t = x[i] * m.at(i, j);
      y[j] += t;
    }
  }
  return y;
}

// Reduced row echelon form with pivot columns. The RREF of a matrix is
// unique, so the result is a canonical representative of the row space.
inline std::pair<RatMatrix, std::vector<size_t>> rref(RatMatrix m) {
  std::vector<size_t> pivots;
  size_t r = 0;
  Rat t;
  for (size_t c = 0; c < m.cols && r < m.rows; ++c) {
    size_t p = r;
    while (p < m.rows && sgn(m.at(p, c)) == 0) ++p;
    if (p == m.rows) continue;
    if (p != r)
      for (size_t j = c; j < m.cols; ++j) swap(m.at(p, j), m.at(r, j));
    Rat inv = 1 / m.at(r, c);
    for (size_t j = c; j < m.cols; ++j) m.at(r, j) *= inv;
    for (size_t i = 0; i < m.rows; ++i) {
      if (i == r || sgn(m.at(i, c)) == 0) continue;
      Rat f = m.at(i, c);
      for (size_t j = c; j < m.cols; ++j) {
        if (sgn(m.at(r, j)) == 0) continue;
        t = f * m.at(r, j);
        m.at(i, j) -= t;
      }
    }
    pivots.push_back(c);
    ++r;
  }
  // Drop the all-zero tail so the canonical form has exactly rank rows.
  m.entries.resize(r * m.cols);
  m.rows = r;
  return {std::move(m), std::move(pivots)};
}

inline size_t rank(const RatMatrix& m) { return rref(m).first.rows; }

}  // namespace modforms
