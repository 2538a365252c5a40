#pragma once

#include <initializer_list>
#include <vector>

#include "modforms/rng.hpp"
#include "modforms/rat_matrix.hpp"
#include "modforms/subspace.hpp"

namespace testutil {

using modforms::Rat;
using modforms::RatMatrix;
using modforms::Rng;
using modforms::Subspace;

inline RatMatrix mat(std::initializer_list<std::initializer_list<long>> rows) {
  size_t r = rows.size();
  size_t c = r == 0 ? 0 : rows.begin()->size();
  RatMatrix m(r, c);
  size_t i = 0;
  for (const auto& row : rows) {
    size_t j = 0;
    for (long v : row) m.at(i, j++) = Rat(v);
    ++i;
  }
  return m;
}

inline RatMatrix diag(std::initializer_list<long> entries) {
  RatMatrix m(entries.size(), entries.size());
  size_t i = 0;
  for (long v : entries) {
    m.at(i, i) = Rat(v);
    ++i;
  }
  return m;
}

inline Subspace span(size_t ambient,
                     std::initializer_list<std::initializer_list<long>> rows) {
  size_t r = rows.size();
  RatMatrix m(r, ambient);
  size_t i = 0;
  for (const auto& row : rows) {
    size_t j = 0;
    for (long v : row) m.at(i, j++) = Rat(v);
    ++i;
  }
  return Subspace::from_rows(ambient, m);
}

inline RatMatrix random_matrix(Rng& rng, size_t r, size_t c, long lo, long hi) {
  RatMatrix m(r, c);
  for (size_t i = 0; i < r * c; ++i) m.entries[i] = Rat(rng.range(lo, hi));
  return m;
}

inline Subspace random_subspace(Rng& rng, size_t ambient, long lo = -3,
                                long hi = 3) {
  size_t nrows = static_cast<size_t>(rng.range(0, static_cast<long>(ambient)));
  return Subspace::from_rows(ambient, random_matrix(rng, nrows, ambient, lo, hi));
}

}  // namespace testutil
