#pragma once

#include <deque>
#include <vector>

#include "modforms/charpoly.hpp"
#include "modforms/poly_factor.hpp"
#include "modforms/rng.hpp"
#include "modforms/subspace.hpp"

namespace modforms {

// Matrix of op restricted to an invariant subspace, in the coordinates of
// the subspace's echelon basis (column-vector convention).
inline RatMatrix restrict_operator(const RatMatrix& op, const Subspace& s) {
  if (op.rows != op.cols || op.cols != s.ambient_dim())
    fail_data("shape-mismatch", "restrict_operator shapes disagree");
  RatMatrix r(s.dim(), s.dim());
  for (size_t i = 0; i < s.dim(); ++i) {
    std::vector<Rat> y = matvec(op, s.basis_row(i));
    std::vector<Rat> c;
    if (!s.coordinates(y, &c))
      fail_data("not-invariant", "operator does not preserve subspace");
    for (size_t j = 0; j < s.dim(); ++j) r.at(j, i) = c[j];
  }
  return r;
}

// Rows are coordinate vectors w.r.t. block.basis(); returns the subspace
// they span in ambient coordinates.
inline Subspace block_rows_to_ambient(const RatMatrix& rows,
                                      const Subspace& block) {
  return Subspace::from_rows(block.ambient_dim(), matmul(rows, block.basis()));
}

// Splits a block along the primary decomposition of the restricted
// operator's characteristic polynomial. Returns {block} when the
// polynomial is a power of a single irreducible.
inline std::vector<Subspace> split_primary(const Subspace& block,
                                           const RatMatrix& restricted) {
  Poly cp = charpoly(restricted);
  auto facs = factor_monic_rational(cp);
  if (facs.size() <= 1) return {block};
  size_t n = block.dim();
  std::vector<Subspace> out;
  size_t total = 0;
  for (const auto& [g, mult] : facs) {
    size_t d = static_cast<size_t>(poly_deg(g)) * mult;
    Subspace piece_block;
    if (2 * d <= n) {
      RatMatrix gm = matrix_pow(poly_eval_matrix(g, restricted),
                                static_cast<unsigned long>(mult));
      piece_block = kernel(gm);
    } else {
      // complement route: the primary component is the image of h(R),
      // h = charpoly / g^mult
      Poly gpow = {Rat(1)};
      for (int i = 0; i < mult; ++i) gpow = poly_mul(gpow, g);
      Poly h = poly_divrem(cp, gpow).first;
      RatMatrix hm = poly_eval_matrix(h, restricted);
      piece_block = Subspace::from_rows(n, transpose(hm));
    }
    if (piece_block.dim() != d)
      fail_data("decomposition-internal", "primary component dim mismatch");
    out.push_back(block_rows_to_ambient(piece_block.basis(), block));
    total += d;
  }
  if (total != n)
    fail_data("decomposition-internal", "primary components do not fill block");
  return out;
}

namespace detail {

inline int subspace_cmp(const Subspace& a, const Subspace& b) {
  if (a.dim() != b.dim()) return a.dim() < b.dim() ? -1 : 1;
  if (a.pivots() != b.pivots()) return a.pivots() < b.pivots() ? -1 : 1;
  for (size_t i = 0; i < a.basis().entries.size(); ++i) {
    int c = cmp(a.basis().entries[i], b.basis().entries[i]);
    if (c != 0) return c;
  }
  return 0;
}

}  // namespace detail

// Common invariant subspaces of a family of pairwise commuting rational
// matrices. Each operator's characteristic polynomial splits the space
// into primary components; seeded random combinations then separate
// eigensystems that no single operator distinguishes. A block is final
// once its restricted characteristic polynomials (for the operators and
// for the drawn combinations) are powers of single irreducibles.
inline std::vector<Subspace> invariant_block_decomposition(
    const std::vector<RatMatrix>& ops, uint64_t seed = kDefaultSeed) {
  if (ops.empty()) fail_usage("invariant_block_decomposition: no operators");
  size_t n = ops[0].rows;
  for (const RatMatrix& op : ops)
    if (op.rows != n || op.cols != n)
      fail_data("shape-mismatch", "operators must be square of equal size");
  for (size_t i = 0; i < ops.size(); ++i)
    for (size_t j = i + 1; j < ops.size(); ++j)
      if (!(matmul(ops[i], ops[j]) == matmul(ops[j], ops[i])))
        fail_data("non-commuting", "operators do not commute");
  if (n == 0) return {};

  std::vector<Subspace> blocks = {Subspace::full(n)};
  for (const RatMatrix& op : ops) {
    std::vector<Subspace> next;
    for (const Subspace& b : blocks) {
      auto pieces = split_primary(b, restrict_operator(op, b));
      next.insert(next.end(), pieces.begin(), pieces.end());
    }
    blocks = std::move(next);
  }

  Rng rng(seed);
  std::deque<Subspace> work(blocks.begin(), blocks.end());
  std::vector<Subspace> done;
  while (!work.empty()) {
    Subspace b = work.front();
    work.pop_front();
    if (b.dim() <= 1) {
      done.push_back(b);
      continue;
    }
    bool resolved = false;
    for (int attempt = 0; attempt < 8 && !resolved; ++attempt) {
      RatMatrix combo(n, n);
      for (const RatMatrix& op : ops) {
        Rat c(rng.range(1, 64));
        for (size_t i = 0; i < n * n; ++i)
          combo.entries[i] += c * op.entries[i];
      }
      RatMatrix r = restrict_operator(combo, b);
      Poly cp = charpoly(r);
      auto facs = factor_monic_rational(cp);
      if (facs.size() > 1) {
        auto pieces = split_primary(b, r);
        for (auto& piece : pieces) work.push_back(std::move(piece));
        resolved = true;
      } else if (facs[0].second == 1) {
        // irreducible characteristic polynomial: the block cannot split
        done.push_back(b);
        resolved = true;
      }
      // otherwise a single repeated factor: either genuine multiplicity
      // or an unlucky draw, so draw again
    }
    if (!resolved) done.push_back(b);
  }

  std::sort(done.begin(), done.end(), [](const Subspace& a, const Subspace& b) {
    return detail::subspace_cmp(a, b) < 0;
  });
  size_t total = 0;
  RatMatrix stacked(0, n);
  for (const Subspace& b : done) {
    total += b.dim();
    stacked = vstack(stacked, b.basis());
  }
  if (total != n || rank(stacked) != n)
    fail_data("decomposition-internal", "blocks do not decompose the space");
  return done;
}

}  // namespace modforms
