#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "kl_affine/scalar.hpp"

namespace kl_affine::linalg {

using RatMatrix = std::vector<std::vector<Rational>>;
using RatVector = std::vector<Rational>;

/// Reduced row echelon form in place; returns the pivot column of each nonzero row.
inline std::vector<int> rref(RatMatrix& m, int cols) {
  std::vector<int> pivots;
  int row = 0;
  const int rows = static_cast<int>(m.size());
  for (int col = 0; col < cols && row < rows; ++col) {
    int p = row;
    while (p < rows && m[p][col] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[row]);
    const Rational inv = 1 / m[row][col];
    for (auto& x : m[row]) x *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == row || m[r][col] == 0) continue;
      const Rational f = m[r][col];
      for (std::size_t c = 0; c < m[r].size(); ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

/// Solves A x = b. Free variables are set to `free_value(index)`. Returns nullopt if inconsistent.
template <class FreeValue>
std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b, int cols, FreeValue free_value) {
  RatMatrix aug = a;
  for (std::size_t r = 0; r < aug.size(); ++r) aug[r].push_back(b[r]);
  const auto pivots = rref(aug, cols);
  for (std::size_t r = pivots.size(); r < aug.size(); ++r)
    if (aug[r][cols] != 0) return std::nullopt;
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[c] = true;
  RatVector x(cols, Rational(0));
  for (int c = 0; c < cols; ++c)
    if (!is_pivot[c]) x[c] = free_value(c);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    Rational v = aug[r][cols];
    for (int c = 0; c < cols; ++c)
      if (!is_pivot[c]) v -= aug[r][c] * x[c];
    x[pivots[r]] = v;
  }
  return x;
}

inline std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b, int cols) {
  return solve(a, b, cols, [](int) { return Rational(0); });
}

/// Rank and determinant by fraction-free (Bareiss) elimination after clearing row denominators.
struct RankDet {
  int rank = 0;
  Rational det = 0;  // meaningful for square matrices only
};

inline RankDet rank_and_det(const RatMatrix& m) {
  const int rows = static_cast<int>(m.size());
  if (rows == 0) return {0, Rational(1)};
  const int cols = static_cast<int>(m[0].size());
  std::vector<std::vector<BigInt>> a(rows, std::vector<BigInt>(cols));
  Rational scale = 1;  // det(original) = det(integer matrix) / scale
  for (int r = 0; r < rows; ++r) {
    BigInt l = 1;
    for (const auto& x : m[r]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    for (int c = 0; c < cols; ++c) a[r][c] = Rational(m[r][c] * l).get_num();
    scale *= l;
  }
  int sign = 1;
  BigInt prev = 1;
  int rank = 0;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    if (p != r) {
      std::swap(a[p], a[r]);
      sign = -sign;
    }
    for (int i = r + 1; i < rows; ++i) {
      for (int j = c + 1; j < cols; ++j) {
        a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]);
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
    ++rank;
  }
  RankDet out;
  out.rank = rank;
  if (rows == cols) out.det = rank == rows ? Rational(BigInt(prev * sign)) / scale : Rational(0);
  return out;
}

}  // namespace kl_affine::linalg
