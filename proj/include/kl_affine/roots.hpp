#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "kl_affine/cartan.hpp"
#include "kl_affine/linalg.hpp"
#include "kl_affine/weight.hpp"

namespace kl_affine {

/// Positivity of a real root gamma + n delta (gamma classical): n > 0, or n == 0 and gamma > 0.
inline bool is_positive_root(const RootVec& v) { return root_sign(v) > 0; }

/// All positive real roots of height <= max_height, sorted by (height, coordinates).
inline std::vector<RootVec> positive_real_roots(const CartanData& cd, std::int64_t max_height) {
  std::vector<RootVec> out;
  for (const auto& g : cd.classical_roots()) {
    if (!cd.affine()) {
      if (root_sign(g) > 0 && height(g) <= max_height) out.push_back(g);
      continue;
    }
    for (std::int64_t k = root_sign(g) > 0 ? 0 : 1;; ++k) {
      RootVec v = g + k * cd.delta();
      if (height(v) > max_height) break;
      out.push_back(std::move(v));
    }
  }
  std::sort(out.begin(), out.end(), [](const RootVec& a, const RootVec& b) {
    const auto ha = height(a), hb = height(b);
    return ha != hb ? ha < hb : a < b;
  });
  return out;
}

/// All positive roots (imaginary ones included, once each) of height <= max_height.
inline std::vector<RootVec> positive_imaginary_roots(const CartanData& cd, std::int64_t max_height) {
  std::vector<RootVec> out;
  if (!cd.affine()) return out;
  for (std::int64_t k = 1; k * cd.delta_height() <= max_height; ++k) out.push_back(k * cd.delta());
  return out;
}

/// Coordinates eta in Q with from_root(eta) == w, if w lies in the root lattice.
inline std::optional<RootVec> root_lattice_coords(const CartanData& cd, const Weight& w) {
  if (!w.is_rational()) return std::nullopt;
  const int n = cd.rank();
  linalg::RatMatrix a;
  linalg::RatVector b;
  for (int i = 0; i < n; ++i) {
    linalg::RatVector row(n);
    for (int j = 0; j < n; ++j) row[j] = Rational(cd.cartan(i, j));
    a.push_back(std::move(row));
    b.push_back(w.h(i).rational_part());
  }
  if (cd.affine()) {
    linalg::RatVector row(n, Rational(0));
    row[0] = 1;
    a.push_back(std::move(row));
    b.push_back(w.d().rational_part());
  }
  auto x = linalg::solve(a, b, n);
  if (!x) return std::nullopt;
  RootVec out(n);
  for (int i = 0; i < n; ++i) {
    if (!is_integer((*x)[i])) return std::nullopt;
    out[i] = (*x)[i].get_num().get_si();
  }
  if (!(Weight::from_root(cd, out) == w)) return std::nullopt;
  return out;
}

}  // namespace kl_affine
