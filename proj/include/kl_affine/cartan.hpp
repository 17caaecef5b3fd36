#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kl_affine/errors.hpp"
#include "kl_affine/scalar.hpp"

namespace kl_affine {

/// Integer coordinates with respect to the simple roots.
using RootVec = std::vector<std::int64_t>;

inline std::int64_t height(const RootVec& v) { return std::accumulate(v.begin(), v.end(), std::int64_t{0}); }

inline bool is_nonnegative(const RootVec& v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x >= 0; });
}

inline bool is_zero(const RootVec& v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

/// Sign of a root vector: +1 if all coordinates >= 0, -1 if all <= 0, 0 otherwise (or zero vector).
inline int root_sign(const RootVec& v) {
  bool pos = false, neg = false;
  for (auto x : v) {
    pos |= x > 0;
    neg |= x < 0;
  }
  if (pos && !neg) return 1;
  if (neg && !pos) return -1;
  return 0;
}

inline RootVec operator+(RootVec a, const RootVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}
inline RootVec operator-(RootVec a, const RootVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}
inline RootVec operator-(RootVec a) {
  for (auto& x : a) x = -x;
  return a;
}
inline RootVec operator*(std::int64_t k, RootVec a) {
  for (auto& x : a) x *= k;
  return a;
}

/// Cartan data of an untwisted affine type X_n^(1) (index 0 is the affine node) or of a finite type.
///
/// Conventions: `cartan(i, j) = <h_i, alpha_j>`, `(alpha_i, alpha_j) = d_i * cartan(i, j)`,
/// `d_i = m_i^vee / m_i` so that `<c, lambda> = (delta, lambda)`. Long roots have d = 1.
class CartanData {
 public:
  const std::string& name() const { return name_; }
  bool affine() const { return affine_; }
  /// |I|.
  int rank() const { return static_cast<int>(matrix_.size()); }
  /// Number of coordinates of a weight: |I| + 1 for affine types (the extra one is <d, .>), |I| otherwise.
  int weight_dim() const { return rank() + (affine_ ? 1 : 0); }

  std::int64_t cartan(int i, int j) const { return matrix_[i][j]; }
  const std::vector<std::vector<std::int64_t>>& matrix() const { return matrix_; }
  const Rational& symmetrizer(int i) const { return sym_[i]; }
  /// delta = sum m_i alpha_i (affine only).
  const RootVec& delta() const { return delta_; }
  /// c = sum m_i^vee h_i (affine only).
  const std::vector<std::int64_t>& c_coeffs() const { return c_; }
  std::int64_t delta_height() const { return height(delta_); }
  /// dim g_{k delta}; constant in k for untwisted types.
  int imaginary_multiplicity() const { return affine_ ? rank() - 1 : 0; }
  std::int64_t dual_coxeter_number() const { return std::accumulate(c_.begin(), c_.end(), std::int64_t{0}); }

  /// Roots of the underlying finite root system, embedded with coordinate 0 at the affine node.
  /// For finite types this is the full root system.
  const std::vector<RootVec>& classical_roots() const { return classical_; }

  /// (alpha, beta) for root-lattice vectors.
  Rational form(const RootVec& a, const RootVec& b) const {
    Rational s = 0;
    for (int i = 0; i < rank(); ++i) {
      if (a[i] == 0) continue;
      Rational row = 0;
      for (int j = 0; j < rank(); ++j) row += matrix_[i][j] * b[j];
      s += a[i] * sym_[i] * row;
    }
    return s;
  }

  bool is_imaginary(const RootVec& v) const {
    if (!affine_ || is_zero(v)) return false;
    // proportional to delta (delta_0 = 1)
    const auto k = v[0];
    for (int i = 0; i < rank(); ++i)
      if (v[i] != k * delta_[i]) return false;
    return true;
  }

  /// Decomposes a real affine root as gamma + n delta with gamma classical (gamma_0 = 0).
  std::pair<RootVec, std::int64_t> split(const RootVec& v) const {
    if (!affine_) return {v, 0};
    const auto n = v[0];
    return {v - n * delta_, n};
  }

  RootVec simple_root(int i) const {
    RootVec v(rank(), 0);
    v[i] = 1;
    return v;
  }

  bool operator==(const CartanData& o) const { return name_ == o.name_ && matrix_ == o.matrix_ && affine_ == o.affine_; }

  /// Built-in table: "A1~", "A2~", ..., "G2~" for untwisted affine; "A2", "B3", ... for finite types.
  static CartanData from_type(const std::string& type);

  /// Override from a JSON description `{"name": .., "finite_cartan_matrix": [[..]], "affine": bool}`.
  static CartanData from_json(const nlohmann::json& j);
  static CartanData from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::UnknownType, "cannot open Cartan file " + path);
    return from_json(nlohmann::json::parse(in));
  }

  static CartanData build(std::string name, std::vector<std::vector<std::int64_t>> finite, bool affine);

 private:
  std::string name_;
  bool affine_ = false;
  std::vector<std::vector<std::int64_t>> matrix_;
  std::vector<Rational> sym_;
  RootVec delta_;
  std::vector<std::int64_t> c_;
  std::vector<RootVec> classical_;
};

namespace detail {

inline std::vector<std::vector<std::int64_t>> finite_cartan_matrix(char letter, int n) {
  std::vector<std::vector<std::int64_t>> a(n, std::vector<std::int64_t>(n, 0));
  for (int i = 0; i < n; ++i) a[i][i] = 2;
  auto link = [&](int i, int j) { a[i][j] = a[j][i] = -1; };
  switch (letter) {
    case 'A':
      for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
      break;
    case 'B':
      for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
      a[n - 1][n - 2] = -2;  // alpha_n short
      break;
    case 'C':
      for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
      a[n - 2][n - 1] = -2;  // alpha_n long
      break;
    case 'D':
      for (int i = 0; i + 2 < n; ++i) link(i, i + 1);
      link(n - 3, n - 1);
      break;
    case 'E':
      // Bourbaki: 1-3-4-5-6(-7-8), 2 attached to 4.
      link(0, 2);
      link(1, 3);
      link(2, 3);
      for (int i = 3; i + 1 < n; ++i) link(i, i + 1);
      break;
    case 'F':
      link(0, 1);
      link(2, 3);
      a[1][2] = -1;
      a[2][1] = -2;  // alpha_3, alpha_4 short
      break;
    case 'G':
      a[0][1] = -3;  // alpha_1 short
      a[1][0] = -1;
      break;
    default:
      throw Error(ErrorKind::UnknownType, std::string("unknown Cartan letter ") + letter);
  }
  return a;
}

inline std::vector<Rational> symmetrize(const std::vector<std::vector<std::int64_t>>& a) {
  const int n = static_cast<int>(a.size());
  std::vector<Rational> d(n, Rational(0));
  std::vector<int> stack;
  for (int start = 0; start < n; ++start) {
    if (d[start] != 0) continue;
    d[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < n; ++j) {
        if (i == j || a[i][j] == 0) continue;
        if (a[j][i] == 0) throw Error(ErrorKind::UnknownType, "Cartan matrix is not symmetrizable");
        Rational dj = d[i] * a[i][j] / a[j][i];
        if (d[j] == 0) {
          d[j] = dj;
          stack.push_back(j);
        } else if (d[j] != dj) {
          throw Error(ErrorKind::UnknownType, "Cartan matrix is not symmetrizable");
        }
      }
    }
  }
  Rational mx = *std::max_element(d.begin(), d.end());
  for (auto& x : d) x /= mx;
  return d;
}

/// All roots of a finite root system, by closure of the simple roots under simple reflections.
inline std::vector<RootVec> finite_roots(const std::vector<std::vector<std::int64_t>>& a) {
  const int n = static_cast<int>(a.size());
  std::set<RootVec> seen;
  std::vector<RootVec> queue;
  for (int i = 0; i < n; ++i) {
    RootVec v(n, 0);
    v[i] = 1;
    queue.push_back(v);
    seen.insert(v);
  }
  for (std::size_t k = 0; k < queue.size(); ++k) {
    const RootVec cur = queue[k];
    for (int i = 0; i < n; ++i) {
      std::int64_t p = 0;
      for (int j = 0; j < n; ++j) p += a[i][j] * cur[j];
      RootVec next = cur;
      next[i] -= p;
      if (seen.insert(next).second) {
        if (seen.size() > 100000) throw Error(ErrorKind::UnknownType, "Cartan matrix is not of finite type");
        queue.push_back(next);
      }
    }
  }
  std::vector<RootVec> roots(seen.begin(), seen.end());
  for (const auto& r : roots)
    if (root_sign(r) == 0) throw Error(ErrorKind::UnknownType, "Cartan matrix is not of finite type");
  return roots;
}

}  // namespace detail

inline CartanData CartanData::build(std::string name, std::vector<std::vector<std::int64_t>> finite, bool affine) {
  const int n = static_cast<int>(finite.size());
  if (n == 0) throw Error(ErrorKind::UnknownType, "empty Cartan matrix");
  for (const auto& row : finite)
    if (static_cast<int>(row.size()) != n) throw Error(ErrorKind::UnknownType, "Cartan matrix not square");
  CartanData cd;
  cd.name_ = std::move(name);
  cd.affine_ = affine;
  const auto fin_sym = detail::symmetrize(finite);
  const auto fin_roots = detail::finite_roots(finite);
  if (!affine) {
    cd.matrix_ = finite;
    cd.sym_ = fin_sym;
    cd.classical_ = fin_roots;
    return cd;
  }
  // Highest root theta: the positive root of maximal height (unique for irreducible types).
  RootVec theta = fin_roots.front();
  for (const auto& r : fin_roots)
    if (height(r) > height(theta)) theta = r;
  for (int i = 0; i < n; ++i)
    if (theta[i] <= 0) throw Error(ErrorKind::UnknownType, "finite Cartan matrix must be irreducible for affinization");
  const int m = n + 1;
  cd.matrix_.assign(m, std::vector<std::int64_t>(m, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cd.matrix_[i + 1][j + 1] = finite[i][j];
  cd.matrix_[0][0] = 2;
  for (int j = 0; j < n; ++j) {
    // <h_0, alpha_j> = -(theta, alpha_j) with theta long, (theta, theta) = 2
    Rational t = 0;
    for (int k = 0; k < n; ++k) t += theta[k] * fin_sym[k] * finite[k][j];
    if (!is_integer(t)) throw Error(ErrorKind::UnknownType, "non-integral affine extension");
    cd.matrix_[0][j + 1] = -t.get_num().get_si();
    std::int64_t s = 0;
    for (int k = 0; k < n; ++k) s += finite[j][k] * theta[k];
    cd.matrix_[j + 1][0] = -s;
  }
  cd.sym_.assign(m, Rational(1));
  for (int i = 0; i < n; ++i) cd.sym_[i + 1] = fin_sym[i];
  cd.delta_.assign(m, 1);
  cd.c_.assign(m, 1);
  for (int i = 0; i < n; ++i) {
    cd.delta_[i + 1] = theta[i];
    Rational cv = theta[i] * fin_sym[i];
    if (!is_integer(cv)) throw Error(ErrorKind::UnknownType, "non-integral central element");
    cd.c_[i + 1] = cv.get_num().get_si();
  }
  for (const auto& r : fin_roots) {
    RootVec e(m, 0);
    for (int i = 0; i < n; ++i) e[i + 1] = r[i];
    cd.classical_.push_back(std::move(e));
  }
  return cd;
}

inline CartanData CartanData::from_type(const std::string& type) {
  static const std::regex re("^([A-G])([0-9]+)(~?)$");
  std::smatch m;
  if (!std::regex_match(type, m, re)) throw Error(ErrorKind::UnknownType, "unrecognized type string '" + type + "'");
  const char letter = m[1].str()[0];
  const int n = std::stoi(m[2].str());
  const bool affine = m[3].length() == 1;
  bool ok = false;
  switch (letter) {
    case 'A': ok = n >= 1; break;
    case 'B': ok = n >= 2; break;
    case 'C': ok = n >= 2; break;
    case 'D': ok = n >= 4; break;
    case 'E': ok = n >= 6 && n <= 8; break;
    case 'F': ok = n == 4; break;
    case 'G': ok = n == 2; break;
    default: break;
  }
  if (!ok) throw Error(ErrorKind::UnknownType, "unsupported type '" + type + "'");
  return build(type, detail::finite_cartan_matrix(letter, n), affine);
}

inline CartanData CartanData::from_json(const nlohmann::json& j) {
  try {
    auto mat = j.at("finite_cartan_matrix").get<std::vector<std::vector<std::int64_t>>>();
    return build(j.value("name", std::string("custom")), std::move(mat), j.value("affine", true));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::UnknownType, std::string("bad Cartan description: ") + e.what());
  }
}

}  // namespace kl_affine
