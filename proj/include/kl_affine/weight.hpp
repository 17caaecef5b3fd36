#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kl_affine/cartan.hpp"
#include "kl_affine/errors.hpp"
#include "kl_affine/scalar.hpp"

namespace kl_affine {

/// A weight lambda in h^*, stored by its pairings <h_i, lambda> and (affine types) <d, lambda>.
class Weight {
 public:
  Weight() = default;
  explicit Weight(std::vector<Scalar> pairings, Scalar d = Scalar())
      : pairings_(std::move(pairings)), d_(std::move(d)) {}

  static Weight zero(const CartanData& cd) { return Weight(std::vector<Scalar>(cd.rank(), Scalar())); }

  /// rho with <h_i, rho> = 1 and <d, rho> = 0.
  static Weight rho(const CartanData& cd) { return Weight(std::vector<Scalar>(cd.rank(), Scalar(1))); }

  /// The root-lattice vector sum n_j alpha_j as a weight; <d, alpha_j> = [j == 0] for affine types.
  static Weight from_root(const CartanData& cd, const RootVec& n) {
    std::vector<Scalar> p(cd.rank());
    for (int i = 0; i < cd.rank(); ++i) {
      std::int64_t s = 0;
      for (int j = 0; j < cd.rank(); ++j) s += cd.cartan(i, j) * n[j];
      p[i] = Scalar(s);
    }
    return Weight(std::move(p), cd.affine() ? Scalar(n[0]) : Scalar());
  }

  int size() const { return static_cast<int>(pairings_.size()); }
  const Scalar& h(int i) const { return pairings_[i]; }
  const Scalar& d() const { return d_; }
  const std::vector<Scalar>& pairings() const { return pairings_; }

  bool is_rational() const {
    for (const auto& s : pairings_)
      if (!s.is_rational()) return false;
    return d_.is_rational();
  }

  /// Integer pairings with every h_i (membership in P).
  bool is_integral() const {
    for (const auto& s : pairings_)
      if (!s.is_integer()) return false;
    return true;
  }

  Weight& operator+=(const Weight& o) {
    for (int i = 0; i < size(); ++i) pairings_[i] += o.pairings_[i];
    d_ += o.d_;
    return *this;
  }
  Weight& operator-=(const Weight& o) {
    for (int i = 0; i < size(); ++i) pairings_[i] -= o.pairings_[i];
    d_ -= o.d_;
    return *this;
  }
  Weight& operator*=(const Scalar& s) {
    for (auto& p : pairings_) p *= s;
    d_ *= s;
    return *this;
  }
  friend Weight operator+(Weight a, const Weight& b) { return a += b; }
  friend Weight operator-(Weight a, const Weight& b) { return a -= b; }
  friend Weight operator*(const Scalar& s, Weight a) { return a *= s; }
  Weight operator-() const { return Scalar(-1) * *this; }

  friend bool operator==(const Weight& a, const Weight& b) = default;

  std::size_t hash() const {
    std::size_t h = d_.hash();
    for (const auto& s : pairings_) h = h * 1000003u ^ s.hash();
    return h;
  }

 private:
  std::vector<Scalar> pairings_;
  Scalar d_;
};

struct WeightHash {
  std::size_t operator()(const Weight& w) const { return w.hash(); }
};

/// (alpha, lambda) for alpha in the root lattice.
inline Scalar form(const CartanData& cd, const RootVec& alpha, const Weight& lambda) {
  Scalar s;
  for (int i = 0; i < cd.rank(); ++i)
    if (alpha[i] != 0) s += Scalar(alpha[i] * cd.symmetrizer(i)) * lambda.h(i);
  return s;
}

/// Level (delta, lambda) = <c, lambda>.
inline Scalar level(const CartanData& cd, const Weight& lambda) {
  if (!cd.affine()) return Scalar();
  Scalar s;
  for (int i = 0; i < cd.rank(); ++i) s += Scalar(cd.c_coeffs()[i]) * lambda.h(i);
  return s;
}

/// (alpha^vee, lambda) = 2 (alpha, lambda) / (alpha, alpha) for a real root alpha.
inline Scalar pairing(const CartanData& cd, const RootVec& alpha, const Weight& lambda) {
  const Rational norm = cd.form(alpha, alpha);
  if (norm == 0) throw Error(ErrorKind::ImaginaryCoroot, "coroot of an imaginary root is undefined");
  return form(cd, alpha, lambda) * Scalar(Rational(2) / norm);
}

/// Integer (alpha^vee, beta) for real alpha and root-lattice beta.
inline std::int64_t coroot_pairing(const CartanData& cd, const RootVec& alpha, const RootVec& beta) {
  const Rational norm = cd.form(alpha, alpha);
  if (norm == 0) throw Error(ErrorKind::ImaginaryCoroot, "coroot of an imaginary root is undefined");
  const Rational v = 2 * cd.form(alpha, beta) / norm;
  if (!is_integer(v)) throw Error(ErrorKind::PreconditionViolated, "non-integral root pairing");
  return v.get_num().get_si();
}

/// s_alpha(lambda) = lambda - (alpha^vee, lambda) alpha.
inline Weight reflect(const CartanData& cd, const RootVec& alpha, const Weight& lambda) {
  const Scalar p = pairing(cd, alpha, lambda);
  return lambda - p * Weight::from_root(cd, alpha);
}

inline RootVec reflect_root(const CartanData& cd, const RootVec& alpha, const RootVec& beta) {
  return beta - coroot_pairing(cd, alpha, beta) * alpha;
}

/// w o lambda = w(lambda + rho) - rho for w = s_{word[0]} ... s_{word[k-1]} (rightmost acts first).
inline Weight shifted_action(const CartanData& cd, std::span<const RootVec> word, const Weight& lambda) {
  Weight v = lambda + Weight::rho(cd);
  for (auto it = word.rbegin(); it != word.rend(); ++it) v = reflect(cd, *it, v);
  return v - Weight::rho(cd);
}

/// Parses `h0=<s>,h1=<s>,...[,d=<s>]` with `<s>` = `<rat>[+<rat>*t]`, t = sqrt(2).
inline Weight parse_weight(const CartanData& cd, std::string_view text) {
  std::vector<std::optional<Scalar>> h(cd.rank());
  std::optional<Scalar> d;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    auto item = text.substr(pos, comma - pos);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorKind::ParseError, "expected key=value in '" + std::string(item) + "'");
    auto key = item.substr(0, eq);
    auto value = Scalar::parse(item.substr(eq + 1));
    if (key == "d") {
      if (!cd.affine()) throw Error(ErrorKind::ParseError, "finite types have no d coordinate");
      if (d) throw Error(ErrorKind::ParseError, "duplicate d");
      d = value;
    } else if (key.size() >= 2 && key[0] == 'h') {
      int idx = 0;
      for (char ch : key.substr(1)) {
        if (ch < '0' || ch > '9') throw Error(ErrorKind::ParseError, "bad key '" + std::string(key) + "'");
        idx = idx * 10 + (ch - '0');
        if (idx > 1000) break;
      }
      if (idx >= cd.rank()) throw Error(ErrorKind::ParseError, "index out of range in '" + std::string(key) + "'");
      if (h[idx]) throw Error(ErrorKind::ParseError, "duplicate " + std::string(key));
      h[idx] = value;
    } else {
      throw Error(ErrorKind::ParseError, "bad key '" + std::string(key) + "'");
    }
    pos = comma + 1;
  }
  std::vector<Scalar> p;
  for (int i = 0; i < cd.rank(); ++i) {
    if (!h[i]) throw Error(ErrorKind::ParseError, "missing h" + std::to_string(i));
    p.push_back(*h[i]);
  }
  return Weight(std::move(p), d.value_or(Scalar()));
}

inline std::string format_weight(const CartanData& cd, const Weight& w) {
  std::ostringstream os;
  for (int i = 0; i < w.size(); ++i) os << (i ? "," : "") << 'h' << i << '=' << w.h(i).to_string();
  if (cd.affine()) os << ",d=" << w.d().to_string();
  return os.str();
}

}  // namespace kl_affine
