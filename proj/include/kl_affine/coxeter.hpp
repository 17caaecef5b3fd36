#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kl_affine/cartan.hpp"
#include "kl_affine/errors.hpp"
#include "kl_affine/integral_system.hpp"
#include "kl_affine/linalg.hpp"
#include "kl_affine/weight.hpp"

namespace kl_affine {

/// Square integer matrix, row-major, acting on root-lattice coordinates.
using IntMatrix = std::vector<std::int64_t>;

/// Element of W(lambda): its ShortLex-minimal reduced word over the generators S(lambda) together with
/// its exact action on the root lattice (which is faithful, so equality is matrix equality).
class CoxeterElement {
 public:
  const std::vector<int>& word() const { return word_; }
  int length() const { return static_cast<int>(word_.size()); }
  const IntMatrix& matrix() const { return mat_; }
  const IntMatrix& inverse_matrix() const { return inv_; }
  std::uint64_t group_id() const { return group_; }
  bool is_identity() const { return word_.empty(); }

  friend bool operator==(const CoxeterElement& a, const CoxeterElement& b) {
    return a.group_ == b.group_ && a.mat_ == b.mat_;
  }
  /// ShortLex order on normal forms.
  friend bool operator<(const CoxeterElement& a, const CoxeterElement& b) {
    if (a.word_.size() != b.word_.size()) return a.word_.size() < b.word_.size();
    return a.word_ < b.word_;
  }

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ull;
    for (auto x : mat_) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
    return h;
  }

 private:
  friend class CoxeterGroup;
  std::vector<int> word_;
  IntMatrix mat_;
  IntMatrix inv_;
  std::uint64_t group_ = 0;
};

struct ElementHash {
  std::size_t operator()(const CoxeterElement& w) const { return w.hash(); }
};

using ElementSet = std::unordered_set<CoxeterElement, ElementHash>;

struct BruhatInterval {
  CoxeterElement bottom;
  CoxeterElement top;
  /// elements[k] = members of length ell(bottom) + k, each sorted ShortLex.
  std::vector<std::vector<CoxeterElement>> by_length;

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& v : by_length) n += v.size();
    return n;
  }
  std::vector<CoxeterElement> elements() const {
    std::vector<CoxeterElement> out;
    for (const auto& v : by_length) out.insert(out.end(), v.begin(), v.end());
    return out;
  }
};

enum class CosetMode { Longest, Shortest };

/// The Coxeter system (W(lambda), S(lambda)) realized inside W acting on the root lattice.
class CoxeterGroup {
 public:
  explicit CoxeterGroup(const IntegralSystem& sys)
      : cartan_(sys.cartan_ptr()), simples_(sys.simples()), coxeter_(sys.coxeter_matrix()), id_(next_id()) {
    n_ = cartan_->rank();
    for (const auto& a : simples_) gens_.push_back(reflection_matrix(a));
  }

  const CartanData& cartan() const { return *cartan_; }
  std::uint64_t id() const { return id_; }
  int rank() const { return static_cast<int>(simples_.size()); }
  const std::vector<RootVec>& simple_roots() const { return simples_; }
  const std::vector<std::vector<int>>& coxeter_matrix() const { return coxeter_; }

  /// Matrix of s_beta on root-lattice coordinates.
  IntMatrix reflection_matrix(const RootVec& beta) const {
    IntMatrix m(n_ * n_, 0);
    for (int j = 0; j < n_; ++j) {
      const auto col = reflect_root(*cartan_, beta, cartan_->simple_root(j));
      for (int i = 0; i < n_; ++i) m[i * n_ + j] = col[i];
    }
    return m;
  }

  CoxeterElement identity() const {
    CoxeterElement e;
    e.mat_ = identity_matrix();
    e.inv_ = e.mat_;
    e.group_ = id_;
    return e;
  }

  CoxeterElement generator(int s) const { return from_word(std::vector<int>{s}); }

  /// Product s_{word[0]} ... s_{word[k-1]}, reduced to normal form.
  CoxeterElement from_word(std::span<const int> word) const {
    IntMatrix m = identity_matrix();
    IntMatrix inv = m;
    for (int s : word) {
      check_generator(s);
      m = mul(m, gens_[s]);
      inv = mul(gens_[s], inv);
    }
    return normalize(std::move(m), std::move(inv));
  }
  CoxeterElement from_word(std::initializer_list<int> word) const {
    return from_word(std::span<const int>(word.begin(), word.size()));
  }

  /// The reflection s_beta for a root beta of Delta(lambda), as an element of W(lambda).
  CoxeterElement reflection(const RootVec& beta) const {
    auto m = reflection_matrix(beta);
    return normalize(m, m);
  }

  CoxeterElement multiply(const CoxeterElement& u, const CoxeterElement& v) const {
    check(u);
    check(v);
    return normalize(mul(u.mat_, v.mat_), mul(v.inv_, u.inv_));
  }

  CoxeterElement inverse(const CoxeterElement& w) const {
    check(w);
    return normalize(w.inv_, w.mat_);
  }

  CoxeterElement left_multiply(int s, const CoxeterElement& w) const {
    check(w);
    check_generator(s);
    return normalize(mul(gens_[s], w.mat_), mul(w.inv_, gens_[s]));
  }

  CoxeterElement right_multiply(const CoxeterElement& w, int s) const {
    check(w);
    check_generator(s);
    return normalize(mul(w.mat_, gens_[s]), mul(gens_[s], w.inv_));
  }

  int length(const CoxeterElement& w) const {
    check(w);
    return w.length();
  }

  /// w(beta).
  RootVec apply(const CoxeterElement& w, const RootVec& beta) const { return act(w.mat_, beta); }

  /// s with ell(s w) < ell(w), i.e. w^{-1}(alpha_s) negative.
  bool is_left_descent(const CoxeterElement& w, int s) const { return root_sign(act(w.inv_, simples_[s])) < 0; }
  /// s with ell(w s) < ell(w), i.e. w(alpha_s) negative.
  bool is_right_descent(const CoxeterElement& w, int s) const { return root_sign(act(w.mat_, simples_[s])) < 0; }

  std::vector<int> descents_left(const CoxeterElement& w) const {
    check(w);
    std::vector<int> out;
    for (int s = 0; s < rank(); ++s)
      if (is_left_descent(w, s)) out.push_back(s);
    return out;
  }
  std::vector<int> descents_right(const CoxeterElement& w) const {
    check(w);
    std::vector<int> out;
    for (int s = 0; s < rank(); ++s)
      if (is_right_descent(w, s)) out.push_back(s);
    return out;
  }

  /// Bruhat order via the lifting property along the normal form of w: for s w < w,
  /// y <= w iff min(y, s y) <= s w.
  bool bruhat_leq(const CoxeterElement& y, const CoxeterElement& w) const {
    check(y);
    check(w);
    if (y.length() > w.length()) return false;
    IntMatrix ym = y.mat_, yinv = y.inv_;
    int ylen = y.length();
    int remaining = w.length();
    for (int s : w.word_) {
      if (root_sign(act(yinv, simples_[s])) < 0) {
        ym = mul(gens_[s], ym);
        yinv = mul(yinv, gens_[s]);
        --ylen;
      }
      --remaining;
      if (ylen > remaining) return false;
    }
    return ylen == 0;
  }

  /// All elements of length <= max_length, sorted ShortLex.
  std::vector<CoxeterElement> enumerate_ball(int max_length, std::size_t max_elements = 2000000) const {
    std::vector<CoxeterElement> out{identity()};
    ElementSet seen{identity()};
    std::size_t level_begin = 0;
    for (int len = 1; len <= max_length; ++len) {
      const std::size_t level_end = out.size();
      for (std::size_t i = level_begin; i < level_end; ++i)
        for (int s = 0; s < rank(); ++s) {
          if (is_right_descent(out[i], s)) continue;
          auto next = right_multiply(out[i], s);
          if (seen.insert(next).second) {
            out.push_back(std::move(next));
            if (out.size() > max_elements) throw Error(ErrorKind::BudgetExceeded, "ball enumeration exceeds element cap");
          }
        }
      level_begin = level_end;
      if (level_begin == out.size()) break;
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// {y : y <= w}, built from [e, s w] and s [e, s w] along the normal form.
  BruhatInterval interval_below(const CoxeterElement& w) const {
    check(w);
    ElementSet set{identity()};
    for (auto it = w.word_.rbegin(); it != w.word_.rend(); ++it) {
      std::vector<CoxeterElement> add;
      for (const auto& x : set) add.push_back(left_multiply(*it, x));
      for (auto& x : add) set.insert(std::move(x));
    }
    return group_by_length(identity(), w, set);
  }

  /// [x, z] = {y : x <= y <= z}.
  BruhatInterval interval(const CoxeterElement& x, const CoxeterElement& z) const {
    if (!bruhat_leq(x, z)) throw Error(ErrorKind::NotComparable, "interval bottom is not below top");
    const auto below = interval_below(z);
    ElementSet set;
    for (const auto& layer : below.by_length)
      for (const auto& y : layer)
        if (y.length() >= x.length() && bruhat_leq(x, y)) set.insert(y);
    return group_by_length(x, z, set);
  }

  /// All elements of the finite reflection subgroup generated by s_beta, beta in `roots`.
  std::vector<CoxeterElement> reflection_subgroup(const std::vector<RootVec>& roots,
                                                  std::size_t max_elements = 100000) const {
    std::vector<CoxeterElement> gens;
    for (const auto& r : roots)
      if (is_positive_root(r)) gens.push_back(reflection(r));
    std::vector<CoxeterElement> out{identity()};
    ElementSet seen{identity()};
    for (std::size_t i = 0; i < out.size(); ++i)
      for (const auto& g : gens) {
        auto next = multiply(out[i], g);
        if (seen.insert(next).second) {
          out.push_back(std::move(next));
          if (out.size() > max_elements) throw Error(ErrorKind::BudgetExceeded, "reflection subgroup is too large");
        }
      }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Longest or shortest element of the coset w * sub (sub a finite subgroup given by its elements).
  CoxeterElement coset_extreme(const CoxeterElement& w, const std::vector<CoxeterElement>& sub, CosetMode mode) const {
    std::optional<CoxeterElement> best;
    bool tie = false;
    for (const auto& u : sub) {
      auto x = multiply(w, u);
      if (!best) {
        best = std::move(x);
        continue;
      }
      const bool better = mode == CosetMode::Longest ? x.length() > best->length() : x.length() < best->length();
      if (better) {
        best = std::move(x);
        tie = false;
      } else if (x.length() == best->length() && !(x == *best)) {
        tie = true;
      }
    }
    if (!best) return w;
    if (tie) throw Error(ErrorKind::PreconditionViolated, "coset extreme is not unique");
    return *best;
  }

  /// All elements of the coset w * sub.
  std::vector<CoxeterElement> coset(const CoxeterElement& w, const std::vector<CoxeterElement>& sub) const {
    std::vector<CoxeterElement> out;
    for (const auto& u : sub) out.push_back(multiply(w, u));
    std::sort(out.begin(), out.end());
    return out;
  }

  void check(const CoxeterElement& w) const {
    if (w.group_ != id_) throw Error(ErrorKind::MixedSystems, "element belongs to a different W(lambda)");
  }

 private:
  static std::uint64_t next_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter++;
  }

  IntMatrix identity_matrix() const {
    IntMatrix m(n_ * n_, 0);
    for (int i = 0; i < n_; ++i) m[i * n_ + i] = 1;
    return m;
  }

  IntMatrix mul(const IntMatrix& a, const IntMatrix& b) const {
    IntMatrix c(n_ * n_, 0);
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < n_; ++k) {
        const auto aik = a[i * n_ + k];
        if (aik == 0) continue;
        for (int j = 0; j < n_; ++j) c[i * n_ + j] += aik * b[k * n_ + j];
      }
    return c;
  }

  RootVec act(const IntMatrix& m, const RootVec& v) const {
    RootVec out(n_, 0);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) out[i] += m[i * n_ + j] * v[j];
    return out;
  }

  void check_generator(int s) const {
    if (s < 0 || s >= rank()) throw Error(ErrorKind::PreconditionViolated, "generator index out of range");
  }

  /// ShortLex normal form: repeatedly strip the smallest left descent.
  CoxeterElement normalize(IntMatrix m, IntMatrix inv) const {
    CoxeterElement out;
    out.mat_ = m;
    out.inv_ = inv;
    out.group_ = id_;
    const IntMatrix id = identity_matrix();
    while (m != id) {
      int found = -1;
      for (int s = 0; s < rank(); ++s)
        if (root_sign(act(inv, simples_[s])) < 0) {
          found = s;
          break;
        }
      if (found < 0) throw Error(ErrorKind::PreconditionViolated, "matrix does not lie in W(lambda)");
      out.word_.push_back(found);
      m = mul(gens_[found], m);
      inv = mul(inv, gens_[found]);
      if (out.word_.size() > 100000) throw Error(ErrorKind::BudgetExceeded, "normal form too long");
    }
    return out;
  }

  BruhatInterval group_by_length(const CoxeterElement& bottom, const CoxeterElement& top, const ElementSet& set) const {
    BruhatInterval iv{bottom, top, {}};
    iv.by_length.resize(top.length() - bottom.length() + 1);
    for (const auto& y : set) iv.by_length[y.length() - bottom.length()].push_back(y);
    for (auto& v : iv.by_length) std::sort(v.begin(), v.end());
    return iv;
  }

  std::shared_ptr<const CartanData> cartan_;
  std::vector<RootVec> simples_;
  std::vector<std::vector<int>> coxeter_;
  std::vector<IntMatrix> gens_;
  int n_ = 0;
  std::uint64_t id_;
};

/// Orbit point y(Lambda) of a chamber-extreme shifted weight Lambda = mu + rho, recorded as the
/// root-lattice offset Lambda - y(Lambda) (in Q^+ for C^+, in -Q^+ for C^-).
struct OrbitPoint {
  CoxeterElement element;
  RootVec offset;
};

/// Orbit points of W(lambda) o mu with |ht(offset)| <= max_height, mu in C^+ (sign +1) or C^- (sign -1).
/// Each point is reached through left multiplications that move strictly away from mu, which is complete
/// because every suffix of a reduced word of a minimal coset representative is again minimal.
inline std::vector<OrbitPoint> enumerate_orbit(const CoxeterGroup& g, const Weight& mu, int sign,
                                               std::int64_t max_height, std::size_t max_points = 500000) {
  const auto& cd = g.cartan();
  const Weight shifted = mu + Weight::rho(cd);
  std::vector<std::int64_t> base_pairing;
  for (const auto& a : g.simple_roots()) {
    const Scalar p = pairing(cd, a, shifted);
    if (!p.is_integer()) throw Error(ErrorKind::PreconditionViolated, "simple root not integral for mu");
    if (p.sign() * sign < 0) throw Error(ErrorKind::NotDominant, "mu is not in the requested chamber");
    base_pairing.push_back(p.to_integer().get_si());
  }
  std::vector<OrbitPoint> out{{g.identity(), RootVec(cd.rank(), 0)}};
  std::set<RootVec> seen{RootVec(cd.rank(), 0)};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int s = 0; s < g.rank(); ++s) {
      const auto& eta = out[i].offset;
      const std::int64_t c = base_pairing[s] - coroot_pairing(cd, g.simple_roots()[s], eta);
      if (c * sign <= 0) continue;
      RootVec next = eta + c * g.simple_roots()[s];
      if (std::abs(height(next)) > max_height || !seen.insert(next).second) continue;
      out.push_back({g.left_multiply(s, out[i].element), std::move(next)});
      if (out.size() > max_points) throw Error(ErrorKind::BudgetExceeded, "orbit enumeration exceeds point cap");
    }
  }
  return out;
}

/// Lambda - w(Lambda) for Lambda = mu + rho, as an integer root-lattice vector.
inline RootVec dot_offset(const CoxeterGroup& g, const CoxeterElement& w, const Weight& mu) {
  const auto& cd = g.cartan();
  const Weight shifted = mu + Weight::rho(cd);
  RootVec eta(cd.rank(), 0);
  const auto& word = w.word();
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const auto& a = g.simple_roots()[*it];
    const Scalar p = pairing(cd, a, shifted);
    if (!p.is_integer()) throw Error(ErrorKind::PreconditionViolated, "simple root not integral for mu");
    const std::int64_t c = p.to_integer().get_si() - coroot_pairing(cd, a, eta);
    eta = eta + c * a;
  }
  return eta;
}

/// The y >= w (longest representatives of y W_0(mu)) with ht(w o mu - y o mu) <= budget; mu in C^+ and w
/// longest in w W_0(mu).
inline std::vector<CoxeterElement> enumerate_above_within(const CoxeterGroup& g, const CoxeterElement& w,
                                                          std::int64_t budget, const IntegralSystem& mu_sys) {
  const Weight& mu = mu_sys.lambda();
  if (!in_chamber(mu_sys, mu, +1)) throw Error(ErrorKind::NotDominant, "mu must lie in C^+");
  const auto w0 = g.reflection_subgroup(mu_sys.delta0());
  if (!(g.coset_extreme(w, w0, CosetMode::Longest) == w))
    throw Error(ErrorKind::PreconditionViolated, "w must be longest in its W_0 coset");
  const RootVec wo = dot_offset(g, w, mu);
  std::vector<CoxeterElement> out;
  for (const auto& pt : enumerate_orbit(g, mu, +1, height(wo) + budget)) {
    const RootVec diff = pt.offset - wo;
    if (!is_nonnegative(diff) || height(diff) > budget) continue;
    auto y = g.coset_extreme(pt.element, w0, CosetMode::Longest);
    if (g.bruhat_leq(w, y)) out.push_back(std::move(y));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace kl_affine
