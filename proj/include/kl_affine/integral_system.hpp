#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kl_affine/cartan.hpp"
#include "kl_affine/errors.hpp"
#include "kl_affine/linalg.hpp"
#include "kl_affine/roots.hpp"
#include "kl_affine/scalar.hpp"
#include "kl_affine/weight.hpp"

namespace kl_affine {

enum class ChamberClass { Critical, CPlus, CMinus, Interior };

inline const char* name(ChamberClass c) {
  switch (c) {
    case ChamberClass::Critical: return "Critical";
    case ChamberClass::CPlus: return "CPlus";
    case ChamberClass::CMinus: return "CMinus";
    case ChamberClass::Interior: return "Interior";
  }
  return "?";
}

/// A delta-class of integral roots: {base + j * period * delta : j in Z}, or the single root `base`.
struct Progression {
  RootVec base;
  std::int64_t period = 0;
  bool all_integers = false;
  Scalar base_pairing;  // (base^vee, lambda + rho)
  Scalar step;          // pairing increment per unit of j

  RootVec member(const CartanData& cd, std::int64_t j) const {
    if (j == 0) return base;
    return base + (j * period) * cd.delta();
  }
  Scalar pairing_at(std::int64_t j) const { return base_pairing + Scalar(j) * step; }

  /// Smallest j whose member is a positive root (all_integers only).
  std::int64_t first_positive(const CartanData& cd) const {
    const auto [gamma, n] = cd.split(base);
    const std::int64_t need = root_sign(gamma) > 0 ? -n : 1 - n;  // n + j p >= need
    return ceil_div(need, period);
  }

  static std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return a / b + ((a % b != 0) && ((a > 0) == (b > 0))); }
  static std::int64_t floor_div(std::int64_t a, std::int64_t b) { return a / b - ((a % b != 0) && ((a > 0) != (b > 0))); }

  bool operator==(const Progression& o) const {
    return base == o.base && period == o.period && all_integers == o.all_integers && base_pairing == o.base_pairing &&
           step == o.step;
  }
};

/// The integral root system Delta(lambda): roots alpha with (alpha^vee, lambda + rho) in Z.
class IntegralSystem {
 public:
  const CartanData& cartan() const { return *cartan_; }
  std::shared_ptr<const CartanData> cartan_ptr() const { return cartan_; }
  const Weight& lambda() const { return lambda_; }
  /// lambda + rho.
  const Weight& shifted() const { return shifted_; }
  const Scalar& level() const { return level_; }
  const std::vector<Progression>& progressions() const { return progressions_; }
  const std::vector<RootVec>& delta0() const { return delta0_; }
  const std::vector<RootVec>& simples() const { return simples_; }
  const std::vector<RootVec>& simples0() const { return simples0_; }
  /// m(s, t) with 0 encoding infinity.
  const std::vector<std::vector<int>>& coxeter_matrix() const { return coxeter_; }
  bool finite() const { return finite_; }
  bool empty() const { return progressions_.empty(); }

  /// (alpha^vee, lambda + rho).
  Scalar pairing(const RootVec& alpha) const { return kl_affine::pairing(*cartan_, alpha, shifted_); }

  bool contains(const RootVec& alpha) const {
    if (is_zero(alpha) || cartan_->is_imaginary(alpha)) return false;
    return pairing(alpha).is_integer();
  }

  /// Members of Delta^+(lambda) of height <= max_height, sorted by (height, coordinates).
  std::vector<RootVec> positive_roots(std::int64_t max_height) const {
    std::vector<RootVec> out;
    const auto& cd = *cartan_;
    for (const auto& p : progressions_) {
      if (!p.all_integers) {
        if (is_positive_root(p.base) && height(p.base) <= max_height) out.push_back(p.base);
        continue;
      }
      for (std::int64_t j = p.first_positive(cd);; ++j) {
        RootVec v = p.member(cd, j);
        if (height(v) > max_height) break;
        out.push_back(std::move(v));
      }
    }
    sort_roots(out);
    return out;
  }

  /// Every root of a finite Delta(lambda).
  std::vector<RootVec> all_roots() const {
    if (!finite_) throw Error(ErrorKind::NotFinite, "Delta(lambda) is infinite");
    std::vector<RootVec> out;
    for (const auto& p : progressions_) out.push_back(p.base);
    sort_roots(out);
    return out;
  }

  /// alpha in Delta^+(lambda) is simple iff s_alpha permutes Delta^+(lambda) \ {alpha}; decided
  /// exactly on every progression by checking the finite window where signs can flip.
  bool is_simple(const RootVec& alpha) const {
    const auto& cd = *cartan_;
    if (!contains(alpha) || !is_positive_root(alpha)) return false;
    auto violates = [&](const RootVec& beta) {
      return beta != alpha && is_positive_root(beta) && !is_positive_root(reflect_root(cd, alpha, beta));
    };
    for (const auto& p : progressions_) {
      if (!p.all_integers) {
        if (violates(p.base)) return false;
        continue;
      }
      const auto img = reflect_root(cd, alpha, p.base);
      const auto n = cd.split(p.base).second;
      const auto n2 = cd.split(img).second;
      // A sign flip needs n + j p >= 0 and n2 + j p <= 0.
      const auto lo = Progression::ceil_div(-n, p.period);
      const auto hi = Progression::floor_div(-n2, p.period);
      for (auto j = lo; j <= hi; ++j)
        if (violates(p.member(cd, j))) return false;
    }
    return true;
  }

  /// True iff beta in Delta^+(lambda) reduces to a simple root by reflections s_alpha (alpha simple,
  /// (alpha^vee, beta) > 0), i.e. beta lies in the nonnegative integer span of the simple roots.
  bool descends_to_simple(RootVec beta) const {
    const auto& cd = *cartan_;
    std::set<RootVec> simple_set(simples_.begin(), simples_.end());
    while (true) {
      if (simple_set.count(beta)) return true;
      bool moved = false;
      for (const auto& a : simples_) {
        const auto c = coroot_pairing(cd, a, beta);
        if (c > 0) {
          beta = beta - c * a;
          moved = true;
          break;
        }
      }
      if (!moved || !is_positive_root(beta)) return false;
    }
  }

  // height first, then reverse-lexicographic so that alpha_0, alpha_1, ... keep their indices
  static void sort_roots(std::vector<RootVec>& v) {
    std::sort(v.begin(), v.end(), [](const RootVec& a, const RootVec& b) {
      const auto ha = height(a), hb = height(b);
      return ha != hb ? ha < hb : b < a;
    });
  }

  /// Height cap for the self-verifying simple-root search.
  static constexpr std::int64_t kHeightCap = 1 << 14;

  friend IntegralSystem compute_integral_system(const Weight& lambda, std::shared_ptr<const CartanData> cd);

 private:
  std::shared_ptr<const CartanData> cartan_;
  Weight lambda_;
  Weight shifted_;
  Scalar level_;
  std::vector<Progression> progressions_;
  std::vector<RootVec> delta0_;
  std::vector<RootVec> simples_;
  std::vector<RootVec> simples0_;
  std::vector<std::vector<int>> coxeter_;
  bool finite_ = true;
};

inline bool is_critical(const CartanData& cd, const Weight& lambda) {
  return cd.affine() && level(cd, lambda + Weight::rho(cd)).is_zero();
}

inline int coxeter_entry(const CartanData& cd, const RootVec& a, const RootVec& b) {
  const auto n = coroot_pairing(cd, a, b) * coroot_pairing(cd, b, a);
  switch (n) {
    case 0: return 2;
    case 1: return 3;
    case 2: return 4;
    case 3: return 6;
    default: return 0;
  }
}

inline IntegralSystem compute_integral_system(const Weight& lambda, std::shared_ptr<const CartanData> cdp) {
  const auto& cd = *cdp;
  IntegralSystem sys;
  sys.cartan_ = cdp;
  sys.lambda_ = lambda;
  sys.shifted_ = lambda + Weight::rho(cd);
  sys.level_ = level(cd, sys.shifted_);
  if (cd.affine() && sys.level_.is_zero())
    throw Error(ErrorKind::CriticalLevel, "(delta, lambda + rho) = 0 for " + format_weight(cd, lambda));

  // Progressions, one per classical root whose delta-class meets Delta(lambda).
  for (const auto& gamma : cd.classical_roots()) {
    const Scalar p = sys.pairing(gamma);
    if (!cd.affine()) {
      if (p.is_integer()) sys.progressions_.push_back({gamma, 0, false, p, Scalar()});
      continue;
    }
    const Scalar s = sys.level_ * Scalar(Rational(2) / cd.form(gamma, gamma));
    if (s.sqrt2_part() != 0) {
      const Rational k = -p.sqrt2_part() / s.sqrt2_part();
      if (!is_integer(k)) continue;
      const auto kk = k.get_num().get_si();
      const Scalar v = p + Scalar(kk) * s;
      if (v.is_integer()) sys.progressions_.push_back({gamma + kk * cd.delta(), 0, false, v, Scalar()});
      continue;
    }
    if (p.sqrt2_part() != 0) continue;
    const Rational& sr = s.rational_part();
    const std::int64_t period = sr.get_den().get_si();
    for (std::int64_t k0 = 0; k0 < period; ++k0) {
      const Scalar v = p + Scalar(k0) * s;
      if (v.is_integer()) {
        sys.progressions_.push_back({gamma + k0 * cd.delta(), period, true, v, Scalar(period) * s});
        break;
      }
    }
  }
  sys.finite_ = std::none_of(sys.progressions_.begin(), sys.progressions_.end(),
                             [](const Progression& p) { return p.all_integers; });

  // Simple roots.
  if (!sys.progressions_.empty()) {
    if (sys.finite_) {
      for (const auto& r : sys.all_roots())
        if (is_positive_root(r) && sys.is_simple(r)) sys.simples_.push_back(r);
      for (const auto& r : sys.all_roots())
        if (is_positive_root(r) && !sys.descends_to_simple(r))
          throw Error(ErrorKind::BoundExceeded, "positive integral root does not decompose over simple roots");
    } else {
      std::int64_t max_period = 1;
      for (const auto& p : sys.progressions_) max_period = std::max(max_period, p.period);
      const auto htd = cd.delta_height();
      std::int64_t cap = std::max<std::int64_t>(8, 2 * htd * max_period);
      while (true) {
        const auto pos = sys.positive_roots(cap);
        sys.simples_.clear();
        for (const auto& r : pos)
          if (sys.is_simple(r)) sys.simples_.push_back(r);
        std::int64_t max_simple = 0;
        for (const auto& r : sys.simples_) max_simple = std::max(max_simple, height(r));
        bool decomposes = true;
        for (const auto& r : pos)
          if (!sys.descends_to_simple(r)) {
            decomposes = false;
            break;
          }
        if (decomposes && cap >= 2 * max_simple + max_period * htd) break;
        cap *= 2;
        if (cap > IntegralSystem::kHeightCap)
          throw Error(ErrorKind::BoundExceeded, "simple-root search did not verify below height cap");
      }
    }
  }

  // Delta_0(lambda) and its simple roots.
  for (const auto& p : sys.progressions_) {
    if (!p.all_integers) {
      if (p.base_pairing.is_zero()) sys.delta0_.push_back(p.base);
      continue;
    }
    const Scalar j = -p.base_pairing / p.step;
    if (j.is_integer()) sys.delta0_.push_back(p.member(cd, j.to_integer().get_si()));
  }
  IntegralSystem::sort_roots(sys.delta0_);
  for (const auto& a : sys.delta0_) {
    if (!is_positive_root(a)) continue;
    bool simple = true;
    for (const auto& b : sys.delta0_)
      if (b != a && is_positive_root(b) && !is_positive_root(reflect_root(cd, a, b))) {
        simple = false;
        break;
      }
    if (simple) sys.simples0_.push_back(a);
  }

  const auto n = sys.simples_.size();
  sys.coxeter_.assign(n, std::vector<int>(n, 1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) sys.coxeter_[i][j] = coxeter_entry(cd, sys.simples_[i], sys.simples_[j]);
  return sys;
}

inline IntegralSystem compute_integral_system(const Weight& lambda, const CartanData& cd) {
  return compute_integral_system(lambda, std::make_shared<const CartanData>(cd));
}

/// Chamber of lambda relative to its integral roots, decided from the sign data of each progression.
inline ChamberClass classify_chamber(const IntegralSystem& sys) {
  const auto& cd = sys.cartan();
  if (cd.affine() && sys.level().is_zero()) return ChamberClass::Critical;
  auto holds = [&](int sign) {
    for (const auto& p : sys.progressions()) {
      if (!p.all_integers) {
        if (is_positive_root(p.base) && p.base_pairing.sign() * sign < 0) return false;
        continue;
      }
      if (p.step.sign() * sign < 0) return false;
      if (p.pairing_at(p.first_positive(cd)).sign() * sign < 0) return false;
    }
    return true;
  };
  if (holds(+1)) return ChamberClass::CPlus;
  if (holds(-1)) return ChamberClass::CMinus;
  return ChamberClass::Interior;
}

inline ChamberClass classify_chamber(const Weight& lambda, std::shared_ptr<const CartanData> cd) {
  if (is_critical(*cd, lambda)) return ChamberClass::Critical;
  return classify_chamber(compute_integral_system(lambda, std::move(cd)));
}

/// lambda in C^+ (sign = +1) or C^- (sign = -1): (alpha^vee, lambda + rho) has that weak sign on Delta^+(lambda).
inline bool in_chamber(const IntegralSystem& sys, const Weight& lambda, int sign) {
  const auto& cd = sys.cartan();
  const auto shifted = lambda + Weight::rho(cd);
  for (const auto& a : sys.simples())
    if (pairing(cd, a, shifted).sign() * sign < 0) return false;
  return true;
}

struct DominantRepresentative {
  Weight mu;
  /// Indices into simples(), leftmost factor first; mu = w o lambda.
  std::vector<int> word;
  ChamberClass chamber = ChamberClass::CPlus;
};

/// The chamber the linkage class is anchored in by default: C^+ for positive rational level, C^- for
/// negative rational level, and C^- whenever W(lambda) is finite (irrational level or finite type).
inline ChamberClass default_target_chamber(const IntegralSystem& sys) {
  if (sys.cartan().affine() && !sys.finite() && sys.level().sign() > 0) return ChamberClass::CPlus;
  return ChamberClass::CMinus;
}

/// Moves lambda along W(lambda) o lambda into C^+ or C^- by simple reflections of wrong sign.
inline DominantRepresentative dominant_representative(const IntegralSystem& sys,
                                                      std::optional<ChamberClass> target = std::nullopt) {
  const auto& cd = sys.cartan();
  const auto chamber = target.value_or(default_target_chamber(sys));
  if (chamber != ChamberClass::CPlus && chamber != ChamberClass::CMinus)
    throw Error(ErrorKind::PreconditionViolated, "target chamber must be CPlus or CMinus");
  if (!sys.finite() && cd.affine()) {
    const int want = chamber == ChamberClass::CPlus ? 1 : -1;
    if (sys.level().sign() != want)
      throw Error(ErrorKind::PreconditionViolated, "level sign excludes the requested chamber for infinite W(lambda)");
  }
  const int bad = chamber == ChamberClass::CPlus ? -1 : 1;
  Weight shifted = sys.shifted();
  std::vector<int> applied;
  for (int iter = 0;; ++iter) {
    if (iter > 1000000) throw Error(ErrorKind::BoundExceeded, "dominant representative search did not terminate");
    int found = -1;
    for (std::size_t i = 0; i < sys.simples().size(); ++i)
      if (pairing(cd, sys.simples()[i], shifted).sign() == bad) {
        found = static_cast<int>(i);
        break;
      }
    if (found < 0) break;
    shifted = reflect(cd, sys.simples()[found], shifted);
    applied.push_back(found);
  }
  std::reverse(applied.begin(), applied.end());
  return {shifted - Weight::rho(cd), applied, chamber};
}

inline DominantRepresentative dominant_representative(const Weight& lambda, std::shared_ptr<const CartanData> cd,
                                                      std::optional<ChamberClass> target = std::nullopt) {
  return dominant_representative(compute_integral_system(lambda, std::move(cd)), target);
}

enum class Subsystem { Full, Zero };

struct ParabolicConjugation {
  /// Ambient simple-reflection indices, leftmost factor first.
  std::vector<int> word;
  std::vector<int> J;

  /// x(beta) for a root-lattice vector beta.
  RootVec apply(const CartanData& cd, RootVec beta) const {
    for (auto it = word.rbegin(); it != word.rend(); ++it) beta = reflect_root(cd, cd.simple_root(*it), beta);
    return beta;
  }
};

/// Finds x in W and J with x Delta_1 inside Delta_J, for Delta_1 = Delta(lambda) (finite) or Delta_0(lambda).
inline ParabolicConjugation conjugate_to_parabolic(const IntegralSystem& sys, Subsystem which = Subsystem::Full) {
  const auto& cd = sys.cartan();
  std::vector<RootVec> roots;
  if (which == Subsystem::Full) {
    if (!sys.finite()) throw Error(ErrorKind::NotFinite, "Delta(lambda) is infinite");
    roots = sys.all_roots();
  } else {
    roots = sys.delta0();
  }
  if (roots.empty()) return {};
  const int n = cd.rank();
  // Witness v (given by its pairings p_i = <h_i, v>) orthogonal to Delta_1, with (delta, v) = 1.
  linalg::RatMatrix a;
  linalg::RatVector b;
  for (const auto& r : roots) {
    linalg::RatVector row(n);
    for (int i = 0; i < n; ++i) row[i] = r[i] * cd.symmetrizer(i);
    a.push_back(std::move(row));
    b.push_back(Rational(0));
  }
  if (cd.affine()) {
    linalg::RatVector row(n);
    for (int i = 0; i < n; ++i) row[i] = Rational(cd.c_coeffs()[i]);
    a.push_back(std::move(row));
    b.push_back(Rational(1));
  }
  auto sol = linalg::solve(a, b, n, [](int c) { return Rational(c + 1); });
  if (!sol) throw Error(ErrorKind::NotFinite, "delta lies in the span of the subsystem");
  auto p = *sol;
  std::vector<int> applied;
  for (int iter = 0;; ++iter) {
    if (iter > 1000000) throw Error(ErrorKind::BoundExceeded, "parabolic conjugation did not terminate");
    int found = -1;
    for (int i = 0; i < n; ++i)
      if (p[i] < 0) {
        found = i;
        break;
      }
    if (found < 0) break;
    const Rational pi = p[found];
    for (int j = 0; j < n; ++j) p[j] -= pi * cd.cartan(j, found);
    applied.push_back(found);
  }
  ParabolicConjugation out;
  out.word.assign(applied.rbegin(), applied.rend());
  for (int i = 0; i < n; ++i)
    if (p[i] == 0) out.J.push_back(i);
  return out;
}

/// Root subsystem Delta_J generated by {alpha_j : j in J}: membership test for a real root.
inline bool in_parabolic(const CartanData& cd, const std::vector<int>& J, const RootVec& beta) {
  for (int i = 0; i < cd.rank(); ++i)
    if (beta[i] != 0 && std::find(J.begin(), J.end(), i) == J.end()) return false;
  return true;
}

/// Same integral roots, same pairings along them and same level.
inline bool same_integrality(const IntegralSystem& a, const IntegralSystem& b) {
  return a.level() == b.level() && a.progressions() == b.progressions();
}

/// A rational-coordinate weight with the same integral roots, pairings and level as lambda.
///
/// The sqrt(2)-part of lambda + rho vanishes on every integral root, so mu + rho = a + t b (lambda + rho =
/// a + sqrt(2) b) keeps the integral data for any rational t; t is searched among rationals near sqrt(2)
/// until no new root becomes integral.
inline Weight rationalize_weight(const IntegralSystem& sys) {
  const auto& cd = sys.cartan();
  if (!cd.affine() || sys.finite() || sys.empty())
    throw Error(ErrorKind::NotApplicable, "rationalization needs delta in the span of Delta(lambda)");
  if (sys.lambda().is_rational()) return sys.lambda();
  const auto& shifted = sys.shifted();
  std::vector<Scalar> ra, rb;
  for (const auto& s : shifted.pairings()) {
    ra.push_back(Scalar(s.rational_part()));
    rb.push_back(Scalar(s.sqrt2_part()));
  }
  const Weight a(ra, Scalar(shifted.d().rational_part()));
  const Weight b(rb, Scalar(shifted.d().sqrt2_part()));
  std::vector<Rational> candidates = {Rational(3, 2), Rational(7, 5), Rational(17, 12), Rational(41, 29),
                                      Rational(99, 70), Rational(1)};
  for (int den = 2; den <= 64; ++den)
    for (int num = 1; num <= 2 * den; ++num) {
      Rational t(num, den);
      t.canonicalize();
      if (t.get_den() == den) candidates.push_back(t);
    }
  for (const auto& t : candidates) {
    const Weight mu = a + Scalar(t) * b - Weight::rho(cd);
    const auto sys2 = compute_integral_system(mu, sys.cartan_ptr());
    if (same_integrality(sys, sys2)) return mu;
  }
  throw Error(ErrorKind::BoundExceeded, "no rational representative found in the candidate search");
}

/// Kac-Kazhdan linkage: a chain lambda = l_0, l_k = l_{k-1} - n_k beta_k, ..., mu with beta_k positive
/// real roots and n_k = (beta_k^vee, l_{k-1} + rho) a positive integer. Imaginary steps would need
/// (delta, l + rho) = 0 along the chain, which the level constancy excludes off the critical level.
inline bool kk_linked(const CartanData& cd, const Weight& lambda, const Weight& mu, std::int64_t height_bound) {
  if (is_critical(cd, lambda) || is_critical(cd, mu)) throw Error(ErrorKind::CriticalLevel, "critical level");
  const auto target = root_lattice_coords(cd, lambda - mu);
  if (!target || !is_nonnegative(*target) || height(*target) > height_bound)
    throw Error(ErrorKind::PreconditionViolated, "lambda - mu must lie in Q^+ within the height bound");
  if (is_zero(*target)) return true;
  const auto roots = positive_real_roots(cd, height(*target));
  const Weight shifted = lambda + Weight::rho(cd);
  std::set<RootVec> seen{RootVec(cd.rank(), 0)};
  std::vector<RootVec> queue{RootVec(cd.rank(), 0)};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const RootVec eta = queue[q];
    const Weight cur = shifted - Weight::from_root(cd, eta);
    for (const auto& beta : roots) {
      const Scalar nk = pairing(cd, beta, cur);
      if (!nk.is_integer() || nk.sign() <= 0) continue;
      const RootVec next = eta + nk.to_integer().get_si() * beta;
      if (!is_nonnegative(*target - next)) continue;
      if (next == *target) return true;
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return false;
}

}  // namespace kl_affine
