#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kl_affine/cartan.hpp"
#include "kl_affine/coxeter.hpp"
#include "kl_affine/errors.hpp"
#include "kl_affine/integral_system.hpp"
#include "kl_affine/kl.hpp"
#include "kl_affine/roots.hpp"
#include "kl_affine/weight.hpp"

namespace kl_affine {

/// Truncated formal character sum_xi c_xi e^{base - xi}, xi in Q^+ with ht(xi) <= depth.
class Character {
 public:
  Character(Weight base, std::int64_t depth) : base_(std::move(base)), depth_(depth) {}

  const Weight& base() const { return base_; }
  std::int64_t depth() const { return depth_; }
  const std::map<RootVec, BigInt>& terms() const { return terms_; }

  BigInt coeff(const RootVec& xi) const {
    auto it = terms_.find(xi);
    return it == terms_.end() ? BigInt(0) : it->second;
  }

  void add(const RootVec& xi, const BigInt& c) {
    if (c == 0 || height(xi) > depth_) return;
    if (!is_nonnegative(xi)) throw Error(ErrorKind::PreconditionViolated, "character term outside base - Q^+");
    auto [it, fresh] = terms_.try_emplace(xi, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// Adds k * other, where other.base() = base() - offset.
  void add_scaled(const Character& other, const RootVec& offset, const BigInt& k) {
    if (k == 0) return;
    for (const auto& [xi, c] : other.terms_) {
      if (height(xi) + height(offset) > depth_) continue;
      add(xi + offset, k * c);
    }
  }

  Character truncated(std::int64_t depth) const {
    Character out(base_, depth);
    for (const auto& [xi, c] : terms_)
      if (height(xi) <= depth) out.terms_.emplace(xi, c);
    return out;
  }

  friend bool operator==(const Character& a, const Character& b) {
    return a.base_ == b.base_ && a.depth_ == b.depth_ && a.terms_ == b.terms_;
  }

 private:
  Weight base_;
  std::int64_t depth_;
  std::map<RootVec, BigInt> terms_;
};

/// All xi in Q^+ with ht(xi) <= depth, ordered by height.
inline std::vector<RootVec> qplus_up_to(int rank, std::int64_t depth) {
  std::vector<RootVec> out;
  RootVec cur(rank, 0);
  std::function<void(int, std::int64_t)> rec = [&](int i, std::int64_t left) {
    if (i == rank) {
      out.push_back(cur);
      return;
    }
    for (std::int64_t k = 0; k <= left; ++k) {
      cur[i] = k;
      rec(i + 1, left - k);
    }
    cur[i] = 0;
  };
  rec(0, depth);
  std::stable_sort(out.begin(), out.end(), [](const RootVec& a, const RootVec& b) { return height(a) < height(b); });
  return out;
}

/// Generalized Kostant partition function: coefficients of prod_{alpha > 0} (1 - e^{-alpha})^{-mult alpha}.
inline std::map<RootVec, BigInt> partition_table(const CartanData& cd, std::int64_t depth) {
  const auto xs = qplus_up_to(cd.rank(), depth);
  std::map<RootVec, BigInt> t;
  for (const auto& x : xs) t.emplace(x, BigInt(0));
  t[RootVec(cd.rank(), 0)] = 1;
  auto absorb = [&](const RootVec& alpha) {
    for (const auto& x : xs) {
      const RootVec rest = x - alpha;
      if (!is_nonnegative(rest)) continue;
      t[x] += t[rest];
    }
  };
  for (const auto& a : positive_real_roots(cd, depth)) absorb(a);
  for (const auto& d : positive_imaginary_roots(cd, depth))
    for (int m = 0; m < cd.imaginary_multiplicity(); ++m) absorb(d);
  return t;
}

enum class Route { Auto, Dominant, Antidominant };

struct FormulaTerm {
  CoxeterElement y;
  RootVec offset;  // lambda - y o mu
  int sign = 1;
  BigInt kl_at_one;
};

/// ch L(lambda) = sum_terms sign * kl_at_one * ch M(lambda - offset).
struct IrreducibleFormula {
  Weight lambda;
  Weight anchor;  // mu, chamber-extreme in the linkage class
  ChamberClass chamber = ChamberClass::CPlus;
  bool empty_system = false;
  std::shared_ptr<const CoxeterGroup> group;
  std::optional<CoxeterElement> w;  // lambda = w o mu
  std::vector<FormulaTerm> terms;
};

/// Coefficients of irreducible characters in terms of Verma characters over one window of a linkage class:
/// the orbit points nu = y o anchor with top - nu in Q^+ of height <= depth.
struct LinkageClassData {
  std::shared_ptr<const CartanData> cartan;
  std::shared_ptr<const CoxeterGroup> group;
  Weight top;
  Weight anchor;
  int chamber = 1;  // +1: anchor in C^+, -1: anchor in C^-
  std::int64_t depth = 0;
  std::vector<CoxeterElement> elements;  // every element whose orbit point lies in the window
  std::vector<RootVec> offsets;          // top - elements[j] o anchor
  std::vector<int> reps;                 // rows: chamber-extreme coset representatives, reps[0] is the top
  /// coeffs[r][j]: ch L(elements[reps[r]] o anchor) = sum_j coeffs[r][j] ch M(elements[j] o anchor)
  std::vector<std::vector<BigInt>> coeffs;
  /// multiplicities[r][s] = [M(rep_r o anchor) : L(rep_s o anchor)]
  std::vector<std::vector<BigInt>> multiplicities;

  const CoxeterElement& rep(int r) const { return elements[reps[r]]; }
  int index_of(const CoxeterElement& y) const {
    for (std::size_t j = 0; j < elements.size(); ++j)
      if (elements[j] == y) return static_cast<int>(j);
    return -1;
  }
  /// Coset-grouped square matrix a[r][s] over the rows.
  std::vector<std::vector<BigInt>> grouped_coeffs() const {
    std::vector<std::vector<BigInt>> a(reps.size(), std::vector<BigInt>(reps.size(), BigInt(0)));
    for (std::size_t j = 0; j < elements.size(); ++j) {
      const int s = row_of_offset(offsets[j]);
      for (std::size_t r = 0; r < reps.size(); ++r) a[r][s] += coeffs[r][j];
    }
    return a;
  }
  int row_of_offset(const RootVec& off) const {
    for (std::size_t r = 0; r < reps.size(); ++r)
      if (offsets[reps[r]] == off) return static_cast<int>(r);
    throw Error(ErrorKind::PreconditionViolated, "orbit point without a representative");
  }
};

/// Characters of Verma and irreducible highest-weight modules for one Cartan datum. Coxeter groups and their
/// KL memos are shared between weights with the same integral simple system.
class CharacterEngine {
 public:
  explicit CharacterEngine(std::shared_ptr<const CartanData> cd, std::optional<std::filesystem::path> cache_dir = {})
      : cd_(std::move(cd)), cache_dir_(std::move(cache_dir)) {}

  const CartanData& cartan() const { return *cd_; }
  std::shared_ptr<const CartanData> cartan_ptr() const { return cd_; }

  Character verma_character(const Weight& lambda, std::int64_t depth) const {
    if (depth < 0) throw Error(ErrorKind::PreconditionViolated, "depth must be nonnegative");
    Character ch(lambda, depth);
    for (const auto& [xi, c] : table(depth)) ch.add(xi, c);
    return ch;
  }

  IntegralSystem integral_system(const Weight& lambda) const {
    if (is_critical(*cd_, lambda)) throw Error(ErrorKind::CriticalLevel, "critical level: (delta, lambda + rho) = 0");
    return compute_integral_system(lambda, cd_);
  }

  std::shared_ptr<const CoxeterGroup> group_for(const IntegralSystem& sys) const {
    return engine_for(sys)->group_ptr();
  }

  std::shared_ptr<KLEngine> engine_for(const IntegralSystem& sys) const {
    std::string key;
    for (const auto& r : sys.simples()) {
      for (auto x : r) key += std::to_string(x) + ",";
      key += "|";
    }
    std::lock_guard lock(mutex_);
    auto it = engines_.find(key);
    if (it != engines_.end()) return it->second;
    auto g = std::make_shared<const CoxeterGroup>(sys);
    auto e = std::make_shared<KLEngine>(g);
    if (cache_dir_) e->load(*cache_dir_);
    return engines_.emplace(key, e).first->second;
  }

  /// Writes every KL memo to the cache directory (no-op without one).
  void save_caches() const {
    if (!cache_dir_) return;
    std::lock_guard lock(mutex_);
    for (const auto& [k, e] : engines_) e->save(*cache_dir_);
  }

  /// The Main Theorem formula for ch L(lambda): case (i) in C^+ with w longest in w W_0 and Q_{w,y}(1) over
  /// y >= w; case (ii) in C^- with w shortest and P_{y,w}(1) over y <= w. Terms deeper than `depth` are
  /// omitted: their Vermas cannot reach the reported weights.
  IrreducibleFormula irreducible_formula(const Weight& lambda, std::int64_t depth, Route route = Route::Auto) const {
    if (depth < 0) throw Error(ErrorKind::PreconditionViolated, "depth must be nonnegative");
    const auto sys = integral_system(lambda);
    auto kl = engine_for(sys);
    const auto& g = kl->group();
    IrreducibleFormula f{lambda, lambda, ChamberClass::CPlus, sys.empty(), kl->group_ptr(), std::nullopt, {}};
    if (sys.empty()) {
      f.chamber = classify_chamber(sys);
      f.w = g.identity();
      f.terms.push_back({g.identity(), RootVec(cd_->rank(), 0), 1, BigInt(1)});
      return f;
    }
    const auto setup = anchor_setup(sys, route);
    f.anchor = setup.mu;
    f.chamber = setup.sign > 0 ? ChamberClass::CPlus : ChamberClass::CMinus;
    f.w = setup.w;
    const auto& w = setup.w;
    if (setup.sign > 0) {
      for (const auto& pt : enumerate_orbit(g, setup.mu, +1, height(setup.eta_w) + depth)) {
        const RootVec diff = pt.offset - setup.eta_w;
        if (!is_nonnegative(diff) || height(diff) > depth) continue;
        for (const auto& y : g.coset(pt.element, setup.w0)) {
          if (!g.bruhat_leq(w, y)) continue;
          BigInt v = kl->inverse_kl(w, y).at_one();
          if (v != 0) f.terms.push_back({y, diff, (y.length() - w.length()) % 2 ? -1 : 1, std::move(v)});
        }
      }
    } else {
      for (const auto& y : g.interval_below(w).elements()) {
        const RootVec diff = dot_offset(g, y, setup.mu) - setup.eta_w;
        if (!is_nonnegative(diff)) throw Error(ErrorKind::PreconditionViolated, "Bruhat-lower anchor above lambda");
        if (height(diff) > depth) continue;
        BigInt v = kl->kl_polynomial(y, w).at_one();
        if (v != 0) f.terms.push_back({y, diff, (w.length() - y.length()) % 2 ? -1 : 1, std::move(v)});
      }
    }
    std::sort(f.terms.begin(), f.terms.end(), [](const FormulaTerm& a, const FormulaTerm& b) {
      if (height(a.offset) != height(b.offset)) return height(a.offset) < height(b.offset);
      return a.y < b.y;
    });
    return f;
  }

  Character character_of(const IrreducibleFormula& f, std::int64_t depth) const {
    Character ch(f.lambda, depth);
    const Character m = verma_character(f.lambda, depth);
    for (const auto& term : f.terms) ch.add_scaled(m, term.offset, BigInt(term.sign) * term.kl_at_one);
    return ch;
  }

  Character irreducible_character(const Weight& lambda, std::int64_t depth, Route route = Route::Auto) const {
    return character_of(irreducible_formula(lambda, depth, route), depth);
  }

  /// Window data and decomposition multiplicities for the linkage class of lambda (lambda on top).
  LinkageClassData decomposition_multiplicities(const Weight& lambda, std::int64_t depth,
                                                Route route = Route::Auto) const {
    if (depth < 0) throw Error(ErrorKind::PreconditionViolated, "depth must be nonnegative");
    const auto sys = integral_system(lambda);
    auto kl = engine_for(sys);
    const auto& g = kl->group();
    LinkageClassData data;
    data.cartan = cd_;
    data.group = kl->group_ptr();
    data.top = lambda;
    data.depth = depth;
    if (sys.empty()) {
      data.anchor = lambda;
      data.chamber = classify_chamber(sys) == ChamberClass::CMinus ? -1 : 1;
      data.elements = {g.identity()};
      data.offsets = {RootVec(cd_->rank(), 0)};
      data.reps = {0};
      data.coeffs = {{BigInt(1)}};
      data.multiplicities = {{BigInt(1)}};
      return data;
    }
    const auto setup = anchor_setup(sys, route);
    data.anchor = setup.mu;
    data.chamber = setup.sign;
    fill_window(data, setup.w, setup.w0);
    fill_rows(data, *kl);
    invert(data);
    return data;
  }

  /// Re-anchors the coefficient rows of `data` at lambda2 (same chamber, same integral roots, integral
  /// difference), for either equal singular sets or a regular source and a singular target.
  LinkageClassData transport_coefficients(const LinkageClassData& data, const Weight& lambda2,
                                          std::optional<std::int64_t> depth = std::nullopt) const {
    if (!(*data.cartan == *cd_)) throw Error(ErrorKind::PreconditionViolated, "data from another Cartan datum");
    const auto sys1 = integral_system(data.anchor);
    const auto sys2 = integral_system(lambda2);
    const auto chamber2 = classify_chamber(sys2);
    const bool in_same = data.chamber > 0 ? in_chamber(sys2, lambda2, +1) : in_chamber(sys2, lambda2, -1);
    if (!in_same || chamber2 == ChamberClass::Critical)
      throw Error(ErrorKind::ChambersDiffer, "target weight is not in the chamber of the source anchor");
    if (!same_roots(sys1, sys2)) throw Error(ErrorKind::IntegralityMismatch, "integral root systems differ");
    const Weight diff = lambda2 - data.anchor;
    for (int i = 0; i < cd_->rank(); ++i)
      if (!diff.h(i).is_integer()) throw Error(ErrorKind::IntegralityMismatch, "weight difference is not integral");
    auto kl = engine_for(sys2);
    const auto& g = kl->group();
    if (!(kl->group_ptr() == data.group))
      throw Error(ErrorKind::MixedSystems, "source data was built by another engine");
    const bool same_singular = sorted(sys1.delta0()) == sorted(sys2.delta0());
    if (!same_singular && !sys1.delta0().empty())
      throw Error(ErrorKind::PreconditionViolated, "transport needs equal singular roots or a regular source");
    const auto w0 = g.reflection_subgroup(sys2.delta0());
    const auto& w = data.rep(0);
    const auto mode = data.chamber > 0 ? CosetMode::Longest : CosetMode::Shortest;
    if (!(g.coset_extreme(w, w0, mode) == w))
      throw Error(ErrorKind::PreconditionViolated, "top element is not extreme in its coset for the target");

    LinkageClassData out;
    out.cartan = cd_;
    out.group = data.group;
    out.anchor = lambda2;
    out.chamber = data.chamber;
    out.depth = depth.value_or(data.depth);
    out.top = shifted_action(*cd_, roots_of(g, w), lambda2);
    fill_window(out, w, w0);
    std::vector<int> source_row(out.reps.size());
    std::vector<int> source_col(out.elements.size());
    for (std::size_t r = 0; r < out.reps.size(); ++r) {
      source_row[r] = -1;
      for (std::size_t k = 0; k < data.reps.size(); ++k)
        if (data.rep(k) == out.rep(r)) source_row[r] = static_cast<int>(k);
      if (source_row[r] < 0) throw Error(ErrorKind::BudgetExceeded, "source data lacks a row needed by the target");
    }
    // A column whose source orbit point lies outside top - Q^+ is Bruhat-incomparable with every row in the
    // right direction, so its coefficient is zero; one that is merely too deep is a budget failure.
    const RootVec source_top = dot_offset(g, w, data.anchor);
    for (std::size_t j = 0; j < out.elements.size(); ++j) {
      source_col[j] = data.index_of(out.elements[j]);
      if (source_col[j] >= 0) continue;
      if (is_nonnegative(dot_offset(g, out.elements[j], data.anchor) - source_top))
        throw Error(ErrorKind::BudgetExceeded, "source data is too shallow for the target window");
    }
    out.coeffs.assign(out.reps.size(), std::vector<BigInt>(out.elements.size(), BigInt(0)));
    for (std::size_t r = 0; r < out.reps.size(); ++r)
      for (std::size_t j = 0; j < out.elements.size(); ++j)
        if (source_col[j] >= 0) out.coeffs[r][j] = data.coeffs[source_row[r]][source_col[j]];
    invert(out);
    return out;
  }

  /// ch L(rep_r o anchor) assembled from a row of window data.
  Character character_of_row(const LinkageClassData& data, int r) const {
    const RootVec base_off = data.offsets[data.reps[r]];
    const Weight base = data.top - Weight::from_root(*cd_, base_off);
    Character ch(base, data.depth - height(base_off));
    Character m = verma_character(base, ch.depth());
    for (std::size_t j = 0; j < data.elements.size(); ++j) {
      if (data.coeffs[r][j] == 0) continue;
      const RootVec rel = data.offsets[j] - base_off;
      if (!is_nonnegative(rel)) throw Error(ErrorKind::PreconditionViolated, "row has an anchor above its weight");
      ch.add_scaled(m, rel, data.coeffs[r][j]);
    }
    return ch;
  }

  /// Whether translation from lambda to mu keeps L(w o lambda) nonzero: w(Delta_0^+(mu) minus Delta_0^+(lambda))
  /// must lie in Delta^-(lambda) for C^+ and in Delta^+(lambda) for C^-.
  bool translation_survives(const CoxeterElement& w, const Weight& lambda, const Weight& mu) const {
    const auto sl = integral_system(lambda);
    const auto sm = integral_system(mu);
    auto kl = engine_for(sl);
    kl->group().check(w);
    int sign = 0;
    if (in_chamber(sl, lambda, +1) && in_chamber(sm, mu, +1)) sign = +1;
    else if (in_chamber(sl, lambda, -1) && in_chamber(sm, mu, -1)) sign = -1;
    if (sign == 0) throw Error(ErrorKind::PreconditionViolated, "lambda and mu must share a chamber");
    if (!same_roots(sl, sm)) throw Error(ErrorKind::PreconditionViolated, "integral root systems differ");
    const Weight diff = mu - lambda;
    for (int i = 0; i < cd_->rank(); ++i)
      if (!diff.h(i).is_integer()) throw Error(ErrorKind::PreconditionViolated, "mu - lambda is not integral");
    const auto d0l = sorted(sl.delta0());
    const auto d0m = sorted(sm.delta0());
    for (const auto& b : d0l)
      if (!std::binary_search(d0m.begin(), d0m.end(), b))
        throw Error(ErrorKind::PreconditionViolated, "Delta_0(lambda) must lie in Delta_0(mu)");
    for (const auto& b : sm.delta0()) {
      if (!is_positive_root(b) || std::binary_search(d0l.begin(), d0l.end(), b)) continue;
      const int s = root_sign(kl->group().apply(w, b));
      if (s * sign > 0) return false;
    }
    return true;
  }

  /// Weyl-Kac numerator sum_{w in W} (-1)^{l(w)} ch M(w o lambda) over the full Weyl group, lambda dominant
  /// integral regular. The orbit walk is breadth-first from lambda + rho, so the BFS layer is l(w).
  Character weyl_kac_character(const Weight& lambda, std::int64_t depth) const {
    if (depth < 0) throw Error(ErrorKind::PreconditionViolated, "depth must be nonnegative");
    const Weight shifted = lambda + Weight::rho(*cd_);
    std::vector<std::int64_t> p(cd_->rank());
    for (int i = 0; i < cd_->rank(); ++i) {
      const Scalar v = shifted.h(i);
      if (!v.is_integer() || v.sign() <= 0)
        throw Error(ErrorKind::NotDominantIntegral, "weyl_kac_character needs (alpha_i^vee, lambda + rho) in Z_{>0}");
      p[i] = v.to_integer().get_si();
    }
    Character ch(lambda, depth);
    const Character m = verma_character(lambda, depth);
    std::map<RootVec, int> layer{{RootVec(cd_->rank(), 0), 0}};
    std::vector<RootVec> frontier{RootVec(cd_->rank(), 0)};
    for (int len = 0; !frontier.empty(); ++len) {
      std::vector<RootVec> next;
      for (const auto& eta : frontier) {
        ch.add_scaled(m, eta, BigInt(len % 2 ? -1 : 1));
        for (int i = 0; i < cd_->rank(); ++i) {
          const RootVec ai = cd_->simple_root(i);
          const std::int64_t c = p[i] - coroot_pairing(*cd_, ai, eta);
          if (c <= 0) continue;
          RootVec up = eta + c * ai;
          if (height(up) > depth || layer.count(up)) continue;
          layer.emplace(up, len + 1);
          next.push_back(std::move(up));
        }
      }
      frontier = std::move(next);
    }
    return ch;
  }

 private:
  struct AnchorSetup {
    Weight mu;
    int sign = 1;
    CoxeterElement w;
    RootVec eta_w;
    std::vector<CoxeterElement> w0;
  };

  const std::map<RootVec, BigInt>& table(std::int64_t depth) const {
    std::lock_guard lock(mutex_);
    auto it = tables_.find(depth);
    if (it == tables_.end()) it = tables_.emplace(depth, partition_table(*cd_, depth)).first;
    return it->second;
  }

  static std::vector<RootVec> sorted(std::vector<RootVec> v) {
    std::sort(v.begin(), v.end());
    return v;
  }

  static bool same_roots(const IntegralSystem& a, const IntegralSystem& b) {
    if (a.level().is_rational() != b.level().is_rational()) return false;
    return sorted(a.simples()) == sorted(b.simples());
  }

  static std::vector<RootVec> roots_of(const CoxeterGroup& g, const CoxeterElement& w) {
    std::vector<RootVec> out;
    for (int s : w.word()) out.push_back(g.simple_roots()[s]);
    return out;
  }

  AnchorSetup anchor_setup(const IntegralSystem& sys, Route route) const {
    std::optional<ChamberClass> target;
    if (route == Route::Dominant) target = ChamberClass::CPlus;
    if (route == Route::Antidominant) target = ChamberClass::CMinus;
    const auto rep = dominant_representative(sys, target);
    auto kl = engine_for(sys);
    const auto& g = kl->group();
    const auto musys = compute_integral_system(rep.mu, cd_);
    if (musys.simples() != sys.simples()) throw Error(ErrorKind::PreconditionViolated, "simple systems disagree along the orbit");
    AnchorSetup s{rep.mu, rep.chamber == ChamberClass::CPlus ? 1 : -1, g.identity(), {}, {}};
    s.w0 = g.reflection_subgroup(musys.delta0());
    const auto w = g.inverse(g.from_word(rep.word));
    s.w = g.coset_extreme(w, s.w0, s.sign > 0 ? CosetMode::Longest : CosetMode::Shortest);
    s.eta_w = dot_offset(g, s.w, s.mu);
    return s;
  }

  /// Orbit points of the anchor between top = w o anchor and depth below it, expanded to whole cosets.
  void fill_window(LinkageClassData& data, const CoxeterElement& w, const std::vector<CoxeterElement>& w0) const {
    const auto& g = *data.group;
    const RootVec eta_w = dot_offset(g, w, data.anchor);
    const std::int64_t bound = data.chamber > 0 ? height(eta_w) + data.depth : -height(eta_w);
    struct Entry {
      CoxeterElement y;
      RootVec off;
      bool rep;
    };
    std::vector<Entry> entries;
    const auto mode = data.chamber > 0 ? CosetMode::Longest : CosetMode::Shortest;
    for (const auto& pt : enumerate_orbit(g, data.anchor, data.chamber, bound)) {
      const RootVec diff = pt.offset - eta_w;
      if (!is_nonnegative(diff) || height(diff) > data.depth) continue;
      const auto ext = g.coset_extreme(pt.element, w0, mode);
      for (const auto& y : g.coset(pt.element, w0)) entries.push_back({y, diff, y == ext});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      if (height(a.off) != height(b.off)) return height(a.off) < height(b.off);
      if (a.off != b.off) return a.off < b.off;
      return a.y < b.y;
    });
    data.elements.clear();
    data.offsets.clear();
    data.reps.clear();
    for (const auto& e : entries) {
      if (e.rep) data.reps.push_back(static_cast<int>(data.elements.size()));
      data.elements.push_back(e.y);
      data.offsets.push_back(e.off);
    }
    if (data.reps.empty() || !(data.rep(0) == w)) throw Error(ErrorKind::PreconditionViolated, "window top is not its own representative");
  }

  void fill_rows(LinkageClassData& data, const KLEngine& kl) const {
    const auto& g = *data.group;
    data.coeffs.assign(data.reps.size(), std::vector<BigInt>(data.elements.size(), BigInt(0)));
    for (std::size_t r = 0; r < data.reps.size(); ++r) {
      const auto& x = data.rep(static_cast<int>(r));
      for (std::size_t j = 0; j < data.elements.size(); ++j) {
        const auto& y = data.elements[j];
        if (data.chamber > 0) {
          if (!g.bruhat_leq(x, y)) continue;
          const BigInt v = kl.inverse_kl(x, y).at_one();
          data.coeffs[r][j] = (y.length() - x.length()) % 2 ? BigInt(-v) : v;
        } else {
          if (!g.bruhat_leq(y, x)) continue;
          const BigInt v = kl.kl_polynomial(y, x).at_one();
          data.coeffs[r][j] = (x.length() - y.length()) % 2 ? BigInt(-v) : v;
        }
      }
    }
  }

  /// The grouped matrix is unitriangular (rows sorted by depth); back-substitution over Z.
  static void invert(LinkageClassData& data) {
    const auto a = data.grouped_coeffs();
    const std::size_t n = a.size();
    for (std::size_t r = 0; r < n; ++r) {
      if (a[r][r] != 1) throw Error(ErrorKind::PreconditionViolated, "character matrix is not unitriangular");
      for (std::size_t s = 0; s < r; ++s)
        if (a[r][s] != 0) throw Error(ErrorKind::PreconditionViolated, "character matrix is not triangular");
    }
    // m = a^{-1}, upper unitriangular as well.
    std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n, BigInt(0)));
    for (std::size_t r = n; r-- > 0;) {
      m[r][r] = 1;
      for (std::size_t s = r + 1; s < n; ++s) {
        BigInt acc = 0;
        for (std::size_t k = r + 1; k <= s; ++k) acc += a[r][k] * m[k][s];
        m[r][s] = -acc;
      }
    }
    data.multiplicities = std::move(m);
  }

  std::shared_ptr<const CartanData> cd_;
  std::optional<std::filesystem::path> cache_dir_;
  mutable std::mutex mutex_;
  mutable std::map<std::int64_t, std::map<RootVec, BigInt>> tables_;
  mutable std::map<std::string, std::shared_ptr<KLEngine>> engines_;
};

}  // namespace kl_affine
