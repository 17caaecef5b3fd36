#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "kl_affine/coxeter.hpp"
#include "kl_affine/scalar.hpp"

namespace kl_affine {

/// Polynomial in q with big-integer coefficients, ascending powers, no trailing zeros.
class KLPoly {
 public:
  KLPoly() = default;
  explicit KLPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { trim(); }
  static KLPoly one() { return KLPoly({BigInt(1)}); }
  static KLPoly monomial(BigInt c, int k) {
    std::vector<BigInt> v(k + 1, BigInt(0));
    v[k] = std::move(c);
    return KLPoly(std::move(v));
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  BigInt coeff(int k) const { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : BigInt(0); }
  const std::vector<BigInt>& coeffs() const { return c_; }

  BigInt at_one() const {
    BigInt s = 0;
    for (const auto& x : c_) s += x;
    return s;
  }

  KLPoly shifted(int k) const {
    if (is_zero()) return {};
    std::vector<BigInt> v(k, BigInt(0));
    v.insert(v.end(), c_.begin(), c_.end());
    return KLPoly(std::move(v));
  }

  KLPoly& operator+=(const KLPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), BigInt(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  KLPoly& operator-=(const KLPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), BigInt(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  KLPoly operator-() const {
    KLPoly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend KLPoly operator+(KLPoly a, const KLPoly& b) { return a += b; }
  friend KLPoly operator-(KLPoly a, const KLPoly& b) { return a -= b; }
  friend KLPoly operator*(const KLPoly& a, const KLPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<BigInt> v(a.c_.size() + b.c_.size() - 1, BigInt(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    return KLPoly(std::move(v));
  }
  friend KLPoly operator*(const BigInt& k, const KLPoly& a) { return KLPoly({k}) * a; }
  friend bool operator==(const KLPoly& a, const KLPoly& b) { return a.c_ == b.c_; }

  /// `c0 + c1*q + c2*q^2`, zero terms dropped; the zero polynomial prints as `0`.
  std::string to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (c_[k] == 0) continue;
      std::string mono = k == 0 ? "" : k == 1 ? "q" : "q^" + std::to_string(k);
      BigInt a = abs(c_[k]);
      std::string term = k == 0 ? a.get_str() : (a == 1 ? mono : a.get_str() + "*" + mono);
      if (out.empty())
        out = (c_[k] < 0 ? "-" : "") + term;
      else
        out += (c_[k] < 0 ? " - " : " + ") + term;
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<BigInt> c_;
};

inline std::ostream& operator<<(std::ostream& os, const KLPoly& p) { return os << p.to_string(); }

/// Kazhdan-Lusztig polynomials of one Coxeter group, memoized. Safe for concurrent callers: the memo is
/// guarded by a shared mutex, no lock is held while recursing, and every stored value is deterministic.
class KLEngine {
 public:
  static constexpr std::uint32_t kCacheVersion = 1;

  explicit KLEngine(std::shared_ptr<const CoxeterGroup> group) : g_(std::move(group)) {}

  const CoxeterGroup& group() const { return *g_; }
  std::shared_ptr<const CoxeterGroup> group_ptr() const { return g_; }

  KLPoly kl_polynomial(const CoxeterElement& y, const CoxeterElement& w) const {
    g_->check(y);
    g_->check(w);
    if (y == w) return KLPoly::one();
    if (y.length() >= w.length() || !g_->bruhat_leq(y, w)) return {};
    return p_leq(y, w);
  }

  /// Coefficient of q^{(l(w)-l(y)-1)/2} in P_{y,w}; zero when the exponent is not an integer.
  BigInt mu(const CoxeterElement& y, const CoxeterElement& w) const {
    const int gap = w.length() - y.length();
    if (gap <= 0 || gap % 2 == 0) return 0;
    return kl_polynomial(y, w).coeff((gap - 1) / 2);
  }

  /// Q_{x,z} from sum_{x<=y<=z} (-1)^{l(y)-l(x)} Q_{x,y} P_{y,z} = delta_{x,z}.
  KLPoly inverse_kl(const CoxeterElement& x, const CoxeterElement& z) const {
    g_->check(x);
    g_->check(z);
    if (!g_->bruhat_leq(x, z)) throw Error(ErrorKind::NotComparable, "inverse_kl requires x <= z");
    if (x == z) return KLPoly::one();
    if (auto hit = lookup(q_memo_, key(x, z))) return *hit;
    const auto iv = g_->interval(x, z);
    std::vector<std::pair<CoxeterElement, KLPoly>> done;
    for (const auto& layer : iv.by_length)
      for (const auto& y : layer) {
        KLPoly q;
        if (y == x) {
          q = KLPoly::one();
        } else if (auto hit = lookup(q_memo_, key(x, y))) {
          q = *hit;
        } else {
          KLPoly acc;
          for (const auto& [u, qu] : done) {
            if (u.length() >= y.length()) continue;
            const KLPoly p = kl_polynomial(u, y);
            if (p.is_zero()) continue;
            const KLPoly t = qu * p;
            if ((u.length() - x.length()) % 2 == 0) acc += t; else acc -= t;
          }
          q = (y.length() - x.length()) % 2 == 0 ? -acc : acc;
          store(q_memo_, key(x, y), q);
        }
        done.emplace_back(y, std::move(q));
      }
    return done.back().second;
  }

  std::size_t memo_size() const {
    std::shared_lock lock(mutex_);
    return p_memo_.size();
  }

  void clear() {
    std::unique_lock lock(mutex_);
    p_memo_.clear();
    q_memo_.clear();
    below_.clear();
  }

  /// Identifies the Coxeter system for the on-disk cache: Cartan type plus the simple roots.
  std::string fingerprint() const {
    std::ostringstream os;
    os << g_->cartan().name();
    for (const auto& r : g_->simple_roots()) {
      os << "|";
      for (auto x : r) os << x << ",";
    }
    return os.str();
  }

  std::filesystem::path cache_file(const std::filesystem::path& dir) const {
    std::ostringstream os;
    os << "kl-" << std::hex << std::hash<std::string>{}(fingerprint()) << ".bin";
    return dir / os.str();
  }

  /// Merges a previously saved memo. Missing, foreign, stale or corrupt files are ignored.
  bool load(const std::filesystem::path& dir) {
    std::ifstream in(cache_file(dir), std::ios::binary);
    if (!in) return false;
    try {
      if (read_string(in) != "KLAFFINE" || read_u32(in) != kCacheVersion || read_string(in) != fingerprint())
        return false;
      const auto n = read_u32(in);
      std::unordered_map<std::string, KLPoly> loaded;
      for (std::uint32_t i = 0; i < n; ++i) {
        std::string k = read_string(in);
        const auto m = read_u32(in);
        std::vector<BigInt> c;
        for (std::uint32_t j = 0; j < m; ++j) c.emplace_back(read_string(in), 16);
        loaded.emplace(std::move(k), KLPoly(std::move(c)));
      }
      std::unique_lock lock(mutex_);
      p_memo_.merge(loaded);
      return true;
    } catch (const std::exception&) {
      return false;
    }
  }

  void save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    const auto path = cache_file(dir);
    const auto tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      write_string(out, "KLAFFINE");
      write_u32(out, kCacheVersion);
      write_string(out, fingerprint());
      std::shared_lock lock(mutex_);
      std::map<std::string, const KLPoly*> sorted;
      for (const auto& [k, v] : p_memo_) sorted.emplace(k, &v);
      write_u32(out, static_cast<std::uint32_t>(sorted.size()));
      for (const auto& [k, v] : sorted) {
        write_string(out, k);
        write_u32(out, static_cast<std::uint32_t>(v->coeffs().size()));
        for (const auto& c : v->coeffs()) write_string(out, c.get_str(16));
      }
    }
    std::filesystem::rename(tmp, path);
  }

 private:
  static std::string key(const CoxeterElement& a, const CoxeterElement& b) {
    std::string k;
    k.reserve(a.word().size() + b.word().size() + 1);
    for (int s : a.word()) k.push_back(static_cast<char>('A' + s));
    k.push_back(':');
    for (int s : b.word()) k.push_back(static_cast<char>('A' + s));
    return k;
  }

  std::optional<KLPoly> lookup(const std::unordered_map<std::string, KLPoly>& memo, const std::string& k) const {
    std::shared_lock lock(mutex_);
    auto it = memo.find(k);
    if (it == memo.end()) return std::nullopt;
    return it->second;
  }

  void store(std::unordered_map<std::string, KLPoly>& memo, const std::string& k, const KLPoly& v) const {
    std::unique_lock lock(mutex_);
    memo.emplace(k, v);
  }

  std::shared_ptr<const BruhatInterval> below(const CoxeterElement& v) const {
    const std::string k = key(v, v);
    {
      std::shared_lock lock(mutex_);
      if (auto it = below_.find(k); it != below_.end()) return it->second;
    }
    auto iv = std::make_shared<const BruhatInterval>(g_->interval_below(v));
    std::unique_lock lock(mutex_);
    return below_.emplace(k, iv).first->second;
  }

  /// P_{y,w} for y < w. With s the first letter of w and v = s w:
  /// P_{y,w} = P_{sy,w} if sy < y, and otherwise
  /// P_{y,w} = q P_{sy,v} + P_{y,v} - sum_{y<=z<v, sz<z} mu(z,v) q^{(l(w)-l(z))/2} P_{y,z}.
  KLPoly p_leq(const CoxeterElement& y, const CoxeterElement& w) const {
    const std::string k = key(y, w);
    if (auto hit = lookup(p_memo_, k)) return *hit;
    const int s = w.word().front();
    KLPoly result;
    if (g_->is_left_descent(y, s)) {
      result = kl_polynomial(g_->left_multiply(s, y), w);
    } else {
      const auto v = g_->left_multiply(s, w);
      result = kl_polynomial(g_->left_multiply(s, y), v).shifted(1) + kl_polynomial(y, v);
      for (const auto& layer : below(v)->by_length)
        for (const auto& z : layer) {
          if (z.length() < y.length() || z.length() >= v.length()) continue;
          if ((v.length() - z.length()) % 2 == 0 || !g_->is_left_descent(z, s)) continue;
          const BigInt m = mu(z, v);
          if (m == 0) continue;
          const KLPoly pyz = kl_polynomial(y, z);
          if (pyz.is_zero()) continue;
          result -= KLPoly::monomial(m, (w.length() - z.length()) / 2) * pyz;
        }
    }
    store(p_memo_, k, result);
    return result;
  }

  static void write_u32(std::ostream& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  static std::uint32_t read_u32(std::istream& in) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      const int c = in.get();
      if (c == EOF) throw std::runtime_error("truncated cache");
      v |= static_cast<std::uint32_t>(c) << (8 * i);
    }
    return v;
  }
  static void write_string(std::ostream& out, const std::string& s) {
    write_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  static std::string read_string(std::istream& in) {
    const auto n = read_u32(in);
    if (n > (1u << 24)) throw std::runtime_error("corrupt cache");
    std::string s(n, '\0');
    if (!in.read(s.data(), n)) throw std::runtime_error("truncated cache");
    return s;
  }

  std::shared_ptr<const CoxeterGroup> g_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::string, KLPoly> p_memo_;
  mutable std::unordered_map<std::string, KLPoly> q_memo_;
  mutable std::unordered_map<std::string, std::shared_ptr<const BruhatInterval>> below_;
};

}  // namespace kl_affine
