#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <tuple>
#include <vector>

#include "kl_affine/cartan.hpp"
#include "kl_affine/errors.hpp"
#include "kl_affine/linalg.hpp"
#include "kl_affine/weight.hpp"

namespace kl_affine::shapovalov {

// sl_2 loop realization of A1~: e (x) t^k, f (x) t^k, h (x) t^k and the central c.
// Root of e t^k is alpha_1 + k delta, of f t^k is -alpha_1 + k delta, of h t^k is k delta.
// Chevalley generators: e_1 = e, f_1 = f, e_0 = f t, f_0 = e t^{-1}, h_0 = c - h.
enum class Kind : std::uint8_t { E, F, H, C };

struct Gen {
  Kind kind;
  std::int64_t k = 0;
  friend auto operator<=>(const Gen&, const Gen&) = default;
};

/// Root coordinates (n0, n1).
inline RootVec root_of(const Gen& g) {
  switch (g.kind) {
    case Kind::E: return {g.k, g.k + 1};
    case Kind::F: return {g.k, g.k - 1};
    case Kind::H: return {g.k, g.k};
    case Kind::C: return {0, 0};
  }
  return {0, 0};
}

inline bool is_raising(const Gen& g) { return g.kind != Kind::C && root_sign(root_of(g)) > 0; }
inline bool is_lowering(const Gen& g) { return g.kind != Kind::C && root_sign(root_of(g)) < 0; }

/// Chevalley anti-involution: e t^k <-> f t^{-k}, h t^k -> h t^{-k}, c fixed.
inline Gen omega(const Gen& g) {
  switch (g.kind) {
    case Kind::E: return {Kind::F, -g.k};
    case Kind::F: return {Kind::E, -g.k};
    case Kind::H: return {Kind::H, -g.k};
    case Kind::C: return g;
  }
  return g;
}

using Term = std::pair<Rational, Gen>;

/// [x t^m, y t^n] = [x, y] t^{m+n} + m delta_{m,-n} kappa(x, y) c, kappa(e, f) = 1, kappa(h, h) = 2.
inline std::vector<Term> bracket(const Gen& a, const Gen& b) {
  std::vector<Term> out;
  const auto m = a.k, n = b.k;
  auto central = [&](std::int64_t kappa) {
    if (m == -n && m != 0) out.emplace_back(Rational(m * kappa), Gen{Kind::C, 0});
  };
  if (a.kind == Kind::C || b.kind == Kind::C) return out;
  if (a.kind == Kind::E && b.kind == Kind::F) {
    out.emplace_back(Rational(1), Gen{Kind::H, m + n});
    central(1);
  } else if (a.kind == Kind::F && b.kind == Kind::E) {
    out.emplace_back(Rational(-1), Gen{Kind::H, m + n});
    central(1);  // -n delta_{m,-n} c
  } else if (a.kind == Kind::H && b.kind == Kind::E) {
    out.emplace_back(Rational(2), Gen{Kind::E, m + n});
  } else if (a.kind == Kind::E && b.kind == Kind::H) {
    out.emplace_back(Rational(-2), Gen{Kind::E, m + n});
  } else if (a.kind == Kind::H && b.kind == Kind::F) {
    out.emplace_back(Rational(-2), Gen{Kind::F, m + n});
  } else if (a.kind == Kind::F && b.kind == Kind::H) {
    out.emplace_back(Rational(2), Gen{Kind::F, m + n});
  } else if (a.kind == Kind::H && b.kind == Kind::H) {
    central(2);
  }
  return out;
}

/// Coefficient of v_lambda in X_1 ... X_n v_lambda, by pushing the rightmost raising operator to the right.
class Evaluator {
 public:
  Evaluator(Rational h1, Rational level) : h1_(std::move(h1)), level_(std::move(level)) {}

  Rational eval(const std::vector<Gen>& word) {
    RootVec total{0, 0};
    for (const auto& g : word) total = total + root_of(g);
    if (!is_zero(total)) return 0;
    if (auto it = memo_.find(word); it != memo_.end()) return it->second;
    Rational result = 0;
    int pos = -1;
    for (int i = static_cast<int>(word.size()) - 1; i >= 0; --i)
      if (is_raising(word[i])) {
        pos = i;
        break;
      }
    if (pos < 0) {
      // Weight zero and nothing raising: only Cartan letters remain.
      result = 1;
      for (const auto& g : word) {
        if (g.kind == Kind::C) result *= level_;
        else if (g.kind == Kind::H && g.k == 0) result *= h1_;
        else {
          result = 0;
          break;
        }
      }
    } else if (pos + 1 < static_cast<int>(word.size())) {
      auto swapped = word;
      std::swap(swapped[pos], swapped[pos + 1]);
      result = eval(swapped);
      for (const auto& [coef, g] : bracket(word[pos], word[pos + 1])) {
        std::vector<Gen> w2(word.begin(), word.begin() + pos);
        w2.push_back(g);
        w2.insert(w2.end(), word.begin() + pos + 2, word.end());
        result += coef * eval(w2);
      }
    }
    memo_.emplace(word, result);
    return result;
  }

 private:
  Rational h1_, level_;
  std::map<std::vector<Gen>, Rational> memo_;
};

/// Ordered PBW monomials in lowering generators of total root -xi.
inline std::vector<std::vector<Gen>> pbw_basis(const RootVec& xi) {
  std::vector<Gen> gens;
  const std::int64_t ht = height(xi);
  for (std::int64_t k = -ht; k <= 0; ++k)
    for (Kind kind : {Kind::F, Kind::E, Kind::H}) {
      const Gen g{kind, k};
      if (!is_lowering(g)) continue;
      const RootVec r = -root_of(g);
      if (is_nonnegative(xi - r)) gens.push_back(g);
    }
  std::vector<std::vector<Gen>> out;
  std::vector<Gen> cur;
  std::function<void(std::size_t, RootVec)> rec = [&](std::size_t start, RootVec left) {
    if (is_zero(left)) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < gens.size(); ++i) {
      const RootVec r = -root_of(gens[i]);
      if (!is_nonnegative(left - r)) continue;
      cur.push_back(gens[i]);
      rec(i, left - r);
      cur.pop_back();
    }
  };
  rec(0, xi);
  return out;
}

inline void check_inputs(const CartanData& cd, const Weight& lambda, const RootVec& xi) {
  if (!cd.affine() || cd.rank() != 2 || cd.cartan(0, 1) != -2 || cd.cartan(1, 0) != -2)
    throw Error(ErrorKind::NotApplicable, "the Shapovalov oracle covers A1~ only");
  if (!lambda.is_rational()) throw Error(ErrorKind::IrrationalWeight, "the Shapovalov oracle needs rational weights");
  if (xi.size() != 2 || !is_nonnegative(xi)) throw Error(ErrorKind::PreconditionViolated, "xi must lie in Q^+");
  if (height(xi) > 4) throw Error(ErrorKind::DepthExceeded, "the Shapovalov oracle is limited to ht(xi) <= 4");
}

/// Gram matrix of the contravariant form on M(lambda)_{lambda - xi}, normalized by <v, v> = 1.
inline linalg::RatMatrix gram_matrix(const CartanData& cd, const Weight& lambda, const RootVec& xi) {
  check_inputs(cd, lambda, xi);
  const Rational h1 = lambda.h(1).rational_part();
  const Rational level = lambda.h(0).rational_part() + h1;
  Evaluator ev(h1, level);
  const auto basis = pbw_basis(xi);
  linalg::RatMatrix g(basis.size(), linalg::RatVector(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i; j < basis.size(); ++j) {
      std::vector<Gen> word;
      for (auto it = basis[i].rbegin(); it != basis[i].rend(); ++it) word.push_back(omega(*it));
      word.insert(word.end(), basis[j].begin(), basis[j].end());
      g[i][j] = g[j][i] = ev.eval(word);
    }
  return g;
}

struct OracleResult {
  std::size_t size = 0;
  int rank = 0;
  Rational det = 0;
};

inline OracleResult analyze(const CartanData& cd, const Weight& lambda, const RootVec& xi) {
  const auto g = gram_matrix(cd, lambda, xi);
  const auto rd = linalg::rank_and_det(g);
  return {g.size(), rd.rank, rd.det};
}

/// dim L(lambda)_{lambda - xi}: the rank of the Gram block.
inline int irreducible_dim(const CartanData& cd, const Weight& lambda, const RootVec& xi) {
  return analyze(cd, lambda, xi).rank;
}

}  // namespace kl_affine::shapovalov
