#pragma once

// Quick invariant suite behind `klchar selftest`.

#include <functional>
#include <string>
#include <vector>

#include "kl_affine/kl_affine.hpp"

namespace selftest {

using namespace kl_affine;

struct Result {
  std::string name;
  bool passed = false;
  std::string detail;
};

inline std::vector<Result> run_all() {
  std::vector<Result> out;
  auto check = [&](const std::string& name, const std::function<std::string()>& body) {
    try {
      const auto detail = body();
      out.push_back({name, detail.empty(), detail});
    } catch (const std::exception& e) {
      out.push_back({name, false, e.what()});
    }
  };

  check("null vectors", [] {
    for (const char* t : {"A1~", "A2~", "A3~", "B3~", "C2~", "D4~", "E6~", "F4~", "G2~"}) {
      const auto cd = CartanData::from_type(t);
      for (int j = 0; j < cd.rank(); ++j) {
        std::int64_t a = 0, c = 0;
        for (int i = 0; i < cd.rank(); ++i) {
          a += cd.cartan(j, i) * cd.delta()[i];
          c += cd.c_coeffs()[i] * cd.cartan(i, j);
        }
        if (a != 0 || c != 0) return std::string("null vector fails for ") + t;
      }
    }
    return std::string();
  });

  check("length parity", [] {
    auto cd = std::make_shared<const CartanData>(CartanData::from_type("A2~"));
    CoxeterGroup g(compute_integral_system(Weight::zero(*cd), cd));
    for (const auto& w : g.enumerate_ball(4))
      for (int s = 0; s < g.rank(); ++s)
        if (std::abs(g.right_multiply(w, s).length() - w.length()) != 1) return std::string("l(ws) != l(w) +- 1");
    return std::string();
  });

  check("KL inversion (dihedral, l <= 6)", [] {
    auto cd = std::make_shared<const CartanData>(CartanData::from_type("A1~"));
    auto g = std::make_shared<const CoxeterGroup>(compute_integral_system(Weight::zero(*cd), cd));
    KLEngine kl(g);
    const auto ball = g->enumerate_ball(6);
    for (const auto& x : ball)
      for (const auto& z : ball) {
        if (!g->bruhat_leq(x, z)) continue;
        KLPoly sum;
        for (const auto& y : g->interval(x, z).elements()) {
          const auto t = kl.inverse_kl(x, y) * kl.kl_polynomial(y, z);
          if ((y.length() - x.length()) % 2) sum -= t; else sum += t;
        }
        if (!(sum == (x == z ? KLPoly::one() : KLPoly()))) return std::string("identity residual nonzero");
      }
    return std::string();
  });

  check("engine vs Shapovalov (ht <= 2)", [] {
    auto cd = std::make_shared<const CartanData>(CartanData::from_type("A1~"));
    CharacterEngine engine(cd);
    for (const char* w : {"h0=-2,h1=-2", "h0=0,h1=0", "h0=-1,h1=-1/2", "h0=0,h1=-4"}) {
      const auto lambda = parse_weight(*cd, w);
      const auto ch = engine.irreducible_character(lambda, 2);
      for (const auto& xi : qplus_up_to(2, 2))
        if (BigInt(shapovalov::irreducible_dim(*cd, lambda, xi)) != ch.coeff(xi))
          return std::string("mismatch at ") + w;
    }
    return std::string();
  });

  check("Weyl-Kac agreement", [] {
    auto cd = std::make_shared<const CartanData>(CartanData::from_type("A1~"));
    CharacterEngine engine(cd);
    for (const char* w : {"h0=0,h1=0", "h0=1,h1=0"}) {
      const auto lambda = parse_weight(*cd, w);
      if (!(engine.irreducible_character(lambda, 4) == engine.weyl_kac_character(lambda, 4)))
        return std::string("disagreement at ") + w;
    }
    return std::string();
  });

  check("critical level rejected", [] {
    auto cd = std::make_shared<const CartanData>(CartanData::from_type("A1~"));
    CharacterEngine engine(cd);
    try {
      engine.irreducible_character(parse_weight(*cd, "h0=-1,h1=-1"), 2);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::CriticalLevel) return std::string();
    }
    return std::string("no CriticalLevel error");
  });

  return out;
}

}  // namespace selftest
