#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "kl_affine/character.hpp"
#include "kl_affine/integral_system.hpp"
#include "kl_affine/kl.hpp"
#include "kl_affine/shapovalov.hpp"

namespace kl_affine::json_io {

using nlohmann::json;

/// Integers that fit in 64 bits are emitted as numbers, larger ones as decimal strings.
inline json big(const BigInt& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

inline json root(const RootVec& v) { return json(v); }

inline json roots(const std::vector<RootVec>& v) {
  json out = json::array();
  for (const auto& r : v) out.push_back(root(r));
  return out;
}

inline json word(const CoxeterElement& w) { return json(w.word()); }

inline json poly(const KLPoly& p) {
  json out = json::array();
  for (const auto& c : p.coeffs()) out.push_back(big(c));
  return out;
}

inline json weight(const CartanData& cd, const Weight& w) { return format_weight(cd, w); }

inline json integral_system(const IntegralSystem& sys) {
  const auto& cd = sys.cartan();
  json progs = json::array();
  for (const auto& p : sys.progressions())
    progs.push_back({{"base", root(p.base)},
                     {"period", p.period},
                     {"all_integers", p.all_integers},
                     {"base_pairing", p.base_pairing.to_string()},
                     {"step", p.step.to_string()}});
  json out = {{"type", cd.name()},
              {"weight", weight(cd, sys.lambda())},
              {"level", sys.level().to_string()},
              {"chamber", name(classify_chamber(sys))},
              {"empty", sys.empty()},
              {"finite", sys.finite()},
              {"progressions", progs},
              {"simples", roots(sys.simples())},
              {"delta0", roots(sys.delta0())},
              {"coxeter_matrix", sys.coxeter_matrix()}};
  return out;
}

inline json character(const CartanData& cd, const Character& ch) {
  json terms = json::array();
  for (const auto& [xi, c] : ch.terms()) terms.push_back({{"xi", root(xi)}, {"coeff", big(c)}});
  return {{"base_weight", weight(cd, ch.base())}, {"depth", ch.depth()}, {"terms", terms}};
}

inline json formula(const IrreducibleFormula& f) {
  json out = json::array();
  for (const auto& t : f.terms)
    out.push_back({{"y_word", word(t.y)}, {"sign", t.sign}, {"kl_at_1", big(t.kl_at_one)}, {"offset", root(t.offset)}});
  return out;
}

inline json char_output(const CartanData& cd, const IrreducibleFormula& f, const Character& ch) {
  json out = character(cd, ch);
  out["formula"] = formula(f);
  out["anchor"] = weight(cd, f.anchor);
  out["chamber"] = name(f.chamber);
  out["w_word"] = f.w ? word(*f.w) : json::array();
  return out;
}

inline json matrix(const std::vector<std::vector<BigInt>>& m) {
  json out = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const auto& x : row) r.push_back(big(x));
    out.push_back(r);
  }
  return out;
}

inline json linkage(const LinkageClassData& d) {
  const auto& cd = *d.cartan;
  json reps = json::array();
  for (std::size_t r = 0; r < d.reps.size(); ++r)
    reps.push_back({{"word", word(d.rep(static_cast<int>(r)))}, {"offset", root(d.offsets[d.reps[r]])}});
  json elements = json::array();
  for (std::size_t j = 0; j < d.elements.size(); ++j)
    elements.push_back({{"word", word(d.elements[j])}, {"offset", root(d.offsets[j])}});
  return {{"top", weight(cd, d.top)},
          {"anchor", weight(cd, d.anchor)},
          {"chamber", d.chamber > 0 ? "CPlus" : "CMinus"},
          {"depth", d.depth},
          {"reps", reps},
          {"elements", elements},
          {"coeffs", matrix(d.coeffs)},
          {"multiplicities", matrix(d.multiplicities)}};
}

inline json oracle(const shapovalov::OracleResult& r) {
  return {{"size", r.size}, {"rank", r.rank}, {"det", format_rational(r.det)}};
}

inline json error(const Error& e) {
  std::string msg = e.what();
  const std::string prefix = std::string(name(e.kind())) + ": ";
  if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
  return {{"error", name(e.kind())}, {"message", msg}};
}

}  // namespace kl_affine::json_io
