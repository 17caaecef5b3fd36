// Walks A1~ through the main cases: an antidominant Verma, its first reflection, a singular weight reached by
// transport, and an integrable module checked against Weyl-Kac.
#include <iostream>

#include "kl_affine/kl_affine.hpp"

using namespace kl_affine;

namespace {

void show(const CartanData& cd, const std::string& title, const Character& ch) {
  std::cout << title << "  ch L(" << format_weight(cd, ch.base()) << "), depth " << ch.depth() << "\n";
  for (const auto& [xi, c] : ch.terms()) {
    std::cout << "    e^{lambda";
    for (std::size_t i = 0; i < xi.size(); ++i)
      if (xi[i]) std::cout << " - " << (xi[i] == 1 ? "" : std::to_string(xi[i])) << "a" << i;
    std::cout << "}  x " << c << "\n";
  }
}

}  // namespace

int main() {
  auto cd = std::make_shared<const CartanData>(CartanData::from_type("A1~"));
  CharacterEngine engine(cd);
  const int depth = 4;

  const auto m2rho = parse_weight(*cd, "h0=-2,h1=-2");
  show(*cd, "[antidominant]", engine.irreducible_character(m2rho, depth));

  const auto refl = parse_weight(*cd, "h0=0,h1=-4,d=1");
  const auto f = engine.irreducible_formula(refl, depth);
  std::cout << "\n[s0 o (-2 rho)] chamber " << name(f.chamber) << ", anchor " << format_weight(*cd, f.anchor) << "\n";
  for (const auto& t : f.terms) {
    std::cout << "    " << (t.sign > 0 ? "+" : "-") << t.kl_at_one << " ch M(lambda";
    if (height(t.offset)) std::cout << " - (" << t.offset[0] << "a0 + " << t.offset[1] << "a1)";
    std::cout << ")\n";
  }
  show(*cd, "", engine.character_of(f, depth));

  // Singular target with W0 = {e, s0}, reached from a regular weight with the same integral roots.
  const auto singular = parse_weight(*cd, "h0=-1,h1=-1/2");
  const auto partner = parse_weight(*cd, "h0=0,h1=-1/2");
  const auto sys = engine.integral_system(partner);
  const auto top = shifted_action(*cd, std::vector<RootVec>{sys.simples()[0]}, partner);
  const auto data = engine.decomposition_multiplicities(top, 24);
  const auto moved = engine.transport_coefficients(data, singular, depth);
  const auto via = engine.character_of_row(moved, 0);
  std::cout << "\n[singular] transported from " << format_weight(*cd, partner) << ": "
            << (via == engine.irreducible_character(via.base(), via.depth()) ? "agrees" : "DISAGREES")
            << " with the direct formula\n";
  show(*cd, "", via);
  std::cout << "    oracle ranks:";
  for (const auto& xi : qplus_up_to(2, 3)) std::cout << " " << shapovalov::irreducible_dim(*cd, singular, xi);
  std::cout << "\n";

  const auto lam0 = parse_weight(*cd, "h0=1,h1=0");
  const auto basic = engine.irreducible_character(lam0, 6);
  std::cout << "\n[basic module] Weyl-Kac "
            << (basic == engine.weyl_kac_character(lam0, 6) ? "agrees" : "DISAGREES") << "\n";
  show(*cd, "", basic);
}
