#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace kl_affine;

namespace {

std::shared_ptr<const CartanData> cartan(const char* t) {
  return std::make_shared<const CartanData>(CartanData::from_type(t));
}

struct Fixture {
  std::shared_ptr<const CartanData> cd;
  CharacterEngine engine;
  explicit Fixture(const char* t) : cd(cartan(t)), engine(cd) {}
  Weight w(const char* s) const { return parse_weight(*cd, s); }
  Weight root(std::initializer_list<std::int64_t> n) const { return Weight::from_root(*cd, RootVec(n)); }
};

// A1~ weights spanning every chamber and integrality pattern.
std::vector<const char*> a1_suite() {
  return {"h0=-1/2,h1=-1/2", "h0=-2,h1=-2",  "h0=0,h1=-4,d=1", "h0=0,h1=0",     "h0=1,h1=0",
          "h0=-1,h1=-1/2",   "h0=1/2,h1=1/2", "h0=0+1*t,h1=0", "h0=-3,h1=0",     "h0=-1,h1=1/2",
          "h0=2,h1=-3",      "h0=0,h1=-1/2",  "h0=-3,h1=-1"};
}

std::vector<const char*> a2_irrational() {
  return {"h0=-1/2+1*t,h1=-1/2+-1*t,h2=0", "h0=0+1*t,h1=0+-1*t,h2=1", "h0=1/3+2*t,h1=-1+-2*t,h2=0",
          "h0=-3+1*t,h1=0+-1*t,h2=-1/2", "h0=0+1/2*t,h1=0+-1/2*t,h2=2"};
}

Weight at_offset(const LinkageClassData& d, int r) {
  return d.top - Weight::from_root(*d.cartan, d.offsets[d.reps[r]]);
}

}  // namespace

TEST(Verma, PartitionCounts) {
  Fixture f("A1~");
  const auto m = f.engine.verma_character(f.w("h0=0,h1=0"), 5);
  EXPECT_EQ(m.coeff({0, 0}), 1);
  EXPECT_EQ(m.coeff({0, 1}), 1);
  EXPECT_EQ(m.coeff({1, 1}), 2);
  for (const auto& xi : qplus_up_to(2, 5)) EXPECT_EQ(m.coeff(xi), oracle::partition_count(*f.cd, xi)) << xi[0] << "," << xi[1];
}

TEST(Verma, OtherTypes) {
  for (const char* t : {"A2~", "C2~", "G2~", "B3"}) {
    auto cd = cartan(t);
    CharacterEngine e(cd);
    const auto m = e.verma_character(Weight::zero(*cd), 4);
    for (const auto& xi : qplus_up_to(cd->rank(), 4)) EXPECT_EQ(m.coeff(xi), oracle::partition_count(*cd, xi)) << t;
  }
}

TEST(Verma, NegativeDepth) {
  Fixture f("A1~");
  EXPECT_THROW(f.engine.verma_character(f.w("h0=0,h1=0"), -1), Error);
}

TEST(Irreducible, EmptySystemIsVerma) {
  Fixture f("A1~");
  for (const char* s : {"h0=-1/2,h1=-1/2", "h0=1/2,h1=1/2"}) {
    const auto l = f.w(s);
    EXPECT_EQ(f.engine.irreducible_character(l, 6), f.engine.verma_character(l, 6)) << s;
  }
}

TEST(Irreducible, MinusTwoRhoIsVerma) {
  Fixture f("A1~");
  const auto l = f.w("h0=-2,h1=-2");
  const auto fm = f.engine.irreducible_formula(l, 6);
  EXPECT_EQ(fm.chamber, ChamberClass::CMinus);
  ASSERT_EQ(fm.terms.size(), 1u);
  EXPECT_EQ(f.engine.irreducible_character(l, 6), f.engine.verma_character(l, 6));
}

TEST(Irreducible, ReflectedMinusTwoRho) {
  Fixture f("A1~");
  const auto l = f.w("h0=0,h1=-4,d=1");
  EXPECT_EQ(l, f.w("h0=-2,h1=-2") + f.root({1, 0}));
  const auto ch = f.engine.irreducible_character(l, 6);
  const auto m = f.engine.verma_character(l, 6);
  for (const auto& xi : qplus_up_to(2, 6)) {
    BigInt want = m.coeff(xi);
    if (xi[0] >= 1) want -= m.coeff({xi[0] - 1, xi[1]});
    EXPECT_EQ(ch.coeff(xi), want);
  }
  const auto fm = f.engine.irreducible_formula(l, 6);
  ASSERT_EQ(fm.terms.size(), 2u);
  EXPECT_EQ(fm.terms[1].offset, RootVec({1, 0}));
  EXPECT_EQ(fm.terms[1].sign, -1);
}

TEST(Irreducible, TrivialModule) {
  Fixture f("A1~");
  const auto ch = f.engine.irreducible_character(f.w("h0=0,h1=0"), 6);
  ASSERT_EQ(ch.terms().size(), 1u);
  EXPECT_EQ(ch.coeff({0, 0}), 1);
}

TEST(Irreducible, WeylKacAgreement) {
  Fixture a1("A1~");
  for (const char* s : {"h0=0,h1=0", "h0=1,h1=0", "h0=0,h1=1", "h0=2,h1=1", "h0=1,h1=1,d=3"}) {
    const auto l = a1.w(s);
    EXPECT_EQ(a1.engine.irreducible_character(l, 6), a1.engine.weyl_kac_character(l, 6)) << s;
  }
  Fixture a2("A2~");
  for (const char* s : {"h0=1,h1=0,h2=0", "h0=0,h1=1,h2=1"}) {
    const auto l = a2.w(s);
    EXPECT_EQ(a2.engine.irreducible_character(l, 4), a2.engine.weyl_kac_character(l, 4)) << s;
  }
}

TEST(Irreducible, ShapovalovAgreement) {
  Fixture f("A1~");
  for (const char* s : a1_suite()) {
    const auto l = f.w(s);
    if (!l.is_rational()) continue;
    const auto ch = f.engine.irreducible_character(l, 3);
    for (const auto& xi : qplus_up_to(2, 3))
      EXPECT_EQ(ch.coeff(xi), shapovalov::irreducible_dim(*f.cd, l, xi)) << s << " xi=" << xi[0] << "," << xi[1];
  }
}

TEST(Irreducible, TruncationCoherence) {
  Fixture f("A1~");
  for (const char* s : a1_suite()) {
    const auto l = f.w(s);
    EXPECT_EQ(f.engine.irreducible_character(l, 6).truncated(3), f.engine.irreducible_character(l, 3)) << s;
    EXPECT_EQ(f.engine.verma_character(l, 6).truncated(2), f.engine.verma_character(l, 2)) << s;
  }
}

TEST(Irreducible, PositivityAndTriangularity) {
  Fixture a1("A1~");
  for (const char* s : a1_suite()) {
    const auto ch = a1.engine.irreducible_character(a1.w(s), 5);
    EXPECT_EQ(ch.coeff({0, 0}), 1) << s;
    for (const auto& [xi, c] : ch.terms()) {
      EXPECT_GT(c, 0) << s;
      EXPECT_TRUE(is_nonnegative(xi));
    }
  }
  Fixture a2("A2~");
  for (const char* s : a2_irrational()) {
    const auto ch = a2.engine.irreducible_character(a2.w(s), 3);
    EXPECT_EQ(ch.coeff({0, 0, 0}), 1) << s;
    for (const auto& [xi, c] : ch.terms()) EXPECT_GT(c, 0) << s;
  }
}

TEST(Irreducible, RoutesAgreeForFiniteGroups) {
  Fixture a1("A1~");
  const auto l = a1.w("h0=0+1*t,h1=0");
  EXPECT_EQ(a1.engine.irreducible_character(l, 5, Route::Dominant),
            a1.engine.irreducible_character(l, 5, Route::Antidominant));
  Fixture a2("A2~");
  int checked = 0;
  auto inputs = a2_irrational();
  inputs.push_back("h0=0+1*t,h1=0,h2=0");
  inputs.push_back("h0=1/2+1*t,h1=-1,h2=1/3");
  for (const char* s : inputs) {
    const auto x = a2.w(s);
    if (!a2.engine.integral_system(x).finite()) continue;
    ++checked;
    EXPECT_EQ(a2.engine.irreducible_character(x, 3, Route::Dominant),
              a2.engine.irreducible_character(x, 3, Route::Antidominant))
        << s;
  }
  EXPECT_GT(checked, 0);
}

TEST(Irreducible, RouteRefusedForInfiniteGroup) {
  Fixture f("A1~");
  // Positive rational level: there is no antidominant weight in the orbit.
  EXPECT_THROW(f.engine.irreducible_character(f.w("h0=1,h1=0"), 3, Route::Antidominant), Error);
}

TEST(Irreducible, CriticalLevel) {
  Fixture f("A1~");
  try {
    f.engine.irreducible_character(f.w("h0=-1,h1=-1"), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CriticalLevel);
  }
  EXPECT_THROW(f.engine.decomposition_multiplicities(f.w("h0=-3,h1=1"), 3), Error);
}

TEST(Decomposition, DiagonalIsOne) {
  Fixture f("A1~");
  for (const char* s : a1_suite()) {
    const auto d = f.engine.decomposition_multiplicities(f.w(s), 5);
    for (std::size_t r = 0; r < d.reps.size(); ++r) EXPECT_EQ(d.multiplicities[r][r], 1) << s;
  }
}

TEST(Decomposition, MinusTwoRhoPair) {
  Fixture f("A1~");
  const auto d = f.engine.decomposition_multiplicities(f.w("h0=0,h1=-4,d=1"), 4);
  EXPECT_EQ(d.chamber, -1);
  EXPECT_EQ(d.anchor, f.w("h0=-2,h1=-2"));
  const int s = d.row_of_offset({1, 0});
  EXPECT_EQ(d.multiplicities[0][s], 1);
}

TEST(Decomposition, InversionIdentity) {
  Fixture f("A1~");
  for (const char* s : a1_suite()) {
    const auto d = f.engine.decomposition_multiplicities(f.w(s), 6);
    const auto a = d.grouped_coeffs();
    const std::size_t n = a.size();
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        BigInt acc = 0;
        for (std::size_t k = 0; k < n; ++k) acc += a[r][k] * d.multiplicities[k][c];
        EXPECT_EQ(acc, r == c ? 1 : 0) << s;
      }
  }
}

TEST(Decomposition, ZeroUnlessLinked) {
  Fixture f("A1~");
  for (const char* s : a1_suite()) {
    const auto d = f.engine.decomposition_multiplicities(f.w(s), 6);
    for (std::size_t r = 0; r < d.reps.size(); ++r)
      for (std::size_t c = 0; c < d.reps.size(); ++c) {
        if (d.multiplicities[r][c] == 0) continue;
        EXPECT_TRUE(kk_linked(*f.cd, at_offset(d, r), at_offset(d, c), 6)) << s;
      }
  }
}

TEST(Decomposition, RowsMatchDirectCharacters) {
  Fixture f("A1~");
  for (const char* s : {"h0=0,h1=-4,d=1", "h0=0,h1=0", "h0=-1,h1=-1/2", "h0=2,h1=-3"}) {
    const auto d = f.engine.decomposition_multiplicities(f.w(s), 5);
    for (std::size_t r = 0; r < d.reps.size(); ++r) {
      const auto row = f.engine.character_of_row(d, static_cast<int>(r));
      EXPECT_EQ(row, f.engine.irreducible_character(row.base(), row.depth())) << s << " row " << r;
    }
  }
}

TEST(Transport, Identity) {
  Fixture f("A1~");
  const auto d = f.engine.decomposition_multiplicities(f.w("h0=0,h1=-4,d=1"), 5);
  const auto t = f.engine.transport_coefficients(d, d.anchor);
  EXPECT_EQ(t.top, d.top);
  EXPECT_EQ(t.coeffs, d.coeffs);
  EXPECT_EQ(t.multiplicities, d.multiplicities);
}

TEST(Transport, IndependenceUnderDeltaShift) {
  Fixture f("A1~");
  const auto d = f.engine.decomposition_multiplicities(f.w("h0=0,h1=-4,d=1"), 5);
  const auto l2 = f.w("h0=-2,h1=-2,d=-1");
  const auto t = f.engine.transport_coefficients(d, l2);
  EXPECT_EQ(t.coeffs, d.coeffs);
  for (std::size_t r = 0; r < t.reps.size(); ++r) {
    const auto row = f.engine.character_of_row(t, static_cast<int>(r));
    EXPECT_EQ(row, f.engine.irreducible_character(row.base(), row.depth()));
  }
}

TEST(Transport, RegularToSingular) {
  Fixture f("A1~");
  // Regular C^+ source and a singular target with Delta_0 = {+-alpha_0}.
  const auto lambda = f.w("h0=0,h1=1/2");
  const auto target = f.w("h0=-1,h1=1/2");
  const auto sys = f.engine.integral_system(lambda);
  auto g = f.engine.group_for(sys);
  const auto top = shifted_action(*f.cd, std::vector<RootVec>{sys.simples()[0]}, lambda);
  const auto d = f.engine.decomposition_multiplicities(top, 12);
  ASSERT_EQ(d.anchor, lambda);
  ASSERT_EQ(d.rep(0), g->generator(0));
  const auto t = f.engine.transport_coefficients(d, target, 4);
  EXPECT_EQ(t.anchor, target);
  for (std::size_t r = 0; r < t.reps.size(); ++r) {
    const auto row = f.engine.character_of_row(t, static_cast<int>(r));
    EXPECT_EQ(row, f.engine.irreducible_character(row.base(), row.depth())) << "row " << r;
  }
}

TEST(Transport, Errors) {
  Fixture f("A1~");
  const auto d = f.engine.decomposition_multiplicities(f.w("h0=0,h1=-4,d=1"), 4);
  auto kind_of = [&](const Weight& l2) -> std::optional<ErrorKind> {
    try {
      f.engine.transport_coefficients(d, l2);
    } catch (const Error& e) {
      return e.kind();
    }
    return std::nullopt;
  };
  EXPECT_EQ(kind_of(f.w("h0=0,h1=0")), ErrorKind::ChambersDiffer);
  EXPECT_EQ(kind_of(f.w("h0=-5/2,h1=-2")), ErrorKind::IntegralityMismatch);
}

TEST(Translation, Examples) {
  Fixture f("A1~");
  const auto lambda = f.w("h0=0,h1=1/2");
  const auto mu = f.w("h0=-1,h1=1/2");
  const auto g = f.engine.group_for(f.engine.integral_system(lambda));
  EXPECT_TRUE(f.engine.translation_survives(g->generator(0), lambda, mu));
  EXPECT_FALSE(f.engine.translation_survives(g->identity(), lambda, mu));
  EXPECT_TRUE(f.engine.translation_survives(g->identity(), lambda, f.w("h0=1,h1=3/2")));
  EXPECT_TRUE(f.engine.translation_survives(g->generator(1), lambda, f.w("h0=1,h1=3/2")));
  EXPECT_THROW(f.engine.translation_survives(g->identity(), lambda, f.w("h0=-2,h1=-2")), Error);
}

TEST(WeylKac, Errors) {
  Fixture f("A1~");
  try {
    f.engine.weyl_kac_character(f.w("h0=-2,h1=-2"), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotDominantIntegral);
  }
  EXPECT_THROW(f.engine.weyl_kac_character(f.w("h0=1/2,h1=0"), 3), Error);
  EXPECT_EQ(f.engine.weyl_kac_character(f.w("h0=3,h1=1"), 4).coeff({0, 0}), 1);
}
