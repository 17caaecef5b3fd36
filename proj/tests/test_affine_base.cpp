#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"

using namespace kl_affine;

namespace {

std::shared_ptr<const CartanData> type(const char* t) { return std::make_shared<const CartanData>(CartanData::from_type(t)); }

RootVec rv(std::initializer_list<std::int64_t> v) { return RootVec(v); }

const char* kAffineTypes[] = {"A1~", "A2~", "A3~", "B3~", "C2~", "C3~", "D4~", "E6~", "E7~", "E8~", "F4~", "G2~"};

}  // namespace

TEST(Scalar, SignAgainstFloatingPoint) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> num(-40, 40), den(1, 9);
  for (int i = 0; i < 2000; ++i) {
    const Rational a(num(rng), den(rng)), b(num(rng), den(rng));
    const Scalar s(a, b);
    const double approx = a.get_d() + b.get_d() * std::sqrt(2.0);
    if (std::abs(approx) > 1e-9) EXPECT_EQ(s.sign(), approx > 0 ? 1 : -1) << s;
    else EXPECT_EQ(s.sign(), 0);
  }
}

TEST(Scalar, ExactNearZero) {
  // convergents of sqrt 2 from either side, off by about 7e-5
  EXPECT_EQ((Scalar::sqrt2() - Scalar(Rational(99, 70))).sign(), -1);
  EXPECT_EQ((Scalar::sqrt2() - Scalar(Rational(140, 99))).sign(), 1);
  EXPECT_EQ((Scalar::sqrt2() * Scalar::sqrt2()), Scalar(2));
}

TEST(Scalar, Predicates) {
  EXPECT_TRUE(Scalar(3).is_integer());
  EXPECT_FALSE(Scalar(Rational(1, 2)).is_integer());
  EXPECT_TRUE(Scalar(Rational(1, 2)).is_rational());
  EXPECT_FALSE(Scalar(Rational(0), Rational(1)).is_rational());
  EXPECT_FALSE(Scalar(Rational(2), Rational(1)).is_integer());
}

TEST(Scalar, ParseAndFormat) {
  EXPECT_EQ(Scalar::parse("-1/2"), Scalar(Rational(-1, 2)));
  EXPECT_EQ(Scalar::parse("3+1/2*t"), Scalar(Rational(3), Rational(1, 2)));
  EXPECT_EQ(Scalar::parse("0+-2*t").to_string(), "0+-2*t");
  EXPECT_EQ(Scalar(Rational(4, 6)).to_string(), "2/3");
  EXPECT_EQ(Scalar(Rational(6, 3), Rational(2, 4)), Scalar(Rational(2), Rational(1, 2)));
  for (const char* bad : {"", "1/0", "x", "1+2", "1/-2", "1+2*s"}) EXPECT_THROW(Scalar::parse(bad), Error) << bad;
}

TEST(CartanData, NullVectorsAndSymmetrizer) {
  for (const char* t : kAffineTypes) {
    const auto cd = CartanData::from_type(t);
    ASSERT_TRUE(cd.affine());
    for (int j = 0; j < cd.rank(); ++j) {
      std::int64_t a = 0, c = 0;
      for (int i = 0; i < cd.rank(); ++i) {
        a += cd.cartan(j, i) * cd.delta()[i];
        c += cd.c_coeffs()[i] * cd.cartan(i, j);
      }
      EXPECT_EQ(a, 0) << t;
      EXPECT_EQ(c, 0) << t;
      const Rational half_norm = cd.form(cd.simple_root(j), cd.simple_root(j)) / 2;
      const std::set<Rational> allowed{Rational(1, 3), Rational(1, 2), Rational(1), Rational(2), Rational(3)};
      EXPECT_TRUE(allowed.count(half_norm)) << t;
      for (int i = 0; i < cd.rank(); ++i)
        EXPECT_EQ(cd.form(cd.simple_root(i), cd.simple_root(j)), cd.form(cd.simple_root(j), cd.simple_root(i)));
    }
    EXPECT_EQ(cd.delta()[0], 1) << t;
    EXPECT_EQ(cd.form(cd.delta(), cd.delta()), 0) << t;
    EXPECT_EQ(cd.imaginary_multiplicity(), cd.rank() - 1);
  }
}

TEST(CartanData, UnknownTypes) {
  for (const char* t : {"Z3~", "A0", "E5", "B1~", "x", ""}) EXPECT_THROW(CartanData::from_type(t), Error) << t;
}

TEST(CartanData, HPairingMatchesForm) {
  // <h_i, lambda> = 2 (lambda, alpha_i) / (alpha_i, alpha_i) on root-lattice weights.
  for (const char* t : kAffineTypes) {
    const auto cd = CartanData::from_type(t);
    for (int j = 0; j < cd.rank(); ++j) {
      const auto w = Weight::from_root(cd, cd.simple_root(j));
      for (int i = 0; i < cd.rank(); ++i) {
        const Rational expect = 2 * cd.form(cd.simple_root(j), cd.simple_root(i)) / cd.form(cd.simple_root(i), cd.simple_root(i));
        EXPECT_EQ(w.h(i), Scalar(expect)) << t;
      }
    }
  }
}

TEST(Weight, LevelTwoWays) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-20, 20), den(1, 6);
  for (const char* t : {"A1~", "A3~", "B3~", "G2~", "F4~"}) {
    const auto cd = CartanData::from_type(t);
    for (int k = 0; k < 100; ++k) {
      std::vector<Scalar> p;
      for (int i = 0; i < cd.rank(); ++i) p.emplace_back(Rational(num(rng), den(rng)), Rational(num(rng) % 3, den(rng)));
      const Weight lambda(p, Scalar(num(rng)));
      EXPECT_EQ(level(cd, lambda), form(cd, cd.delta(), lambda)) << t;
    }
  }
}

TEST(Weight, ParseGrammar) {
  const auto cd = *type("A1~");
  const auto w = parse_weight(cd, "h0=-1,h1=-1/2,d=0");
  EXPECT_EQ(w.h(0), Scalar(-1));
  EXPECT_EQ(w.h(1), Scalar(Rational(-1, 2)));
  EXPECT_EQ(parse_weight(cd, "h1=2,h0=1+1/3*t").h(0), Scalar(Rational(1), Rational(1, 3)));
  EXPECT_EQ(format_weight(cd, w), "h0=-1,h1=-1/2,d=0");
  EXPECT_EQ(parse_weight(cd, format_weight(cd, parse_weight(cd, "h0=2/4+3*t,h1=0,d=1/3"))),
            parse_weight(cd, "h0=1/2+3*t,h1=0,d=1/3"));
  for (const char* bad : {"h0=1", "h0=1,h1=2,h2=3", "h0=1,h0=2,h1=0", "h0=1,h1=2,d=1,d=2", "k0=1,h1=1", "h0=1;h1=1",
                          "h0=1,h1=1/0", "h0=1,h1=", ""})
    EXPECT_THROW(parse_weight(cd, bad), Error) << bad;
  EXPECT_THROW(parse_weight(*type("A2"), "h0=1,h1=1,d=0"), Error);
}

TEST(Weight, RootDifferencesHaveIntegerCoordinates) {
  const auto cd = *type("A2~");
  const auto lambda = parse_weight(cd, "h0=1/3+1*t,h1=-2,h2=1/2,d=1");
  const RootVec eta = rv({2, -1, 3});
  const auto coords = root_lattice_coords(cd, lambda - (lambda - Weight::from_root(cd, eta)));
  ASSERT_TRUE(coords);
  EXPECT_EQ(*coords, eta);
}

TEST(Pairing, Examples) {
  const auto cd = *type("A1~");
  const RootVec a0 = rv({1, 0}), a1 = rv({0, 1});
  EXPECT_EQ(pairing(cd, a1, Weight::rho(cd)), Scalar(1));
  // lambda + rho with pairings (0, 1/2)
  const auto lr = parse_weight(cd, "h0=0,h1=1/2");
  EXPECT_EQ(pairing(cd, a1 + cd.delta(), lr), Scalar(1));
  const auto any = parse_weight(cd, "h0=3/7+1*t,h1=-2,d=5");
  EXPECT_EQ(pairing(cd, -a0, any), -pairing(cd, a0, any));
  EXPECT_THROW(pairing(cd, cd.delta(), any), Error);
  try {
    pairing(cd, 2 * cd.delta(), any);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ImaginaryCoroot);
  }
}

TEST(Pairing, Linear) {
  const auto cd = *type("G2~");
  const auto l1 = parse_weight(cd, "h0=1/2,h1=0+1*t,h2=-3");
  const auto l2 = parse_weight(cd, "h0=-2/3+1/5*t,h1=4,h2=1/7");
  const Scalar k(Rational(3, 2), Rational(-1));
  for (const auto& a : positive_real_roots(cd, 8))
    EXPECT_EQ(pairing(cd, a, l1 + k * l2), pairing(cd, a, l1) + k * pairing(cd, a, l2));
}

TEST(Reflect, Examples) {
  const auto cd = *type("A1~");
  const RootVec a0 = rv({1, 0}), a1 = rv({0, 1});
  EXPECT_EQ(reflect(cd, a1, Weight::rho(cd)), Weight::rho(cd) - Weight::from_root(cd, a1));
  EXPECT_EQ(reflect_root(cd, a0, a1 + cd.delta()), -a1 + 3 * cd.delta());
  const auto lambda = parse_weight(cd, "h0=1/3+1*t,h1=-5,d=2");
  for (const auto& a : positive_real_roots(cd, 7)) EXPECT_EQ(reflect(cd, a, reflect(cd, a, lambda)), lambda);
}

TEST(Reflect, PreservesFormAndLevel) {
  for (const char* t : {"A2~", "B3~", "G2~", "C2~"}) {
    const auto cd = CartanData::from_type(t);
    const auto roots = positive_real_roots(cd, 6);
    Weight lambda = Weight::zero(cd);
    std::vector<Scalar> p;
    for (int i = 0; i < cd.rank(); ++i) p.emplace_back(Rational(i + 1, 3), Rational(i % 2));
    lambda = Weight(p, Scalar(2));
    for (const auto& a : roots) {
      EXPECT_EQ(level(cd, reflect(cd, a, lambda)), level(cd, lambda)) << t;
      for (const auto& b : roots) {
        const auto rb = reflect_root(cd, a, b);
        EXPECT_EQ(cd.form(rb, rb), cd.form(b, b)) << t;
        EXPECT_EQ(cd.form(rb, reflect_root(cd, a, a)), cd.form(b, a)) << t;
      }
    }
  }
}

TEST(ShiftedAction, Examples) {
  const auto cd = *type("A1~");
  const RootVec a0 = rv({1, 0}), a1 = rv({0, 1});
  const auto lambda = parse_weight(cd, "h0=2/3,h1=0+1*t,d=-1");
  EXPECT_EQ(shifted_action(cd, {}, lambda), lambda);
  const std::vector<RootVec> s1{a1};
  EXPECT_EQ(shifted_action(cd, s1, Weight::zero(cd)), -Weight::from_root(cd, a1));
  const std::vector<RootVec> s0s1{a0, a1};
  EXPECT_EQ(shifted_action(cd, s0s1, Weight::zero(cd)), Weight::from_root(cd, rv({-3, -1})));
  for (const char* t : {"A2", "B3", "G2", "A3~"}) {
    const auto c2 = CartanData::from_type(t);
    const std::vector<RootVec> w{c2.simple_root(1)};
    EXPECT_EQ(shifted_action(c2, w, Weight::zero(c2)), -Weight::from_root(c2, c2.simple_root(1))) << t;
  }
}

TEST(ShiftedAction, PreservesShiftedLevel) {
  const auto cd = *type("A2~");
  const auto lambda = parse_weight(cd, "h0=1/2+1*t,h1=-1,h2=3/4");
  const auto roots = positive_real_roots(cd, 5);
  std::vector<RootVec> word;
  for (std::size_t i = 0; i < roots.size(); i += 3) {
    word.push_back(roots[i]);
    EXPECT_EQ(level(cd, shifted_action(cd, word, lambda)), level(cd, lambda));
  }
}

TEST(Roots, EnumerationMatchesBruteForce) {
  for (const char* t : {"A1~", "A2~", "C2~", "G2~", "B3~"}) {
    const auto cd = CartanData::from_type(t);
    const std::int64_t H = 9;
    std::set<RootVec> brute;
    RootVec v(cd.rank(), 0);
    std::function<void(int, std::int64_t)> rec = [&](int i, std::int64_t left) {
      if (i == cd.rank()) {
        if (is_zero(v)) return;
        const auto [g, n] = cd.split(v);
        const auto& cl = cd.classical_roots();
        if (std::find(cl.begin(), cl.end(), g) != cl.end()) brute.insert(v);
        return;
      }
      for (std::int64_t k = 0; k <= left; ++k) {
        v[i] = k;
        rec(i + 1, left - k);
      }
      v[i] = 0;
    };
    rec(0, H);
    const auto roots = positive_real_roots(cd, H);
    EXPECT_EQ(std::set<RootVec>(roots.begin(), roots.end()), brute) << t;
    for (const auto& r : roots) {
      EXPECT_GT(cd.form(r, r), 0);
      EXPECT_FALSE(cd.is_imaginary(r));
    }
    for (const auto& d : positive_imaginary_roots(cd, H)) {
      EXPECT_TRUE(cd.is_imaginary(d));
      EXPECT_EQ(cd.form(d, d), 0);
    }
  }
}

TEST(Roots, FiniteTypesHaveTheRightCount) {
  const std::vector<std::pair<const char*, std::size_t>> counts{{"A2", 3}, {"B2", 4}, {"G2", 6}, {"B3", 9}, {"D4", 12},
                                                               {"F4", 24}, {"E6", 36}, {"E8", 120}};
  for (const auto& [t, n] : counts) EXPECT_EQ(positive_real_roots(CartanData::from_type(t), 1000).size(), n) << t;
}
