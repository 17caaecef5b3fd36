#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <thread>

#include <unistd.h>

#include "oracles.hpp"

using namespace kl_affine;

namespace {

std::shared_ptr<const CoxeterGroup> group(const char* t, const char* w) {
  auto cd = std::make_shared<const CartanData>(CartanData::from_type(t));
  return std::make_shared<const CoxeterGroup>(compute_integral_system(parse_weight(*cd, w), cd));
}

std::shared_ptr<const CoxeterGroup> dihedral() { return group("A1~", "h0=0,h1=0"); }

KLPoly from_oracle(const std::vector<BigInt>& c) { return KLPoly(c); }

struct Case {
  const char* type;
  const char* weight;
  int max_length;
};

std::vector<Case> cases() {
  return {{"A1~", "h0=0,h1=0", 7},      {"A2~", "h0=0,h1=0,h2=0", 5}, {"C2~", "h0=0,h1=0,h2=0", 5},
          {"G2~", "h0=0,h1=0,h2=0", 5}, {"A3", "h0=0,h1=0,h2=0", 6},  {"B3", "h0=0,h1=0,h2=0", 9},
          {"G2", "h0=0,h1=0", 6},       {"A1~", "h0=-1,h1=-1/2", 6}};
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("kl_affine_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST(KLPoly, Arithmetic) {
  const KLPoly a({1, 1});
  const KLPoly b({1, 0, 1});
  EXPECT_EQ(a.to_string(), "1 + q");
  EXPECT_EQ(b.to_string(), "1 + q^2");
  EXPECT_EQ(KLPoly::monomial(-2, 1).to_string(), "-2*q");
  EXPECT_EQ(KLPoly().to_string(), "0");
  EXPECT_EQ(a * a, KLPoly({1, 2, 1}));
  EXPECT_EQ(a - a, KLPoly());
  EXPECT_TRUE((a - a).is_zero());
  EXPECT_EQ(b.degree(), 2);
  EXPECT_EQ(a.shifted(2), KLPoly({0, 0, 1, 1}));
  EXPECT_EQ((a * b).at_one(), 4);
  EXPECT_EQ(KLPoly({0, 0, 0}), KLPoly());
}

TEST(KL, DiagonalAndIncomparable) {
  const auto g = dihedral();
  KLEngine kl(g);
  for (const auto& w : g->enumerate_ball(6)) EXPECT_EQ(kl.kl_polynomial(w, w), KLPoly::one());
  EXPECT_TRUE(kl.kl_polynomial(g->from_word({0, 1}), g->from_word({1, 0})).is_zero());
  EXPECT_TRUE(kl.kl_polynomial(g->from_word({0, 1, 0}), g->from_word({1})).is_zero());
  EXPECT_EQ(kl.mu(g->from_word({0, 1}), g->from_word({1, 0})), 0);
}

TEST(KL, DihedralAllOnes) {
  const auto g = dihedral();
  KLEngine kl(g);
  const auto ball = g->enumerate_ball(8);
  for (const auto& w : ball)
    for (const auto& y : ball)
      if (g->bruhat_leq(y, w)) {
        EXPECT_EQ(kl.kl_polynomial(y, w), KLPoly::one());
      }
}

TEST(KL, MuExamples) {
  const auto g = dihedral();
  KLEngine kl(g);
  for (const auto& w : g->enumerate_ball(6))
    for (const auto& y : g->enumerate_ball(6)) {
      if (!g->bruhat_leq(y, w)) continue;
      const int gap = w.length() - y.length();
      if (gap == 1) {
        EXPECT_EQ(kl.mu(y, w), 1);
      }
      if (gap == 2) {
        EXPECT_EQ(kl.mu(y, w), 0);
      }
    }
}

TEST(KL, KnownNontrivialValues) {
  const auto a3 = group("A3", "h0=0,h1=0,h2=0");
  KLEngine kl(a3);
  // s_2 s_1 s_3 s_2 in Bourbaki numbering
  const auto w = a3->from_word({1, 0, 2, 1});
  EXPECT_EQ(kl.kl_polynomial(a3->identity(), w), KLPoly({1, 1}));
  EXPECT_EQ(kl.kl_polynomial(a3->generator(1), w), KLPoly({1, 1}));
  EXPECT_EQ(kl.kl_polynomial(a3->generator(0), w), KLPoly::one());

  const auto b3 = group("B3", "h0=0,h1=0,h2=0");
  KLEngine klb(b3);
  std::map<std::string, int> seen;
  const auto all = b3->enumerate_ball(9);
  for (const auto& x : all)
    for (const auto& y : all)
      if (b3->bruhat_leq(y, x)) ++seen[klb.kl_polynomial(y, x).to_string()];
  EXPECT_GT(seen["1 + q"], 0);
  EXPECT_GT(seen["1 + q^2"], 0);
  EXPECT_GT(seen["1 + q + q^2"], 0);
}

TEST(KL, DegreeBoundAndPositivity) {
  for (const auto& c : cases()) {
    const auto g = group(c.type, c.weight);
    KLEngine kl(g);
    const auto ball = g->enumerate_ball(std::min(c.max_length, 6));
    for (const auto& w : ball)
      for (const auto& y : ball) {
        if (y == w || !g->bruhat_leq(y, w)) continue;
        const auto p = kl.kl_polynomial(y, w);
        EXPECT_EQ(p.coeff(0), 1) << c.type;
        EXPECT_LE(2 * p.degree(), w.length() - y.length() - 1) << c.type;
        for (const auto& x : p.coeffs()) EXPECT_GE(x, 0) << c.type;
      }
  }
}

TEST(KL, DescentInvariance) {
  std::mt19937 rng(3);
  for (const auto& c : cases()) {
    const auto g = group(c.type, c.weight);
    KLEngine kl(g);
    const auto ball = g->enumerate_ball(std::min(c.max_length, 6));
    std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
    for (int k = 0; k < 300; ++k) {
      const auto& y = ball[pick(rng)];
      const auto& w = ball[pick(rng)];
      for (int s : g->descents_left(w)) EXPECT_EQ(kl.kl_polynomial(y, w), kl.kl_polynomial(g->left_multiply(s, y), w)) << c.type;
      for (int s : g->descents_right(w))
        EXPECT_EQ(kl.kl_polynomial(y, w), kl.kl_polynomial(g->right_multiply(y, s), w)) << c.type;
    }
  }
}

TEST(KL, MatchesHeckeOracle) {
  for (const auto& c : cases()) {
    const auto g = group(c.type, c.weight);
    KLEngine kl(g);
    oracle::HeckeOracle hecke(g, c.max_length);
    for (const auto& w : hecke.elements()) {
      const auto column = hecke.column(w);
      for (const auto& y : hecke.elements()) {
        if (y.length() > w.length()) continue;
        EXPECT_EQ(kl.kl_polynomial(y, w), from_oracle(column.at(y.word()))) << c.type << " " << c.weight;
      }
    }
  }
}

TEST(InverseKL, Examples) {
  const auto g = dihedral();
  KLEngine kl(g);
  for (const auto& x : g->enumerate_ball(5)) {
    EXPECT_EQ(kl.inverse_kl(x, x), KLPoly::one());
    for (int s = 0; s < 2; ++s) {
      const auto z = g->right_multiply(x, s);
      if (z.length() > x.length()) {
        EXPECT_EQ(kl.inverse_kl(x, z), KLPoly::one());
      }
    }
  }
  try {
    kl.inverse_kl(g->from_word({0, 1}), g->from_word({1, 0}));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotComparable);
  }
}

TEST(InverseKL, DefiningIdentity) {
  for (const auto& c : cases()) {
    const auto g = group(c.type, c.weight);
    KLEngine kl(g);
    const auto ball = g->enumerate_ball(std::min(c.max_length, c.type[2] == '~' && g->rank() >= 3 ? 4 : 8));
    for (const auto& x : ball)
      for (const auto& z : ball) {
        if (!g->bruhat_leq(x, z)) continue;
        KLPoly sum;
        for (const auto& y : g->interval(x, z).elements()) {
          const auto t = kl.inverse_kl(x, y) * kl.kl_polynomial(y, z);
          if ((y.length() - x.length()) % 2) sum -= t; else sum += t;
        }
        EXPECT_EQ(sum, x == z ? KLPoly::one() : KLPoly()) << c.type;
      }
  }
}

TEST(InverseKL, FiniteGroupsMatchLongestElementDuality) {
  // In a finite W, Q_{x,z} = P_{w0 z, w0 x}.
  for (const char* t : {"A3", "B3", "G2"}) {
    const auto g = group(t, t[0] == 'G' ? "h0=0,h1=0" : "h0=0,h1=0,h2=0");
    KLEngine kl(g);
    const auto all = g->enumerate_ball(100);
    const auto w0 = *std::max_element(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.length() < b.length(); });
    for (const auto& x : all)
      for (const auto& z : all)
        if (g->bruhat_leq(x, z)) {
          EXPECT_EQ(kl.inverse_kl(x, z), kl.kl_polynomial(g->multiply(w0, z), g->multiply(w0, x))) << t;
        }
  }
}

TEST(KLCache, WarmEqualsCold) {
  const auto g = group("A2~", "h0=0,h1=0,h2=0");
  KLEngine warm(g);
  const auto ball = g->enumerate_ball(5);
  std::vector<KLPoly> first;
  for (const auto& w : ball)
    for (const auto& y : ball) first.push_back(warm.kl_polynomial(y, w));
  EXPECT_GT(warm.memo_size(), 0u);
  std::size_t i = 0;
  for (const auto& w : ball)
    for (const auto& y : ball) {
      KLEngine cold(g);
      EXPECT_EQ(warm.kl_polynomial(y, w), first[i]);
      EXPECT_EQ(cold.kl_polynomial(y, w), first[i]);
      ++i;
      if (i > 400) return;
    }
}

TEST(KLCache, DiskRoundTrip) {
  const auto dir = temp_dir("roundtrip");
  const auto g = group("A2~", "h0=0,h1=0,h2=0");
  const auto ball = g->enumerate_ball(5);
  KLEngine a(g);
  for (const auto& w : ball)
    for (const auto& y : ball) a.kl_polynomial(y, w);
  a.save(dir);
  ASSERT_TRUE(std::filesystem::exists(a.cache_file(dir)));

  // a fresh group object with the same simple system reads the file
  const auto g2 = group("A2~", "h0=0,h1=0,h2=0");
  KLEngine b(g2);
  ASSERT_TRUE(b.load(dir));
  EXPECT_EQ(b.memo_size(), a.memo_size());
  for (std::size_t i = 0; i < ball.size(); ++i)
    for (std::size_t j = 0; j < ball.size(); ++j) {
      const auto w = g2->from_word(ball[i].word());
      const auto y = g2->from_word(ball[j].word());
      EXPECT_EQ(b.kl_polynomial(y, w), a.kl_polynomial(ball[j], ball[i]));
    }

  // a different system looks for a different file
  KLEngine other(dihedral());
  EXPECT_NE(other.cache_file(dir), a.cache_file(dir));
  EXPECT_FALSE(other.load(dir));

  // corrupt file is ignored
  {
    std::ofstream out(a.cache_file(dir), std::ios::binary | std::ios::trunc);
    out << "KLAFFINE garbage";
  }
  KLEngine c(g2);
  EXPECT_FALSE(c.load(dir));
  EXPECT_EQ(c.memo_size(), 0u);
  std::filesystem::remove_all(dir);
}

TEST(KLConcurrency, ParallelCallersAgree) {
  const auto g = group("A2~", "h0=0,h1=0,h2=0");
  const auto ball = g->enumerate_ball(6);
  KLEngine serial(g);
  std::vector<KLPoly> want;
  for (const auto& w : ball)
    for (const auto& y : ball) want.push_back(serial.kl_polynomial(y, w));

  KLEngine shared(g);
  std::vector<std::vector<KLPoly>> got(8);
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t)
    threads.emplace_back([&, t] {
      // each thread walks the table in a different order
      std::vector<std::size_t> order(ball.size());
      std::iota(order.begin(), order.end(), 0);
      std::mt19937 rng(t);
      std::shuffle(order.begin(), order.end(), rng);
      got[t].assign(want.size(), KLPoly());
      for (auto wi : order)
        for (std::size_t yi = 0; yi < ball.size(); ++yi) {
          got[t][wi * ball.size() + yi] = shared.kl_polynomial(ball[yi], ball[wi]);
          if (yi % 7 == 0 && g->bruhat_leq(ball[yi], ball[wi])) shared.inverse_kl(ball[yi], ball[wi]);
        }
    });
  for (auto& th : threads) th.join();
  for (const auto& g_t : got) EXPECT_EQ(g_t, want);
}

TEST(KL, MixedSystems) {
  const auto a = dihedral();
  const auto b = dihedral();
  KLEngine kl(a);
  try {
    kl.kl_polynomial(a->identity(), b->generator(0));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MixedSystems);
  }
}
