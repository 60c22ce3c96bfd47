#include <gtest/gtest.h>

#include <map>
#include <random>

#include "coxbound/coxeter/group.hpp"

using namespace coxbound;

namespace {

// Dihedral group of order 2m as affine maps x -> sign*x + shift on Z/m.
struct Dih {
  int sign = 1, shift = 0;
  auto operator<=>(const Dih&) const = default;
};

Dih dih_gen(int m, Gen g) { return Dih{-1, g == 0 ? 0 : 1 % m}; }

Dih dih_mul(int m, Dih a, Dih b) {  // a after b is the product a*b acting on the left
  return Dih{a.sign * b.sign, ((a.sign * b.shift + a.shift) % m + m) % m};
}

Dih dih_eval(int m, const Word& w) {
  Dih r;
  for (Gen g : w) r = dih_mul(m, r, dih_gen(m, g));
  return r;
}

// ShortLex-least word for every element, by brute-force enumeration of all words.
std::map<Dih, Word> dih_normal_forms(int m) {
  std::map<Dih, Word> nf;
  std::vector<Word> layer{Word{}};
  nf[Dih{}] = Word{};
  for (int len = 1; len <= m; ++len) {
    std::vector<Word> next;
    for (const Word& w : layer)
      for (Gen g : {Gen{0}, Gen{1}}) {
        Word v = w;
        v.push_back(g);
        next.push_back(v);
      }
    std::sort(next.begin(), next.end());
    for (const Word& v : next) nf.emplace(dih_eval(m, v), v);
    layer = std::move(next);
  }
  return nf;
}

// Brute-force braid/cancellation rewriting: all words reachable by braid moves,
// cancelling ss whenever it appears, until nothing shortens.
Word oracle_reduce(const CoxeterSystem& sys, Word w) {
  for (;;) {
    std::set<Word> seen{w};
    std::vector<Word> stack{w};
    bool shortened = false;
    while (!stack.empty() && !shortened) {
      Word v = stack.back();
      stack.pop_back();
      for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        if (v[i] == v[i + 1]) {
          v.erase(v.begin() + i, v.begin() + i + 2);
          w = v;
          shortened = true;
          break;
        }
        const int m = sys.order(v[i], v[i + 1]);
        if (m == kInfinity || i + m > v.size()) continue;
        bool alt = true;
        for (int k = 0; k < m; ++k) alt &= v[i + k] == (k % 2 ? v[i + 1] : v[i]);
        if (!alt) continue;
        Word u = v;
        for (int k = 0; k < m; ++k) u[i + k] = (k % 2 ? v[i] : v[i + 1]);
        if (seen.insert(u).second) stack.push_back(u);
      }
    }
    if (!shortened) return *seen.begin();
  }
}

}  // namespace

TEST(CoxeterSystem, ValidatesMatrix) {
  EXPECT_THROW(CoxeterSystem({"s", "t"}, {{1, 3}, {2, 1}}), InputError);
  EXPECT_THROW(CoxeterSystem({"s", "t"}, {{1, 1}, {1, 1}}), InputError);
  EXPECT_THROW(CoxeterSystem({"s", "s"}, {{1, 3}, {3, 1}}), InputError);
  EXPECT_TRUE(polygon_racg(5).is_right_angled());
  EXPECT_FALSE(dihedral(3).is_right_angled());
}

TEST(CoxeterSystem, JsonRoundTrip) {
  auto j = nlohmann::json::parse(R"({"labels":["s","t","u"],"orders":[[1,3,"inf"],[3,1,2],["inf",2,1]]})");
  CoxeterSystem sys = coxeter_from_json(j);
  EXPECT_EQ(sys.order(0, 2), kInfinity);
  EXPECT_EQ(coxeter_from_json(to_json(sys)), sys);
  EXPECT_THROW(coxeter_from_json(nlohmann::json::parse(R"({"labels":["s"]})")), InputError);
}

TEST(Reduce, SpecExamples) {
  CoxeterGroup a2(dihedral(3));
  CoxeterGroup dinf(dihedral(kInfinity));
  EXPECT_TRUE(a2.parse("s s").is_identity());
  EXPECT_EQ(a2.format(a2.parse("s t s t")), "t s");
  EXPECT_EQ(dinf.format(dinf.parse("s t s t")), "s t s t");
  EXPECT_THROW(a2.reduce({0, 5}), InputError);
}

TEST(Multiply, SpecExamples) {
  CoxeterGroup a2(dihedral(3));
  EXPECT_EQ(a2.multiply(a2.parse("s t"), a2.identity()), a2.parse("s t"));
  EXPECT_EQ(a2.format(a2.multiply(a2.parse("s"), a2.parse("s t"))), "t");
  EXPECT_EQ(a2.format(a2.multiply(a2.parse("s t"), a2.parse("s t"))), "t s");
}

TEST(Reduce, DihedralAgainstExplicitModel) {
  for (int m : {2, 3, 4, 5, 6}) {
    CoxeterGroup g(dihedral(m));
    auto nf = dih_normal_forms(m);
    std::mt19937 rng(m);
    for (int trial = 0; trial < 300; ++trial) {
      Word w(rng() % 12);
      for (Gen& x : w) x = static_cast<Gen>(rng() % 2);
      Element e = g.reduce(w);
      EXPECT_EQ(e.word, nf.at(dih_eval(m, w))) << "m=" << m;
      EXPECT_EQ(g.reduce(e.word), e);
    }
  }
}

TEST(Reduce, RightAngledMatchesRewritingOracle) {
  for (const CoxeterSystem& sys : {polygon_racg(5), free_coxeter(3), dihedral(kInfinity, "a", "b").product(dihedral(kInfinity, "c", "d"))}) {
    CoxeterGroup g(sys);
    std::mt19937 rng(7);
    for (int trial = 0; trial < 400; ++trial) {
      Word w(rng() % 9);
      for (Gen& x : w) x = static_cast<Gen>(rng() % sys.rank());
      EXPECT_EQ(g.reduce(w).word, oracle_reduce(sys, w));
    }
  }
}

TEST(Reduce, GeneralEngineMatchesOracle) {
  CoxeterSystem sys({"a", "b", "c"}, {{1, 3, 2}, {3, 1, 4}, {2, 4, 1}});
  CoxeterGroup g(sys);
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Word w(rng() % 8);
    for (Gen& x : w) x = static_cast<Gen>(rng() % 3);
    EXPECT_EQ(g.reduce(w).word, oracle_reduce(sys, w));
  }
}

TEST(Multiply, HomomorphismOnBalls) {
  for (const CoxeterSystem& sys : {dihedral(3), polygon_racg(5), free_coxeter(3)}) {
    CoxeterGroup g(sys);
    auto b = g.ball(sys.is_right_angled() ? 3 : 4);
    for (const auto& u : b)
      for (const auto& v : b) {
        Word uv = u.word;
        uv.insert(uv.end(), v.word.begin(), v.word.end());
        ASSERT_EQ(g.multiply(u, v), g.reduce(uv));
      }
  }
}

TEST(Ball, Counts) {
  CoxeterGroup a2(dihedral(3)), dinf(dihedral(kInfinity)), rank1(CoxeterSystem({"s"}, {{1}}));
  EXPECT_EQ(a2.ball(0).size(), 1u);
  EXPECT_EQ(a2.ball(3).size(), 6u);
  for (int r = 0; r < 8; ++r) EXPECT_EQ(dinf.ball(r).size(), static_cast<std::size_t>(2 * r + 1));
  EXPECT_EQ(rank1.ball(5).size(), 2u);
  auto b = dinf.ball(4);
  EXPECT_TRUE(std::is_sorted(b.begin(), b.end()));
  EXPECT_THROW(CoxeterGroup(free_coxeter(3)).ball(20, 1000), CapExceeded);
}

TEST(Ball, LengthParity) {
  CoxeterGroup g(polygon_racg(5));
  for (const auto& w : g.ball(4))
    for (Gen s = 0; s < 5; ++s) {
      auto sw = g.multiply(g.generator(s), w);
      EXPECT_EQ(std::abs(static_cast<int>(sw.length()) - static_cast<int>(w.length())), 1);
      EXPECT_EQ(g.is_left_descent(s, w.word), sw.length() < w.length());
    }
}

TEST(Roots, MembershipExamples) {
  CoxeterGroup a2(dihedral(3));
  EXPECT_TRUE(root_contains(a2, simple_root(0), a2.identity()));
  EXPECT_FALSE(root_contains(a2, simple_root(0), a2.parse("s")));
  EXPECT_TRUE(root_contains(a2, simple_root(0), a2.parse("t s")));
}

TEST(Roots, BipartitionAndTranslation) {
  CoxeterGroup g(polygon_racg(5));
  auto b = g.ball(3);
  for (const auto& t : g.reflections_in_ball(3)) {
    Root r{t, true};
    for (const auto& c : b) EXPECT_NE(root_contains(g, r, c), root_contains(g, r.opposite(), c));
    for (const auto& w : g.ball(2)) {
      Root wr = translate(g, w, r);
      for (const auto& c : b)
        EXPECT_EQ(root_contains(g, wr, g.multiply(w, c)), root_contains(g, r, c));
    }
  }
}

TEST(Roots, ReflectionsInBall) {
  CoxeterGroup dinf(dihedral(kInfinity)), a2(dihedral(3)), rank1(CoxeterSystem({"s"}, {{1}}));
  auto r = dinf.reflections_in_ball(3);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(a2.reflections_in_ball(3).size(), 3u);
  EXPECT_EQ(rank1.reflections_in_ball(7).size(), 1u);
  for (const auto& t : r) EXPECT_TRUE(dinf.multiply(t, t).is_identity());
}

TEST(Parabolic, Sphericity) {
  CoxeterGroup g(polygon_racg(5));
  EXPECT_EQ(g.parabolic(0b011)->size(), 4u);
  EXPECT_FALSE(g.parabolic(0b101).has_value());
  CoxeterGroup h(CoxeterSystem({"a", "b", "c"}, {{1, 3, 2}, {3, 1, 3}, {2, 3, 1}}));
  EXPECT_EQ(h.parabolic(0b111)->size(), 24u);
  CoxeterGroup aff(CoxeterSystem({"a", "b", "c"}, {{1, 3, 3}, {3, 1, 3}, {3, 3, 1}}));
  EXPECT_FALSE(aff.parabolic(0b111, 500).has_value());
}
