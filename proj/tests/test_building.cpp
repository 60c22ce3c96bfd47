#include <gtest/gtest.h>

#include <random>

#include "coxbound/building/graph_product.hpp"

using namespace coxbound;

namespace {

GraphProductBuilding thick_tree() { return {dihedral(kInfinity), {3, 3}}; }
GraphProductBuilding pentagon() { return {polygon_racg(5), std::vector<int>(5, 3)}; }

// Free product reduction with a stack.
std::vector<Syllable> free_reduce(const std::vector<Syllable>& w, int q) {
  std::vector<Syllable> st;
  for (Syllable x : w) {
    if (!st.empty() && st.back().s == x.s) {
      st.back().e = (st.back().e + x.e) % q;
      if (st.back().e == 0) st.pop_back();
    } else if (x.e % q) {
      st.push_back(x);
    }
  }
  return st;
}

}  // namespace

TEST(GraphProduct, NormalFormExamples) {
  auto T = thick_tree();
  EXPECT_EQ(T.parse("s1.s2"), T.identity());
  EXPECT_EQ(T.format(T.parse("s1.t1.t2.s1")), "s2");
  GraphProductBuilding sq(dihedral(2, "a", "b"), {3, 4});
  EXPECT_EQ(sq.format(sq.parse("b3.a1")), "a1.b3");
  EXPECT_EQ(sq.format(sq.parse("a1.b1.a1.b3")), "a2");
  EXPECT_THROW(T.parse("s3"), InputError);
  EXPECT_THROW(T.parse("x1"), InputError);
  for (const Chamber& c : pentagon().ball(2)) EXPECT_EQ(pentagon().normal_form(c), c);
}

TEST(GraphProduct, FreeProductAgainstStackReduction) {
  auto T = thick_tree();
  std::vector<std::vector<Syllable>> words{{}};
  for (int len = 0; len < 4; ++len) {
    std::vector<std::vector<Syllable>> next;
    for (const auto& w : words)
      for (Gen s : {Gen{0}, Gen{1}})
        for (int e : {1, 2}) {
          auto v = w;
          v.push_back({s, e});
          next.push_back(v);
        }
    for (const auto& w : next) EXPECT_EQ(T.normal_form(w), free_reduce(w, 3));
    words = std::move(next);
  }
}

TEST(GraphProduct, WeylDistanceExamples) {
  auto T = thick_tree();
  const auto& G = T.group();
  EXPECT_EQ(T.delta(T.parse("s1"), T.parse("s1")), G.identity());
  EXPECT_EQ(T.delta(T.parse("s1"), T.parse("s1.t1")), G.parse("t"));
  EXPECT_EQ(T.delta(T.parse("s1"), T.parse("s2.t1")), G.parse("s t"));
  auto P = pentagon();
  const auto ball = P.ball(2);
  for (const Chamber& g : P.ball(1))
    for (const Chamber& c : ball)
      for (const Chamber& d : ball) ASSERT_EQ(P.delta(P.multiply(g, c), P.multiply(g, d)), P.delta(c, d));
}

TEST(GraphProduct, PanelsAndResidues) {
  auto P = pentagon();
  for (const Chamber& c : P.ball(2))
    for (int s = 0; s < 5; ++s) {
      EXPECT_EQ(P.panel(c, static_cast<Gen>(s)).size(), 3u);
      const TypeSet J = TypeSet{1} << s | TypeSet{1} << ((s + 1) % 5);
      auto R = P.residue(c, J);
      auto ch = P.chambers(R);
      EXPECT_EQ(ch.size(), 9u);
      for (const Chamber& d : ch) {
        EXPECT_EQ(P.residue(d, J), R);
        EXPECT_LE(R.base.size(), d.size());
      }
      // the gate is the unique nearest chamber
      const Chamber far = P.parse("s3^1.s5^2.s2^1");
      const Chamber gt = P.gate(R, far);
      EXPECT_TRUE(P.contains(R, gt));
      for (const Chamber& d : ch)
        if (d != gt) EXPECT_GT(P.delta(d, far).length(), P.delta(gt, far).length());
    }
}

TEST(GraphProduct, AxiomsHold) {
  EXPECT_TRUE(check_building_axioms(GraphProductBuilding(dihedral(kInfinity), {2, 2}), 4).ok());
  EXPECT_TRUE(check_building_axioms(thick_tree(), 3).ok());
  EXPECT_TRUE(check_building_axioms(GraphProductBuilding(free_coxeter(3), {2, 2, 2}), 3).ok());
  EXPECT_TRUE(check_building_axioms(pentagon(), 2).ok());
  auto rep = check_building_axioms(GraphProductBuilding(dihedral(kInfinity).product(dihedral(kInfinity, "u", "v")), {3, 3, 3, 3}), 2);
  EXPECT_TRUE(rep.ok());
  EXPECT_GT(rep.pairs, 1000);
}

TEST(GraphProduct, CorruptedDistanceFails) {
  auto T = thick_tree();
  const Chamber a = T.parse("s1.t2"), b = T.parse("t1");
  WeylDistance bad = [&](const Chamber& c, const Chamber& d) {
    if (c == a && d == b) return T.group().parse("t");
    return T.delta(c, d);
  };
  auto rep = check_building_axioms(T, 2, bad);
  EXPECT_FALSE(rep.ok());
}

TEST(Apartment, ChartsValidate) {
  auto T = thick_tree();
  const auto& G = T.group();
  const Chamber C = T.parse("s1"), D = T.parse("s2.t1.s2.t2");
  auto A = find_apartment(T, C, D, 3);
  EXPECT_TRUE(validate_chart(T, A));
  EXPECT_EQ(A.at(G.identity()), C);
  EXPECT_EQ(A.locate(D), T.delta(C, D));
  auto same = find_apartment(T, C, C, 2);
  EXPECT_EQ(same.beta.size(), 5u);
  GraphProductBuilding thin(dihedral(kInfinity), {2, 2});
  auto whole = find_apartment(thin, thin.identity(), thin.identity(), 3);
  EXPECT_EQ(whole.beta.size(), thin.ball(3).size());

  auto P = pentagon();
  std::mt19937 rng(5);
  const auto ball = P.ball(2);
  for (int i = 0; i < 6; ++i) {
    const Chamber c = ball[rng() % ball.size()], d = ball[rng() % ball.size()];
    auto B = find_apartment(P, c, d, 2);
    EXPECT_EQ(B.locate(d), P.delta(c, d));
  }
}

TEST(Apartment, Retraction) {
  auto T = thick_tree();
  const Chamber C = T.identity(), D = T.parse("s1.t1.s1");
  auto A = find_apartment(T, C, D, 5);
  // the branch s1.t2 leaves the line through C and D and folds onto it
  EXPECT_EQ(retraction(T, A, C, T.parse("s1.t2")), T.parse("s1.t1"));
  for (const Chamber& d : T.ball(3)) {
    const Chamber r = retraction(T, A, C, d);
    EXPECT_TRUE(A.locate(r).has_value());
    EXPECT_EQ(T.delta(C, r), T.delta(C, d));
    EXPECT_EQ(retraction(T, A, C, r), r);
  }
  for (const auto& [w, c] : A.beta) EXPECT_EQ(retraction(T, A, C, c), c);
  EXPECT_THROW(retraction(T, A, T.parse("t2"), D), InputError);
}

TEST(GraphProduct, JsonRoundTrip) {
  auto P = pentagon();
  auto Q = building_from_json(P.spec_json());
  EXPECT_EQ(Q.thicknesses(), P.thicknesses());
  EXPECT_EQ(Q.spec_json(), P.spec_json());
  auto R = P.residue(P.parse("s2^1.s4^2.s1^1"), 0b00011);
  EXPECT_EQ(P.format(R.base), "s2^1.s4^2");
  EXPECT_EQ(P.parse(P.format(R.base)), R.base);
  EXPECT_EQ(P.residue_from_json(P.to_json(R)), R);
  EXPECT_THROW(building_from_json(nlohmann::json::parse(R"({"coxeter":{"labels":["a","b"],"orders":[[1,3],[3,1]]}})")),
               InputError);
}
