#include <gtest/gtest.h>

#include <random>

#include "coxbound/building/measures.hpp"

using namespace coxbound;

namespace {

TypeSet bit(int s) { return TypeSet{1} << s; }

}  // namespace

TEST(BuildingMu, ThinBuildingIsCoxeterMu) {
  for (auto [sys, drv] : {std::pair{dihedral(kInfinity), "s t"}, std::pair{polygon_racg(5), "s1 s3 s2 s4"}}) {
    GraphProductBuilding b(sys, std::vector<int>(sys.rank(), 2));
    const auto& X = b.complex();
    const auto& G = b.group();
    TreeSystem ts(X, Subgroup::racg_kernel(X.system()));
    auto xi = Direction::driven(X.residue(G.identity(), bit(1)), G.parse(drv));
    for (const Element& w : G.ball(1)) {
      const Residue x = X.residue(w, bit(0));
      auto mb = building_mu(b, ts, in_standard_apartment(b, b.identity(), x), {b.identity(), xi}, 2);
      auto as_cox = push_forward(mb, [&](const BuildingResidue& R) { return X.residue(b.color(R.base), R.J); });
      EXPECT_EQ(as_cox, coxeter_mu(ts, x, xi, 2)) << G.format(w);
    }
  }
}

TEST(BuildingMu, ThickTreeIsTransportedTreeLambda) {
  GraphProductBuilding b(dihedral(kInfinity), {3, 3});
  const auto& X = b.complex();
  const auto& G = b.group();
  TreeSystem ts(X, Subgroup::factors(X.system()));
  const BuildingDirection xi{b.parse("s2.t1"), Direction::driven(X.chamber(G.identity()), G.parse("s t"))};
  const BuildingResidue x = b.chamber(b.parse("t2"));
  for (int n : {1, 3, 6}) {
    auto mu = building_mu(b, ts, x, xi, n);
    require_probability(mu, "mu");
    // weights follow the distance from x along the ray
    Measure<int> by_distance;
    for (const auto& [R, w] : mu) {
      const auto dx = b.gate(R, x.base);
      int d2 = 2 * static_cast<int>(b.delta(x.base, dx).length()) + std::popcount(R.J);
      add_mass(by_distance, d2, w);
    }
    EXPECT_EQ(by_distance, tree_lambda({true, 0}, n)) << n;
  }
}

TEST(BuildingMu, ProductOfTreesIsTensor) {
  GraphProductBuilding b(dihedral(kInfinity).product(dihedral(kInfinity, "u", "v")), {3, 3, 3, 3});
  const auto& X = b.complex();
  const auto& G = b.group();
  TreeSystem ts(X, Subgroup::factors(X.system()));
  const BuildingDirection xi{b.parse("u2.s1"), Direction::driven(X.chamber(G.identity()), G.parse("s t u v"))};
  const BuildingResidue x = b.residue(b.parse("t1.v2"), bit(0));
  auto mu = building_mu(b, ts, x, xi, 3);
  require_probability(mu, "mu");
  Measure<int> m1, m2;
  Measure<std::pair<int, int>> joint;
  for (const auto& [R, w] : mu) {
    const Element d = b.delta(x.base, b.gate(R, x.base));
    int a = 0, c = 0;
    for (Gen s : d.word) (s < 2 ? a : c) += 2;
    a += std::popcount(R.J & 3u);
    c += std::popcount(R.J & 12u);
    add_mass(m1, a, w);
    add_mass(m2, c, w);
    add_mass(joint, std::pair{a, c}, w);
  }
  for (const auto& [ac, w] : joint) EXPECT_EQ(w, m1[ac.first] * m2[ac.second]);
}

TEST(BuildingMu, ExactEquivariance) {
  std::mt19937 rng(11);
  std::vector<std::tuple<GraphProductBuilding, std::string, int>> cases;
  cases.emplace_back(GraphProductBuilding(dihedral(kInfinity), {3, 3}), "s t", 3);
  cases.emplace_back(GraphProductBuilding(polygon_racg(5), std::vector<int>(5, 3)), "s1 s3 s2 s4", 1);
  for (auto& [b, drv, n] : cases) {
    const auto& X = b.complex();
    const auto& G = b.group();
    TreeSystem ts(X, Subgroup::racg_kernel(X.system()));
    const auto ball = b.ball(2);
    for (int trial = 0; trial < 4; ++trial) {
      const Chamber g = ball[rng() % ball.size()], h = ball[rng() % ball.size()], c = ball[rng() % ball.size()];
      const BuildingDirection xi{h, Direction::driven(X.residue(G.identity(), bit(1)), G.parse(drv))};
      EXPECT_EQ(equivariance_defect(b, ts, g, b.residue(c, bit(0)), xi, n), 0);
    }
    EXPECT_EQ(equivariance_defect(b, ts, b.identity(), b.chamber(b.identity()),
                                  {b.identity(), Direction::interior(X.chamber(G.parse(drv)))}, n),
              0);
  }
}

TEST(BuildingMu, InteriorPointOfATree) {
  GraphProductBuilding b(dihedral(kInfinity), {3, 3});
  const auto& X = b.complex();
  const auto& G = b.group();
  TreeSystem ts(X, Subgroup::factors(X.system()));
  const BuildingResidue x = b.chamber(b.parse("s1"));
  const BuildingDirection far{b.parse("t2"), Direction::interior(X.residue(G.parse("s t"), bit(0)))};
  const BuildingResidue target = building_residue_at(b, far, 0);
  // distance from the edge s1 to the vertex, doubled
  const int N = 2 * static_cast<int>(b.delta(x.base, b.gate(target, x.base)).length()) + 1;
  EXPECT_EQ(N, 9);
  for (int n : {1, 4, 9}) {
    auto S = building_sector(b, ts, x, far, n);
    EXPECT_EQ(S.data.shapes, (std::vector<TreeShape>{{false, N}}));
    EXPECT_EQ(S.data.residues.size(), static_cast<std::size_t>(N + 1));
    auto mu = building_mu(ts, S, n);
    Measure<int> by_distance;
    for (const auto& [R, w] : mu)
      add_mass(by_distance, 2 * static_cast<int>(b.delta(x.base, b.gate(R, x.base)).length()) + std::popcount(R.J), w);
    EXPECT_EQ(by_distance, tree_lambda({false, N}, n));
    EXPECT_GT(mu[target], 0);
  }
}

TEST(Convergence, TableBoundsAndDecay) {
  GraphProductBuilding b(dihedral(kInfinity), {3, 3});
  const auto& X = b.complex();
  const auto& G = b.group();
  TreeSystem ts(X, Subgroup::factors(X.system()));
  const BuildingDirection xi{b.parse("t1"), Direction::driven(X.chamber(G.identity()), G.parse("s t"))};
  const BuildingResidue x = b.chamber(b.parse("s2")), y = b.residue(b.parse("s2"), bit(1));
  auto rows = convergence_table(b, ts, x, y, xi, 2, 20);
  for (const auto& r : rows) EXPECT_TRUE(r.ok()) << r.n << " " << to_string(r.value) << " " << r.bound;
  EXPECT_LT(rows.back().value, rows.front().value);
  for (const auto& r : convergence_table(b, ts, x, x, xi, 1, 5)) EXPECT_EQ(r.value, 0);
}

TEST(Lift, Contraction) {
  GraphProductBuilding b(polygon_racg(5), std::vector<int>(5, 3));
  const auto& X = b.complex();
  auto pm = lift(b, point_mass(b.chamber(b.parse("s1^2"))));
  EXPECT_EQ(pm, point_mass(b.parse("s1^2")));
  const auto R = b.residue(b.identity(), bit(0) | bit(1));
  auto spread = lift(b, point_mass(R));
  EXPECT_EQ(spread.size(), 9u);
  std::mt19937 rng(2);
  const auto ball = b.ball(2);
  for (int trial = 0; trial < 30; ++trial) {
    Measure<BuildingResidue> z1, z2;
    for (int k = 0; k < 4; ++k) {
      const TypeSet J = X.spherical_types()[rng() % X.spherical_types().size()];
      add_mass(z1, b.residue(ball[rng() % ball.size()], J), Rational(static_cast<long>(rng() % 5 + 1)));
      add_mass(z2, b.residue(ball[rng() % ball.size()], J), Rational(static_cast<long>(rng() % 5 + 1)));
    }
    EXPECT_LE(l1_distance(lift(b, z1), lift(b, z2)), l1_distance(z1, z2));
  }
}
