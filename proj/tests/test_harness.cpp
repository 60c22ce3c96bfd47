#include <gtest/gtest.h>

#include "coxbound/harness/config.hpp"

using namespace coxbound;

TEST(Harness, CatalogEntriesBuild) {
  EXPECT_EQ(catalog().size(), 7u);
  for (const auto& e : catalog()) {
    const auto b = e.building();
    EXPECT_EQ(b.thin(), e.name.find('3') == std::string::npos || e.name == "free3") << e.name;
    TreeSystem ts(b.complex(), default_subgroup(e.system, e.w0));
    EXPECT_GE(ts.size(), 1);
  }
  EXPECT_THROW(catalog_entry("nope"), InputError);
}

TEST(Harness, SampledDirectionsAreValid) {
  std::mt19937_64 rng(4);
  for (const auto& e : catalog()) {
    CoxeterComplex X(e.system);
    for (const Direction& d : sample_directions(X, rng, 5)) EXPECT_NO_THROW(validate_direction(X, d));
  }
}

TEST(Harness, ConfigRoundTrip) {
  ExperimentConfig c;
  c.system = {{"catalog", "pentagon3"}};
  c.radius = 2;
  c.n_max = 7;
  c.seed = 99;
  c.out = "rows.csv";
  c.pairs.push_back({{"x", {{"chamber", "s1^1"}, {"type", nlohmann::json::array()}}},
                     {"y", {{"chamber", "s2^2"}, {"type", {"s3"}}}}});
  const auto j = config_to_json(c);
  EXPECT_EQ(config_from_json(j), c);
  EXPECT_EQ(config_to_json(config_from_json(j)), j);
  const auto e = load_experiment(c);
  ASSERT_EQ(e.pairs.size(), 1u);
  EXPECT_EQ(e.building.format(e.pairs.front().second.base), "s2^2");
  EXPECT_EQ(e.directions.size(), 4u);
}

TEST(Harness, BadConfigsAreInputErrors) {
  auto j = config_to_json(ExperimentConfig{});
  j["n_max"] = 0;
  EXPECT_THROW(config_from_json(j), InputError);
  ExperimentConfig c;
  c.system = {{"catalog", "missing"}};
  EXPECT_THROW(load_experiment(c), InputError);
  c.system = {{"catalog", "tree3"}};
  c.pairs.push_back({{"x", 3}});
  EXPECT_THROW(load_experiment(c), InputError);
  // labels ending in a digit need the exponent
  c.system = {{"catalog", "pentagon3"}};
  c.pairs = {{{"x", {{"chamber", "s1"}, {"type", nlohmann::json::array()}}}, {"y", {{"chamber", "e"}, {"type", nlohmann::json::array()}}}}};
  EXPECT_THROW(load_experiment(c), InputError);
}
