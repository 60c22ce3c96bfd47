#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "coxbound/harness/config.hpp"

using namespace coxbound;

namespace {

struct Options {
  std::string config_path;
  std::string catalog;
  std::optional<int> radius, horizon, n_max;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool corrupt = false;
};

ExperimentConfig resolve(const Options& o) {
  ExperimentConfig c = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
  if (!o.catalog.empty()) c.system = {{"catalog", o.catalog}};
  if (o.radius) c.radius = *o.radius;
  if (o.horizon) c.horizon = *o.horizon;
  if (o.n_max) c.n_max = *o.n_max;
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.out = *o.out;
  return config_from_json(config_to_json(c));
}

void emit(const ExperimentConfig& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw InputError("cannot write '" + c.out + "'");
  f << text;
}

std::string residue_text(const GraphProductBuilding& b, const BuildingResidue& R) { return b.format(R); }

int cmd_check(const Options& o) {
  const Experiment e = load_experiment(resolve(o));
  const auto& b = e.building;
  WeylDistance delta;
  if (o.corrupt) {
    // swap the Weyl distance of one pair of chambers
    const Chamber a = b.generator(0), c = b.generator(1);
    delta = [&b, a, c](const Chamber& x, const Chamber& y) {
      if (x == a && y == c) return b.group().identity();
      return b.delta(x, y);
    };
  }
  nlohmann::json rep;
  bool ok = true;
  const auto ax = check_building_axioms(b, e.config.radius, delta);
  rep["axioms"] = {{"radius", e.config.radius}, {"pairs", ax.pairs}, {"violations", ax.violations}};
  ok = ok && ax.ok();
  TreeSystem ts(b.complex(), e.w0);
  nlohmann::json trees = nlohmann::json::array();
  for (int i = 0; i < ts.size(); ++i) {
    const auto t = ts.check_tree(i, e.config.radius + 2);
    trees.push_back({{"tree", i}, {"vertices", t.vertices}, {"edges", t.edges}, {"ok", t.ok()}});
    ok = ok && t.ok();
  }
  rep["trees"] = trees;
  const auto bad_walls = ts.wall_disjointness_violations(e.config.radius, e.config.radius);
  rep["wall_disjointness_violations"] = bad_walls;
  ok = ok && bad_walls == 0;
  nlohmann::json eq = nlohmann::json::array();
  for (const auto& xi : e.directions) {
    const Rational d = equivariance_defect(b, ts, b.generator(0), e.pairs.front().first, xi, e.config.n_min);
    eq.push_back(to_string(d));
    ok = ok && d == 0;
  }
  rep["equivariance_defects"] = eq;
  rep["ok"] = ok;
  emit(e.config, rep.dump(2) + "\n");
  return ok ? 0 : 1;
}

int cmd_ball(const Options& o) {
  const Experiment e = load_experiment(resolve(o));
  const auto& b = e.building;
  nlohmann::json list = nlohmann::json::array();
  for (const Chamber& c : b.ball(e.config.radius)) list.push_back(b.format(c));
  std::size_t residues = 0;
  for (const Chamber& c : b.ball(e.config.radius))
    for (TypeSet J : b.complex().spherical_types())
      if (b.residue(c, J).base == c) ++residues;
  emit(e.config, nlohmann::json{{"radius", e.config.radius}, {"chambers", list.size()}, {"residues_based_in_ball", residues},
                                {"list", list}}
                         .dump(2) +
                     "\n");
  return 0;
}

int cmd_trees(const Options& o) {
  const Experiment e = load_experiment(resolve(o));
  const auto& b = e.building;
  const auto& X = b.complex();
  TreeSystem ts(X, e.w0);
  nlohmann::json rep{{"index", ts.index()}, {"trees", ts.size()}, {"w0", to_json(b.system(), e.w0)}};
  bool ok = true;
  nlohmann::json checks = nlohmann::json::array();
  for (int i = 0; i < ts.size(); ++i) {
    const auto t = ts.check_tree(i, e.config.radius);
    checks.push_back({{"tree", i}, {"vertices", t.vertices}, {"edges", t.edges}, {"ok", t.ok()}});
    ok = ok && t.ok();
  }
  rep["checks"] = checks;
  nlohmann::json pos = nlohmann::json::array();
  for (const auto& [x, y] : e.pairs) {
    const Chamber p = b.gate(x, y.base);
    const Residue yr = X.residue(b.delta(p, b.gate(y, p)), y.J);
    pos.push_back({{"x", residue_text(b, x)}, {"y", residue_text(b, y)},
                   {"positions", ts.positions(X.residue(X.group().identity(), x.J), yr)}});
  }
  rep["positions"] = pos;
  emit(e.config, rep.dump(2) + "\n");
  return ok ? 0 : 1;
}

int cmd_measure(const Options& o) {
  const Experiment e = load_experiment(resolve(o));
  const auto& b = e.building;
  TreeSystem ts(b.complex(), e.w0);
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [x, y] : e.pairs)
    for (std::size_t d = 0; d < e.directions.size(); ++d) {
      const auto S = building_sector(b, ts, x, e.directions[d], e.config.n_max);
      for (int n = e.config.n_min; n <= e.config.n_max; ++n)
        out.push_back({{"x", residue_text(b, x)},
                       {"direction", d},
                       {"n", n},
                       {"measure", measure_to_json(building_mu(ts, S, n), [&](const BuildingResidue& R) {
                          return residue_text(b, R);
                        })}});
    }
  emit(e.config, out.dump(2) + "\n");
  return 0;
}

int cmd_converge(const Options& o) {
  const Experiment e = load_experiment(resolve(o));
  const auto& b = e.building;
  TreeSystem ts(b.complex(), e.w0);
  std::ostringstream csv;
  csv << "pair,direction,n,value,value_decimal,tau,eps,bound3,ok\n" << std::setprecision(17);
  bool ok = true;
  for (std::size_t p = 0; p < e.pairs.size(); ++p)
    for (std::size_t d = 0; d < e.directions.size(); ++d)
      for (const auto& r : convergence_table(b, ts, e.pairs[p].first, e.pairs[p].second, e.directions[d],
                                             e.config.n_min, e.config.n_max)) {
        csv << p << ',' << d << ',' << r.n << ',' << to_string(r.value) << ',' << r.value.get_d() << ',' << r.tau << ','
            << r.eps << ',' << r.bound << ',' << (r.ok() ? 1 : 0) << '\n';
        ok = ok && r.ok();
      }
  emit(e.config, csv.str());
  return ok ? 0 : 1;
}

int cmd_lift(const Options& o) {
  const Experiment e = load_experiment(resolve(o));
  const auto& b = e.building;
  TreeSystem ts(b.complex(), e.w0);
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [x, y] : e.pairs)
    for (std::size_t d = 0; d < e.directions.size(); ++d) {
      const auto zeta = building_mu(b, ts, x, e.directions[d], e.config.n_max);
      nlohmann::json m = nlohmann::json::array();
      for (const auto& [g, w] : lift(b, zeta)) m.push_back({{"element", b.format(g)}, {"weight", to_string(w)}});
      out.push_back({{"x", residue_text(b, x)}, {"direction", d}, {"n", e.config.n_max}, {"measure", m}});
    }
  emit(e.config, out.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary measures on right-angled buildings"};
  app.require_subcommand(1);
  Options o;
  auto common = [&o](CLI::App* sub) {
    sub->add_option("config", o.config_path, "experiment config (JSON)");
    sub->add_option("--catalog", o.catalog, "catalog system instead of the config's");
    sub->add_option("--radius", o.radius, "ball radius");
    sub->add_option("--horizon", o.horizon, "convergence horizon");
    sub->add_option("--n-max", o.n_max, "largest n");
    sub->add_option("--seed", o.seed, "sampling seed");
    sub->add_option("--out", o.out, "output file");
  };
  std::map<std::string, std::function<int(const Options&)>> commands{
      {"check", cmd_check}, {"ball", cmd_ball},       {"trees", cmd_trees},
      {"measure", cmd_measure}, {"converge", cmd_converge}, {"lift", cmd_lift}};
  const std::map<std::string, std::string> help{
      {"check", "building axioms, trees and equivariance"},
      {"ball", "chambers of a ball"},
      {"trees", "tree system and positions"},
      {"measure", "measures mu_n for the configured residues and directions"},
      {"converge", "convergence table with the 3 eps_n bound (CSV)"},
      {"lift", "lift of mu_n to a measure on the group"}};
  for (const auto& [name, fn] : commands) {
    auto* sub = app.add_subcommand(name, help.at(name));
    common(sub);
    if (name == "check") sub->add_flag("--corrupt", o.corrupt, "check a deliberately corrupted Weyl distance");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    for (const auto& [name, fn] : commands)
      if (app.got_subcommand(name)) return fn(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
