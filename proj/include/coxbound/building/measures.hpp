#pragma once

#include <cmath>
#include <vector>

#include "coxbound/building/graph_product.hpp"
#include "coxbound/measures/coxeter_mu.hpp"

namespace coxbound {

// A boundary point of the building: a Coxeter direction read in the apartment w -> g*lift(w).
struct BuildingDirection {
  Chamber g;
  Direction xi;
};

inline BuildingResidue in_standard_apartment(const GraphProductBuilding& b, const Chamber& g, const Residue& R) {
  return b.residue(b.multiply(g, b.lift(R.base)), R.J);
}

inline BuildingDirection translate(const GraphProductBuilding& b, const Chamber& h, const BuildingDirection& xi) {
  return {b.multiply(h, xi.g), xi.xi};
}

inline BuildingResidue building_residue_at(const GraphProductBuilding& b, const BuildingDirection& xi, int k) {
  return in_standard_apartment(b, xi.g, residue_at(b.complex(), xi.xi, k));
}

// (x, Xi) seen from the chamber p of x nearest to the direction: an apartment through p and a deep
// chamber E of the direction, identified with the Coxeter complex by c -> delta(p, c).
struct Frame {
  Chamber p;
  Residue x;      // residue(1, J_x)
  Direction xi;   // the direction in Coxeter coordinates
  int depth = 0;  // index of the deep chamber E
};

inline Chamber deep_chamber(const GraphProductBuilding& b, const BuildingDirection& xi, const Chamber& from, int k) {
  return b.gate(building_residue_at(b, xi, k), from);
}

inline Frame frame(const GraphProductBuilding& b, const BuildingResidue& x, const BuildingDirection& xi) {
  const auto& G = b.group();
  const auto& X = b.complex();
  if (xi.xi.kind == Direction::Kind::explicit_) throw InputError("building directions must be interior or driven");
  if (xi.xi.kind == Direction::Kind::interior) {
    const Chamber E = deep_chamber(b, xi, x.base, 0);
    const Chamber p = b.gate(x, E);
    const Chamber F = deep_chamber(b, xi, p, 0);
    return {p, X.residue(G.identity(), x.J), Direction::interior(X.residue(b.delta(p, F), xi.xi.base.J)), 0};
  }
  // deep in the sequence, the picture of x_k seen from p is v*x_k for a fixed v in W
  auto picture = [&](int k, Chamber& p) {
    p = b.gate(x, deep_chamber(b, xi, x.base, k));
    return X.residue(b.delta(p, deep_chamber(b, xi, p, k)), residue_at(X, xi.xi, k).J);
  };
  Chamber p1, p2, p3;
  for (int K = 4; 2 * K <= kSectorCap; K *= 2) {
    const Residue a = picture(K, p1), c = picture(K + 1, p2), d = picture(2 * K, p3);
    if (p1 != p2 || p2 != p3) continue;
    for (const Element& ch : X.chambers(residue_at(X, xi.xi, K))) {
      const Element v = G.multiply(a.base, G.inverse(ch));
      if (X.translate(v, residue_at(X, xi.xi, K)) == a && X.translate(v, residue_at(X, xi.xi, K + 1)) == c &&
          X.translate(v, residue_at(X, xi.xi, 2 * K)) == d)
        return {p1, X.residue(G.identity(), x.J), translate(X, v, xi.xi), 2 * K};
    }
  }
  throw NotStabilized("frame of the building direction did not stabilize");
}

// Q(x,Xi) for n <= n_max in frame coordinates, with the building residue of each of its residues.
struct BuildingSector {
  Frame fr;
  SectorData data;
  std::map<Residue, BuildingResidue> image;
};

inline BuildingSector building_sector(const GraphProductBuilding& b, const TreeSystem& ts, const BuildingResidue& x,
                                      const BuildingDirection& xi, int n_max) {
  const auto& G = b.group();
  const auto& X = b.complex();
  BuildingSector S{frame(b, x, xi), {}, {}};
  S.data = sector_data(ts, S.fr.x, S.fr.xi, n_max);
  // a residue maps back through one of its chambers lying on a minimal gallery from p to a deep chamber F
  const bool interior = xi.xi.kind == Direction::Kind::interior;
  for (int K = std::max(S.fr.depth, 4); K <= kSectorCap; K *= 2) {
    const Chamber F = deep_chamber(b, xi, S.fr.p, interior ? 0 : K);
    const Element d = b.delta(S.fr.p, F);
    bool all = true;
    for (const Residue& R : S.data.residues) {
      std::optional<Element> on;
      for (const Element& w : X.chambers(R))
        if (w.length() + G.multiply(G.inverse(w), d).length() == d.length()) {
          on = w;
          break;
        }
      if (!on) {
        all = false;
        break;
      }
      S.image[R] = b.residue(b.on_gallery(S.fr.p, F, *on), R.J);
    }
    if (all) return S;
    if (interior) throw InvariantViolation("a sector residue is off every gallery to the interior point");
    S.image.clear();
  }
  throw NotStabilized("no chamber of the direction is deep enough to carry the sector");
}

inline Measure<BuildingResidue> building_mu(const TreeSystem& ts, const BuildingSector& S, int n) {
  Measure<BuildingResidue> out;
  for (const auto& [R, w] : coxeter_mu(ts, S.data, n)) add_mass(out, S.image.at(R), w);
  return out;
}

inline Measure<BuildingResidue> building_mu(const GraphProductBuilding& b, const TreeSystem& ts, const BuildingResidue& x,
                                            const BuildingDirection& xi, int n) {
  return building_mu(ts, building_sector(b, ts, x, xi, n), n);
}

inline Measure<BuildingResidue> translate(const GraphProductBuilding& b, const Chamber& g, const Measure<BuildingResidue>& m) {
  return push_forward(m, [&](const BuildingResidue& R) { return b.translate(g, R); });
}

// l1 distance between g.mu_n(x,Xi) and mu_n(gx,gXi); zero for an equivariant construction.
inline Rational equivariance_defect(const GraphProductBuilding& b, const TreeSystem& ts, const Chamber& g,
                                    const BuildingResidue& x, const BuildingDirection& xi, int n) {
  return l1_distance(translate(b, g, building_mu(b, ts, x, xi, n)),
                     building_mu(b, ts, b.translate(g, x), translate(b, g, xi), n));
}

struct ConvergenceRow {
  int n = 0;
  Rational value;
  int tau = 0;
  double eps = 0;
  double bound = 0;  // 3 eps
  bool ok() const { return at_most(value, bound); }
};

// Rounded-up 3*v.
inline double triple_up(double v) { return std::nextafter(3.0 * v, HUGE_VAL); }

// eps_n: the sandwich bound per tree, with tau the ceiling of the root-distance from x to the
// retraction of y onto an apartment through x and the sector, summed over the trees.
inline std::vector<ConvergenceRow> convergence_table(const GraphProductBuilding& b, const TreeSystem& ts,
                                                     const BuildingResidue& x, const BuildingResidue& y,
                                                     const BuildingDirection& xi, int n_lo, int n_hi) {
  if (n_lo < 1 || n_hi < n_lo) throw InputError("bad n range");
  const auto& X = b.complex();
  const auto Sx = building_sector(b, ts, x, xi, n_hi), Sy = building_sector(b, ts, y, xi, n_hi);
  const Residue yr = X.residue(b.delta(Sx.fr.p, b.gate(y, Sx.fr.p)), y.J);
  const int tau = (X.root_distance2(Sx.fr.x, yr) + 1) / 2;
  std::vector<ConvergenceRow> rows;
  for (int n = n_lo; n <= n_hi; ++n) {
    ConvergenceRow r;
    r.n = n;
    r.tau = tau;
    r.value = l1_distance(building_mu(ts, Sx, n), building_mu(ts, Sy, n));
    if (n <= tau) {
      r.eps = 2.0;
    } else {
      for (const TreeShape& sh : Sx.data.shapes) {
        const auto z1 = static_cast<long>(z_indices(sh, n, 1).size());
        const auto znt = static_cast<long>(z_indices(sh, n, n + tau).size());
        r.eps = std::nextafter(r.eps + sandwich_bound(n, tau, z1, znt), HUGE_VAL);
      }
    }
    r.bound = triple_up(r.eps);
    rows.push_back(std::move(r));
  }
  return rows;
}

// Chambers are the group elements and the stabilizer of a residue a is the finite group carried by
// its chambers, so zeta(a) is spread uniformly over the chambers of a.
inline Measure<Chamber> lift(const GraphProductBuilding& b, const Measure<BuildingResidue>& zeta) {
  Measure<Chamber> out;
  for (const auto& [a, w] : zeta) {
    const auto ch = b.chambers(a);
    const Rational share = w / Rational(static_cast<long>(ch.size()));
    for (const Chamber& c : ch) add_mass(out, c, share);
  }
  return out;
}

}  // namespace coxbound
