#pragma once

#include <cmath>
#include <vector>

#include "coxbound/measures/measure.hpp"

namespace coxbound {

// Image of a boundary point in one tree, seen from x along the sector: a ray, or a segment ending
// at index N. Indices are twice the root-distance to x, so vertices and edges alternate.
struct TreeShape {
  bool end = true;
  int N = 0;

  friend bool operator==(const TreeShape&, const TreeShape&) = default;
};

// Z(x,xi,n,k) as a set of indices along the sector; k > n is allowed (lower bound clamped at 0).
inline std::vector<int> z_indices(const TreeShape& shape, int n, int k) {
  std::vector<int> out;
  const int lo = std::max(0, 2 * (n - k)), hi = 2 * (n + k);
  if (shape.end) {
    for (int p = lo; p <= hi; ++p) out.push_back(p);
    return out;
  }
  if (2 * k <= 2 * n - shape.N) return {shape.N};
  for (int p = lo; p <= std::min(hi, shape.N); ++p) out.push_back(p);
  if (out.empty() || out.back() != shape.N) out.push_back(shape.N);
  return out;
}

// lambda_n = (1/n) sum_{k=1..n} uniform measure on Z(x,xi,n,k).
inline Measure<int> tree_lambda(const TreeShape& shape, int n) {
  if (n < 1) throw InputError("n must be at least 1");
  Measure<int> out;
  for (int k = 1; k <= n; ++k) {
    auto Z = z_indices(shape, n, k);
    const Rational w(1, static_cast<long>(Z.size()) * n);
    for (int p : Z) add_mass(out, p, w);
  }
  return out;
}

// 2t/n + 4(n-t)/n [1 - (z1/znt)^(2t/(n-t))], evaluated in long double and pushed up past rounding.
inline double sandwich_bound(int n, int tau, long z1, long znt) {
  if (tau < 0 || n <= tau) throw InputError("sandwich bound needs n > tau >= 0");
  if (z1 < 1 || znt < z1) throw InputError("sandwich bound needs 1 <= z1 <= z_{n+tau}");
  if (tau == 0) return 0.0;
  const long double ratio = static_cast<long double>(z1) / static_cast<long double>(znt);
  const long double expo = 2.0L * tau / (n - tau);
  const long double v = 2.0L * tau / n + 4.0L * (n - tau) / n * (1.0L - std::pow(ratio, expo));
  double up = static_cast<double>(v * (1.0L + 1e-15L));
  for (int i = 0; i < 4; ++i) up = std::nextafter(up, HUGE_VAL);
  return up;
}

// Exact comparison of a rational against a double.
inline bool at_most(const Rational& value, double bound) { return value <= Rational(bound); }

}  // namespace coxbound
