#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <vector>

#include "coxbound/measures/measure.hpp"

namespace coxbound {

using Position = std::vector<int>;

namespace detail {

// Index of the value of V (sorted) absorbing coordinate k: the largest v <= k, or the smallest v.
inline std::size_t absorb(const std::vector<int>& V, int k) {
  auto it = std::upper_bound(V.begin(), V.end(), k);
  return it == V.begin() ? 0 : static_cast<std::size_t>(it - V.begin() - 1);
}

inline std::vector<std::pair<int, std::vector<std::size_t>>> fibers(const std::vector<Position>& Y,
                                                                    const std::vector<std::size_t>& idx, int coord) {
  std::map<int, std::vector<std::size_t>> by;
  for (std::size_t i : idx) by[Y[i][coord]].push_back(i);
  return {by.begin(), by.end()};
}

template <class Mass>
void push_rec(const std::vector<Position>& Y, const std::vector<std::size_t>& idx, const std::vector<int>& order,
              std::size_t j, const Rational& carried, Mass&& mass_of, Measure<Position>& out) {
  if (j == order.size()) {
    if (idx.size() != 1) throw InvariantViolation("two residues of Y share a position vector");
    add_mass(out, Y[idx.front()], carried);
    return;
  }
  auto fib = fibers(Y, idx, order[j]);
  std::vector<int> V;
  for (const auto& [v, ids] : fib) V.push_back(v);
  std::vector<Rational> mass = mass_of(j, V);
  for (std::size_t a = 0; a < fib.size(); ++a)
    if (mass[a] != 0) push_rec(Y, fib[a].second, order, j + 1, carried * mass[a], mass_of, out);
}

}  // namespace detail

// S_Y on a product measure f_1 x ... x f_l over position vectors. Along the coordinate order, the
// values of each fiber split the line: every value absorbs the mass up to the next one, the
// lowest also takes everything below it.
inline Measure<Position> push_product(const std::vector<Position>& Y, const std::vector<Measure<int>>& f,
                                      const std::vector<int>& order) {
  if (Y.empty()) throw InputError("push operator needs a nonempty Y");
  std::vector<std::size_t> all(Y.size());
  for (std::size_t i = 0; i < Y.size(); ++i) all[i] = i;
  Measure<Position> out;
  auto mass_of = [&](std::size_t j, const std::vector<int>& V) {
    std::vector<Rational> m(V.size());
    for (const auto& [k, w] : f[order[j]]) m[detail::absorb(V, k)] += w;
    return m;
  };
  detail::push_rec(Y, all, order, 0, Rational(1), mass_of, out);
  return out;
}

// General S_Y on any finitely supported (possibly signed) f.
inline Measure<Position> push(const std::vector<Position>& Y, const Measure<Position>& f, const std::vector<int>& order) {
  if (Y.empty()) throw InputError("push operator needs a nonempty Y");
  Measure<Position> out;
  std::function<void(const std::vector<std::size_t>&, std::vector<std::pair<Position, Rational>>, std::size_t)> rec =
      [&](const std::vector<std::size_t>& idx, std::vector<std::pair<Position, Rational>> fs, std::size_t j) {
        if (j == order.size()) {
          if (idx.size() != 1) throw InvariantViolation("two residues of Y share a position vector");
          Rational s = 0;
          for (const auto& [z, w] : fs) s += w;
          add_mass(out, Y[idx.front()], s);
          return;
        }
        auto fib = detail::fibers(Y, idx, order[j]);
        std::vector<int> V;
        for (const auto& [v, ids] : fib) V.push_back(v);
        std::vector<std::vector<std::pair<Position, Rational>>> bucket(V.size());
        for (auto& [z, w] : fs) bucket[detail::absorb(V, z[order[j]])].emplace_back(std::move(z), std::move(w));
        for (std::size_t a = 0; a < fib.size(); ++a)
          if (!bucket[a].empty()) rec(fib[a].second, std::move(bucket[a]), j + 1);
      };
  std::vector<std::size_t> all(Y.size());
  for (std::size_t i = 0; i < Y.size(); ++i) all[i] = i;
  rec(all, {f.begin(), f.end()}, 0);
  return out;
}

inline std::vector<int> identity_order(int l) {
  std::vector<int> o(l);
  for (int i = 0; i < l; ++i) o[i] = i;
  return o;
}

}  // namespace coxbound
