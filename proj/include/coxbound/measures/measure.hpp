#pragma once

#include <functional>
#include <map>
#include <string>

#include <json.hpp>

#include "coxbound/errors.hpp"
#include "coxbound/rational.hpp"

namespace coxbound {

// Finitely supported measure with exact weights; zero weights are never stored.
template <class Key>
using Measure = std::map<Key, Rational>;

template <class Key>
void add_mass(Measure<Key>& m, const Key& k, const Rational& w) {
  if (w == 0) return;
  auto [it, fresh] = m.emplace(k, w);
  if (!fresh) {
    it->second += w;
    if (it->second == 0) m.erase(it);
  }
}

template <class Key>
Rational total_mass(const Measure<Key>& m) {
  Rational s = 0;
  for (const auto& [k, w] : m) s += w;
  return s;
}

template <class Key>
Rational l1_norm(const Measure<Key>& m) {
  Rational s = 0;
  for (const auto& [k, w] : m) s += abs(w);
  return s;
}

template <class Key>
Rational l1_distance(const Measure<Key>& a, const Measure<Key>& b) {
  Rational s = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && i->first < j->first)) {
      s += abs(i->second);
      ++i;
    } else if (i == a.end() || j->first < i->first) {
      s += abs(j->second);
      ++j;
    } else {
      s += abs(i->second - j->second);
      ++i;
      ++j;
    }
  }
  return s;
}

template <class Key>
void require_probability(const Measure<Key>& m, const std::string& what) {
  for (const auto& [k, w] : m)
    if (w < 0) throw InvariantViolation(what + ": negative weight");
  if (total_mass(m) != 1) throw InvariantViolation(what + ": total mass " + to_string(total_mass(m)) + " is not 1");
}

template <class Key, class F>
auto push_forward(const Measure<Key>& m, F&& f) {
  Measure<std::decay_t<decltype(f(m.begin()->first))>> out;
  for (const auto& [k, w] : m) add_mass(out, f(k), w);
  return out;
}

template <class Key>
Measure<Key> point_mass(const Key& k) {
  return Measure<Key>{{k, Rational(1)}};
}

template <class Key, class Fmt>
nlohmann::json measure_to_json(const Measure<Key>& m, Fmt&& fmt) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [k, w] : m) out.push_back({{"residue", fmt(k)}, {"weight", to_string(w)}});
  return out;
}

}  // namespace coxbound
