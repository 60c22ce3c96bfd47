#pragma once

#include <gmpxx.h>

#include <string>

namespace coxbound {

using Rational = mpq_class;

inline std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline Rational parse_rational(const std::string& s) {
  Rational q(s, 10);
  q.canonicalize();
  return q;
}

}  // namespace coxbound
