// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "krb/errors.hpp"

namespace krb {

using Vector = std::vector<double>;

inline void check_same_size(const Vector &x, const Vector &y, const char *what) {
  if (x.size() != y.size()) {
    throw DimensionMismatch(std::string(what) + ": vector lengths " +
                            std::to_string(x.size()) + " and " + std::to_string(y.size()));
  }
}

inline double dot(const Vector &x, const Vector &y) {
  check_same_size(x, y, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(const Vector &x) { return std::sqrt(dot(x, x)); }

/// y += a*x
inline void axpy(double a, const Vector &x, Vector &y) {
  check_same_size(x, y, "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline void scale(Vector &x, double a) {
  for (double &v : x) v *= a;
}

inline Vector scaled(const Vector &x, double a) {
  Vector y = x;
  scale(y, a);
  return y;
}

inline Vector subtract(const Vector &x, const Vector &y) {
  check_same_size(x, y, "subtract");
  Vector d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
  return d;
}

inline bool all_finite(const Vector &x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

} // namespace krb
