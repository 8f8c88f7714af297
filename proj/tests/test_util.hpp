#pragma once

#include <cmath>
#include <limits>

// Number of representable doubles strictly between a and b, capped at 1024.
// 0 means bitwise equal (up to -0/+0).
inline int ulps_between(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return 1024;
  if (a == b) return 0;
  if (a > b) {
    const double t = a;
    a = b;
    b = t;
  }
  int k = 0;
  while (a < b && k < 1024) {
    a = std::nextafter(a, std::numeric_limits<double>::infinity());
    ++k;
  }
  return k;
}
