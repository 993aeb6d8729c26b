#pragma once

#include <vector>

#include "roughscl/path.hpp"

namespace roughscl {

// Backward alternating record-time compression of a path at horizon tau.
// The recursion starts at tau and repeatedly jumps to the largest earlier
// time in the opposite record set (or in the union, from a time in neither),
// until it reaches 0. The compressed path interpolates z at the visited
// times.
struct OrmResult {
  std::vector<double> taus;        // increasing, taus.front() = 0, taus.back() = tau
  PiecewiseLinearPath compressed;  // breakpoints (tau_n, z(tau_n))
  std::vector<double> t_plus;      // visited times lying in the increase record set
  std::vector<double> t_minus;     // visited times lying in the decrease record set
};

OrmResult orm(const PiecewiseLinearPath& z, double tau, const RegularityBounds& bounds);

struct InterpolationSets {
  std::vector<double> t_all;
  std::vector<double> t_plus;
  std::vector<double> t_minus;
};

InterpolationSets interpolation_sets(const OrmResult& result);

namespace detail {

// Largest element of the set, plus 0, restricted to [0, t]: t itself when t
// lies in the set,
// otherwise the largest interval right endpoint <= t, otherwise 0.
double max_in(const IntervalUnion& set, double t);

}  // namespace detail

}  // namespace roughscl
