#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace roughscl {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Extended-real reciprocal of a bound in [0, inf]: inv_bound(0) = inf and
// inv_bound(inf) = 0.
double inv_bound(double m);

// Continuous piecewise-linear path on [0, horizon] represented by its
// breakpoints. Times are strictly increasing and start at 0; with
// anchored = true the first value must be 0.
struct PiecewiseLinearPath {
  std::vector<double> times;
  std::vector<double> values;

  PiecewiseLinearPath() = default;
  PiecewiseLinearPath(std::vector<double> t, std::vector<double> v, bool anchored = true);

  double horizon() const { return times.back(); }
  std::size_t n_points() const { return times.size(); }
};

// Linear interpolation; exact at breakpoints. t must lie in [0, horizon].
double eval(const PiecewiseLinearPath& path, double t);

// One-sided slope bounds; extended reals in [0, inf].
struct RegularityBounds {
  double m_minus = kInf;
  double m_plus = kInf;
};

// Running extremum of a path, floored (sign = +1) or capped (sign = -1) at a
// level derived from the bounds. A zero bound pushes the level to infinity;
// that case is a distinguished constant infinite object with no breakpoint
// representation.
struct ExtremumPath {
  int sign = +1;
  bool infinite = false;
  PiecewiseLinearPath path;

  double operator()(double t) const;
};

// max(1/m_minus, max_{s<=t} z(s)), as a path of breakpoints.
ExtremumPath running_max(const PiecewiseLinearPath& z, const RegularityBounds& bounds);
// min(-1/m_plus, min_{s<=t} z(s)).
ExtremumPath running_min(const PiecewiseLinearPath& z, const RegularityBounds& bounds);

// Finite union of half-open intervals (s, t], plus the distinguished point 0.
struct IntervalUnion {
  std::vector<std::pair<double, double>> intervals;  // disjoint, increasing
  bool contains_zero = true;

  bool contains(double x) const;
};

// Times where the running extremum attains a strictly new record:
// {t : inf{s : rho(s) >= rho(t)} = t} for sign = +1, and with <= for
// sign = -1. For piecewise-linear input this is {0} together with finitely
// many intervals (s, t]. rho must be the matching running extremum; a
// non-monotone path is rejected.
IntervalUnion increase_set(const ExtremumPath& rho, int sign);

// z(alpha(s)) for a nondecreasing time change alpha; breakpoints of the
// result are the breakpoints of alpha together with the preimages of the
// breakpoints of z.
PiecewiseLinearPath compose(const PiecewiseLinearPath& z, const PiecewiseLinearPath& alpha);

// inf{ s : alpha(s) >= t } for nondecreasing alpha; t must lie in the range
// of alpha.
double generalized_inverse(const PiecewiseLinearPath& alpha, double t);

double uniform_distance(const PiecewiseLinearPath& z1, const PiecewiseLinearPath& z2);

double total_variation(const PiecewiseLinearPath& path);

// Restriction to [0, tau], inserting a breakpoint at tau if needed.
PiecewiseLinearPath truncate_path(const PiecewiseLinearPath& path, double tau);

// Piecewise-linear Brownian sample: n_segments equal steps on [0, horizon],
// increments drawn as Normal(0, scale^2 * dt) from a seeded mt19937_64.
PiecewiseLinearPath sample_brownian(double horizon, std::size_t n_segments, std::uint64_t seed,
                                    double scale);

}  // namespace roughscl
