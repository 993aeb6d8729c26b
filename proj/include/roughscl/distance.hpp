#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "roughscl/orm.hpp"
#include "roughscl/path.hpp"

namespace roughscl {

// One grid line of the cost construction: a compression record time of one
// of the two paths, carrying the record family it belongs to (+1, -1, or 0
// for the endpoints that are in neither) and the value of the matching
// running extremum of its own path at that time.
struct GridLine {
  double coord = 0;
  int family = 0;
  double value = 0;
};

// Cost data on [0, tau]^2 for a pair of paths: vertical lines at the record
// times of the first path, horizontal lines at those of the second, the
// running extrema of both, the shared truncation thresholds, and the entry
// coordinates of the regions where each extremum has strictly passed its
// threshold (+inf when it never does).
struct CostGrid {
  double tau = 0;
  std::vector<GridLine> lines1;
  std::vector<GridLine> lines2;
  ExtremumPath rho1_plus, rho1_minus, rho2_plus, rho2_minus;
  double thr_plus = 0;
  double thr_minus = 0;
  double cross1_plus = 0, cross2_plus = 0;
  double cross1_minus = 0, cross2_minus = 0;
  double terminal_cost = 0;  // |z1(tau) - z2(tau)|

  std::size_t cells() const { return (lines1.size() - 1) * (lines2.size() - 1); }
};

// Requires all four bounds finite (a zero bound is allowed and disables the
// corresponding family).
CostGrid build_cost_grid(const PiecewiseLinearPath& z1, const PiecewiseLinearPath& z2,
                         const RegularityBounds& b1, const RegularityBounds& b2);

struct DistanceReport {
  double value = 0;
  // Monotone polyline from (0, 0) to (tau, tau) realizing the value.
  std::vector<std::pair<double, double>> witness;
  bool kappa_plus_finite = false;
  bool kappa_minus_finite = false;
  std::pair<double, double> kappa_plus{0, 0};   // first witness point past both + thresholds
  std::pair<double, double> kappa_minus{0, 0};  // same for the - thresholds
  std::size_t n1 = 0, n2 = 0;                   // grid cells per axis
};

// Exact minimization of the max cost accumulated along monotone curves
// through the grid, by threshold search over the finite set of candidate
// values with an interval-reachability feasibility sweep.
DistanceReport dp_on_grid(const CostGrid& grid);
DistanceReport dp_distance(const PiecewiseLinearPath& z1, const PiecewiseLinearPath& z2,
                           const RegularityBounds& b1, const RegularityBounds& b2);

// Full pointwise cost at a crossing point of a grid line: both family terms
// with their activation indicators. axis 1 addresses lines1 (other = height),
// axis 2 addresses lines2 (other = abscissa).
double line_cost(const CostGrid& grid, int axis, std::size_t line_index, double other);

// Pointwise cost at (tau, tau) including the endpoint mismatch term.
double terminal_corner_cost(const CostGrid& grid);

// Independent check: enumerates all monotone cell paths through the grid and
// minimizes each one separately. Refuses grids larger than max_cells.
double brute_force_distance(const CostGrid& grid, std::size_t max_cells = 36);

// Distance between the reparameterized pair (z1 o alpha1, z2 o alpha2),
// after compressing each composed path on the common horizon.
double phi(const PiecewiseLinearPath& z1, const PiecewiseLinearPath& z2,
           const PiecewiseLinearPath& alpha1, const PiecewiseLinearPath& alpha2,
           const RegularityBounds& b1, const RegularityBounds& b2);

struct DataNorms {
  double l1_diff = 0;              // |u01 - u02| in L1
  double bv_1 = 0, bv_2 = 0;       // total variations of the initial data
  double l2sq_1 = 0, l2sq_2 = 0;   // squared L2 norms of the initial data
  double fprime_sup = 0;           // sup |f'| over the relevant range
  double fsecond_sup = 0;          // sup |f''|
};

// Upper bound for the L1 distance of the two solutions at the common
// horizon, using the grid distance of the driving paths in place of their
// uniform distance.
double stability_bound_improved(const DataNorms& norms, const PiecewiseLinearPath& z1,
                                const PiecewiseLinearPath& z2, const RegularityBounds& b1,
                                const RegularityBounds& b2, double dist, double C);

}  // namespace roughscl
