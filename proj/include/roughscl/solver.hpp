#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "roughscl/distance.hpp"
#include "roughscl/flux.hpp"
#include "roughscl/path.hpp"

namespace roughscl {

// Cell-averaged solution on a uniform grid over [x_left, x_right].
struct GridSolution {
  double x_left = 0;
  double x_right = 1;
  int n_cells = 0;
  std::vector<double> cell_averages;
  double time = 0;

  double dx() const { return (x_right - x_left) / n_cells; }
  double x_center(int i) const { return x_left + (i + 0.5) * dx(); }
};

GridSolution make_grid(double x_left, double x_right, int n_cells,
                       const std::function<double(double)>& u0);

double l1_norm(const GridSolution& u);
double l1_distance(const GridSolution& a, const GridSolution& b);
double mass(const GridSolution& u);

// One-sided slope bounds of f'(u0) from adjacent-cell difference quotients.
// A quotient steeper than jump_factor/dx counts as a jump and makes the
// corresponding bound infinite.
RegularityBounds estimate_bounds(const GridSolution& u0, const FluxModel& flux,
                                 double jump_factor = 0.5);

// Per-step diagnostics accumulated across a solve when requested.
struct StepStats {
  double max_mass_drift = 0;  // worst |mass change + boundary flux transfer|
  double max_overshoot = 0;   // worst excursion beyond the initial range
  long long steps = 0;
};

// One conservative update with the Godunov flux for g(u) = lambda*f(u) and
// outflow boundaries. The CFL condition dt*|lambda|*max|f'| <= cfl*dx is
// checked, not enforced by clipping.
GridSolution godunov_step(const GridSolution& u, const FluxModel& flux, double lambda, double dt,
                          double cfl = 0.45, StepStats* stats = nullptr);

struct SolveOptions {
  double cfl = 0.45;
  // Multiplies the substep count of every segment; used for discretization
  // self-comparison studies.
  int substep_multiplier = 1;
  // Overrides the per-segment substep count when positive. The CFL check
  // still applies and rejects a count that is too small.
  int forced_substeps = 0;
  StepStats* stats = nullptr;
};

// Chains Godunov steps over the linear segments of z with lambda the segment
// slope, subdividing each segment so the CFL condition holds exactly.
GridSolution solve_path(const GridSolution& u0, const PiecewiseLinearPath& z, double tau,
                        const FluxModel& flux, double cfl = 0.45);
GridSolution solve_path(const GridSolution& u0, const PiecewiseLinearPath& z, double tau,
                        const FluxModel& flux, const SolveOptions& options);

// Monotone-path fast path: when z stays inside the band where the running
// extrema are pinned to their levels, the solution at tau depends on z(tau)
// only, so a single monotone sweep suffices. Falls back to segment chaining
// when the certificate fails.
GridSolution solve_path_cached(const GridSolution& u0, const PiecewiseLinearPath& z, double tau,
                               const FluxModel& flux, double cfl = 0.45);

// Exact entropy solution of the Riemann problem for lambda*f at (t, x).
double riemann_exact(const FluxModel& flux, double u_left, double u_right, double lambda, double t,
                     double x);

struct OleinikReport {
  double lower_bound = 0;  // -1/(rho_plus(t) - z(t)), extended real
  double upper_bound = 0;  // 1/(z(t) - rho_minus(t)), extended real
  double slack = 0;
  double max_violation_lower = 0;  // worst excess below lower_bound - slack
  double max_violation_upper = 0;  // worst excess above upper_bound + slack
  std::size_t n_violations = 0;
  std::vector<std::pair<double, double>> quantile_violations;  // (quantile, excess)
};

// Compares adjacent-cell difference quotients of f'(u) against the one-sided
// bounds derived from the running extrema of z at time t. The slack is
// c_slack * sqrt(dx).
OleinikReport oleinik_report(const GridSolution& u, const PiecewiseLinearPath& z, double t,
                             const RegularityBounds& bounds, const FluxModel& flux,
                             double c_slack = 2.0);

// Smooths u0 through the increasing change of variables h(u) = f'(u) - f'(0)
// and a compactly supported bump kernel of width epsilon. epsilon must
// exceed the cell width.
GridSolution mollify_initial(const GridSolution& u0, double epsilon, const FluxModel& flux);

// Norms of a pair of initial data entering the stability estimates, with the
// flux derivative bounds taken over the combined data range.
DataNorms data_norms(const GridSolution& u0_1, const GridSolution& u0_2, const FluxModel& flux);

// Right-hand side of the L1 stability estimate at time t, with the uniform
// distance of the paths up to t as the path discrepancy.
double stability_rhs(const GridSolution& u0_1, const GridSolution& u0_2,
                     const PiecewiseLinearPath& z1, const PiecewiseLinearPath& z2, double t,
                     const FluxModel& flux, double C);

}  // namespace roughscl
