#pragma once

#include <functional>
#include <string>
#include <vector>

namespace roughscl {

// Strictly convex flux with its first two derivatives.
struct FluxModel {
  std::function<double(double)> f;
  std::function<double(double)> f_prime;
  std::function<double(double)> f_double_prime;
  std::string name;
};

// Registry lookup: "burgers" is u^2/2, "cosh" is cosh(u) - 1. Unknown names
// are rejected.
FluxModel make_flux(const std::string& name);

std::vector<std::string> flux_names();

// Samples f'' for positivity and finite-difference consistency of f' on
// [lo, hi]; throws on a violation.
void check_flux(const FluxModel& flux, double lo, double hi);

// max |f'| over [lo, hi]; f' is increasing for a convex flux, so this is the
// larger endpoint magnitude.
double max_abs_fprime(const FluxModel& flux, double lo, double hi);

// Inverse of f' on a bracket, by bisection to absolute tolerance tol.
double fprime_inverse(const FluxModel& flux, double s, double lo, double hi, double tol = 1e-12);

}  // namespace roughscl
