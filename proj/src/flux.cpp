#include "roughscl/flux.hpp"

#include <cmath>
#include <stdexcept>

namespace roughscl {

FluxModel make_flux(const std::string& name) {
  if (name == "burgers") {
    return FluxModel{[](double u) { return 0.5 * u * u; }, [](double u) { return u; },
                     [](double) { return 1.0; }, "burgers"};
  }
  if (name == "cosh") {
    return FluxModel{[](double u) { return std::cosh(u) - 1.0; },
                     [](double u) { return std::sinh(u); }, [](double u) { return std::cosh(u); },
                     "cosh"};
  }
  throw std::invalid_argument("unknown flux: " + name);
}

std::vector<std::string> flux_names() { return {"burgers", "cosh"}; }

void check_flux(const FluxModel& flux, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("check_flux needs lo < hi");
  const int n = 256;
  double h = (hi - lo) * 1e-7;
  for (int i = 0; i <= n; ++i) {
    double u = lo + (hi - lo) * i / n;
    if (!(flux.f_double_prime(u) > 0)) {
      throw std::invalid_argument("flux is not strictly convex at u = " + std::to_string(u));
    }
    double fd = (flux.f(u + h) - flux.f(u - h)) / (2 * h);
    if (std::abs(fd - flux.f_prime(u)) > 1e-4 * (1.0 + std::abs(flux.f_prime(u)))) {
      throw std::invalid_argument("flux derivative is inconsistent at u = " + std::to_string(u));
    }
  }
}

double max_abs_fprime(const FluxModel& flux, double lo, double hi) {
  return std::max(std::abs(flux.f_prime(lo)), std::abs(flux.f_prime(hi)));
}

double fprime_inverse(const FluxModel& flux, double s, double lo, double hi, double tol) {
  if (!(lo <= hi)) throw std::invalid_argument("fprime_inverse needs lo <= hi");
  if (flux.f_prime(lo) > s || flux.f_prime(hi) < s) {
    throw std::invalid_argument("fprime_inverse: value not bracketed");
  }
  double a = lo, b = hi;
  while (b - a > tol) {
    double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    if (flux.f_prime(mid) < s) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace roughscl
