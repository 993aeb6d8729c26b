#pragma once

// Dense-sampling reference implementations of the running extrema, the
// record (strict increase/decrease) sets, and the backward compression
// recursion. Everything here follows the defining formulas sample by sample
// on a uniform grid; it is deliberately slow and simple so the exact
// breakpoint implementations can be validated against it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "roughscl/path.hpp"

namespace oracle {

struct DenseExtrema {
  double step = 0;
  std::vector<double> t;
  std::vector<double> rho_plus;   // may be +inf throughout (zero m_minus)
  std::vector<double> rho_minus;  // may be -inf throughout (zero m_plus)
};

inline DenseExtrema dense_extrema(const roughscl::PiecewiseLinearPath& z, double tau,
                                  const roughscl::RegularityBounds& bounds, double step) {
  const double inf = roughscl::kInf;
  auto n = static_cast<std::size_t>(std::llround(tau / step));
  if (n < 1) throw std::invalid_argument("dense_extrema: step too large");
  DenseExtrema out;
  out.step = tau / static_cast<double>(n);
  out.t.resize(n + 1);
  out.rho_plus.resize(n + 1);
  out.rho_minus.resize(n + 1);
  const double level_plus = roughscl::inv_bound(bounds.m_minus);
  const double level_minus = -roughscl::inv_bound(bounds.m_plus);
  double run_max = -inf;
  double run_min = inf;
  for (std::size_t i = 0; i <= n; ++i) {
    // The rounded product can land an ulp past tau at i == n, which the path
    // evaluator rightly rejects, so pin the endpoint.
    const double ti = i == n ? tau : tau * static_cast<double>(i) / static_cast<double>(n);
    out.t[i] = ti;
    const double zi = roughscl::eval(z, ti);
    run_max = std::max(run_max, zi);
    run_min = std::min(run_min, zi);
    out.rho_plus[i] = std::max(level_plus, run_max);
    out.rho_minus[i] = std::min(level_minus, run_min);
  }
  return out;
}

// Membership of grid index i in the record set: the first sample attaining
// at least (at most, for the minus side) rho[i] must be i itself. Index 0
// always belongs.
inline std::vector<char> dense_records_plus(const std::vector<double>& rho_plus) {
  std::vector<char> member(rho_plus.size(), 0);
  for (std::size_t i = 0; i < rho_plus.size(); ++i) {
    auto it = std::lower_bound(rho_plus.begin(), rho_plus.end(), rho_plus[i]);
    member[i] = static_cast<char>(static_cast<std::size_t>(it - rho_plus.begin()) == i);
  }
  member[0] = 1;
  return member;
}

inline std::vector<char> dense_records_minus(const std::vector<double>& rho_minus) {
  std::vector<char> member(rho_minus.size(), 0);
  for (std::size_t i = 0; i < rho_minus.size(); ++i) {
    auto it = std::lower_bound(rho_minus.begin(), rho_minus.end(), rho_minus[i],
                               [](double a, double b) { return a > b; });
    member[i] = static_cast<char>(static_cast<std::size_t>(it - rho_minus.begin()) == i);
  }
  member[0] = 1;
  return member;
}

struct DenseOrm {
  std::vector<std::size_t> idx;  // record indices, increasing, idx.front()=0
  std::vector<double> times;
};

// The backward recursion, run literally on the sampled record sets:
// from the current index, step to the largest member of the opposite set
// (or of the union when the current index is in neither), until index 0.
inline DenseOrm dense_orm(const DenseExtrema& extrema) {
  const auto bp = dense_records_plus(extrema.rho_plus);
  const auto bm = dense_records_minus(extrema.rho_minus);
  const std::size_t n = extrema.t.size() - 1;
  auto max_in = [](const std::vector<char>& b, std::size_t upto) -> std::size_t {
    for (std::size_t j = upto + 1; j-- > 0;) {
      if (b[j]) return j;
    }
    return 0;
  };
  std::vector<std::size_t> rev;
  std::size_t cur = n;
  rev.push_back(cur);
  std::size_t guard = 0;
  while (cur != 0) {
    if (++guard > extrema.t.size() + 4) throw std::runtime_error("dense orm: recursion stalled");
    const bool in_plus = bp[cur] != 0;
    const bool in_minus = bm[cur] != 0;
    std::size_t next = 0;
    if (in_plus && in_minus && cur != 0) throw std::runtime_error("dense orm: point in both record sets");
    if (in_plus) {
      next = max_in(bm, cur);
    } else if (in_minus) {
      next = max_in(bp, cur);
    } else {
      next = std::max(max_in(bp, cur), max_in(bm, cur));
    }
    if (next == cur) throw std::runtime_error("dense orm: recursion stalled");
    rev.push_back(next);
    cur = next;
  }
  DenseOrm out;
  out.idx.assign(rev.rbegin(), rev.rend());
  out.times.reserve(out.idx.size());
  for (std::size_t k : out.idx) out.times.push_back(extrema.t[k]);
  return out;
}

}  // namespace oracle
