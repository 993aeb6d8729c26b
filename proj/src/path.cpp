#include "roughscl/path.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace roughscl {

double inv_bound(double m) {
  if (std::isnan(m) || m < 0) throw std::invalid_argument("bound must lie in [0, inf]");
  if (m == 0) return kInf;
  if (std::isinf(m)) return 0.0;
  return 1.0 / m;
}

PiecewiseLinearPath::PiecewiseLinearPath(std::vector<double> t, std::vector<double> v,
                                         bool anchored)
    : times(std::move(t)), values(std::move(v)) {
  if (times.empty()) throw std::invalid_argument("path needs at least one breakpoint");
  if (times.size() != values.size()) {
    throw std::invalid_argument("path times and values differ in length");
  }
  if (times.front() != 0) throw std::invalid_argument("path must start at time 0");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(values[i])) {
      throw std::invalid_argument("path breakpoints must be finite");
    }
    if (i > 0 && times[i] <= times[i - 1]) {
      throw std::invalid_argument("path times must be strictly increasing");
    }
  }
  if (anchored && values.front() != 0) throw std::invalid_argument("path must start at value 0");
}

double eval(const PiecewiseLinearPath& path, double t) {
  if (!(t >= path.times.front()) || t > path.times.back()) {
    throw std::domain_error("evaluation time outside [0, horizon]");
  }
  if (t == path.times.back()) return path.values.back();
  auto it = std::upper_bound(path.times.begin(), path.times.end(), t);
  std::size_t i = static_cast<std::size_t>(it - path.times.begin()) - 1;
  double slope = (path.values[i + 1] - path.values[i]) / (path.times[i + 1] - path.times[i]);
  return path.values[i] + slope * (t - path.times[i]);
}

double ExtremumPath::operator()(double t) const {
  if (infinite) return sign > 0 ? kInf : -kInf;
  return eval(path, t);
}

namespace {

// Shared running-extremum walk; cmp(a, b) is "a beats the record b", so
// std::greater for a running max and std::less for a running min.
template <typename Cmp>
PiecewiseLinearPath running_extremum(const PiecewiseLinearPath& z, double level, Cmp cmp) {
  double cur = cmp(z.values.front(), level) ? z.values.front() : level;
  std::vector<double> ts{z.times.front()};
  std::vector<double> vs{cur};
  for (std::size_t i = 0; i + 1 < z.times.size(); ++i) {
    double v0 = z.values[i];
    double v1 = z.values[i + 1];
    if (cmp(v1, cur)) {
      if (cmp(cur, v0)) {
        double t_cross =
            z.times[i] + (cur - v0) / (v1 - v0) * (z.times[i + 1] - z.times[i]);
        if (t_cross > ts.back()) {
          ts.push_back(t_cross);
          vs.push_back(cur);
        }
      }
      cur = v1;
    }
    ts.push_back(z.times[i + 1]);
    vs.push_back(cur);
  }
  return PiecewiseLinearPath(std::move(ts), std::move(vs), false);
}

}  // namespace

ExtremumPath running_max(const PiecewiseLinearPath& z, const RegularityBounds& bounds) {
  double level = inv_bound(bounds.m_minus);
  if (std::isinf(level)) return ExtremumPath{+1, true, {}};
  return ExtremumPath{+1, false, running_extremum(z, level, std::greater<double>{})};
}

ExtremumPath running_min(const PiecewiseLinearPath& z, const RegularityBounds& bounds) {
  double level = -inv_bound(bounds.m_plus);
  if (std::isinf(level)) return ExtremumPath{-1, true, {}};
  return ExtremumPath{-1, false, running_extremum(z, level, std::less<double>{})};
}

bool IntervalUnion::contains(double x) const {
  if (x == 0.0) return contains_zero;
  auto it = std::lower_bound(intervals.begin(), intervals.end(), x,
                             [](const std::pair<double, double>& iv, double v) {
                               return iv.second < v;
                             });
  return it != intervals.end() && it->first < x && x <= it->second;
}

IntervalUnion increase_set(const ExtremumPath& rho, int sign) {
  if (sign != +1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  IntervalUnion out;
  if (rho.infinite) return out;
  const auto& t = rho.path.times;
  const auto& v = rho.path.values;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (sign * (v[i + 1] - v[i]) < 0) {
      throw std::invalid_argument("extremum path is not monotone in the record direction");
    }
    if (v[i + 1] == v[i]) continue;
    if (!out.intervals.empty() && out.intervals.back().second == t[i]) {
      out.intervals.back().second = t[i + 1];
    } else {
      out.intervals.emplace_back(t[i], t[i + 1]);
    }
  }
  return out;
}

PiecewiseLinearPath compose(const PiecewiseLinearPath& z, const PiecewiseLinearPath& alpha) {
  for (std::size_t i = 0; i + 1 < alpha.values.size(); ++i) {
    if (alpha.values[i + 1] < alpha.values[i]) {
      throw std::invalid_argument("time change must be nondecreasing");
    }
  }
  if (alpha.values.front() < z.times.front() || alpha.values.back() > z.horizon()) {
    throw std::invalid_argument("time change leaves the domain of the path");
  }
  std::vector<double> ts{alpha.times.front()};
  std::vector<double> vs{eval(z, alpha.values.front())};
  for (std::size_t j = 0; j + 1 < alpha.times.size(); ++j) {
    double a0 = alpha.values[j];
    double a1 = alpha.values[j + 1];
    double s0 = alpha.times[j];
    double s1 = alpha.times[j + 1];
    if (a1 > a0) {
      auto first = std::upper_bound(z.times.begin(), z.times.end(), a0);
      for (auto it = first; it != z.times.end() && *it < a1; ++it) {
        std::size_t k = static_cast<std::size_t>(it - z.times.begin());
        double s = s0 + (*it - a0) / (a1 - a0) * (s1 - s0);
        s = std::min(s, s1);
        if (s > ts.back()) {
          ts.push_back(s);
          vs.push_back(z.values[k]);
        } else {
          vs.back() = z.values[k];
        }
      }
    }
    if (s1 > ts.back()) {
      ts.push_back(s1);
      vs.push_back(eval(z, a1));
    } else {
      vs.back() = eval(z, a1);
    }
  }
  return PiecewiseLinearPath(std::move(ts), std::move(vs), false);
}

double generalized_inverse(const PiecewiseLinearPath& alpha, double t) {
  for (std::size_t i = 0; i + 1 < alpha.values.size(); ++i) {
    if (alpha.values[i + 1] < alpha.values[i]) {
      throw std::invalid_argument("time change must be nondecreasing");
    }
  }
  if (t < alpha.values.front() || t > alpha.values.back()) {
    throw std::domain_error("target time outside the range of the time change");
  }
  auto it = std::lower_bound(alpha.values.begin(), alpha.values.end(), t);
  std::size_t k = static_cast<std::size_t>(it - alpha.values.begin());
  if (k == 0 || alpha.values[k] == t) return alpha.times[k];
  double frac = (t - alpha.values[k - 1]) / (alpha.values[k] - alpha.values[k - 1]);
  return alpha.times[k - 1] + frac * (alpha.times[k] - alpha.times[k - 1]);
}

double uniform_distance(const PiecewiseLinearPath& z1, const PiecewiseLinearPath& z2) {
  if (z1.horizon() != z2.horizon()) {
    throw std::invalid_argument("paths must share the horizon");
  }
  double d = 0;
  std::size_t i = 0, j = 0;
  while (i < z1.times.size() || j < z2.times.size()) {
    double t;
    if (j == z2.times.size() || (i < z1.times.size() && z1.times[i] <= z2.times[j])) {
      t = z1.times[i++];
      if (i <= z1.times.size() && j < z2.times.size() && z2.times[j] == t) ++j;
    } else {
      t = z2.times[j++];
    }
    d = std::max(d, std::abs(eval(z1, t) - eval(z2, t)));
  }
  return d;
}

double total_variation(const PiecewiseLinearPath& path) {
  double tv = 0;
  for (std::size_t i = 0; i + 1 < path.values.size(); ++i) {
    tv += std::abs(path.values[i + 1] - path.values[i]);
  }
  return tv;
}

PiecewiseLinearPath truncate_path(const PiecewiseLinearPath& path, double tau) {
  if (!(tau > 0) || tau > path.horizon()) {
    throw std::invalid_argument("truncation time must lie in (0, horizon]");
  }
  std::vector<double> ts, vs;
  for (std::size_t i = 0; i < path.times.size() && path.times[i] < tau; ++i) {
    ts.push_back(path.times[i]);
    vs.push_back(path.values[i]);
  }
  ts.push_back(tau);
  vs.push_back(eval(path, tau));
  return PiecewiseLinearPath(std::move(ts), std::move(vs), false);
}

PiecewiseLinearPath sample_brownian(double horizon, std::size_t n_segments, std::uint64_t seed,
                                    double scale) {
  if (!(horizon > 0)) throw std::invalid_argument("horizon must be positive");
  if (n_segments == 0) throw std::invalid_argument("need at least one segment");
  if (!(scale >= 0)) throw std::invalid_argument("scale must be nonnegative");
  std::mt19937_64 rng(seed);
  double dt = horizon / static_cast<double>(n_segments);
  std::normal_distribution<double> step(0.0, scale * std::sqrt(dt));
  std::vector<double> ts(n_segments + 1), vs(n_segments + 1);
  ts[0] = 0;
  vs[0] = 0;
  for (std::size_t i = 1; i <= n_segments; ++i) {
    ts[i] = horizon * (static_cast<double>(i) / static_cast<double>(n_segments));
    vs[i] = vs[i - 1] + step(rng);
  }
  return PiecewiseLinearPath(std::move(ts), std::move(vs));
}

}  // namespace roughscl
