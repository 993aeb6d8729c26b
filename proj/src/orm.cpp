#include "roughscl/orm.hpp"

#include <algorithm>
#include <stdexcept>

#include "roughscl/errors.hpp"

namespace roughscl {

namespace detail {

double max_in(const IntervalUnion& set, double t) {
  if (set.contains(t)) return t;
  auto it = std::upper_bound(set.intervals.begin(), set.intervals.end(), t,
                             [](double v, const std::pair<double, double>& iv) {
                               return v < iv.second;
                             });
  if (it == set.intervals.begin()) return 0.0;
  return std::prev(it)->second;
}

}  // namespace detail

OrmResult orm(const PiecewiseLinearPath& z, double tau, const RegularityBounds& bounds) {
  auto zt = tau == z.horizon() ? z : truncate_path(z, tau);
  auto b_plus = increase_set(running_max(zt, bounds), +1);
  auto b_minus = increase_set(running_min(zt, bounds), -1);

  std::vector<double> taus{tau};
  std::vector<double> t_plus, t_minus;
  // Start of the terminal constant run; equals tau when the path still moves
  // at the horizon.
  std::size_t flat = zt.values.size() - 1;
  while (flat > 0 && zt.values[flat - 1] == zt.values[flat]) --flat;
  double s_bar = zt.times[flat];
  double cur = tau;
  long long guard =
      2 * static_cast<long long>(b_plus.intervals.size() + b_minus.intervals.size()) + 4;
  while (cur > 0) {
    if (--guard < 0) throw MathDomainError("orm undefined: recursion failed to terminate");
    bool in_plus = b_plus.contains(cur);
    bool in_minus = b_minus.contains(cur);
    double next;
    if (in_plus && in_minus) {
      throw MathDomainError("orm undefined: time in both record sets");
    } else if (in_plus) {
      t_plus.push_back(cur);
      next = detail::max_in(b_minus, cur);
    } else if (in_minus) {
      t_minus.push_back(cur);
      next = detail::max_in(b_plus, cur);
    } else if (cur == tau && s_bar < tau) {
      // The path is constant on [s_bar, tau]. The horizon carries no record
      // of its own; hand over to the point where the path stopped moving so
      // the visited sets stay stable under time changes.
      next = s_bar;
    } else {
      // A time outside both record sets takes part in the interpolation on
      // the side its arrival trend points to; an exact return to the last
      // record value counts against that record's side.
      next = std::max(detail::max_in(b_plus, cur), detail::max_in(b_minus, cur));
      double trend = eval(zt, cur) - eval(zt, next);
      if (trend > 0) {
        t_plus.push_back(cur);
      } else if (trend < 0) {
        t_minus.push_back(cur);
      } else if (next > 0) {
        if (b_plus.contains(next)) {
          t_minus.push_back(cur);
        } else {
          t_plus.push_back(cur);
        }
      }
    }
    if (next >= cur) throw MathDomainError("orm undefined: recursion stalled");
    taus.push_back(next);
    cur = next;
  }

  std::reverse(taus.begin(), taus.end());
  std::reverse(t_plus.begin(), t_plus.end());
  std::reverse(t_minus.begin(), t_minus.end());

  std::vector<double> values;
  values.reserve(taus.size());
  for (double t : taus) values.push_back(eval(zt, t));
  OrmResult result;
  result.compressed = PiecewiseLinearPath(taus, std::move(values), false);
  result.taus = std::move(taus);
  result.t_plus = std::move(t_plus);
  result.t_minus = std::move(t_minus);
  return result;
}

InterpolationSets interpolation_sets(const OrmResult& result) {
  return InterpolationSets{result.taus, result.t_plus, result.t_minus};
}

}  // namespace roughscl
