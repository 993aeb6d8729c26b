#include "roughscl/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace roughscl {

namespace {

using Ival = std::pair<double, double>;
using Ilist = std::vector<Ival>;

void append_merged(Ilist& out, Ival iv) {
  if (iv.second < iv.first) return;
  if (!out.empty() && iv.first <= out.back().second) {
    out.back().second = std::max(out.back().second, iv.second);
  } else {
    out.push_back(iv);
  }
}

Ilist intersect(const Ilist& a, const Ilist& b) {
  Ilist out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    double lo = std::max(a[i].first, b[j].first);
    double hi = std::min(a[i].second, b[j].second);
    if (lo <= hi) out.emplace_back(lo, hi);
    if (a[i].second < b[j].second) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

// Smallest element of the interval list inside [lo, hi]; NaN when empty.
double min_in_from(const Ilist& set, double lo, double hi) {
  for (const auto& [a, b] : set) {
    if (b < lo) continue;
    if (a > hi) break;
    double c = std::max(a, lo);
    if (c <= hi) return c;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

// inf{ t : path strictly past thr in its record direction }, +inf when the
// path never passes it.
double strict_crossing(const PiecewiseLinearPath& p, bool increasing, double thr) {
  const auto& t = p.times;
  const auto& v = p.values;
  for (std::size_t k = 0; k < v.size(); ++k) {
    bool past = increasing ? v[k] > thr : v[k] < thr;
    if (!past) continue;
    if (k == 0) return t[0];
    double frac = (thr - v[k - 1]) / (v[k] - v[k - 1]);
    return t[k - 1] + frac * (t[k] - t[k - 1]);
  }
  return kInf;
}

// Closed preimage of the value band [vlo, vhi] under a monotone path.
std::optional<Ival> band_preimage(const PiecewiseLinearPath& p, bool increasing, double vlo,
                                  double vhi) {
  const auto& t = p.times;
  const auto& v = p.values;
  double first = v.front(), last = v.back();
  double enter_val = increasing ? vlo : vhi;   // boundary the path reaches first
  double leave_val = increasing ? vhi : vlo;   // boundary it leaves through
  auto reached = [&](double x, double target) {
    return increasing ? x >= target : x <= target;
  };
  if (!reached(last, enter_val)) return std::nullopt;
  bool beyond_first = increasing ? first > vhi : first < vlo;
  if (beyond_first) return std::nullopt;

  double lo;
  if (reached(first, enter_val)) {
    lo = t.front();
  } else {
    std::size_t k = 1;
    while (!reached(v[k], enter_val)) ++k;
    if (v[k] == enter_val) {
      lo = t[k];
    } else {
      double frac = (enter_val - v[k - 1]) / (v[k] - v[k - 1]);
      lo = t[k - 1] + frac * (t[k] - t[k - 1]);
    }
  }

  double hi;
  auto past = [&](double x) { return increasing ? x > vhi : x < vlo; };
  if (!past(last)) {
    hi = t.back();
  } else {
    std::size_t k = 1;
    while (!past(v[k])) ++k;
    if (v[k - 1] == leave_val) {
      hi = t[k - 1];
    } else {
      double frac = (leave_val - v[k - 1]) / (v[k] - v[k - 1]);
      hi = t[k - 1] + frac * (t[k] - t[k - 1]);
    }
  }
  if (lo > hi) return std::nullopt;
  return Ival{lo, hi};
}

struct Family {
  const ExtremumPath* rho1;
  const ExtremumPath* rho2;
  double cross1;
  double cross2;
  bool increasing;
  bool dead;  // either side infinite: the family never activates
};

Family family_of(const CostGrid& g, int sign) {
  if (sign > 0) {
    return Family{&g.rho1_plus, &g.rho2_plus, g.cross1_plus, g.cross2_plus, true,
                  g.rho1_plus.infinite || g.rho2_plus.infinite};
  }
  return Family{&g.rho1_minus, &g.rho2_minus, g.cross1_minus, g.cross2_minus, false,
                g.rho1_minus.infinite || g.rho2_minus.infinite};
}

double pointwise_cost(const CostGrid& g, double s, double t) {
  double c = 0;
  for (int sign : {+1, -1}) {
    auto fam = family_of(g, sign);
    if (fam.dead) continue;
    if (s > fam.cross1 || t > fam.cross2) {
      c = std::max(c, std::abs((*fam.rho1)(s) - (*fam.rho2)(t)));
    }
  }
  return c;
}

// Allowed positions on the free coordinate of one grid line, one family:
// where the pointwise cost term of that family stays within theta.
Ilist family_allowed(const CostGrid& g, int axis, double coord, int sign, double theta) {
  auto fam = family_of(g, sign);
  if (fam.dead) return {{0.0, g.tau}};
  const ExtremumPath& own = axis == 1 ? *fam.rho1 : *fam.rho2;
  const ExtremumPath& oth = axis == 1 ? *fam.rho2 : *fam.rho1;
  double own_cross = axis == 1 ? fam.cross1 : fam.cross2;
  double oth_cross = axis == 1 ? fam.cross2 : fam.cross1;
  double v = own(coord);
  auto pre = band_preimage(oth.path, fam.increasing, v - theta, v + theta);
  if (coord > own_cross) {
    return pre ? Ilist{*pre} : Ilist{};
  }
  double free_end = std::min(oth_cross, g.tau);
  Ilist out;
  append_merged(out, {0.0, free_end});
  if (pre && pre->second >= free_end) {
    append_merged(out, {std::max(pre->first, free_end), pre->second});
  }
  return out;
}

Ilist allowed_set(const CostGrid& g, int axis, double coord, double theta) {
  return intersect(family_allowed(g, axis, coord, +1, theta),
                   family_allowed(g, axis, coord, -1, theta));
}

// Interior line coordinates and per-theta allowed sets for the sweep.
struct Sweep {
  std::vector<double> A;  // interior vertical line abscissas
  std::vector<double> B;  // interior horizontal line heights (the gates)
  std::vector<Ilist> S;
  std::vector<Ilist> T;
  double tau = 0;
  bool corner_ok = false;
};

Sweep make_sweep(const CostGrid& g, double theta) {
  Sweep sw;
  sw.tau = g.tau;
  for (std::size_t j = 1; j + 1 < g.lines1.size(); ++j) sw.A.push_back(g.lines1[j].coord);
  for (std::size_t k = 1; k + 1 < g.lines2.size(); ++k) sw.B.push_back(g.lines2[k].coord);
  for (double a : sw.A) sw.S.push_back(allowed_set(g, 1, a, theta));
  for (double b : sw.B) sw.T.push_back(allowed_set(g, 2, b, theta));
  sw.corner_ok = terminal_corner_cost(g) <= theta;
  return sw;
}

// Highest height reachable from height q across the strip [x0, x1]: the
// gates above q are crossed bottom-up at their leftmost allowed abscissas;
// a gate with no allowed abscissa in the window caps the reach at its own
// height. Optionally records the crossing points.
double reach_cap(const Sweep& sw, double q, double x0, double x1, double limit,
                 std::vector<std::pair<double, double>>* emit = nullptr) {
  double frontier = x0;
  auto it = std::upper_bound(sw.B.begin(), sw.B.end(), q);
  for (std::size_t k = static_cast<std::size_t>(it - sw.B.begin());
       k < sw.B.size() && sw.B[k] <= limit; ++k) {
    double m = min_in_from(sw.T[k], frontier, x1);
    if (std::isnan(m)) return sw.B[k];
    frontier = m;
    if (emit) emit->emplace_back(m, sw.B[k]);
  }
  return limit;
}

// Feasibility of completing the curve from height y just after vertical
// line jstart-1 (abscissa x0) through the remaining lines to (tau, tau).
bool complete_from(const Sweep& sw, std::size_t jstart, double y, double x0) {
  Ilist reach{{y, y}};
  double x_prev = x0;
  for (std::size_t j = jstart; j < sw.A.size(); ++j) {
    Ilist next;
    for (const auto& [p, q] : reach) {
      append_merged(next, {p, reach_cap(sw, q, x_prev, sw.A[j], sw.tau)});
    }
    reach = intersect(next, sw.S[j]);
    if (reach.empty()) return false;
    x_prev = sw.A[j];
  }
  for (const auto& [p, q] : reach) {
    (void)p;
    if (reach_cap(sw, q, x_prev, sw.tau, sw.tau) >= sw.tau) return sw.corner_ok;
  }
  return false;
}

bool feasible(const CostGrid& g, double theta) {
  auto sw = make_sweep(g, theta);
  return complete_from(sw, 0, 0.0, 0.0);
}

// Gate chaining across one strip with fixed endpoint heights; returns false
// when some gate in (y0, y1] has no allowed abscissa, otherwise appends the
// gate crossing points.
bool emit_strip(const Sweep& sw, double x0, double y0, double x1, double y1,
                std::vector<std::pair<double, double>>* emit) {
  double frontier = x0;
  auto it = std::upper_bound(sw.B.begin(), sw.B.end(), y0);
  for (std::size_t k = static_cast<std::size_t>(it - sw.B.begin());
       k < sw.B.size() && sw.B[k] <= y1; ++k) {
    double m = min_in_from(sw.T[k], frontier, x1);
    if (std::isnan(m)) return false;
    frontier = m;
    if (emit) emit->emplace_back(m, sw.B[k]);
  }
  return true;
}

std::vector<double> candidate_thetas(const CostGrid& g) {
  std::vector<double> u{0.0, g.tau};
  for (const auto& ln : g.lines1) u.push_back(ln.coord);
  for (const auto& ln : g.lines2) u.push_back(ln.coord);
  for (int sign : {+1, -1}) {
    auto fam = family_of(g, sign);
    if (fam.dead) continue;
    for (const auto& e : {fam.rho1, fam.rho2}) {
      for (double t : e->path.times) u.push_back(t);
    }
    for (double c : {fam.cross1, fam.cross2}) {
      if (c < g.tau) u.push_back(c);
    }
  }
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());

  std::vector<double> thetas{0.0, g.terminal_cost};
  for (int sign : {+1, -1}) {
    auto fam = family_of(g, sign);
    if (fam.dead) continue;
    std::vector<double> own1, own2;
    for (const auto& ln : g.lines1) own1.push_back((*fam.rho1)(ln.coord));
    for (const auto& ln : g.lines2) own2.push_back((*fam.rho2)(ln.coord));
    for (double v : own1) {
      for (double x : u) thetas.push_back(std::abs(v - (*fam.rho2)(x)));
    }
    for (double v : own2) {
      for (double x : u) thetas.push_back(std::abs(v - (*fam.rho1)(x)));
    }
    for (std::size_t i = 0; i < own1.size(); ++i) {
      for (std::size_t j = i + 1; j < own1.size(); ++j) {
        thetas.push_back(std::abs(own1[i] - own1[j]) / 2);
      }
    }
    for (std::size_t i = 0; i < own2.size(); ++i) {
      for (std::size_t j = i + 1; j < own2.size(); ++j) {
        thetas.push_back(std::abs(own2[i] - own2[j]) / 2);
      }
    }
  }
  std::sort(thetas.begin(), thetas.end());
  thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());
  return thetas;
}

std::vector<std::pair<double, double>> build_witness(const Sweep& sw) {
  std::vector<std::pair<double, double>> pts{{0.0, 0.0}};
  double ycur = 0.0;
  double xprev = 0.0;
  for (std::size_t j = 0; j < sw.A.size(); ++j) {
    // Candidate heights: per allowed interval the lowest point not below the
    // current height, plus every gate height inside the interval (crossing
    // exactly at a gate can be strictly easier than just above it).
    std::vector<double> cands;
    for (const auto& [p, q] : sw.S[j]) {
      if (q < ycur) continue;
      double base = std::max(p, ycur);
      cands.push_back(base);
      auto it = std::upper_bound(sw.B.begin(), sw.B.end(), base);
      for (std::size_t k = static_cast<std::size_t>(it - sw.B.begin());
           k < sw.B.size() && sw.B[k] <= q; ++k) {
        cands.push_back(sw.B[k]);
      }
    }
    bool placed = false;
    for (double c : cands) {
      if (!emit_strip(sw, xprev, ycur, sw.A[j], c, nullptr)) continue;
      if (!complete_from(sw, j + 1, c, sw.A[j])) continue;
      emit_strip(sw, xprev, ycur, sw.A[j], c, &pts);
      pts.emplace_back(sw.A[j], c);
      ycur = c;
      xprev = sw.A[j];
      placed = true;
      break;
    }
    if (!placed) return {};  // theta was reported feasible; defensive only
  }
  if (!emit_strip(sw, xprev, ycur, sw.tau, sw.tau, &pts)) return {};
  pts.emplace_back(sw.tau, sw.tau);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// First point where the polyline leaves [0, sx] x [0, sy]; nullopt when it
// never does.
std::optional<std::pair<double, double>> first_exit(
    const std::vector<std::pair<double, double>>& pts, double sx, double sy) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].first <= sx && pts[i].second <= sy) continue;
    if (i == 0) return pts[0];
    double x0 = pts[i - 1].first, y0 = pts[i - 1].second;
    double x1 = pts[i].first, y1 = pts[i].second;
    double lam = 1.0;
    if (x1 > sx && x1 > x0) lam = std::min(lam, (sx - x0) / (x1 - x0));
    if (y1 > sy && y1 > y0) lam = std::min(lam, (sy - y0) / (y1 - y0));
    return std::pair<double, double>{x0 + lam * (x1 - x0), y0 + lam * (y1 - y0)};
  }
  return std::nullopt;
}

}  // namespace

double line_cost(const CostGrid& grid, int axis, std::size_t line_index, double other) {
  if (axis == 1) return pointwise_cost(grid, grid.lines1.at(line_index).coord, other);
  return pointwise_cost(grid, other, grid.lines2.at(line_index).coord);
}

double terminal_corner_cost(const CostGrid& grid) {
  return std::max(pointwise_cost(grid, grid.tau, grid.tau), grid.terminal_cost);
}

CostGrid build_cost_grid(const PiecewiseLinearPath& z1, const PiecewiseLinearPath& z2,
                         const RegularityBounds& b1, const RegularityBounds& b2) {
  if (z1.horizon() != z2.horizon()) {
    throw std::invalid_argument("paths must share the horizon");
  }
  for (double m : {b1.m_minus, b1.m_plus, b2.m_minus, b2.m_plus}) {
    if (std::isinf(m)) throw std::invalid_argument("grid distance needs finite bounds");
  }
  CostGrid g;
  g.tau = z1.horizon();
  g.rho1_plus = running_max(z1, b1);
  g.rho1_minus = running_min(z1, b1);
  g.rho2_plus = running_max(z2, b2);
  g.rho2_minus = running_min(z2, b2);
  g.thr_plus = std::max(inv_bound(b1.m_minus), inv_bound(b2.m_minus));
  g.thr_minus = std::min(-inv_bound(b1.m_plus), -inv_bound(b2.m_plus));
  auto crossing = [&](const ExtremumPath& rho, bool increasing, double thr) {
    if (rho.infinite || std::isinf(thr)) return kInf;
    return strict_crossing(rho.path, increasing, thr);
  };
  g.cross1_plus = crossing(g.rho1_plus, true, g.thr_plus);
  g.cross2_plus = crossing(g.rho2_plus, true, g.thr_plus);
  g.cross1_minus = crossing(g.rho1_minus, false, g.thr_minus);
  g.cross2_minus = crossing(g.rho2_minus, false, g.thr_minus);
  g.terminal_cost = std::abs(z1.values.back() - z2.values.back());

  auto make_lines = [&](const PiecewiseLinearPath& z, const RegularityBounds& b,
                        const ExtremumPath& rho_plus, const ExtremumPath& rho_minus) {
    auto res = orm(z, z.horizon(), b);
    std::vector<GridLine> lines;
    std::size_t ip = 0, im = 0;
    for (double t : res.taus) {
      GridLine ln{t, 0, 0.0};
      if (ip < res.t_plus.size() && res.t_plus[ip] == t) {
        ln.family = +1;
        ln.value = rho_plus(t);
        ++ip;
      } else if (im < res.t_minus.size() && res.t_minus[im] == t) {
        ln.family = -1;
        ln.value = rho_minus(t);
        ++im;
      }
      lines.push_back(ln);
    }
    return lines;
  };
  g.lines1 = make_lines(z1, b1, g.rho1_plus, g.rho1_minus);
  g.lines2 = make_lines(z2, b2, g.rho2_plus, g.rho2_minus);
  return g;
}

DistanceReport dp_on_grid(const CostGrid& grid) {
  auto thetas = candidate_thetas(grid);
  auto it = std::partition_point(thetas.begin(), thetas.end(),
                                 [&](double th) { return !feasible(grid, th); });
  double value = it == thetas.end() ? thetas.back() : *it;

  DistanceReport report;
  report.value = value;
  report.n1 = grid.lines1.size() - 1;
  report.n2 = grid.lines2.size() - 1;
  auto sw = make_sweep(grid, value);
  report.witness = build_witness(sw);

  auto exit_plus = first_exit(report.witness, grid.cross1_plus, grid.cross2_plus);
  report.kappa_plus_finite = exit_plus.has_value();
  if (exit_plus) report.kappa_plus = *exit_plus;
  auto exit_minus = first_exit(report.witness, grid.cross1_minus, grid.cross2_minus);
  report.kappa_minus_finite = exit_minus.has_value();
  if (exit_minus) report.kappa_minus = *exit_minus;
  return report;
}

DistanceReport dp_distance(const PiecewiseLinearPath& z1, const PiecewiseLinearPath& z2,
                           const RegularityBounds& b1, const RegularityBounds& b2) {
  return dp_on_grid(build_cost_grid(z1, z2, b1, b2));
}

double brute_force_distance(const CostGrid& grid, std::size_t max_cells) {
  if (grid.cells() > max_cells) {
    throw std::invalid_argument("grid too large for exhaustive path enumeration");
  }
  std::size_t n_right = grid.lines1.size() - 2;
  std::size_t n_up = grid.lines2.size() - 2;

  std::vector<double> col_edges{0.0};
  for (std::size_t j = 1; j + 1 < grid.lines1.size(); ++j) {
    col_edges.push_back(grid.lines1[j].coord);
  }
  col_edges.push_back(grid.tau);
  std::vector<double> row_edges{0.0};
  for (std::size_t k = 1; k + 1 < grid.lines2.size(); ++k) {
    row_edges.push_back(grid.lines2[k].coord);
  }
  row_edges.push_back(grid.tau);

  std::vector<char> moves(n_right, 0);
  moves.resize(n_right + n_up, 1);
  std::sort(moves.begin(), moves.end());

  auto thetas = candidate_thetas(grid);
  auto path_ok = [&](const std::vector<char>& seq, const Sweep& sw) {
    std::size_t col = 0, row = 0;
    double x = 0.0, y = 0.0;
    for (char mv : seq) {
      if (mv == 0) {
        double lo = std::max(row_edges[row], y);
        double m = min_in_from(sw.S[col], lo, row_edges[row + 1]);
        if (std::isnan(m)) return false;
        y = m;
        x = col_edges[col + 1];
        ++col;
      } else {
        double lo = std::max(col_edges[col], x);
        double m = min_in_from(sw.T[row], lo, col_edges[col + 1]);
        if (std::isnan(m)) return false;
        x = m;
        y = row_edges[row + 1];
        ++row;
      }
    }
    return sw.corner_ok;
  };
  auto any_path_ok = [&](double theta) {
    auto sw = make_sweep(grid, theta);
    auto seq = moves;
    do {
      if (path_ok(seq, sw)) return true;
    } while (std::next_permutation(seq.begin(), seq.end()));
    return false;
  };
  auto it = std::partition_point(thetas.begin(), thetas.end(),
                                 [&](double th) { return !any_path_ok(th); });
  return it == thetas.end() ? thetas.back() : *it;
}

double phi(const PiecewiseLinearPath& z1, const PiecewiseLinearPath& z2,
           const PiecewiseLinearPath& alpha1, const PiecewiseLinearPath& alpha2,
           const RegularityBounds& b1, const RegularityBounds& b2) {
  if (alpha1.values.front() != 0 || alpha1.values.back() != z1.horizon() ||
      alpha2.values.front() != 0 || alpha2.values.back() != z2.horizon()) {
    throw std::invalid_argument("time changes must map onto the full horizon");
  }
  return dp_distance(compose(z1, alpha1), compose(z2, alpha2), b1, b2).value;
}

double stability_bound_improved(const DataNorms& norms, const PiecewiseLinearPath& z1,
                                const PiecewiseLinearPath& z2, const RegularityBounds& b1,
                                const RegularityBounds& b2, double dist, double C) {
  for (double m : {b1.m_minus, b1.m_plus, b2.m_minus, b2.m_plus}) {
    if (std::isinf(m)) throw std::invalid_argument("stability bound needs finite bounds");
  }
  if (!(dist >= 0)) throw std::invalid_argument("distance must be nonnegative");
  if (z1.horizon() != z2.horizon()) {
    throw std::invalid_argument("paths must share the horizon");
  }
  double endpoint = std::abs(z1.values.back() - z2.values.back());
  return norms.l1_diff +
         C * (norms.fprime_sup * (norms.bv_1 + norms.bv_2) * endpoint +
              std::sqrt(dist * norms.fsecond_sup * (norms.l2sq_1 + norms.l2sq_2)));
}

}  // namespace roughscl
