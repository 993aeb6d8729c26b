#pragma once

// Random test-data generators. Paths use dyadic breakpoint values and
// power-of-two segment lengths, and reparameterizations use power-of-two ramp
// slopes, so every interpolation, crossing, and inverse computed from them is
// exact in double arithmetic. That lets the tests assert exact equalities
// where the underlying identities are exact.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "roughscl/path.hpp"

namespace testgen {

inline double dyadic(std::mt19937_64& rng, double lo, double hi, double unit) {
  auto nlo = static_cast<long long>(std::ceil(lo / unit));
  auto nhi = static_cast<long long>(std::floor(hi / unit));
  std::uniform_int_distribution<long long> dist(nlo, nhi);
  return static_cast<double>(dist(rng)) * unit;
}

// Piecewise-linear path on [0, horizon] with value 0 at time 0, breakpoint
// values on the grid {k/32} and segment lengths of the form 2^-j * horizon.
inline roughscl::PiecewiseLinearPath random_path(std::mt19937_64& rng, int max_segments = 12,
                                                 double horizon = 4.0, double value_range = 2.0) {
  std::uniform_int_distribution<int> seg_count(1, max_segments);
  std::uniform_int_distribution<int> gap_pow(0, 5);
  const int target = seg_count(rng);
  std::vector<double> times{0.0};
  std::vector<double> values{0.0};
  while (times.back() < horizon) {
    double gap = horizon * std::ldexp(1.0, -gap_pow(rng) - 2);
    double rem = horizon - times.back();
    if (static_cast<int>(times.size()) > target || gap > rem) {
      // Spend the remainder as power-of-two pieces so every segment length
      // stays a power of two times the horizon.
      while (rem > 0) {
        double piece = horizon;
        while (piece > rem) piece /= 2;
        times.push_back(times.back() + piece);
        values.push_back(dyadic(rng, -value_range, value_range, 1.0 / 32));
        rem = horizon - times.back();
      }
      break;
    }
    times.push_back(times.back() + gap);
    values.push_back(dyadic(rng, -value_range, value_range, 1.0 / 32));
  }
  values.back() = dyadic(rng, -value_range, value_range, 1.0 / 32);
  return roughscl::PiecewiseLinearPath(std::move(times), std::move(values));
}

// Nondecreasing surjection of [0, tau] onto itself made of flats and ramps
// whose slopes are powers of two. tau must be exactly representable; the
// value levels are multiples of tau/16 and all breakpoints stay dyadic.
inline roughscl::PiecewiseLinearPath random_staircase(std::mt19937_64& rng, double tau) {
  std::uniform_int_distribution<int> n_blocks_dist(1, 4);
  std::uniform_int_distribution<int> slope_pow(0, 2);
  const int n_blocks = n_blocks_dist(rng);
  // Partition the value range [0, tau] into power-of-two multiples of tau/16
  // by repeatedly halving a randomly chosen block.
  std::vector<int> blocks{16};
  for (int i = 1; i < n_blocks; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, blocks.size() - 1);
    std::size_t b = pick(rng);
    if (blocks[b] > 1) {
      blocks[b] /= 2;
      blocks.push_back(blocks[b]);
    }
  }

  std::vector<double> ramp_len;
  std::vector<double> rise;
  double total_ramp = 0;
  for (int blk : blocks) {
    double dv = tau * static_cast<double>(blk) / 16.0;
    double slope = std::ldexp(1.0, slope_pow(rng));  // 1, 2, or 4
    rise.push_back(dv);
    ramp_len.push_back(dv / slope);
    total_ramp += dv / slope;
  }
  // Slopes are at least 1, so the ramps fit inside [0, tau]; distribute the
  // remaining time as flats before each ramp and after the last.
  double slack = tau - total_ramp;
  std::vector<double> flats(ramp_len.size() + 1, 0.0);
  std::uniform_int_distribution<std::size_t> slot(0, flats.size() - 1);
  while (slack > 0) {
    double piece = tau;
    while (piece > slack) piece /= 2;
    flats[slot(rng)] += piece;
    slack -= piece;
  }

  std::vector<double> times{0.0};
  std::vector<double> values{0.0};
  auto push = [&](double t, double v) {
    if (t > times.back()) {
      times.push_back(t);
      values.push_back(v);
    }
  };
  double t = 0;
  double v = 0;
  for (std::size_t i = 0; i < ramp_len.size(); ++i) {
    if (flats[i] > 0) {
      t += flats[i];
      push(t, v);
    }
    t += ramp_len[i];
    v += rise[i];
    push(t, v);
  }
  if (flats.back() > 0) {
    t += flats.back();
    push(t, v);
  }
  return roughscl::PiecewiseLinearPath(std::move(times), std::move(values));
}

}  // namespace testgen
