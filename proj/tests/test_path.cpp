#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dense_oracle.hpp"
#include "roughscl/path.hpp"
#include "test_support.hpp"

using roughscl::ExtremumPath;
using roughscl::IntervalUnion;
using roughscl::kInf;
using roughscl::PiecewiseLinearPath;
using roughscl::RegularityBounds;

namespace {

PiecewiseLinearPath pl(std::vector<double> t, std::vector<double> v, bool anchored = true) {
  return PiecewiseLinearPath(std::move(t), std::move(v), anchored);
}

PiecewiseLinearPath negate(const PiecewiseLinearPath& z) {
  std::vector<double> v = z.values;
  for (double& x : v) x = -x;
  return PiecewiseLinearPath(z.times, std::move(v));
}

double max_abs_slope(const PiecewiseLinearPath& z) {
  double m = 0;
  for (std::size_t i = 0; i + 1 < z.times.size(); ++i) {
    m = std::max(m, std::abs((z.values[i + 1] - z.values[i]) / (z.times[i + 1] - z.times[i])));
  }
  return m;
}

}  // namespace

TEST_CASE("path validation") {
  CHECK_THROWS_AS(pl({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(pl({0, 1}, {0}), std::invalid_argument);
  CHECK_THROWS_AS(pl({0.5, 1}, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(pl({0, 1, 1}, {0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(pl({0, 1}, {0.5, 1}), std::invalid_argument);
  CHECK_NOTHROW(pl({0, 1}, {0.5, 1}, false));
  CHECK_NOTHROW(pl({0}, {0}));
}

TEST_CASE("eval interpolates and is exact at breakpoints") {
  auto z = pl({0, 1}, {0, 1});
  CHECK(roughscl::eval(z, 0.5) == 0.5);
  auto w = pl({0, 1, 2}, {0, 1, -1});
  CHECK(roughscl::eval(w, 1.0) == 1.0);
  CHECK(roughscl::eval(w, 1.5) == 0.0);
  CHECK(roughscl::eval(w, 0.0) == 0.0);
  CHECK(roughscl::eval(w, 2.0) == -1.0);
  CHECK_THROWS_AS(roughscl::eval(w, -0.1), std::domain_error);
  CHECK_THROWS_AS(roughscl::eval(w, 2.1), std::domain_error);
}

TEST_CASE("inv_bound extended arithmetic") {
  CHECK(roughscl::inv_bound(0.0) == kInf);
  CHECK(roughscl::inv_bound(kInf) == 0.0);
  CHECK(roughscl::inv_bound(2.0) == 0.5);
  CHECK_THROWS_AS(roughscl::inv_bound(-1.0), std::invalid_argument);
}

TEST_CASE("running_max frozen examples") {
  auto z = pl({0, 1, 2}, {0, 1, 0});

  auto unbounded = roughscl::running_max(z, RegularityBounds{kInf, kInf});
  REQUIRE(!unbounded.infinite);
  CHECK(unbounded.path.times == std::vector<double>{0, 1, 2});
  CHECK(unbounded.path.values == std::vector<double>{0, 1, 1});

  auto floored = roughscl::running_max(z, RegularityBounds{2.0, kInf});
  REQUIRE(!floored.infinite);
  CHECK(floored.path.times == std::vector<double>{0, 0.5, 1, 2});
  CHECK(floored.path.values == std::vector<double>{0.5, 0.5, 1, 1});

  auto infinite = roughscl::running_max(z, RegularityBounds{0.0, kInf});
  CHECK(infinite.infinite);
  CHECK(infinite.sign == +1);
  CHECK(infinite(1.3) == kInf);
}

TEST_CASE("running_min frozen examples and symmetry") {
  auto z = pl({0, 1, 2}, {0, -1, 0});

  auto unbounded = roughscl::running_min(z, RegularityBounds{kInf, kInf});
  REQUIRE(!unbounded.infinite);
  CHECK(unbounded.path.times == std::vector<double>{0, 1, 2});
  CHECK(unbounded.path.values == std::vector<double>{0, -1, -1});

  auto capped = roughscl::running_min(z, RegularityBounds{kInf, 2.0});
  REQUIRE(!capped.infinite);
  CHECK(capped.path.times == std::vector<double>{0, 0.5, 1, 2});
  CHECK(capped.path.values == std::vector<double>{-0.5, -0.5, -1, -1});

  auto infinite = roughscl::running_min(z, RegularityBounds{kInf, 0.0});
  CHECK(infinite.infinite);
  CHECK(infinite(0.7) == -kInf);

  std::mt19937_64 rng(7);
  for (int k = 0; k < 20; ++k) {
    auto w = testgen::random_path(rng);
    double m = (k % 2 == 0) ? 2.0 : kInf;
    auto lo = roughscl::running_min(w, RegularityBounds{kInf, m});
    auto hi = roughscl::running_max(negate(w), RegularityBounds{m, kInf});
    REQUIRE(lo.path.times == hi.path.times);
    for (std::size_t i = 0; i < lo.path.values.size(); ++i) {
      CHECK(lo.path.values[i] == -hi.path.values[i]);
    }
  }
}

TEST_CASE("increase_set frozen examples") {
  auto z = pl({0, 1, 2, 3}, {0, 1, 0, 2});

  auto rho = roughscl::running_max(z, RegularityBounds{kInf, kInf});
  auto b_plus = roughscl::increase_set(rho, +1);
  CHECK(b_plus.contains_zero);
  REQUIRE(b_plus.intervals.size() == 2);
  CHECK(b_plus.intervals[0] == std::pair<double, double>{0.0, 1.0});
  CHECK(b_plus.intervals[1] == std::pair<double, double>{2.5, 3.0});
  CHECK(b_plus.contains(0.0));
  CHECK(b_plus.contains(1.0));
  CHECK(!b_plus.contains(1.5));
  CHECK(!b_plus.contains(2.5));
  CHECK(b_plus.contains(2.75));

  auto decreasing = pl({0, 1}, {0, -1});
  auto rho_dec = roughscl::running_max(decreasing, RegularityBounds{kInf, kInf});
  auto b_dec = roughscl::increase_set(rho_dec, +1);
  CHECK(b_dec.contains_zero);
  CHECK(b_dec.intervals.empty());

  auto rho_min = roughscl::running_min(z, RegularityBounds{kInf, kInf});
  auto b_minus = roughscl::increase_set(rho_min, -1);
  CHECK(b_minus.contains_zero);
  CHECK(b_minus.intervals.empty());

  ExtremumPath bogus;
  bogus.sign = +1;
  bogus.path = pl({0, 1, 2}, {0, 1, 0});
  CHECK_THROWS_AS(roughscl::increase_set(bogus, +1), std::invalid_argument);
}

TEST_CASE("record sets of the two signs only share the origin") {
  std::mt19937_64 rng(11);
  const std::vector<double> ms{0.5, 1.0, 2.0, 4.0};
  for (int k = 0; k < 100; ++k) {
    auto z = testgen::random_path(rng);
    RegularityBounds bounds{ms[k % 4], ms[(k / 4) % 4]};
    auto bp = roughscl::increase_set(roughscl::running_max(z, bounds), +1);
    auto bm = roughscl::increase_set(roughscl::running_min(z, bounds), -1);
    for (const auto& [s1, t1] : bp.intervals) {
      for (const auto& [s2, t2] : bm.intervals) {
        CHECK(std::max(s1, s2) >= std::min(t1, t2));
      }
    }
  }
}

TEST_CASE("running extrema are constant on the gaps between record intervals") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 50; ++k) {
    auto z = testgen::random_path(rng);
    auto rho = roughscl::running_max(z, RegularityBounds{2.0, kInf});
    auto b = roughscl::increase_set(rho, +1);
    double prev_end = 0.0;
    for (const auto& [s, t] : b.intervals) {
      CHECK(rho(prev_end) == rho(s));
      prev_end = t;
    }
    CHECK(rho(prev_end) == rho(z.horizon()));
  }
}

TEST_CASE("running extrema match the dense-sampling reference") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 25; ++k) {
    auto z = testgen::random_path(rng);
    RegularityBounds bounds{k % 3 == 0 ? kInf : 1.0, k % 3 == 1 ? kInf : 2.0};
    auto dense = oracle::dense_extrema(z, z.horizon(), bounds, 1e-3);
    auto hi = roughscl::running_max(z, bounds);
    auto lo = roughscl::running_min(z, bounds);
    double lip = max_abs_slope(z);
    for (std::size_t i = 0; i < dense.t.size(); i += 7) {
      double dhi = hi(dense.t[i]) - dense.rho_plus[i];
      double dlo = dense.rho_minus[i] - lo(dense.t[i]);
      CHECK(dhi >= -1e-9);
      CHECK(dhi <= lip * dense.step + 1e-9);
      CHECK(dlo >= -1e-9);
      CHECK(dlo <= lip * dense.step + 1e-9);
    }
  }
}

TEST_CASE("compose frozen examples") {
  auto z = pl({0, 2}, {0, 2});
  auto alpha = pl({0, 1, 2}, {0, 2, 2});
  auto composed = roughscl::compose(z, alpha);
  CHECK(composed.times == std::vector<double>{0, 1, 2});
  CHECK(composed.values == std::vector<double>{0, 2, 2});

  auto w = pl({0, 1, 2, 4}, {0, 1, -0.5, 2});
  auto identity = pl({0, 4}, {0, 4});
  auto same = roughscl::compose(w, identity);
  CHECK(same.times == w.times);
  CHECK(same.values == w.values);
}

TEST_CASE("composition commutes with the running extrema") {
  std::mt19937_64 rng(19);
  for (int k = 0; k < 20; ++k) {
    auto z = testgen::random_path(rng);
    auto alpha = testgen::random_staircase(rng, z.horizon());
    RegularityBounds bounds{2.0, 1.0};
    auto composed = roughscl::compose(z, alpha);
    auto rho_c = roughscl::running_max(composed, bounds);
    auto rho_z = roughscl::running_max(z, bounds);
    auto lo_c = roughscl::running_min(composed, bounds);
    auto lo_z = roughscl::running_min(z, bounds);
    for (int j = 0; j <= 32; ++j) {
      double s = z.horizon() * static_cast<double>(j) / 32.0;
      double t = roughscl::eval(alpha, s);
      CHECK(rho_c(s) == doctest::Approx(rho_z(t)).epsilon(1e-12));
      CHECK(lo_c(s) == doctest::Approx(lo_z(t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("compose is associative on exact staircases") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 20; ++k) {
    auto z = testgen::random_path(rng);
    auto alpha = testgen::random_staircase(rng, z.horizon());
    auto beta = testgen::random_staircase(rng, z.horizon());
    auto left = roughscl::compose(roughscl::compose(z, alpha), beta);
    auto right = roughscl::compose(z, roughscl::compose(alpha, beta));
    REQUIRE(left.times.size() == right.times.size());
    for (std::size_t i = 0; i < left.times.size(); ++i) {
      CHECK(left.times[i] == right.times[i]);
      CHECK(left.values[i] == right.values[i]);
    }
  }
}

TEST_CASE("generalized_inverse frozen examples") {
  auto identity = pl({0, 1}, {0, 1});
  CHECK(roughscl::generalized_inverse(identity, 0.3) == 0.3);

  auto plateau = pl({0, 1, 2, 3}, {0, 1, 1, 3});
  CHECK(roughscl::generalized_inverse(plateau, 1.0) == 1.0);
  CHECK(roughscl::generalized_inverse(plateau, 0.0) == 0.0);
  CHECK(roughscl::generalized_inverse(plateau, 3.0) == 3.0);

  CHECK(std::abs(roughscl::generalized_inverse(plateau, 1.0 - 1e-9) - 1.0) <= 2e-9);
  CHECK(roughscl::generalized_inverse(plateau, 1.0 + 1e-9) >= 2.0);

  auto shallow = pl({0, 2}, {0, 1});
  CHECK_THROWS_AS(roughscl::generalized_inverse(shallow, 1.5), std::domain_error);
  CHECK_THROWS_AS(roughscl::generalized_inverse(shallow, -0.5), std::domain_error);
}

TEST_CASE("alpha of its generalized inverse is the identity on staircases") {
  std::mt19937_64 rng(29);
  for (int k = 0; k < 20; ++k) {
    double tau = 4.0;
    auto alpha = testgen::random_staircase(rng, tau);
    for (int j = 0; j <= 32; ++j) {
      double t = tau * static_cast<double>(j) / 32.0;
      double s = roughscl::generalized_inverse(alpha, t);
      CHECK(roughscl::eval(alpha, s) == t);
    }
  }
}

TEST_CASE("uniform_distance frozen examples") {
  auto a = pl({0, 1}, {0, 1});
  CHECK(roughscl::uniform_distance(a, a) == 0.0);
  auto b = pl({0, 1}, {0, -1});
  CHECK(roughscl::uniform_distance(a, b) == 2.0);
  auto flat = pl({0, 2}, {0, 0});
  auto tent = pl({0, 1, 2}, {0, 1, 0});
  CHECK(roughscl::uniform_distance(flat, tent) == 1.0);
  CHECK_THROWS_AS(roughscl::uniform_distance(a, flat), std::invalid_argument);
}

TEST_CASE("total_variation frozen examples") {
  CHECK(roughscl::total_variation(pl({0, 1}, {0, 1})) == 1.0);
  CHECK(roughscl::total_variation(pl({0, 1, 2, 3}, {0, 1, -1, 2})) == 6.0);
  CHECK(roughscl::total_variation(pl({0}, {0})) == 0.0);
}

TEST_CASE("truncate_path restricts to the prefix") {
  auto z = pl({0, 2}, {0, 2});
  auto head = roughscl::truncate_path(z, 1.0);
  CHECK(head.times == std::vector<double>{0, 1});
  CHECK(head.values == std::vector<double>{0, 1});

  auto w = pl({0, 1, 2}, {0, 1, 0});
  auto exact = roughscl::truncate_path(w, 1.0);
  CHECK(exact.times == std::vector<double>{0, 1});
  CHECK(exact.values == std::vector<double>{0, 1});
  CHECK_THROWS_AS(roughscl::truncate_path(w, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(roughscl::truncate_path(w, 0.0), std::invalid_argument);
}

TEST_CASE("sample_brownian shape and determinism") {
  auto one = roughscl::sample_brownian(1.0, 1, 42, 1.0);
  CHECK(one.n_points() == 2);
  CHECK(one.times == std::vector<double>{0, 1});
  CHECK(one.values[0] == 0.0);

  auto a = roughscl::sample_brownian(2.0, 50, 7, 0.5);
  auto b = roughscl::sample_brownian(2.0, 50, 7, 0.5);
  CHECK(a.times == b.times);
  CHECK(a.values == b.values);
  CHECK(a.times.back() == 2.0);
  auto c = roughscl::sample_brownian(2.0, 50, 8, 0.5);
  CHECK(a.values != c.values);
}

TEST_CASE("sample_brownian terminal variance matches the scale") {
  const int n = 10000;
  double sum = 0, sumsq = 0;
  for (int i = 0; i < n; ++i) {
    auto z = roughscl::sample_brownian(1.0, 4, 1000 + static_cast<std::uint64_t>(i), 1.0);
    double v = z.values.back();
    sum += v;
    sumsq += v * v;
  }
  double mean = sum / n;
  double var = sumsq / n - mean * mean;
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}
