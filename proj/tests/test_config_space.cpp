#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "s1map/config.hpp"
#include "s1map/errors.hpp"

namespace {

using namespace s1map;

double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

Configuration config_of(std::initializer_list<double> turns) {
  std::vector<Angle> pts;
  for (double t : turns) pts.push_back(Angle(t));
  return Configuration(std::move(pts));
}

Configuration random_base_config(int n, std::mt19937_64& eng) {
  std::vector<double> pts(n);
  for (;;) {
    for (double& p : pts) p = uniform01(eng);
    std::sort(pts.begin(), pts.end());
    bool ok = true;
    for (int i = 0; i + 1 < n; ++i) ok = ok && pts[i + 1] - pts[i] > 1e-4;
    ok = ok && pts[0] + 1.0 - pts[n - 1] > 1e-4;
    if (ok) break;
  }
  int start = static_cast<int>(eng() % n);
  std::vector<Angle> tuple;
  for (int i = 0; i < n; ++i) tuple.push_back(Angle(pts[(start + i) % n]));
  return Configuration(std::move(tuple));
}

// Brute-force base-component test: the tuple must be a cyclic rotation of
// its ascending sort.
bool base_component_oracle(const Configuration& c) {
  const int n = static_cast<int>(c.size());
  std::vector<double> sorted;
  for (int i = 0; i < n; ++i) sorted.push_back(c[i].turns());
  std::sort(sorted.begin(), sorted.end());
  for (int start = 0; start < n; ++start) {
    bool match = true;
    for (int i = 0; i < n && match; ++i) {
      match = c[(start + i) % n].turns() == sorted[i];
    }
    if (match) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("configuration and simplex validation") {
  CHECK_THROWS_AS(config_of({0.1, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(Configuration(std::vector<Angle>{}), std::invalid_argument);
  CHECK_THROWS_AS(SimplexPoint({0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(SimplexPoint({0.0, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(SimplexPoint({0.4, 1.0}), std::invalid_argument);
  CHECK(SimplexPoint().dimension() == 0);
}

TEST_CASE("base component membership") {
  CHECK(in_base_component(config_of({0.0, 1.0 / 3, 2.0 / 3})));
  CHECK_FALSE(in_base_component(config_of({0.0, 2.0 / 3, 1.0 / 3})));
  CHECK(in_base_component(config_of({0.9, 0.05, 0.4})));

  std::mt19937_64 eng(21);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 2 + static_cast<int>(eng() % 5);
    Configuration c = random_base_config(n, eng);
    CHECK(in_base_component(c));
    CHECK(base_component_oracle(c));
    // A transposition of two coordinates leaves the component for n >= 3.
    if (n >= 3) {
      std::vector<Angle> swapped(c.points());
      std::swap(swapped[0], swapped[1]);
      Configuration s(swapped);
      CHECK(in_base_component(s) == base_component_oracle(s));
    }
  }
}

TEST_CASE("chart and section invert each other") {
  Chart chart = chart_coordinates(config_of({0.0, 0.5}));
  CHECK(chart.base == Angle(0.0));
  REQUIRE(chart.simplex.dimension() == 1);
  CHECK(chart.simplex.coords()[0] == doctest::Approx(0.5).epsilon(1e-15));

  chart = chart_coordinates(config_of({0.25, 0.5}));
  CHECK(chart.base == Angle(0.25));
  CHECK(chart.simplex.coords()[0] == doctest::Approx(0.25).epsilon(1e-15));

  chart = chart_coordinates(config_of({0.0, 1.0 / 3, 2.0 / 3}));
  CHECK(chart.simplex.coords()[0] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(chart.simplex.coords()[1] == doctest::Approx(2.0 / 3).epsilon(1e-15));

  CHECK_THROWS_AS(chart_coordinates(config_of({0.0, 2.0 / 3, 1.0 / 3})),
                  std::invalid_argument);

  Configuration c = from_chart(Angle(0.0), SimplexPoint({0.5}));
  CHECK(c == config_of({0.0, 0.5}));
  c = from_chart(Angle(0.25), SimplexPoint({0.25}));
  CHECK(circle_dist(c[1], Angle(0.5)) <= 1e-15);
  c = from_chart(Angle(0.1), SimplexPoint({0.2, 0.5}));
  CHECK(circle_dist(c[1], Angle(0.3)) <= 1e-15);
  CHECK(circle_dist(c[2], Angle(0.6)) <= 1e-15);

  std::mt19937_64 eng(22);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(eng() % 6);
    Configuration rc = random_base_config(n, eng);
    Configuration back = from_chart(chart_coordinates(rc));
    for (int i = 0; i < n; ++i) CHECK(circle_dist(back[i], rc[i]) <= 1e-12);
  }
}

TEST_CASE("cyclic shift") {
  Configuration c = config_of({0.0, 1.0 / 3, 2.0 / 3});
  CHECK(cyclic_shift(c, 1) == config_of({1.0 / 3, 2.0 / 3, 0.0}));
  CHECK(cyclic_shift(c, 3) == c);
  CHECK(cyclic_shift(c, -1) == cyclic_shift(c, 2));
  CHECK(cyclic_shift(config_of({0.0, 0.5}), 1) == config_of({0.5, 0.0}));

  std::mt19937_64 eng(23);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(eng() % 5);
    Configuration rc = random_base_config(n, eng);
    // The shift preserves the base component...
    for (int j = 0; j < n; ++j) {
      CHECK_NOTHROW(chart_coordinates(cyclic_shift(rc, j)));
    }
    // ...and acts freely on ordered tuples.
    for (int j = 1; j < n; ++j) {
      CHECK_FALSE(cyclic_shift(rc, j) == rc);
    }
  }
}

TEST_CASE("shift orientation sign matches the parity rule") {
  CHECK(shift_jacobian_sign(3, 1) == 1);
  CHECK(shift_jacobian_sign(2, 1) == -1);
  CHECK(shift_jacobian_sign(4, 2) == 1);
  CHECK_THROWS_AS(shift_jacobian_sign(4, 3), std::invalid_argument);

  for (int n = 1; n <= 6; ++n) {
    for (int d = 1; d <= n; ++d) {
      if (n % d != 0) continue;
      int expected = (n % 2 == 0 && d % 2 == 1) ? -1 : 1;
      CHECK(shift_jacobian_sign(n, d) == expected);
      CHECK((twist_type(n, n / d) == TwistType::Twisted) == (expected == -1));
    }
  }
}

TEST_CASE("twist classification") {
  CHECK(twist_type(2, 2) == TwistType::Twisted);
  CHECK(twist_type(4, 2) == TwistType::Trivial);
  CHECK(twist_type(1, 1) == TwistType::Trivial);
  CHECK(twist_type(6, 6) == TwistType::Twisted);
  CHECK_THROWS_AS(twist_type(4, 3), std::invalid_argument);
}

TEST_CASE("canonical representative of a shift orbit") {
  CHECK(canonical_representative(config_of({1.0 / 3, 2.0 / 3, 0.0}), 3) ==
        config_of({0.0, 1.0 / 3, 2.0 / 3}));
  Configuration two = config_of({0.0, 0.5});
  CHECK(canonical_representative(two, 1) == two);

  // Orbit of size two, enumerated by hand.
  Configuration four = config_of({0.1, 0.4, 0.6, 0.9});
  Configuration other = cyclic_shift(four, 2);
  Configuration expected =
      std::lexicographical_compare(four.points().begin(), four.points().end(),
                                   other.points().begin(),
                                   other.points().end())
          ? four
          : other;
  CHECK(canonical_representative(four, 2) == expected);
  CHECK(canonical_representative(four, 2) == four);

  std::mt19937_64 eng(24);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 2 + static_cast<int>(eng() % 5);
    Configuration c = random_base_config(n, eng);
    for (int k = 1; k <= n; ++k) {
      if (n % k != 0) continue;
      Configuration rep = canonical_representative(c, k);
      // Constant on the orbit and idempotent.
      for (int j = 0; j < k; ++j) {
        CHECK(canonical_representative(cyclic_shift(c, j * (n / k)), k) == rep);
      }
      CHECK(canonical_representative(rep, k) == rep);
    }
  }
}
