#include <cmath>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "s1map/errors.hpp"
#include "s1map/examples.hpp"
#include "s1map/orbit.hpp"

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

Configuration random_wide_config(int n, std::mt19937_64& eng) {
  double phase = uniform01(eng);
  std::vector<Angle> pts;
  for (int a = 0; a < n; ++a) {
    double jitter = (uniform01(eng) - 0.5) * 0.4 / n;
    pts.push_back(Angle(phase + static_cast<double>(a) / n + jitter));
  }
  return Configuration(std::move(pts));
}

CircleDiffeo random_diffeo(std::mt19937_64& eng) {
  int m = 2 + static_cast<int>(eng() % 3);
  return CircleDiffeo::compose(
      CircleDiffeo::rotation(Angle(uniform01(eng))),
      CircleDiffeo::monotone_between(random_wide_config(m, eng),
                                     random_wide_config(m, eng)));
}

struct Normalized {
  CircleMap map;
  MapAnalysis analysis;
};

const Normalized& two_wave_normalized() {
  static const Normalized fixture = [] {
    CircleMap f = examples::two_wave();
    NormalizedMap nm = normalize_exceptional(f, analyze(f));
    return Normalized{nm.map, nm.analysis};
  }();
  return fixture;
}

}  // namespace

TEST_CASE("exceptional configurations of orbit points") {
  const auto& [f, a] = two_wave_normalized();
  (void)a;

  // The base map itself reduces to the uniform configuration.
  OrbitPoint base = make_orbit_point(f, CircleDiffeo::identity(),
                                     CircleDiffeo::identity());
  Configuration cfg = exceptional_config(base);
  CHECK(circle_dist(cfg[0], Angle(0.0)) <= 1e-9);
  CHECK(circle_dist(cfg[1], Angle(0.5)) <= 1e-9);

  // Rotating the target rotates the values.
  OrbitPoint rotated = make_orbit_point(f, CircleDiffeo::identity(),
                                        CircleDiffeo::rotation(Angle(0.2)));
  Configuration cfg_rot = exceptional_config(rotated);
  Configuration expected = canonical_representative(
      config_of({0.2, 0.7}), 2);
  for (int i = 0; i < 2; ++i) {
    CHECK(circle_dist(cfg_rot[i], expected[i]) <= 1e-9);
  }

  // A general pair pushes the values through the target side.
  std::mt19937_64 eng(61);
  for (int trial = 0; trial < 5; ++trial) {
    CircleDiffeo h = random_diffeo(eng);
    CircleDiffeo r = random_diffeo(eng);
    OrbitPoint moved = make_orbit_point(f, h, r);
    Configuration got = exceptional_config(moved);
    Configuration pushed = canonical_representative(
        Configuration({r(Angle(0.0)), r(Angle(0.5))}), 2);
    for (int i = 0; i < 2; ++i) {
      CHECK(circle_dist(got[i], pushed[i]) <= 1e-9);
    }
  }

  CHECK_THROWS_AS(
      exceptional_config(make_orbit_point(examples::degree_two_covering(),
                                          CircleDiffeo::identity(),
                                          CircleDiffeo::identity())),
      std::invalid_argument);
}

TEST_CASE("marked orbit points") {
  const auto& [f, a] = two_wave_normalized();

  auto [base_point, base_marking] =
      marked_orbit(CircleDiffeo::identity(), CircleDiffeo::identity(), f, 2);
  CHECK(base_marking == config_of({0.0, 0.5}));
  for (int i = 0; i < 128; ++i) {
    Angle x(static_cast<double>(i) / 128);
    CHECK(circle_dist(base_point.map(x), f(x)) <= 1e-12);
  }

  // A stabilizer pair leaves the orbit point right-equivalent to f.
  CircleDiffeo w =
      CircleDiffeo::monotone_lift(SimplexPoint({0.21, 0.5, 0.79}), 4);
  REQUIRE(fixes_exceptional(w, 2));
  CircleDiffeo h = lift_target_diffeo(f, a, w);
  auto [stab_point, stab_marking] = marked_orbit(h, w, f, 2);
  CHECK(stab_marking == config_of({0.0, 0.5}));
  std::optional<CircleDiffeo> witness =
      right_equivalence(f, a, stab_point.map, analyze(stab_point.map));
  CHECK(witness.has_value());
}

TEST_CASE("attaching and detaching markings") {
  const auto& [f, a] = two_wave_normalized();
  (void)a;
  OrbitPoint g = make_orbit_point(f, CircleDiffeo::identity(),
                                  CircleDiffeo::identity());

  // The uniform marking changes nothing.
  auto [same, marking] = attach_marking(g, config_of({0.0, 0.5}));
  CHECK(marking == config_of({0.0, 0.5}));
  for (int i = 0; i < 128; ++i) {
    Angle x(static_cast<double>(i) / 128);
    CHECK(circle_dist(same.map(x), g.map(x)) <= 1e-14);
  }

  std::mt19937_64 eng(62);
  for (int trial = 0; trial < 5; ++trial) {
    Configuration x = random_wide_config(2, eng);
    auto [attached, kept] = attach_marking(g, x);
    CHECK(kept == x);
    Configuration cfg = exceptional_config(attached);
    Configuration rep = canonical_representative(x, 2);
    for (int i = 0; i < 2; ++i) CHECK(circle_dist(cfg[i], rep[i]) <= 1e-9);
    OrbitPoint back = detach_marking(attached, x);
    for (int i = 0; i < 128; ++i) {
      Angle t(static_cast<double>(i) / 128);
      CHECK(circle_dist(back.map(t), g.map(t)) <= 1e-9);
    }
  }

  CHECK_THROWS_AS(attach_marking(g, config_of({0.0, 0.7, 0.3})),
                  std::invalid_argument);
}

TEST_CASE("orbit structure reports") {
  // No critical values: the two orbits coincide.
  StructureReport fib =
      orbit_report(analyze(examples::degree_two_covering()), std::nullopt);
  CHECK(fib.n == 0);
  CHECK(fib.product_form == "Orb_M = Orb_MS");
  CHECK_FALSE(fib.k_is_lower_bound);

  auto report_of = [](const CircleMap& f) {
    NormalizedMap nm = normalize_exceptional(f, analyze(f));
    SymmetryInfo sym = symmetry_group(nm.map, nm.analysis);
    return orbit_report(nm.analysis, sym);
  };

  // Generic two-value map: k = 1, d = 2 even, trivial product.
  StructureReport generic = report_of(examples::two_wave());
  CHECK(generic.n == 2);
  CHECK(generic.k == 1);
  CHECK(generic.d == 2);
  CHECK(generic.twist == TwistType::Trivial);
  CHECK(generic.product_form == "Orb_M × S¹ × ℝ^1");

  // Symmetric two-value map: k = 2, d = 1 odd with n even, twisted product.
  StructureReport twisted = report_of(examples::twisted_pair_wave());
  CHECK(twisted.n == 2);
  CHECK(twisted.k == 2);
  CHECK(twisted.d == 1);
  CHECK(twisted.twist == TwistType::Twisted);
  CHECK(twisted.product_form == "Orb_M × S¹ ×̃ ℝ^1");

  // Symmetric four-value map: d = 2 even, trivial again.
  StructureReport four = report_of(examples::four_wave());
  CHECK(four.n == 4);
  CHECK(four.k == 2);
  CHECK(four.twist == TwistType::Trivial);
  CHECK(four.product_form == "Orb_M × S¹ × ℝ^3");

  CHECK_THROWS_AS(orbit_report(analyze(examples::two_wave()), std::nullopt),
                  std::invalid_argument);
}

TEST_CASE("fiber enumeration over an orbit point") {
  CircleMap f4 = examples::four_wave();
  NormalizedMap nm = normalize_exceptional(f4, analyze(f4));
  SymmetryInfo sym = symmetry_group(nm.map, nm.analysis);
  REQUIRE(sym.k == 2);

  std::mt19937_64 eng(63);
  CircleDiffeo h = random_diffeo(eng);
  CircleDiffeo r = random_diffeo(eng);
  std::vector<FiberPoint> fiber =
      fiber_enumerate(nm.map, nm.analysis, sym, h, r);
  REQUIRE(fiber.size() == 2);
  CHECK_FALSE(fiber[0].marking == fiber[1].marking);
  for (const FiberPoint& p : fiber) {
    CHECK(p.residual <= 1e-7);
    Configuration rep = canonical_representative(p.marking, 4);
    Configuration rep0 = canonical_representative(fiber[0].marking, 4);
    for (int i = 0; i < 4; ++i) CHECK(circle_dist(rep[i], rep0[i]) <= 1e-9);
  }
  // The second sheet is the half-turn shift of the first marking.
  Configuration shifted = cyclic_shift(fiber[0].marking, sym.d);
  for (int i = 0; i < 4; ++i) {
    CHECK(circle_dist(fiber[1].marking[i], shifted[i]) <= 1e-9);
  }
}
