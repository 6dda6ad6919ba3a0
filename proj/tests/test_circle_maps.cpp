#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "s1map/circle_map.hpp"
#include "s1map/errors.hpp"
#include "s1map/examples.hpp"

namespace {

using namespace s1map;

constexpr double kPi = std::numbers::pi;

double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Independent root isolation for a scalar function: fine scan + bisection.
std::vector<double> roots_oracle(double (*fn)(double), double lo, double hi) {
  const int cells = 20000;
  std::vector<double> roots;
  double prev = fn(lo);
  for (int i = 1; i <= cells; ++i) {
    double t = lo + (hi - lo) * i / cells;
    double v = fn(t);
    if ((prev < 0) != (v < 0)) {
      double a = lo + (hi - lo) * (i - 1) / cells, b = t;
      for (int it = 0; it < 100; ++it) {
        double m = 0.5 * (a + b);
        ((fn(a) < 0) == (fn(m) < 0) ? a : b) = m;
      }
      roots.push_back(0.5 * (a + b));
    }
    prev = v;
  }
  return roots;
}

double two_wave_d1(double t) { return 1.0 + 0.6 * kPi * std::cos(2 * kPi * t); }
double four_wave_d1(double t) { return 1.0 + 0.4 * kPi * std::cos(4 * kPi * t); }

}  // namespace

TEST_CASE("a covering map has no critical data") {
  MapAnalysis a = analyze(examples::degree_two_covering());
  CHECK(a.degree == 2);
  CHECK(a.critical_points.empty());
  CHECK(a.n() == 0);
  CHECK(a.morse);
}

TEST_CASE("critical points of the one-wave map match the root oracle") {
  CircleMap f = examples::two_wave();
  MapAnalysis a = analyze(f);
  std::vector<double> expected = roots_oracle(two_wave_d1, 0.0, 1.0);
  REQUIRE(expected.size() == 2);
  REQUIRE(a.critical_points.size() == 2);
  for (int i = 0; i < 2; ++i) {
    CHECK(a.critical_points[i].point.turns() ==
          doctest::Approx(expected[i]).epsilon(1e-10));
  }
  CHECK(a.n() == 2);
  // Kind pattern: ascending-then-descending wave puts the maximum first.
  CHECK(a.critical_points[0].second_derivative < 0.0);
  CHECK(a.critical_points[1].second_derivative > 0.0);
  // Values from the closed form.
  for (const CriticalPoint& cp : a.critical_points) {
    double c = cp.point.turns();
    double v = normalize_turns(c + 0.3 * std::sin(2 * kPi * c));
    double best = 1.0;
    for (const Angle& value : a.exceptional_values) {
      best = std::min(best, circle_dist(Angle(v), value));
    }
    CHECK(best <= 1e-9);
  }
  // Each level carries the critical point plus one regular preimage.
  for (int lev = 0; lev < a.n(); ++lev) {
    CHECK(a.levels[lev].size() == 2);
    int crit = 0;
    for (const LevelPoint& p : a.levels[lev]) {
      crit += p.critical ? 1 : 0;
      CHECK(circle_dist(f(p.point), a.exceptional_values[lev]) <= 1e-9);
    }
    CHECK(crit == 1);
  }
}

TEST_CASE("four critical points, four values") {
  MapAnalysis a = analyze(examples::four_wave());
  std::vector<double> expected = roots_oracle(four_wave_d1, 0.0, 1.0);
  REQUIRE(expected.size() == 4);
  REQUIRE(a.critical_points.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(a.critical_points[i].point.turns() ==
          doctest::Approx(expected[i]).epsilon(1e-10));
  }
  CHECK(a.n() == 4);
}

TEST_CASE("tuned examples collapse their critical values") {
  MapAnalysis pair = analyze(examples::twisted_pair_wave());
  CHECK(pair.critical_points.size() == 4);
  CHECK(pair.n() == 2);
  CHECK(circle_dist(pair.exceptional_values[1],
                    Angle(pair.exceptional_values[0].turns() + 0.5)) <= 1e-9);

  MapAnalysis three = analyze(examples::three_value_wave());
  CHECK(three.critical_points.size() == 6);
  REQUIRE(three.n() == 3);
  CHECK(circle_dist(three.exceptional_values[0], Angle(0.0)) <= 1e-9);
  CHECK(circle_dist(three.exceptional_values[1], Angle(1.0 / 3)) <= 1e-9);
  CHECK(circle_dist(three.exceptional_values[2], Angle(2.0 / 3)) <= 1e-9);
  for (const auto& level : three.levels) CHECK(level.size() >= 2);

  MapAnalysis one = analyze(examples::one_value_wave());
  CHECK(one.critical_points.size() == 2);
  CHECK(one.n() == 1);
}

TEST_CASE("degenerate critical points are rejected") {
  // L' = 1 + cos(2 pi t) has a double root at t = 1/2.
  CircleMap f =
      CircleMap::fourier(FourierData{1, 0.0, {0.0}, {1.0 / (2 * kPi)}});
  CHECK_THROWS_AS(analyze(f), NonMorseError);
}

TEST_CASE("analysis is rotation equivariant") {
  CircleMap f = examples::two_wave();
  MapAnalysis base = analyze(f);
  std::mt19937_64 eng(41);
  for (int trial = 0; trial < 10; ++trial) {
    double phi = uniform01(eng);
    MapAnalysis shifted =
        analyze(f.precompose(CircleDiffeo::rotation(Angle(phi))));
    REQUIRE(shifted.critical_points.size() == base.critical_points.size());
    for (const CriticalPoint& cp : base.critical_points) {
      Angle moved(cp.point.turns() - phi);
      double best = 1.0;
      for (const CriticalPoint& sp : shifted.critical_points) {
        best = std::min(best, circle_dist(sp.point, moved));
      }
      CHECK(best <= 1e-10);
    }
  }
}

TEST_CASE("exceptional values transform with the target diffeomorphism") {
  CircleMap f = examples::two_wave();
  MapAnalysis base = analyze(f);
  std::mt19937_64 eng(42);
  for (int trial = 0; trial < 5; ++trial) {
    double phase = uniform01(eng);
    std::vector<Angle> src, dst;
    for (int a = 0; a < 3; ++a) {
      src.push_back(Angle(phase + a / 3.0 + (uniform01(eng) - 0.5) * 0.1));
      dst.push_back(Angle(phase + a / 3.0 + (uniform01(eng) - 0.5) * 0.1));
    }
    CircleDiffeo r = CircleDiffeo::monotone_between(Configuration(src),
                                                    Configuration(dst));
    CircleDiffeo h = CircleDiffeo::rotation(Angle(uniform01(eng)));
    MapAnalysis moved = analyze(f.postcompose(r).precompose(h.inverse()));
    REQUIRE(moved.n() == base.n());
    for (const Angle& v : base.exceptional_values) {
      double best = 1.0;
      for (const Angle& w : moved.exceptional_values) {
        best = std::min(best, circle_dist(w, r(v)));
      }
      CHECK(best <= 1e-9);
    }
  }
}

TEST_CASE("normalization moves the values onto the base points") {
  CircleMap f = examples::two_wave();
  MapAnalysis a = analyze(f);
  NormalizedMap nm = normalize_exceptional(f, a);
  REQUIRE(nm.analysis.n() == 2);
  CHECK(circle_dist(nm.analysis.exceptional_values[0], Angle(0.0)) <= 1e-9);
  CHECK(circle_dist(nm.analysis.exceptional_values[1], Angle(0.5)) <= 1e-9);
  for (int i = 0; i < 2; ++i) {
    CHECK(circle_dist(nm.straightening(a.exceptional_values[i]),
                      Angle(i / 2.0)) <= 1e-10);
  }
  // A second normalization is as close to doing nothing as the first
  // analysis allows.
  NormalizedMap again = normalize_exceptional(nm.map, nm.analysis);
  for (int i = 0; i < 64; ++i) {
    Angle x(static_cast<double>(i) / 64);
    CHECK(circle_dist(again.straightening(x), x) <= 1e-8);
  }

  CHECK_THROWS_AS(
      normalize_exceptional(examples::degree_two_covering(),
                            analyze(examples::degree_two_covering())),
      std::invalid_argument);
}

TEST_CASE("cyclic words alternate") {
  MapAnalysis a = analyze(examples::two_wave());
  CyclicWord w = cyclic_word(a);
  REQUIRE(w.letters.size() == 2);
  CHECK(w.letters[0].kind == CritKind::LocalMax);
  CHECK(w.letters[1].kind == CritKind::LocalMin);

  CHECK(cyclic_word(analyze(examples::four_wave())).letters.size() == 4);
  CHECK_THROWS_AS(cyclic_word(analyze(examples::degree_two_covering())),
                  std::invalid_argument);
}

TEST_CASE("right equivalence recovers a domain rotation") {
  CircleMap f = examples::two_wave();
  MapAnalysis fa = analyze(f);

  // g = f is equivalent through the identity alignment.
  std::optional<CircleDiffeo> h = right_equivalence(f, fa, f, fa);
  REQUIRE(h.has_value());
  for (int i = 0; i < 256; ++i) {
    Angle x(static_cast<double>(i) / 256);
    CHECK(circle_dist((*h)(x), x) <= 1e-9);
  }

  CircleMap g = f.precompose(CircleDiffeo::rotation(Angle(0.37)));
  h = right_equivalence(f, fa, g, analyze(g));
  REQUIRE(h.has_value());
  for (int i = 0; i < 256; ++i) {
    Angle x(static_cast<double>(i) / 256);
    CHECK(circle_dist((*h)(x), Angle(x.turns() + 0.37)) <= 1e-8);
    CHECK(h->lift_d1(x.turns()) > 0.0);
  }
  // Critical points of g map onto critical points of f.
  MapAnalysis ga = analyze(g);
  for (const CriticalPoint& cp : ga.critical_points) {
    double best = 1.0;
    for (const CriticalPoint& fc : fa.critical_points) {
      best = std::min(best, circle_dist((*h)(cp.point), fc.point));
    }
    CHECK(best <= 1e-8);
  }

  // Shifting the values breaks the word match.
  CircleMap shifted = f.postcompose(CircleDiffeo::rotation(Angle(0.2)));
  CHECK_FALSE(right_equivalence(f, fa, shifted, analyze(shifted)).has_value());

  CircleMap covering = examples::degree_two_covering();
  CHECK_THROWS_AS(right_equivalence(f, fa, covering, analyze(covering)),
                  std::invalid_argument);
}

TEST_CASE("rotation symmetry groups") {
  NormalizedMap four =
      normalize_exceptional(examples::four_wave(), analyze(examples::four_wave()));
  SymmetryInfo sym = symmetry_group(four.map, four.analysis);
  CHECK(sym.n == 4);
  CHECK(sym.k == 2);
  CHECK(sym.d == 2);
  CHECK(sym.generator_shift == 2);

  NormalizedMap three = normalize_exceptional(
      examples::three_value_wave(), analyze(examples::three_value_wave()));
  SymmetryInfo sym3 = symmetry_group(three.map, three.analysis);
  CHECK(sym3.n == 3);
  CHECK(sym3.k == 3);
  CHECK(sym3.d == 1);

  NormalizedMap one = normalize_exceptional(examples::one_value_wave(),
                                            analyze(examples::one_value_wave()));
  SymmetryInfo sym1 = symmetry_group(one.map, one.analysis);
  CHECK(sym1.n == 1);
  CHECK(sym1.k == 1);
  CHECK(sym1.d == 1);

  NormalizedMap perturbed = normalize_exceptional(
      examples::two_wave_perturbed(), analyze(examples::two_wave_perturbed()));
  SymmetryInfo symp = symmetry_group(perturbed.map, perturbed.analysis);
  CHECK(symp.k == 1);
  CHECK(symp.d == symp.n);

  // The successful set is closed under addition mod n.
  for (int a : sym.successful_shifts) {
    for (int b : sym.successful_shifts) {
      int c = (a + b) % sym.n;
      CHECK(std::find(sym.successful_shifts.begin(),
                      sym.successful_shifts.end(),
                      c) != sym.successful_shifts.end());
    }
  }
}
