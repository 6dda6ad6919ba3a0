#include <cmath>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "s1map/errors.hpp"
#include "s1map/examples.hpp"
#include "s1map/fields.hpp"

namespace {

using namespace s1map;

double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
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

// Value-fixing element for n = 2, pinned at 0 and 1/2.
CircleDiffeo pinned_element(double y1, double y3) {
  return CircleDiffeo::monotone_lift(SimplexPoint({y1, 0.5, y3}), 4);
}

CircleDiffeo random_dcr2(std::mt19937_64& eng) {
  double y1 = 0.25 + (uniform01(eng) - 0.5) * 0.1;
  double y3 = 0.75 + (uniform01(eng) - 0.5) * 0.1;
  return pinned_element(y1, y3);
}

}  // namespace

TEST_CASE("per-arc fields satisfy their defining identities") {
  const auto& [f, a] = two_wave_normalized();
  LocalFields local(f, a);
  CHECK(local.arc_count() == 2);
  CHECK(local.value_radius() == doctest::Approx(0.125));

  std::mt19937_64 eng(51);
  int regular_checked = 0, level_checked = 0;
  while (regular_checked < 100 || level_checked < 100) {
    Angle x(uniform01(eng));
    for (int arc = 0; arc < 2; ++arc) {
      if (regular_checked < 100 && local.in_regular_domain(arc, x)) {
        // df(G) = 1 by construction.
        CHECK(f.lift_d1(x.turns()) * local.regular(arc, x) ==
              doctest::Approx(1.0).epsilon(1e-12));
        ++regular_checked;
      }
      if (level_checked < 100 && local.in_level_neighborhood(arc, x)) {
        double v = angle_sub(f(x), a.exceptional_values[arc]);
        if (v != 0.0) {
          // df(F) = f - p on the level neighborhood.
          CHECK(std::fabs(f.lift_d1(x.turns()) * local.level(arc, x) - v) <=
                1e-10);
          ++level_checked;
        }
      }
    }
  }

  // Removable singularity at a critical point: F vanishes with slope 1/2.
  for (const CriticalPoint& cp : a.critical_points) {
    int level = circle_dist(f(cp.point), a.exceptional_values[0]) < 1e-6 ? 0 : 1;
    CHECK(std::fabs(local.level(level, cp.point)) <= 1e-12);
    double h = 1e-6;
    double fd = (local.level(level, Angle(cp.point.turns() + h)) -
                 local.level(level, Angle(cp.point.turns() - h))) /
                (2.0 * h);
    CHECK(fd == doctest::Approx(0.5).epsilon(1e-5));
  }

  // Level neighborhoods are pairwise disjoint.
  for (int i = 0; i < 512; ++i) {
    Angle x(static_cast<double>(i) / 512);
    CHECK_FALSE(local.in_level_neighborhood(0, x) &&
                local.in_level_neighborhood(1, x));
  }

  // Domain checks.
  bool threw = false;
  for (int i = 0; i < 512 && !threw; ++i) {
    Angle x(static_cast<double>(i) / 512);
    if (!local.in_regular_domain(0, x)) {
      CHECK_THROWS_AS(local.regular(0, x), std::domain_error);
      threw = true;
    }
  }
  CHECK(threw);
}

TEST_CASE("global field alternates and is obstructed for odd counts") {
  const auto& [f, a] = two_wave_normalized();
  CompatibleField field = global_field(f, a);
  REQUIRE(field.level_classes().size() == 2);
  CHECK(field.level_classes()[0] == LevelClass::Attractive);
  CHECK(field.level_classes()[1] == LevelClass::Reflective);

  for (int i = 0; i < 1024; ++i) {
    Angle x(static_cast<double>(i) / 1024 + 0.37 / 1024);
    double df = field.df(x);
    double weight = field.blend_weight(x);
    int patch = field.patch(x);
    if (weight >= 1.0) {
      int level = -1 - patch;
      double v = angle_sub(f(x), a.exceptional_values[level]);
      double eps = level % 2 == 0 ? -1.0 : 1.0;
      CHECK(std::fabs(df - eps * v) <= 1e-9);
    } else if (weight <= 0.0) {
      CHECK(std::fabs(df - (patch % 2 == 0 ? -1.0 : 1.0)) <= 1e-12);
    } else {
      CHECK(df != 0.0);
    }
  }

  CHECK_THROWS_AS(global_field(examples::three_value_wave(),
                               analyze(examples::three_value_wave())),
                  ParityObstruction);
  CHECK_THROWS_AS(global_field(examples::one_value_wave(),
                               analyze(examples::one_value_wave())),
                  ParityObstruction);

  // No critical values: the field is 1/L' with df = 1 everywhere.
  CircleMap cover = examples::degree_two_covering();
  CompatibleField flat = global_field(cover, analyze(cover));
  CHECK(flat(Angle(0.23)) == doctest::Approx(0.5));
  CHECK(flat.df(Angle(0.23)) == doctest::Approx(1.0));
  CHECK(flat.level_classes().empty());
}

TEST_CASE("flows integrate the field") {
  CircleMap cover = examples::degree_two_covering();
  CompatibleField field = global_field(cover, analyze(cover));
  auto fn = [&](Angle x) { return field(x); };

  CHECK(flow_integrate(fn, Angle(0.3), 0.0) == Angle(0.3));

  std::mt19937_64 eng(52);
  for (int trial = 0; trial < 20; ++trial) {
    Angle x(uniform01(eng));
    double s = (uniform01(eng) - 0.5) * 1.5;
    double t = (uniform01(eng) - 0.5) * 1.5;
    // Additivity of the flow.
    Angle two_steps = flow_integrate(fn, flow_integrate(fn, x, s), t);
    Angle one_step = flow_integrate(fn, x, s + t);
    CHECK(circle_dist(two_steps, one_step) <= 1e-7);
    // Unit value speed: f moves linearly along the flow.
    double lifted = cover.lift(flow_integrate(fn, x, t).turns());
    double expect = cover.lift(x.turns()) + t;
    CHECK(std::fabs(normalize_turns(lifted - expect)) <= 1e-8 ||
          std::fabs(normalize_turns(expect - lifted)) <= 1e-8);
  }

  // Shift map with constant time.
  auto shifted = shift_map(fn, [](Angle) { return 0.25; });
  Angle y = shifted(Angle(0.1));
  CHECK(std::fabs(cover.lift(y.turns()) - (cover.lift(0.1) + 0.25)) <= 1e-7);
  auto frozen = shift_map(fn, [](Angle) { return 0.0; });
  CHECK(circle_dist(frozen(Angle(0.6)), Angle(0.6)) <= 1e-12);
}

TEST_CASE("shift times ride both local flows") {
  const auto& [f, a] = two_wave_normalized();
  LocalFields local(f, a);
  std::mt19937_64 eng(53);
  CircleDiffeo r = random_dcr2(eng);

  ShiftTimes id_times =
      shift_times(f, a, CircleDiffeo::identity(), Angle(0.123));
  CHECK(id_times.arc_time.has_value());
  CHECK(*id_times.arc_time == doctest::Approx(0.0).epsilon(1e-14));

  int compared = 0;
  for (int i = 0; i < 4000 && compared < 60; ++i) {
    Angle x(uniform01(eng));
    ShiftTimes st = shift_times(f, a, r, x);
    if (!st.arc_time || !st.level_time) continue;
    double v = angle_sub(f(x), a.exceptional_values[st.level_index]);
    if (std::fabs(v) < local.value_radius() / 8.0) continue;
    // The two flows land on the same point.
    Angle via_regular = flow_integrate(
        [&](Angle y) { return local.regular(st.arc_index, y); }, x,
        *st.arc_time, 1e-9);
    Angle via_level = flow_integrate(
        [&](Angle y) { return local.level(st.level_index, y); }, x,
        *st.level_time, 1e-9);
    CHECK(circle_dist(via_regular, via_level) <= 1e-7);
    ++compared;
  }
  CHECK(compared == 60);

  // Times depend on the map value only.
  double w = f.lift(0.071);
  ShiftTimes st = shift_times(f, a, r, Angle(0.071));
  REQUIRE(st.arc_time.has_value());
  CHECK(*st.arc_time == doctest::Approx(r.lift(w) - w).epsilon(1e-12));

  // A target pulling values toward the level has negative level time on the
  // attracted side.
  CircleDiffeo pull = pinned_element(0.18, 0.75);
  int negative_seen = 0;
  for (int i = 0; i < 2000 && negative_seen == 0; ++i) {
    Angle x(uniform01(eng));
    ShiftTimes times = shift_times(f, a, pull, x);
    if (!times.level_time || times.level_index != 0) continue;
    double v = angle_sub(f(x), a.exceptional_values[0]);
    if (v > 0.0 && v < local.value_radius() / 2.0) {
      CHECK(*times.level_time < 0.0);
      ++negative_seen;
    }
  }
  CHECK(negative_seen == 1);

  // On a level both times are undefined.
  ShiftTimes on_level = shift_times(f, a, r, a.levels[0][0].point);
  CHECK_FALSE(on_level.arc_time.has_value());
  CHECK_FALSE(on_level.level_time.has_value());
}

TEST_CASE("target lifting: identities, levels, group laws") {
  const auto& [f, a] = two_wave_normalized();

  CircleDiffeo h_id = lift_target_diffeo(f, a, CircleDiffeo::identity());
  for (int i = 0; i < 256; ++i) {
    Angle x(static_cast<double>(i) / 256);
    CHECK(h_id(x) == x);  // exact
  }

  // Level points are fixed exactly.
  std::mt19937_64 eng(54);
  CircleDiffeo r1 = random_dcr2(eng);
  CircleDiffeo h1 = lift_target_diffeo(f, a, r1);
  for (const Angle& e : a.all_level_points()) {
    CHECK(h1(e) == e);
  }
  CHECK(conjugacy_residual(f, h1, r1) <= 1e-8);

  // Group laws on a sample grid.
  CircleDiffeo r2 = random_dcr2(eng);
  CircleDiffeo h2 = lift_target_diffeo(f, a, r2);
  CircleDiffeo h12 =
      lift_target_diffeo(f, a, CircleDiffeo::compose(r1, r2));
  CircleDiffeo h1_inv = lift_target_diffeo(f, a, r1.inverse());
  for (int i = 0; i < 256; ++i) {
    Angle x(static_cast<double>(i) / 256);
    CHECK(circle_dist(h12(x), h1(h2(x))) <= 1e-7);
    CHECK(circle_dist(h1_inv(h1(x)), x) <= 1e-7);
  }

  CHECK_THROWS_AS(lift_target_diffeo(f, a, CircleDiffeo::rotation(Angle(0.3))),
                  std::invalid_argument);

  StabilizerElement se =
      stabilizer_section(f, a, CircleDiffeo::identity(), 512);
  CHECK(se.residual == 0.0);
}

TEST_CASE("path to a periodic representative") {
  NormalizedMap four = normalize_exceptional(examples::four_wave(),
                                             analyze(examples::four_wave()));
  const CircleMap& f = four.map;
  const MapAnalysis& a = four.analysis;

  // Build a stabilizer element whose target side is the half rotation
  // composed with a value-fixing element.
  CircleDiffeo rot = CircleDiffeo::rotation(Angle(0.5));
  CircleMap g = f.postcompose(rot);
  std::optional<CircleDiffeo> h_rot = right_equivalence(f, a, g, analyze(g));
  REQUIRE(h_rot.has_value());

  CircleDiffeo w =
      CircleDiffeo::monotone_lift(SimplexPoint({0.13, 0.25, 0.38, 0.5,
                                                0.635, 0.75, 0.865}),
                                  8);
  REQUIRE(fixes_exceptional(w, 4));
  CircleDiffeo r = CircleDiffeo::compose(w, rot);
  CircleDiffeo h =
      CircleDiffeo::compose(lift_target_diffeo(f, a, w), *h_rot);
  StabilizerElement element{h, r, conjugacy_residual(f, h, r)};
  REQUIRE(element.residual <= 1e-7);

  PeriodicPath path = periodic_representative_path(f, a, element, 4, 512);
  REQUIRE(path.samples.size() == 5);
  // The periodic representative is the rotation by l/n with l = 2.
  for (int i = 0; i < 64; ++i) {
    Angle x(static_cast<double>(i) / 64);
    CHECK(circle_dist(path.periodic_target(x), Angle(x.turns() + 0.5)) <=
          1e-12);
  }
  for (const StabilizerElement& s : path.samples) {
    CHECK(s.residual <= 1e-7);
  }
  // Far endpoint carries the original pair.
  const StabilizerElement& last = path.samples.back();
  for (int i = 0; i < 64; ++i) {
    Angle x(static_cast<double>(i) / 64);
    CHECK(circle_dist(last.target_side(x), r(x)) <= 1e-10);
    CHECK(circle_dist(last.domain_side(x), h(x)) <= 1e-7);
  }
  // Near endpoint's target side is the periodic rotation.
  const StabilizerElement& first = path.samples.front();
  for (int i = 0; i < 64; ++i) {
    Angle x(static_cast<double>(i) / 64);
    CHECK(circle_dist(first.target_side(x), Angle(x.turns() + 0.5)) <= 1e-10);
  }

  // Two samples only.
  CHECK(periodic_representative_path(f, a, element, 1, 256).samples.size() ==
        2);

  // A target side that fixes the values has no shift to straighten.
  StabilizerElement fixing{lift_target_diffeo(f, a, w), w,
                           conjugacy_residual(f, lift_target_diffeo(f, a, w), w)};
  CHECK(periodic_representative_path(f, a, fixing, 2).periodic_target
            .lift(0.0) == 0.0);  // rotation by l = 0 is the identity
}

TEST_CASE("covering maps lift any rotation") {
  CircleMap f = examples::degree_two_covering();
  MapAnalysis a = analyze(f);
  std::mt19937_64 eng(56);
  for (int trial = 0; trial < 5; ++trial) {
    double alpha = uniform01(eng);
    CircleDiffeo h =
        lift_target_diffeo(f, a, CircleDiffeo::rotation(Angle(alpha)));
    for (int i = 0; i < 128; ++i) {
      Angle x(static_cast<double>(i) / 128);
      CHECK(circle_dist(h(x), Angle(x.turns() + alpha / 2)) <= 1e-12);
    }
  }
}
