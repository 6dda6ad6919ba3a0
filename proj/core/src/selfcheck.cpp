#include "s1map/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "s1map/circle_map.hpp"
#include "s1map/config.hpp"
#include "s1map/diffeo.hpp"
#include "s1map/errors.hpp"
#include "s1map/examples.hpp"
#include "s1map/fields.hpp"
#include "s1map/orbit.hpp"
#include "internal/fmt.hpp"
#include "internal/rng.hpp"

namespace s1map::selfcheck {

namespace {

using internal::Rng;

// Accumulates the worst deviation; boolean conditions count as 0 or 1.
struct Check {
  double worst = 0.0;
  void value(double v) { worst = std::max(worst, v); }
  void require(bool ok) { worst = std::max(worst, ok ? 0.0 : 1.0); }
};

std::vector<double> sorted_circle_points(int n, Rng& rng, double min_gap) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<double> pts(n);
    for (double& p : pts) p = rng.uniform();
    std::sort(pts.begin(), pts.end());
    bool ok = true;
    for (int i = 0; ok && i < n; ++i) {
      double gap = i + 1 < n ? pts[i + 1] - pts[i] : pts[0] + 1.0 - pts[n - 1];
      ok = gap >= min_gap;
    }
    if (ok) return pts;
  }
  throw NumericError("sorted_circle_points: rejection sampling stalled");
}

// Arbitrary start index keeps the tuple positively ordered.
Configuration random_config(int n, Rng& rng, double min_gap) {
  std::vector<double> pts = sorted_circle_points(n, rng, min_gap);
  int start = rng.index(n);
  std::vector<Angle> tuple;
  tuple.reserve(n);
  for (int i = 0; i < n; ++i) tuple.push_back(Angle(pts[(start + i) % n]));
  return Configuration(std::move(tuple));
}

// Gaps jittered around uniform: interpolants through these keep their
// derivative within a few e-folds of 1, so composed analyses stay well
// conditioned.
Configuration random_config_wide(int n, Rng& rng) {
  double phase = rng.uniform();
  std::vector<Angle> tuple;
  tuple.reserve(n);
  for (int a = 0; a < n; ++a) {
    double jitter = (rng.uniform() - 0.5) * 0.45 / n;
    tuple.push_back(Angle(phase + static_cast<double>(a) / n + jitter));
  }
  return Configuration(std::move(tuple));
}

SimplexPoint random_simplex(int n, Rng& rng, double min_gap) {
  if (n == 1) return SimplexPoint();
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<double> pts(n - 1);
    for (double& p : pts) p = rng.uniform();
    std::sort(pts.begin(), pts.end());
    bool ok = pts.front() >= min_gap && 1.0 - pts.back() >= min_gap;
    for (int i = 0; ok && i + 1 < n - 1; ++i) {
      ok = pts[i + 1] - pts[i] >= min_gap;
    }
    if (ok) return SimplexPoint(std::move(pts));
  }
  throw NumericError("random_simplex: rejection sampling stalled");
}

// A simplex point whose least gap is exactly the requested width.
SimplexPoint clustered_simplex(int n, Rng& rng, double gap) {
  if (n == 1) return SimplexPoint();
  std::vector<double> pts = random_simplex(n, rng, 0.05).coords();
  int j = rng.index(n - 1);
  double left = j == 0 ? 0.0 : pts[j - 1];
  pts[j] = left + gap;
  return SimplexPoint(std::move(pts));
}

// Random element of the value-fixing subgroup for the base points a/n:
// an interpolant pinned at every a/n with jittered midpoints, optionally
// composed with a second one and contracted part way to the identity.
CircleDiffeo random_dcr(int n, Rng& rng) {
  auto pinned = [&]() {
    int m = 2 * n;
    std::vector<double> targets(m - 1);
    for (int j = 1; j < m; ++j) {
      double center = static_cast<double>(j) / m;
      double jitter =
          j % 2 == 1 ? (rng.uniform() - 0.5) * 0.4 / m : 0.0;
      targets[j - 1] = center + jitter;
    }
    return CircleDiffeo::monotone_lift(SimplexPoint(std::move(targets)), m);
  };
  CircleDiffeo r = pinned();
  if (rng.bits() % 2 == 0) r = CircleDiffeo::compose(r, pinned());
  if (rng.bits() % 2 == 0) {
    r = contract_toward_identity(r, rng.uniform(0.0, 0.9), n);
  }
  return r;
}

// Generic orientation-preserving diffeomorphism with healthy derivatives.
CircleDiffeo random_diffeo(Rng& rng) {
  int m = 2 + rng.index(3);
  CircleDiffeo warp =
      CircleDiffeo::monotone_between(random_config_wide(m, rng),
                                     random_config_wide(m, rng));
  return CircleDiffeo::compose(CircleDiffeo::rotation(Angle(rng.uniform())),
                               warp);
}

struct Fixtures {
  CircleMap f2;        // one-wave map
  NormalizedMap n2;    // straightened, n = 2
  CircleMap f4;        // symmetric four-wave map
  NormalizedMap n4;    // straightened, n = 4
  SymmetryInfo sym4;   // k = 2 expected

  Fixtures()
      : f2(examples::two_wave()),
        n2(normalize_exceptional(f2, analyze(f2))),
        f4(examples::four_wave()),
        n4(normalize_exceptional(f4, analyze(f4))),
        sym4(symmetry_group(n4.map, n4.analysis)) {}
};

double grid_point(int i, int grid) { return static_cast<double>(i) / grid; }

// ---------------------------------------------------------------- criteria

CriterionResult c1_chart_round_trip(Rng& rng, double tol) {
  Check check;
  for (int n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      Configuration c = random_config(n, rng, 1e-3);
      Chart chart = chart_coordinates(c);
      Configuration back = from_chart(chart);
      for (int a = 0; a < n; ++a) check.value(circle_dist(back[a], c[a]));

      Angle phi(rng.uniform());
      SimplexPoint t = random_simplex(n, rng, 1e-3);
      Chart again = chart_coordinates(from_chart(phi, t));
      check.value(circle_dist(again.base, phi));
      for (std::size_t i = 0; i < t.dimension(); ++i) {
        check.value(std::fabs(again.simplex.coords()[i] - t.coords()[i]));
      }
    }
  }
  return {1, "configuration chart round trip", check.worst <= tol,
          check.worst, tol, "h and s invert each other, n = 1..6"};
}

CriterionResult c2_shift_orientation_parity(double tol) {
  Check check;
  int cases = 0;
  for (int n = 1; n <= 6; ++n) {
    for (int d = 1; d <= n; ++d) {
      if (n % d != 0) continue;
      ++cases;
      int sign = shift_jacobian_sign(n, d);
      int expected = (n % 2 == 0 && d % 2 == 1) ? -1 : 1;
      check.require(sign == expected);
      TwistType twist = twist_type(n, n / d);
      check.require((twist == TwistType::Twisted) == (sign == -1));
    }
  }
  return {2, "cyclic shift orientation parity", check.worst <= tol,
          check.worst, tol,
          "numeric Jacobian sign vs parity rule, " + std::to_string(cases) +
              " (n, d) pairs"};
}

CriterionResult c3_interpolant_properties(Rng& rng, double tol) {
  Check check;
  for (int n = 1; n <= 6; ++n) {
    // Uniform targets must give the identity.
    std::vector<double> uniform(n - 1);
    for (int a = 1; a < n; ++a) uniform[a - 1] = static_cast<double>(a) / n;
    CircleDiffeo id_lift =
        CircleDiffeo::monotone_lift(SimplexPoint(uniform), n);
    for (int i = 0; i <= 100; ++i) {
      double t = grid_point(i, 100);
      check.value(std::fabs(id_lift.lift(t) - t));
    }

    for (int trial = 0; trial < 100; ++trial) {
      SimplexPoint targets = trial < 90 ? random_simplex(n, rng, 5e-3)
                                        : clustered_simplex(n, rng, 1e-3);
      CircleDiffeo mu = CircleDiffeo::monotone_lift(targets, n);
      const DiffeoNode& node = *mu.node();
      for (int i = 0; i <= 1000; ++i) {
        double t = grid_point(i, 1000);
        // Monotonicity: the density is nonnegative by construction; it may
        // underflow to zero far from the knots, which the tolerance absorbs.
        check.value(-node.lift_d1(t));
      }
      // Identity splice at the interval ends: value and slope.
      check.value(std::fabs(node.lift(0.0)));
      check.value(std::fabs(node.lift(1.0) - 1.0));
      check.value(std::fabs(node.lift_d1(0.0) - 1.0));
      check.value(std::fabs(node.lift_d1(1.0) - 1.0));
      // Knot interpolation.
      for (int a = 1; a < n; ++a) {
        check.value(std::fabs(node.lift(static_cast<double>(a) / n) -
                              targets.coords()[a - 1]));
      }
    }
  }
  return {3, "monotone interpolant properties", check.worst <= tol,
          check.worst, tol,
          "positivity, identity splice, knot interpolation, uniform case"};
}

CriterionResult c4_section_of_evaluation(Rng& rng, double tol) {
  Check check;
  for (int n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      Configuration c = random_config(n, rng, 2e-3);
      Configuration image = evaluation_map(interpolating_diffeo(c), n);
      for (int a = 0; a < n; ++a) check.value(circle_dist(image[a], c[a]));
    }
  }
  return {4, "section of the evaluation map", check.worst <= tol, check.worst,
          tol, "interpolating diffeomorphism hits its configuration"};
}

CriterionResult c5_target_lifting(const Fixtures& fx, Rng& rng, double tol,
                                  int grid) {
  Check check;
  const CircleMap& f = fx.n2.map;
  const MapAnalysis& a = fx.n2.analysis;

  CircleDiffeo h_id = lift_target_diffeo(f, a, CircleDiffeo::identity());
  for (int i = 0; i < grid; ++i) {
    Angle x(grid_point(i, grid));
    check.value(circle_dist(h_id(x), x));  // must be exactly zero
  }

  for (int trial = 0; trial < 20; ++trial) {
    CircleDiffeo r = random_dcr(2, rng);
    StabilizerElement se = stabilizer_section(f, a, r, grid);
    check.value(se.residual);
    if (trial < 5) {
      for (int i = 0; i < 256; ++i) {
        check.require(se.domain_side.lift_d1(grid_point(i, 256)) > 0.0);
      }
    }
  }
  return {5, "target diffeomorphism lifting", check.worst <= tol, check.worst,
          tol, "conjugacy residual, exact identity, positive derivative"};
}

CriterionResult c6_section_homomorphism(const Fixtures& fx, Rng& rng,
                                        double tol, int grid) {
  Check check;
  const CircleMap& f = fx.n2.map;
  const MapAnalysis& a = fx.n2.analysis;
  for (int trial = 0; trial < 10; ++trial) {
    CircleDiffeo r1 = random_dcr(2, rng);
    CircleDiffeo r2 = random_dcr(2, rng);
    CircleDiffeo lhs =
        lift_target_diffeo(f, a, CircleDiffeo::compose(r1, r2));
    CircleDiffeo rhs = CircleDiffeo::compose(lift_target_diffeo(f, a, r1),
                                             lift_target_diffeo(f, a, r2));
    for (int i = 0; i < grid; ++i) {
      Angle x(grid_point(i, grid));
      check.value(circle_dist(lhs(x), rhs(x)));
    }
  }
  return {6, "stabilizer section homomorphism", check.worst <= tol,
          check.worst, tol, "lift of a product vs product of lifts"};
}

CriterionResult c7_flow_cross_validation(const Fixtures& fx, Rng& rng,
                                         double tol) {
  Check check;
  const CircleMap& f = fx.n2.map;
  const MapAnalysis& a = fx.n2.analysis;
  LocalFields local(f, a);
  CircleDiffeo r = random_dcr(2, rng);
  CircleDiffeo h = lift_target_diffeo(f, a, r);
  const double radius = local.value_radius();

  int arc_checked = 0, level_checked = 0;
  for (int i = 0; i < 20000 && arc_checked + level_checked < 200; ++i) {
    Angle x(rng.uniform());
    ShiftTimes st = shift_times(f, a, r, x);
    if (!st.arc_time) continue;
    double v = angle_sub(f(x), a.exceptional_values[st.level_index]);
    Angle closed = h(x);
    if (std::fabs(v) >= 0.5 * radius && arc_checked < 150) {
      auto field = [&](Angle y) { return local.regular(st.arc_index, y); };
      Angle flowed = flow_integrate(field, x, *st.arc_time, 1e-9);
      check.value(circle_dist(flowed, closed));
      ++arc_checked;
    } else if (st.level_time && std::fabs(v) >= radius / 8.0 &&
               std::fabs(v) < 0.5 * radius && level_checked < 50) {
      auto field = [&](Angle y) { return local.level(st.level_index, y); };
      Angle flowed = flow_integrate(field, x, *st.level_time, 1e-9);
      check.value(circle_dist(flowed, closed));
      ++level_checked;
    }
  }
  check.require(arc_checked + level_checked == 200);
  return {7, "flow against closed-form lift", check.worst <= tol, check.worst,
          tol,
          "integrated shift map vs branch inversion at " +
              std::to_string(arc_checked + level_checked) + " points"};
}

CriterionResult c8_parity_obstruction(const Fixtures& fx, double tol) {
  Check check;
  const CircleMap& f = fx.n2.map;
  const MapAnalysis& a = fx.n2.analysis;
  CompatibleField field = global_field(f, a);

  const std::vector<LevelClass>& classes = field.level_classes();
  check.require(classes.size() == 2);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    check.require(classes[i] != classes[(i + 1) % classes.size()]);
  }
  // Compatibility audit: df(V) = +-1 in pure zones, epsilon (f - p) in the
  // inner level zones, nonzero off the levels.
  for (int i = 0; i < 512; ++i) {
    Angle x(grid_point(i, 512) + 0.3 / 512);
    double df = field.df(x);
    double weight = field.blend_weight(x);
    int patch = field.patch(x);
    if (weight >= 1.0) {
      int level = -1 - patch;
      double v = angle_sub(f(x), a.exceptional_values[level]);
      double eps = level % 2 == 0 ? -1.0 : 1.0;
      check.value(std::fabs(df - eps * v));
      if (v != 0.0) check.require(df != 0.0);
    } else if (weight <= 0.0) {
      double sign = patch % 2 == 0 ? -1.0 : 1.0;
      check.value(std::fabs(df - sign));
    } else {
      check.require(df != 0.0);
    }
  }

  CircleMap f3 = examples::three_value_wave();
  MapAnalysis a3 = analyze(f3);
  check.require(a3.n() == 3);
  bool obstructed = false;
  try {
    global_field(f3, a3);
  } catch (const ParityObstruction&) {
    obstructed = true;
  }
  check.require(obstructed);
  return {8, "global field parity", check.worst <= tol, check.worst, tol,
          "n = 2 field alternates; n = 3 map is obstructed"};
}

CriterionResult c9_fibration_case(Rng& rng, double tol) {
  Check check;
  CircleMap f = examples::degree_two_covering();
  MapAnalysis a = analyze(f);
  check.require(a.n() == 0);
  for (int trial = 0; trial < 10; ++trial) {
    double alpha = rng.uniform();
    CircleDiffeo h = lift_target_diffeo(f, a, CircleDiffeo::rotation(Angle(alpha)));
    for (int i = 0; i < 512; ++i) {
      Angle x(grid_point(i, 512));
      check.value(circle_dist(h(x), Angle(x.turns() + 0.5 * alpha)));
    }
  }
  StructureReport report = orbit_report(a, std::nullopt);
  check.require(report.product_form == "Orb_M = Orb_MS");
  return {9, "fibration case", check.worst <= tol, check.worst, tol,
          "rotation lifts to the half rotation; orbit report collapses"};
}

CriterionResult c10_symmetry_detection(const Fixtures& fx, double tol,
                                       int grid) {
  Check check;
  const CircleMap& f = fx.n4.map;
  const MapAnalysis& a = fx.n4.analysis;
  const SymmetryInfo& sym = fx.sym4;
  const int n = a.n();
  check.require(n == 4);
  check.require(sym.k % 2 == 0);
  bool has_half = std::find(sym.successful_shifts.begin(),
                            sym.successful_shifts.end(),
                            n / 2) != sym.successful_shifts.end();
  check.require(has_half);

  // Residual of the half-turn witness.
  CircleMap g = f.postcompose(
      CircleDiffeo::rotation(Angle(0.5)));
  std::optional<CircleDiffeo> h = right_equivalence(f, a, g, analyze(g));
  check.require(h.has_value());
  if (h) {
    for (int i = 0; i < grid; ++i) {
      Angle x(grid_point(i, grid));
      check.value(circle_dist(g(x), f((*h)(x))));
    }
  }

  CircleMap fp = examples::two_wave_perturbed();
  NormalizedMap np = normalize_exceptional(fp, analyze(fp));
  SymmetryInfo symp = symmetry_group(np.map, np.analysis);
  check.require(symp.k == 1);
  return {10, "rotation symmetry detection", check.worst <= tol, check.worst,
          tol,
          "half-turn conjugacy found (k = " + std::to_string(sym.k) +
              "), perturbed map has k = 1"};
}

CriterionResult c11_contraction(Rng& rng, double tol) {
  Check check;
  const int n = 2;
  for (int trial = 0; trial < 20; ++trial) {
    CircleDiffeo r = random_dcr(n, rng);
    for (int j = 0; j <= 8; ++j) {
      double s = static_cast<double>(j) / 8;
      CircleDiffeo path = contract_toward_identity(r, s, n);
      for (int a = 0; a < n; ++a) {
        Angle p(static_cast<double>(a) / n);
        check.value(circle_dist(path(p), p));
      }
      if (j == 0) {
        for (int i = 0; i < 64; ++i) {
          double t = grid_point(i, 64);
          check.value(std::fabs(path.lift(t) - r.lift(t)));  // exact
        }
      }
      if (j == 8) {
        for (int i = 0; i < 64; ++i) {
          double t = grid_point(i, 64);
          check.value(std::fabs(path.lift(t) - t));  // exact
        }
      }
    }
  }
  return {11, "value-fixing subgroup contraction", check.worst <= tol,
          check.worst, tol, "base points fixed along the path, exact ends"};
}

CriterionResult c12_diagram_commutativity(const Fixtures& fx, Rng& rng,
                                          double tol) {
  Check check;
  const CircleMap& f = fx.n2.map;
  const int n = 2;
  for (int trial = 0; trial < 50; ++trial) {
    CircleDiffeo h = random_diffeo(rng);
    CircleDiffeo r = random_diffeo(rng);
    auto [point, marking] = marked_orbit(h, r, f, n);
    Configuration from_map = exceptional_config(point);
    Configuration from_marking = canonical_representative(marking, n);
    for (int a = 0; a < n; ++a) {
      check.value(circle_dist(from_map[a], from_marking[a]));
    }
  }

  // Fiber over one orbit point of the symmetric four-wave map: exactly k
  // markings, pairwise distinct, all with small witness residuals and the
  // same canonical representative.
  CircleDiffeo h4 = random_diffeo(rng);
  CircleDiffeo r4 = random_diffeo(rng);
  std::vector<FiberPoint> fiber =
      fiber_enumerate(fx.n4.map, fx.n4.analysis, fx.sym4, h4, r4);
  check.require(static_cast<int>(fiber.size()) == fx.sym4.k);
  for (std::size_t i = 0; i < fiber.size(); ++i) {
    check.require(fiber[i].residual <= 1e-7);
    for (std::size_t j = i + 1; j < fiber.size(); ++j) {
      check.require(!(fiber[i].marking == fiber[j].marking));
    }
    Configuration rep = canonical_representative(fiber[i].marking, 4);
    Configuration rep0 = canonical_representative(fiber[0].marking, 4);
    for (int a = 0; a < 4; ++a) check.value(circle_dist(rep[a], rep0[a]));
  }
  return {12, "orbit diagram commutativity", check.worst <= tol, check.worst,
          tol,
          "re-analysis matches markings; fiber has k = " +
              std::to_string(fx.sym4.k) + " sheets"};
}

CriterionResult c13_marking_round_trip(const Fixtures& fx, Rng& rng,
                                       double tol) {
  Check check;
  const CircleMap& f = fx.n2.map;
  const int n = 2;
  for (int trial = 0; trial < 50; ++trial) {
    CircleDiffeo h = random_diffeo(rng);
    OrbitPoint g = make_orbit_point(f, h, CircleDiffeo::identity());
    Configuration x = random_config_wide(n, rng);
    auto [attached, marking] = attach_marking(g, x);
    check.require(marking == x);
    OrbitPoint back = detach_marking(attached, x);
    for (int i = 0; i < 256; ++i) {
      Angle t(grid_point(i, 256));
      check.value(circle_dist(back.map(t), g.map(t)));
    }
    if (trial < 5) {
      Configuration cfg = exceptional_config(attached);
      Configuration rep = canonical_representative(x, n);
      for (int a = 0; a < n; ++a) check.value(circle_dist(cfg[a], rep[a]));
    }
  }
  return {13, "marking homeomorphism round trip", check.worst <= tol,
          check.worst, tol, "attach then detach returns the orbit point"};
}

CriterionResult failed(int id, const std::string& name, const std::string& why,
                       double tol) {
  return {id, name, false, std::numeric_limits<double>::infinity(), tol, why};
}

}  // namespace

std::vector<CriterionResult> run_all(const Options& options) {
  auto tol = [&](double fallback) {
    return options.tolerance_override.value_or(fallback);
  };
  std::vector<CriterionResult> results;
  auto guard = [&](int id, const char* name, double t, auto&& fn) {
    try {
      results.push_back(fn());
    } catch (const std::exception& e) {
      results.push_back(failed(id, name, std::string("exception: ") + e.what(), t));
    }
  };

  std::optional<Fixtures> fx;
  try {
    fx.emplace();
  } catch (const std::exception& e) {
    std::string why = std::string("fixture construction failed: ") + e.what();
    const char* names[] = {"target diffeomorphism lifting",
                           "stabilizer section homomorphism",
                           "flow against closed-form lift",
                           "global field parity",
                           "rotation symmetry detection",
                           "orbit diagram commutativity",
                           "marking homeomorphism round trip"};
    (void)names;
    for (int id = 1; id <= 13; ++id) {
      results.push_back(failed(id, "suite", why, 0.0));
    }
    return results;
  }

  auto rng_for = [&](int id) {
    return Rng(options.seed * 1000003ULL + static_cast<std::uint64_t>(id));
  };

  guard(1, "configuration chart round trip", tol(1e-12), [&] {
    Rng rng = rng_for(1);
    return c1_chart_round_trip(rng, tol(1e-12));
  });
  guard(2, "cyclic shift orientation parity", tol(0.0), [&] {
    return c2_shift_orientation_parity(tol(0.0));
  });
  guard(3, "monotone interpolant properties", tol(1e-10), [&] {
    Rng rng = rng_for(3);
    return c3_interpolant_properties(rng, tol(1e-10));
  });
  guard(4, "section of the evaluation map", tol(1e-10), [&] {
    Rng rng = rng_for(4);
    return c4_section_of_evaluation(rng, tol(1e-10));
  });
  guard(5, "target diffeomorphism lifting", tol(1e-7), [&] {
    Rng rng = rng_for(5);
    return c5_target_lifting(*fx, rng, tol(1e-7), options.grid);
  });
  guard(6, "stabilizer section homomorphism", tol(1e-7), [&] {
    Rng rng = rng_for(6);
    return c6_section_homomorphism(*fx, rng, tol(1e-7), options.grid);
  });
  guard(7, "flow against closed-form lift", tol(1e-6), [&] {
    Rng rng = rng_for(7);
    return c7_flow_cross_validation(*fx, rng, tol(1e-6));
  });
  guard(8, "global field parity", tol(1e-9), [&] {
    return c8_parity_obstruction(*fx, tol(1e-9));
  });
  guard(9, "fibration case", tol(1e-12), [&] {
    Rng rng = rng_for(9);
    return c9_fibration_case(rng, tol(1e-12));
  });
  guard(10, "rotation symmetry detection", tol(1e-8), [&] {
    return c10_symmetry_detection(*fx, tol(1e-8), options.grid);
  });
  guard(11, "value-fixing subgroup contraction", tol(1e-12), [&] {
    Rng rng = rng_for(11);
    return c11_contraction(rng, tol(1e-12));
  });
  guard(12, "orbit diagram commutativity", tol(1e-9), [&] {
    Rng rng = rng_for(12);
    return c12_diagram_commutativity(*fx, rng, tol(1e-9));
  });
  guard(13, "marking homeomorphism round trip", tol(1e-9), [&] {
    Rng rng = rng_for(13);
    return c13_marking_round_trip(*fx, rng, tol(1e-9));
  });
  return results;
}

std::string format_line(const CriterionResult& r) {
  std::string line = r.passed ? "[PASS] " : "[FAIL] ";
  if (r.id < 10) line += "0";
  line += std::to_string(r.id) + " " + r.name + ": measured=";
  internal::append_g17(line, r.measured);
  line += " tol=";
  internal::append_g17(line, r.tolerance);
  if (!r.detail.empty()) line += " (" + r.detail + ")";
  return line;
}

std::string report_json(const std::vector<CriterionResult>& results,
                        const Options& options) {
  std::string out = "{\"seed\":" + std::to_string(options.seed);
  out += ",\"grid\":" + std::to_string(options.grid);
  out += ",\"criteria\":[";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const CriterionResult& r = results[i];
    if (i) out += ",";
    out += "{\"id\":" + std::to_string(r.id);
    out += ",\"name\":\"" + r.name + "\"";
    out += ",\"passed\":";
    out += r.passed ? "true" : "false";
    out += ",\"measured\":";
    internal::append_g17(out, r.measured);
    out += ",\"tolerance\":";
    internal::append_g17(out, r.tolerance);
    out += ",\"detail\":\"" + r.detail + "\"}";
  }
  out += "]}";
  return out;
}

}  // namespace s1map::selfcheck
