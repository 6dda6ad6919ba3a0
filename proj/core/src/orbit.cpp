#include "s1map/orbit.hpp"

#include <cmath>
#include <stdexcept>

#include "s1map/errors.hpp"

namespace s1map {

OrbitPoint make_orbit_point(const CircleMap& f, const CircleDiffeo& h,
                            const CircleDiffeo& r) {
  return OrbitPoint{f.postcompose(r).precompose(h.inverse()), h, r};
}

Configuration exceptional_config(const OrbitPoint& g,
                                 const AnalyzeOptions& opts) {
  MapAnalysis a = analyze(g.map, opts);
  if (a.n() < 1) {
    throw std::invalid_argument(
        "exceptional_config: orbit point has no exceptional values");
  }
  Configuration values(a.exceptional_values);
  return canonical_representative(values, a.n());
}

std::pair<OrbitPoint, Configuration> marked_orbit(const CircleDiffeo& h,
                                                  const CircleDiffeo& r,
                                                  const CircleMap& f, int n) {
  if (n < 1) throw std::invalid_argument("marked_orbit: n must be >= 1");
  std::vector<Angle> marks;
  marks.reserve(n);
  for (int a = 0; a < n; ++a) {
    marks.push_back(r(Angle(static_cast<double>(a) / n)));
  }
  return {make_orbit_point(f, h, r), Configuration(std::move(marks))};
}

std::pair<OrbitPoint, Configuration> attach_marking(const OrbitPoint& g,
                                                    const Configuration& x) {
  if (!in_base_component(x)) {
    throw std::invalid_argument(
        "attach_marking: configuration not in the base component");
  }
  CircleDiffeo section = interpolating_diffeo(x);
  OrbitPoint moved{g.map.postcompose(section), g.domain_side,
                   CircleDiffeo::compose(section, g.target_side)};
  return {moved, x};
}

OrbitPoint detach_marking(const OrbitPoint& g_prime, const Configuration& x) {
  if (!in_base_component(x)) {
    throw std::invalid_argument(
        "detach_marking: configuration not in the base component");
  }
  CircleDiffeo inv = interpolating_diffeo(x).inverse();
  return OrbitPoint{g_prime.map.postcompose(inv), g_prime.domain_side,
                    CircleDiffeo::compose(inv, g_prime.target_side)};
}

StructureReport orbit_report(const MapAnalysis& analysis,
                             const std::optional<SymmetryInfo>& symmetry) {
  StructureReport report;
  report.n = analysis.n();
  if (report.n == 0) {
    report.k = 0;
    report.d = 0;
    report.product_form = "Orb_M = Orb_MS";
    report.note =
        "no critical values: the map is a fibration and every "
        "orientation-preserving target diffeomorphism lifts to the domain";
    report.k_is_lower_bound = false;
    return report;
  }
  if (!symmetry) {
    throw std::invalid_argument(
        "orbit_report: symmetry information required when n >= 1");
  }
  report.k = symmetry->k;
  report.d = symmetry->d;
  report.twist = twist_type(report.n, report.k);
  std::string tail = "ℝ^" + std::to_string(report.n - 1);  // R^{n-1}
  if (report.twist == TwistType::Twisted) {
    report.product_form = "Orb_M × S¹ ×̃ " + tail;
  } else {
    report.product_form = "Orb_M × S¹ × " + tail;
  }
  report.note =
      "k is the order of the rotation subgroup detected by the conjugacy "
      "search and is a lower bound for the full symmetry";
  return report;
}

std::vector<FiberPoint> fiber_enumerate(const CircleMap& f_normalized,
                                        const MapAnalysis& analysis,
                                        const SymmetryInfo& symmetry,
                                        const CircleDiffeo& h,
                                        const CircleDiffeo& r) {
  const int n = analysis.n();
  if (n < 1) {
    throw std::invalid_argument("fiber_enumerate: needs exceptional values");
  }
  std::vector<FiberPoint> fiber;
  fiber.reserve(symmetry.k);
  for (int j = 0; j < symmetry.k; ++j) {
    int shift = (j * symmetry.d) % n;
    CircleDiffeo rot =
        CircleDiffeo::rotation(Angle(static_cast<double>(shift) / n));
    CircleMap rotated = f_normalized.postcompose(rot);
    // Witness h_j with rot o f = f o h_j, from the detected symmetry.
    std::optional<CircleDiffeo> hj =
        j == 0 ? std::optional<CircleDiffeo>(CircleDiffeo::identity())
               : right_equivalence(f_normalized, analysis, rotated,
                                   analyze(rotated));
    if (!hj) {
      throw NumericError(
          "fiber_enumerate: detected symmetry shift lost its witness");
    }
    CircleDiffeo hat_h = CircleDiffeo::compose(h, *hj);
    CircleDiffeo hat_r = CircleDiffeo::compose(r, rot);
    auto [point, marking] = marked_orbit(hat_h, hat_r, f_normalized, n);
    double residual = conjugacy_residual(f_normalized, *hj, rot);
    fiber.push_back(
        FiberPoint{hat_h, hat_r, marking, residual});
    (void)point;
  }
  return fiber;
}

}  // namespace s1map
