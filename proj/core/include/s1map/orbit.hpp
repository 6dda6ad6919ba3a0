#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "s1map/circle_map.hpp"
#include "s1map/config.hpp"
#include "s1map/diffeo.hpp"
#include "s1map/fields.hpp"

namespace s1map {

/// A point of the orbit of f under (h, R) . f = R o f o h^-1, kept as a
/// composed expression together with the pair that produced it, so that
/// re-analysis goes through exact composed lifts.
struct OrbitPoint {
  CircleMap map;
  CircleDiffeo domain_side;  // h
  CircleDiffeo target_side;  // R
};

OrbitPoint make_orbit_point(const CircleMap& f, const CircleDiffeo& h,
                            const CircleDiffeo& r);

/// The exceptional values of the orbit point, re-analyzed from the composed
/// lift and reduced to the canonical representative of their full cyclic
/// orbit. Requires a Morse composite with n >= 1.
Configuration exceptional_config(const OrbitPoint& g,
                                 const AnalyzeOptions& opts = {});

/// The pair (R o f o h^-1; R(p_0), ..., R(p_{n-1})) for the base points
/// p_a = a/n; the marking configuration always lies in the base component.
std::pair<OrbitPoint, Configuration> marked_orbit(const CircleDiffeo& h,
                                                  const CircleDiffeo& r,
                                                  const CircleMap& f, int n);

/// Attaches a marking: (g, x) -> (section(x) o g, x), where section(x) is
/// the interpolating diffeomorphism of x. The first component then has
/// exceptional configuration x. g must carry its values at the base points.
std::pair<OrbitPoint, Configuration> attach_marking(const OrbitPoint& g,
                                                    const Configuration& x);

/// Inverse of attach_marking: recovers g from (g', x).
OrbitPoint detach_marking(const OrbitPoint& g_prime, const Configuration& x);

/// Homeomorphism type of the full orbit relative to the domain-only orbit.
struct StructureReport {
  int n = 0;
  int k = 1;
  int d = 0;
  TwistType twist = TwistType::Trivial;
  std::string product_form;
  std::string note;
  bool k_is_lower_bound = true;  // k is detected by rotation search
};

StructureReport orbit_report(const MapAnalysis& analysis,
                             const std::optional<SymmetryInfo>& symmetry);

struct FiberPoint {
  CircleDiffeo domain_side;
  CircleDiffeo target_side;
  Configuration marking;
  double residual;
};

/// Enumerates the k markings over one orbit point: the configurations
/// sigma^{jd}(c) realized by composing with the periodic rotation witnesses,
/// each verified by re-analysis of the composed map. f must be normalized.
std::vector<FiberPoint> fiber_enumerate(const CircleMap& f_normalized,
                                        const MapAnalysis& analysis,
                                        const SymmetryInfo& symmetry,
                                        const CircleDiffeo& h,
                                        const CircleDiffeo& r);

}  // namespace s1map
