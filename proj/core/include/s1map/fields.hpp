#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "s1map/angle.hpp"
#include "s1map/circle_map.hpp"
#include "s1map/diffeo.hpp"

namespace s1map {

/// Per-arc building blocks of a compatible field for a Morse map with n >= 1
/// exceptional values p_0, ..., p_{n-1} (cyclically sorted):
///  - the regular field on the preimage of the open arc (p_a, p_a+1),
///    normalized so the map value moves at unit speed;
///  - the level field near the preimage of p_a, normalized so the map value
///    obeys v' = v exactly (v measured from p_a).
class LocalFields {
 public:
  LocalFields(CircleMap f, MapAnalysis analysis);

  int arc_count() const { return n_; }
  /// Radius, in value space, of the level neighborhoods: 1/(4n).
  double value_radius() const { return radius_; }

  bool in_regular_domain(int a, Angle x) const;
  bool in_level_neighborhood(int a, Angle x) const;

  /// G_a(x) = 1 / L'(x); throws std::domain_error outside the arc preimage.
  double regular(int a, Angle x) const;

  /// F_a(x) = (f(x) - p_a) / L'(x), with the removable singularity at a
  /// critical point evaluated by its Taylor quotient. Throws outside the
  /// level neighborhood.
  double level(int a, Angle x) const;

  const CircleMap& map() const { return f_; }
  const MapAnalysis& analysis() const { return analysis_; }

 private:
  double signed_offset(int a, Angle x) const;  // f(x) - p_a in (-1/2, 1/2]

  CircleMap f_;
  MapAnalysis analysis_;
  int n_;
  double radius_;
};

enum class LevelClass { Attractive, Reflective };

/// A single compatible vector field on the whole circle, glued from the
/// per-arc pieces with alternating signs (n even), or the unobstructed
/// global field 1/L' when the map has no critical values (n = 0).
class CompatibleField {
 public:
  /// Field value V(x).
  double operator()(Angle x) const;
  /// df(V)(x) = L'(x) V(x), measured, not assumed.
  double df(Angle x) const;
  /// Patch id: arc index b >= 0 in a pure regular zone, -1-a inside the
  /// blend zone of level a.
  int patch(Angle x) const;
  /// Weight of the level field in [0, 1]; 1 on the inner third of the level
  /// neighborhood, 0 outside two thirds of it.
  double blend_weight(Angle x) const;

  const std::vector<LevelClass>& level_classes() const { return classes_; }
  const LocalFields* local() const { return local_ ? &*local_ : nullptr; }
  const CircleMap& map() const { return f_; }

 private:
  friend CompatibleField global_field(const CircleMap&, const MapAnalysis&);
  CompatibleField(CircleMap f, MapAnalysis analysis);
  struct Zone {
    int level = -1;   // level index when blending, else -1
    int arc = -1;     // arc index when pure
    double weight = 0.0;
  };
  Zone classify(Angle x) const;

  CircleMap f_;
  MapAnalysis analysis_;
  std::optional<LocalFields> local_;   // absent when n = 0
  std::vector<LevelClass> classes_;
};

/// Builds the global compatible field. Throws ParityObstruction when the
/// number of exceptional values is odd (attractive and reflective levels
/// must alternate around the circle, which forces an even count).
CompatibleField global_field(const CircleMap& f, const MapAnalysis& analysis);

/// Adaptive embedded Runge-Kutta solution of x' = V(x) at the given time,
/// on the lift coordinate. tol is the local step tolerance.
Angle flow_integrate(const std::function<double(Angle)>& field, Angle x,
                     double time, double tol = 1e-9);

/// The point-dependent-time shift along the flow: x -> flow(x, alpha(x)).
std::function<Angle(Angle)> shift_map(std::function<double(Angle)> field,
                                      std::function<double(Angle)> alpha,
                                      double tol = 1e-9);

/// Travel times to carry f(x) to R(f(x)) along the two local flows. Both
/// depend on f(x) only. arc_time rides the regular field (unit value speed),
/// level_time rides the level field (exponential value dynamics).
struct ShiftTimes {
  std::optional<double> arc_time;    // undefined on exceptional levels
  std::optional<double> level_time;  // defined off-level near a level
  int arc_index = -1;
  int level_index = -1;
};

ShiftTimes shift_times(const CircleMap& f, const MapAnalysis& analysis,
                       const CircleDiffeo& r, Angle x);

/// Lifts a target diffeomorphism R fixing every exceptional value to a
/// domain diffeomorphism h with R o f = f o h: h fixes every level point and
/// inverts f branch-wise between them. For n = 0 any orientation-preserving
/// R is accepted. Throws std::invalid_argument when R moves a value.
CircleDiffeo lift_target_diffeo(const CircleMap& f, const MapAnalysis& analysis,
                                const CircleDiffeo& r);

struct StabilizerElement {
  CircleDiffeo domain_side;  // h
  CircleDiffeo target_side;  // R
  double residual = 0.0;     // sup-grid distance of R o f from f o h
};

/// sup over a uniform grid of circle_dist(R(f(x)), f(h(x))).
double conjugacy_residual(const CircleMap& f, const CircleDiffeo& h,
                          const CircleDiffeo& r, int grid = 2048);

/// The section R -> (lift_target_diffeo(R), R) with measured residual.
StabilizerElement stabilizer_section(const CircleMap& f,
                                     const MapAnalysis& analysis,
                                     const CircleDiffeo& r, int grid = 2048);

struct PeriodicPath {
  CircleDiffeo periodic_target;            // the rotation by l/n
  std::vector<StabilizerElement> samples;  // path from (h-bar, R-bar) to (h, R)
};

/// For a stabilizer element whose target side permutes the exceptional
/// values by l != 0: replaces it by the rotation by l/n and connects the two
/// elements through the contraction of the value-fixing subgroup. Samples at
/// s = j/steps, j = 0..steps.
PeriodicPath periodic_representative_path(const CircleMap& f,
                                          const MapAnalysis& analysis,
                                          const StabilizerElement& element,
                                          int steps, int grid = 2048);

}  // namespace s1map
