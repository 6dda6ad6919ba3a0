#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "s1map/angle.hpp"
#include "s1map/config.hpp"

namespace s1map {

/// Node of a diffeomorphism expression tree. A node exposes one fixed lift
/// L: R -> R, strictly increasing with L(t + 1) = L(t) + 1; which integer
/// translate it is does not matter, CircleDiffeo normalizes on top.
class DiffeoNode {
 public:
  virtual ~DiffeoNode() = default;
  virtual double lift(double t) const = 0;
  virtual double lift_d1(double t) const = 0;
  virtual double lift_d2(double t) const = 0;
  /// Appends a compact JSON description of the constructor to out.
  virtual void describe(std::string& out) const = 0;
};

/// An orientation-preserving diffeomorphism of the circle, stored as an
/// expression over primitive constructors (rotation, monotone interpolant,
/// composition, inverse, convex combination of lifts). Group operations are
/// structural; numerics enter only at evaluation. The exposed lift is the
/// one with lift(0) in [0, 1). Immutable and safe to share across threads.
class CircleDiffeo {
 public:
  CircleDiffeo();  // identity

  static CircleDiffeo identity();
  static CircleDiffeo rotation(Angle phi);

  /// Smooth monotone interpolant fixing 0 and sending the knot a/n to the
  /// a-th target coordinate, a = 1..n-1; identity-flat at every knot.
  /// With uniform targets (a/n -> a/n) this is exactly the identity.
  static CircleDiffeo monotone_lift(const SimplexPoint& targets, int n);

  /// General form: sends the a-th source point to the a-th target point,
  /// derivative exactly 1 at every source point. Both tuples must be
  /// positively cyclically ordered and of equal size.
  static CircleDiffeo monotone_between(const Configuration& source,
                                       const Configuration& target);

  static CircleDiffeo compose(const CircleDiffeo& outer,
                              const CircleDiffeo& inner);

  /// Lift (1-s) La + s Lb of the two normalized lifts; s in [0, 1].
  static CircleDiffeo convex_mix(const CircleDiffeo& a, const CircleDiffeo& b,
                                 double s);

  /// Wraps an externally defined node (used by the map-lifting machinery).
  static CircleDiffeo from_node(std::shared_ptr<const DiffeoNode> node);

  CircleDiffeo inverse() const;

  Angle operator()(Angle x) const;
  double lift(double t) const;     // normalized lift
  double lift_d1(double t) const;  // strictly positive
  double lift_d2(double t) const;

  /// Solves (*this)(x) = y on the strictly increasing lift.
  Angle inverse_eval(Angle y) const;

  /// JSON text describing the constructor tree.
  std::string provenance() const;

  const std::shared_ptr<const DiffeoNode>& node() const { return node_; }

 private:
  explicit CircleDiffeo(std::shared_ptr<const DiffeoNode> node);

  std::shared_ptr<const DiffeoNode> node_;
  double offset_ = 0.0;  // integer making lift(0) land in [0, 1)
};

/// Values of g at the n base points: (g(0), g(1/n), ..., g((n-1)/n)).
/// Always lands in the base component.
Configuration evaluation_map(const CircleDiffeo& g, int n);

/// Section of the evaluation map: a diffeomorphism sending a/n to the a-th
/// point of the target configuration; the base configuration maps to the
/// identity. Composition of a rotation with a monotone interpolant.
CircleDiffeo interpolating_diffeo(const Configuration& target);

/// g fixes each base point a/n (within tol); vacuously true for n = 0.
bool fixes_exceptional(const CircleDiffeo& g, int n, double tol = 1e-10);

/// The shift l with g(a/n) = (a+l)/n for all a, if one exists.
std::optional<int> permutes_exceptional(const CircleDiffeo& g, int n,
                                        double tol = 1e-10);

/// Point on the straight-line contraction of the normalized lift to the
/// identity: lift (1-s) L + s t. Requires g to fix every base point, which
/// pins L(0) = 0, so the whole path fixes them too. s in [0, 1].
CircleDiffeo contract_toward_identity(const CircleDiffeo& g, double s, int n);

struct DiffeoSample {
  double t;
  double value;  // lift(t)
  double deriv;  // lift_d1(t)
};

/// Uniform sample table on [0, 1), resolution rows.
std::vector<DiffeoSample> sample_table(const CircleDiffeo& g, int resolution);

}  // namespace s1map
