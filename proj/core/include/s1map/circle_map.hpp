#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "s1map/angle.hpp"
#include "s1map/diffeo.hpp"

namespace s1map {

/// Trigonometric-polynomial lift data:
/// L(t) = degree t + constant + sum_j (cos_coeffs[j-1] cos 2 pi j t
///                                     + sin_coeffs[j-1] sin 2 pi j t).
struct FourierData {
  int degree = 1;
  double constant = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
};

/// Lift of a smooth circle-valued map on the circle:
/// L(t + 1) = L(t) + degree.
class MapExpr {
 public:
  virtual ~MapExpr() = default;
  virtual double lift(double t) const = 0;
  virtual double lift_d1(double t) const = 0;
  virtual double lift_d2(double t) const = 0;
  virtual double lift_d3(double t) const;  // default: central FD of lift_d2
  virtual int degree() const = 0;
  virtual const FourierData* fourier() const { return nullptr; }
};

/// A smooth map f: S^1 -> S^1, either a Fourier lift or a composition of a
/// base map with diffeomorphisms on both sides. Immutable value type.
class CircleMap {
 public:
  static CircleMap fourier(FourierData data);
  static CircleMap from_expr(std::shared_ptr<const MapExpr> expr);

  double lift(double t) const { return expr_->lift(t); }
  double lift_d1(double t) const { return expr_->lift_d1(t); }
  double lift_d2(double t) const { return expr_->lift_d2(t); }
  double lift_d3(double t) const { return expr_->lift_d3(t); }
  int degree() const { return expr_->degree(); }
  Angle operator()(Angle x) const { return Angle(lift(x.turns())); }

  /// R o f (acts on the target circle).
  CircleMap postcompose(const CircleDiffeo& r) const;
  /// f o h (acts on the domain circle).
  CircleMap precompose(const CircleDiffeo& h) const;

  const FourierData* fourier_data() const { return expr_->fourier(); }
  const std::shared_ptr<const MapExpr>& expr() const { return expr_; }

 private:
  explicit CircleMap(std::shared_ptr<const MapExpr> expr);
  std::shared_ptr<const MapExpr> expr_;
};

struct CriticalPoint {
  Angle point;
  double second_derivative;  // of the lift, nonzero for a Morse map
};

struct LevelPoint {
  Angle point;
  bool critical;
};

/// Full critical data of a Morse circle-valued map: isolated critical
/// points, the finitely many exceptional (critical) values, and each level
/// as the complete preimage of its value.
struct MapAnalysis {
  int degree = 0;
  bool morse = false;
  std::vector<CriticalPoint> critical_points;       // sorted by position
  std::vector<Angle> exceptional_values;            // ascending in [0, 1)
  std::vector<std::vector<LevelPoint>> levels;      // parallel to values

  int n() const { return static_cast<int>(exceptional_values.size()); }
  /// All level points merged and sorted by position.
  std::vector<Angle> all_level_points() const;
};

struct AnalyzeOptions {
  int scan_resolution = 4096;
  double refine_tol = 1e-12;
  double merge_tol = 1e-9;   // critical values closer than this coincide
  double morse_tol = 1e-8;   // |L''| below this rejects the analysis
};

/// Locates the critical points of the lift derivative by a sign-change scan
/// refined by bisection, merges critical values into exceptional values and
/// collects every level. Throws NonMorseError when any critical point fails
/// the second-derivative test.
MapAnalysis analyze(const CircleMap& f, const AnalyzeOptions& opts = {});

struct NormalizedMap {
  CircleDiffeo straightening;  // R with R(v_a) = a/n for the sorted values
  CircleMap map;               // R o f
  MapAnalysis analysis;        // analysis of R o f
};

/// Moves the exceptional values onto the uniform base points a/n by
/// post-composing with the inverse of the interpolating section. n >= 1.
NormalizedMap normalize_exceptional(const CircleMap& f, const MapAnalysis& a);

enum class CritKind { LocalMax, LocalMin };

struct WordLetter {
  Angle position;  // critical point, domain order
  Angle value;
  CritKind kind;
};

/// Cyclic sequence of (value, kind) in domain order; kinds must alternate
/// for a Morse map. Combinatorial invariant of right equivalence.
struct CyclicWord {
  std::vector<WordLetter> letters;
};

CyclicWord cyclic_word(const MapAnalysis& analysis);

/// Searches for an orientation-preserving h with g = f o h by aligning the
/// cyclic words and inverting f branch by branch. Returns the witness
/// diffeomorphism or nullopt when the words do not match.
std::optional<CircleDiffeo> right_equivalence(const CircleMap& f,
                                              const MapAnalysis& fa,
                                              const CircleMap& g,
                                              const MapAnalysis& ga,
                                              double value_tol = 1e-9,
                                              double residual_tol = 1e-8,
                                              int grid = 2048);

/// The subgroup of rotations r_{l/n} with r o f right-equivalent to f.
struct SymmetryInfo {
  int n = 0;
  int k = 1;                        // order of the detected subgroup
  int d = 0;                        // n / k
  int generator_shift = 0;          // least positive successful l (0 if none)
  std::vector<int> successful_shifts;  // includes 0
};

/// Tests every shift l = 1..n-1 against f (which must have its exceptional
/// values at the base points a/n). The successful set must form a subgroup
/// of Z_n; a non-subgroup set signals a tolerance failure and throws.
SymmetryInfo symmetry_group(const CircleMap& f_normalized,
                            const MapAnalysis& analysis);

}  // namespace s1map
