#include "s1map/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "s1map/errors.hpp"
#include "internal/bump.hpp"
#include "internal/root.hpp"

namespace s1map {

namespace {

// Index a of the greatest value p_a <= w in cyclic order; values ascending.
int arc_index_of(const std::vector<Angle>& values, Angle w) {
  const int n = static_cast<int>(values.size());
  int lo = 0;
  for (int a = 0; a < n; ++a) {
    if (values[a].turns() <= w.turns()) lo = a;
  }
  if (w.turns() < values.front().turns()) lo = n - 1;  // wrap interval
  return lo;
}

int nearest_value_index(const std::vector<Angle>& values, Angle w) {
  int best = 0;
  double best_dist = 1.0;
  for (int a = 0; a < static_cast<int>(values.size()); ++a) {
    double d = circle_dist(w, values[a]);
    if (d < best_dist) {
      best_dist = d;
      best = a;
    }
  }
  return best;
}

}  // namespace

LocalFields::LocalFields(CircleMap f, MapAnalysis analysis)
    : f_(std::move(f)), analysis_(std::move(analysis)) {
  n_ = analysis_.n();
  if (n_ < 1) {
    throw std::invalid_argument("LocalFields: map has no exceptional values");
  }
  radius_ = 1.0 / (4.0 * n_);
}

double LocalFields::signed_offset(int a, Angle x) const {
  return angle_sub(f_(x), analysis_.exceptional_values[a]);
}

bool LocalFields::in_regular_domain(int a, Angle x) const {
  if (a < 0 || a >= n_) return false;
  Angle w = f_(x);
  if (n_ == 1) {
    return !(w == analysis_.exceptional_values[0]);
  }
  Angle pa = analysis_.exceptional_values[a];
  Angle pb = analysis_.exceptional_values[(a + 1) % n_];
  return Arc(pa, pb).contains(w);
}

bool LocalFields::in_level_neighborhood(int a, Angle x) const {
  if (a < 0 || a >= n_) return false;
  return std::fabs(signed_offset(a, x)) < radius_;
}

double LocalFields::regular(int a, Angle x) const {
  if (!in_regular_domain(a, x)) {
    throw std::domain_error("LocalFields::regular: point outside the arc preimage");
  }
  return 1.0 / f_.lift_d1(x.turns());
}

double LocalFields::level(int a, Angle x) const {
  if (!in_level_neighborhood(a, x)) {
    throw std::domain_error(
        "LocalFields::level: point outside the level neighborhood");
  }
  double v = signed_offset(a, x);
  // Near a critical point both v and L' vanish; switch to the Taylor
  // quotient v / L' = s/2 (1 - (L'''/6L'') s) + O(s^3), s the signed
  // distance to the critical point.
  for (const CriticalPoint& cp : analysis_.critical_points) {
    double s = angle_sub(x, cp.point);
    if (std::fabs(s) < 1e-5 &&
        circle_dist(f_(cp.point), analysis_.exceptional_values[a]) < 1e-6) {
      double c = cp.point.turns();
      double correction = f_.lift_d3(c) / (6.0 * cp.second_derivative);
      return 0.5 * s * (1.0 - correction * s);
    }
  }
  return v / f_.lift_d1(x.turns());
}

CompatibleField::Zone CompatibleField::classify(Angle x) const {
  Zone zone;
  if (analysis_.n() == 0) {
    zone.arc = 0;
    return zone;
  }
  const std::vector<Angle>& values = analysis_.exceptional_values;
  Angle w = f_(x);
  int a = nearest_value_index(values, w);
  double v = angle_sub(w, values[a]);
  double r = local_->value_radius();
  if (std::fabs(v) < r) {
    // Pure level field on the inner third, pure regular outside two thirds.
    double u = (2.0 * r / 3.0 - std::fabs(v)) / (r / 3.0);
    double weight = internal::smooth_step(u);
    zone.arc = v > 0.0 ? a : (a + analysis_.n() - 1) % analysis_.n();
    if (v == 0.0) zone.arc = -1;  // on the level itself
    if (weight > 0.0) {
      zone.level = a;
      zone.weight = weight;
    }
    return zone;
  }
  zone.arc = arc_index_of(values, w);
  return zone;
}

double CompatibleField::operator()(Angle x) const {
  if (analysis_.n() == 0) {
    return 1.0 / f_.lift_d1(x.turns());
  }
  Zone zone = classify(x);
  auto arc_sign = [](int b) { return b % 2 == 0 ? -1.0 : 1.0; };
  if (zone.level < 0) {
    return arc_sign(zone.arc) / f_.lift_d1(x.turns());
  }
  double sigma = zone.level % 2 == 0 ? -1.0 : 1.0;
  double value = zone.weight * sigma * local_->level(zone.level, x);
  if (zone.weight < 1.0) {
    value += (1.0 - zone.weight) * arc_sign(zone.arc) *
             local_->regular(zone.arc, x);
  }
  return value;
}

double CompatibleField::df(Angle x) const {
  return f_.lift_d1(x.turns()) * (*this)(x);
}

int CompatibleField::patch(Angle x) const {
  if (analysis_.n() == 0) return 0;
  Zone zone = classify(x);
  return zone.level >= 0 ? -1 - zone.level : zone.arc;
}

double CompatibleField::blend_weight(Angle x) const {
  if (analysis_.n() == 0) return 0.0;
  return classify(x).weight;
}

CompatibleField::CompatibleField(CircleMap f, MapAnalysis analysis)
    : f_(std::move(f)), analysis_(std::move(analysis)) {}

CompatibleField global_field(const CircleMap& f, const MapAnalysis& analysis) {
  const int n = analysis.n();
  if (n % 2 == 1) {
    throw ParityObstruction(
        "global_field: " + std::to_string(n) +
        " exceptional levels; attractive and reflective levels must "
        "alternate, so a global compatible field needs an even count");
  }
  CompatibleField field(f, analysis);
  if (n >= 1) {
    field.local_.emplace(f, analysis);
    field.classes_.reserve(n);
    for (int a = 0; a < n; ++a) {
      field.classes_.push_back(a % 2 == 0 ? LevelClass::Attractive
                                          : LevelClass::Reflective);
    }
  }
  return field;
}

Angle flow_integrate(const std::function<double(Angle)>& field, Angle x,
                     double time, double tol) {
  // Cash-Karp embedded RK5(4) with standard step control, on the lift line.
  static const double b[6][5] = {
      {0, 0, 0, 0, 0},
      {1.0 / 5, 0, 0, 0, 0},
      {3.0 / 40, 9.0 / 40, 0, 0, 0},
      {3.0 / 10, -9.0 / 10, 6.0 / 5, 0, 0},
      {-11.0 / 54, 5.0 / 2, -70.0 / 27, 35.0 / 27, 0},
      {1631.0 / 55296, 175.0 / 512, 575.0 / 13824, 44275.0 / 110592,
       253.0 / 4096}};
  static const double c5[6] = {37.0 / 378,  0, 250.0 / 621,
                               125.0 / 594, 0, 512.0 / 1771};
  static const double c4[6] = {2825.0 / 27648,  0,
                               18575.0 / 48384, 13525.0 / 55296,
                               277.0 / 14336,   1.0 / 4};

  if (time == 0.0) return x;
  double y = x.turns();
  double remaining = time;
  double h = time;
  const double sign = time > 0.0 ? 1.0 : -1.0;
  for (int step = 0; step < 1000000; ++step) {
    if (remaining == 0.0) break;
    if (std::fabs(h) > std::fabs(remaining)) h = remaining;
    double k[6];
    k[0] = field(Angle(y));
    for (int stage = 1; stage < 6; ++stage) {
      double yi = y;
      for (int j = 0; j < stage; ++j) yi += h * b[stage][j] * k[j];
      k[stage] = field(Angle(yi));
    }
    double y5 = y, y4 = y;
    for (int stage = 0; stage < 6; ++stage) {
      y5 += h * c5[stage] * k[stage];
      y4 += h * c4[stage] * k[stage];
    }
    double err = std::fabs(y5 - y4);
    if (err <= tol) {
      y = y5;
      remaining -= h;
      if (remaining * sign <= 0.0) break;
      double grow = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
      h *= std::min(5.0, std::max(1.0, grow));
    } else {
      h *= std::max(0.2, 0.9 * std::pow(tol / err, 0.25));
      if (std::fabs(h) < 1e-14 * std::fabs(time)) {
        throw NumericError("flow_integrate: step size underflow");
      }
    }
  }
  if (remaining * sign > 1e-12 * std::fabs(time)) {
    throw NumericError("flow_integrate: step budget exhausted");
  }
  return Angle(y);
}

std::function<Angle(Angle)> shift_map(std::function<double(Angle)> field,
                                      std::function<double(Angle)> alpha,
                                      double tol) {
  return [field = std::move(field), alpha = std::move(alpha), tol](Angle x) {
    return flow_integrate(field, x, alpha(x), tol);
  };
}

ShiftTimes shift_times(const CircleMap& f, const MapAnalysis& analysis,
                       const CircleDiffeo& r, Angle x) {
  if (analysis.n() < 1) {
    throw std::invalid_argument("shift_times: map has no exceptional values");
  }
  const std::vector<Angle>& values = analysis.exceptional_values;
  ShiftTimes out;
  Angle w = f(x);
  int a = nearest_value_index(values, w);
  out.level_index = a;
  double v = angle_sub(w, values[a]);
  if (std::fabs(v) <= 1e-13) {
    return out;  // on an exceptional level; both times undefined
  }
  out.arc_index = arc_index_of(values, w);
  // Regular flow moves the lifted value at unit speed.
  double wl = f.lift(x.turns());
  out.arc_time = r.lift(wl) - wl;
  // Level flow has v' = v exactly, so the time is the log ratio.
  double radius = 1.0 / (4.0 * analysis.n());
  if (std::fabs(v) < radius) {
    double v_target = angle_sub(r(w), values[a]);
    if ((v_target > 0.0) != (v > 0.0) || v_target == 0.0) {
      throw NumericError(
          "shift_times: target diffeomorphism crosses the level");
    }
    out.level_time = std::log(v_target / v);
  }
  return out;
}

namespace {

// Domain diffeomorphism with f o h = R o f: fixes every level point, and on
// each complementary interval (where f is a strictly monotone diffeo onto
// one value arc preserved by R) inverts f on that branch.
class ConjugacyLiftNode final : public DiffeoNode {
 public:
  ConjugacyLiftNode(CircleMap f, std::vector<double> level_points,
                    std::vector<double> critical_points, CircleDiffeo r)
      : f_(std::move(f)), e_(std::move(level_points)),
        crit_(std::move(critical_points)), r_(std::move(r)) {}

  double lift(double t) const override {
    double k = std::floor(t);
    double x0 = t - k;
    if (x0 >= 1.0) {
      x0 -= 1.0;
      k += 1.0;
    }
    if (e_.empty()) {
      double w = r_.lift(f_.lift(x0));
      return invert_monotone(w, x0) + k;
    }
    auto [left, right] = bracket(x0);
    if (x0 - left <= 1e-12 || right - x0 <= 1e-12) return t;  // level point
    double w0 = f_.lift(x0);
    double w = r_.lift(w0);
    if (w == w0) return t;  // identity target, keep it exact
    double flo = f_.lift(left), fhi = f_.lift(right);
    double wlo = std::min(flo, fhi), whi = std::max(flo, fhi);
    w = std::clamp(w, wlo, whi);
    if (w == flo) return left + k;
    if (w == fhi) return right + k;
    double z = internal::solve_bracketed(
        [&](double u) { return f_.lift(u) - w; },
        [&](double u) { return f_.lift_d1(u); }, left, right, 1e-14);
    return z + k;
  }

  double lift_d1(double t) const override {
    double k = std::floor(t);
    double x0 = t - k;
    if (x0 >= 1.0) x0 -= 1.0;
    double w0 = f_.lift(x0);
    if (!e_.empty()) {
      auto [left, right] = bracket(x0);
      if (x0 - left <= 1e-12 || right - x0 <= 1e-12) {
        double rd = r_.lift_d1(w0);
        return is_critical(x0) ? std::sqrt(rd) : rd;
      }
    }
    double z = lift(x0);
    return r_.lift_d1(w0) * f_.lift_d1(x0) / f_.lift_d1(z);
  }

  double lift_d2(double t) const override {
    const double h = 1e-6;
    return (lift_d1(t + h) - lift_d1(t - h)) / (2.0 * h);
  }

  void describe(std::string& out) const override {
    out += "{\"op\":\"conjugacy_lift\",\"levels\":" +
           std::to_string(e_.size()) + ",\"target\":";
    r_.node()->describe(out);
    out += "}";
  }

 private:
  // Level points flanking x0 in [0, 1), as reals with left <= x0 < right.
  std::pair<double, double> bracket(double x0) const {
    auto it = std::upper_bound(e_.begin(), e_.end(), x0);
    if (it == e_.begin()) {
      return {e_.back() - 1.0, e_.front()};
    }
    double left = *(it - 1);
    double right = it == e_.end() ? e_.front() + 1.0 : *it;
    return {left, right};
  }

  bool is_critical(double x0) const {
    for (double c : crit_) {
      if (std::fabs(angle_sub(Angle(x0), Angle(c))) <= 1e-9) return true;
    }
    return false;
  }

  // Global inversion for maps without critical points.
  double invert_monotone(double w, double hint) const {
    bool increasing = f_.degree() > 0;
    auto fn = [&](double u) { return f_.lift(u) - w; };
    double lo = hint - 1.0, hi = hint + 1.0;
    while ((increasing ? fn(lo) : -fn(lo)) > 0.0) lo -= 1.0;
    while ((increasing ? fn(hi) : -fn(hi)) < 0.0) hi += 1.0;
    return internal::solve_bracketed(
        fn, [&](double u) { return f_.lift_d1(u); }, lo, hi, 1e-14);
  }

  CircleMap f_;
  std::vector<double> e_;     // all level points, ascending in [0, 1)
  std::vector<double> crit_;  // critical points, for the derivative limit
  CircleDiffeo r_;
};

}  // namespace

CircleDiffeo lift_target_diffeo(const CircleMap& f, const MapAnalysis& analysis,
                                const CircleDiffeo& r) {
  const int n = analysis.n();
  std::vector<double> level_points;
  std::vector<double> critical_points;
  if (n >= 1) {
    for (const Angle& p : analysis.exceptional_values) {
      if (circle_dist(r(p), p) > 1e-10) {
        throw std::invalid_argument(
            "lift_target_diffeo: target diffeomorphism moves an exceptional "
            "value");
      }
    }
    for (const Angle& p : analysis.all_level_points()) {
      level_points.push_back(p.turns());
    }
    std::sort(level_points.begin(), level_points.end());
    for (const CriticalPoint& cp : analysis.critical_points) {
      critical_points.push_back(cp.point.turns());
    }
  } else if (f.degree() == 0) {
    throw std::invalid_argument(
        "lift_target_diffeo: degree-zero map without critical points");
  }
  return CircleDiffeo::from_node(std::make_shared<ConjugacyLiftNode>(
      f, std::move(level_points), std::move(critical_points), r));
}

double conjugacy_residual(const CircleMap& f, const CircleDiffeo& h,
                          const CircleDiffeo& r, int grid) {
  double worst = 0.0;
  for (int i = 0; i < grid; ++i) {
    Angle x(static_cast<double>(i) / grid);
    worst = std::max(worst, circle_dist(r(f(x)), f(h(x))));
  }
  return worst;
}

StabilizerElement stabilizer_section(const CircleMap& f,
                                     const MapAnalysis& analysis,
                                     const CircleDiffeo& r, int grid) {
  CircleDiffeo h = lift_target_diffeo(f, analysis, r);
  return StabilizerElement{h, r, conjugacy_residual(f, h, r, grid)};
}

PeriodicPath periodic_representative_path(const CircleMap& f,
                                          const MapAnalysis& analysis,
                                          const StabilizerElement& element,
                                          int steps, int grid) {
  const int n = analysis.n();
  if (n < 1) {
    throw std::invalid_argument(
        "periodic_representative_path: needs exceptional values");
  }
  if (steps < 1) {
    throw std::invalid_argument("periodic_representative_path: steps >= 1");
  }
  std::optional<int> l = permutes_exceptional(element.target_side, n);
  if (!l) {
    throw std::invalid_argument(
        "periodic_representative_path: target side does not permute the "
        "exceptional values");
  }
  CircleDiffeo rot = CircleDiffeo::rotation(Angle(static_cast<double>(*l) / n));
  CircleDiffeo q = CircleDiffeo::compose(rot, element.target_side.inverse());
  if (!fixes_exceptional(q, n, 1e-8)) {
    throw NumericError(
        "periodic_representative_path: correction does not fix the values");
  }
  PeriodicPath path;
  path.periodic_target = rot;
  path.samples.reserve(steps + 1);
  for (int j = 0; j <= steps; ++j) {
    double s = static_cast<double>(j) / steps;
    CircleDiffeo qt = contract_toward_identity(q, s, n);
    CircleDiffeo h =
        CircleDiffeo::compose(lift_target_diffeo(f, analysis, qt),
                              element.domain_side);
    CircleDiffeo rt = CircleDiffeo::compose(qt, element.target_side);
    path.samples.push_back(
        StabilizerElement{h, rt, conjugacy_residual(f, h, rt, grid)});
  }
  return path;
}

}  // namespace s1map
