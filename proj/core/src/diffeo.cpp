#include "s1map/diffeo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "s1map/errors.hpp"
#include "internal/bump.hpp"
#include "internal/fmt.hpp"
#include "internal/quadrature.hpp"
#include "internal/root.hpp"

namespace s1map {

namespace {

using internal::Panel;

// Solves L(x) = y for a strictly increasing degree-one lift. Since
// L(k) = L(0) + k, the root lies in [k, k+1] with k = floor(y - L(0)).
template <class L, class D>
double invert_lift(const L& lift, const D& d1, double y) {
  double k = std::floor(y - lift(0.0));
  double lo = k, hi = k + 1.0;
  // Guard against rounding at the seam.
  while (lift(lo) > y) lo -= 1.0;
  while (lift(hi) < y) hi += 1.0;
  if (lift(lo) == y) return lo;
  if (lift(hi) == y) return hi;
  return internal::solve_bracketed([&](double x) { return lift(x) - y; }, d1,
                                   lo, hi, 1e-14);
}

class RotationNode final : public DiffeoNode {
 public:
  explicit RotationNode(Angle phi) : phi_(phi.turns()) {}
  double lift(double t) const override { return t + phi_; }
  double lift_d1(double) const override { return 1.0; }
  double lift_d2(double) const override { return 0.0; }
  void describe(std::string& out) const override {
    out += "{\"op\":\"rotation\",\"angle\":";
    internal::append_g17(out, phi_);
    out += "}";
  }

 private:
  double phi_;
};

// Monotone interpolant sending source knot s_a to target x_a, with density
// exp(lambda_a * beta(u)) on each source interval (u the interval-local
// coordinate); lambda_a is the unique exponent giving the interval its
// prescribed image length. beta is flat to infinite order at the knots, so
// the density is exactly 1 there and the circle extension is smooth. A
// lambda of zero makes the interval an exact translation, so uniform
// targets over uniform knots give the identity lift bit-for-bit.
class MonotoneLiftNode final : public DiffeoNode {
 public:
  // sources: s_0 < ... < s_{n-1} < s_0 + 1, one full turn; targets likewise.
  MonotoneLiftNode(std::vector<double> sources, std::vector<double> targets,
                   bool uniform_knots)
      : sources_(std::move(sources)), targets_(std::move(targets)),
        uniform_knots_(uniform_knots) {
    n_ = static_cast<int>(sources_.size());
    if (n_ < 1 || targets_.size() != sources_.size()) {
      throw std::invalid_argument("monotone_lift: knot count mismatch");
    }
    sources_.push_back(sources_.front() + 1.0);
    targets_.push_back(targets_.front() + 1.0);
    sign_.assign(n_, 0);
    log_abs_.assign(n_, 0.0);
    panels_.resize(n_);
    for (int a = 0; a < n_; ++a) {
      double ds = sources_[a + 1] - sources_[a];
      double dt = targets_[a + 1] - targets_[a];
      if (!(ds > 0.0 && dt > 0.0)) {
        throw std::invalid_argument("monotone_lift: knots must be ordered");
      }
      solve_interval(a, dt / ds);
    }
  }

  double lift(double t) const override {
    double k = std::floor(t - sources_.front());
    double tp = t - k;  // in [s_0, s_0 + 1)
    int a = interval_of(tp);
    double value;
    if (sign_[a] == 0) {
      value = targets_[a] + (tp - sources_[a]);  // exact translation
    } else {
      double ds = sources_[a + 1] - sources_[a];
      double u = (tp - sources_[a]) / ds;
      value = targets_[a] + ds * partial_integral(a, u);
    }
    return value + k;
  }

  double lift_d1(double t) const override {
    double k = std::floor(t - sources_.front());
    double tp = t - k;
    int a = interval_of(tp);
    if (sign_[a] == 0) return 1.0;
    double u = (tp - sources_[a]) / (sources_[a + 1] - sources_[a]);
    return internal::exp_lambda_bump(sign_[a], log_abs_[a], u);
  }

  double lift_d2(double t) const override {
    double k = std::floor(t - sources_.front());
    double tp = t - k;
    int a = interval_of(tp);
    if (sign_[a] == 0) return 0.0;
    double ds = sources_[a + 1] - sources_[a];
    double u = (tp - sources_[a]) / ds;
    double rho = internal::exp_lambda_bump(sign_[a], log_abs_[a], u);
    if (rho == 0.0) return 0.0;
    double e = internal::lambda_bump(sign_[a], log_abs_[a], u);
    if (e == 0.0) return 0.0;
    return rho * e * internal::log_bump_d1(u) / ds;
  }

  void describe(std::string& out) const override {
    if (uniform_knots_) {
      out += "{\"op\":\"monotone_lift\",\"n\":" + std::to_string(n_) +
             ",\"targets\":[";
      for (int a = 1; a < n_; ++a) {
        if (a > 1) out += ",";
        internal::append_g17(out, targets_[a]);
      }
      out += "]}";
      return;
    }
    out += "{\"op\":\"monotone_between\",\"sources\":[";
    for (int a = 0; a < n_; ++a) {
      if (a) out += ",";
      internal::append_g17(out, sources_[a]);
    }
    out += "],\"targets\":[";
    for (int a = 0; a < n_; ++a) {
      if (a) out += ",";
      internal::append_g17(out, targets_[a]);
    }
    out += "]}";
  }

 private:
  int interval_of(double tp) const {
    auto it = std::upper_bound(sources_.begin(), sources_.end(), tp);
    int a = static_cast<int>(it - sources_.begin()) - 1;
    return std::clamp(a, 0, n_ - 1);
  }

  double density(int a, double u) const {
    return internal::exp_lambda_bump(sign_[a], log_abs_[a], u);
  }

  // Integral of the density over [0, u] in interval-local coordinates.
  double partial_integral(int a, double u) const {
    const std::vector<Panel>& ps = panels_[a];
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return ps.back().prefix + ps.back().integral;
    auto it = std::upper_bound(
        ps.begin(), ps.end(), u,
        [](double x, const Panel& p) { return x < p.right; });
    if (it == ps.end()) --it;
    double head = it->prefix;
    if (u <= it->left) return head;
    return head + internal::gauss_panel(
                      [&](double v) { return density(a, v); }, it->left, u);
  }

  // Breakpoints for the density integral: geometric refinement toward both
  // endpoints down to well below the boundary-layer scale 1/(4 + ln|lambda|),
  // so the layer cannot hide between the nodes of a wide panel.
  static std::vector<double> seed_points(double log_abs_lambda) {
    double scale = 1.0 / (6.0 + std::max(log_abs_lambda, 0.0));
    std::vector<double> left{0.0};
    for (double u = scale / 16.0; u < 0.25; u *= 2.0) left.push_back(u);
    left.push_back(0.25);
    left.push_back(0.5);
    std::vector<double> seeds = left;
    for (std::size_t i = left.size() - 1; i-- > 0;) {
      seeds.push_back(1.0 - left[i]);
    }
    return seeds;
  }

  // Finds lambda with integral_0^1 exp(lambda beta) du = target. The
  // integral is strictly increasing in lambda with limits 0 and infinity,
  // and extremely flat for very negative lambda, so the search runs on
  // tau = ln|lambda| scale; lambda itself never needs to be representable.
  void solve_interval(int a, double target) {
    auto g_of = [&](int sign, double log_abs) {
      return internal::integrate_seeded(
          [&](double u) {
            return internal::exp_lambda_bump(sign, log_abs, u);
          },
          seed_points(log_abs), 1e-14);
    };
    if (std::fabs(target - 1.0) <= 1e-14) {
      sign_[a] = 0;
      log_abs_[a] = -std::numeric_limits<double>::infinity();
      panels_[a].clear();
      return;
    }
    const int sign = target > 1.0 ? 1 : -1;
    auto log_abs_of_tau = [](double tau) {
      return tau > 36.0 ? tau : std::log(std::expm1(tau));
    };
    auto g_tau = [&](double tau) { return g_of(sign, log_abs_of_tau(tau)); };

    double tau_lo = 0.0, tau_hi = 0.5;
    // Doubling search for a crossing; tau_lo keeps the near side.
    for (;;) {
      double v = g_tau(tau_hi);
      bool crossed = sign > 0 ? (v >= target) : (v <= target);
      if (crossed) break;
      tau_lo = tau_hi;
      tau_hi *= 2.0;
      if (tau_hi > 2e4) {
        throw NumericError(
            "monotone_lift: interval too thin for the density solve");
      }
    }
    // g is monotone in tau (increasing for sign > 0, decreasing otherwise).
    auto increasing = [&](double tau) {
      return sign > 0 ? g_tau(tau) : -g_tau(tau);
    };
    double want = sign > 0 ? target : -target;
    double tau = internal::bisect_increasing(increasing, tau_lo, tau_hi, want,
                                             1e-13, 200);
    sign_[a] = sign;
    log_abs_[a] = log_abs_of_tau(tau);
    panels_[a] = internal::integrate_panels_seeded(
        [&](double u) { return density(a, u); }, seed_points(log_abs_[a]),
        1e-14);
    double achieved = panels_[a].back().prefix + panels_[a].back().integral;
    if (std::fabs(achieved - target) > 1e-12) {
      throw NumericError("monotone_lift: density solve did not converge");
    }
  }

  std::vector<double> sources_;  // n+1 entries, last = first + 1
  std::vector<double> targets_;  // n+1 entries, last = first + 1
  bool uniform_knots_;
  int n_;
  std::vector<int> sign_;
  std::vector<double> log_abs_;
  std::vector<std::vector<Panel>> panels_;
};

class ComposeNode final : public DiffeoNode {
 public:
  ComposeNode(CircleDiffeo outer, CircleDiffeo inner)
      : outer_(std::move(outer)), inner_(std::move(inner)) {}
  double lift(double t) const override { return outer_.lift(inner_.lift(t)); }
  double lift_d1(double t) const override {
    double it = inner_.lift(t);
    return outer_.lift_d1(it) * inner_.lift_d1(t);
  }
  double lift_d2(double t) const override {
    double it = inner_.lift(t);
    double id1 = inner_.lift_d1(t);
    return outer_.lift_d2(it) * id1 * id1 +
           outer_.lift_d1(it) * inner_.lift_d2(t);
  }
  void describe(std::string& out) const override {
    out += "{\"op\":\"compose\",\"outer\":";
    outer_.node()->describe(out);
    out += ",\"inner\":";
    inner_.node()->describe(out);
    out += "}";
  }

 private:
  CircleDiffeo outer_, inner_;
};

class InverseNode final : public DiffeoNode {
 public:
  explicit InverseNode(CircleDiffeo of) : of_(std::move(of)) {}
  double lift(double t) const override {
    return invert_lift([&](double x) { return of_.lift(x); },
                       [&](double x) { return of_.lift_d1(x); }, t);
  }
  double lift_d1(double t) const override {
    return 1.0 / of_.lift_d1(lift(t));
  }
  double lift_d2(double t) const override {
    double x = lift(t);
    double d1 = of_.lift_d1(x);
    return -of_.lift_d2(x) / (d1 * d1 * d1);
  }
  void describe(std::string& out) const override {
    out += "{\"op\":\"inverse\",\"of\":";
    of_.node()->describe(out);
    out += "}";
  }

 private:
  CircleDiffeo of_;
};

class ConvexNode final : public DiffeoNode {
 public:
  ConvexNode(CircleDiffeo a, CircleDiffeo b, double s)
      : a_(std::move(a)), b_(std::move(b)), s_(s) {}
  double lift(double t) const override {
    return (1.0 - s_) * a_.lift(t) + s_ * b_.lift(t);
  }
  double lift_d1(double t) const override {
    return (1.0 - s_) * a_.lift_d1(t) + s_ * b_.lift_d1(t);
  }
  double lift_d2(double t) const override {
    return (1.0 - s_) * a_.lift_d2(t) + s_ * b_.lift_d2(t);
  }
  void describe(std::string& out) const override {
    out += "{\"op\":\"convex_mix\",\"s\":";
    internal::append_g17(out, s_);
    out += ",\"a\":";
    a_.node()->describe(out);
    out += ",\"b\":";
    b_.node()->describe(out);
    out += "}";
  }

 private:
  CircleDiffeo a_, b_;
  double s_;
};

}  // namespace

CircleDiffeo::CircleDiffeo()
    : CircleDiffeo(std::make_shared<RotationNode>(Angle(0.0))) {}

CircleDiffeo::CircleDiffeo(std::shared_ptr<const DiffeoNode> node)
    : node_(std::move(node)) {
  offset_ = std::floor(node_->lift(0.0));
}

CircleDiffeo CircleDiffeo::identity() { return CircleDiffeo(); }

CircleDiffeo CircleDiffeo::rotation(Angle phi) {
  return CircleDiffeo(std::make_shared<RotationNode>(phi));
}

CircleDiffeo CircleDiffeo::monotone_lift(const SimplexPoint& targets, int n) {
  if (n < 1) throw std::invalid_argument("monotone_lift: n must be >= 1");
  if (targets.dimension() + 1 != static_cast<std::size_t>(n)) {
    throw std::invalid_argument(
        "monotone_lift: need n-1 target coordinates for n knots");
  }
  std::vector<double> sources(n), image(n);
  sources[0] = 0.0;
  image[0] = 0.0;
  for (int a = 1; a < n; ++a) {
    sources[a] = static_cast<double>(a) / n;
    image[a] = targets.coords()[a - 1];
  }
  return CircleDiffeo(std::make_shared<MonotoneLiftNode>(
      std::move(sources), std::move(image), true));
}

CircleDiffeo CircleDiffeo::monotone_between(const Configuration& source,
                                            const Configuration& target) {
  if (source.size() != target.size()) {
    throw std::invalid_argument("monotone_between: size mismatch");
  }
  if (!in_base_component(source) || !in_base_component(target)) {
    throw std::invalid_argument(
        "monotone_between: tuples must be positively cyclically ordered");
  }
  const std::size_t n = source.size();
  std::vector<double> s(n), x(n);
  s[0] = source[0].turns();
  x[0] = target[0].turns();
  for (std::size_t a = 1; a < n; ++a) {
    s[a] = s[0] + normalize_turns(source[a].turns() - source[0].turns());
    x[a] = x[0] + normalize_turns(target[a].turns() - target[0].turns());
  }
  return CircleDiffeo(
      std::make_shared<MonotoneLiftNode>(std::move(s), std::move(x), false));
}

CircleDiffeo CircleDiffeo::compose(const CircleDiffeo& outer,
                                   const CircleDiffeo& inner) {
  return CircleDiffeo(std::make_shared<ComposeNode>(outer, inner));
}

CircleDiffeo CircleDiffeo::convex_mix(const CircleDiffeo& a,
                                      const CircleDiffeo& b, double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::invalid_argument("convex_mix: s must lie in [0, 1]");
  }
  return CircleDiffeo(std::make_shared<ConvexNode>(a, b, s));
}

CircleDiffeo CircleDiffeo::from_node(std::shared_ptr<const DiffeoNode> node) {
  return CircleDiffeo(std::move(node));
}

CircleDiffeo CircleDiffeo::inverse() const {
  return CircleDiffeo(std::make_shared<InverseNode>(*this));
}

Angle CircleDiffeo::operator()(Angle x) const {
  return Angle(lift(x.turns()));
}

double CircleDiffeo::lift(double t) const { return node_->lift(t) - offset_; }

double CircleDiffeo::lift_d1(double t) const {
  double d = node_->lift_d1(t);
  if (!(d > 0.0)) {
    throw NumericError("CircleDiffeo: non-positive lift derivative");
  }
  return d;
}

double CircleDiffeo::lift_d2(double t) const { return node_->lift_d2(t); }

Angle CircleDiffeo::inverse_eval(Angle y) const {
  double x = invert_lift([&](double t) { return node_->lift(t); },
                         [&](double t) { return node_->lift_d1(t); },
                         y.turns() + offset_);
  return Angle(x);
}

std::string CircleDiffeo::provenance() const {
  std::string out;
  node_->describe(out);
  return out;
}

Configuration evaluation_map(const CircleDiffeo& g, int n) {
  if (n < 1) throw std::invalid_argument("evaluation_map: n must be >= 1");
  std::vector<Angle> pts;
  pts.reserve(n);
  for (int a = 0; a < n; ++a) {
    pts.push_back(g(Angle(static_cast<double>(a) / n)));
  }
  return Configuration(std::move(pts));
}

CircleDiffeo interpolating_diffeo(const Configuration& target) {
  Chart chart = chart_coordinates(target);
  int n = static_cast<int>(target.size());
  CircleDiffeo mu = CircleDiffeo::monotone_lift(chart.simplex, n);
  return CircleDiffeo::compose(CircleDiffeo::rotation(chart.base), mu);
}

bool fixes_exceptional(const CircleDiffeo& g, int n, double tol) {
  if (n == 0) return true;
  for (int a = 0; a < n; ++a) {
    Angle p(static_cast<double>(a) / n);
    if (circle_dist(g(p), p) > tol) return false;
  }
  return true;
}

std::optional<int> permutes_exceptional(const CircleDiffeo& g, int n,
                                        double tol) {
  if (n < 1) return std::nullopt;
  for (int l = 0; l < n; ++l) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) {
      Angle p(static_cast<double>(a) / n);
      Angle q(static_cast<double>(a + l) / n);
      ok = circle_dist(g(p), q) <= tol;
    }
    if (ok) return l;
  }
  return std::nullopt;
}

CircleDiffeo contract_toward_identity(const CircleDiffeo& g, double s, int n) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::invalid_argument("contract_toward_identity: s outside [0, 1]");
  }
  if (!fixes_exceptional(g, n)) {
    throw std::invalid_argument(
        "contract_toward_identity: diffeomorphism moves a base point");
  }
  return CircleDiffeo::convex_mix(g, CircleDiffeo::identity(), s);
}

std::vector<DiffeoSample> sample_table(const CircleDiffeo& g, int resolution) {
  if (resolution < 2) {
    throw std::invalid_argument("sample_table: resolution too small");
  }
  std::vector<DiffeoSample> rows;
  rows.reserve(resolution);
  for (int i = 0; i < resolution; ++i) {
    double t = static_cast<double>(i) / resolution;
    rows.push_back(DiffeoSample{t, g.lift(t), g.lift_d1(t)});
  }
  return rows;
}

}  // namespace s1map
