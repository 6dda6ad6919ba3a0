#include "s1map/circle_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "s1map/errors.hpp"
#include "internal/fmt.hpp"
#include "internal/root.hpp"

namespace s1map {

double MapExpr::lift_d3(double t) const {
  const double h = 1e-5;
  return (lift_d2(t + h) - lift_d2(t - h)) / (2.0 * h);
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

class FourierExpr final : public MapExpr {
 public:
  explicit FourierExpr(FourierData data) : data_(std::move(data)) {
    if (data_.cos_coeffs.size() != data_.sin_coeffs.size()) {
      data_.cos_coeffs.resize(
          std::max(data_.cos_coeffs.size(), data_.sin_coeffs.size()), 0.0);
      data_.sin_coeffs.resize(data_.cos_coeffs.size(), 0.0);
    }
  }

  double lift(double t) const override {
    double v = data_.degree * t + data_.constant;
    for (std::size_t j = 1; j <= data_.cos_coeffs.size(); ++j) {
      double w = kTwoPi * static_cast<double>(j);
      v += data_.cos_coeffs[j - 1] * std::cos(w * t) +
           data_.sin_coeffs[j - 1] * std::sin(w * t);
    }
    return v;
  }

  double lift_d1(double t) const override {
    double v = data_.degree;
    for (std::size_t j = 1; j <= data_.cos_coeffs.size(); ++j) {
      double w = kTwoPi * static_cast<double>(j);
      v += w * (-data_.cos_coeffs[j - 1] * std::sin(w * t) +
                data_.sin_coeffs[j - 1] * std::cos(w * t));
    }
    return v;
  }

  double lift_d2(double t) const override {
    double v = 0.0;
    for (std::size_t j = 1; j <= data_.cos_coeffs.size(); ++j) {
      double w = kTwoPi * static_cast<double>(j);
      v -= w * w * (data_.cos_coeffs[j - 1] * std::cos(w * t) +
                    data_.sin_coeffs[j - 1] * std::sin(w * t));
    }
    return v;
  }

  double lift_d3(double t) const override {
    double v = 0.0;
    for (std::size_t j = 1; j <= data_.cos_coeffs.size(); ++j) {
      double w = kTwoPi * static_cast<double>(j);
      v += w * w * w * (data_.cos_coeffs[j - 1] * std::sin(w * t) -
                        data_.sin_coeffs[j - 1] * std::cos(w * t));
    }
    return v;
  }

  int degree() const override { return data_.degree; }
  const FourierData* fourier() const override { return &data_; }

 private:
  FourierData data_;
};

// post o base o pre, either diffeomorphism optional.
class ComposedExpr final : public MapExpr {
 public:
  ComposedExpr(std::optional<CircleDiffeo> post, CircleMap base,
               std::optional<CircleDiffeo> pre)
      : post_(std::move(post)), base_(std::move(base)), pre_(std::move(pre)) {}

  double lift(double t) const override {
    double u = pre_ ? pre_->lift(t) : t;
    double v = base_.lift(u);
    return post_ ? post_->lift(v) : v;
  }

  double lift_d1(double t) const override {
    double u = pre_ ? pre_->lift(t) : t;
    double du = pre_ ? pre_->lift_d1(t) : 1.0;
    double v = base_.lift(u);
    double dv = base_.lift_d1(u) * du;
    return post_ ? post_->lift_d1(v) * dv : dv;
  }

  double lift_d2(double t) const override {
    double u = pre_ ? pre_->lift(t) : t;
    double du = pre_ ? pre_->lift_d1(t) : 1.0;
    double ddu = pre_ ? pre_->lift_d2(t) : 0.0;
    double v = base_.lift(u);
    double dv = base_.lift_d1(u) * du;
    double ddv = base_.lift_d2(u) * du * du + base_.lift_d1(u) * ddu;
    if (!post_) return ddv;
    return post_->lift_d2(v) * dv * dv + post_->lift_d1(v) * ddv;
  }

  int degree() const override { return base_.degree(); }

 private:
  std::optional<CircleDiffeo> post_;
  CircleMap base_;
  std::optional<CircleDiffeo> pre_;
};

// Roots of a periodic scalar function on [0, 1): sign changes of the
// precomputed grid samples, refined on each bracketing cell.
template <class F, class DF>
std::vector<double> scan_roots(const std::vector<double>& grid, const F& f,
                               const DF& df, double xtol) {
  const int resolution = static_cast<int>(grid.size()) - 1;
  std::vector<double> roots;
  for (int i = 0; i < resolution; ++i) {
    double prev_v = grid[i];
    double v = grid[i + 1];
    double prev_t = static_cast<double>(i) / resolution;
    double t = static_cast<double>(i + 1) / resolution;
    if (prev_v == 0.0) {
      roots.push_back(prev_t);
    } else if ((prev_v < 0.0) != (v < 0.0) && v != 0.0) {
      roots.push_back(internal::solve_bracketed(f, df, prev_t, t, xtol));
    }
  }
  // Normalize into [0, 1) and deduplicate around the seam.
  for (double& r : roots) r = normalize_turns(r);
  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double r : roots) {
    if (!unique.empty() && r - unique.back() < 10.0 * xtol) continue;
    unique.push_back(r);
  }
  if (unique.size() > 1 &&
      (1.0 - unique.back()) + unique.front() < 10.0 * xtol) {
    unique.pop_back();
  }
  return unique;
}

// Circular clustering of critical values; returns cluster representatives
// (circular means) and the cluster index of every input.
std::pair<std::vector<Angle>, std::vector<int>> merge_values(
    const std::vector<Angle>& vals, double merge_tol) {
  const std::size_t m = vals.size();
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return vals[a].turns() < vals[b].turns();
  });
  // Group sorted values, then merge the wrap-around pair of groups.
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t idx : order) {
    if (groups.empty() ||
        vals[idx].turns() - vals[groups.back().back()].turns() > merge_tol) {
      groups.push_back({idx});
    } else {
      groups.back().push_back(idx);
    }
  }
  if (groups.size() > 1) {
    double wrap_gap = (1.0 - vals[groups.back().back()].turns()) +
                      vals[groups.front().front()].turns();
    if (wrap_gap <= merge_tol) {
      for (std::size_t idx : groups.front()) groups.back().push_back(idx);
      groups.erase(groups.begin());
    }
  }
  std::vector<Angle> reps;
  std::vector<int> cluster_of(m, -1);
  reps.reserve(groups.size());
  for (const auto& g : groups) {
    double base = vals[g.front()].turns();
    double acc = 0.0;
    for (std::size_t idx : g) {
      acc += angle_sub(vals[idx], Angle(base));
    }
    reps.push_back(Angle(base + acc / static_cast<double>(g.size())));
  }
  // Re-sort representatives ascending and record cluster indices.
  std::vector<std::size_t> rep_order(reps.size());
  for (std::size_t i = 0; i < reps.size(); ++i) rep_order[i] = i;
  std::sort(rep_order.begin(), rep_order.end(), [&](std::size_t a, std::size_t b) {
    return reps[a].turns() < reps[b].turns();
  });
  std::vector<Angle> sorted_reps;
  sorted_reps.reserve(reps.size());
  std::vector<int> new_index(reps.size());
  for (std::size_t i = 0; i < rep_order.size(); ++i) {
    new_index[rep_order[i]] = static_cast<int>(i);
    sorted_reps.push_back(reps[rep_order[i]]);
  }
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    for (std::size_t idx : groups[gi]) cluster_of[idx] = new_index[gi];
  }
  return {sorted_reps, cluster_of};
}

// Orientation-preserving conjugacy built by inverting f branch by branch:
// h(t) solves L_f(h(t)) = affine(L_g(t)) on the branch matched by the word
// alignment, with an endpoint-exact affine correction in value space. With
// no critical points at all the inversion is global.
class BranchConjugacyNode final : public DiffeoNode {
 public:
  BranchConjugacyNode(CircleMap f, CircleMap g, std::vector<double> g_cuts,
                      std::vector<double> f_cuts)
      : f_(std::move(f)), g_(std::move(g)), q_(std::move(g_cuts)),
        c_(std::move(f_cuts)) {
    const std::size_t m = q_.size();
    if (m == 0) return;
    q_.push_back(q_.front() + 1.0);
    c_.push_back(c_.front() + 1.0);
    gq_.resize(m + 1);
    fc_.resize(m + 1);
    scale_.resize(m);
    for (std::size_t i = 0; i <= m; ++i) {
      gq_[i] = g_.lift(q_[i]);
      fc_[i] = f_.lift(c_[i]);
    }
    for (std::size_t i = 0; i < m; ++i) {
      scale_[i] = (fc_[i + 1] - fc_[i]) / (gq_[i + 1] - gq_[i]);
    }
  }

  double lift(double t) const override {
    if (q_.empty()) {
      return invert_f(g_.lift(t));
    }
    double k = std::floor(t - q_.front());
    double tp = t - k;  // in [q_0, q_0 + 1)
    std::size_t i = branch_of(tp);
    double w = fc_[i] + (g_.lift(tp) - gq_[i]) * scale_[i];
    double lo = c_[i], hi = c_[i + 1];
    double wlo = fc_[i], whi = fc_[i + 1];
    if (wlo > whi) std::swap(wlo, whi);
    w = std::clamp(w, wlo, whi);
    if (w == fc_[i]) return lo + k;
    if (w == fc_[i + 1]) return hi + k;
    double z = internal::solve_bracketed(
        [&](double x) { return f_.lift(x) - w; },
        [&](double x) { return f_.lift_d1(x); }, lo, hi, 1e-14);
    return z + k;
  }

  double lift_d1(double t) const override {
    if (q_.empty()) {
      return g_.lift_d1(t) / f_.lift_d1(lift(t));
    }
    double k = std::floor(t - q_.front());
    double tp = t - k;
    std::size_t i = branch_of(tp);
    double z = lift(tp);
    double fd = f_.lift_d1(z);
    double gd = g_.lift_d1(tp);
    if (std::fabs(fd) < 1e-9) {
      // Matched critical points: the limit is sqrt(scale g'' / f'').
      double ratio = scale_[i] * g_.lift_d2(tp) / f_.lift_d2(z);
      return std::sqrt(std::fabs(ratio));
    }
    return scale_[i] * gd / fd;
  }

  double lift_d2(double t) const override {
    const double h = 1e-6;
    return (lift_d1(t + h) - lift_d1(t - h)) / (2.0 * h);
  }

  void describe(std::string& out) const override {
    out += "{\"op\":\"branch_conjugacy\",\"branches\":" +
           std::to_string(q_.empty() ? 0 : q_.size() - 1) + "}";
  }

 private:
  double invert_f(double w) const {
    double k = std::floor((w - f_.lift(0.0)) / f_.degree());
    double lo = k, hi = k + 1.0;
    bool increasing = f_.degree() > 0;
    auto fn = [&](double x) { return f_.lift(x) - w; };
    while ((increasing ? fn(lo) : -fn(lo)) > 0.0) lo -= 1.0;
    while ((increasing ? fn(hi) : -fn(hi)) < 0.0) hi += 1.0;
    return internal::solve_bracketed(
        fn, [&](double x) { return f_.lift_d1(x); }, lo, hi, 1e-14);
  }

  std::size_t branch_of(double tp) const {
    auto it = std::upper_bound(q_.begin(), q_.end(), tp);
    std::size_t i = static_cast<std::size_t>(it - q_.begin());
    return i == 0 ? 0 : i - 1;
  }

  CircleMap f_, g_;
  std::vector<double> q_;       // branch cuts of g (lifted, ascending)
  std::vector<double> c_;       // matched branch cuts of f
  std::vector<double> gq_, fc_; // lift values at the cuts
  std::vector<double> scale_;   // endpoint-exact affine value correction
};

std::vector<double> lifted_cycle(const std::vector<Angle>& pts,
                                 std::size_t start) {
  // One full turn of representatives, ascending, beginning at pts[start].
  std::vector<double> out;
  out.reserve(pts.size());
  double cur = pts[start].turns();
  out.push_back(cur);
  for (std::size_t s = 1; s < pts.size(); ++s) {
    std::size_t i = (start + s) % pts.size();
    double gap = normalize_turns(pts[i].turns() - Angle(cur).turns());
    cur += gap;
    out.push_back(cur);
  }
  return out;
}

}  // namespace

CircleMap::CircleMap(std::shared_ptr<const MapExpr> expr)
    : expr_(std::move(expr)) {}

CircleMap CircleMap::fourier(FourierData data) {
  return CircleMap(std::make_shared<FourierExpr>(std::move(data)));
}

CircleMap CircleMap::from_expr(std::shared_ptr<const MapExpr> expr) {
  return CircleMap(std::move(expr));
}

CircleMap CircleMap::postcompose(const CircleDiffeo& r) const {
  return CircleMap(std::make_shared<ComposedExpr>(r, *this, std::nullopt));
}

CircleMap CircleMap::precompose(const CircleDiffeo& h) const {
  return CircleMap(std::make_shared<ComposedExpr>(std::nullopt, *this, h));
}

std::vector<Angle> MapAnalysis::all_level_points() const {
  std::vector<Angle> pts;
  for (const auto& level : levels) {
    for (const LevelPoint& p : level) pts.push_back(p.point);
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

MapAnalysis analyze(const CircleMap& f, const AnalyzeOptions& opts) {
  MapAnalysis out;
  out.degree = f.degree();

  const int resolution = opts.scan_resolution;
  std::vector<double> lift_grid(resolution + 1), d1_grid(resolution + 1);
  for (int i = 0; i <= resolution; ++i) {
    double t = static_cast<double>(i) / resolution;
    lift_grid[i] = f.lift(t);
    d1_grid[i] = f.lift_d1(t);
  }

  auto d1 = [&](double t) { return f.lift_d1(t); };
  auto d2 = [&](double t) { return f.lift_d2(t); };
  std::vector<double> crit = scan_roots(d1_grid, d1, d2, opts.refine_tol);

  out.morse = true;
  std::vector<Angle> crit_values;
  for (double c : crit) {
    double sd = f.lift_d2(c);
    if (std::fabs(sd) <= opts.morse_tol) {
      throw NonMorseError(
          "analyze: critical point with vanishing second derivative at t=" +
          internal::g17(c));
    }
    out.critical_points.push_back(CriticalPoint{Angle(c), sd});
    crit_values.push_back(Angle(f.lift(c)));
  }

  if (out.critical_points.empty()) {
    return out;  // no exceptional values; f is a covering
  }

  auto [reps, cluster_of] = merge_values(crit_values, opts.merge_tol);
  out.exceptional_values = reps;
  out.levels.assign(reps.size(), {});

  // Critical members of each level.
  std::vector<std::vector<double>> crit_in_level(reps.size());
  for (std::size_t i = 0; i < crit.size(); ++i) {
    int a = cluster_of[i];
    out.levels[a].push_back(LevelPoint{Angle(crit[i]), true});
    crit_in_level[a].push_back(crit[i]);
  }

  // Regular members: roots of lift(x) = value + m for every integer branch
  // the lift actually spans.
  double lo = *std::min_element(lift_grid.begin(), lift_grid.end());
  double hi = *std::max_element(lift_grid.begin(), lift_grid.end());
  std::vector<double> shifted(lift_grid.size());
  for (std::size_t a = 0; a < reps.size(); ++a) {
    double p = reps[a].turns();
    int m_lo = static_cast<int>(std::ceil(lo - p - 0.25));
    int m_hi = static_cast<int>(std::floor(hi - p + 0.25));
    for (int m = m_lo; m <= m_hi; ++m) {
      double w = p + m;
      auto g = [&](double t) { return f.lift(t) - w; };
      for (std::size_t i = 0; i < lift_grid.size(); ++i) {
        shifted[i] = lift_grid[i] - w;
      }
      for (double r : scan_roots(shifted, g, d1, opts.refine_tol)) {
        bool near_crit = false;
        for (double c : crit_in_level[a]) {
          double dist = std::fabs(angle_sub(Angle(r), Angle(c)));
          if (dist < 1e-4) {
            near_crit = true;  // tangency artifact of the level scan
            break;
          }
        }
        if (!near_crit) {
          out.levels[a].push_back(LevelPoint{Angle(r), false});
        }
      }
    }
  }
  for (auto& level : out.levels) {
    std::sort(level.begin(), level.end(),
              [](const LevelPoint& x, const LevelPoint& y) {
                return x.point < y.point;
              });
  }
  return out;
}

NormalizedMap normalize_exceptional(const CircleMap& f, const MapAnalysis& a) {
  const int n = a.n();
  if (n < 1) {
    throw std::invalid_argument(
        "normalize_exceptional: the map has no exceptional values");
  }
  Configuration values(a.exceptional_values);
  std::vector<Angle> base;
  base.reserve(n);
  for (int i = 0; i < n; ++i) base.push_back(Angle(static_cast<double>(i) / n));
  CircleDiffeo straightening =
      CircleDiffeo::monotone_between(values, Configuration(std::move(base)));
  CircleMap normalized = f.postcompose(straightening);
  MapAnalysis na = analyze(normalized);
  if (na.n() != n) {
    throw NumericError(
        "normalize_exceptional: value count changed after straightening");
  }
  return NormalizedMap{straightening, normalized, na};
}

CyclicWord cyclic_word(const MapAnalysis& analysis) {
  if (analysis.n() < 1) {
    throw std::invalid_argument("cyclic_word: map has no critical points");
  }
  CyclicWord word;
  for (const CriticalPoint& cp : analysis.critical_points) {
    CritKind kind =
        cp.second_derivative < 0.0 ? CritKind::LocalMax : CritKind::LocalMin;
    // Value of the letter: the merged exceptional value of its level.
    int best = 0;
    double best_dist = 1.0;
    for (int a = 0; a < analysis.n(); ++a) {
      // Levels store the critical points; match by membership.
      for (const LevelPoint& lp : analysis.levels[a]) {
        if (lp.critical && lp.point == cp.point) {
          best = a;
          best_dist = 0.0;
        }
      }
      if (best_dist == 0.0) break;
    }
    word.letters.push_back(
        WordLetter{cp.point, analysis.exceptional_values[best], kind});
  }
  const std::size_t m = word.letters.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (word.letters[i].kind == word.letters[(i + 1) % m].kind) {
      throw NumericError("cyclic_word: kinds do not alternate");
    }
  }
  return word;
}

std::optional<CircleDiffeo> right_equivalence(const CircleMap& f,
                                              const MapAnalysis& fa,
                                              const CircleMap& g,
                                              const MapAnalysis& ga,
                                              double value_tol,
                                              double residual_tol, int grid) {
  if (f.degree() != g.degree()) {
    throw std::invalid_argument("right_equivalence: degree mismatch");
  }
  auto residual_of = [&](const CircleDiffeo& h) {
    double worst = 0.0;
    for (int i = 0; i < grid; ++i) {
      Angle x(static_cast<double>(i) / grid);
      worst = std::max(worst, circle_dist(g(x), f(h(x))));
    }
    return worst;
  };

  if (fa.critical_points.empty() && ga.critical_points.empty()) {
    CircleDiffeo h = CircleDiffeo::from_node(
        std::make_shared<BranchConjugacyNode>(f, g, std::vector<double>{},
                                              std::vector<double>{}));
    if (residual_of(h) <= residual_tol) return h;
    return std::nullopt;
  }
  if (fa.critical_points.size() != ga.critical_points.size()) {
    return std::nullopt;
  }

  CyclicWord wf = cyclic_word(fa);
  CyclicWord wg = cyclic_word(ga);
  const std::size_t m = wf.letters.size();
  std::vector<Angle> f_cuts, g_cuts;
  for (const WordLetter& l : wf.letters) f_cuts.push_back(l.position);
  for (const WordLetter& l : wg.letters) g_cuts.push_back(l.position);

  for (std::size_t r = 0; r < m; ++r) {
    bool match = true;
    for (std::size_t i = 0; i < m && match; ++i) {
      const WordLetter& a = wf.letters[(i + r) % m];
      const WordLetter& b = wg.letters[i];
      match = a.kind == b.kind && circle_dist(a.value, b.value) <= value_tol;
    }
    if (!match) continue;
    std::vector<double> q = lifted_cycle(g_cuts, 0);
    std::vector<double> c = lifted_cycle(f_cuts, r);
    CircleDiffeo h = CircleDiffeo::from_node(
        std::make_shared<BranchConjugacyNode>(f, g, std::move(q),
                                              std::move(c)));
    if (residual_of(h) <= residual_tol) return h;
  }
  return std::nullopt;
}

namespace {

// Analysis of rotation(shift) o f derived from the analysis of f: critical
// points and levels are unchanged, values rotate and re-sort.
MapAnalysis shift_analysis(const MapAnalysis& a, double shift) {
  MapAnalysis out;
  out.degree = a.degree;
  out.morse = a.morse;
  out.critical_points = a.critical_points;
  const int n = a.n();
  std::vector<std::pair<Angle, int>> shifted;
  shifted.reserve(n);
  for (int i = 0; i < n; ++i) {
    shifted.emplace_back(Angle(a.exceptional_values[i].turns() + shift), i);
  }
  std::sort(shifted.begin(), shifted.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  for (const auto& [value, old_index] : shifted) {
    out.exceptional_values.push_back(value);
    out.levels.push_back(a.levels[old_index]);
  }
  return out;
}

}  // namespace

SymmetryInfo symmetry_group(const CircleMap& f_normalized,
                            const MapAnalysis& analysis) {
  const int n = analysis.n();
  if (n < 1) {
    throw std::invalid_argument("symmetry_group: map has no exceptional values");
  }
  for (int a = 0; a < n; ++a) {
    if (circle_dist(analysis.exceptional_values[a],
                    Angle(static_cast<double>(a) / n)) > 1e-7) {
      throw std::invalid_argument(
          "symmetry_group: exceptional values must sit at the base points");
    }
  }

  SymmetryInfo info;
  info.n = n;
  info.successful_shifts.push_back(0);
  for (int l = 1; l < n; ++l) {
    double shift = static_cast<double>(l) / n;
    CircleMap g =
        f_normalized.postcompose(CircleDiffeo::rotation(Angle(shift)));
    MapAnalysis ga = shift_analysis(analysis, shift);
    if (right_equivalence(f_normalized, analysis, g, ga)) {
      info.successful_shifts.push_back(l);
    }
  }
  // The set must be a subgroup of Z_n.
  for (int a : info.successful_shifts) {
    for (int b : info.successful_shifts) {
      int c = (a + b) % n;
      if (std::find(info.successful_shifts.begin(),
                    info.successful_shifts.end(),
                    c) == info.successful_shifts.end()) {
        throw NumericError(
            "symmetry_group: successful shifts do not form a subgroup");
      }
    }
  }
  info.k = static_cast<int>(info.successful_shifts.size());
  info.d = n / info.k;
  info.generator_shift = info.k > 1 ? info.successful_shifts[1] : 0;
  if (info.k > 1 && info.generator_shift != info.d) {
    throw NumericError("symmetry_group: subgroup is not generated by n/k");
  }
  return info;
}

}  // namespace s1map
