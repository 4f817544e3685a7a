#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "nbiot/optimizer.hpp"

namespace nbiot {

std::vector<double> real_polynomial_roots(std::span<const double> coefficients) {
  std::size_t lead = 0;
  while (lead < coefficients.size() && coefficients[lead] == 0.0) ++lead;
  const auto c = coefficients.subspan(lead);
  if (c.size() > 4) throw std::invalid_argument("polynomial degree above 3");

  std::vector<double> roots;
  switch (c.size()) {
    case 0:
    case 1:
      return roots;
    case 2:
      roots.push_back(-c[1] / c[0]);
      return roots;
    case 3: {
      const double a = c[0], b = c[1], cc = c[2];
      const double disc = b * b - 4.0 * a * cc;
      if (disc < 0.0) return roots;
      if (disc == 0.0) {
        roots.push_back(-b / (2.0 * a));
        return roots;
      }
      // Cancellation-free pair.
      const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
      roots.push_back(q / a);
      roots.push_back(cc / q);
      break;
    }
    default: {
      const double a = c[1] / c[0], b = c[2] / c[0], d = c[3] / c[0];
      // x = y - a/3 gives y^3 + p y + q = 0.
      const double p = b - a * a / 3.0;
      const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + d;
      const double disc = q * q / 4.0 + p * p * p / 27.0;
      const double shift = -a / 3.0;
      if (disc > 0.0) {
        const double s = std::sqrt(disc);
        roots.push_back(std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s) + shift);
      } else if (p == 0.0) {
        roots.push_back(shift);
      } else {
        const double rho = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * rho), -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
          roots.push_back(rho * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) + shift);
        }
      }
      // Two Newton polishing steps on the original polynomial.
      for (double &x : roots) {
        for (int it = 0; it < 2; ++it) {
          const double v = ((c[0] * x + c[1]) * x + c[2]) * x + c[3];
          const double dv = (3.0 * c[0] * x + 2.0 * c[1]) * x + c[2];
          if (dv != 0.0) x -= v / dv;
        }
      }
      break;
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double x, double y) {
                            return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x));
                          }),
              roots.end());
  return roots;
}

StationaryTimeFactors solve_time_cubic(const ToneMapping &mapping) {
  StationaryTimeFactors out;
  const double numerator[] = {2.0 * mapping.p1, mapping.p2, 0.0, -mapping.p4};
  const double denominator[] = {3.0 * mapping.p1, 2.0 * mapping.p2, mapping.p3};
  out.numerator_roots = real_polynomial_roots(numerator);
  out.denominator_roots = real_polynomial_roots(denominator);
  for (const double t : out.numerator_roots) {
    if (t <= 0.0) continue;
    const bool pole = std::any_of(out.denominator_roots.begin(), out.denominator_roots.end(),
                                  [t](double d) { return std::abs(d - t) < 1e-9; });
    if (!pole) out.admissible.push_back(t);
  }
  return out;
}

KktSystem::KktSystem(const OptimizationProblem &p, double m)
    : c_(p.delay.k0() * p.delay.k2() / tbs_of_mcs(m, p.tbs)),
      k3_(p.radio.k3()),
      threshold_(snr_threshold(m, p.threshold)),
      tones_(p.tones) {}

std::array<double, 3> KktSystem::residuals(const KktPoint &x) const {
  const double f = tones_.fit(x.t);
  const double df = tones_.fit_derivative(x.t);
  return {c_ * x.t - k3_ * x.lambda * f, c_ * x.r - k3_ * x.lambda * x.r * df,
          threshold_ - k3_ * x.r * f};
}

std::array<double, 3> KktSystem::scaled_residuals(const KktPoint &x) const {
  const double f = tones_.fit(x.t);
  const double df = tones_.fit_derivative(x.t);
  const double mu = k3_ * x.lambda / c_;
  return {x.t - mu * f, 1.0 - mu * df, 1.0 - k3_ * x.r * f / threshold_};
}

std::array<std::array<double, 3>, 3> KktSystem::jacobian(const KktPoint &x) const {
  const double f = tones_.fit(x.t);
  const double df = tones_.fit_derivative(x.t);
  const double d2f = 6.0 * tones_.p1 * x.t + 2.0 * tones_.p2;
  const double a = k3_ / c_;
  const double b = k3_ / threshold_;
  return {{{0.0, 1.0 - a * x.lambda * df, -a * f},
           {0.0, -a * x.lambda * d2f, -a * df},
           {-b * f, -b * x.r * df, 0.0}}};
}

double KktSystem::residual_norm(const KktPoint &x) const {
  const auto g = scaled_residuals(x);
  return std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
}

KktPoint KktSystem::initial_point(double t) const {
  const double f = tones_.fit(t);
  return {threshold_ / (k3_ * f), t, c_ * t / (k3_ * f)};
}

namespace {

// Gaussian elimination with partial pivoting; nullopt for a singular matrix.
std::optional<std::array<double, 3>> solve3(std::array<std::array<double, 3>, 3> a,
                                            std::array<double, 3> b) {
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int row = col + 1; row < 3; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[piv][col])) piv = row;
    }
    if (std::abs(a[piv][col]) < 1e-300) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int row = col + 1; row < 3; ++row) {
      const double factor = a[row][col] / a[col][col];
      for (int k = col; k < 3; ++k) a[row][k] -= factor * a[col][k];
      b[row] -= factor * b[col];
    }
  }
  std::array<double, 3> x{};
  for (int row = 2; row >= 0; --row) {
    double s = b[row];
    for (int k = row + 1; k < 3; ++k) s -= a[row][k] * x[k];
    x[row] = s / a[row][row];
  }
  return x;
}

std::optional<KktPoint> newton(const KktSystem &sys, KktPoint x, const NewtonOptions &opt) {
  double norm = sys.residual_norm(x);
  for (int it = 0; it < opt.max_iterations && norm >= opt.tolerance; ++it) {
    const auto g = sys.scaled_residuals(x);
    const auto step = solve3(sys.jacobian(x), {-g[0], -g[1], -g[2]});
    if (!step) return std::nullopt;
    double alpha = 1.0;
    KktPoint trial{};
    double trial_norm = norm;
    for (int k = 0; k < 30; ++k) {
      trial = {x.r + alpha * (*step)[0], x.t + alpha * (*step)[1], x.lambda + alpha * (*step)[2]};
      trial_norm = sys.residual_norm(trial);
      if (std::isfinite(trial_norm) && trial_norm < norm) break;
      alpha *= opt.backtrack;
    }
    if (!(trial_norm < norm)) return std::nullopt;
    x = trial;
    norm = trial_norm;
  }
  if (!(norm < opt.tolerance)) return std::nullopt;
  if (!(x.t > 0.0 && x.t <= kTimeFactors.back() && x.r > 0.0)) return std::nullopt;
  return x;
}

// Fixed-capacity set of converged points, distinct in t.
struct PointSet {
  std::array<KktPoint, 8> items{};
  std::size_t size = 0;

  void add(const KktPoint &x) {
    for (std::size_t i = 0; i < size; ++i) {
      if (std::abs(items[i].t - x.t) < 1e-6) return;
    }
    if (size < items.size()) items[size++] = x;
  }
};

void solve_from(const KktSystem &sys, std::span<const KktPoint> starts,
                const NewtonOptions &options, PointSet &found) {
  found.size = 0;
  for (const auto &start : starts) {
    if (const auto x = newton(sys, start, options)) found.add(*x);
  }
}

void solve_from_grid(const KktSystem &sys, const NewtonOptions &options, PointSet &found) {
  const KktPoint starts[] = {sys.initial_point(1.0), sys.initial_point(4.0),
                             sys.initial_point(16.0)};
  solve_from(sys, starts, options, found);
}

}  // namespace

std::vector<KktPoint> solve_kkt_numeric(const OptimizationProblem &p, double m,
                                        std::span<const KktPoint> starts,
                                        const NewtonOptions &options) {
  const KktSystem sys(p, m);
  std::vector<KktPoint> found;
  for (const auto &start : starts) {
    const auto x = newton(sys, start, options);
    if (!x) continue;
    const bool seen = std::any_of(found.begin(), found.end(), [&](const KktPoint &q) {
      return std::abs(q.t - x->t) < 1e-6;
    });
    if (!seen) found.push_back(*x);
  }
  std::sort(found.begin(), found.end(),
            [](const KktPoint &a, const KktPoint &b) { return a.t < b.t; });
  return found;
}

std::vector<KktPoint> solve_kkt_numeric(const OptimizationProblem &p, double m,
                                        const NewtonOptions &options) {
  const KktSystem sys(p, m);
  const KktPoint starts[] = {sys.initial_point(1.0), sys.initial_point(4.0),
                             sys.initial_point(16.0)};
  return solve_kkt_numeric(p, m, starts, options);
}

AdaptationOutcome numeric_kkt_optimize(const OptimizationProblem &p, const NewtonOptions &options) {
  LinkConfig best{};
  double best_delay = 0.0;
  bool found = false;
  bool any_converged = false;
  int evaluations = 0;
  PointSet previous;
  PointSet points;
  std::array<double, 8> ts{};
  for (int m = kMcsMin; m <= kMcsMax; ++m) {
    const KktSystem sys(p, m);
    points.size = 0;
    if (previous.size > 0) {
      // Predictor: keep t, re-close r and lambda for the new MCS.
      for (std::size_t i = 0; i < previous.size; ++i) {
        previous.items[i] = sys.initial_point(previous.items[i].t);
      }
      solve_from(sys, std::span(previous.items.data(), previous.size), options, points);
    }
    if (previous.size == 0 || points.size < previous.size) solve_from_grid(sys, options, points);
    if (points.size == 0) continue;
    any_converged = true;
    for (std::size_t i = 0; i < points.size; ++i) ts[i] = points.items[i].t;
    evaluations += evaluate_snapped_candidates(p, m, std::span(ts.data(), points.size), best,
                                               best_delay, found);
    previous = points;
  }
  if (!any_converged) {
    auto out = exhaustive_search(p);
    out.solver = Solver::numeric_kkt;
    return out;
  }
  if (!found) {
    AdaptationOutcome out;
    out.config = kMaxCoverageConfig;
    out.delay_ms = transmission_delay(out.config, p.delay, p.tbs);
    out.solver = Solver::numeric_kkt;
    out.evaluations = evaluations;
    return out;
  }
  return {best, best_delay, true, Solver::numeric_kkt, 0.0, evaluations};
}

}  // namespace nbiot
