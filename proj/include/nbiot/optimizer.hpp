#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nbiot/model.hpp"

// Delay-minimal choice of (MCS, tones, repetitions) under the SNR constraint
// k3 * f(t) * r >= SNR_Th(m).

namespace nbiot {

struct OptimizationProblem {
  RadioContext radio = RadioContext::from_k3(1.0);
  DelayModelParams delay;
  TbsModel tbs;
  SnrThresholdModel threshold;
  ToneMapping tones;

  static OptimizationProblem with_k3(double k3);
  static OptimizationProblem with_k3(double k3, const OptimizationProblem &base);
};

enum class Solver { exhaustive, lagrange, numeric_kkt, single_parameter };

std::string_view to_string(Solver solver);

struct AdaptationOutcome {
  LinkConfig config;
  double delay_ms = 0.0;
  bool feasible = false;
  Solver solver = Solver::exhaustive;
  double solve_time_s = 0.0;
  /// Number of discrete configurations whose delay and constraint were evaluated.
  int evaluations = 0;
};

/// Returned, flagged infeasible, when no configuration meets the threshold.
inline constexpr LinkConfig kMaxCoverageConfig{kMcsMin, 32, 128};

/// Strict ordering used by every solver: lower delay, then fewer repetitions,
/// then smaller time factor, then higher MCS.
bool preferred(double delay_a, const LinkConfig &a, double delay_b, const LinkConfig &b);

/// Scans all 13 * 5 * 8 = 520 discrete configurations.
AdaptationOutcome exhaustive_search(const OptimizationProblem &p);

/// Real roots of the stationarity condition in t, obtained by eliminating r
/// and lambda from the Lagrangian derivatives.
struct StationaryTimeFactors {
  std::vector<double> numerator_roots;    ///< 2 p1 t^3 + p2 t^2 - p4 = 0, ascending
  std::vector<double> denominator_roots;  ///< 3 p1 t^2 + 2 p2 t + p3 = 0, ascending
  std::vector<double> admissible;         ///< positive numerator roots that are not poles
};

StationaryTimeFactors solve_time_cubic(const ToneMapping &mapping);

/// Real roots of c[0] x^n + ... + c[n], ascending, for degree <= 3. Leading zero
/// coefficients reduce the degree. Repeated roots are reported once.
std::vector<double> real_polynomial_roots(std::span<const double> coefficients);

/// Closed-form solver. The stationary time factors do not depend on k3 or m,
/// so they are computed once per tone mapping and reused across problems.
class LagrangeOptimizer {
 public:
  explicit LagrangeOptimizer(const ToneMapping &mapping = {});

  AdaptationOutcome operator()(const OptimizationProblem &p) const;
  const StationaryTimeFactors &stationary() const { return stationary_; }

 private:
  StationaryTimeFactors stationary_;
};

AdaptationOutcome lagrange_optimize(const OptimizationProblem &p);

/// Discrete candidates for one MCS: every continuous time factor maps to its
/// two neighbours in T, and the lower bound t = 1 (where r = 1 is active) is
/// always included. Each candidate takes the smallest r in R meeting the
/// constraint. Candidates without any feasible r are skipped.
/// Returns the number of configurations evaluated; updates best/best_delay.
int evaluate_snapped_candidates(const OptimizationProblem &p, int m,
                                std::span<const double> continuous_t, LinkConfig &best,
                                double &best_delay, bool &found);

/// Stationarity and feasibility residuals of the Lagrangian for fixed m:
///   c t - k3 lambda f(t)          (d/dr)
///   c r - k3 lambda r f'(t)       (d/dt)
///   S - k3 r f(t)                 (d/dlambda)
/// with c = k0 k2 / TBS(m) and S = SNR_Th(m).
struct KktPoint {
  double r = 0.0;
  double t = 0.0;
  double lambda = 0.0;
};

class KktSystem {
 public:
  KktSystem(const OptimizationProblem &p, double m);

  std::array<double, 3> residuals(const KktPoint &x) const;
  /// The residuals divided by c, c r and S. Dimensionless, so one tolerance
  /// works for every k3 and MCS; also drops the spurious r = 0 branch.
  std::array<double, 3> scaled_residuals(const KktPoint &x) const;
  /// Jacobian of the scaled residuals with respect to (r, t, lambda).
  std::array<std::array<double, 3>, 3> jacobian(const KktPoint &x) const;
  /// Euclidean norm of the scaled residuals.
  double residual_norm(const KktPoint &x) const;
  /// Initial guess at a given t: r and lambda from closing the first and
  /// third equations there.
  KktPoint initial_point(double t) const;

 private:
  double c_;
  double k3_;
  double threshold_;
  ToneMapping tones_;
};

struct NewtonOptions {
  double tolerance = 1e-9;
  int max_iterations = 100;
  double backtrack = 0.5;
};

/// Damped Newton solve of the KKT system for fixed m. Starts from
/// t in {1, 4, 16}; returns distinct converged interior points (t in (0, 32],
/// r > 0) whose residual norm is below the tolerance.
std::vector<KktPoint> solve_kkt_numeric(const OptimizationProblem &p, double m,
                                        const NewtonOptions &options = {});
/// Same, from caller-supplied initial points.
std::vector<KktPoint> solve_kkt_numeric(const OptimizationProblem &p, double m,
                                        std::span<const KktPoint> starts,
                                        const NewtonOptions &options = {});

/// Iterative solver: Newton on the KKT system for each m, discretized like the
/// closed-form method. Converged points of one MCS seed the next; the fixed
/// start grid is used whenever that fails. Falls back to exhaustive search if
/// no MCS yields a converged point.
AdaptationOutcome numeric_kkt_optimize(const OptimizationProblem &p,
                                       const NewtonOptions &options = {});

struct PolyFit {
  std::vector<double> coefficients;  ///< highest degree first
  double mse = 0.0;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Least-squares polynomial fit via Householder QR. Throws std::invalid_argument
/// for too few points and std::domain_error for a rank-deficient system.
PolyFit fit_polynomial(std::span<const Point2> points, int degree);
double polyval(std::span<const double> coefficients_high_first, double x);

AdaptationOutcome solve(const OptimizationProblem &p, Solver solver);

/// Batch kernels: one outcome per k3 value, same base problem. The serial
/// version is the reference; the parallel version splits points across
/// OpenMP threads and must produce identical outcomes (timings aside).
std::vector<AdaptationOutcome> solve_sweep(std::span<const double> k3_values,
                                           const OptimizationProblem &base, Solver solver);
std::vector<AdaptationOutcome> solve_sweep_serial(std::span<const double> k3_values,
                                                  const OptimizationProblem &base, Solver solver);

/// n log-spaced values in [lo, hi].
std::vector<double> log_space(double lo, double hi, std::size_t n);
/// Default sweep: from the weakest k3 that any configuration can serve up to
/// twice SNR_Th(12), so the optimum visits every MCS.
std::vector<double> default_k3_sweep(std::size_t n, const OptimizationProblem &base = {});

struct BenchmarkOptions {
  int repetitions = 5;
  bool include_numeric = true;
};

struct BenchmarkRow {
  double k3 = 0.0;
  AdaptationOutcome outcome;
};

struct SolverSummary {
  Solver solver = Solver::exhaustive;
  /// Mean of ((delay - exhaustive) / exhaustive)^2 over the sweep.
  double normalized_mse = 0.0;
  double exact_match_fraction = 0.0;
  /// Points where this solver returned a lower delay than exhaustive search.
  int undercuts = 0;
  double median_sweep_time_s = 0.0;
  double speedup = 1.0;
  long long evaluations = 0;
};

struct BenchmarkResult {
  std::vector<BenchmarkRow> rows;
  std::vector<SolverSummary> summaries;

  const SolverSummary &summary(Solver solver) const;
};

/// Single-threaded timing; each method runs the whole sweep `repetitions`
/// times and the median wall-clock time is kept.
BenchmarkResult benchmark_solvers(std::span<const double> k3_values,
                                  const OptimizationProblem &base,
                                  const BenchmarkOptions &options = {});

}  // namespace nbiot
