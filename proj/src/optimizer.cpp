#include "nbiot/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace nbiot {

OptimizationProblem OptimizationProblem::with_k3(double k3) { return with_k3(k3, {}); }

OptimizationProblem OptimizationProblem::with_k3(double k3, const OptimizationProblem &base) {
  OptimizationProblem p = base;
  p.radio = RadioContext::from_k3(k3);
  return p;
}

std::string_view to_string(Solver solver) {
  switch (solver) {
    case Solver::exhaustive:
      return "exhaustive";
    case Solver::lagrange:
      return "lagrange";
    case Solver::numeric_kkt:
      return "numeric_kkt";
    case Solver::single_parameter:
      return "single_parameter";
  }
  return "unknown";
}

bool preferred(double delay_a, const LinkConfig &a, double delay_b, const LinkConfig &b) {
  if (delay_a != delay_b) return delay_a < delay_b;
  if (a.repetitions != b.repetitions) return a.repetitions < b.repetitions;
  if (a.time_factor != b.time_factor) return a.time_factor < b.time_factor;
  return a.mcs > b.mcs;
}

namespace {

// Both solvers go through these two helpers so that the constraint and the
// objective are evaluated with bit-identical arithmetic.
inline bool meets_threshold(double k3, int f, int r, double threshold) {
  return k3 * f * r >= threshold;
}

inline double delay_of(const DelayModelParams &params, double blocks, int r, int t) {
  return (params.k1() + params.k0() * r * t) * blocks;
}

AdaptationOutcome infeasible_outcome(const OptimizationProblem &p, Solver solver, int evaluations) {
  AdaptationOutcome out;
  out.config = kMaxCoverageConfig;
  out.delay_ms = transmission_delay(out.config, p.delay, p.tbs);
  out.feasible = false;
  out.solver = solver;
  out.evaluations = evaluations;
  return out;
}

// Smallest r in R with k3 f r >= threshold, or 0 when even r = 128 falls short.
int minimal_repetitions(double k3, int f, double threshold) {
  const double need = threshold / (k3 * f);
  int r = 1;
  if (need > 1.0) {
    int exponent = 0;
    const double mantissa = std::frexp(need, &exponent);
    if (exponent > 8) return 0;
    r = 1 << (mantissa == 0.5 ? exponent - 1 : exponent);
  }
  // Settle rounding in `need` against the exact predicate.
  while (r > 1 && meets_threshold(k3, f, r / 2, threshold)) r /= 2;
  while (r <= kRepetitions.back() && !meets_threshold(k3, f, r, threshold)) r *= 2;
  return r <= kRepetitions.back() ? r : 0;
}

}  // namespace

AdaptationOutcome exhaustive_search(const OptimizationProblem &p) {
  const double k3 = p.radio.k3();
  LinkConfig best{};
  double best_delay = 0.0;
  bool found = false;
  int evaluations = 0;
  for (int m = kMcsMin; m <= kMcsMax; ++m) {
    for (std::size_t ti = 0; ti < kTimeFactors.size(); ++ti) {
      for (const int r : kRepetitions) {
        const int t = kTimeFactors[ti];
        ++evaluations;
        const double threshold = snr_threshold(m, p.threshold);
        if (!meets_threshold(k3, kFrequencyFactors[ti], r, threshold)) continue;
        const double blocks = std::ceil(p.delay.k2() / tbs_of_mcs(m, p.tbs));
        const double d = delay_of(p.delay, blocks, r, t);
        const LinkConfig cfg{m, t, r};
        if (!found || preferred(d, cfg, best_delay, best)) {
          best = cfg;
          best_delay = d;
          found = true;
        }
      }
    }
  }
  if (!found) return infeasible_outcome(p, Solver::exhaustive, evaluations);
  return {best, best_delay, true, Solver::exhaustive, 0.0, evaluations};
}

int evaluate_snapped_candidates(const OptimizationProblem &p, int m,
                                std::span<const double> continuous_t, LinkConfig &best,
                                double &best_delay, bool &found) {
  // Bit i set => kTimeFactors[i] is a candidate. Index 0 is the t = 1 bound.
  unsigned mask = 1u;
  const std::size_t last = kTimeFactors.size() - 1;
  for (const double ts : continuous_t) {
    if (ts <= kTimeFactors.front()) {
      mask |= 1u;
    } else if (ts >= kTimeFactors[last]) {
      mask |= 1u << last;
    } else {
      std::size_t i = 0;
      while (kTimeFactors[i + 1] <= ts) ++i;
      mask |= (1u << i) | (1u << (i + 1));
    }
  }

  const double k3 = p.radio.k3();
  const double threshold = snr_threshold(m, p.threshold);
  const double blocks = std::ceil(p.delay.k2() / tbs_of_mcs(m, p.tbs));
  int evaluations = 0;
  for (std::size_t ti = 0; ti <= last; ++ti) {
    if (!(mask & (1u << ti))) continue;
    ++evaluations;
    const int r = minimal_repetitions(k3, kFrequencyFactors[ti], threshold);
    if (r == 0) continue;
    const int t = kTimeFactors[ti];
    const double d = delay_of(p.delay, blocks, r, t);
    const LinkConfig cfg{m, t, r};
    if (!found || preferred(d, cfg, best_delay, best)) {
      best = cfg;
      best_delay = d;
      found = true;
    }
  }
  return evaluations;
}

LagrangeOptimizer::LagrangeOptimizer(const ToneMapping &mapping)
    : stationary_(solve_time_cubic(mapping)) {}

AdaptationOutcome LagrangeOptimizer::operator()(const OptimizationProblem &p) const {
  LinkConfig best{};
  double best_delay = 0.0;
  bool found = false;
  int evaluations = 0;
  for (int m = kMcsMin; m <= kMcsMax; ++m) {
    evaluations += evaluate_snapped_candidates(p, m, stationary_.admissible, best, best_delay, found);
  }
  if (!found) return infeasible_outcome(p, Solver::lagrange, evaluations);
  return {best, best_delay, true, Solver::lagrange, 0.0, evaluations};
}

AdaptationOutcome lagrange_optimize(const OptimizationProblem &p) {
  return LagrangeOptimizer(p.tones)(p);
}

AdaptationOutcome solve(const OptimizationProblem &p, Solver solver) {
  const auto start = std::chrono::steady_clock::now();
  AdaptationOutcome out;
  switch (solver) {
    case Solver::exhaustive:
      out = exhaustive_search(p);
      break;
    case Solver::lagrange:
      out = lagrange_optimize(p);
      break;
    case Solver::numeric_kkt:
      out = numeric_kkt_optimize(p);
      break;
    case Solver::single_parameter:
      throw std::invalid_argument("single-parameter strategies are run by the simulator");
  }
  out.solve_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

namespace {

AdaptationOutcome solve_untimed(const OptimizationProblem &p, Solver solver,
                                const LagrangeOptimizer &lagrange) {
  switch (solver) {
    case Solver::exhaustive:
      return exhaustive_search(p);
    case Solver::lagrange:
      return lagrange(p);
    case Solver::numeric_kkt:
      return numeric_kkt_optimize(p);
    case Solver::single_parameter:
      break;
  }
  throw std::invalid_argument("single-parameter strategies are run by the simulator");
}

}  // namespace

std::vector<AdaptationOutcome> solve_sweep_serial(std::span<const double> k3_values,
                                                  const OptimizationProblem &base, Solver solver) {
  const LagrangeOptimizer lagrange(base.tones);
  std::vector<AdaptationOutcome> out(k3_values.size());
  for (std::size_t i = 0; i < k3_values.size(); ++i) {
    out[i] = solve_untimed(OptimizationProblem::with_k3(k3_values[i], base), solver, lagrange);
  }
  return out;
}

std::vector<AdaptationOutcome> solve_sweep(std::span<const double> k3_values,
                                           const OptimizationProblem &base, Solver solver) {
  const LagrangeOptimizer lagrange(base.tones);
  std::vector<AdaptationOutcome> out(k3_values.size());
  const auto n = static_cast<long>(k3_values.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    out[i] = solve_untimed(OptimizationProblem::with_k3(k3_values[i], base), solver, lagrange);
  }
  return out;
}

std::vector<double> log_space(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo) || n == 0) {
    throw std::invalid_argument("log_space needs 0 < lo <= hi and n >= 1");
  }
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log10(lo);
  const double step = (std::log10(hi) - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::pow(10.0, a + step * static_cast<double>(i));
  out.back() = hi;
  return out;
}

std::vector<double> default_k3_sweep(std::size_t n, const OptimizationProblem &base) {
  const double lo = snr_threshold(kMcsMin, base.threshold) /
                    (static_cast<double>(kFrequencyFactors.back()) * kRepetitions.back());
  const double hi = 2.0 * snr_threshold(kMcsMax, base.threshold);
  return log_space(lo, hi, n);
}

const SolverSummary &BenchmarkResult::summary(Solver solver) const {
  for (const auto &s : summaries) {
    if (s.solver == solver) return s;
  }
  throw std::out_of_range("no summary for solver " + std::string(to_string(solver)));
}

BenchmarkResult benchmark_solvers(std::span<const double> k3_values,
                                  const OptimizationProblem &base,
                                  const BenchmarkOptions &options) {
  if (k3_values.empty()) throw std::invalid_argument("benchmark sweep is empty");
  const int reps = std::max(options.repetitions, 1);

  std::vector<Solver> solvers = {Solver::exhaustive, Solver::lagrange};
  if (options.include_numeric) solvers.push_back(Solver::numeric_kkt);

  std::vector<OptimizationProblem> problems;
  problems.reserve(k3_values.size());
  for (const double k3 : k3_values) problems.push_back(OptimizationProblem::with_k3(k3, base));

  BenchmarkResult result;
  std::vector<std::vector<AdaptationOutcome>> outcomes;
  for (const Solver s : solvers) {
    std::vector<AdaptationOutcome> per_point;
    per_point.reserve(problems.size());
    for (std::size_t i = 0; i < problems.size(); ++i) {
      per_point.push_back(solve(problems[i], s));
      result.rows.push_back({k3_values[i], per_point.back()});
    }
    outcomes.push_back(std::move(per_point));
  }

  const LagrangeOptimizer lagrange(base.tones);
  volatile double sink = 0.0;
  std::vector<double> medians;
  for (const Solver s : solvers) {
    std::vector<double> times;
    for (int rep = 0; rep < reps; ++rep) {
      double checksum = 0.0;
      const auto start = std::chrono::steady_clock::now();
      for (const auto &p : problems) checksum += solve_untimed(p, s, lagrange).delay_ms;
      times.push_back(
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
      sink = sink + checksum;
    }
    std::sort(times.begin(), times.end());
    medians.push_back(times[times.size() / 2]);
  }

  const auto &reference = outcomes.front();
  for (std::size_t si = 0; si < solvers.size(); ++si) {
    SolverSummary sum;
    sum.solver = solvers[si];
    double sq = 0.0;
    int matches = 0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
      const double ref = reference[i].delay_ms;
      const double d = outcomes[si][i].delay_ms;
      const double e = (d - ref) / ref;
      sq += e * e;
      if (d == ref) ++matches;
      if (d < ref) ++sum.undercuts;
      sum.evaluations += outcomes[si][i].evaluations;
    }
    const auto n = static_cast<double>(reference.size());
    sum.normalized_mse = sq / n;
    sum.exact_match_fraction = matches / n;
    sum.median_sweep_time_s = medians[si];
    sum.speedup = medians[0] / medians[si];
    result.summaries.push_back(sum);
  }
  return result;
}

}  // namespace nbiot
