// Serial reference vs OpenMP kernels, and the three hybrid solvers.
// usage: nbiot_bench [points=20000] [repetitions=5]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <vector>

#include "nbiot/optimizer.hpp"
#include "nbiot/simulator.hpp"

using namespace nbiot;

namespace {

double median_seconds(int reps, const std::function<void()> &fn) {
  std::vector<double> t;
  for (int i = 0; i < reps; ++i) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

void row(const char *kernel, double serial, double parallel, bool same) {
  std::printf("%-28s %12.6f %12.6f %8.2fx %s\n", kernel, serial, parallel, serial / parallel,
              same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char **argv) {
  const std::size_t points = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 20000;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 5;
  std::printf("threads %d, sweep points %zu, median of %d\n\n", omp_get_max_threads(), points,
              reps);
  std::printf("%-28s %12s %12s %9s\n", "kernel", "serial_s", "parallel_s", "speedup");

  const auto k3 = default_k3_sweep(points);
  for (const Solver s : {Solver::exhaustive, Solver::lagrange, Solver::numeric_kkt}) {
    std::vector<AdaptationOutcome> a, b;
    const double ts = median_seconds(reps, [&] { a = solve_sweep_serial(k3, {}, s); });
    const double tp = median_seconds(reps, [&] { b = solve_sweep(k3, {}, s); });
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) {
      same = a[i].config == b[i].config && a[i].delay_ms == b[i].delay_ms;
    }
    const std::string name = "solve_sweep/" + std::string(to_string(s));
    row(name.c_str(), ts, tp, same);
  }

  for (const Area area : {Area::open_area, Area::urban}) {
    Scenario scn = area == Area::open_area ? Scenario::open_area() : Scenario::urban();
    ScenarioResult a, b;
    const double ts = median_seconds(reps, [&] { a = run_scenario_serial(scn); });
    const double tp = median_seconds(reps, [&] { b = run_scenario(scn); });
    const std::string name = "run_scenario/" + std::string(to_string(area));
    row(name.c_str(), ts, tp, a.mean_delay_ms == b.mean_delay_ms && a.pdr == b.pdr);
  }

  std::printf("\n%-12s %10s %12s %10s %12s\n", "solver", "nmse", "median_s", "speedup",
              "evaluations");
  const auto bench = benchmark_solvers(default_k3_sweep(std::min<std::size_t>(points, 1000)), {},
                                       {reps, true});
  for (const auto &s : bench.summaries) {
    std::printf("%-12s %10.3g %12.6f %9.2fx %12lld\n", std::string(to_string(s.solver)).c_str(),
                s.normalized_mse, s.median_sweep_time_s, s.speedup, s.evaluations);
  }
  return 0;
}
