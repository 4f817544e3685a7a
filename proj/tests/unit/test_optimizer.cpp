#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nbiot/optimizer.hpp"

using namespace nbiot;

namespace {

struct Golden {
  double k3;
  LinkConfig config;
  double delay;
};

// Brute-force reference values (tests/oracles/oracle.py).
const Golden kGolden[] = {
    {3.445332, {12, 1, 1}, 9.0},   {0.01, {2, 32, 1}, 120.0}, {0.001, {8, 32, 32}, 1032.0},
    {1.0, {9, 2, 1}, 10.0},        {0.089, {9, 8, 2}, 24.0},
};

}  // namespace

TEST_SUITE("optimizer") {

TEST_CASE("exhaustive search golden values") {
  for (const auto &g : kGolden) {
    CAPTURE(g.k3);
    const auto out = exhaustive_search(OptimizationProblem::with_k3(g.k3));
    CHECK(out.feasible);
    CHECK(out.config == g.config);
    CHECK(out.delay_ms == g.delay);
    CHECK(out.evaluations == 520);
  }
}

TEST_CASE("infeasible returns max coverage") {
  const double k3 = snr_threshold(0) / (48.0 * 128.0) * 0.999;
  for (const Solver s : {Solver::exhaustive, Solver::lagrange, Solver::numeric_kkt}) {
    const auto out = solve(OptimizationProblem::with_k3(k3), s);
    CHECK_FALSE(out.feasible);
    CHECK(out.config == kMaxCoverageConfig);
    CHECK(out.solver == s);
  }
  CHECK(exhaustive_search(OptimizationProblem::with_k3(k3 / 0.999)).feasible);
}

TEST_CASE("tie break") {
  CHECK(preferred(9.0, {12, 1, 1}, 10.0, {12, 1, 1}));
  CHECK(preferred(9.0, {12, 1, 1}, 9.0, {12, 1, 2}));
  CHECK(preferred(9.0, {12, 1, 2}, 9.0, {12, 2, 1}) == false);
  CHECK(preferred(9.0, {12, 1, 1}, 9.0, {12, 2, 1}));
  CHECK(preferred(9.0, {12, 1, 1}, 9.0, {11, 1, 1}));
  CHECK_FALSE(preferred(9.0, {11, 1, 1}, 9.0, {11, 1, 1}));
}

TEST_CASE("polynomial roots") {
  const double linear[] = {0.0, 0.0, 2.0, -4.0};
  CHECK(real_polynomial_roots(linear) == std::vector<double>{2.0});
  const double quad[] = {1.0, -3.0, 2.0};
  const auto q = real_polynomial_roots(quad);
  REQUIRE(q.size() == 2);
  CHECK(q[0] == doctest::Approx(1.0));
  CHECK(q[1] == doctest::Approx(2.0));
  const double none[] = {1.0, 0.0, 1.0};
  CHECK(real_polynomial_roots(none).empty());
  const double cubic[] = {1.0, -6.0, 11.0, -6.0};
  const auto c = real_polynomial_roots(cubic);
  REQUIRE(c.size() == 3);
  CHECK(c[0] == doctest::Approx(1.0));
  CHECK(c[1] == doctest::Approx(2.0));
  CHECK(c[2] == doctest::Approx(3.0));
  const double one_real[] = {1.0, 0.0, 0.0, -8.0};
  const auto o = real_polynomial_roots(one_real);
  REQUIRE(o.size() == 1);
  CHECK(o[0] == doctest::Approx(2.0));
  const double quartic[] = {1.0, 0.0, 0.0, 0.0, 1.0};
  CHECK_THROWS_AS(real_polynomial_roots(quartic), std::invalid_argument);
}

TEST_CASE("stationary time factors") {
  const auto s = solve_time_cubic(ToneMapping{});
  REQUIRE(s.numerator_roots.size() == 3);
  CHECK(s.numerator_roots[0] == doctest::Approx(-1.9363178).epsilon(1e-6));
  CHECK(s.numerator_roots[1] == doctest::Approx(2.14241551).epsilon(1e-6));
  CHECK(s.numerator_roots[2] == doctest::Approx(20.12830357).epsilon(1e-6));
  REQUIRE(s.denominator_roots.size() == 2);
  CHECK(s.denominator_roots[0] == doctest::Approx(-0.21520467).epsilon(1e-6));
  CHECK(s.denominator_roots[1] == doctest::Approx(27.32773971).epsilon(1e-6));
  REQUIRE(s.admissible.size() == 2);
  CHECK(s.admissible[0] == doctest::Approx(2.142).epsilon(1e-3));
  CHECK(s.admissible[1] == doctest::Approx(20.128).epsilon(1e-3));
}

TEST_CASE("lagrange matches golden values with fewer evaluations") {
  const LagrangeOptimizer lag;
  for (const auto &g : kGolden) {
    CAPTURE(g.k3);
    const auto out = lag(OptimizationProblem::with_k3(g.k3));
    CHECK(out.config == g.config);
    CHECK(out.delay_ms == g.delay);
    CHECK(out.evaluations == 65);
    CHECK(out.solver == Solver::lagrange);
  }
}

TEST_CASE("kkt residuals vanish at a stationary point") {
  const auto p = OptimizationProblem::with_k3(0.05);
  const KktSystem sys(p, 4.0);
  const auto x = sys.initial_point(2.14241551);
  const auto g = sys.residuals(x);
  CHECK(g[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(g[1]) < 1e-6);
  CHECK(g[2] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sys.residual_norm(sys.initial_point(8.0)) > 1e-3);
}

TEST_CASE("kkt jacobian matches finite differences") {
  const auto p = OptimizationProblem::with_k3(0.3);
  const KktSystem sys(p, 7.0);
  const KktPoint x{3.0, 5.0, 40.0};
  const auto jac = sys.jacobian(x);
  const double h = 1e-6;
  for (int j = 0; j < 3; ++j) {
    KktPoint a = x, b = x;
    double *pa = j == 0 ? &a.r : j == 1 ? &a.t : &a.lambda;
    double *pb = j == 0 ? &b.r : j == 1 ? &b.t : &b.lambda;
    *pa += h;
    *pb -= h;
    const auto ga = sys.scaled_residuals(a);
    const auto gb = sys.scaled_residuals(b);
    for (int i = 0; i < 3; ++i) {
      CAPTURE(i);
      CAPTURE(j);
      CHECK(jac[i][j] == doctest::Approx((ga[i] - gb[i]) / (2 * h)).epsilon(1e-5));
    }
  }
}

TEST_CASE("numeric kkt converges to both admissible roots") {
  for (const double k3 : {0.001, 0.05, 1.0}) {
    for (int m = 0; m <= 12; m += 3) {
      const auto p = OptimizationProblem::with_k3(k3);
      const auto pts = solve_kkt_numeric(p, m);
      REQUIRE(pts.size() == 2);
      CHECK(pts[0].t == doctest::Approx(2.14241551).epsilon(1e-3));
      CHECK(pts[1].t == doctest::Approx(20.12830357).epsilon(1e-3));
      const KktSystem sys(p, m);
      for (const auto &x : pts) {
        CHECK(sys.residual_norm(x) < 1e-9);
        CHECK(x.r > 0.0);
      }
    }
  }
}

TEST_CASE("numeric kkt with no convergent start") {
  const auto p = OptimizationProblem::with_k3(0.05);
  const KktPoint starts[] = {{1.0, 1.0, -1.0}};
  NewtonOptions opts;
  opts.max_iterations = 1;
  CHECK(solve_kkt_numeric(p, 3, starts, opts).empty());
}

TEST_CASE("numeric kkt golden values") {
  for (const auto &g : kGolden) {
    const auto out = numeric_kkt_optimize(OptimizationProblem::with_k3(g.k3));
    CHECK(out.config == g.config);
    CHECK(out.delay_ms == g.delay);
    CHECK(out.solver == Solver::numeric_kkt);
  }
}

TEST_CASE("polynomial fit") {
  const Point2 pts[] = {{1, 1}, {2, 2}, {4, 4}, {8, 12}, {32, 48}};
  const auto fit = fit_polynomial(pts, 3);
  REQUIRE(fit.coefficients.size() == 4);
  CHECK(fit.coefficients[0] == doctest::Approx(-0.00499354).epsilon(1e-5));
  CHECK(fit.coefficients[1] == doctest::Approx(0.20310042).epsilon(1e-5));
  CHECK(fit.coefficients[2] == doctest::Approx(0.08811017).epsilon(1e-5));
  CHECK(fit.coefficients[3] == doctest::Approx(0.83397643).epsilon(1e-5));
  CHECK(fit.mse == doctest::Approx(0.0151243454).epsilon(1e-6));

  const Point2 line[] = {{0, 1}, {1, 3}, {2, 5}};
  const auto l = fit_polynomial(line, 1);
  CHECK(l.coefficients[0] == doctest::Approx(2.0));
  CHECK(l.coefficients[1] == doctest::Approx(1.0));
  CHECK(l.mse == doctest::Approx(0.0).epsilon(1e-20));
  CHECK(polyval(l.coefficients, 10.0) == doctest::Approx(21.0));

  CHECK_THROWS_AS(fit_polynomial(std::span(line, 2), 2), std::invalid_argument);
  const Point2 dup[] = {{1, 1}, {1, 2}, {1, 3}};
  CHECK_THROWS_AS(fit_polynomial(dup, 2), std::domain_error);
}

TEST_CASE("sweep kernels agree") {
  const auto k3 = default_k3_sweep(400);
  for (const Solver s : {Solver::exhaustive, Solver::lagrange, Solver::numeric_kkt}) {
    const auto par = solve_sweep(k3, {}, s);
    const auto ser = solve_sweep_serial(k3, {}, s);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
      CHECK(par[i].config == ser[i].config);
      CHECK(par[i].delay_ms == ser[i].delay_ms);
    }
  }
  CHECK_THROWS_AS(solve(OptimizationProblem{}, Solver::single_parameter), std::invalid_argument);
}

TEST_CASE("log space") {
  const auto v = log_space(1.0, 100.0, 3);
  CHECK(v[0] == 1.0);
  CHECK(v[1] == doctest::Approx(10.0));
  CHECK(v[2] == 100.0);
  CHECK(log_space(2.0, 3.0, 1) == std::vector<double>{2.0});
  CHECK_THROWS(log_space(0.0, 1.0, 3));
  CHECK_THROWS(log_space(2.0, 1.0, 3));
  const auto d = default_k3_sweep(10);
  CHECK(d.front() == doctest::Approx(snr_threshold(0) / 6144.0));
  CHECK(d.back() == doctest::Approx(2.0 * snr_threshold(12)));
}

TEST_CASE("benchmark summary") {
  const auto k3 = default_k3_sweep(50);
  const auto b = benchmark_solvers(k3, {}, {1, true});
  CHECK(b.rows.size() == 150);
  CHECK(b.summary(Solver::exhaustive).normalized_mse == 0.0);
  CHECK(b.summary(Solver::lagrange).undercuts == 0);
  CHECK(b.summary(Solver::lagrange).evaluations < b.summary(Solver::exhaustive).evaluations);
  CHECK_THROWS_AS(b.summary(Solver::single_parameter), std::out_of_range);
  CHECK_THROWS(benchmark_solvers(std::span<const double>{}, {}));
}

}
