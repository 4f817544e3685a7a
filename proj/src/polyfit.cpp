#include <cmath>
#include <stdexcept>
#include <vector>

#include "nbiot/optimizer.hpp"

namespace nbiot {

double polyval(std::span<const double> coefficients_high_first, double x) {
  double acc = 0.0;
  for (const double c : coefficients_high_first) acc = acc * x + c;
  return acc;
}

PolyFit fit_polynomial(std::span<const Point2> points, int degree) {
  if (degree < 0) throw std::invalid_argument("negative polynomial degree");
  const auto n = points.size();
  const auto k = static_cast<std::size_t>(degree) + 1;
  if (n < k) throw std::invalid_argument("need at least degree + 1 points");

  // Vandermonde matrix, column j holds x^(degree - j); stored column-major.
  std::vector<double> a(n * k);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double power = 1.0;
    for (std::size_t j = k; j-- > 0;) {
      a[j * n + i] = power;
      power *= points[i].x;
    }
    y[i] = points[i].y;
  }

  // Householder QR applied in place to a and y.
  double max_diag = 0.0;
  std::vector<double> diag(k);
  for (std::size_t j = 0; j < k; ++j) {
    double norm = 0.0;
    for (std::size_t i = j; i < n; ++i) norm += a[j * n + i] * a[j * n + i];
    norm = std::sqrt(norm);
    const double alpha = a[j * n + j] > 0.0 ? -norm : norm;
    std::vector<double> v(n, 0.0);
    for (std::size_t i = j; i < n; ++i) v[i] = a[j * n + i];
    v[j] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = j; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 > 0.0) {
      for (std::size_t col = j; col < k; ++col) {
        double dot = 0.0;
        for (std::size_t i = j; i < n; ++i) dot += v[i] * a[col * n + i];
        const double s = 2.0 * dot / vnorm2;
        for (std::size_t i = j; i < n; ++i) a[col * n + i] -= s * v[i];
      }
      double dot = 0.0;
      for (std::size_t i = j; i < n; ++i) dot += v[i] * y[i];
      const double s = 2.0 * dot / vnorm2;
      for (std::size_t i = j; i < n; ++i) y[i] -= s * v[i];
    }
    diag[j] = std::abs(a[j * n + j]);
    max_diag = std::max(max_diag, diag[j]);
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (!(diag[j] > 1e-12 * max_diag * static_cast<double>(n))) {
      throw std::domain_error("rank-deficient polynomial fit");
    }
  }

  PolyFit fit;
  fit.coefficients.assign(k, 0.0);
  for (std::size_t j = k; j-- > 0;) {
    double s = y[j];
    for (std::size_t col = j + 1; col < k; ++col) s -= a[col * n + j] * fit.coefficients[col];
    fit.coefficients[j] = s / a[j * n + j];
  }
  double sq = 0.0;
  for (const auto &pt : points) {
    const double e = polyval(fit.coefficients, pt.x) - pt.y;
    sq += e * e;
  }
  fit.mse = sq / static_cast<double>(n);
  return fit;
}

}  // namespace nbiot
