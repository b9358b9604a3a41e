#include "eigencert/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "eigencert/error.hpp"

namespace eigencert {

std::vector<std::array<double, 2>> gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("Gauss-Legendre rule needs at least one node");
  // Legendre P_n and P_{n-1} at x by the three-term recurrence.
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::array{p1, p0};
  };
  std::vector<std::array<double, 2>> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      const auto [pn, pm] = legendre(x);
      dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [pn, pm] = legendre(x);
    dp = n * (x * pn - pm) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    out[static_cast<std::size_t>(n - 1 - i)] = {0.5 * (x + 1.0), 0.5 * w};
  }
  return out;
}

TriangleRule symmetric_degree7() {
  TriangleRule rule;
  rule.degree = 7;
  auto add3 = [&](double a, double b, double w) {
    rule.points.push_back({{a, b, b}, w});
    rule.points.push_back({{b, a, b}, w});
    rule.points.push_back({{b, b, a}, w});
  };
  auto add6 = [&](double a, double b, double c, double w) {
    for (const auto& p : {std::array{a, b, c}, std::array{a, c, b}, std::array{b, a, c}, std::array{b, c, a},
                          std::array{c, a, b}, std::array{c, b, a}})
      rule.points.push_back({p, w});
  };
  rule.points.push_back({{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, -0.149570044467682});
  add3(0.479308067841920, 0.260345966079040, 0.175615257433208);
  add3(0.869739794195568, 0.065130102902216, 0.053347235608838);
  add6(0.048690315425316, 0.312865496004874, 0.638444188569810, 0.077113760890257);
  return rule;
}

TriangleRule gauss_triangle(int degree) {
  if (degree < 0) throw InvalidArgument("quadrature degree must be non-negative");
  // u carries the (1 - u) Jacobian, so it needs one extra degree.
  const int q = (degree + 3) / 2;
  const auto gl = gauss_legendre(q);
  TriangleRule rule;
  rule.degree = 2 * q - 2;
  for (const auto& [u, wu] : gl) {
    for (const auto& [v, wv] : gl) {
      const double x = u, y = v * (1.0 - u);
      // Reference triangle area is 1/2; normalize weights to sum to 1.
      rule.points.push_back({{1.0 - x - y, x, y}, 2.0 * wu * wv * (1.0 - u)});
    }
  }
  return rule;
}

}  // namespace eigencert
