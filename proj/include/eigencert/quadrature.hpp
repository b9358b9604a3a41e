#pragma once

#include <array>
#include <vector>

namespace eigencert {

/// Point given by barycentric coordinates; weights are normalized so they sum
/// to one over the triangle (multiply by the area).
struct QuadraturePoint {
  std::array<double, 3> bary{};
  double weight = 0.0;
};

struct TriangleRule {
  std::vector<QuadraturePoint> points;
  int degree = 0;  // polynomials up to this total degree are integrated exactly
};

/// Gauss-Legendre nodes and weights on [0, 1].
std::vector<std::array<double, 2>> gauss_legendre(int n);

/// 13-point symmetric rule, exact to degree 7 (one negative weight).
TriangleRule symmetric_degree7();

/// Collapsed (conical product) Gauss rule exact to at least `degree`.
TriangleRule gauss_triangle(int degree);

}  // namespace eigencert
