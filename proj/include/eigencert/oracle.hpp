#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "eigencert/fem.hpp"
#include "eigencert/quadrature.hpp"
#include "eigencert/spectra.hpp"

namespace eigencert {

/// u(x, y) = sin(i pi x) sin(j pi y) with lambda = (i^2 + j^2) pi^2 on the unit square.
struct ExactEigenpair {
  int i = 1;
  int j = 1;
  double lambda = 0.0;

  static ExactEigenpair mode(int i, int j);
  double value(double x, double y) const;
  std::array<double, 2> gradient(double x, double y) const;
  /// ||u||^2 = 1/4 for i, j >= 1 (0 when either index is 0).
  double l2_norm_sq() const;
};

/// First `count` modes ascending in lambda, ties by (i, j) lexicographic.
std::vector<ExactEigenpair> exact_spectrum_square(int count);

/// (u, phi_m) and (grad u, grad phi_m) over the free P1 dofs.
struct ProjectedMode {
  Eigen::VectorXd l2;
  Eigen::VectorXd energy;
};

ProjectedMode project_exact_to_mesh(const ExactEigenpair& pair, const Triangulation& t, const AssembledSystem& sys,
                                    const TriangleRule& rule = gauss_triangle(14));

struct ExactDistances {
  double Delta;  // energy norm
  double delta;  // L2 norm
};

/// Directed distances from span{u_first..u_last} to the discrete cluster space.
ExactDistances exact_directed_distance_square(const Spectrum& spec, const Triangulation& t, const AssembledSystem& sys,
                                              int first, int last);

/// Bessel residuals ||v||^2 - sum_{i<=M} (v, u_i)^2 / ||u_i||^2 for M = 1..modes,
/// with inner products from a tensor Gauss rule of `points` nodes per axis.
std::vector<double> parseval_residuals(const std::function<double(double, double)>& v, double norm_sq, int modes,
                                       int points = 64);

/// Energy analogue: ||grad v||^2 - sum lambda_i (v, u_i)^2 / ||u_i||^2.
std::vector<double> parseval_energy_residuals(const std::function<double(double, double)>& v, double grad_norm_sq,
                                              int modes, int points = 64);

/// Definitional max-min over unit vectors of span(a) (Euclidean), with the
/// inner minimum solved by orthogonal projection onto span(b). Dimensions <= 3.
double brute_force_subspace_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int resolution = 10000);

}  // namespace eigencert
