#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "eigencert/fem.hpp"

namespace eigencert {

/// Ascending discrete eigenpairs with M-orthonormal eigenvector columns.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // free-dof coefficients, one column per pair
  /// Largest residual ||K x - lambda M x||_{M^-1} / lambda over all pairs.
  double max_relative_residual = 0.0;

  int count() const noexcept { return static_cast<int>(eigenvalues.size()); }
  double value(int i) const { return eigenvalues[i - 1]; }  // 1-based
};

struct SolveOptions {
  /// Systems up to this size use a dense generalized eigensolve.
  int dense_threshold = 1500;
  /// Relative residual target of the iterative path.
  double tolerance = 1e-10;
  int max_iterations = 1000;
  std::uint64_t seed = 0x5eed5eedULL;
  /// Relative gap below which eigenvalues are treated as one degenerate group.
  double degeneracy_gap = 1e-8;
  /// Subtracted shift sigma: solves (K + sigma M) x = mu M x and returns mu - sigma.
  double shift = 0.0;
};

/// Smallest `count` eigenpairs of K x = lambda M x.
/// Throws InvalidArgument when count is out of range and NumericalError when
/// K or M is not positive definite or the iteration stalls.
Spectrum solve_generalized(const AssembledSystem& sys, int count, const SolveOptions& options = {});

/// Contiguous 1-based index ranges (n_k, N_k).
class ClusterSpec {
 public:
  ClusterSpec() = default;
  /// Throws InvalidArgument unless n_1 = 1 and n_{k+1} = N_k + 1.
  explicit ClusterSpec(std::vector<std::pair<int, int>> boundaries);

  int size() const noexcept { return static_cast<int>(bounds_.size()); }
  int first(int k) const { return bounds_.at(static_cast<std::size_t>(k - 1)).first; }  // n_k
  int last(int k) const { return bounds_.at(static_cast<std::size_t>(k - 1)).second; }  // N_k
  int dimension(int k) const { return last(k) - first(k) + 1; }
  int total() const { return bounds_.empty() ? 0 : bounds_.back().second; }
  /// Cluster index containing eigenvalue i, or 0 when beyond the last cluster.
  int cluster_of(int i) const;
  const std::vector<std::pair<int, int>>& boundaries() const noexcept { return bounds_; }

 private:
  std::vector<std::pair<int, int>> bounds_;
};

/// Verified two-sided bounds lo(i) <= lambda_i <= hi(i), plus a verified
/// lower bound for lambda_{N+1} used as rho.
class EigenEnclosure {
 public:
  EigenEnclosure() = default;
  EigenEnclosure(std::vector<std::pair<double, double>> bounds, double rho);

  /// Degenerate enclosures (lo = hi) for the unit square.
  static EigenEnclosure exact_square(int count);
  /// Lines `i lambda_lo lambda_hi` then `rho rho_lo`.
  static EigenEnclosure read(const std::filesystem::path& path);

  int size() const noexcept { return static_cast<int>(bounds_.size()); }
  double lo(int i) const;  // 1-based
  double hi(int i) const;
  double rho() const noexcept { return rho_; }
  /// Lower bound of lambda_i, falling back to rho for i = size() + 1.
  double lo_or_rho(int i) const;

 private:
  std::vector<std::pair<double, double>> bounds_;
  double rho_ = 0.0;
};

/// lambda_max of (V^T K V) c = lambda (V^T M V) c for the cluster columns.
double cluster_rayleigh_max(const Spectrum& spec, const AssembledSystem& sys, int first, int last);

/// Rayleigh max over an arbitrary coefficient basis (columns of v).
double rayleigh_max(const Eigen::MatrixXd& v, const AssembledSystem& sys);

/// lambda / (1 + Ch^2 lambda) per Crouzeix-Raviart eigenvalue.
std::vector<double> crude_lower_bounds_cr(const Spectrum& cr, double ch);

}  // namespace eigencert
