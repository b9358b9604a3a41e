#pragma once

#include <Eigen/Core>
#include <functional>

#include "eigencert/fem.hpp"

namespace eigencert {

/// Symmetric positive definite inner-product operator x -> O x.
/// An empty operator means the Euclidean inner product.
class InnerProduct {
 public:
  InnerProduct() = default;
  explicit InnerProduct(const SparseMatrix& op) : op_(&op) {}
  static InnerProduct euclidean() { return {}; }
  static InnerProduct energy(const AssembledSystem& sys) { return InnerProduct(sys.stiffness); }
  static InnerProduct l2(const AssembledSystem& sys) { return InnerProduct(sys.mass); }

  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
  Eigen::Index dimension_hint() const noexcept { return op_ ? op_->rows() : -1; }

 private:
  const SparseMatrix* op_ = nullptr;
};

/// F = (a_i, b_j), G = (a_i, a_j), H = (b_i, b_j).
struct GramTriple {
  Eigen::MatrixXd F;
  Eigen::MatrixXd G;
  Eigen::MatrixXd H;
};

/// Throws InvalidArgument on dimension mismatch or empty bases.
GramTriple gram_triple(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const InnerProduct& op = {});

/// lambda_max(F^T G^-1 F, H); cross-checked against lambda_max(F H^-1 F^T, G).
/// Throws IllConditionedBasis when G or H is not positive definite and
/// NumericalError when the two formulations disagree.
double epsilon_hat_sq(const GramTriple& gt);

/// Both formulations, for auditing.
struct EpsilonPair {
  double via_h;  // lambda_max(F^T G^-1 F, H)
  double via_g;  // lambda_max(F H^-1 F^T, G)
};
EpsilonPair epsilon_hat_sq_both(const GramTriple& gt);

struct Etas {
  double F;
  double G;
  double H;
};

/// Gershgorin bounds, rounded upward: eta_F >= ||F^T F||_2, eta_G >= ||I - G||_2, eta_H >= ||I - H||_2.
Etas gershgorin_etas(const GramTriple& gt);

/// Gershgorin bound for the spectral radius of a symmetric matrix.
double gershgorin_radius(const Eigen::MatrixXd& s);

/// eta_F / ((1 - eta_G)(1 - eta_H)), rounded up by a few ulps; throws ConditionViolated
/// unless eta_G, eta_H < 1.
double epsilon_hat_sq_upper(double eta_f, double eta_g, double eta_h);
double epsilon_hat_sq_upper(const Etas& etas);

/// Directed distance from span(a) to span(b) through principal angles, in [0, 1].
double directed_distance_exact(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const InnerProduct& op = {});

/// Directed distance from the Gram triple of (a, b); dim(a) > dim(b) gives 1.
double directed_distance_from_gram(const GramTriple& gt);

/// sqrt(|u|^2 + |uh|^2 - 2 |u| |uh| sqrt(1 - delta^2)); throws InvalidArgument unless delta in [0, 1].
double pair_distance_from_delta(double norm_u, double norm_uhat, double delta);

}  // namespace eigencert
