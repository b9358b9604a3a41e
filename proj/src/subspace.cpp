#include "eigencert/subspace.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "eigencert/error.hpp"

namespace eigencert {

namespace {

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& a) { return 0.5 * (a + a.transpose()); }

// lambda_max of the pencil (a, b) with b SPD.
double pencil_max(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const char* which) {
  Eigen::LLT<Eigen::MatrixXd> llt(b);
  if (llt.info() != Eigen::Success) throw IllConditionedBasis(std::string(which) + " is not positive definite");
  // L^-1 A L^-T is symmetric with the same eigenvalues.
  const Eigen::MatrixXd linv_a = llt.matrixL().solve(a);
  const Eigen::MatrixXd c = llt.matrixL().solve(linv_a.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(c), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolve failed");
  return es.eigenvalues().maxCoeff();
}

// Lower Cholesky factor of a Gram matrix, failing on dependent columns.
Eigen::MatrixXd gram_factor(const Eigen::MatrixXd& g, const char* which) {
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) throw IllConditionedBasis(std::string(which) + " basis is linearly dependent");
  const Eigen::MatrixXd l = llt.matrixL();
  const double dmax = l.diagonal().maxCoeff();
  const double dmin = l.diagonal().minCoeff();
  if (!(dmin > 1e-12 * dmax)) throw IllConditionedBasis(std::string(which) + " basis is numerically dependent");
  return l;
}

}  // namespace

Eigen::MatrixXd InnerProduct::apply(const Eigen::MatrixXd& x) const {
  if (!op_) return x;
  return eigencert::apply(*op_, x);
}

GramTriple gram_triple(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const InnerProduct& op) {
  if (a.cols() == 0 || b.cols() == 0) throw InvalidArgument("subspace bases must have at least one column");
  if (a.rows() != b.rows()) throw InvalidArgument("bases live in different coordinate spaces");
  if (op.dimension_hint() >= 0 && op.dimension_hint() != a.rows())
    throw InvalidArgument("inner-product operator does not match the basis dimension");
  const Eigen::MatrixXd oa = op.apply(a);
  const Eigen::MatrixXd ob = op.apply(b);
  return {oa.transpose() * b, symmetrize(a.transpose() * oa), symmetrize(b.transpose() * ob)};
}

EpsilonPair epsilon_hat_sq_both(const GramTriple& gt) {
  if (gt.F.rows() != gt.G.rows() || gt.F.cols() != gt.H.rows()) throw InvalidArgument("Gram triple shapes disagree");
  Eigen::LLT<Eigen::MatrixXd> g(gt.G), h(gt.H);
  if (g.info() != Eigen::Success) throw IllConditionedBasis("G is not positive definite");
  if (h.info() != Eigen::Success) throw IllConditionedBasis("H is not positive definite");
  const Eigen::MatrixXd ftgf = symmetrize(gt.F.transpose() * g.solve(gt.F));
  const Eigen::MatrixXd fhft = symmetrize(gt.F * h.solve(gt.F.transpose()));
  return {pencil_max(ftgf, gt.H, "H"), pencil_max(fhft, gt.G, "G")};
}

double epsilon_hat_sq(const GramTriple& gt) {
  const auto [via_h, via_g] = epsilon_hat_sq_both(gt);
  const double scale = std::max({std::abs(via_h), std::abs(via_g), 1e-300});
  if (std::abs(via_h - via_g) > 1e-10 * scale + 1e-14)
    throw NumericalError("the two generalized eigenvalue formulations disagree");
  return std::max(0.0, via_h);
}

double gershgorin_radius(const Eigen::MatrixXd& s) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < s.rows(); ++i) r = std::max(r, s.row(i).cwiseAbs().sum());
  return r;
}

Etas gershgorin_etas(const GramTriple& gt) {
  // Round each radius up by the error bound of its floating-point row sums.
  auto upward = [](double r, Eigen::Index n) {
    return r * (1.0 + 4.0 * static_cast<double>(n + 1) * std::numeric_limits<double>::epsilon());
  };
  auto deviation = [&](const Eigen::MatrixXd& g) {
    return upward(gershgorin_radius(Eigen::MatrixXd::Identity(g.rows(), g.cols()) - g), g.rows());
  };
  return {upward(gershgorin_radius(gt.F.transpose() * gt.F), gt.F.rows() + gt.F.cols()), deviation(gt.G),
          deviation(gt.H)};
}

double epsilon_hat_sq_upper(double eta_f, double eta_g, double eta_h) {
  if (!(eta_g < 1.0) || !(eta_h < 1.0))
    throw ConditionViolated("Gershgorin bound needs eta_G < 1 and eta_H < 1");
  // A few ulps of upward rounding keep the estimate on the safe side when it is
  // attained (one-dimensional spaces with G, H <= 1).
  return eta_f / ((1.0 - eta_g) * (1.0 - eta_h)) * (1.0 + 8.0 * std::numeric_limits<double>::epsilon());
}

double epsilon_hat_sq_upper(const Etas& etas) { return epsilon_hat_sq_upper(etas.F, etas.G, etas.H); }

double directed_distance_from_gram(const GramTriple& gt) {
  const Eigen::Index m = gt.G.rows(), mp = gt.H.rows();
  // Validate both bases even when the answer is 1 by dimension.
  const Eigen::MatrixXd la = gram_factor(gt.G, "first");
  const Eigen::MatrixXd lb = gram_factor(gt.H, "second");
  if (m > mp) return 1.0;
  // Cross matrix of the orthonormalized bases: La^-1 F Lb^-T.
  const Eigen::MatrixXd left = la.triangularView<Eigen::Lower>().solve(gt.F);
  const Eigen::MatrixXd c =
      lb.triangularView<Eigen::Lower>().solve(left.transpose()).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c);
  const double smin = svd.singularValues()[m - 1];
  double d2 = 1.0 - smin * smin;
  if (d2 < 1e-14) d2 = std::max(0.0, d2);
  return std::clamp(std::sqrt(std::max(0.0, d2)), 0.0, 1.0);
}

double directed_distance_exact(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const InnerProduct& op) {
  const GramTriple gt = gram_triple(a, b, op);
  const Eigen::MatrixXd la = gram_factor(gt.G, "first");
  const Eigen::MatrixXd lb = gram_factor(gt.H, "second");
  if (a.cols() > b.cols()) return 1.0;
  // Orthonormalize, then take the largest sine directly from the projection
  // residual; sqrt(1 - cos^2) loses everything below ~1e-8.
  const Eigen::MatrixXd qa = la.triangularView<Eigen::Lower>().solve(a.transpose()).transpose();
  const Eigen::MatrixXd qb = lb.triangularView<Eigen::Lower>().solve(b.transpose()).transpose();
  const Eigen::MatrixXd r = qa - qb * (qb.transpose() * op.apply(qa));
  const Eigen::MatrixXd rr = symmetrize(r.transpose() * op.apply(r));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rr, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolve failed");
  return std::clamp(std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff())), 0.0, 1.0);
}

double pair_distance_from_delta(double norm_u, double norm_uhat, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw InvalidArgument("delta must lie in [0, 1]");
  if (norm_u < 0.0 || norm_uhat < 0.0) throw InvalidArgument("norms must be non-negative");
  const double s = norm_u * norm_u + norm_uhat * norm_uhat - 2.0 * norm_u * norm_uhat * std::sqrt(1.0 - delta * delta);
  return std::sqrt(std::max(0.0, s));
}

}  // namespace eigencert
