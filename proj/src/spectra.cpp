#include "eigencert/spectra.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "eigencert/error.hpp"

namespace eigencert {

namespace {

using ColSparse = Eigen::SparseMatrix<double>;
using Ldlt = Eigen::SimplicialLDLT<ColSparse>;

void factor_spd(Ldlt& solver, const ColSparse& a, const char* name) {
  solver.compute(a);
  if (solver.info() != Eigen::Success) throw NumericalError(std::string("factorization of ") + name + " failed");
  const auto& d = solver.vectorD();
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (!(d[i] > 0.0)) throw NumericalError(std::string(name) + " is not positive definite");
}

// Smallest `count` pairs of the dense pencil (a, b), b SPD.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> dense_pencil(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                                         int count) {
  Eigen::LLT<Eigen::MatrixXd> llt(b);
  if (llt.info() != Eigen::Success) throw NumericalError("mass matrix is not positive definite");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b);
  if (es.info() != Eigen::Success) throw NumericalError("dense generalized eigensolve failed");
  return {es.eigenvalues().head(count), es.eigenvectors().leftCols(count)};
}

// Gram-Schmidt in the M inner product, applied twice for stability.
void m_orthonormalize(Eigen::MatrixXd& v, const SparseMatrix& m, int begin, int end) {
  for (int pass = 0; pass < 2; ++pass) {
    for (int j = begin; j < end; ++j) {
      const Eigen::VectorXd mvj = apply(m, Eigen::MatrixXd(v.col(j)));
      for (int i = begin; i < j; ++i) v.col(j) -= v.col(i).dot(mvj) * v.col(i);
      const double norm = std::sqrt(v.col(j).dot(apply(m, Eigen::MatrixXd(v.col(j))).col(0)));
      if (!(norm > 0.0)) throw NumericalError("eigenvector has zero M-norm");
      v.col(j) /= norm;
    }
  }
}

void fix_signs(Eigen::MatrixXd& v) {
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    const double cutoff = 1e-8 * v.col(j).cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      if (std::abs(v(i, j)) > cutoff) {
        if (v(i, j) < 0.0) v.col(j) = -v.col(j);
        break;
      }
    }
  }
}

// Relative residuals ||K x - lambda M x||_{M^-1} / lambda per column.
Eigen::VectorXd relative_residuals(const AssembledSystem& sys, const Ldlt& mass_solver, const Eigen::VectorXd& values,
                                   const Eigen::MatrixXd& vectors) {
  const Eigen::MatrixXd kx = apply(sys.stiffness, vectors);
  const Eigen::MatrixXd mx = apply(sys.mass, vectors);
  Eigen::VectorXd out(values.size());
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    const Eigen::VectorXd r = kx.col(j) - values[j] * mx.col(j);
    const Eigen::VectorXd z = mass_solver.solve(r);
    out[j] = std::sqrt(std::max(0.0, r.dot(z))) / std::abs(values[j]);
  }
  return out;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> subspace_iteration(const AssembledSystem& sys, int count,
                                                               const SolveOptions& opt, const Ldlt& mass_solver) {
  const int n = sys.size();
  const int p = std::min(n, count + std::max(count, 10));
  const ColSparse k = sys.stiffness;
  const ColSparse m = sys.mass;
  Ldlt shifted;
  factor_spd(shifted, opt.shift == 0.0 ? k : ColSparse(k + opt.shift * m), "stiffness matrix");

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = dist(rng);

  Eigen::VectorXd mu;
  for (int it = 0; it < opt.max_iterations; ++it) {
    const Eigen::MatrixXd y = shifted.solve(apply(sys.mass, x));
    const Eigen::MatrixXd ky = apply(sys.stiffness, y) + opt.shift * apply(sys.mass, y);
    const Eigen::MatrixXd my = apply(sys.mass, y);
    Eigen::MatrixXd kr = y.transpose() * ky;
    Eigen::MatrixXd mr = y.transpose() * my;
    kr = 0.5 * (kr + kr.transpose());
    mr = 0.5 * (mr + mr.transpose());
    auto [vals, vecs] = dense_pencil(kr, mr, p);
    x = y * vecs;
    mu = vals;
    const Eigen::VectorXd lambda = (mu.head(count).array() - opt.shift).matrix();
    const Eigen::VectorXd res = relative_residuals(sys, mass_solver, lambda, x.leftCols(count));
    if (res.maxCoeff() <= opt.tolerance) return {lambda, x.leftCols(count)};
  }
  throw NumericalError("subspace iteration did not converge in " + std::to_string(opt.max_iterations) +
                       " iterations");
}

}  // namespace

Spectrum solve_generalized(const AssembledSystem& sys, int count, const SolveOptions& opt) {
  const int n = sys.size();
  if (count < 1 || count > n)
    throw InvalidArgument("requested " + std::to_string(count) + " eigenpairs from a system of dimension " +
                          std::to_string(n));
  Ldlt mass_solver;
  factor_spd(mass_solver, ColSparse(sys.mass), "mass matrix");

  Spectrum spec;
  if (n <= opt.dense_threshold) {
    Eigen::MatrixXd k = Eigen::MatrixXd(sys.stiffness);
    const Eigen::MatrixXd m = Eigen::MatrixXd(sys.mass);
    if (opt.shift != 0.0) k += opt.shift * m;
    Eigen::LLT<Eigen::MatrixXd> kchol(k);
    if (kchol.info() != Eigen::Success) throw NumericalError("stiffness matrix is not positive definite");
    auto [vals, vecs] = dense_pencil(k, m, count);
    spec.eigenvalues = (vals.array() - opt.shift).matrix();
    spec.eigenvectors = std::move(vecs);
  } else {
    auto [vals, vecs] = subspace_iteration(sys, count, opt, mass_solver);
    spec.eigenvalues = std::move(vals);
    spec.eigenvectors = std::move(vecs);
  }

  // Re-orthonormalize within degenerate groups and fix signs.
  for (int begin = 0; begin < count;) {
    int end = begin + 1;
    while (end < count &&
           spec.eigenvalues[end] - spec.eigenvalues[end - 1] < opt.degeneracy_gap * std::abs(spec.eigenvalues[end]))
      ++end;
    m_orthonormalize(spec.eigenvectors, sys.mass, begin, end);
    begin = end;
  }
  fix_signs(spec.eigenvectors);
  spec.max_relative_residual = relative_residuals(sys, mass_solver, spec.eigenvalues, spec.eigenvectors).maxCoeff();
  return spec;
}

// ---------------------------------------------------------------------------

ClusterSpec::ClusterSpec(std::vector<std::pair<int, int>> boundaries) : bounds_(std::move(boundaries)) {
  if (bounds_.empty()) throw InvalidArgument("cluster list is empty");
  int expected = 1;
  for (const auto& [n, last] : bounds_) {
    if (n != expected)
      throw InvalidArgument("cluster starting at " + std::to_string(n) + " should start at " + std::to_string(expected));
    if (last < n) throw InvalidArgument("cluster (" + std::to_string(n) + ", " + std::to_string(last) + ") is empty");
    expected = last + 1;
  }
}

int ClusterSpec::cluster_of(int i) const {
  for (std::size_t k = 0; k < bounds_.size(); ++k)
    if (i >= bounds_[k].first && i <= bounds_[k].second) return static_cast<int>(k) + 1;
  return 0;
}

EigenEnclosure::EigenEnclosure(std::vector<std::pair<double, double>> bounds, double rho)
    : bounds_(std::move(bounds)), rho_(rho) {
  double prev_lo = 0.0;
  for (std::size_t i = 0; i < bounds_.size(); ++i) {
    const auto [lo, hi] = bounds_[i];
    if (!(lo > 0.0) || !(lo <= hi) || !std::isfinite(hi))
      throw InvalidArgument("enclosure " + std::to_string(i + 1) + " is not a positive interval");
    if (lo < prev_lo) throw InvalidArgument("enclosure lower bounds must be non-decreasing");
    prev_lo = lo;
  }
  if (!(rho_ >= prev_lo) || !std::isfinite(rho_)) throw InvalidArgument("rho must not lie below the last lower bound");
}

EigenEnclosure EigenEnclosure::exact_square(int count) {
  if (count < 1) throw InvalidArgument("enclosure count must be positive");
  // (i^2 + j^2) pi^2 in ascending order, with multiplicity.
  std::vector<int> sums;
  const int limit = count + 2;
  for (int i = 1; i <= limit; ++i)
    for (int j = 1; j <= limit; ++j) sums.push_back(i * i + j * j);
  std::sort(sums.begin(), sums.end());
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  std::vector<std::pair<double, double>> bounds;
  for (int i = 0; i < count; ++i) bounds.emplace_back(sums[i] * pi2, sums[i] * pi2);
  return EigenEnclosure(std::move(bounds), sums[static_cast<std::size_t>(count)] * pi2);
}

EigenEnclosure EigenEnclosure::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open enclosure file " + path.string(), 0);
  std::vector<std::pair<double, double>> bounds;
  std::optional<double> rho;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    std::string head;
    if (!(is >> head)) continue;
    if (rho) throw ParseError("content after the rho line", line_no);
    std::string rest;
    if (head == "rho") {
      double value = 0.0;
      if (!(is >> value) || (is >> rest)) throw ParseError("expected 'rho rho_lo'", line_no);
      rho = value;
      continue;
    }
    int index = 0;
    double lo = 0.0, hi = 0.0;
    try {
      index = std::stoi(head);
    } catch (const std::exception&) {
      throw ParseError("expected an eigenvalue index, got '" + head + "'", line_no);
    }
    if (!(is >> lo >> hi) || (is >> rest)) throw ParseError("expected 'i lambda_lo lambda_hi'", line_no);
    if (index != static_cast<int>(bounds.size()) + 1)
      throw ParseError("eigenvalue indices must be consecutive from 1", line_no);
    bounds.emplace_back(lo, hi);
  }
  if (!rho) throw ParseError("missing final 'rho' line", line_no);
  try {
    return EigenEnclosure(std::move(bounds), *rho);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), line_no);
  }
}

double EigenEnclosure::lo(int i) const {
  if (i < 1 || i > size()) throw InvalidArgument("no enclosure for eigenvalue " + std::to_string(i));
  return bounds_[static_cast<std::size_t>(i - 1)].first;
}

double EigenEnclosure::hi(int i) const {
  if (i < 1 || i > size()) throw InvalidArgument("no enclosure for eigenvalue " + std::to_string(i));
  return bounds_[static_cast<std::size_t>(i - 1)].second;
}

double EigenEnclosure::lo_or_rho(int i) const { return i == size() + 1 ? rho_ : lo(i); }

// ---------------------------------------------------------------------------

double rayleigh_max(const Eigen::MatrixXd& v, const AssembledSystem& sys) {
  if (v.cols() == 0) throw InvalidArgument("empty cluster");
  if (v.rows() != sys.size()) throw InvalidArgument("basis dimension does not match the system");
  Eigen::MatrixXd kr = v.transpose() * apply(sys.stiffness, v);
  Eigen::MatrixXd mr = v.transpose() * apply(sys.mass, v);
  kr = 0.5 * (kr + kr.transpose());
  mr = 0.5 * (mr + mr.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(mr);
  if (llt.info() != Eigen::Success) throw IllConditionedBasis("cluster basis is linearly dependent");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(kr, mr, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("Rayleigh-Ritz eigensolve failed");
  return es.eigenvalues().maxCoeff();
}

double cluster_rayleigh_max(const Spectrum& spec, const AssembledSystem& sys, int first, int last) {
  if (last < first) throw InvalidArgument("empty cluster");
  if (first < 1 || last > spec.count()) throw InvalidArgument("cluster indices exceed the computed spectrum");
  return rayleigh_max(spec.eigenvectors.middleCols(first - 1, last - first + 1), sys);
}

std::vector<double> crude_lower_bounds_cr(const Spectrum& cr, double ch) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(cr.count()));
  for (int i = 0; i < cr.count(); ++i) {
    const double lambda = cr.eigenvalues[i];
    out.push_back(lambda / (1.0 + ch * ch * lambda));
  }
  return out;
}

}  // namespace eigencert
