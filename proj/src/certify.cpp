#include "eigencert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eigencert/error.hpp"
#include "eigencert/subspace.hpp"

namespace eigencert {

namespace {

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

double sqrt_clamped(double sq) { return clamp_unit(std::sqrt(std::max(0.0, sq))); }

void require_gap(Interval lambda_n, double rho) {
  if (!(rho > lambda_n.hi))
    throw GapViolated("rho = " + std::to_string(rho) + " does not exceed the upper bound " +
                      std::to_string(lambda_n.hi) + " of lambda_n");
}

// Both bounds are linear-fractional in lambda_n with the pole above rho, so
// the maximum over the enclosure sits at an endpoint.
template <typename F>
double max_over_endpoints(Interval lambda_n, F&& f) {
  return std::max(f(lambda_n.lo), f(lambda_n.hi));
}

// Rescales columns to unit norm in the given inner product.
Eigen::MatrixXd normalized(const Eigen::MatrixXd& v, const InnerProduct& op) {
  const Eigen::MatrixXd ov = op.apply(v);
  Eigen::MatrixXd out = v;
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    const double n2 = v.col(j).dot(ov.col(j));
    if (!(n2 > 0.0)) throw IllConditionedBasis("cluster basis vector has zero norm");
    out.col(j) /= std::sqrt(n2);
  }
  return out;
}

// zeta-hat / epsilon-hat between two cluster spaces (square root of the Lemma 2 value).
double non_orthogonality(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const InnerProduct& op,
                         EpsilonMode mode) {
  const GramTriple gt = gram_triple(normalized(a, op), normalized(b, op), op);
  const double sq = mode == EpsilonMode::exact ? epsilon_hat_sq(gt) : epsilon_hat_sq_upper(gershgorin_etas(gt));
  return std::sqrt(std::max(0.0, sq));
}

template <typename E>
[[noreturn]] void rethrow_with_cluster(const E& e, int k) {
  throw E("cluster " + std::to_string(k) + ": " + e.what());
}

}  // namespace

double vartheta_term(double rho, double lambda_nk_lo, double zeta, double Delta_k) {
  const double s = zeta + Delta_k;
  return (rho / lambda_nk_lo - 1.0) * s * s;
}

double theta_term(double rho, double lambda_nk_lo, double eps, double delta_k) {
  const double s = eps + delta_k;
  return (rho - lambda_nk_lo) * s * s;
}

double bound_energy_thm1(double lambda_hat, Interval lambda_n, double rho, double vartheta) {
  require_gap(lambda_n, rho);
  const double sq = max_over_endpoints(lambda_n, [&](double ln) {
    return (rho * (lambda_hat - ln) + ln * lambda_hat * vartheta) / (lambda_hat * (rho - ln));
  });
  return sqrt_clamped(sq);
}

double bound_l2_thm2(double lambda_hat, Interval lambda_n, double rho, double theta) {
  require_gap(lambda_n, rho);
  const double sq = max_over_endpoints(lambda_n, [&](double ln) { return (lambda_hat - ln + theta) / (rho - ln); });
  return sqrt_clamped(sq);
}

double bound_l2_optimal(double lambda_N_hi, double ch, double tau, int cluster_dim, double Delta) {
  if (cluster_dim < 1) throw InvalidArgument("cluster dimension must be positive");
  return clamp_unit(std::sqrt(lambda_N_hi) * ch * (1.0 + tau * std::sqrt(static_cast<double>(cluster_dim))) * Delta);
}

double bound_energy_from_l2(double lambda_n_lo, double lambda_N_hi, double lambda_hat, double delta) {
  const double d = std::clamp(delta, 0.0, 1.0);
  const double sq = 2.0 - 2.0 * lambda_n_lo * std::sqrt((1.0 - d * d) / (lambda_N_hi * lambda_hat));
  return sqrt_clamped(sq);
}

double bound_energy_tilde(double lambda_n_lo, double lambda_N_hi, double lambda_hat, double delta) {
  const double d = std::clamp(delta, 0.0, 1.0);
  return lambda_N_hi + lambda_hat - 2.0 * lambda_n_lo * std::sqrt(1.0 - d * d);
}

TauResult compute_tau_k(const EigenEnclosure& enc, const Eigen::VectorXd& discrete, int first, int last) {
  if (first < 1 || last < first || last > enc.size()) throw InvalidArgument("cluster outside the enclosure list");
  TauResult best{0.0, 0};
  for (int j = first; j <= last; ++j) {
    const double lo = enc.lo(j), hi = enc.hi(j);
    for (int i = 1; i <= discrete.size(); ++i) {
      if (i >= first && i <= last) continue;
      const double lh = discrete[i - 1];
      const double dist = lh < lo ? lo - lh : (lh > hi ? lh - hi : 0.0);
      if (!(dist > 0.0))
        throw SeparationViolated("discrete eigenvalue " + std::to_string(i) + " lies inside the enclosure of lambda_" +
                                 std::to_string(j));
      const double ratio = hi / dist;
      if (ratio > best.tau) best = {ratio, i};
    }
  }
  return best;
}

void iterate_improvement(ClusterBoundState& s, int iterations) {
  const int dim = s.last - s.first + 1;
  for (int it = 0; it < iterations; ++it) {
    s.delta_final = std::min(s.delta_final, bound_l2_optimal(s.lambda_N_hi, s.ch, s.tau, dim, s.Delta_final));
    s.history.push_back({"delta_eq27", s.delta_final});
    s.Delta_final =
        std::min(s.Delta_final, bound_energy_from_l2(s.lambda_n_lo, s.lambda_N_hi, s.lambda_hat, s.delta_final));
    s.history.push_back({"Delta_eq28", s.Delta_final});
  }
}

std::vector<ClusterBoundState> certify_all_clusters(const Spectrum& spec, const AssembledSystem& sys,
                                                    const ClusterSpec& clusters, const EigenEnclosure& enc,
                                                    double ch, const CertifyOptions& opt) {
  if (clusters.size() == 0) throw InvalidArgument("no clusters to certify");
  if (enc.size() < clusters.total())
    throw InvalidArgument("enclosures cover " + std::to_string(enc.size()) + " eigenvalues but the clusters need " +
                          std::to_string(clusters.total()));
  if (spec.count() <= clusters.total())
    throw InvalidArgument("spectrum must contain eigenvalues beyond the last cluster");
  if (!(ch > 0.0)) throw MissingConstant("C_h must be positive");
  if (opt.iterations < 0) throw InvalidArgument("iteration count must be non-negative");

  const InnerProduct energy = InnerProduct::energy(sys);
  const InnerProduct l2 = InnerProduct::l2(sys);
  const double inflate = 1.0 + opt.inflation;

  std::vector<ClusterBoundState> out;
  std::vector<Eigen::MatrixXd> bases;
  for (int k = 1; k <= clusters.size(); ++k) {
    ClusterBoundState s;
    s.cluster = k;
    s.first = clusters.first(k);
    s.last = clusters.last(k);
    s.ch = ch;
    s.rho = enc.lo_or_rho(s.last + 1);
    s.lambda_n_lo = enc.lo(s.first);
    s.lambda_N_hi = enc.hi(s.last);
    const int dim = s.last - s.first + 1;
    bases.push_back(spec.eigenvectors.middleCols(s.first - 1, dim));

    if (!out.empty() && out.back().gap_violated) {
      s.gap_violated = true;
      s.failure = "depends on gap-violated cluster " + std::to_string(k - 1);
      out.push_back(std::move(s));
      continue;
    }

    try {
      s.lambda_hat = rayleigh_max(bases.back(), sys);
      const Interval lambda_n{enc.lo(s.first), enc.hi(s.first)};

      double vartheta = 0.0, theta = 0.0;
      for (int p = 1; p < k; ++p) {
        const auto& prior = out[static_cast<std::size_t>(p - 1)];
        const Eigen::MatrixXd& bp = bases[static_cast<std::size_t>(p - 1)];
        const double zeta = non_orthogonality(bp, bases.back(), energy, opt.mode);
        const double eps = non_orthogonality(bp, bases.back(), l2, opt.mode);
        s.zeta_hat.push_back(zeta);
        s.eps_hat.push_back(eps);
        vartheta += vartheta_term(s.rho, enc.lo(prior.first), zeta, prior.Delta_final);
        theta += theta_term(s.rho, enc.lo(prior.first), eps, prior.delta_final);
      }

      s.Delta_thm1 = bound_energy_thm1(s.lambda_hat, lambda_n, s.rho, vartheta);
      s.delta_thm2 = bound_l2_thm2(s.lambda_hat, lambda_n, s.rho, theta);
      s.history.push_back({"Delta_thm1", s.Delta_thm1});
      s.history.push_back({"delta_thm2", s.delta_thm2});

      const TauResult tau = compute_tau_k(enc, spec.eigenvalues, s.first, s.last);
      const int away = tau.argmax_i < s.first ? s.first - tau.argmax_i : tau.argmax_i - s.last;
      if (away > 3)
        throw NumericalError("separation factor attained " + std::to_string(away) +
                             " indices away from the cluster; widen the computed window");
      s.tau = tau.tau;

      s.delta_eq27 = bound_l2_optimal(s.lambda_N_hi, ch, s.tau, dim, s.Delta_thm1);
      s.history.push_back({"delta_eq27", s.delta_eq27});
      s.Delta_final = s.Delta_thm1;
      s.delta_final = std::min(s.delta_thm2, s.delta_eq27);
      iterate_improvement(s, opt.iterations);
      s.Delta_tilde = bound_energy_tilde(s.lambda_n_lo, s.lambda_N_hi, s.lambda_hat, s.delta_final);

      for (double* v : {&s.Delta_thm1, &s.delta_thm2, &s.delta_eq27, &s.Delta_final, &s.delta_final})
        *v = clamp_unit(*v * inflate);
    } catch (const GapViolated& e) {
      if (!opt.mark_gap_violations) rethrow_with_cluster(e, k);
      s.gap_violated = true;
      s.failure = e.what();
    } catch (const SeparationViolated& e) {
      rethrow_with_cluster(e, k);
    } catch (const ConditionViolated& e) {
      rethrow_with_cluster(e, k);
    } catch (const IllConditionedBasis& e) {
      rethrow_with_cluster(e, k);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace eigencert
