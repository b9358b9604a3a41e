#pragma once

#include <string>
#include <vector>

#include "eigencert/fem.hpp"
#include "eigencert/spectra.hpp"

namespace eigencert {

enum class EpsilonMode { exact, gershgorin };

struct CertifyOptions {
  int iterations = 5;
  EpsilonMode mode = EpsilonMode::exact;
  /// Relative inflation added to every reported bound.
  double inflation = 1e-12;
  /// Record a GapViolated cluster (and every later one) instead of throwing.
  bool mark_gap_violations = false;
};

struct Interval {
  double lo;
  double hi;
};

struct HistoryEntry {
  std::string name;
  double value;
};

struct ClusterBoundState {
  int cluster = 0;
  int first = 0;  // n_k
  int last = 0;   // N_k
  double lambda_hat = 0.0;
  double lambda_n_lo = 0.0;  // lo(n_k)
  double lambda_N_hi = 0.0;  // hi(N_k)
  double rho = 0.0;
  double ch = 0.0;
  double tau = 0.0;
  std::vector<double> zeta_hat;  // energy non-orthogonality against each prior cluster
  std::vector<double> eps_hat;   // L2 non-orthogonality against each prior cluster
  double Delta_thm1 = 1.0;
  double delta_thm2 = 1.0;
  double delta_eq27 = 1.0;
  double Delta_final = 1.0;
  double delta_final = 1.0;
  double Delta_tilde = 0.0;
  std::vector<HistoryEntry> history;
  bool gap_violated = false;
  std::string failure;
};

// Bound formulas. Enclosure endpoints are chosen to maximize each bound.

/// Energy bound (Theorem 1); returns Delta in [0, 1]. Throws GapViolated unless rho > lambda_n.hi.
double bound_energy_thm1(double lambda_hat, Interval lambda_n, double rho, double vartheta);

/// One summand (rho / lambda_{n_k} - 1) (zeta + Delta_k)^2 of vartheta.
double vartheta_term(double rho, double lambda_nk_lo, double zeta, double Delta_k);

/// L2 bound (Theorem 2); returns delta in [0, 1]. Throws GapViolated unless rho > lambda_n.hi.
double bound_l2_thm2(double lambda_hat, Interval lambda_n, double rho, double theta);

/// One summand (rho - lambda_{n_k}) (eps + delta_k)^2 of theta.
double theta_term(double rho, double lambda_nk_lo, double eps, double delta_k);

/// sqrt(lambda_N) Ch (1 + tau sqrt(dim)) Delta, clamped to [0, 1].
double bound_l2_optimal(double lambda_N_hi, double ch, double tau, int cluster_dim, double Delta);

/// sqrt(max(0, 2 - 2 lambda_n sqrt((1 - delta^2) / (lambda_N lambda_hat)))), clamped to [0, 1].
double bound_energy_from_l2(double lambda_n_lo, double lambda_N_hi, double lambda_hat, double delta);

/// lambda_N + lambda_hat - 2 lambda_n sqrt(1 - delta^2); reported only.
double bound_energy_tilde(double lambda_n_lo, double lambda_N_hi, double lambda_hat, double delta);

struct TauResult {
  double tau;
  int argmax_i;  // 1-based discrete index attaining the maximum
};

/// max over j in [first, last] and computed i outside of hi(j) / dist(lambda_h_i, [lo(j), hi(j)]).
/// Throws SeparationViolated when a discrete eigenvalue lies inside an enclosure.
TauResult compute_tau_k(const EigenEnclosure& enc, const Eigen::VectorXd& discrete, int first, int last);

/// Alternates the optimal L2 bound and the energy-from-L2 bound from the incumbent Delta/delta, keeping the
/// minimum each time; every value is appended to the history.
void iterate_improvement(ClusterBoundState& state, int iterations);

/// Bounds for every cluster in order. Each cluster uses rho = lo(N_k + 1).
std::vector<ClusterBoundState> certify_all_clusters(const Spectrum& spec, const AssembledSystem& sys,
                                                    const ClusterSpec& clusters, const EigenEnclosure& enc,
                                                    double ch, const CertifyOptions& options = {});

}  // namespace eigencert
