#pragma once

#include <optional>
#include <vector>

#include "eigencert/config.hpp"
#include "eigencert/mesh.hpp"
#include "eigencert/spectra.hpp"

namespace eigencert {

struct ReportRow {
  int level = 0;
  double h = 0.0;
  int cluster = 0;
  double ch = 0.0;
  double rho = 0.0;
  double lambda_hat = 0.0;
  double Delta_thm1 = 0.0;
  double delta_thm2 = 0.0;
  double delta_eq27 = 0.0;
  double Delta_final = 0.0;
  double delta_final = 0.0;
  double Delta_tilde = 0.0;
  std::optional<double> Delta_exact;
  std::optional<double> delta_exact;
  bool gap_violated = false;
};

struct LevelTiming {
  int level = 0;
  double seconds = 0.0;
};

struct CertifiedReport {
  std::vector<ReportRow> rows;        // ordered by (level, cluster)
  std::vector<LevelTiming> timings;   // wall time per level; not part of the CSV
};

struct RunOptions {
  /// Worker threads across levels; 0 reads EIGENCERT_THREADS, else hardware concurrency.
  int threads = 0;
};

/// Mesh for one configured level.
Triangulation build_mesh(const RunConfig& config, int level);

/// Discrete eigenpairs for one level (N_K + extra pairs).
struct LevelSolution {
  Triangulation mesh;
  AssembledSystem system;
  Spectrum spectrum;
};
LevelSolution solve_level(const RunConfig& config, int level);

/// mesh -> assemble -> solve -> certify (-> oracle on the square) for every level.
/// Module errors are rethrown with the level prepended to the message.
CertifiedReport run(const RunConfig& config, const RunOptions& options = {});

/// Worker count from EIGENCERT_THREADS (>= 1), else hardware concurrency.
int thread_budget();

}  // namespace eigencert
