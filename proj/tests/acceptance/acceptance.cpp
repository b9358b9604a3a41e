// Acceptance run: one PASS/FAIL line per criterion.
//
// Exit status is 0 when the set of failing criteria equals the set given with
// --expect-fail (empty by default), so a known, documented failure does not
// hide a new one and an unexpected pass is reported too.

#include <CLI11.hpp>
#include <Eigen/QR>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "eigencert/certify.hpp"
#include "eigencert/error.hpp"
#include "eigencert/oracle.hpp"
#include "eigencert/pipeline.hpp"
#include "eigencert/report.hpp"
#include "eigencert/subspace.hpp"

using namespace eigencert;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::filesystem::path source_dir() { return EIGENCERT_SOURCE_DIR; }

std::string csv(const CertifiedReport& r) {
  std::ostringstream out;
  emit_csv(r, out);
  return out.str();
}

Eigen::MatrixXd gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

double fit_slope(const std::vector<double>& h, const std::vector<double>& v) {
  CertifiedReport r;
  for (std::size_t i = 0; i < h.size(); ++i) {
    ReportRow row;
    row.h = h[i];
    row.cluster = 1;
    row.Delta_exact = v[i];
    r.rows.push_back(row);
  }
  return slope(r, "Delta_exact", 1);
}

// Square report reused by criteria 1, 2 and 8.
const CertifiedReport& square_report() {
  static const CertifiedReport report = [] {
    RunConfig cfg = read_config(source_dir() / "configs" / "square.cfg");
    return run(cfg, {1});
  }();
  return report;
}

Outcome guarantee() {
  const auto start = std::chrono::steady_clock::now();
  const auto& report = square_report();
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  int checked = 0, violations = 0;
  for (const auto& r : report.rows) {
    if (r.gap_violated || !r.Delta_exact || !r.delta_exact) return {false, "missing bound or oracle value"};
    for (double b : {r.Delta_thm1, r.Delta_final}) violations += b < *r.Delta_exact, ++checked;
    for (double b : {r.delta_thm2, r.delta_eq27, r.delta_final}) violations += b < *r.delta_exact, ++checked;
  }
  const bool ok = report.rows.size() == 16 && violations == 0 && seconds <= 300.0;
  return {ok, fmt("%zu rows, %d comparisons, %d violations, %.1f s single-threaded", report.rows.size(), checked,
                  violations, seconds)};
}

Outcome rates() {
  const auto& report = square_report();
  const double s_thm1 = slope(report, "Delta_thm1", 1);
  const double s_thm2 = slope(report, "delta_thm2", 1);
  const double s_eq27 = slope(report, "delta_eq27", 1);
  double ratio = 0.0;
  for (const auto& r : report.rows)
    if (r.level == 64 && r.cluster == 1) ratio = r.Delta_final / *r.Delta_exact;
  const bool ok = s_thm1 >= 0.8 && s_thm1 <= 1.2 && s_thm2 >= 0.8 && s_thm2 <= 1.2 && s_eq27 >= 1.7 &&
                  s_eq27 <= 2.3 && ratio >= 1.0 && ratio <= 5.0;
  return {ok, fmt("cluster 1 slopes: Delta_thm1 %.3f, delta_thm2 %.3f, delta_eq27 %.3f; "
                  "Delta_final/Delta_exact at n=64 = %.4f",
                  s_thm1, s_thm2, s_eq27, ratio)};
}

Outcome dominance() {
  const auto exact = exact_spectrum_square(6);
  std::vector<double> h, err;
  bool ok = true;
  double min_excess = 1e300;
  for (int n : {8, 16, 32, 64}) {
    const auto sys = assemble_p1(generate_uniform_square_mesh(n));
    const auto spec = solve_generalized(sys, 6);
    for (int i = 1; i <= 6; ++i) {
      const double excess = spec.value(i) - exact[static_cast<std::size_t>(i - 1)].lambda;
      min_excess = std::min(min_excess, excess);
      ok = ok && excess > 0.0;
    }
    h.push_back(1.0 / n);
    err.push_back(spec.value(1) - 2 * pi * pi);
  }
  const double s = fit_slope(h, err);
  ok = ok && std::abs(s - 2.0) <= 0.2;
  return {ok, fmt("min lambda_h,i - lambda_i = %.4g over i<=6 and 4 meshes; slope of lambda_h,1 - 2pi^2 = %.3f",
                  min_excess, s)};
}

Outcome lemma2() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> dim(1, 4), amb(8, 12);
  double worst_rel = 0.0;
  int dominated = 0, inapplicable = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = amb(rng), m = dim(rng), mp = dim(rng);
    // Near-orthonormal bases of two nearly orthogonal subspaces, as produced
    // by an eigensolver, so the Gershgorin conditions eta_G, eta_H < 1 hold.
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(gaussian(n, n, rng)).householderQ();
    const double noise = t % 2 ? 0.01 : 0.05;
    const Eigen::MatrixXd a = q.leftCols(m) + noise * gaussian(n, m, rng);
    const Eigen::MatrixXd b = q.middleCols(m, mp) + noise * gaussian(n, mp, rng) + 0.1 * q.leftCols(m) *
                                                                                       gaussian(m, mp, rng);
    const auto gt = gram_triple(a, b);
    const EpsilonPair e = epsilon_hat_sq_both(gt);
    const double scale = std::max({std::abs(e.via_h), std::abs(e.via_g), 1e-300});
    worst_rel = std::max(worst_rel, std::abs(e.via_h - e.via_g) / scale);
    const Etas etas = gershgorin_etas(gt);
    if (!(etas.G < 1.0 && etas.H < 1.0)) {
      ++inapplicable;
      continue;
    }
    const double upper = epsilon_hat_sq_upper(etas);
    if (upper >= e.via_h && upper >= e.via_g) ++dominated;
  }
  const bool ok = worst_rel <= 1e-10 && dominated == 1000;
  return {ok, fmt("1000 instances: worst relative disagreement %.2e; Gershgorin dominates %d, inapplicable %d",
                  worst_rel, dominated, inapplicable)};
}

Outcome cross_validation() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> dim(1, 3), amb(4, 7);
  double worst = 0.0, worst_sym = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int n = amb(rng), m = dim(rng), mp = dim(rng);
    const Eigen::MatrixXd a = gaussian(n, m, rng), b = gaussian(n, mp, rng);
    worst = std::max(worst, std::abs(brute_force_subspace_distance(a, b) - directed_distance_exact(a, b)));
    const Eigen::MatrixXd c = gaussian(n, m, rng);
    worst_sym = std::max(worst_sym, std::abs(directed_distance_exact(a, c) - directed_distance_exact(c, a)));
  }
  return {worst <= 1e-4 && worst_sym <= 1e-12,
          fmt("100 instances: max |brute force - principal angles| = %.2e, max symmetry defect = %.2e", worst,
              worst_sym)};
}

Outcome dumbbell() {
  const RunConfig cfg = read_config(source_dir() / "configs" / "dumbbell.cfg");
  const ChTable table = ChTable::read(cfg.ch_path);
  const EigenEnclosure enc = EigenEnclosure::read(cfg.enclosure_path);
  CertifyOptions opt;
  opt.iterations = cfg.iterations;
  opt.mark_gap_violations = true;
  std::vector<double> h, delta1;
  bool finite = true, below_one = true, monotone = true;
  try {
    for (int level : {2, 3, 4}) {
      const LevelSolution sol = solve_level(cfg, level);
      const auto states =
          certify_all_clusters(sol.spectrum, sol.system, cfg.clusters, enc, compute_ch(sol.mesh, cfg.domain, level, &table), opt);
      for (const auto& s : states) {
        const double bounds[] = {s.Delta_thm1, s.delta_thm2, s.delta_eq27, s.Delta_final, s.delta_final};
        for (double b : bounds) finite = finite && !s.gap_violated && std::isfinite(b);
        if (level >= 3 && (s.cluster == 1 || s.cluster == 3))
          for (double b : bounds) below_one = below_one && b < 1.0;
        // History: Delta_thm1, delta_thm2, delta_eq27, then (delta_eq27, Delta_eq28) per round.
        if (s.gap_violated || s.history.size() < 3) continue;
        double energy = s.history[0].value, l2 = std::min(s.history[1].value, s.history[2].value);
        for (std::size_t i = 3; i < s.history.size(); ++i) {
          double& last = s.history[i].name == "Delta_eq28" ? energy : l2;
          monotone = monotone && s.history[i].value <= last;
          last = s.history[i].value;
        }
      }
      h.push_back(sol.mesh.h());
      delta1.push_back(states.front().Delta_final);
    }
  } catch (const Error& e) {
    return {false, std::string("certify failed: ") + e.what()};
  }
  const double s = fit_slope(h, delta1);
  const bool ok = finite && below_one && monotone && s >= 0.7 && s <= 1.3;
  return {ok, fmt("levels 2-4, 4 clusters: finite %s, clusters 1,3 below 1 at level>=3 %s, iteration monotone %s, "
                  "cluster 1 Delta_final slope %.3f (%.4f, %.4f, %.4f)",
                  finite ? "yes" : "no", below_one ? "yes" : "no", monotone ? "yes" : "no", s, delta1[0], delta1[1],
                  delta1[2])};
}

Outcome hand_assembly() {
  const auto sys = assemble_p1(generate_uniform_square_mesh(2));
  const double k = sys.stiffness.coeff(0, 0), m = sys.mass.coeff(0, 0);
  const bool ok = sys.size() == 1 && k == 4.0 && m == 0.25;
  return {ok, fmt("n=2: %d dof, K = %.17g, M = %.17g (consistent mass; 8 triangles of area 1/8 give 1/6)", sys.size(), k,
                  m)};
}

Outcome determinism() {
  const RunConfig cfg = read_config(source_dir() / "configs" / "square.cfg");
  const std::string a = csv(square_report());
  const std::string b = csv(run(cfg));
  return {a == b && !a.empty(), fmt("single-threaded and default-threaded runs: %zu bytes, %s", a.size(),
                                    a == b ? "identical" : "different")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> expect_fail;
  app.add_option("--expect-fail", expect_fail, "Criteria known to fail; exit 0 only if exactly these fail");
  CLI11_PARSE(app, argc, argv);

  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"guarantee suite on the unit square", guarantee},
      {"convergence rates on the unit square", rates},
      {"conforming eigenvalue dominance", dominance},
      {"Lemma 2 equivalence and Gershgorin dominance", lemma2},
      {"subspace distance cross-validation", cross_validation},
      {"dumbbell pipeline", dumbbell},
      {"n=2 hand assembly K=[4], M=[1/4]", hand_assembly},
      {"determinism", determinism},
  };
  std::set<int> failed;
  for (int i = 0; i < 8; ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) failed.insert(i + 1);
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  if (failed != expected) {
    std::printf("failing criteria differ from the expected set\n");
    return 1;
  }
  return 0;
}
