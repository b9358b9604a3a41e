#include "eigencert/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

#include "eigencert/certify.hpp"
#include "eigencert/error.hpp"
#include "eigencert/oracle.hpp"

namespace eigencert {

namespace {

template <typename E>
bool rethrow_as(std::exception_ptr p, const std::string& prefix) {
  try {
    std::rethrow_exception(p);
  } catch (const E& e) {
    throw E(prefix + e.what());
  } catch (...) {
  }
  return false;
}

// Rethrows a module error with the same dynamic type and a context prefix.
[[noreturn]] void rethrow_with_context(std::exception_ptr p, const std::string& prefix) {
  try {
    std::rethrow_exception(p);
  } catch (const ParseError& e) {
    throw ParseError(prefix + e.what(), e.line());
  } catch (const Error&) {
  } catch (...) {
    std::rethrow_exception(p);
  }
  rethrow_as<IllConditionedBasis>(p, prefix);
  rethrow_as<NumericalError>(p, prefix);
  rethrow_as<InvalidArgument>(p, prefix);
  rethrow_as<ValidationError>(p, prefix);
  rethrow_as<ConditionViolated>(p, prefix);
  rethrow_as<EmptySystem>(p, prefix);
  rethrow_as<MissingConstant>(p, prefix);
  rethrow_as<GapViolated>(p, prefix);
  rethrow_as<SeparationViolated>(p, prefix);
  rethrow_as<OrderingError>(p, prefix);
  rethrow_as<ConfigError>(p, prefix);
  rethrow_as<InsufficientData>(p, prefix);
  rethrow_as<Error>(p, prefix);
  std::rethrow_exception(p);
}

double level_ch(const RunConfig& cfg, const Triangulation& t, int level) {
  if (cfg.ch_source == ChSource::formula_0493h) return compute_ch(t, cfg.domain);
  const ChTable table = ChTable::read(cfg.ch_path);
  return compute_ch(t, cfg.domain, level, &table);
}

EigenEnclosure level_enclosure(const RunConfig& cfg) {
  if (cfg.enclosure_source == EnclosureSource::exact_square) return EigenEnclosure::exact_square(cfg.clusters.total());
  return EigenEnclosure::read(cfg.enclosure_path);
}

std::vector<ReportRow> certify_level(const RunConfig& cfg, int level) {
  if (cfg.element != ElementKind::p1) throw ConfigError("certification needs conforming p1 elements");
  // Fail on a missing tabulated constant before paying for the mesh.
  if (cfg.ch_source == ChSource::file) ChTable::read(cfg.ch_path).at(level);
  const LevelSolution sol = solve_level(cfg, level);
  const double ch = level_ch(cfg, sol.mesh, level);
  const EigenEnclosure enc = level_enclosure(cfg);
  CertifyOptions opt;
  opt.iterations = cfg.iterations;
  opt.mode = cfg.mode;
  opt.mark_gap_violations = true;
  const auto states = certify_all_clusters(sol.spectrum, sol.system, cfg.clusters, enc, ch, opt);

  std::vector<ReportRow> rows;
  for (const auto& s : states) {
    ReportRow r;
    r.level = level;
    r.h = sol.mesh.h();
    r.cluster = s.cluster;
    r.ch = ch;
    r.rho = s.rho;
    r.lambda_hat = s.lambda_hat;
    r.gap_violated = s.gap_violated;
    if (!s.gap_violated) {
      r.Delta_thm1 = s.Delta_thm1;
      r.delta_thm2 = s.delta_thm2;
      r.delta_eq27 = s.delta_eq27;
      r.Delta_final = s.Delta_final;
      r.delta_final = s.delta_final;
      r.Delta_tilde = s.Delta_tilde;
    }
    if (cfg.domain.kind == DomainKind::unit_square) {
      try {
        const auto ex = exact_directed_distance_square(sol.spectrum, sol.mesh, sol.system, s.first, s.last);
        r.Delta_exact = ex.Delta;
        r.delta_exact = ex.delta;
      } catch (const Error& e) {
        throw OrderingError("cluster " + std::to_string(s.cluster) + ": oracle failed: " + e.what());
      }
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

int thread_budget() {
  if (const char* env = std::getenv("EIGENCERT_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Triangulation build_mesh(const RunConfig& cfg, int level) {
  switch (cfg.domain.kind) {
    case DomainKind::unit_square:
      return generate_uniform_square_mesh(level);
    case DomainKind::dumbbell:
      return refine_uniform(generate_dumbbell_mesh(), level);
    default:
      throw ConfigError("domain.kind: no mesh generator for general polygons");
  }
}

LevelSolution solve_level(const RunConfig& cfg, int level) {
  Triangulation mesh = build_mesh(cfg, level);
  AssembledSystem sys = cfg.element == ElementKind::p1 ? assemble_p1(mesh) : assemble_cr(mesh);
  const int wanted = cfg.clusters.total() + cfg.extra_eigenpairs;
  if (wanted > sys.size())
    throw InvalidArgument("mesh has " + std::to_string(sys.size()) + " degrees of freedom but " +
                          std::to_string(wanted) + " eigenpairs are needed");
  Spectrum spec = solve_generalized(sys, wanted);
  return {std::move(mesh), std::move(sys), std::move(spec)};
}

CertifiedReport run(const RunConfig& cfg, const RunOptions& options) {
  validate(cfg);
  const std::size_t n = cfg.levels.size();
  std::vector<std::vector<ReportRow>> rows(n);
  std::vector<double> seconds(n, 0.0);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const auto start = std::chrono::steady_clock::now();
      try {
        rows[i] = certify_level(cfg, cfg.levels[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
      seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  };
  const int budget = options.threads > 0 ? options.threads : thread_budget();
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(budget));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t i = 0; i < n; ++i)
    if (errors[i]) rethrow_with_context(errors[i], "level " + std::to_string(cfg.levels[i]) + ": ");

  CertifiedReport report;
  for (std::size_t i = 0; i < n; ++i) {
    report.rows.insert(report.rows.end(), rows[i].begin(), rows[i].end());
    report.timings.push_back({cfg.levels[i], seconds[i]});
  }
  return report;
}

}  // namespace eigencert
