#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>

#include "eigencert/config.hpp"
#include "eigencert/error.hpp"
#include "eigencert/pipeline.hpp"
#include "eigencert/report.hpp"

using namespace eigencert;

namespace {

const char* const kBoundColumns[] = {"Delta_thm1", "delta_thm2", "delta_eq27", "Delta_final",
                                     "delta_final", "Delta_exact", "delta_exact"};

RunConfig load(const std::string& path, bool gershgorin, int iterations) {
  RunConfig cfg = read_config(path);
  if (gershgorin) cfg.mode = EpsilonMode::gershgorin;
  if (iterations >= 0) cfg.iterations = iterations;
  return cfg;
}

int cmd_mesh(const RunConfig& cfg, int level, const std::string& out) {
  const int lv = level >= 0 ? level : cfg.levels.front();
  const Triangulation t = build_mesh(cfg, lv);
  if (out.empty()) throw ConfigError("mesh: --out is required");
  write_mesh(t, out);
  std::printf("level %d: %d vertices, %d triangles, h = %.10g, min angle = %.4g deg\n", lv, t.num_vertices(),
              t.num_triangles(), t.h(), t.min_angle_degrees());
  return 0;
}

int cmd_solve(const RunConfig& cfg, const std::string& out) {
  std::FILE* f = out.empty() ? stdout : std::fopen(out.c_str(), "w");
  if (!f) throw Error("cannot write " + out);
  const bool cr = cfg.element == ElementKind::cr;
  std::fprintf(f, cr ? "level,index,lambda_h,crude_lower\n" : "level,index,lambda_h\n");
  for (int level : cfg.levels) {
    const LevelSolution sol = solve_level(cfg, level);
    std::vector<double> lower;
    if (cr) {
      const ChTable table = cfg.ch_source == ChSource::file ? ChTable::read(cfg.ch_path) : ChTable();
      const double ch = cfg.ch_source == ChSource::file ? compute_ch(sol.mesh, cfg.domain, level, &table)
                                                        : compute_ch(sol.mesh, cfg.domain);
      lower = crude_lower_bounds_cr(sol.spectrum, ch);
    }
    for (int i = 1; i <= sol.spectrum.count(); ++i) {
      if (cr)
        std::fprintf(f, "%d,%d,%.10g,%.10g\n", level, i, sol.spectrum.value(i), lower[static_cast<std::size_t>(i - 1)]);
      else
        std::fprintf(f, "%d,%d,%.10g\n", level, i, sol.spectrum.value(i));
    }
  }
  if (f != stdout) std::fclose(f);
  return 0;
}

int cmd_certify(const RunConfig& cfg, const std::string& out, const std::string& json) {
  const CertifiedReport report = run(cfg);
  if (out.empty())
    emit_csv(report, std::cout);
  else
    emit_csv(report, std::filesystem::path(out));
  if (!json.empty()) emit_json(report, std::filesystem::path(json));
  return 0;
}

int cmd_report(const std::string& csv, const std::string& out) {
  const CertifiedReport report = read_csv(std::filesystem::path(csv));
  if (!out.empty()) {
    emit_json(report, std::filesystem::path(out));
    return 0;
  }
  std::printf("%5s %7s %12s %12s %12s %12s %12s %12s\n", "level", "cluster", "Delta_thm1", "Delta_final",
              "Delta_exact", "delta_thm2", "delta_final", "delta_exact");
  auto cell = [](const ReportRow& r, const char* c) {
    const auto v = column_value(r, c);
    char buf[32];
    if (v)
      std::snprintf(buf, sizeof buf, "%12.4e", *v);
    else
      std::snprintf(buf, sizeof buf, "%12s", r.gap_violated ? "gap" : "-");
    return std::string(buf);
  };
  for (const auto& r : report.rows)
    std::printf("%5d %7d %s %s %s %s %s %s\n", r.level, r.cluster, cell(r, "Delta_thm1").c_str(),
                cell(r, "Delta_final").c_str(), cell(r, "Delta_exact").c_str(), cell(r, "delta_thm2").c_str(),
                cell(r, "delta_final").c_str(), cell(r, "delta_exact").c_str());
  return 0;
}

int cmd_slopes(const std::string& csv, const std::string& column, int cluster) {
  const CertifiedReport report = read_csv(std::filesystem::path(csv));
  int max_cluster = 0;
  for (const auto& r : report.rows) max_cluster = std::max(max_cluster, r.cluster);
  std::printf("cluster,column,slope\n");
  for (int k = 1; k <= max_cluster; ++k) {
    if (cluster > 0 && k != cluster) continue;
    for (const char* c : kBoundColumns) {
      if (!column.empty() && column != c) continue;
      try {
        std::printf("%d,%s,%.4f\n", k, c, slope(report, c, k));
      } catch (const InsufficientData&) {
        std::printf("%d,%s,\n", k, c);
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guaranteed eigenspace error bounds for the Dirichlet Laplacian"};
  app.require_subcommand(1);

  std::string config, out, json, csv, column;
  bool gershgorin = false;
  int iterations = -1, level = -1, cluster = 0;

  auto* mesh = app.add_subcommand("mesh", "Write the mesh of one configured level");
  mesh->add_option("--config", config, "Run configuration")->required()->check(CLI::ExistingFile);
  mesh->add_option("--level", level, "Level to write (default: first configured)");
  mesh->add_option("--out", out, "Output mesh file")->required();

  auto* solve = app.add_subcommand("solve", "Print discrete eigenvalues for every level");
  solve->add_option("--config", config, "Run configuration")->required()->check(CLI::ExistingFile);
  solve->add_option("--out", out, "Output CSV (default: stdout)");

  auto* certify = app.add_subcommand("certify", "Certify every cluster at every level");
  certify->add_option("--config", config, "Run configuration")->required()->check(CLI::ExistingFile);
  certify->add_option("--out", out, "Output CSV (default: stdout)");
  certify->add_option("--json", json, "Also write the JSON report");
  certify->add_flag("--gershgorin", gershgorin, "Use Gershgorin estimates for the non-orthogonality measures");
  certify->add_option("--iterations", iterations, "Improvement rounds (default from config)")
      ->check(CLI::NonNegativeNumber);

  auto* report = app.add_subcommand("report", "Summarize a certify CSV");
  report->add_option("csv", csv, "CSV written by certify")->required()->check(CLI::ExistingFile);
  report->add_option("--out", out, "Write JSON instead of the summary table");

  auto* slopes = app.add_subcommand("slopes", "Log-log convergence slopes from a certify CSV");
  slopes->add_option("csv", csv, "CSV written by certify")->required()->check(CLI::ExistingFile);
  slopes->add_option("--column", column, "Restrict to one column");
  slopes->add_option("--cluster", cluster, "Restrict to one cluster");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*mesh) return cmd_mesh(load(config, false, -1), level, out);
    if (*solve) return cmd_solve(load(config, false, -1), out);
    if (*certify) return cmd_certify(load(config, gershgorin, iterations), out, json);
    if (*report) return cmd_report(csv, out);
    if (*slopes) return cmd_slopes(csv, column, cluster);
  } catch (const Error& e) {
    std::fprintf(stderr, "eigencert: %s\n", e.what());
    return 2;
  }
  return 1;
}
