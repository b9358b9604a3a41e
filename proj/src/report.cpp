#include "eigencert/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <vector>

#include "eigencert/error.hpp"

namespace eigencert {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

const std::vector<std::string>& columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> out;
    std::stringstream ss{std::string(kCsvHeader)};
    for (std::string c; std::getline(ss, c, ',');) out.push_back(c);
    return out;
  }();
  return cols;
}

bool is_bound_column(std::string_view c) {
  return c == "Delta_thm1" || c == "delta_thm2" || c == "delta_eq27" || c == "Delta_final" || c == "delta_final" ||
         c == "Delta_tilde";
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

double parse_double(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("cannot parse '" + s + "' as a number", line);
  }
}

int parse_int(const std::string& s, int line) {
  const double v = parse_double(s, line);
  if (v != std::floor(v)) throw ParseError("expected an integer, got '" + s + "'", line);
  return static_cast<int>(v);
}

}  // namespace

std::optional<double> column_value(const ReportRow& r, std::string_view c) {
  if (c == "level") return r.level;
  if (c == "h") return r.h;
  if (c == "cluster") return r.cluster;
  if (c == "Ch") return r.ch;
  if (c == "rho") return r.rho;
  if (c == "lambda_hat") return r.lambda_hat;
  if (c == "Delta_exact") return r.Delta_exact;
  if (c == "delta_exact") return r.delta_exact;
  if (!is_bound_column(c)) throw InvalidArgument("unknown report column '" + std::string(c) + "'");
  if (r.gap_violated) return std::nullopt;
  if (c == "Delta_thm1") return r.Delta_thm1;
  if (c == "delta_thm2") return r.delta_thm2;
  if (c == "delta_eq27") return r.delta_eq27;
  if (c == "Delta_final") return r.Delta_final;
  if (c == "delta_final") return r.delta_final;
  return r.Delta_tilde;
}

void emit_csv(const CertifiedReport& report, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : report.rows) {
    out << r.level;
    for (std::size_t i = 1; i < columns().size(); ++i) {
      const std::string& c = columns()[i];
      out << ',';
      if (c == "cluster") {
        out << r.cluster;
      } else if (r.gap_violated && is_bound_column(c)) {
        out << kGapViolated;
      } else if (const auto v = column_value(r, c)) {
        out << num(*v);
      }
    }
    out << '\n';
  }
}

void emit_csv(const CertifiedReport& report, const std::filesystem::path& path) {
  auto out = open_out(path);
  emit_csv(report, out);
  if (!out) throw Error("error while writing " + path.string());
}

void emit_json(const CertifiedReport& report, std::ostream& out) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    for (const auto& c : columns()) {
      if (c == "level" || c == "cluster") {
        row[c] = static_cast<int>(*column_value(r, c));
      } else if (r.gap_violated && is_bound_column(c)) {
        row[c] = std::string(kGapViolated);
      } else if (const auto v = column_value(r, c)) {
        row[c] = *v;
      } else {
        row[c] = nullptr;
      }
    }
    rows.push_back(std::move(row));
  }
  nlohmann::ordered_json timings = nlohmann::ordered_json::array();
  for (const auto& t : report.timings) timings.push_back({{"level", t.level}, {"wall_seconds", t.seconds}});
  nlohmann::ordered_json doc;
  doc["columns"] = columns();
  doc["rows"] = std::move(rows);
  doc["timings"] = std::move(timings);
  out << doc.dump(2) << '\n';
}

void emit_json(const CertifiedReport& report, const std::filesystem::path& path) {
  auto out = open_out(path);
  emit_json(report, out);
  if (!out) throw Error("error while writing " + path.string());
}

CertifiedReport read_csv(std::istream& in) {
  std::string line;
  int line_no = 1;
  if (!std::getline(in, line)) throw ParseError("empty report", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw ParseError("unexpected CSV header", 1);
  CertifiedReport report;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != columns().size())
      throw ParseError("expected " + std::to_string(columns().size()) + " cells, got " + std::to_string(cells.size()),
                       line_no);
    ReportRow r;
    r.level = parse_int(cells[0], line_no);
    r.h = parse_double(cells[1], line_no);
    r.cluster = parse_int(cells[2], line_no);
    r.ch = parse_double(cells[3], line_no);
    r.rho = parse_double(cells[4], line_no);
    r.lambda_hat = parse_double(cells[5], line_no);
    r.gap_violated = cells[6] == kGapViolated;
    if (!r.gap_violated) {
      r.Delta_thm1 = parse_double(cells[6], line_no);
      r.delta_thm2 = parse_double(cells[7], line_no);
      r.delta_eq27 = parse_double(cells[8], line_no);
      r.Delta_final = parse_double(cells[9], line_no);
      r.delta_final = parse_double(cells[10], line_no);
      r.Delta_tilde = parse_double(cells[11], line_no);
    }
    if (!cells[12].empty()) r.Delta_exact = parse_double(cells[12], line_no);
    if (!cells[13].empty()) r.delta_exact = parse_double(cells[13], line_no);
    report.rows.push_back(r);
  }
  return report;
}

CertifiedReport read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open report " + path.string(), 0);
  return read_csv(in);
}

double slope(const CertifiedReport& report, std::string_view column, int cluster) {
  std::vector<double> xs, ys;
  for (const auto& r : report.rows) {
    if (r.cluster != cluster) continue;
    const auto v = column_value(r, column);
    if (!v || !(*v > 0.0) || !(r.h > 0.0)) continue;
    xs.push_back(std::log(r.h));
    ys.push_back(std::log(*v));
  }
  if (xs.size() < 3)
    throw InsufficientData("slope of " + std::string(column) + " for cluster " + std::to_string(cluster) +
                           " needs at least 3 usable rows, found " + std::to_string(xs.size()));
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (!(sxx > 0.0)) throw InsufficientData("slope needs at least two distinct mesh sizes");
  return sxy / sxx;
}

}  // namespace eigencert
