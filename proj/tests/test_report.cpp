#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <sstream>

#include "eigencert/error.hpp"
#include "eigencert/report.hpp"

using namespace eigencert;

namespace {

ReportRow row(int level, int cluster, double h, double value) {
  ReportRow r;
  r.level = level;
  r.h = h;
  r.cluster = cluster;
  r.ch = 0.493 * h;
  r.rho = 49.348022005446793;
  r.lambda_hat = 19.9;
  r.Delta_thm1 = r.Delta_final = value;
  r.delta_thm2 = r.delta_eq27 = r.delta_final = value * value;
  r.Delta_tilde = 0.5;
  return r;
}

std::string csv(const CertifiedReport& r) {
  std::ostringstream out;
  emit_csv(r, out);
  return out.str();
}

}  // namespace

TEST_CASE("CSV header is stable") {
  CHECK(csv({}) ==
        "level,h,cluster,Ch,rho,lambda_hat,Delta_thm1,delta_thm2,delta_eq27,Delta_final,delta_final,Delta_tilde,"
        "Delta_exact,delta_exact\n");
}

TEST_CASE("rows use 10 significant digits and empty oracle cells") {
  CertifiedReport r;
  r.rows.push_back(row(8, 1, 0.125, 0.1));
  r.rows[0].Delta_exact = 0.0987654321987;
  const std::string text = csv(r);
  CHECK(text.find("\n8,0.125,1,0.061625,49.34802201,19.9,0.1,0.01,0.01,0.1,0.01,0.5,0.0987654322,\n") !=
        std::string::npos);
}

TEST_CASE("gap-violated rows carry the marker and round-trip") {
  CertifiedReport r;
  r.rows.push_back(row(2, 1, 0.125, 0.2));
  r.rows.push_back(row(2, 2, 0.125, 0.3));
  r.rows[1].gap_violated = true;
  const std::string text = csv(r);
  CHECK(text.find("gap-violated,gap-violated,gap-violated,gap-violated,gap-violated,gap-violated") !=
        std::string::npos);
  std::istringstream in(text);
  const auto back = read_csv(in);
  REQUIRE(back.rows.size() == 2);
  CHECK(back.rows[1].gap_violated);
  CHECK_FALSE(column_value(back.rows[1], "Delta_final").has_value());
  CHECK(*column_value(back.rows[0], "Delta_final") == 0.2);
  CHECK_FALSE(back.rows[0].Delta_exact.has_value());
  CHECK(csv(back) == text);
}

TEST_CASE("slope of an exact power law") {
  CertifiedReport r;
  for (int n : {8, 16, 32, 64}) r.rows.push_back(row(n, 1, 1.0 / n, 0.37 / n));
  CHECK(std::abs(slope(r, "Delta_thm1", 1) - 1.0) <= 1e-12);
  CHECK(std::abs(slope(r, "delta_eq27", 1) - 2.0) <= 1e-12);
  r.rows[1].gap_violated = true;
  CHECK(std::abs(slope(r, "Delta_final", 1) - 1.0) <= 1e-12);
  r.rows[2].gap_violated = true;
  CHECK_THROWS_AS(slope(r, "Delta_final", 1), InsufficientData);
  CHECK_THROWS_AS(slope(r, "Delta_exact", 1), InsufficientData);
  CHECK_THROWS_AS(slope(r, "Delta_final", 2), InsufficientData);
  CHECK_THROWS_AS(slope(r, "nonsense", 1), InvalidArgument);
}

TEST_CASE("JSON mirrors the CSV schema") {
  CertifiedReport r;
  r.rows.push_back(row(8, 1, 0.125, 0.1));
  r.rows.push_back(row(8, 2, 0.125, 0.1));
  r.rows[1].gap_violated = true;
  r.timings.push_back({8, 0.25});
  std::ostringstream out;
  emit_json(r, out);
  const auto doc = nlohmann::json::parse(out.str());
  CHECK(doc["columns"].size() == 14);
  CHECK(doc["columns"][0] == "level");
  CHECK(doc["rows"][0]["Delta_thm1"] == 0.1);
  CHECK(doc["rows"][0]["Delta_exact"].is_null());
  CHECK(doc["rows"][1]["Delta_final"] == "gap-violated");
  CHECK(doc["timings"][0]["level"] == 8);
}

TEST_CASE("CSV parse errors") {
  std::istringstream empty("");
  CHECK_THROWS_AS(read_csv(empty), ParseError);
  std::istringstream header("level,h\n");
  CHECK_THROWS_AS(read_csv(header), ParseError);
  std::istringstream cells(std::string(kCsvHeader) + "\n1,2,3\n");
  try {
    read_csv(cells);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(emit_csv(CertifiedReport{}, std::filesystem::path("/nonexistent/dir/out.csv")), Error);
}
