#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "eigencert/pipeline.hpp"

namespace eigencert {

inline constexpr std::string_view kCsvHeader =
    "level,h,cluster,Ch,rho,lambda_hat,Delta_thm1,delta_thm2,delta_eq27,Delta_final,delta_final,Delta_tilde,"
    "Delta_exact,delta_exact";

/// Marker written in place of bounds for a cluster whose gap condition fails.
inline constexpr std::string_view kGapViolated = "gap-violated";

/// Numbers with 10 significant digits; empty cells for unavailable oracle values.
void emit_csv(const CertifiedReport& report, std::ostream& out);
void emit_csv(const CertifiedReport& report, const std::filesystem::path& path);

/// Same schema as the CSV plus per-level wall time.
void emit_json(const CertifiedReport& report, std::ostream& out);
void emit_json(const CertifiedReport& report, const std::filesystem::path& path);

/// Parses a CSV written by emit_csv. Throws ParseError on schema mismatch.
CertifiedReport read_csv(std::istream& in);
CertifiedReport read_csv(const std::filesystem::path& path);

/// Least-squares slope of log(value) against log(h) for one column and
/// cluster. Gap-violated rows, empty cells and non-positive values are skipped;
/// fewer than three points throws InsufficientData.
double slope(const CertifiedReport& report, std::string_view column, int cluster);

/// Column value for one row; nullopt for empty oracle cells or gap-violated bounds.
std::optional<double> column_value(const ReportRow& row, std::string_view column);

}  // namespace eigencert
