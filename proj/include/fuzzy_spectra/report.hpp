#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "fuzzy_spectra/analysis.hpp"
#include "fuzzy_spectra/core.hpp"

namespace fuzzy {

/// "%.17g" with '.' as decimal separator regardless of locale; both zeros
/// print as "0", non-finite values as "nan", "inf", "-inf".
std::string format_number(double v);

/// Escapes a string as a JSON string literal (with quotes).
std::string json_quote(const std::string& s);

/// Header `h,eigenvalue`, h counted from 1 in descending order.
void write_spectrum_csv(std::ostream& out, const Spectrum& s);
void write_spectrum_json(std::ostream& out, const Spectrum& s);

/// Comment lines `# report <id>`, `# k_rule ...`, `# tolerance ...`,
/// `# note ...`, then `<index>,<value columns>,pass` and one row per entry.
void write_report_csv(std::ostream& out, const VerificationReport& r);
void write_reports_csv(std::ostream& out, const std::vector<VerificationReport>& reports);
void write_reports_json(std::ostream& out, const std::vector<VerificationReport>& reports);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace fuzzy
