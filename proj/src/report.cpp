#include "fuzzy_spectra/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>

#include <unistd.h>

namespace fuzzy {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  // to_chars ignores the global locale.
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string json_quote(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

namespace {

// JSON has no literal for non-finite numbers.
std::string json_number(double v) { return std::isfinite(v) ? format_number(v) : "null"; }

const char* json_bool(bool b) { return b ? "true" : "false"; }

}  // namespace

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  out << "h,eigenvalue\n";
  for (std::size_t i = 0; i < s.size(); ++i) out << (i + 1) << ',' << format_number(s[i]) << '\n';
}

void write_spectrum_json(std::ostream& out, const Spectrum& s) {
  out << "{\n  \"eigenvalues\": [";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << (i ? ",\n" : "\n") << "    {\"h\": " << (i + 1) << ", \"eigenvalue\": " << json_number(s[i])
        << '}';
  }
  out << (s.size() ? "\n  ]" : "]") << ",\n  \"min_gap\": " << json_number(s.min_gap()) << "\n}\n";
}

void write_report_csv(std::ostream& out, const VerificationReport& r) {
  out << "# report " << r.theorem << '\n';
  out << "# lambda_range " << r.lambda_min << ' ' << r.lambda_max << '\n';
  if (!r.k_rule.empty()) out << "# k_rule " << r.k_rule << '\n';
  for (const auto& [name, v] : r.tolerances) out << "# tolerance " << name << ' ' << format_number(v) << '\n';
  for (const auto& [key, v] : r.notes) out << "# note " << key << ' ' << v << '\n';
  out << "# passed " << json_bool(r.passed()) << '\n';
  out << r.index_name;
  if (!r.rows.empty())
    for (const auto& [name, v] : r.rows.front().values) out << ',' << name;
  out << ",pass\n";
  for (const auto& row : r.rows) {
    out << row.lambda;
    for (const auto& [name, v] : row.values) out << ',' << format_number(v);
    out << ',' << json_bool(row.pass) << '\n';
  }
}

void write_reports_csv(std::ostream& out, const std::vector<VerificationReport>& reports) {
  for (const auto& r : reports) write_report_csv(out, r);
}

void write_reports_json(std::ostream& out, const std::vector<VerificationReport>& reports) {
  bool all = true;
  for (const auto& r : reports) all = all && r.passed();
  out << "{\n  \"passed\": " << json_bool(all) << ",\n  \"reports\": [";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    out << (i ? ",\n" : "\n") << "    {\n";
    out << "      \"theorem\": " << json_quote(r.theorem) << ",\n";
    out << "      \"index\": " << json_quote(r.index_name) << ",\n";
    out << "      \"lambda_min\": " << r.lambda_min << ",\n";
    out << "      \"lambda_max\": " << r.lambda_max << ",\n";
    out << "      \"k_rule\": " << json_quote(r.k_rule) << ",\n";
    out << "      \"passed\": " << json_bool(r.passed()) << ",\n";
    out << "      \"tolerances\": {";
    for (std::size_t j = 0; j < r.tolerances.size(); ++j)
      out << (j ? ", " : "") << json_quote(r.tolerances[j].first) << ": " << json_number(r.tolerances[j].second);
    out << "},\n      \"notes\": {";
    for (std::size_t j = 0; j < r.notes.size(); ++j)
      out << (j ? ", " : "") << json_quote(r.notes[j].first) << ": " << json_quote(r.notes[j].second);
    out << "},\n      \"rows\": [";
    for (std::size_t j = 0; j < r.rows.size(); ++j) {
      const auto& row = r.rows[j];
      out << (j ? ",\n" : "\n") << "        {" << json_quote(r.index_name) << ": " << row.lambda;
      for (const auto& [name, v] : row.values) out << ", " << json_quote(name) << ": " << json_number(v);
      out << ", \"pass\": " << json_bool(row.pass) << '}';
    }
    out << (r.rows.empty() ? "]" : "\n      ]") << "\n    }";
  }
  out << (reports.empty() ? "]" : "\n  ]") << "\n}\n";
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << contents;
    f.flush();
    if (!f) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

}  // namespace fuzzy
