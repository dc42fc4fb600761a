#include "fuzzy_spectra/cli.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "fuzzy_spectra/circle.hpp"
#include "fuzzy_spectra/eigensolver.hpp"
#include "fuzzy_spectra/report.hpp"
#include "fuzzy_spectra/sphere.hpp"
#include "fuzzy_spectra/suite.hpp"

namespace fuzzy::cli {
namespace {

constexpr double kResidualTol = 1e-10;

bool single_lambda(const RunConfig& c) { return c.lambda_min == c.lambda_max; }

Format format_of(const RunConfig& c) {
  if (c.format) return *c.format;
  return c.command == Command::MadoreCompare ? Format::Json : Format::Csv;
}

KRule sweep_rule(const RunConfig& c) {
  if (c.k) return KRule{KRule::Kind::Explicit, *c.k};
  if (c.k_rule) return *c.k_rule;
  return KRule{c.space == SpaceKind::Sphere ? KRule::Kind::Lambda6 : KRule::Kind::CircleGrowth, 0.0};
}

FuzzyParams params_for(const RunConfig& c, SpaceKind kind, int lambda) {
  if (kind == SpaceKind::Madore) return make_params(lambda, std::nullopt, kind);
  if (c.k) return make_params(lambda, c.k, kind);
  const KRule rule = c.k_rule.value_or(KRule{});
  return make_params(lambda, rule(lambda), kind);
}

std::string emit_table(const RunConfig& c, const std::vector<std::string>& columns,
                       const std::vector<std::vector<std::string>>& rows, const std::string& json_key) {
  std::ostringstream os;
  if (format_of(c) == Format::Csv) {
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << '\n';
    }
  } else {
    // Cells are preformatted numbers, booleans or quoted strings.
    os << "{\n  " << json_quote(json_key) << ": [";
    for (std::size_t j = 0; j < rows.size(); ++j) {
      os << (j ? ",\n" : "\n") << "    {";
      for (std::size_t i = 0; i < columns.size(); ++i)
        os << (i ? ", " : "") << json_quote(columns[i]) << ": " << rows[j][i];
      os << '}';
    }
    os << (rows.empty() ? "]" : "\n  ]") << "\n}\n";
  }
  return os.str();
}

std::string num(double v) {
  const std::string s = format_number(v);
  return std::isfinite(v) ? s : "null";
}

Spectrum spectrum_of(const RunConfig& c) {
  const int L = c.lambda_min;
  switch (c.space) {
    case SpaceKind::Circle:
      return eigen_all(build_x1(params_for(c, SpaceKind::Circle, L)), c.tol);
    case SpaceKind::Sphere: {
      const FuzzyParams p = params_for(c, SpaceKind::Sphere, L);
      if (c.m) return eigen_all(build_Bm(p, *c.m), c.tol);
      std::vector<double> all;
      const BlockFamily family = build_block_family(p);
      for (const auto& [m, b] : family.blocks) {
        const Spectrum s = eigen_all(b, c.tol);
        all.insert(all.end(), s.values().begin(), s.values().end());
      }
      return Spectrum(std::move(all));
    }
    case SpaceKind::Madore:
      return madore_spectrum(L);
  }
  return {};
}

std::pair<int, std::string> cmd_spectrum(const RunConfig& c) {
  const Spectrum s = spectrum_of(c);
  std::ostringstream os;
  if (format_of(c) == Format::Csv)
    write_spectrum_csv(os, s);
  else
    write_spectrum_json(os, s);
  return {kExitPass, os.str()};
}

std::pair<int, std::string> cmd_eigvec(const RunConfig& c) {
  const int L = c.lambda_min;
  Eigenpair pair;
  if (c.space == SpaceKind::Madore) {
    const auto spectrum = madore_spectrum(L);
    if (c.h < 1 || c.h > static_cast<int>(spectrum.size())) throw UsageError("--index out of range");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spectrum.size()));
    v(c.h - 1) = 1.0;
    pair = Eigenpair{spectrum[c.h - 1], StateVector::from_real(v), 0.0};
  } else {
    const SymTridiag t = c.space == SpaceKind::Circle
                             ? build_x1(params_for(c, SpaceKind::Circle, L))
                             : build_Bm(params_for(c, SpaceKind::Sphere, L), c.m.value_or(0));
    const Spectrum s = eigen_all(t, c.tol);
    if (c.h < 1 || c.h > static_cast<int>(s.size())) throw UsageError("--index out of range");
    pair = eigenvector_of(t, s[c.h - 1]);
  }
  std::ostringstream os;
  const auto& v = pair.vector.coefficients;
  if (format_of(c) == Format::Csv) {
    os << "# eigenvalue " << format_number(pair.value) << "\n# residual " << format_number(pair.residual)
       << "\ni,component\n";
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i + 1) << ',' << format_number(v(i).real()) << '\n';
  } else {
    os << "{\n  \"eigenvalue\": " << num(pair.value) << ",\n  \"residual\": " << num(pair.residual)
       << ",\n  \"components\": [";
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << num(v(i).real());
    os << "]\n}\n";
  }
  return {kExitPass, os.str()};
}

std::pair<int, std::string> emit_reports(const RunConfig& c, const std::vector<VerificationReport>& reports) {
  std::ostringstream os;
  if (format_of(c) == Format::Csv)
    write_reports_csv(os, reports);
  else
    write_reports_json(os, reports);
  const bool ok = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed(); });
  return {ok ? kExitPass : kExitFail, os.str()};
}

std::pair<int, std::string> cmd_verify(const RunConfig& c) {
  SuiteOptions o;
  o.lambda_min = c.lambda_min;
  o.lambda_max = c.lambda_max;
  if (c.space_given) o.space = c.space;
  o.m = c.m;
  if (c.k) o.k_rule = KRule{KRule::Kind::Explicit, *c.k};
  if (c.k_rule) o.k_rule = c.k_rule;
  if (c.all) return emit_reports(c, run_all(o));
  return emit_reports(c, {run_theorem(*c.theorem, o)});
}

std::pair<int, std::string> cmd_sweep(const RunConfig& c) {
  const KRule rule = sweep_rule(c);
  if (c.space == SpaceKind::Madore) throw UsageError("sweep: --space must be circle or sphere");
  VerificationReport r = c.space == SpaceKind::Circle
                             ? top_eig_monotonicity_circle(c.lambda_max, rule, c.lambda_min)
                             : top_eig_monotonicity_sphere(c.lambda_max, rule, c.lambda_min);
  return emit_reports(c, {r});
}

std::pair<int, std::string> cmd_localize(const RunConfig& c) {
  std::vector<std::vector<std::string>> rows;
  for (int L = c.lambda_min; L <= c.lambda_max; ++L) {
    const Localization loc = most_localized(params_for(c, c.space, L));
    rows.push_back({std::to_string(L), num(loc.top_eigenvalue), num(loc.dispersion), num(loc.L_expectation)});
  }
  return {kExitPass,
          emit_table(c, {"lambda", "top_eigenvalue", "dispersion", "L_expectation"}, rows, "localization")};
}

std::pair<int, std::string> cmd_madore_compare(const RunConfig& c) {
  std::vector<std::vector<std::string>> rows;
  for (int L = c.lambda_min; L <= c.lambda_max; ++L) {
    const Localization fuzzy = most_localized(params_for(c, SpaceKind::Sphere, L));
    const Localization madore = most_localized(make_params(L, std::nullopt, SpaceKind::Madore));
    rows.push_back({std::to_string(L), num(fuzzy.top_eigenvalue), num(madore.top_eigenvalue),
                    num(fuzzy.L_expectation), num(madore.L_expectation), num(fuzzy.dispersion),
                    num(madore.dispersion)});
  }
  const std::vector<std::string> cols = {"lambda",    "top_eig_fuzzy", "top_eig_madore",   "L3_fuzzy",
                                         "L3_madore", "dispersion_fuzzy", "dispersion_madore"};
  if (format_of(c) == Format::Json && single_lambda(c)) {
    std::ostringstream os;
    os << "{\n";
    for (std::size_t i = 0; i < cols.size(); ++i)
      os << "  " << json_quote(cols[i]) << ": " << rows[0][i] << (i + 1 < cols.size() ? ",\n" : "\n");
    os << "}\n";
    return {kExitPass, os.str()};
  }
  return {kExitPass, emit_table(c, cols, rows, "comparison")};
}

std::pair<int, std::string> cmd_algebra_check(const RunConfig& c) {
  if (c.space == SpaceKind::Madore) throw UsageError("algebra-check: --space must be circle or sphere");
  std::vector<std::vector<std::string>> rows;
  bool ok = true;
  for (int L = c.lambda_min; L <= c.lambda_max; ++L) {
    const FuzzyParams p = params_for(c, c.space, L);
    std::map<std::string, double> res =
        c.space == SpaceKind::Circle ? circle_algebra_residuals(p) : sphere_algebra_residuals(p);
    for (const auto& [key, v] : res) {
      const bool structural = key.find("nilpotent") != std::string::npos;
      const bool pass = structural ? v == 0.0 : v <= kResidualTol;
      ok = ok && pass;
      rows.push_back({std::to_string(L), json_quote(key), num(v), pass ? "true" : "false"});
    }
    if (c.space == SpaceKind::Sphere) {
      bool pass = true;
      double K = std::nan("");
      try {
        K = fit_commutator_K(p);
      } catch (const AlgebraError&) {
        pass = false;
      }
      ok = ok && pass;
      rows.push_back({std::to_string(L), json_quote("K_fit"), num(K), pass ? "true" : "false"});
    }
  }
  if (format_of(c) == Format::Csv)
    for (auto& r : rows) r[1] = r[1].substr(1, r[1].size() - 2);
  return {ok ? kExitPass : kExitFail, emit_table(c, {"lambda", "identity", "residual", "pass"}, rows, "residuals")};
}

}  // namespace

void validate(const RunConfig& c) {
  if (c.lambda_min < 1) throw UsageError("lambda must be >= 1");
  if (c.lambda_max < c.lambda_min) throw UsageError("empty lambda range");
  if (!(c.tol > 0.0)) throw UsageError("--tol must be positive");
  if (c.m && c.space != SpaceKind::Sphere) throw UsageError("--m is only valid with --space sphere");
  if (c.m && std::abs(*c.m) > c.lambda_min) throw UsageError("--m must satisfy |m| <= lambda");
  if (c.k && c.k_rule && c.k_rule->kind != KRule::Kind::Floor)
    throw UsageError("--k and --k-rule are mutually exclusive");
  if (c.k && c.space == SpaceKind::Madore) throw UsageError("--k has no meaning for the Madore sphere");
  if (c.k && !(*c.k >= k_floor(c.lambda_max)))
    throw UsageError("--k must be at least lambda^2 (lambda+1)^2 for every lambda in range");
  const bool single = c.command == Command::Spectrum || c.command == Command::Eigvec;
  if (single && !single_lambda(c)) throw UsageError("this command takes a single --lambda");
  if (c.command == Command::Verify) {
    if (c.all == c.theorem.has_value()) throw UsageError("verify needs exactly one of --theorem or --all");
    if (c.theorem) {
      const auto& ids = theorem_ids();
      if (std::find(ids.begin(), ids.end(), *c.theorem) == ids.end())
        throw UsageError("unknown theorem id: " + *c.theorem);
    }
  }
  if (c.command == Command::Sweep && c.lambda_max < 2) throw UsageError("sweep needs --lambda-max >= 2");
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    validate(c);
    std::pair<int, std::string> result;
    switch (c.command) {
      case Command::Spectrum: result = cmd_spectrum(c); break;
      case Command::Eigvec: result = cmd_eigvec(c); break;
      case Command::Verify: result = cmd_verify(c); break;
      case Command::Sweep: result = cmd_sweep(c); break;
      case Command::Localize: result = cmd_localize(c); break;
      case Command::MadoreCompare: result = cmd_madore_compare(c); break;
      case Command::AlgebraCheck: result = cmd_algebra_check(c); break;
    }
    if (c.output)
      write_file_atomic(*c.output, result.second);
    else
      out << result.second << std::flush;
    return result.first;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra of coordinate operators on fuzzy circles and spheres", "fuzzy-spectra"};
  app.require_subcommand(1);

  struct Raw {
    std::string space = "circle";
    std::optional<int> lambda, lambda_min, lambda_max, m;
    std::optional<double> k;
    std::string k_rule = "default";
    double tol = 1e-14;
    int h = 1;
    std::optional<std::string> theorem, output;
    bool all = false;
    std::string format;
  } raw;

  const std::map<std::string, Command> commands = {
      {"spectrum", Command::Spectrum}, {"eigvec", Command::Eigvec},
      {"verify", Command::Verify},     {"sweep", Command::Sweep},
      {"localize", Command::Localize}, {"madore-compare", Command::MadoreCompare},
      {"algebra-check", Command::AlgebraCheck}};
  const std::map<std::string, std::string> help = {
      {"spectrum", "Eigenvalues of X^Lambda, B_m(Lambda), the full sphere x_3, or the Madore x_3"},
      {"eigvec", "Eigenvector number --index (descending order) by inverse iteration"},
      {"verify", "Run one theorem check (--theorem) or the whole suite (--all)"},
      {"sweep", "Top-eigenvalue monotonicity and bounds over a lambda range"},
      {"localize", "Most localized state: top eigenvalue, dispersion, angular momentum"},
      {"madore-compare", "Top eigenvalue and <L_3> of the fuzzy and Madore spheres"},
      {"algebra-check", "Residuals of the operator commutation relations"}};

  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, cmd] : commands) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    subs[name] = sub;
    sub->add_option("--space", raw.space, "circle | sphere | madore")
        ->check(CLI::IsMember({"circle", "sphere", "madore"}));
    sub->add_option("--lambda", raw.lambda, "Cutoff (single value)");
    sub->add_option("--lambda-min", raw.lambda_min, "First cutoff of a range");
    sub->add_option("--lambda-max", raw.lambda_max, "Last cutoff of a range");
    sub->add_option("--m", raw.m, "L_3 block (sphere only)");
    sub->add_option("--k", raw.k, "Explicit stiffness k");
    sub->add_option("--k-rule", raw.k_rule, "default | floor | theorem1c | theorem1c-proof | lambda6")
        ->check(CLI::IsMember({"default", "floor", "theorem1c", "theorem1c-proof", "lambda6"}));
    sub->add_option("--tol", raw.tol, "Bisection bracket width");
    sub->add_option("--format", raw.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", raw.output, "Write to this file (atomically) instead of stdout");
    if (name == "eigvec") sub->add_option("--index", raw.h, "1-based eigenvalue index, descending");
    if (name == "verify") {
      sub->add_option("--theorem", raw.theorem, "Check id")->check(CLI::IsMember(theorem_ids()));
      sub->add_flag("--all", raw.all, "Run every check");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  RunConfig c;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) c.command = commands.at(name);
  try {
    c.space = parse_space_kind(raw.space);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) c.space_given = sub->count("--space") > 0;
  if (raw.lambda && (raw.lambda_min || raw.lambda_max)) {
    err << "error: --lambda excludes --lambda-min/--lambda-max\n";
    return kExitUsage;
  }
  const bool ranged = c.command == Command::Verify || c.command == Command::Sweep;
  if (raw.lambda) {
    c.lambda_min = c.lambda_max = *raw.lambda;
  } else {
    c.lambda_min = raw.lambda_min.value_or(1);
    c.lambda_max = raw.lambda_max.value_or(ranged ? 200 : c.lambda_min);
  }
  c.m = raw.m;
  c.k = raw.k;
  if (raw.k_rule != "default") c.k_rule = KRule::parse(raw.k_rule);
  c.tol = raw.tol;
  c.h = raw.h;
  c.theorem = raw.theorem;
  c.all = raw.all;
  if (!raw.format.empty()) c.format = raw.format == "json" ? Format::Json : Format::Csv;
  c.output = raw.output;
  return run(c, out, err);
}

}  // namespace fuzzy::cli
