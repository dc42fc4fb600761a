#include "fuzzy_spectra/suite.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include "fuzzy_spectra/circle.hpp"
#include "fuzzy_spectra/eigensolver.hpp"
#include "fuzzy_spectra/sphere.hpp"
#include "operator_util.hpp"

namespace fuzzy {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kParityTol = 1e-10;
constexpr double kAlgebraTol = 1e-10;
constexpr double kOracleTol = 1e-11;
constexpr double kClosedFormTol = 1e-12;
constexpr int kAllBlocksUpTo = 30;

using RowFn = std::function<ReportRow(int)>;

VerificationReport make_report(std::string id, int lo, int hi, std::string k_rule) {
  VerificationReport r;
  r.theorem = std::move(id);
  r.lambda_min = lo;
  r.lambda_max = hi;
  r.k_rule = std::move(k_rule);
  return r;
}

/// Rows for every lambda in [lo, hi], computed in parallel, stored in order.
void fill_rows(VerificationReport& r, const std::vector<int>& lambdas, const RowFn& row) {
  r.rows.resize(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t i) { r.rows[i] = row(lambdas[i]); });
}

std::vector<int> range(int lo, int hi) {
  std::vector<int> out;
  for (int L = lo; L <= hi; ++L) out.push_back(L);
  return out;
}

KRule rule_or(const SuiteOptions& o, KRule::Kind fallback) {
  return o.k_rule.value_or(KRule{fallback, 0.0});
}

FuzzyParams params(int L, const KRule& rule, SpaceKind kind) {
  return kind == SpaceKind::Madore ? make_params(L, std::nullopt, kind) : make_params(L, rule(L), kind);
}

bool wants(const SuiteOptions& o, SpaceKind kind) { return !o.space || *o.space == kind; }

/// Sphere blocks examined at cutoff L: the requested one, every m >= 0 for
/// small cutoffs (B_{-m} = B_m), otherwise m in {0, 1, 2}.
std::vector<int> sphere_blocks(const SuiteOptions& o, int L) {
  if (o.m) return std::abs(*o.m) <= L ? std::vector<int>{*o.m} : std::vector<int>{};
  std::vector<int> ms;
  const int top = L <= kAllBlocksUpTo ? L : std::min(L, 2);
  for (int m = 0; m <= top; ++m) ms.push_back(m);
  return ms;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double parity_error(const Spectrum& s) {
  double e = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) e = std::max(e, std::abs(s[i] + s[s.size() - 1 - i]));
  return e;
}

double frobenius(const SparseMatrix& m) { return m.norm(); }

// ---------------------------------------------------------------- checks

VerificationReport closed_form(const SuiteOptions&) {
  auto r = make_report("closed-form", 1, 2, "explicit");
  r.tolerances = {{"absolute", kClosedFormTol}};
  r.notes = {{"k", "lambda=1: 4, lambda=2: 36"}};
  const std::map<int, std::pair<double, std::vector<double>>> cases = {
      {1, {4.0, {std::sqrt(0.5), 0.0, -std::sqrt(0.5)}}},
      {2,
       {36.0,
        {0.5 * std::sqrt(3 + 2.0 / 36), 0.5 * std::sqrt(1 + 2.0 / 36), 0.0,
         -0.5 * std::sqrt(1 + 2.0 / 36), -0.5 * std::sqrt(3 + 2.0 / 36)}}}};
  for (const auto& [L, c] : cases) {
    const Spectrum s = eigen_all(build_x1(make_params(L, c.first, SpaceKind::Circle)), kSweepTol);
    const double err = max_abs_diff(s.values(), c.second);
    r.rows.push_back({L, {{"max_error", err}}, err <= kClosedFormTol});
  }
  return r;
}

VerificationReport toeplitz_oracle(const SuiteOptions& o) {
  std::vector<int> sizes = range(1, std::min(200, 2 * o.lambda_max + 1));
  if (2 * o.lambda_max + 1 > 200) sizes.push_back(2 * o.lambda_max + 1);
  auto r = make_report("toeplitz-oracle", o.lambda_min, o.lambda_max, "");
  r.index_name = "n";
  r.tolerances = {{"absolute", kOracleTol}};
  fill_rows(r, sizes, [](int n) {
    const Spectrum got = eigen_all(SymTridiag::toeplitz(n, 0.0, 0.5), kSweepTol);
    const double err = max_abs_diff(got.values(), toeplitz_eigs(n, 0.0, 0.5, 0.5).values());
    return ReportRow{n, {{"max_error", err}}, err <= kOracleTol};
  });
  return r;
}

VerificationReport parity(const SuiteOptions& o) {
  const KRule rule = rule_or(o, KRule::Kind::Floor);
  auto r = make_report("parity", o.lambda_min, o.lambda_max, rule.name());
  r.tolerances = {{"absolute", kParityTol}};
  if (o.m) r.notes.emplace_back("m", std::to_string(*o.m));
  fill_rows(r, range(o.lambda_min, o.lambda_max), [&](int L) {
    ReportRow row{L, {}, true};
    auto add = [&](const char* name, double e) {
      row.values.emplace_back(name, e);
      row.pass = row.pass && e <= kParityTol;
    };
    if (wants(o, SpaceKind::Circle) && !o.m)
      add("circle_error", parity_error(eigen_all(build_x1(params(L, rule, SpaceKind::Circle)), kSweepTol)));
    if (wants(o, SpaceKind::Sphere)) {
      const FuzzyParams p = params(L, rule, SpaceKind::Sphere);
      double e = 0.0;
      for (int m : sphere_blocks(o, L)) e = std::max(e, parity_error(eigen_all(build_Bm(p, m), kSweepTol)));
      add("sphere_error", e);
    }
    if (wants(o, SpaceKind::Madore) && !o.m) {
      const auto ops = build_madore_operators(params(L, rule, SpaceKind::Madore));
      const Eigen::VectorXd diag = ops.x[2].dense().diagonal().real();
      add("madore_error", parity_error(Spectrum(std::vector<double>(diag.begin(), diag.end()))));
    }
    return row;
  });
  return r;
}

VerificationReport simplicity(const SuiteOptions& o) {
  const KRule rule = rule_or(o, KRule::Kind::Floor);
  const double threshold = 10.0 * kSweepTol;
  auto r = make_report("simplicity", o.lambda_min, o.lambda_max, rule.name());
  r.tolerances = {{"min_gap_threshold", threshold}};
  fill_rows(r, range(o.lambda_min, o.lambda_max), [&](int L) {
    ReportRow row{L, {}, true};
    auto add = [&](const char* name, double gap) {
      row.values.emplace_back(name, gap);
      row.pass = row.pass && gap > threshold;
    };
    if (wants(o, SpaceKind::Circle) && !o.m)
      add("circle_min_gap", eigen_all(build_x1(params(L, rule, SpaceKind::Circle)), kSweepTol).min_gap());
    if (wants(o, SpaceKind::Sphere)) {
      const FuzzyParams p = params(L, rule, SpaceKind::Sphere);
      double gap = std::numeric_limits<double>::max();
      for (int m : sphere_blocks(o, L)) {
        const SymTridiag b = build_Bm(p, m);
        if (b.size() >= 2) gap = std::min(gap, eigen_all(b, kSweepTol).min_gap());
      }
      add("sphere_min_gap", gap);
    }
    return row;
  });
  return r;
}

VerificationReport perturbation(const SuiteOptions& o, SpaceKind kind) {
  const KRule rule = rule_or(o, KRule::Kind::Floor);
  auto r = make_report(kind == SpaceKind::Circle ? "perturbation-circle" : "perturbation-sphere",
                       o.lambda_min, o.lambda_max, rule.name());
  if (kind == SpaceKind::Sphere) r.notes.emplace_back("block", "m=0");
  r.notes.emplace_back("pass", "hw_bound_lhs < hw_bound_rhs; max_abs_dev is informational");
  fill_rows(r, range(o.lambda_min, o.lambda_max), [&](int L) {
    const DensityMetrics d = density_metrics(params(L, rule, kind), 0);
    return ReportRow{L,
                     {{"hw_bound_lhs", d.hw_bound_lhs},
                      {"hw_bound_rhs", d.hw_bound_rhs},
                      {"max_abs_dev", d.max_abs_dev}},
                     d.hw_bound_lhs < d.hw_bound_rhs};
  });
  return r;
}

VerificationReport density(const SuiteOptions& o) {
  const KRule rule = rule_or(o, KRule::Kind::Floor);
  std::vector<int> grid;
  for (int L : {50, 100, 200, 400, 800})
    if (L >= o.lambda_min && L <= o.lambda_max) grid.push_back(L);
  if (grid.empty()) grid.push_back(o.lambda_max);
  auto r = make_report("density", grid.front(), grid.back(), rule.name());
  r.tolerances = {{"target_at_400", 0.01}};
  r.notes = {{"sphere_block", "m=0"}, {"gap_cap", "2 sin(pi/(n+1)) + 3 sup_dev"}};

  std::vector<std::array<DensityMetrics, 2>> metrics(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    metrics[i][0] = density_metrics(params(grid[i], rule, SpaceKind::Circle));
    metrics[i][1] = density_metrics(params(grid[i], rule, SpaceKind::Sphere), 0);
  });
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ReportRow row{grid[i], {}, true};
    const char* names[2][3] = {{"circle_sup_dev", "circle_max_gap", "circle_gap_cap"},
                               {"sphere_sup_dev", "sphere_max_gap", "sphere_gap_cap"}};
    for (int s = 0; s < 2; ++s) {
      const DensityMetrics& d = metrics[i][s];
      const double cap = 2.0 * std::sin(kPi / (d.reference_size + 1)) + 3.0 * d.sup_dev;
      row.values.emplace_back(names[s][0], d.sup_dev);
      row.values.emplace_back(names[s][1], d.max_gap);
      row.values.emplace_back(names[s][2], cap);
      row.pass = row.pass && d.max_gap <= cap;
      if (i > 0)
        row.pass = row.pass && d.sup_dev <= metrics[i - 1][s].sup_dev && d.max_gap <= metrics[i - 1][s].max_gap;
      if (grid[i] >= 400) row.pass = row.pass && d.sup_dev < 0.01 && d.max_gap < 0.01;
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

VerificationReport interlacing(const SuiteOptions& o) {
  const KRule rule = rule_or(o, KRule::Kind::Floor);
  const int hi = std::min(o.lambda_max, 60);
  auto r = make_report("interlacing", o.lambda_min, hi, rule.name());
  fill_rows(r, range(o.lambda_min, hi), [&](int L) {
    ReportRow row{L, {}, interlacing_check(build_x1(params(L, rule, SpaceKind::Circle)))};
    const FuzzyParams p = params(L, rule, SpaceKind::Sphere);
    int checked = 1;
    for (int m = 0; m <= L; ++m) {
      const SymTridiag b = build_Bm(p, m);
      if (b.size() < 2) continue;
      row.pass = row.pass && interlacing_check(b);
      ++checked;
    }
    row.values.emplace_back("matrices_checked", checked);
    return row;
  });
  return r;
}

VerificationReport norm_chain_report(const SuiteOptions& o) {
  const KRule rule = rule_or(o, KRule::Kind::Floor);
  const int hi = std::min(o.lambda_max, 60);
  auto r = make_report("norm-chain", o.lambda_min, hi, rule.name());
  r.notes = {{"last_link", "n(Lambda;Lambda)=1 compares 1x1 zero blocks with <="}};
  fill_rows(r, range(o.lambda_min, hi), [&](int L) {
    ReportRow row{L, {}, true};
    double margin = std::numeric_limits<double>::max();
    for (const auto& link : norm_chain(params(L, rule, SpaceKind::Sphere))) {
      row.pass = row.pass && link.pass;
      margin = std::min(margin, link.previous_norm - link.submatrix_norm);
      if (link.submatrix_norm > 0.0) margin = std::min(margin, link.submatrix_norm - link.block_norm);
    }
    row.values.emplace_back("min_margin", margin);
    return row;
  });
  return r;
}

VerificationReport coefficient_inequality(const SuiteOptions& o) {
  const KRule rule = rule_or(o, KRule::Kind::Floor);
  auto r = make_report("coefficient-inequality", o.lambda_min, o.lambda_max, rule.name());
  fill_rows(r, range(o.lambda_min, o.lambda_max), [&](int L) {
    const bool ok = coefficient_inequality_check(params(L, rule, SpaceKind::Sphere));
    return ReportRow{L, {{"holds", ok ? 1.0 : 0.0}}, ok};
  });
  return r;
}

bool structural(const std::string& key) { return key.find("nilpotent") != std::string::npos; }

ReportRow residual_row(int L, const std::map<std::string, double>& res) {
  ReportRow row{L, {}, true};
  for (const auto& [key, v] : res) {
    row.values.emplace_back(key, v);
    row.pass = row.pass && (structural(key) ? v == 0.0 : v <= kAlgebraTol);
  }
  return row;
}

VerificationReport algebra_circle(const SuiteOptions& o) {
  const KRule rule = rule_or(o, KRule::Kind::Floor);
  const int hi = std::min(o.lambda_max, 12);
  auto r = make_report("algebra-circle", o.lambda_min, hi, rule.name());
  r.tolerances = {{"residual", kAlgebraTol}, {"nilpotent", 0.0}};
  fill_rows(r, range(o.lambda_min, hi),
            [&](int L) { return residual_row(L, circle_algebra_residuals(params(L, rule, SpaceKind::Circle))); });
  return r;
}

VerificationReport algebra_sphere(const SuiteOptions& o) {
  const KRule rule = rule_or(o, KRule::Kind::Floor);
  const int hi = std::min(o.lambda_max, 8);
  auto r = make_report("algebra-sphere", o.lambda_min, hi, rule.name());
  r.tolerances = {{"residual", kAlgebraTol}, {"nilpotent", 0.0}};
  r.notes = {{"K_closed_form", "(1 + (Lambda+1)^2/k) / (2 Lambda + 1)"}};
  fill_rows(r, range(o.lambda_min, hi), [&](int L) {
    const FuzzyParams p = params(L, rule, SpaceKind::Sphere);
    ReportRow row = residual_row(L, sphere_algebra_residuals(p));
    const double closed = (1.0 + (L + 1.0) * (L + 1.0) / p.k()) / (2.0 * L + 1.0);
    double fit = std::numeric_limits<double>::quiet_NaN();
    double spread = 0.0;
    try {
      fit = fit_commutator_K(p, {1, 2});
      for (CoordinatePair pair : {CoordinatePair{2, 3}, CoordinatePair{3, 1}})
        spread = std::max(spread, std::abs(fit_commutator_K(p, pair) - fit));
    } catch (const AlgebraError&) {
      row.pass = false;
    }
    row.values.emplace_back("K_fit", fit);
    row.values.emplace_back("K_closed_form", closed);
    row.values.emplace_back("K_pair_spread", spread);
    row.pass = row.pass && std::abs(fit - closed) <= kAlgebraTol && spread <= kAlgebraTol;
    return row;
  });
  return r;
}

VerificationReport block_union(const SuiteOptions& o) {
  const KRule rule = rule_or(o, KRule::Kind::Floor);
  const int hi = std::min(o.lambda_max, 8);
  auto r = make_report("block-union", o.lambda_min, hi, rule.name());
  r.tolerances = {{"absolute", kParityTol}};
  fill_rows(r, range(o.lambda_min, hi), [&](int L) {
    const FuzzyParams p = params(L, rule, SpaceKind::Sphere);
    const Eigen::SelfAdjointEigenSolver<DenseMatrix> es(build_sphere_operators(p).x0.dense(),
                                                        Eigen::EigenvaluesOnly);
    std::vector<double> dense(es.eigenvalues().begin(), es.eigenvalues().end());
    std::vector<double> blocks;
    const BlockFamily family = build_block_family(p);
    for (const auto& [m, b] : family.blocks) {
      const Spectrum s = eigen_all(b, kSweepTol);
      blocks.insert(blocks.end(), s.values().begin(), s.values().end());
    }
    std::sort(dense.begin(), dense.end());
    std::sort(blocks.begin(), blocks.end());
    const double err = max_abs_diff(dense, blocks);
    return ReportRow{L, {{"max_error", err}}, err <= kParityTol};
  });
  return r;
}

VerificationReport localization(const SuiteOptions& o) {
  const KRule rule = rule_or(o, KRule::Kind::Floor);
  const int lo = std::max(o.lambda_min, 2);
  auto r = make_report("localization", lo, o.lambda_max, rule.name());
  r.notes = {{"circle_cap", "(pi^2/4)/Lambda^2"}, {"sphere_cap", "(pi^2-1)/Lambda^2"}};
  fill_rows(r, range(lo, o.lambda_max), [&](int L) {
    const Localization c = most_localized(params(L, rule, SpaceKind::Circle));
    const Localization s = most_localized(params(L, rule, SpaceKind::Sphere));
    const Localization f = most_localized(params(L, rule, SpaceKind::Madore));
    const double L2 = double(L) * L;
    const double c_cap = kPi * kPi / 4.0 / L2;
    const double s_cap = (kPi * kPi - 1.0) / L2;
    ReportRow row{L,
                  {{"circle_dispersion", c.dispersion},
                   {"circle_cap", c_cap},
                   {"sphere_dispersion", s.dispersion},
                   {"sphere_cap", s_cap},
                   {"sphere_L3", s.L_expectation},
                   {"madore_dispersion", f.dispersion},
                   {"madore_L3", f.L_expectation}},
                  false};
    row.pass = c.dispersion >= -1e-12 && c.dispersion < c_cap && s.dispersion >= -1e-12 &&
               s.dispersion < s_cap && s.L_expectation == 0.0 && f.L_expectation == double(L);
    return row;
  });
  return r;
}

VerificationReport madore(const SuiteOptions& o) {
  auto r = make_report("madore", o.lambda_min, o.lambda_max, "");
  r.tolerances = {{"parity", kParityTol}, {"residual", kAlgebraTol}};
  r.notes = {{"residual_norm", "Frobenius"}};
  fill_rows(r, range(o.lambda_min, o.lambda_max), [&](int L) {
    const Spectrum s = madore_spectrum(L);
    const auto ops = build_madore_operators(make_params(L, std::nullopt, SpaceKind::Madore));
    const double scale = 1.0 / std::sqrt(double(L) * L + L);
    const cplx i_scale(0.0, scale);
    const auto& x = ops.x;
    double residual = 0.0;
    for (int a = 0; a < 3; ++a) {
      const int b = (a + 1) % 3, c = (a + 2) % 3;
      const SparseMatrix lhs = detail::commutator(x[a].entries(), x[b].entries());
      residual = std::max(residual, frobenius(SparseMatrix(lhs - i_scale * x[c].entries())));
    }
    SparseMatrix sq = x[0].entries() * x[0].entries();
    sq += SparseMatrix(x[1].entries() * x[1].entries());
    sq += SparseMatrix(x[2].entries() * x[2].entries());
    residual = std::max(residual, frobenius(SparseMatrix(sq - detail::identity(x[0].dim()))));

    const double top = s.top();
    const bool increasing = L == 1 || top > madore_spectrum(L - 1).top();
    const double expected_top = std::sqrt(double(L) / (L + 1));
    ReportRow row{L, {{"top_eigenvalue", top}, {"parity_error", parity_error(s)}, {"algebra_residual", residual}},
                  false};
    row.pass = parity_error(s) <= kParityTol && top < 1.0 && increasing &&
               std::abs(top - expected_top) <= kClosedFormTol && residual <= kAlgebraTol && s.is_simple(0.0);
    return row;
  });
  return r;
}

using Runner = std::function<VerificationReport(const SuiteOptions&)>;

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> table = {
      {"closed-form", closed_form},
      {"toeplitz-oracle", toeplitz_oracle},
      {"parity", parity},
      {"simplicity", simplicity},
      {"monotonicity-circle",
       [](const SuiteOptions& o) {
         return top_eig_monotonicity_circle(std::min(o.lambda_max, 500), rule_or(o, KRule::Kind::CircleGrowth),
                                            o.lambda_min);
       }},
      {"monotonicity-circle-proof",
       [](const SuiteOptions& o) {
         auto r = top_eig_monotonicity_circle(std::min(o.lambda_max, 500),
                                              rule_or(o, KRule::Kind::CircleGrowthAlt), o.lambda_min);
         r.theorem = "monotonicity-circle-proof";
         return r;
       }},
      {"bounds-circle",
       [](const SuiteOptions& o) {
         return top_eig_monotonicity_circle(o.lambda_max, rule_or(o, KRule::Kind::Floor), o.lambda_min, false);
       }},
      {"monotonicity-sphere",
       [](const SuiteOptions& o) {
         return top_eig_monotonicity_sphere(std::min(o.lambda_max, 500), rule_or(o, KRule::Kind::Lambda6),
                                            o.lambda_min);
       }},
      {"bounds-sphere",
       [](const SuiteOptions& o) {
         return top_eig_monotonicity_sphere(o.lambda_max, rule_or(o, KRule::Kind::Floor), o.lambda_min, false,
                                            false);
       }},
      {"perturbation-circle", [](const SuiteOptions& o) { return perturbation(o, SpaceKind::Circle); }},
      {"perturbation-sphere", [](const SuiteOptions& o) { return perturbation(o, SpaceKind::Sphere); }},
      {"density", density},
      {"interlacing", interlacing},
      {"norm-chain", norm_chain_report},
      {"coefficient-inequality", coefficient_inequality},
      {"algebra-circle", algebra_circle},
      {"algebra-sphere", algebra_sphere},
      {"block-union", block_union},
      {"localization", localization},
      {"madore", madore},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& [id, fn] : registry()) out.push_back(id);
    return out;
  }();
  return ids;
}

VerificationReport run_theorem(const std::string& id, const SuiteOptions& options) {
  if (options.lambda_min < 1 || options.lambda_max < options.lambda_min)
    throw std::invalid_argument("verify: lambda range must satisfy 1 <= min <= max");
  for (const auto& [name, fn] : registry())
    if (name == id) return fn(options);
  throw std::invalid_argument("unknown theorem id: " + id);
}

std::vector<VerificationReport> run_all(const SuiteOptions& options) {
  std::vector<VerificationReport> out;
  for (const auto& id : theorem_ids()) out.push_back(run_theorem(id, options));
  return out;
}

}  // namespace fuzzy
