#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fuzzy_spectra/analysis.hpp"
#include "fuzzy_spectra/circle.hpp"
#include "fuzzy_spectra/cli.hpp"
#include "fuzzy_spectra/eigensolver.hpp"
#include "fuzzy_spectra/sphere.hpp"
#include "fuzzy_spectra/suite.hpp"

namespace py = pybind11;
using namespace fuzzy;

namespace {

FuzzyParams params(const std::string& space, int lambda, std::optional<double> k) {
  return make_params(lambda, k, parse_space_kind(space));
}

// Operator whose spectrum the space exposes: X^Lambda or one block B_m.
SymTridiag tridiagonal(const std::string& space, int lambda, std::optional<double> k, std::optional<int> m) {
  const FuzzyParams p = params(space, lambda, k);
  if (p.kind() == SpaceKind::Circle) {
    if (m) throw std::invalid_argument("m applies to the sphere only");
    return build_x1(p);
  }
  if (p.kind() == SpaceKind::Sphere) return build_Bm(p, m.value_or(0));
  throw std::invalid_argument("the Madore sphere has no tridiagonal form");
}

SymTridiag from_arrays(const std::vector<double>& diag, const std::vector<double>& offdiag) {
  return SymTridiag(diag, offdiag);
}

std::vector<double> spectrum(const std::string& space, int lambda, std::optional<double> k, std::optional<int> m,
                             double tol) {
  const SpaceKind kind = parse_space_kind(space);
  if (kind == SpaceKind::Madore) {
    if (k || m) throw std::invalid_argument("the Madore sphere takes neither k nor m");
    return madore_spectrum(lambda).values();
  }
  if (kind == SpaceKind::Sphere && !m) {
    std::vector<double> all;
    const BlockFamily family = build_block_family(params(space, lambda, k));
    for (const auto& [index, block] : family.blocks) {
      const Spectrum s = eigen_all(block, tol);
      all.insert(all.end(), s.values().begin(), s.values().end());
    }
    return Spectrum(std::move(all)).values();
  }
  return eigen_all(tridiagonal(space, lambda, k, m), tol).values();
}

py::dict eigenpair(const std::string& space, int lambda, int index, std::optional<double> k, std::optional<int> m,
                   double tol) {
  const SymTridiag t = tridiagonal(space, lambda, k, m);
  const Spectrum s = eigen_all(t, tol);
  if (index < 1 || index > static_cast<int>(s.size())) throw py::index_error("index out of range");
  const Eigenpair pair = eigenvector_of(t, s[index - 1]);
  py::dict d;
  d["eigenvalue"] = s[index - 1];
  d["vector"] = Eigen::VectorXd(pair.vector.coefficients.real());
  d["residual"] = pair.residual;
  return d;
}

py::dict to_dict(const VerificationReport& r) {
  py::list rows;
  for (const auto& row : r.rows) {
    py::dict d;
    d[py::str(r.index_name)] = row.lambda;
    for (const auto& [name, v] : row.values) d[py::str(name)] = v;
    d["pass"] = row.pass;
    rows.append(d);
  }
  py::dict tolerances, notes;
  for (const auto& [name, v] : r.tolerances) tolerances[py::str(name)] = v;
  for (const auto& [name, v] : r.notes) notes[py::str(name)] = v;
  py::dict d;
  d["theorem"] = r.theorem;
  d["index"] = r.index_name;
  d["lambda_min"] = r.lambda_min;
  d["lambda_max"] = r.lambda_max;
  d["k_rule"] = r.k_rule;
  d["passed"] = r.passed();
  d["tolerances"] = tolerances;
  d["notes"] = notes;
  d["rows"] = rows;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Spectra of fuzzy circle and fuzzy sphere coordinate operators";

  py::register_exception<ConvergenceError>(mod, "ConvergenceError", PyExc_RuntimeError);

  mod.def("k_floor", &k_floor, py::arg("lambda_"), "Smallest admissible stiffness lambda^2 (lambda+1)^2.");

  mod.def(
      "matrix",
      [](const std::string& space, int lambda, std::optional<double> k, std::optional<int> m) {
        return tridiagonal(space, lambda, k, m).dense();
      },
      py::arg("space"), py::arg("lambda_"), py::arg("k") = py::none(), py::arg("m") = py::none(),
      "Dense X^Lambda (circle) or block B_m (sphere).");

  mod.def("spectrum", &spectrum, py::arg("space"), py::arg("lambda_"), py::arg("k") = py::none(),
          py::arg("m") = py::none(), py::arg("tol") = 1e-14,
          "Eigenvalues in descending order. A sphere without m gives the union of all blocks.");

  mod.def("eigenpair", &eigenpair, py::arg("space"), py::arg("lambda_"), py::arg("index") = 1,
          py::arg("k") = py::none(), py::arg("m") = py::none(), py::arg("tol") = 1e-14,
          "Eigenvalue number `index` (1 = largest) with its unit eigenvector.");

  mod.def(
      "eigen_all", [](const std::vector<double>& d, const std::vector<double>& e, double tol) {
        return eigen_all(from_arrays(d, e), tol).values();
      },
      py::arg("diag"), py::arg("offdiag"), py::arg("tol") = 1e-14,
      "All eigenvalues of a symmetric tridiagonal matrix, descending.");
  mod.def(
      "eigen_top", [](const std::vector<double>& d, const std::vector<double>& e, double tol) {
        return eigen_top(from_arrays(d, e), tol);
      },
      py::arg("diag"), py::arg("offdiag"), py::arg("tol") = 1e-14);
  mod.def(
      "sturm_count", [](const std::vector<double>& d, const std::vector<double>& e, double x) {
        return sturm_count(from_arrays(d, e), x);
      },
      py::arg("diag"), py::arg("offdiag"), py::arg("x"), "Number of eigenvalues strictly below x.");
  mod.def(
      "toeplitz_eigs", [](int n, double a, double b, double c) { return toeplitz_eigs(n, a, b, c).values(); },
      py::arg("n"), py::arg("a"), py::arg("b"), py::arg("c"));

  mod.def(
      "density_metrics",
      [](const std::string& space, int lambda, std::optional<double> k, int m) {
        const DensityMetrics d = density_metrics(params(space, lambda, k), m);
        py::dict out;
        out["sup_dev"] = d.sup_dev;
        out["max_gap"] = d.max_gap;
        out["hw_bound_lhs"] = d.hw_bound_lhs;
        out["hw_bound_rhs"] = d.hw_bound_rhs;
        out["max_abs_dev"] = d.max_abs_dev;
        out["reference_size"] = d.reference_size;
        return out;
      },
      py::arg("space"), py::arg("lambda_"), py::arg("k") = py::none(), py::arg("m") = 0);

  mod.def(
      "localize",
      [](const std::string& space, int lambda, std::optional<double> k) {
        const Localization loc = most_localized(params(space, lambda, k));
        py::dict out;
        out["state"] = Eigen::VectorXd(loc.state.coefficients.real());
        out["top_eigenvalue"] = loc.top_eigenvalue;
        out["dispersion"] = loc.dispersion;
        out["L_expectation"] = loc.L_expectation;
        return out;
      },
      py::arg("space"), py::arg("lambda_"), py::arg("k") = py::none(),
      "Most localized state: top eigenvector of x_1 (circle) or x_3 (sphere, madore).");

  mod.def(
      "algebra_residuals",
      [](const std::string& space, int lambda, std::optional<double> k) {
        const FuzzyParams p = params(space, lambda, k);
        return p.kind() == SpaceKind::Circle ? circle_algebra_residuals(p) : sphere_algebra_residuals(p);
      },
      py::arg("space"), py::arg("lambda_"), py::arg("k") = py::none());

  mod.def("theorem_ids", &theorem_ids);
  mod.def(
      "verify",
      [](const std::string& theorem, int lambda_min, int lambda_max, std::optional<int> m,
         std::optional<std::string> k_rule) {
        SuiteOptions o;
        o.lambda_min = lambda_min;
        o.lambda_max = lambda_max;
        o.m = m;
        if (k_rule) o.k_rule = KRule::parse(*k_rule);
        VerificationReport r;
        {
          py::gil_scoped_release release;
          r = run_theorem(theorem, o);
        }
        return to_dict(r);
      },
      py::arg("theorem"), py::arg("lambda_min") = 1, py::arg("lambda_max") = 200, py::arg("m") = py::none(),
      py::arg("k_rule") = py::none(), "Runs one registered check and returns its report as a dict.");

  mod.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"fuzzy-spectra"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
