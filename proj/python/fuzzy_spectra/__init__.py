"""Spectra of the fuzzy circle and fuzzy sphere coordinate operators."""

from ._core import (
    ConvergenceError,
    algebra_residuals,
    density_metrics,
    eigen_all,
    eigen_top,
    eigenpair,
    k_floor,
    localize,
    matrix,
    run_cli,
    spectrum,
    sturm_count,
    theorem_ids,
    toeplitz_eigs,
    verify,
)

__all__ = [
    "ConvergenceError",
    "algebra_residuals",
    "density_metrics",
    "eigen_all",
    "eigen_top",
    "eigenpair",
    "k_floor",
    "localize",
    "matrix",
    "run_cli",
    "spectrum",
    "sturm_count",
    "theorem_ids",
    "toeplitz_eigs",
    "verify",
]
