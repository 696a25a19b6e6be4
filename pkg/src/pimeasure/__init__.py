"""Exact linear forms in 1 and pi, their arithmetic, and irrationality-measure bounds."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .construction import IntegrandParams, laurent_coeffs
from .linforms import LinearForm, delta_empirical, linear_form, scaled_form, verify_lemma

__all__ = [
    "BACKEND",
    "IntegrandParams",
    "LinearForm",
    "delta_empirical",
    "laurent_coeffs",
    "linear_form",
    "scaled_form",
    "verify_lemma",
    "__version__",
]
