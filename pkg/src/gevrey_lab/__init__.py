"""Spectral laboratory for ``u'' + A u + c A^alpha u' = 0``.

``A`` is given by its eigenvalues; every mode is solved in closed form and
all large or tiny magnitudes are carried in signed log form.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    CancellationError,
    CancellationWarning,
    DomainError,
    GevreyLabError,
    InsufficientData,
    NormalizationUndefined,
    NumericalGuard,
    QuadratureFailure,
    SpecError,
    SupportError,
    TruncationError,
)
from .logreal import LogReal
from .spectral import DampingConfig, DiagonalVector, ModalSolution, Spectrum

__all__ = [
    "CancellationError",
    "CancellationWarning",
    "DampingConfig",
    "DiagonalVector",
    "DomainError",
    "GevreyLabError",
    "InsufficientData",
    "LogReal",
    "ModalSolution",
    "NormalizationUndefined",
    "NumericalGuard",
    "QuadratureFailure",
    "SpecError",
    "Spectrum",
    "SupportError",
    "TruncationError",
    "__version__",
]
