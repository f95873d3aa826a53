"""Gevrey-order estimation from power-norm curves.

A vector ``u`` is Gevrey of order ``s`` for ``A`` when ``|A^k u| <= R^k k^{s k}``.
Taking logs and dividing by ``k`` gives the linear relation

    y_k = log|A^k u| / k  =  s log k + log R,

so the order is a regression slope.  Finite windows see lower-order terms
as well: a polynomial prefactor ``C k^p`` contributes ``(p log k + log C)/k``
to ``y_k``.  The default ``"prefactor"`` model fits those two terms
alongside ``s`` and ``log R``; ``"plain"`` fits only the two-parameter line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InsufficientData, TruncationError
from .spectral import DampingConfig, DiagonalVector, Spectrum, log_power_norms, slow_decay

DEFAULT_WINDOW = (20, 200)
TAIL_MARGIN = 4.0
TREND_THRESHOLD = 1e-3
FIT_MODELS = ("prefactor", "plain")


@dataclass(frozen=True, eq=False)
class PowerNormCurve:
    """Samples ``(k, log|A^k u(t)|)``; ``k`` strictly increasing."""

    t: float
    ks: np.ndarray
    log_norms: np.ndarray

    def __post_init__(self):
        ks = np.asarray(self.ks, dtype=float)
        lm = np.asarray(self.log_norms, dtype=float)
        if ks.shape != lm.shape or ks.ndim != 1:
            raise ValueError("ks and log_norms must be 1-D arrays of equal length")
        if ks.size > 1 and np.any(np.diff(ks) <= 0):
            raise ValueError("k must be strictly increasing")
        if not np.all(np.isfinite(lm)):
            raise ValueError("log norms must be finite (zero vector?)")
        object.__setattr__(self, "ks", ks)
        object.__setattr__(self, "log_norms", lm)

    def window(self, kmin: float, kmax: float) -> PowerNormCurve:
        m = (self.ks >= kmin) & (self.ks <= kmax)
        return PowerNormCurve(self.t, self.ks[m], self.log_norms[m])

    def __len__(self):
        return int(self.ks.size)


@dataclass(frozen=True)
class GevreyFit:
    sigma_hat: float
    log_r_hat: float
    residual: float
    window: tuple[float, float]
    model: str = "prefactor"
    prefactor_power: float = 0.0
    prefactor_log: float = 0.0
    samples: int = 0

    def as_dict(self) -> dict:
        return {
            "sigmaHat": self.sigma_hat,
            "logRHat": self.log_r_hat,
            "residual": self.residual,
            "window": list(self.window),
            "model": self.model,
            "prefactorPower": self.prefactor_power,
            "prefactorLog": self.prefactor_log,
            "samples": self.samples,
        }


# ---------------------------------------------------------------------------
# Tail adequacy
# ---------------------------------------------------------------------------

def peak_eigenvalue(k: float, t: float, damping: DampingConfig) -> float:
    """Eigenvalue maximizing ``lam^k exp(-gamma lam^beta t)``, the dominant
    term of ``|A^k u(t)|`` for slowly decaying data."""
    if t <= 0:
        raise ValueError("the tail rule needs t > 0")
    gamma, beta = slow_decay(damping)
    return (k / (beta * gamma * t)) ** (1.0 / beta)


def required_modes(spectrum_kind_delta_eps: tuple[float, float], k_max: float, t: float,
                   damping: DampingConfig, margin: float = TAIL_MARGIN) -> int:
    """Smallest ``N`` with ``delta N^eps >= margin * lam_peak(k_max)``."""
    delta, eps = spectrum_kind_delta_eps
    target = margin * peak_eigenvalue(k_max, t, damping)
    n = max(1, int(math.ceil((target / delta) ** (1.0 / eps))))
    while delta * float(n) ** eps < target:
        n += 1
    while n > 1 and delta * float(n - 1) ** eps >= target:
        n -= 1
    return n


def modes_for(spectrum: Spectrum, k_max: float, t: float, damping: DampingConfig,
              margin: float = TAIL_MARGIN) -> int:
    if spectrum.delta is None or spectrum.epsilon is None:
        raise ValueError("spectrum has no power-law description")
    return required_modes((spectrum.delta, spectrum.epsilon), k_max, t, damping, margin)


def check_tail(spectrum: Spectrum, damping: DampingConfig, k_max: float, t: float,
               margin: float = TAIL_MARGIN) -> None:
    need = margin * peak_eigenvalue(k_max, t, damping)
    top = float(spectrum.eigenvalues[-1])
    if top < need * (1.0 - 1e-12):
        raise TruncationError(
            f"lam_N = {top:.4g} < {margin:g} * lam_peak(k={k_max:g}, t={t:g}) = {need:.4g}; "
            "add modes or lower the power window")


def power_norm_curve(v: DiagonalVector, ks: Sequence[float], t: float = math.nan,
                     damping: Optional[DampingConfig] = None) -> PowerNormCurve:
    """Sample ``log|A^k v|``.  With ``damping`` and ``t > 0`` the tail rule is enforced."""
    ks = np.asarray(ks, dtype=float)
    if damping is not None and t > 0:
        check_tail(v.spectrum, damping, float(ks.max()), t)
    return PowerNormCurve(t, ks, log_power_norms(v, ks))


def power_grid_curve(v: DiagonalVector, alpha: float, js: Sequence[float], t: float = math.nan,
                     damping: Optional[DampingConfig] = None) -> PowerNormCurve:
    """Curve of ``log|(A^alpha)^j v|`` indexed by ``j``."""
    js = np.asarray(js, dtype=float)
    if damping is not None and t > 0:
        check_tail(v.spectrum, damping, alpha * float(js.max()), t)
    return PowerNormCurve(t, js, log_power_norms(v, alpha * js))


# ---------------------------------------------------------------------------
# Fitting
# ---------------------------------------------------------------------------

def _design(ks: np.ndarray, model: str) -> np.ndarray:
    x = np.log(ks)
    cols = [x, np.ones_like(ks)]
    if model == "prefactor":
        cols += [x / ks, 1.0 / ks]
    return np.column_stack(cols)


def fit_gevrey_order(curve: PowerNormCurve, window: tuple[float, float] = DEFAULT_WINDOW,
                     model: str = "prefactor") -> GevreyFit:
    """Least-squares fit of ``y_k = log|A^k u| / k`` against ``log k``.

    The slope is the order estimate, the intercept the log-radius.  The
    residual is the largest absolute deviation of ``y_k`` from the fitted
    model over the window.
    """
    if model not in FIT_MODELS:
        raise ValueError(f"model must be one of {FIT_MODELS}")
    sub = curve.window(*window)
    if len(sub) < 5:
        raise InsufficientData(f"window {window} holds {len(sub)} samples, need at least 5")
    ks = sub.ks
    y = sub.log_norms / ks
    X = _design(ks, model)
    scale = np.abs(X).max(axis=0)
    coef, *_ = np.linalg.lstsq(X / scale, y, rcond=None)
    coef = coef / scale
    resid = float(np.max(np.abs(y - X @ coef)))
    extra = (float(coef[2]), float(coef[3])) if model == "prefactor" else (0.0, 0.0)
    return GevreyFit(float(coef[0]), float(coef[1]), resid, (float(window[0]), float(window[1])),
                     model, extra[0], extra[1], int(ks.size))


def growth_exponent(ks, log_values) -> float:
    """Coefficient of ``k log k`` in ``log V(k) ~ a k log k + b k + c log k + d``."""
    ks = np.asarray(ks, dtype=float)
    curve = PowerNormCurve(math.nan, ks, np.asarray(log_values, dtype=float))
    return fit_gevrey_order(curve, (ks.min(), ks.max()), "prefactor").sigma_hat


@dataclass(frozen=True)
class Membership:
    is_consistent: bool
    log_r_required: float
    trend: float

    def as_dict(self) -> dict:
        return {"consistent": self.is_consistent, "logRRequired": self.log_r_required, "trend": self.trend}


def check_membership(curve: PowerNormCurve, sigma: float,
                     trend_threshold: float = TREND_THRESHOLD) -> Membership:
    """Test a sampled curve against ``|A^k u| <= R^k k^{sigma k}``.

    ``r_k = (log|A^k u| - sigma k log k) / k`` must stay bounded; the
    numerical verdict is "no upward trend over the last third of the
    samples" (least-squares slope per unit ``k`` below ``trend_threshold``).
    ``log_r_required`` is ``max_k r_k``.
    """
    if len(curve) == 0:
        raise InsufficientData("empty curve")
    ks = curve.ks
    r = (curve.log_norms - sigma * ks * np.log(ks)) / ks
    lo = ks[0] + (ks[-1] - ks[0]) * 2.0 / 3.0
    tail = ks >= lo
    if tail.sum() >= 2:
        trend = float(np.polyfit(ks[tail], r[tail], 1)[0])
    else:
        trend = 0.0
    return Membership(bool(trend < trend_threshold), float(r.max()), trend)


def rescale_order_under_power(fit: GevreyFit, alpha: float) -> GevreyFit:
    """Order of the same vector viewed through ``A^alpha``: ``G(A, s) = G(A^alpha, alpha s)``.

    Only the order is transformed.  The radius is kept as fitted; refit the
    ``A^alpha`` curve (:func:`power_grid_curve`) to obtain it.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    return GevreyFit(alpha * fit.sigma_hat, fit.log_r_hat, fit.residual, fit.window, fit.model,
                     fit.prefactor_power, fit.prefactor_log, fit.samples)


def interpolation_inequality_check(v: DiagonalVector, theta: float, tol: float = 1e-12) -> bool:
    """``|A^theta v| <= |A v|^theta |v|^{1-theta}``, compared in log space."""
    if not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    l0, lt, l1 = log_power_norms(v, [0.0, theta, 1.0])
    if l0 == -math.inf:
        return True
    rhs = theta * l1 + (1.0 - theta) * l0
    return bool(lt <= rhs + tol * max(1.0, abs(rhs)))


def elliptic_order_map(sigma: float, operator_order: int = 2) -> float:
    """Spatial Gevrey exponent ``sigma / (2m)`` for an elliptic operator of order ``2m``."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if operator_order <= 0 or operator_order % 2:
        raise ValueError("operator order must be a positive even integer")
    return sigma / operator_order
