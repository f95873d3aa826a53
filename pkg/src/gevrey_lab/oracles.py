"""Independent reference computations used to check the closed forms."""

from __future__ import annotations

import math

import numpy as np

from . import kernels

RK4_STEP = 1e-4
#: Largest allowed h * (spectral radius of the 2x2 modal matrix).
RK4_STABILITY = 0.25


def rk4_steps(lam: np.ndarray, b: np.ndarray, t: float, h: float = RK4_STEP) -> np.ndarray:
    """Step counts per mode: nominal step ``h``, shortened for stiff modes."""
    lam = np.asarray(lam, dtype=float)
    b = np.asarray(b, dtype=float)
    disc = 0.25 * b * b - lam
    radius = np.where(disc > 0, 0.5 * b + np.sqrt(np.maximum(disc, 0.0)), np.sqrt(lam))
    h_eff = np.minimum(h, RK4_STABILITY / radius)
    return np.maximum(1, np.ceil(t / h_eff - 1e-9)).astype(np.int64)


def rk4_modes(lam, b, u0, u1, t: float, h: float = RK4_STEP):
    """Integrate every ``w'' + b w' + lam w = 0`` with classical RK4 up to ``t``."""
    lam, b, u0, u1 = (np.ascontiguousarray(np.atleast_1d(x), dtype=float) for x in (lam, b, u0, u1))
    w = np.empty_like(lam)
    wp = np.empty_like(lam)
    if t == 0:
        return u0.copy(), u1.copy()
    steps = rk4_steps(lam, b, t, h)
    for s in np.unique(steps):
        idx = np.flatnonzero(steps == s)
        w[idx], wp[idx] = kernels.rk4_modes(lam[idx], b[idx], u0[idx], u1[idx], float(t), int(s))
    return w, wp


def modal_energy_error(lam, w, wp, w_ref, wp_ref) -> np.ndarray:
    """Per-mode relative error in the modal energy norm ``(lam w^2 + w'^2)^{1/2}``."""
    lam = np.asarray(lam, dtype=float)
    num = np.sqrt(lam * (w - w_ref) ** 2 + (wp - wp_ref) ** 2)
    den = np.sqrt(lam * w_ref ** 2 + wp_ref ** 2)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(den > 0, num / den, np.where(num > 0, math.inf, 0.0))
