"""One-dimensional wave equation with Dirichlet conditions on ``(0, L)``.

Eigenpairs are ``lam_n = (n pi / L)^2`` and ``phi_n = sqrt(2/L) sin(n pi x / L)``.
Positions are handled as rational fractions of ``L`` so that the phase
``n pi x / L`` is reduced modulo ``2 pi`` exactly; at mode numbers in the
millions a floating-point phase would otherwise carry ~1e-10 relative noise
and swamp genuinely small derivative values.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import CancellationError, CancellationWarning, SupportError
from .gevrey import GevreyFit, PowerNormCurve, check_tail, fit_gevrey_order
from .logreal import LOG_CANCELLATION_RATIO, LogReal
from .spectral import DampingConfig, DiagonalVector, Spectrum

GRID_POINTS = 257
P_CHUNK = 8
#: Largest denominator used when snapping a float position to a fraction of L.
MAX_DENOMINATOR = 1 << 30


def as_fraction(x, length: float) -> Fraction:
    """``x / L`` as a fraction; ``Fraction`` inputs are taken as already relative."""
    if isinstance(x, Fraction):
        return x
    return Fraction(float(x) / length).limit_denominator(MAX_DENOMINATOR)


@dataclass(frozen=True)
class WaveDomain:
    """``Omega = (0, length)`` with a compact observation window ``[a, b]``.

    The window is stored as fractions of ``length`` (default ``[1/5, 4/5]``).
    """

    length: float = math.pi
    a: Fraction = Fraction(1, 5)
    b: Fraction = Fraction(4, 5)

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError("length must be positive")
        a, b = Fraction(self.a), Fraction(self.b)
        if not 0 < a < b < 1:
            raise ValueError("window must satisfy 0 < a < b < L")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def with_window(cls, length: float, a: float, b: float) -> WaveDomain:
        return cls(length, as_fraction(a, length), as_fraction(b, length))

    @property
    def window(self) -> tuple[float, float]:
        return float(self.a) * self.length, float(self.b) * self.length

    def spectrum(self, count: int) -> Spectrum:
        return Spectrum.dirichlet_1d(self.length, count)

    def grid(self, points: int = GRID_POINTS) -> list[Fraction]:
        """Uniform grid on ``[a, b]`` as exact fractions of ``L``."""
        if points < 2:
            raise ValueError("grid needs at least two points")
        step = (self.b - self.a) / (points - 1)
        return [self.a + j * step for j in range(points)]

    def check(self, spectrum: Spectrum) -> None:
        if spectrum.kind != "dirichlet_1d" or not math.isclose(spectrum.length, self.length, rel_tol=1e-15):
            raise ValueError("vector does not live on this domain's Dirichlet spectrum")


@dataclass(frozen=True, eq=False)
class DerivativeTable:
    """``d^p u / dx^p`` at each ``(p, x)``: signed logs plus the log of the
    sum of absolute terms, which measures cancellation."""

    ps: np.ndarray
    positions: tuple[Fraction, ...]
    sign: np.ndarray
    logmag: np.ndarray
    log_total: np.ndarray

    @property
    def cancelled(self) -> np.ndarray:
        with np.errstate(invalid="ignore"):
            return np.isfinite(self.log_total) & (self.logmag - self.log_total < LOG_CANCELLATION_RATIO)

    def x(self, length: float) -> np.ndarray:
        return np.array([float(f) * length for f in self.positions])


def derivative_table(u: DiagonalVector, domain: WaveDomain, positions: Sequence,
                     ps: Sequence[int]) -> DerivativeTable:
    domain.check(u.spectrum)
    fr = tuple(as_fraction(x, domain.length) for x in positions)
    for f in fr:
        if not 0 < f < 1:
            raise ValueError("positions must lie in (0, L)")
    ps = np.asarray(ps, dtype=np.int64)
    if np.any(ps < 0):
        raise ValueError("derivative orders must be nonnegative")
    n = np.arange(1, u.spectrum.count + 1, dtype=np.int64)
    log_wave = 0.5 * u.spectrum.log_eigenvalues
    coef_log = u.logmag + 0.5 * math.log(2.0 / domain.length)
    num = np.array([f.numerator for f in fr], dtype=np.int64)
    den = np.array([f.denominator for f in fr], dtype=np.int64)
    s, lm, tot = kernels.trig_sums(np.ascontiguousarray(u.sign), np.ascontiguousarray(coef_log),
                                   np.ascontiguousarray(log_wave), n, num, den, ps)
    return DerivativeTable(ps, fr, s, lm, tot)


def reconstruct(u: DiagonalVector, domain: WaveDomain, x, p: int = 0) -> LogReal:
    """``d^p u / dx^p`` at ``x``.  Warns with :class:`CancellationWarning`
    when the modal sum cancels below the reliability ratio."""
    tab = derivative_table(u, domain, [x], [p])
    if tab.cancelled[0, 0]:
        warnings.warn(f"derivative of order {p} at x = {float(as_fraction(x, domain.length)) * domain.length:.6g} "
                      "lost more than 12 digits to cancellation", CancellationWarning, stacklevel=2)
    return LogReal.from_log(float(tab.logmag[0, 0]), int(tab.sign[0, 0]))


def snapshot(u: DiagonalVector, domain: WaveDomain, points: int = GRID_POINTS) -> tuple[np.ndarray, np.ndarray]:
    """``(x, u(x))`` on a uniform grid of the whole open interval."""
    fr = [Fraction(j, points + 1) for j in range(1, points + 1)]
    tab = derivative_table(u, domain, fr, [0])
    with np.errstate(over="ignore"):
        vals = tab.sign[0] * np.exp(tab.logmag[0])
    return tab.x(domain.length), vals


@dataclass(frozen=True, eq=False)
class SpatialDerivCurve:
    t: float
    ps: np.ndarray
    log_sup: np.ndarray
    reliable_points: np.ndarray

    def as_power_curve(self) -> PowerNormCurve:
        return PowerNormCurve(self.t, self.ps.astype(float), self.log_sup)


def spatial_derivative_curve(u: DiagonalVector, domain: WaveDomain, ps: Sequence[int],
                             positions: Optional[Sequence] = None, t: float = math.nan) -> SpatialDerivCurve:
    """``log max_x |d^p u/dx^p|`` over the grid, taken over reliable points only.

    A point is reliable when its modal sum keeps at least ``1e-12`` of the
    sum of absolute terms.  If every grid point of some order ``p`` is
    unreliable the magnitude is unknown and :class:`CancellationError` is
    raised.
    """
    positions = domain.grid() if positions is None else positions
    ps = np.asarray(ps, dtype=np.int64)
    log_sup = np.empty(ps.size)
    count = np.empty(ps.size, dtype=np.int64)
    # chunked so an unresolvable order stops the sweep early
    for lo in range(0, ps.size, P_CHUNK):
        tab = derivative_table(u, domain, positions, ps[lo:lo + P_CHUNK])
        good = ~tab.cancelled & np.isfinite(tab.logmag)
        cnt = good.sum(axis=1)
        if np.any(cnt == 0):
            bad = tab.ps[cnt == 0]
            raise CancellationError(
                f"every grid point cancels below the reliability ratio at p = {int(bad[0])}; "
                "double precision cannot resolve this derivative")
        log_sup[lo:lo + P_CHUNK] = np.where(good, tab.logmag, -np.inf).max(axis=1)
        count[lo:lo + P_CHUNK] = cnt
    return SpatialDerivCurve(t, ps, log_sup, count)


def spatial_gevrey_fit(u: DiagonalVector, domain: WaveDomain, t: float, p_range: Sequence[int],
                       positions: Optional[Sequence] = None, damping: Optional[DampingConfig] = None,
                       window: Optional[tuple[float, float]] = None,
                       model: str = "prefactor") -> GevreyFit:
    """Spatial Gevrey exponent from ``p -> log sup |d^p u|``, fitted like a
    power-norm curve with ``k`` replaced by ``p``.  With ``damping`` the tail
    rule is enforced at power ``max(p)/2``."""
    ps = np.asarray(p_range, dtype=np.int64)
    if damping is not None and t > 0:
        check_tail(u.spectrum, damping, float(ps.max()) / 2.0, t)
    curve = spatial_derivative_curve(u, domain, ps, positions, t)
    if window is None:
        window = (float(max(ps.min(), 2)), float(ps.max()))
    return fit_gevrey_order(curve.as_power_curve(), window, model)


def three_to_one_embedding(u3: DiagonalVector, factor: int = 3) -> DiagonalVector:
    """Restrict data on ``(0, L)`` supported on modes ``factor * m`` to
    ``(0, L / factor)``: mode ``m`` there gets the coefficient of mode
    ``factor * m``.  Eigenvalues agree exactly, ``(factor m pi / L)^2``."""
    sp = u3.spectrum
    if sp.kind != "dirichlet_1d":
        raise ValueError("embedding needs a Dirichlet spectrum")
    n = np.arange(1, sp.count + 1)
    off = (n % factor != 0) & (u3.sign != 0)
    if np.any(off):
        raise SupportError(f"coefficient at mode {int(n[off][0])} is not a multiple of {factor}")
    keep = n % factor == 0
    count = int(keep.sum())
    if count == 0:
        raise SupportError("no mode index is a multiple of the embedding factor")
    target = Spectrum.dirichlet_1d(sp.length / factor, count)
    return DiagonalVector.from_log(target, u3.sign[keep], u3.logmag[keep])
