"""Diagonal model of ``u'' + A u + B u' = 0`` with ``B = c A^alpha``.

``A`` is represented by its eigenvalues only.  Every mode then obeys the
scalar equation ``w'' + b w' + lam w = 0`` with ``b = c lam^alpha`` (or a
sum of such terms), which is solved in closed form.  Mode values are
returned in signed log form so that strongly decayed high modes and large
eigenvalue powers never under- or overflow.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import DomainError, NormalizationUndefined
from .logreal import LogReal

DEFAULT_MODES = 2048
#: Relative discriminant below which a mode is treated as critically damped.
CRITICAL_GUARD = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


# ---------------------------------------------------------------------------
# Spectrum
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Spectrum:
    """Sorted positive eigenvalues ``lam_1 <= lam_2 <= ...`` of ``A``.

    ``delta``/``epsilon`` describe a lower bound ``lam_n >= delta n^epsilon``
    when it is known (exact for power-law and Dirichlet spectra).
    ``ratio_bound`` is ``max lam_{n+1}/lam_n`` over the materialized modes.
    """

    kind: str
    eigenvalues: np.ndarray
    log_eigenvalues: np.ndarray
    delta: Optional[float] = None
    epsilon: Optional[float] = None
    length: Optional[float] = None
    ratio_bound: float = field(init=False)

    def __post_init__(self):
        lam = self.eigenvalues
        if lam.ndim != 1 or lam.size == 0:
            raise ValueError("a spectrum needs at least one eigenvalue")
        if not np.all(lam > 0) or not np.all(np.isfinite(lam)):
            raise ValueError("eigenvalues must be positive and finite")
        if np.any(np.diff(lam) < 0):
            raise ValueError("eigenvalues must be sorted ascending")
        rb = float(np.max(lam[1:] / lam[:-1])) if lam.size > 1 else 1.0
        object.__setattr__(self, "ratio_bound", max(rb, 1.0))

    @classmethod
    def power_law(cls, delta: float, epsilon: float, count: int = DEFAULT_MODES) -> Spectrum:
        if delta <= 0 or epsilon <= 0 or count < 1:
            raise ValueError("power law needs delta > 0, epsilon > 0, count >= 1")
        n = np.arange(1, count + 1, dtype=float)
        lam = delta * n ** epsilon
        return cls("power_law", _frozen(lam), _frozen(np.log(lam)),
                   delta=float(delta), epsilon=float(epsilon))

    @classmethod
    def dirichlet_1d(cls, length: float, count: int = DEFAULT_MODES) -> Spectrum:
        """Dirichlet Laplacian on ``(0, length)``: ``lam_n = (n pi / length)^2``."""
        if length <= 0 or count < 1:
            raise ValueError("dirichlet_1d needs length > 0 and count >= 1")
        n = np.arange(1, count + 1, dtype=float)
        lam = (n * (math.pi / length)) ** 2
        return cls("dirichlet_1d", _frozen(lam), _frozen(np.log(lam)),
                   delta=(math.pi / length) ** 2, epsilon=2.0, length=float(length))

    @classmethod
    def explicit(cls, values: Sequence[float], delta: Optional[float] = None,
                 epsilon: Optional[float] = None) -> Spectrum:
        lam = np.asarray(values, dtype=float)
        if np.any(lam <= 0):
            raise ValueError("eigenvalues must be positive")
        return cls("explicit", _frozen(lam.copy()), _frozen(np.log(lam)),
                   delta=delta, epsilon=epsilon)

    @property
    def count(self) -> int:
        return int(self.eigenvalues.size)

    def __len__(self) -> int:
        return self.count

    def scaled(self, factor: float) -> Spectrum:
        """Spectrum of ``factor * A``."""
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        if self.kind == "power_law":
            return Spectrum.power_law(self.delta * factor, self.epsilon, self.count)
        if self.kind == "dirichlet_1d":
            return Spectrum.dirichlet_1d(self.length / math.sqrt(factor), self.count)
        d = None if self.delta is None else self.delta * factor
        return Spectrum.explicit(self.eigenvalues * factor, d, self.epsilon)

    def describe(self) -> dict:
        out = {"kind": self.kind, "count": self.count, "ratio_bound": self.ratio_bound}
        for key in ("delta", "epsilon", "length"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        return out


# ---------------------------------------------------------------------------
# Damping
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DampingConfig:
    """Damping operator ``B = c A^alpha``, or ``sum_i c_i A^{alpha_i}`` when
    ``symbol`` is given (then ``alpha``/``c`` hold the dominant term)."""

    alpha: float
    c: float = 1.0
    symbol: Optional[tuple[tuple[float, float], ...]] = None

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.c > 0:
            raise DomainError(f"c must be positive, got {self.c}")
        if self.symbol is not None:
            terms = tuple((float(ci), float(ai)) for ci, ai in self.symbol)
            if not terms:
                raise DomainError("symbol needs at least one term")
            for ci, ai in terms:
                if not ci > 0 or not (0.0 < ai < 1.0):
                    raise DomainError(f"symbol term ({ci}, {ai}) needs c_i > 0, alpha_i in (0, 1)")
            object.__setattr__(self, "symbol", terms)

    @classmethod
    def generalized(cls, terms: Sequence[tuple[float, float]]) -> DampingConfig:
        terms = tuple((float(ci), float(ai)) for ci, ai in terms)
        c_dom, a_dom = max(terms, key=lambda ca: (ca[1], ca[0]))
        return cls(alpha=a_dom, c=c_dom, symbol=terms)

    def log_rate(self, log_lam: np.ndarray) -> np.ndarray:
        """``log b(lam)`` for the damping symbol."""
        log_lam = np.asarray(log_lam, dtype=float)
        if self.symbol is None:
            return math.log(self.c) + self.alpha * log_lam
        parts = np.stack([math.log(ci) + ai * log_lam for ci, ai in self.symbol])
        return np.logaddexp.reduce(parts, axis=0)

    def rate(self, lam: np.ndarray) -> np.ndarray:
        lam = np.asarray(lam, dtype=float)
        if self.symbol is None:
            return self.c * np.power(lam, self.alpha)
        return sum(ci * np.power(lam, ai) for ci, ai in self.symbol)

    def describe(self) -> dict:
        out = {"alpha": self.alpha, "c": self.c}
        if self.symbol is not None:
            out["symbol"] = [list(t) for t in self.symbol]
        return out


def gevrey_order(alpha: float) -> float:
    """Smoothing order ``max(1/alpha, 1/(1 - alpha))``.

    The larger of the two is the order that the lower-bound constructions
    saturate; it equals 2 at ``alpha = 1/2`` and grows toward both ends.
    """
    return max(1.0 / alpha, 1.0 / (1.0 - alpha))


def slow_decay(damping: DampingConfig) -> tuple[float, float]:
    """Asymptotic slowest modal decay rate ``mu(lam) ~ gamma * lam**beta``.

    Returns ``(gamma, beta)``: overdamped tail for alpha > 1/2, oscillatory
    tail for alpha < 1/2, and the c-dependent split at alpha = 1/2.
    """
    a, c = damping.alpha, damping.c
    if a > 0.5:
        return 1.0 / c, 1.0 - a
    if a < 0.5:
        return c / 2.0, a
    if c < 2.0:
        return c / 2.0, 0.5
    return c / 2.0 - math.sqrt(c * c / 4.0 - 1.0), 0.5


# ---------------------------------------------------------------------------
# Vectors in the eigenbasis
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DiagonalVector:
    """Eigen-coefficients of a vector, stored as signs and log-magnitudes."""

    spectrum: Spectrum
    sign: np.ndarray
    logmag: np.ndarray

    def __post_init__(self):
        n = self.spectrum.count
        if self.sign.shape != (n,) or self.logmag.shape != (n,):
            raise ValueError(f"coefficient arrays must have length {n}")
        object.__setattr__(self, "sign", _frozen(self.sign.astype(np.int8, copy=False)))
        object.__setattr__(self, "logmag", _frozen(self.logmag.astype(float, copy=False)))

    @classmethod
    def from_real(cls, spectrum: Spectrum, values) -> DiagonalVector:
        v = np.asarray(values, dtype=float)
        with np.errstate(divide="ignore"):
            logmag = np.log(np.abs(v))
        return cls(spectrum, np.sign(v).astype(np.int8), logmag)

    @classmethod
    def from_log(cls, spectrum: Spectrum, sign, logmag) -> DiagonalVector:
        sign = np.asarray(sign, dtype=np.int8).copy()
        logmag = np.asarray(logmag, dtype=float).copy()
        logmag[sign == 0] = -np.inf
        sign[logmag == -np.inf] = 0
        return cls(spectrum, sign, logmag)

    @classmethod
    def zeros(cls, spectrum: Spectrum) -> DiagonalVector:
        n = spectrum.count
        return cls(spectrum, np.zeros(n, dtype=np.int8), np.full(n, -np.inf))

    @classmethod
    def basis(cls, spectrum: Spectrum, n: int) -> DiagonalVector:
        """Normalized eigenvector ``phi_n`` (1-based index)."""
        if not 1 <= n <= spectrum.count:
            raise IndexError(f"mode {n} outside 1..{spectrum.count}")
        v = np.zeros(spectrum.count)
        v[n - 1] = 1.0
        return cls.from_real(spectrum, v)

    def to_real(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return self.sign * np.exp(self.logmag)

    def coefficient(self, n: int) -> LogReal:
        return LogReal.from_log(float(self.logmag[n - 1]), int(self.sign[n - 1]))

    def scaled(self, factor: float) -> DiagonalVector:
        if factor == 0:
            return DiagonalVector.zeros(self.spectrum)
        s = 1 if factor > 0 else -1
        return DiagonalVector(self.spectrum, self.sign * np.int8(s),
                              self.logmag + math.log(abs(factor)))

    def apply_power(self, k: float) -> DiagonalVector:
        """Coefficients of ``A^k v``."""
        return DiagonalVector(self.spectrum, self.sign.copy(),
                              self.logmag + k * self.spectrum.log_eigenvalues)

    def apply_log_multiplier(self, log_m: np.ndarray) -> DiagonalVector:
        return DiagonalVector(self.spectrum, self.sign.copy(), self.logmag + log_m)


# ---------------------------------------------------------------------------
# Closed-form modal solution
# ---------------------------------------------------------------------------

class Regime(enum.IntEnum):
    UNDERDAMPED = -1
    CRITICAL = 0
    OVERDAMPED = 1


def classify(lam: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Regime code per mode from the sign of ``b^2 - 4 lam``."""
    lam = np.asarray(lam, dtype=float)
    b = np.asarray(b, dtype=float)
    gap = b * b - 4.0 * lam
    out = np.where(gap > 0, Regime.OVERDAMPED, Regime.UNDERDAMPED).astype(np.int8)
    out[np.abs(gap) < CRITICAL_GUARD * 4.0 * lam] = Regime.CRITICAL
    return out


@dataclass(frozen=True, eq=False)
class ModalSolution:
    """Per-mode parameters of the exact solution.

    ``decay`` is the rate factored out of every mode (``mu_minus`` when
    overdamped, ``b/2`` otherwise); ``mu_plus`` is the fast rate of an
    overdamped mode and ``omega`` the frequency of an underdamped one (both
    NaN where they do not apply).
    """

    lam: np.ndarray
    b: np.ndarray
    regime: np.ndarray
    decay: np.ndarray
    mu_plus: np.ndarray
    omega: np.ndarray
    u0: np.ndarray
    u1: np.ndarray

    @classmethod
    def build(cls, lam, b, u0, u1) -> ModalSolution:
        lam = np.asarray(lam, dtype=float)
        b = np.asarray(b, dtype=float)
        regime = classify(lam, b)
        disc = 0.25 * b * b - lam
        decay = 0.5 * b.copy()
        mu_plus = np.full(lam.shape, np.nan)
        omega = np.full(lam.shape, np.nan)
        over = regime == Regime.OVERDAMPED
        d = np.sqrt(disc[over])
        decay[over] = lam[over] / (0.5 * b[over] + d)
        mu_plus[over] = 0.5 * b[over] + d
        under = regime == Regime.UNDERDAMPED
        omega[under] = np.sqrt(-disc[under])
        return cls(lam, b, regime, decay, mu_plus, omega,
                   np.asarray(u0, dtype=float), np.asarray(u1, dtype=float))

    def brackets(self, t) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(W, Wp)`` with ``w = exp(-decay t) W`` and ``w' = exp(-decay t) Wp``.

        ``t`` may be a scalar or an array broadcasting against the modes
        (e.g. shape ``(M, 1)`` for ``M`` time points).
        """
        t = np.asarray(t, dtype=float)
        shape = np.broadcast_shapes(t.shape, self.lam.shape)
        W = np.empty(shape)
        Wp = np.empty(shape)
        lam, b, u0, u1 = self.lam, self.b, self.u0, self.u1
        half_b = 0.5 * b

        i = np.flatnonzero(self.regime == Regime.OVERDAMPED)
        if i.size:
            mum, mup = self.decay[i], self.mu_plus[i]
            d = np.sqrt(0.25 * b[i] * b[i] - lam[i])
            disc = d * d
            x = 2.0 * d * t
            E = np.exp(-x)
            G = u1[i] + half_b[i] * u0[i]
            # small d*t: expm1 form, no division by a vanishing gap
            S = -np.expm1(-x) / (2.0 * d)
            Ws = 0.5 * u0[i] * (1.0 + E) + G * S
            Wps = -half_b[i] * Ws + disc * u0[i] * S + 0.5 * G * (1.0 + E)
            # large d*t: separate slow and fast amplitudes
            P = (u1[i] + mup * u0[i]) / (2.0 * d)
            Q = -(u1[i] + mum * u0[i]) / (2.0 * d)
            Wl = P + Q * E
            Wpl = -mum * P - mup * Q * E
            small = x < 1.0
            W[..., i] = np.where(small, Ws, Wl)
            Wp[..., i] = np.where(small, Wps, Wpl)

        i = np.flatnonzero(self.regime == Regime.CRITICAL)
        if i.size:
            G = u1[i] + half_b[i] * u0[i]
            W[..., i] = u0[i] + G * t
            Wp[..., i] = u1[i] - half_b[i] * G * t

        i = np.flatnonzero(self.regime == Regime.UNDERDAMPED)
        if i.size:
            om = self.omega[i]
            G = (u1[i] + half_b[i] * u0[i]) / om
            ph = om * t
            cs, sn = np.cos(ph), np.sin(ph)
            W[..., i] = u0[i] * cs + G * sn
            Wp[..., i] = u1[i] * cs - (om * u0[i] + half_b[i] * G) * sn
        return W, Wp

    def log_values(self, t: float):
        """Signed log values ``(sw, lw, swp, lwp)`` of ``w(t)`` and ``w'(t)``."""
        W, Wp = self.brackets(t)
        shift = -self.decay * t
        with np.errstate(divide="ignore"):
            lw = shift + np.log(np.abs(W))
            lwp = shift + np.log(np.abs(Wp))
        return np.sign(W).astype(np.int8), lw, np.sign(Wp).astype(np.int8), lwp

    def real_values(self, t) -> tuple[np.ndarray, np.ndarray]:
        t = np.asarray(t, dtype=float)
        W, Wp = self.brackets(t)
        f = np.exp(-self.decay * t)
        return f * W, f * Wp


def mode_rates(spectrum: Spectrum, damping: DampingConfig) -> np.ndarray:
    return np.exp(damping.log_rate(spectrum.log_eigenvalues))


def solve_mode(lam: float, damping: DampingConfig, u0: float, u1: float,
               t: float) -> tuple[LogReal, LogReal]:
    """Exact ``(w(t), w'(t))`` for ``w'' + b(lam) w' + lam w = 0``."""
    if lam <= 0 or t < 0:
        raise DomainError("solve_mode needs lam > 0 and t >= 0")
    if t == 0:
        return LogReal.from_real(u0), LogReal.from_real(u1)
    b = float(np.exp(damping.log_rate(np.array([math.log(lam)]))[0]))
    sol = ModalSolution.build(np.array([lam]), np.array([b]), np.array([u0]), np.array([u1]))
    sw, lw, swp, lwp = sol.log_values(t)
    return LogReal.from_log(float(lw[0]), int(sw[0])), LogReal.from_log(float(lwp[0]), int(swp[0]))


def modal_solution(u0: DiagonalVector, u1: DiagonalVector, damping: DampingConfig) -> ModalSolution:
    if u0.spectrum is not u1.spectrum:
        raise ValueError("position and velocity must share one spectrum")
    sp = u0.spectrum
    return ModalSolution.build(sp.eigenvalues, mode_rates(sp, damping), u0.to_real(), u1.to_real())


def evolve(state0: tuple[DiagonalVector, DiagonalVector], damping: DampingConfig,
           t: float) -> tuple[DiagonalVector, DiagonalVector]:
    """Exact state ``(u(t), u'(t))`` from ``(u(0), u'(0))``."""
    u0, u1 = state0
    if t < 0:
        raise DomainError("t must be nonnegative")
    if u0.spectrum is not u1.spectrum:
        raise ValueError("position and velocity must share one spectrum")
    if t == 0:
        return u0, u1
    sw, lw, swp, lwp = modal_solution(u0, u1, damping).log_values(t)
    sp = u0.spectrum
    return DiagonalVector.from_log(sp, sw, lw), DiagonalVector.from_log(sp, swp, lwp)


# ---------------------------------------------------------------------------
# Norms
# ---------------------------------------------------------------------------

def log_power_norms(v: DiagonalVector, ks) -> np.ndarray:
    """``log |A^k v|`` for every ``k`` in ``ks``."""
    ks = np.atleast_1d(np.asarray(ks, dtype=float))
    out = kernels.lse_affine(v.spectrum.log_eigenvalues, 2.0 * v.logmag, 2.0 * ks)
    return 0.5 * out


def power_norm(v: DiagonalVector, k: float) -> LogReal:
    """``|A^k v| = (sum lam_n^{2k} v_n^2)^{1/2}``; ``k`` may be fractional."""
    if k < 0:
        raise DomainError("power must be nonnegative")
    return LogReal.from_log(float(log_power_norms(v, [k])[0]))


def log_weighted_norm(v: DiagonalVector, log_weight: np.ndarray) -> float:
    """``log (sum w_n^2 v_n^2)^{1/2}`` for per-mode weights given as ``log w_n``."""
    return 0.5 * float(kernels.lse_affine(np.zeros(v.spectrum.count),
                                          2.0 * (v.logmag + log_weight), np.zeros(1))[0])


@dataclass(frozen=True)
class EnergyNorms:
    h_norm: LogReal
    half_norm: LogReal
    v_norm: LogReal
    e_norm: LogReal


def energy_norms(u: DiagonalVector, up: DiagonalVector) -> EnergyNorms:
    """``|u|``, ``|A^{1/2} u|``, ``||u|| = (|u|^2 + |A^{1/2}u|^2)^{1/2}`` and the
    energy norm ``(||u||^2 + |u'|^2)^{1/2}``."""
    if u.spectrum is not up.spectrum:
        raise ValueError("vectors must share one spectrum")
    lh, lhalf = log_power_norms(u, [0.0, 0.5])
    lp = log_power_norms(up, [0.0])[0]
    lv = 0.5 * np.logaddexp(2 * lh, 2 * lhalf)
    le = 0.5 * np.logaddexp(2 * lv, 2 * lp)
    return EnergyNorms(*(LogReal.from_log(float(x)) for x in (lh, lhalf, lv, le)))


# ---------------------------------------------------------------------------
# Time rescaling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TimeRescaling:
    """``u(t) = v(k t)`` turns the equation into ``v'' + B v + c' B^alpha v' = 0``
    with ``B = spectrum_scale * A`` and ``c' = c k^{2 alpha - 1}``."""

    damping: DampingConfig
    spectrum_scale: float
    k: float
    normalizing_k: Optional[float]


def normalizing_scale(damping: DampingConfig) -> float:
    """The ``k`` with ``c k^{2 alpha - 1} = 1``."""
    if damping.symbol is not None:
        raise NormalizationUndefined("a multi-term damping symbol has no single normalizing scale")
    if damping.alpha == 0.5:
        if damping.c == 1.0:
            return 1.0
        raise NormalizationUndefined("alpha = 1/2: the coefficient c is invariant under time scaling")
    return damping.c ** (1.0 / (1.0 - 2.0 * damping.alpha))


def rescale_time(damping: DampingConfig, k: float) -> TimeRescaling:
    if not k > 0:
        raise DomainError("time scale k must be positive")
    if damping.symbol is None:
        new = DampingConfig(damping.alpha, damping.c * k ** (2.0 * damping.alpha - 1.0))
    else:
        new = DampingConfig.generalized([(ci * k ** (2.0 * ai - 1.0), ai) for ci, ai in damping.symbol])
    try:
        nk = normalizing_scale(damping)
    except NormalizationUndefined:
        nk = None
    return TimeRescaling(new, k ** -2.0, float(k), nk)
