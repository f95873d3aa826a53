"""Numerical checks of the energy method and the optimality constructions.

The energy functional used throughout is

    Phi = |u'|^2 + |A^{1/2} u|^2 + 1/2 |B u|^2 + (B u, u'),

whose dissipation identity ``dPhi/dt = -(|B^{1/2} u'|^2 + (A u, B u))``
drives the smoothing estimate.  In the eigenbasis every term is a sum of
per-mode quantities, so all checks below are evaluated from the exact modal
solution.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import QuadratureFailure, SpecError
from .gevrey import check_tail, growth_exponent
from .spectral import (
    DampingConfig,
    DiagonalVector,
    ModalSolution,
    Regime,
    Spectrum,
    evolve,
    log_power_norms,
    modal_solution,
)

FD_STEP = 1e-4
QUAD_MAX_DEPTH = 30
QUAD_MIN_DEPTH = 6
QUAD_REL_TOL = 1e-12
INEQ_SLACK = 1e-9


# ---------------------------------------------------------------------------
# Energy functional
# ---------------------------------------------------------------------------

def _state_arrays(sol: ModalSolution, t):
    """``(w, w')`` of shape ``(len(t), modes)``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))[:, None]
    return sol.real_values(t)


def phi_terms(sol: ModalSolution, w: np.ndarray, wp: np.ndarray) -> dict[str, np.ndarray]:
    """Mode-summed pieces of the energy functional at each row of ``w``/``wp``."""
    lam, b = sol.lam, sol.b
    vel = np.sum(wp * wp, axis=-1)
    half = np.sum(lam * w * w, axis=-1)
    bu = np.sum((b * w) ** 2, axis=-1)
    cross = np.sum(b * w * wp, axis=-1)
    phi = vel + half + 0.5 * bu + cross
    dissipation = np.sum(b * wp * wp + lam * b * w * w, axis=-1)
    return {"vel": vel, "half": half, "bu": bu, "phi": phi, "dissipation": dissipation}


@dataclass(frozen=True, eq=False)
class EnergyReport:
    t: np.ndarray
    phi: np.ndarray
    dphi_fd: np.ndarray
    rhs: np.ndarray
    violation: np.ndarray
    lower_margin: np.ndarray
    upper_margin: np.ndarray

    @property
    def max_violation(self) -> float:
        return float(self.violation.max()) if self.violation.size else 0.0

    @property
    def sandwich_holds(self) -> bool:
        return bool(np.all(self.lower_margin >= 0) and np.all(self.upper_margin >= 0))

    def rows(self):
        for i in range(self.t.size):
            yield (self.t[i], self.phi[i], self.dphi_fd[i], self.rhs[i], self.violation[i],
                   self.lower_margin[i], self.upper_margin[i])

    def summary(self) -> dict:
        return {"points": int(self.t.size), "maxRelativeViolation": self.max_violation,
                "sandwichHolds": self.sandwich_holds,
                "minLowerMargin": float(self.lower_margin.min()) if self.t.size else 0.0,
                "minUpperMargin": float(self.upper_margin.min()) if self.t.size else 0.0}


def energy_identity_check(state0: tuple[DiagonalVector, DiagonalVector], damping: DampingConfig,
                          t_grid: Sequence[float], h: float = FD_STEP) -> EnergyReport:
    """Compare a central difference of ``Phi`` with the dissipation identity.

    The relative violation at ``t`` is ``|dPhi_fd - rhs| / |rhs|`` (zero when
    both vanish).  The sandwich margins are
    ``Phi - (|u'|^2/2 + |A^{1/2}u|^2)`` and
    ``(3/2 |u'|^2 + |A^{1/2}u|^2 + |Bu|^2) - Phi``, each relative to the
    larger side and floored at -0 by a 1e-12 rounding allowance.
    """
    t = np.asarray(t_grid, dtype=float)
    if t.size and (np.any(t <= 0) or np.any(np.diff(t) <= 0)):
        raise ValueError("t grid must be positive and strictly increasing")
    if t.size > 1 and not h < np.diff(t).min() / 4.0:
        raise ValueError("finite-difference step must be below a quarter of the grid spacing")
    if t.size and not h < t[0]:
        raise ValueError("finite-difference step must be below the first grid time")
    sol = modal_solution(*state0, damping)
    w, wp = _state_arrays(sol, t)
    here = phi_terms(sol, w, wp)
    ahead = phi_terms(sol, *_state_arrays(sol, t + h))["phi"]
    behind = phi_terms(sol, *_state_arrays(sol, t - h))["phi"]
    dphi = (ahead - behind) / (2.0 * h)
    rhs = -here["dissipation"]
    err = np.abs(dphi - rhs)
    with np.errstate(invalid="ignore", divide="ignore"):
        viol = np.where(rhs != 0, err / np.abs(rhs), np.where(err > 0, np.inf, 0.0))
    phi = here["phi"]
    lower = 0.5 * here["vel"] + here["half"]
    upper = 1.5 * here["vel"] + here["half"] + here["bu"]
    scale = np.maximum(np.abs(upper), 1e-300)
    lo_m = (phi - lower) / scale
    up_m = (upper - phi) / scale
    lo_m = np.where(lo_m > -1e-12, np.maximum(lo_m, 0.0), lo_m)
    up_m = np.where(up_m > -1e-12, np.maximum(up_m, 0.0), up_m)
    return EnergyReport(t, phi, dphi, rhs, viol, lo_m, up_m)


# ---------------------------------------------------------------------------
# Integral inequality
# ---------------------------------------------------------------------------

def adaptive_simpson(f, a: float, b: float, rel_tol: float = QUAD_REL_TOL,
                     abs_tol: float = 0.0, max_depth: int = QUAD_MAX_DEPTH,
                     min_depth: int = QUAD_MIN_DEPTH) -> float:
    """Adaptive Simpson rule, refined breadth-first.

    ``f`` takes an array of abscissae and returns the integrand there, so
    every refinement level costs one vectorized call.  No panel is accepted
    before ``min_depth`` uniform bisections (a coarse start aliases
    oscillatory integrands into false convergence); the tolerance
    ``max(abs_tol, rel_tol * |estimate|)`` is fixed from the estimate at that
    level.  A panel still failing at ``max_depth`` raises
    :class:`QuadratureFailure`.
    """
    if b == a:
        return 0.0
    if not 0 <= min_depth < max_depth:
        raise ValueError("need 0 <= min_depth < max_depth")
    x = np.linspace(a, b, 3)
    fx = np.asarray(f(x), dtype=float)
    lo = np.array([a]); hi = np.array([b])
    fl = fx[[0]]; fm = fx[[1]]; fh = fx[[2]]
    whole = (hi - lo) / 6.0 * (fl + 4 * fm + fh)
    eps = None
    total = 0.0
    depth = 0
    while lo.size:
        if depth >= max_depth:
            raise QuadratureFailure(f"adaptive Simpson exceeded depth {max_depth} on {lo.size} intervals")
        mid = 0.5 * (lo + hi)
        q1 = 0.5 * (lo + mid)
        q3 = 0.5 * (mid + hi)
        vals = np.asarray(f(np.concatenate([q1, q3])), dtype=float)
        f1, f3 = vals[:lo.size], vals[lo.size:]
        left = (mid - lo) / 6.0 * (fl + 4 * f1 + fm)
        right = (hi - mid) / 6.0 * (fm + 4 * f3 + fh)
        delta = left + right - whole
        if depth < min_depth:
            done = np.zeros(lo.size, dtype=bool)
        else:
            if eps is None:
                tol = max(abs_tol, rel_tol * abs(float(np.sum(left + right))), 1e-300)
                eps = np.full(lo.size, tol / lo.size)
            done = np.abs(delta) <= 15.0 * eps
        total += float(np.sum((left + right + delta / 15.0)[done]))
        keep = ~done
        lo, hi = np.concatenate([lo[keep], mid[keep]]), np.concatenate([mid[keep], hi[keep]])
        fl, fh, fm = (np.concatenate([fl[keep], fm[keep]]), np.concatenate([fm[keep], fh[keep]]),
                      np.concatenate([f1[keep], f3[keep]]))
        whole = np.concatenate([left[keep], right[keep]])
        if eps is not None:
            eps = np.concatenate([eps[keep], eps[keep]]) / 2.0
        depth += 1
    return total


def dissipation_rate(sol: ModalSolution):
    """``s -> |B^{1/2} u'(s)|^2 + (A u(s), B u(s))`` on arrays of ``s``."""
    def f(s):
        w, wp = _state_arrays(sol, s)
        return np.sum(sol.b * (wp * wp + sol.lam * w * w), axis=-1)
    return f


@dataclass(frozen=True)
class IntegralInequality:
    lhs: float
    rhs: float
    holds: bool


def integral_inequality_check(state0: tuple[DiagonalVector, DiagonalVector], damping: DampingConfig,
                              t: float) -> IntegralInequality:
    """``int_0^t (|B^{1/2}u'|^2 + (Au, Bu)) ds <= 3/2 |u1|^2 + |A^{1/2}u0|^2 + |B u0|^2``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    sol = modal_solution(*state0, damping)
    lhs = adaptive_simpson(dissipation_rate(sol), 0.0, float(t))
    u0, u1 = sol.u0, sol.u1
    rhs = float(np.sum(1.5 * u1 * u1 + sol.lam * u0 * u0 + (sol.b * u0) ** 2))
    return IntegralInequality(lhs, rhs, bool(lhs <= rhs * (1.0 + INEQ_SLACK)))


# ---------------------------------------------------------------------------
# Smoothing estimate and non-coercive growth
# ---------------------------------------------------------------------------

def _log_vxh(u: DiagonalVector, up: DiagonalVector, power: float) -> float:
    """``log |(A^power u, A^power u')|_{V x H}``."""
    l0, lh = log_power_norms(u, [power, power + 0.5])
    lp = log_power_norms(up, [power])[0]
    return 0.5 * float(np.logaddexp.reduce([2 * l0, 2 * lh, 2 * lp]))


@dataclass(frozen=True)
class SmoothingFit:
    kprime_hat: float
    step: float
    ms: tuple[int, ...]
    log_lhs: tuple[float, ...]
    log_e0: float

    def as_dict(self) -> dict:
        return {"KprimeHat": self.kprime_hat, "step": self.step, "m": list(self.ms),
                "logLhs": list(self.log_lhs), "logE0": self.log_e0}


def smoothing_estimate_fit(state0: tuple[DiagonalVector, DiagonalVector], damping: DampingConfig,
                           t: float, m_range: Sequence[int]) -> SmoothingFit:
    """Smallest ``K'`` with ``lhs(m) <= (K' m / t)^m E0`` over the sampled ``m``.

    For ``alpha <= 1/2``, ``lhs(m) = |(A^{m alpha} u, A^{m alpha} u')|_{V x H}``
    and ``E0`` is the ``V x H`` norm of the data.  For ``alpha > 1/2`` the
    estimate is applied to ``v = A^{alpha - 1/2} u`` with step ``1 - alpha``.
    """
    u0, u1 = state0
    if u0.spectrum.eigenvalues[0] < 1.0:
        raise ValueError("the smoothing estimate needs a coercive spectrum (lam_1 >= 1)")
    if not t > 0:
        raise ValueError("t must be positive")
    ms = tuple(int(m) for m in m_range)
    if not ms or min(ms) < 1:
        raise ValueError("m values must be positive integers")
    a = damping.alpha
    shift, step = (0.0, a) if a <= 0.5 else (a - 0.5, 1.0 - a)
    check_tail(u0.spectrum, damping, shift + step * max(ms) + 0.5, t)
    if shift:
        u0, u1 = u0.apply_power(shift), u1.apply_power(shift)
    ut, upt = evolve((u0, u1), damping, t)
    log_e0 = _log_vxh(u0, u1, 0.0)
    lhs = tuple(_log_vxh(ut, upt, step * m) for m in ms)
    logk = [math.log(t / m) + (l - log_e0) / m for m, l in zip(ms, lhs)]
    return SmoothingFit(math.exp(max(logk)), step, ms, lhs, log_e0)


def log_enorm_sq(sol: ModalSolution, t) -> np.ndarray:
    """``log |U(t)|_E^2`` with ``|U|_E^2 = |u|^2 + |A^{1/2}u|^2 + |u'|^2``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    W, Wp = sol.brackets(t[:, None])
    with np.errstate(divide="ignore"):
        terms = -2.0 * sol.decay * t[:, None] + np.log((1.0 + sol.lam) * W * W + Wp * Wp)
    return np.logaddexp.reduce(terms, axis=-1)


def enorm_growth_check(state0: tuple[DiagonalVector, DiagonalVector], damping: DampingConfig,
                       t_grid: Sequence[float]) -> bool:
    """``|U(t)|_E^2 <= e^t |U(0)|_E^2 (1 + 1e-9)`` on every grid time."""
    sol = modal_solution(*state0, damping)
    t = np.asarray(t_grid, dtype=float)
    l0 = log_enorm_sq(sol, [0.0])[0]
    if l0 == -np.inf:
        return True
    lt = log_enorm_sq(sol, t)
    return bool(np.all(lt <= t + l0 + math.log1p(INEQ_SLACK)))


# ---------------------------------------------------------------------------
# Optimality counterexamples
# ---------------------------------------------------------------------------

class Variant(str, enum.Enum):
    OVERDAMPED = "overdamped"
    OSCILLATORY = "oscillatory"
    HALF = "half"


@dataclass(frozen=True, eq=False)
class CounterexampleSpec:
    """Data ``u0 = sum_{n >= n0} lam_n^{-K} phi_n`` with the velocity chosen so
    each active mode is a pure slow exponential (overdamped) or a pure damped
    cosine (oscillatory).  ``stride`` keeps only modes whose index is a
    multiple of it."""

    variant: Variant
    K: float
    n0: int
    spectrum: Spectrum
    alpha: float
    c: float = 1.0
    stride: int = 1

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.n0 < 1 or self.stride < 1:
            raise SpecError("n0 and stride must be positive")
        if self.n0 > self.spectrum.count:
            raise SpecError(f"n0 = {self.n0} exceeds the {self.spectrum.count} materialized modes")
        if not self.c > 0:
            raise SpecError("c must be positive")
        if self.variant is Variant.HALF:
            if self.alpha != 0.5:
                raise SpecError("the half variant needs alpha = 1/2")
        elif not 0.0 < self.alpha < 1.0 or self.alpha == 0.5:
            raise SpecError("overdamped/oscillatory variants need alpha in (0, 1), alpha != 1/2")
        eps = self.spectrum.epsilon
        if eps is not None and not self.K > 1.0 + 1.0 / (2.0 * eps):
            raise SpecError(f"K = {self.K} must exceed 1 + 1/(2 eps) = {1 + 1 / (2 * eps):g}")

    @property
    def damping(self) -> DampingConfig:
        return DampingConfig(self.alpha, self.c)

    def active(self) -> np.ndarray:
        n = np.arange(1, self.spectrum.count + 1)
        return (n >= self.n0) & (n % self.stride == 0)


def threshold_holds(variant: Variant, lam: np.ndarray, alpha: float, c: float) -> np.ndarray:
    """Per-mode regime condition with ``c`` explicit.

    Overdamped: ``c^2 lam^{2 alpha} > 4 lam``; oscillatory:
    ``c^2 lam^{2 alpha} < 4 lam``; half: always (the regime is fixed by ``c``).
    """
    variant = Variant(variant)
    lam = np.asarray(lam, dtype=float)
    if variant is Variant.HALF:
        return np.ones(lam.shape, dtype=bool)
    g = (2.0 * alpha - 1.0) * np.log(lam)
    if variant is Variant.OVERDAMPED:
        return g > math.log(4.0 / (c * c))
    return g < math.log(4.0 / (c * c))


def minimal_n0(variant: Variant, spectrum: Spectrum, alpha: float, c: float = 1.0) -> int:
    """Smallest ``n0`` with the threshold condition holding for every ``n >= n0``."""
    ok = threshold_holds(variant, spectrum.eigenvalues, alpha, c)
    bad = np.flatnonzero(~ok)
    n0 = 1 if bad.size == 0 else int(bad[-1]) + 2
    if n0 > spectrum.count:
        raise SpecError("no materialized mode satisfies the threshold condition")
    return n0


@dataclass(frozen=True)
class Summability:
    """Partial sums of ``|u0|_V^2`` and ``|u1|_H^2`` and the log-log decay
    slopes of their terms over the last decade of active modes; the data is
    accepted as ``V x H`` when both slopes are below ``-1``."""

    v_norm_sq: float
    h_norm_sq: float
    v_slope: float
    h_slope: float

    @property
    def summable(self) -> bool:
        return self.v_slope < -1.0 and self.h_slope < -1.0

    def as_dict(self) -> dict:
        return {"vNormSq": self.v_norm_sq, "hNormSq": self.h_norm_sq, "vSlope": self.v_slope,
                "hSlope": self.h_slope, "summable": self.summable}


def _tail_slope(n: np.ndarray, terms: np.ndarray) -> float:
    if n.size < 2:
        return -math.inf
    sel = n >= n[-1] / 10.0
    if sel.sum() < 2:
        sel = np.ones_like(n, dtype=bool)
    with np.errstate(divide="ignore"):
        y = np.log(terms[sel])
    x = np.log(n[sel].astype(float))
    good = np.isfinite(y)
    if good.sum() < 2:
        return -math.inf
    return float(np.polyfit(x[good], y[good], 1)[0])


def build_counterexample(spec: CounterexampleSpec) -> tuple[tuple[DiagonalVector, DiagonalVector], Summability]:
    """Initial data of the optimality construction and its summability report.

    Each active mode gets ``u0_n = lam_n^{-K}`` and ``u1_n = -u0_n * decay_n``
    where ``decay_n`` is the slow rate (overdamped) or ``b_n/2``, so that
    ``w_n(t) = u0_n e^{-mu_n t}`` resp. ``u0_n e^{-b_n t/2} cos(omega_n t)``.
    """
    sp = spec.spectrum
    act = spec.active()
    lam = sp.eigenvalues
    if not np.all(threshold_holds(spec.variant, lam[act], spec.alpha, spec.c)):
        raise SpecError(f"n0 = {spec.n0} violates the {spec.variant.value} threshold condition; "
                        f"smallest admissible n0 is {minimal_n0(spec.variant, sp, spec.alpha, spec.c)}")
    sol = ModalSolution.build(lam, spec.damping.rate(lam), np.zeros(sp.count), np.zeros(sp.count))
    expected = Regime.OVERDAMPED if spec.variant is Variant.OVERDAMPED else Regime.UNDERDAMPED
    if spec.variant is not Variant.HALF and np.any(sol.regime[act] != expected):
        raise SpecError("active modes fall outside the expected damping regime")
    logc = np.where(act, -spec.K * sp.log_eigenvalues, -np.inf)
    sign = act.astype(np.int8)
    u0 = DiagonalVector.from_log(sp, sign, logc)
    u1 = DiagonalVector.from_log(sp, -sign, logc + np.log(sol.decay))
    n = np.flatnonzero(act) + 1
    vterms = np.exp(2 * logc[act]) * (1.0 + lam[act])
    hterms = np.exp(2 * (logc[act] + np.log(sol.decay[act])))
    report = Summability(float(vterms.sum()), float(hterms.sum()),
                         _tail_slope(n, vterms), _tail_slope(n, hterms))
    if not report.summable:
        raise SpecError("counterexample data is not summable in V x H")
    return (u0, u1), report


# ---------------------------------------------------------------------------
# Lower bounds
# ---------------------------------------------------------------------------

def selection_power(variant: Variant, alpha: float) -> float:
    """``q`` in the mode selection ``lam_n >= k^q``."""
    variant = Variant(variant)
    if variant is Variant.OVERDAMPED:
        return 1.0 / (1.0 - alpha)
    if variant is Variant.OSCILLATORY:
        return 1.0 / alpha
    return 2.0


def expected_exponent(variant: Variant, alpha: float) -> float:
    """Growth exponent of the lower bound: ``1/(1-alpha)`` pointwise, ``2/alpha``
    and ``4`` for the time-integrated variants."""
    variant = Variant(variant)
    if variant is Variant.OVERDAMPED:
        return 1.0 / (1.0 - alpha)
    return 2.0 * selection_power(variant, alpha)


def select_modes(spec: CounterexampleSpec, ks: np.ndarray) -> np.ndarray:
    """1-based ``n(k) = inf{m >= n0 active : lam_m >= k^q}``."""
    q = selection_power(spec.variant, spec.alpha)
    lam = spec.spectrum.log_eigenvalues
    act = np.flatnonzero(spec.active())
    targets = q * np.log(np.asarray(ks, dtype=float))
    pos = np.searchsorted(lam[act], targets * (1 - 1e-15) - 1e-15, side="left")
    if np.any(pos >= act.size):
        raise SpecError("spectrum too short: no mode reaches lam >= k^q for the largest k")
    return act[pos] + 1


def log_damped_cos2_integral(b: float, omega: float, t0: float, t1: float) -> float:
    """``log int_{t0}^{t1} e^{-b s} cos^2(omega s) ds`` in closed form."""
    if not t1 > t0:
        raise ValueError("need t1 > t0")
    span = t1 - t0
    # int e^{-bs} ds / 2 and the oscillating part, both scaled by e^{b t0}
    flat = -math.expm1(-b * span) / (2.0 * b) if b > 0 else span / 2.0
    den = 2.0 * (b * b + 4.0 * omega * omega)

    def g(s):
        return 2.0 * omega * math.sin(2.0 * omega * s) - b * math.cos(2.0 * omega * s)

    osc = (math.exp(-b * span) * g(t1) - g(t0)) / den if den > 0 else 0.0
    return -b * t0 + math.log(flat + osc)


def log_exp_integral(rate: float, t0: float, t1: float) -> float:
    """``log int_{t0}^{t1} e^{-2 rate s} ds``."""
    r = 2.0 * rate
    if r == 0:
        return math.log(t1 - t0)
    return -r * t0 + math.log(-math.expm1(-r * (t1 - t0)) / r)


@dataclass(frozen=True)
class LowerBound:
    fitted_exponent: float
    expected: float
    ks: np.ndarray
    modes: np.ndarray
    log_bound: np.ndarray
    valid_against_norm: bool

    def as_dict(self) -> dict:
        return {"fittedExponent": self.fitted_exponent, "expected": self.expected,
                "relativeError": abs(self.fitted_exponent - self.expected) / self.expected,
                "validAgainstPowerNorm": self.valid_against_norm,
                "kMin": float(self.ks[0]), "kMax": float(self.ks[-1])}


def lower_bound_check(spec: CounterexampleSpec, t: float, k_range: Sequence[float],
                      theta: Optional[float] = None, integrated: Optional[bool] = None,
                      cross_check_points: int = 3) -> LowerBound:
    """Single-mode lower bound along ``k`` and its fitted growth exponent.

    Pointwise (overdamped default): ``log(c_n lam_n^k e^{-mu_n t})``.
    Integrated (oscillatory and half defaults): ``log int_t^theta c_n^2
    lam_n^{2k} w_n(s)^2/c_n^2 ds`` with the exact antiderivative.
    The cross-check compares the single-mode value with ``|A^k u(s)|`` from
    the full solution at a few sampled ``(k, s)``.
    """
    if integrated is None:
        integrated = spec.variant is not Variant.OVERDAMPED
    if integrated:
        theta = 2.0 * t if theta is None else float(theta)
        if not theta > t:
            raise ValueError("integrated lower bound needs theta > t")
    ks = np.asarray(k_range, dtype=float)
    modes = select_modes(spec, ks)
    (u0, u1), _ = build_counterexample(spec)
    sp = spec.spectrum
    lam = sp.eigenvalues[modes - 1]
    loglam = sp.log_eigenvalues[modes - 1]
    sol = ModalSolution.build(lam, spec.damping.rate(lam), np.ones(lam.size), np.zeros(lam.size))
    logc = -spec.K * loglam
    if not integrated:
        bound = logc + ks * loglam - sol.decay * t
        expected = 1.0 / (1.0 - spec.alpha) if spec.variant is Variant.OVERDAMPED \
            else selection_power(spec.variant, spec.alpha)
    else:
        base = np.empty(ks.size)
        for i in range(ks.size):
            if sol.regime[i] == Regime.UNDERDAMPED:
                base[i] = log_damped_cos2_integral(sol.b[i], sol.omega[i], t, theta)
            else:
                base[i] = log_exp_integral(sol.decay[i], t, theta)
        bound = 2.0 * logc + 2.0 * ks * loglam + base
        expected = expected_exponent(spec.variant, spec.alpha)
    fitted = growth_exponent(ks, bound)

    # pointwise orthogonality cross-check at a few (k, s)
    full = modal_solution(u0, u1, spec.damping)
    picks = np.unique(np.linspace(0, ks.size - 1, max(1, cross_check_points)).astype(int))
    times = [t] if not integrated else list(np.linspace(t, theta, 3))
    ok = True
    for s in times:
        sw, lw, _, _ = full.log_values(s)
        ut = DiagonalVector.from_log(sp, sw, lw)
        norms = log_power_norms(ut, ks[picks])
        single = lw[modes[picks] - 1] + ks[picks] * loglam[picks]
        ok &= bool(np.all(single <= norms + 1e-12 * np.maximum(1.0, np.abs(norms))))
    return LowerBound(fitted, expected, ks, modes, bound, ok)
