"""``gevrey-lab`` command line.

    gevrey-lab <command> --config <path> [--out <dir>] [--threads n] [--seed u64]

Exit codes: 0 all checks pass, 1 a theorem check failed, 2 configuration or
validation error, 3 numerical guard (truncation, cancellation, quadrature).
Reports go to ``--out``; diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import __version__
from . import acceptance
from ._accel import set_threads
from .appendix import (
    diagonal_operator_inequality_check,
    multi_index_chain_check,
    scalar_power_inequality_check,
    two_component_step_check,
)
from .config import ConfigError, ExperimentConfig, load_config
from .data import DecayProfile, random_state, rng
from .errors import (
    CancellationWarning,
    DomainError,
    InsufficientData,
    NormalizationUndefined,
    NumericalGuard,
    QuadratureFailure,
    SpecError,
    SupportError,
)
from .gevrey import check_membership, fit_gevrey_order, modes_for, power_norm_curve
from .io import config_hash, write_csv, write_json, write_vector
from .spectral import DampingConfig, DiagonalVector, Spectrum, evolve, gevrey_order
from .verification import (
    CounterexampleSpec,
    build_counterexample,
    energy_identity_check,
    enorm_growth_check,
    integral_inequality_check,
    lower_bound_check,
    minimal_n0,
    smoothing_estimate_fit,
)
from .wave1d import WaveDomain, snapshot, spatial_derivative_curve, three_to_one_embedding

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_GUARD = 0, 1, 2, 3
DIAGONAL_STREAM = 7

_CONFIG_ERRORS = (ConfigError, SpecError, DomainError, SupportError, InsufficientData, NormalizationUndefined)
_GUARDS = (NumericalGuard, QuadratureFailure, CancellationWarning)


@dataclass
class Context:
    cfg: ExperimentConfig
    out: Path
    seed: int
    sha: str
    log: Callable[[str], None]
    summary: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# building blocks from the config
# ---------------------------------------------------------------------------

def build_damping(cfg: ExperimentConfig) -> DampingConfig:
    d = cfg.damping
    if d.symbol:
        return DampingConfig.generalized([(s.c, s.alpha) for s in d.symbol])
    return DampingConfig(d.alpha, d.c)


def build_spectrum(cfg: ExperimentConfig, damping: DampingConfig, k_max: float, t: float,
                   modes: Optional[int] = None, length: Optional[float] = None,
                   multiple: int = 1) -> Spectrum:
    """Spectrum from the config; with ``auto_modes`` the count is raised until
    the tail rule holds at power ``k_max`` and time ``t``."""
    s = cfg.spectrum
    if s.kind == "explicit" and length is None:
        return Spectrum.explicit(s.values)
    count = s.modes if modes is None else modes
    if length is not None or s.kind == "dirichlet_1d":
        make = lambda n: Spectrum.dirichlet_1d(s.length if length is None else length, n)  # noqa: E731
    else:
        make = lambda n: Spectrum.power_law(s.delta, s.epsilon, n)  # noqa: E731
    if s.auto_modes and t > 0:
        count = max(count, modes_for(make(1), k_max, t, damping))
    count = multiple * -(-count // multiple)
    return make(count)


def build_state(cfg: ExperimentConfig, sp: Spectrum, damping: DampingConfig, seed: int,
                stride: int = 1) -> tuple[tuple[DiagonalVector, DiagonalVector], Optional[CounterexampleSpec], dict]:
    d = cfg.data
    if d.kind == "random":
        if stride != 1:
            raise SpecError("embedding needs data supported on every stride-th mode; use counterexample data")
        return random_state(sp, seed, d.stream, DecayProfile(d.power, d.smoothness)), None, {}
    if d.kind == "explicit":
        if len(d.u0) != sp.count:
            raise SpecError(f"data.u0: {len(d.u0)} coefficients for {sp.count} modes")
        return (DiagonalVector.from_real(sp, d.u0), DiagonalVector.from_real(sp, d.u1)), None, {}
    if damping.symbol is not None:
        raise SpecError("counterexample data needs a single-term damping (no symbol)")
    stride = max(stride, d.stride)
    n0 = d.n0 if d.n0 is not None else minimal_n0(d.variant, sp, damping.alpha, damping.c)
    n0 = stride * -(-n0 // stride)
    spec = CounterexampleSpec(d.variant, d.K, n0, sp, damping.alpha, damping.c, stride)
    state, report = build_counterexample(spec)
    return state, spec, {"n0": n0, "summability": report.as_dict(), "summable": report.summable}


def _ks(cfg: ExperimentConfig) -> np.ndarray:
    f = cfg.fit
    ks = np.arange(f.k_min, f.k_max + 0.5 * f.k_step, f.k_step)
    return ks[ks <= f.k_max * (1 + 1e-12)]


def _smoothing_power(damping: DampingConfig, ms) -> float:
    """Largest power of ``A`` the smoothing estimate samples."""
    a = damping.alpha
    shift, step = (0.0, a) if a <= 0.5 else (a - 0.5, 1.0 - a)
    return shift + step * max(ms, default=0) + 0.5


def _target_sigma(cfg: ExperimentConfig, damping: DampingConfig) -> float:
    return cfg.fit.sigma if cfg.fit.sigma is not None else gevrey_order(damping.alpha)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_simulate(ctx: Context) -> int:
    """Columns of ``curve.csv``: t, k, logM with ``logM = log|A^k u(t)|``."""
    cfg = ctx.cfg
    damping = build_damping(cfg)
    ks = _ks(cfg)
    sp = build_spectrum(cfg, damping, float(ks.max()), max(cfg.times))
    state, _, extra = build_state(cfg, sp, damping, ctx.seed)
    rows = []
    for t in cfg.times:
        ut, _ = evolve(state, damping, t)
        curve = power_norm_curve(ut, ks, t, damping)
        rows += [(t, k, m) for k, m in zip(curve.ks, curve.log_norms)]
    write_csv(ctx.out / "curve.csv", ["t", "k", "logM"], rows, ctx.sha)
    write_vector(ctx.out / "state.csv", ut, ctx.sha)
    ctx.summary.update({"modes": sp.count, "times": list(cfg.times), "finalTime": cfg.times[-1], **extra})
    return EXIT_OK


def cmd_fit(ctx: Context) -> int:
    """``fit.json``: per time the fitted order and the membership check."""
    cfg = ctx.cfg
    damping = build_damping(cfg)
    ks = _ks(cfg)
    sp = build_spectrum(cfg, damping, float(ks.max()), max(cfg.times))
    state, _, extra = build_state(cfg, sp, damping, ctx.seed)
    sigma = _target_sigma(cfg, damping)
    fits, rows, ok = [], [], True
    for t in cfg.times:
        if not t > 0:
            raise SpecError("times: fitting needs t > 0")
        ut, _ = evolve(state, damping, t)
        curve = power_norm_curve(ut, ks, t, damping)
        fit = fit_gevrey_order(curve, (cfg.fit.k_min, cfg.fit.k_max), cfg.fit.model)
        mem = check_membership(curve, sigma, cfg.fit.trend_threshold)
        good = mem.is_consistent and fit.sigma_hat <= sigma + cfg.fit.tolerance
        ok &= good
        rows += [(t, k, m) for k, m in zip(curve.ks, curve.log_norms)]
        fits.append({"t": t, **fit.as_dict(), "membership": mem.as_dict(), "pass": good})
        ctx.log(f"t={t:g}: sigma_hat={fit.sigma_hat:.4f} (sigma={sigma:g}), trend={mem.trend:.3g}")
    write_csv(ctx.out / "curve.csv", ["t", "k", "logM"], rows, ctx.sha)
    ctx.summary.update({"modes": sp.count, "sigma": sigma, "tolerance": cfg.fit.tolerance,
                        "fits": fits, **extra})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_energy(ctx: Context) -> int:
    """``energy.csv``: t, phi, dphiFd, rhs, violation, lowerMargin, upperMargin."""
    cfg = ctx.cfg
    e = cfg.energy
    damping = build_damping(cfg)
    t_smooth = max(cfg.times)
    sp = build_spectrum(cfg, damping, _smoothing_power(damping, e.smoothing_m), t_smooth)
    state, _, extra = build_state(cfg, sp, damping, ctx.seed)
    rep = energy_identity_check(state, damping, e.t_grid, e.h)
    write_csv(ctx.out / "energy.csv",
              ["t", "phi", "dphiFd", "rhs", "violation", "lowerMargin", "upperMargin"], rep.rows(), ctx.sha)
    integral = integral_inequality_check(state, damping, e.integral_t)
    growth = enorm_growth_check(state, damping, e.growth_t_grid)
    out = {"modes": sp.count, "identity": rep.summary(), "tolerance": e.tolerance,
           "integralInequality": {"t": e.integral_t, "lhs": integral.lhs, "rhs": integral.rhs,
                                  "holds": integral.holds},
           "energyGrowthHolds": growth, **extra}
    if sp.eigenvalues[0] >= 1.0 and e.smoothing_m and t_smooth > 0:
        sm = smoothing_estimate_fit(state, damping, t_smooth, e.smoothing_m)
        out["smoothing"] = {"t": t_smooth, **sm.as_dict()}
    else:
        ctx.log("smoothing estimate skipped: needs lam_1 >= 1, a nonempty m list and t > 0")
    ok = rep.max_violation < e.tolerance and rep.sandwich_holds and integral.holds and growth
    ctx.log(f"max relative violation {rep.max_violation:.3g}; sandwich {rep.sandwich_holds}; "
            f"integral {integral.holds}; growth {growth}")
    ctx.summary.update(out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_counterexample(ctx: Context) -> int:
    """``lower_bound.csv``: k, mode, logBound; ``curve.csv`` as for ``fit``."""
    cfg = ctx.cfg
    if cfg.data.kind != "counterexample":
        raise SpecError("data.kind: the counterexample command needs counterexample data")
    lbs = cfg.lower_bound
    damping = build_damping(cfg)
    ks = np.arange(lbs.k_min, lbs.k_max + 0.5)
    ks = ks[ks <= lbs.k_max]
    sp = build_spectrum(cfg, damping, float(ks.max()), lbs.t)
    state, spec, extra = build_state(cfg, sp, damping, ctx.seed)
    lb = lower_bound_check(spec, lbs.t, ks, theta=lbs.theta, integrated=lbs.integrated)
    write_csv(ctx.out / "lower_bound.csv", ["k", "mode", "logBound"],
              zip(lb.ks, lb.modes, lb.log_bound), ctx.sha)
    ut, _ = evolve(state, damping, lbs.t)
    curve = power_norm_curve(ut, ks, lbs.t, damping)
    fit = fit_gevrey_order(curve, (lbs.k_min, lbs.k_max), cfg.fit.model)
    write_csv(ctx.out / "curve.csv", ["t", "k", "logM"], [(lbs.t, k, m) for k, m in
                                                           zip(curve.ks, curve.log_norms)], ctx.sha)
    rel = abs(lb.fitted_exponent - lb.expected) / lb.expected
    ok = rel <= lbs.tolerance and lb.valid_against_norm and extra["summable"]
    ctx.log(f"lower-bound exponent {lb.fitted_exponent:.4f} (expected {lb.expected:g}); "
            f"upper fit sigma_hat {fit.sigma_hat:.4f}")
    ctx.summary.update({"modes": sp.count, "variant": spec.variant.value, "lowerBound": lb.as_dict(),
                        "tolerance": lbs.tolerance, "upperFit": fit.as_dict(),
                        "sigma": gevrey_order(damping.alpha), **extra})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_wave(ctx: Context) -> int:
    """``snapshot.csv``: x, u.  ``derivatives.csv``: p, logSup, reliablePoints."""
    cfg = ctx.cfg
    w = cfg.wave
    damping = build_damping(cfg)
    t = max(cfg.times)
    if not t > 0:
        raise SpecError("times: the wave command needs t > 0")
    ps = np.arange(w.p_min, w.p_max + 1, w.p_step)
    factor = w.embed or 1
    big_len = w.length * factor
    sp = build_spectrum(cfg, damping, float(ps.max()) / 2.0, t, length=big_len, multiple=factor)
    state, _, extra = build_state(cfg, sp, damping, ctx.seed, stride=factor)
    ut, _ = evolve(state, damping, t)
    if factor > 1:
        ut = three_to_one_embedding(ut, factor)
    dom = WaveDomain(w.length, Fraction(str(w.window[0])), Fraction(str(w.window[1])))
    x, vals = snapshot(ut, dom, w.snapshot_points)
    write_csv(ctx.out / "snapshot.csv", ["x", "u"], zip(x, vals), ctx.sha)
    curve = spatial_derivative_curve(ut, dom, ps, dom.grid(w.grid_points), t)
    write_csv(ctx.out / "derivatives.csv", ["p", "logSup", "reliablePoints"],
              zip(curve.ps, curve.log_sup, curve.reliable_points), ctx.sha)
    fit = fit_gevrey_order(curve.as_power_curve(), (float(max(ps.min(), 2)), float(ps.max())), cfg.fit.model)
    bound = gevrey_order(damping.alpha) / 2.0
    ok = fit.sigma_hat <= bound + w.tolerance
    ctx.log(f"spatial order s_hat {fit.sigma_hat:.4f} (bound {bound:g})")
    ctx.summary.update({"modes": sp.count, "embed": factor, "window": list(dom.window), "t": t,
                        "fit": fit.as_dict(), "bound": bound, "tolerance": w.tolerance, **extra})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_appendix(ctx: Context) -> int:
    """``chain.csv``: parts, checked, allHold, worstRatio, worstLink."""
    a = ctx.cfg.appendix
    chain = [multi_index_chain_check(n, a.max_total) for n in range(1, a.max_parts + 1)]
    write_csv(ctx.out / "chain.csv", ["parts", "checked", "allHold", "worstRatio", "worstLink"],
              [(i + 1, r.checked, r.all_hold, r.worst_ratio, r.worst_link) for i, r in enumerate(chain)],
              ctx.sha)
    step = two_component_step_check(a.max_p)
    betas = np.linspace(0.0, 1.0, a.beta_points)
    hs = np.logspace(-10.0, 10.0, a.h_points, endpoint=False)
    scalar = scalar_power_inequality_check(betas, hs)
    g = rng(ctx.seed, DIAGONAL_STREAM)
    bad = 0
    for _ in range(a.diagonal_trials):
        m = int(g.integers(1, 21))
        lam = np.sort(10.0 ** g.uniform(-3.0, 3.0, m))
        v = DiagonalVector.from_real(Spectrum.explicit(lam), g.standard_normal(m))
        bad += not diagonal_operator_inequality_check(v, float(g.uniform(0.0, 1.0)))
    chain_ok = all(r.all_hold for r in chain)
    ok = chain_ok and step and scalar and bad == 0
    ctx.summary.update({"chain": [r.as_dict() for r in chain], "chainHolds": chain_ok,
                        "twoComponentHolds": step, "scalarHolds": scalar,
                        "diagonalTrials": a.diagonal_trials, "diagonalViolations": bad})
    ctx.log(f"chain {chain_ok}; two-component {step}; scalar {scalar}; diagonal violations {bad}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_suite(ctx: Context) -> int:
    """``suite.csv``: criterion, title, status, guard, message."""
    results = acceptance.run_all(ctx.seed, progress=lambda r: ctx.log(r.line()))
    write_csv(ctx.out / "suite.csv", ["criterion", "title", "status", "guard", "message"],
              [(r.number, r.title, r.status, r.guard, r.message) for r in results], ctx.sha)
    ctx.summary["criteria"] = [r.as_dict() for r in results]
    if all(r.passed for r in results):
        return EXIT_OK
    return EXIT_GUARD if any(r.guard for r in results) else EXIT_FAIL


COMMANDS: dict[str, Callable[[Context], int]] = {
    "simulate": cmd_simulate,
    "fit": cmd_fit,
    "energy": cmd_energy,
    "counterexample": cmd_counterexample,
    "wave": cmd_wave,
    "appendix": cmd_appendix,
    "suite": cmd_suite,
}
CONFIG_OPTIONAL = {"appendix", "suite"}


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("threads must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gevrey-lab",
                                description="Spectral laboratory for u'' + A u + c A^alpha u' = 0.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", type=Path, help="JSON experiment config (optional for appendix and suite)")
    p.add_argument("--out", type=Path, default=Path("gevrey-lab-out"), help="output directory")
    p.add_argument("--threads", type=_positive, default=1, help="numba threads (1 = reference)")
    p.add_argument("--seed", type=_u64, default=None, help="overrides the config seed")
    p.add_argument("-q", "--quiet", action="store_true", help="suppress progress on stderr")
    return p


def run(command: str, config: Optional[Path], out: Path, threads: int = 1, seed: Optional[int] = None,
        quiet: bool = False) -> int:
    log = (lambda msg: None) if quiet else (lambda msg: print(msg, file=sys.stderr))
    err = lambda msg: print(f"gevrey-lab {command}: {msg}", file=sys.stderr)  # noqa: E731
    if command not in COMMANDS:
        err(f"unknown command {command!r}")
        return EXIT_CONFIG
    if config is None and command not in CONFIG_OPTIONAL:
        err("--config is required for this command")
        return EXIT_CONFIG
    try:
        cfg, canonical = load_config(config)
    except ConfigError as exc:
        err(f"invalid config: {exc}")
        return EXIT_CONFIG
    seed = cfg.seed if seed is None else seed
    set_threads(threads)
    sha = config_hash({"command": command, "config": canonical, "seed": seed})
    ctx = Context(cfg, Path(out), seed, sha, log)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", CancellationWarning)
            code = COMMANDS[command](ctx)
    except _CONFIG_ERRORS as exc:
        err(f"{type(exc).__name__}: {exc}")
        return EXIT_CONFIG
    except _GUARDS as exc:
        err(f"numerical guard: {type(exc).__name__}: {exc}")
        code = EXIT_GUARD
        ctx.summary["guard"] = f"{type(exc).__name__}: {exc}"
    ctx.summary = {"command": command, "seed": seed, "exitCode": code, **ctx.summary}
    write_json(ctx.out / f"{command}.json", ctx.summary, sha)
    return code


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return run(args.command, args.config, args.out, args.threads, args.seed, args.quiet)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
