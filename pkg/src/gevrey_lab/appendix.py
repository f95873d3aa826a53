"""Exhaustive checks of the multi-index factorial chain and of the scalar and
diagonal operator inequalities behind fractional-power bounds.

Everything is compared in log space: factorials through ``gammaln``, powers
as ``p log p``.  A slack of ``1e-12`` (relative to the larger side, and at
least absolute) absorbs rounding on the equality cases.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import gammaln, xlogy

from .spectral import DiagonalVector, log_power_norms

SLACK = 1e-12
MAX_PARTS = 6
MAX_TOTAL = 20
MAX_STEP_P = 500

CHAIN_LINKS = ("p! <= p^p", "p^p <= |p|^|p|", "|p|^|p| <= 4^((N-1)|p|) p^p",
               "4^((N-1)|p|) p^p <= (4^(N-1) e)^|p| p!")


def _excess(lhs, rhs):
    """``lhs - rhs`` with the rounding allowance removed; ``<= 0`` means holds."""
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    return lhs - rhs - SLACK * np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))


def compositions(parts: int, max_total: int) -> np.ndarray:
    """All ``p`` in ``(N*)^parts`` with ``|p| <= max_total``, one per row.

    Rows correspond to increasing cut points ``c_1 < ... < c_N`` in
    ``1..max_total`` with ``p_i = c_i - c_{i-1}``, so there are
    ``C(max_total, parts)`` of them.
    """
    cuts = np.array(list(itertools.combinations(range(1, max_total + 1), parts)), dtype=np.int64)
    if cuts.size == 0:
        return np.zeros((0, parts), dtype=np.int64)
    return np.diff(cuts, axis=1, prepend=0)


@dataclass(frozen=True)
class ChainResult:
    all_hold: bool
    worst_ratio: float
    checked: int
    worst_link: str
    worst_p: tuple[int, ...]

    def as_dict(self) -> dict:
        return {"allHold": self.all_hold, "worstRatio": self.worst_ratio, "checked": self.checked,
                "worstLink": self.worst_link, "worstP": list(self.worst_p)}


def chain_logs(p: np.ndarray) -> np.ndarray:
    """Log of each member of the chain, shape ``(rows, 5)``."""
    p = np.atleast_2d(p).astype(float)
    n = p.shape[1]
    tot = p.sum(axis=1)
    log_fact = gammaln(p + 1.0).sum(axis=1)
    log_pp = xlogy(p, p).sum(axis=1)
    log_tot = xlogy(tot, tot)
    four = (n - 1) * math.log(4.0) * tot
    return np.column_stack([log_fact, log_pp, log_tot, four + log_pp, four + tot + log_fact])


def multi_index_chain_check(parts: int, max_total: int) -> ChainResult:
    """Check every link of ``p! <= p^p <= |p|^|p| <= 4^{(N-1)|p|} p^p <= (4^{N-1} e)^{|p|} p!``.

    ``worst_ratio`` is the largest ``log(lhs) - log(rhs)`` over all tuples
    and links (no slack applied); it must be ``<= 0`` up to rounding.
    """
    if not 1 <= parts <= MAX_PARTS or not 1 <= max_total <= MAX_TOTAL:
        raise ValueError(f"budget: 1 <= N <= {MAX_PARTS}, 1 <= maxTotal <= {MAX_TOTAL}")
    p = compositions(parts, max_total)
    if p.shape[0] == 0:
        return ChainResult(True, -math.inf, 0, "", ())
    logs = chain_logs(p)
    diffs = logs[:, :-1] - logs[:, 1:]
    ok = _excess(logs[:, :-1], logs[:, 1:]) <= 0
    i, j = np.unravel_index(int(np.argmax(diffs)), diffs.shape)
    return ChainResult(bool(ok.all()), float(diffs[i, j]), int(p.shape[0]), CHAIN_LINKS[j],
                       tuple(int(x) for x in p[i]))


def two_component_step_check(max_p: int) -> bool:
    """``(p+q)^{p+q} <= 2^{2(p+q)} p^p q^q`` for all ``1 <= p, q <= max_p``."""
    if not 1 <= max_p <= MAX_STEP_P:
        raise ValueError(f"maxP must lie in 1..{MAX_STEP_P}")
    k = np.arange(1, max_p + 1, dtype=float)
    p, q = np.meshgrid(k, k, indexing="ij")
    s = p + q
    lhs = s * np.log(s)
    rhs = 2.0 * s * math.log(2.0) + p * np.log(p) + q * np.log(q)
    return bool(np.all(_excess(lhs, rhs) <= 0))


def scalar_power_inequality_check(beta_grid: Sequence[float], h_grid: Sequence[float]) -> bool:
    """``(1+h)^beta <= 1 + h^beta`` on the product grid."""
    beta = np.asarray(beta_grid, dtype=float)
    h = np.asarray(h_grid, dtype=float)
    if np.any((beta < 0) | (beta > 1)):
        raise ValueError("beta must lie in [0, 1]")
    if np.any(h <= 0):
        raise ValueError("h must be positive")
    lh = np.log(h)
    l1h = np.log1p(h)
    for b in beta:
        lhs = b * l1h
        rhs = np.logaddexp(0.0, b * lh)
        if np.any(lhs - rhs > SLACK):
            return False
    return True


@dataclass(frozen=True)
class DiagonalInequality:
    holds: bool
    direct_margin: float
    interpolation_holds: bool
    young_holds: bool


def diagonal_operator_inequality(v: DiagonalVector, beta: float) -> DiagonalInequality:
    """``|A^beta u|^2 <= |u|^2 + |Au|^2`` and the route through
    ``|Au|^{2 beta} |u|^{2(1-beta)}`` (interpolation, then Young)."""
    if not 0.0 <= beta <= 1.0:
        raise ValueError("beta must lie in [0, 1]")
    l0, lb, l1 = (2.0 * x for x in log_power_norms(v, [0.0, beta, 1.0]))
    if l0 == -math.inf:
        return DiagonalInequality(True, 0.0, True, True)
    bound = float(np.logaddexp(l0, l1))
    mid = beta * l1 + (1.0 - beta) * l0
    direct = float(_excess(lb, bound)) <= 0
    interp = float(_excess(lb, mid)) <= 0
    young = float(_excess(mid, bound)) <= 0
    return DiagonalInequality(bool(direct and interp and young), bound - lb, bool(interp), bool(young))


def diagonal_operator_inequality_check(v: DiagonalVector, beta: float) -> bool:
    return diagonal_operator_inequality(v, beta).holds
