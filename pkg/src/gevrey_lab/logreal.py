"""Signed log-magnitude reals.

A :class:`LogReal` stores ``x`` as ``(sign(x), log|x|)``.  Products and
powers become additions and scalings of ``logmag``, so quantities such as
``lambda**k * exp(-mu*t)`` with ``k`` in the hundreds stay representable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import kernels
from .errors import DomainError

#: A signed sum is flagged when |sum| / sum|terms| drops below this ratio.
CANCELLATION_RATIO = 1e-12
LOG_CANCELLATION_RATIO = math.log(CANCELLATION_RATIO)


@dataclass(frozen=True)
class LogReal:
    sign: int
    logmag: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign!r}")
        if (self.sign == 0) != (self.logmag == -math.inf):
            raise ValueError("sign == 0 exactly when logmag == -inf")
        if math.isnan(self.logmag) or self.logmag == math.inf:
            raise ValueError(f"logmag must be finite or -inf, got {self.logmag!r}")

    @classmethod
    def zero(cls) -> LogReal:
        return cls(0, -math.inf)

    @classmethod
    def one(cls) -> LogReal:
        return cls(1, 0.0)

    @classmethod
    def from_real(cls, x: float) -> LogReal:
        x = float(x)
        if x == 0.0:
            return cls.zero()
        if not math.isfinite(x):
            raise DomainError(f"cannot represent {x!r}")
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def from_log(cls, logmag: float, sign: int = 1) -> LogReal:
        if logmag == -math.inf:
            return cls.zero()
        return cls(sign, float(logmag))

    def to_real(self) -> float:
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.logmag)
        except OverflowError:
            return self.sign * math.inf

    def __mul__(self, other: LogReal) -> LogReal:
        return mul(self, other)

    def __neg__(self) -> LogReal:
        return LogReal(-self.sign, self.logmag)

    def __abs__(self) -> LogReal:
        return LogReal(abs(self.sign), self.logmag)

    def __float__(self) -> float:
        return self.to_real()


def mul(a: LogReal, b: LogReal) -> LogReal:
    if a.sign == 0 or b.sign == 0:
        return LogReal.zero()
    return LogReal(a.sign * b.sign, a.logmag + b.logmag)


def pow_scaled(base: LogReal, exponent: float) -> LogReal:
    """``base ** exponent`` for a strictly positive base."""
    if base.sign != 1:
        raise DomainError("pow_scaled needs a strictly positive base")
    return LogReal(1, base.logmag * float(exponent))


def signed_log_sum_exp(terms: Iterable[LogReal]) -> tuple[LogReal, bool]:
    """Sum a sequence of :class:`LogReal` values.

    Positive and negative terms are accumulated separately with a common
    max shift and combined by one stable difference.  Returns the sum and a
    cancellation flag that is set when ``|sum| / sum|terms| < 1e-12``; the
    flagged value should not be trusted beyond its sign-free order of
    magnitude.
    """
    terms = list(terms)
    if not terms:
        return LogReal.zero(), False
    sign = np.fromiter((t.sign for t in terms), dtype=np.int8, count=len(terms))
    logmag = np.fromiter((t.logmag for t in terms), dtype=float, count=len(terms))
    return signed_log_sum_exp_arrays(sign, logmag)


def signed_log_sum_exp_arrays(sign: np.ndarray, logmag: np.ndarray) -> tuple[LogReal, bool]:
    s, lm, total = kernels.signed_lse(np.ascontiguousarray(sign, dtype=np.int8),
                                      np.ascontiguousarray(logmag, dtype=float))
    value = LogReal.from_log(lm, int(s))
    return value, cancelled(lm, total)


def cancelled(logmag: float, log_total: float) -> bool:
    """True when a sum of log-magnitude ``logmag`` lost too much to cancellation."""
    if log_total == -math.inf:
        return False
    return logmag - log_total < LOG_CANCELLATION_RATIO


def log_add(a: float, b: float) -> float:
    """``log(exp(a) + exp(b))`` tolerant of ``-inf``."""
    return float(np.logaddexp(a, b))
