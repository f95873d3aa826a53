"""Reproducible random initial data.

All randomness goes through numpy's ``Philox`` bit generator, a 64-bit
counter-based generator (Philox-4x64, 10 rounds).  A trial is addressed by
``(seed, stream)``: the seed is the Philox key and the stream index is
placed in the high counter word, so trial ``i`` is the same whatever other
trials are drawn and in whatever order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import DiagonalVector, Spectrum


def rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Generator keyed by ``seed`` with an independent counter block per ``stream``."""
    if seed < 0 or stream < 0:
        raise ValueError("seed and stream must be nonnegative")
    counter = np.array([0, 0, 0, stream], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=seed & 0xFFFFFFFFFFFFFFFF, counter=counter))


@dataclass(frozen=True)
class DecayProfile:
    """Envelope of random coefficients.

    ``u0_n ~ N(0,1) (1 + lam_n)^{-(smoothness + 1)/2} n^{-power}`` and
    ``u1_n ~ N(0,1) (1 + lam_n)^{-smoothness/2} n^{-power}``.  Any
    ``power > 1/2`` gives finite ``V x H`` norm; ``smoothness = 1`` puts
    ``u0`` in ``D(A)`` and ``u1`` in ``V``.
    """

    power: float = 1.0
    smoothness: float = 0.0

    def envelopes(self, spectrum: Spectrum) -> tuple[np.ndarray, np.ndarray]:
        n = np.arange(1, spectrum.count + 1, dtype=float)
        log1p = np.log1p(spectrum.eigenvalues)
        base = -self.power * np.log(n)
        e0 = np.exp(base - 0.5 * (self.smoothness + 1.0) * log1p)
        e1 = np.exp(base - 0.5 * self.smoothness * log1p)
        return e0, e1


def random_state(spectrum: Spectrum, seed: int, stream: int = 0,
                 profile: DecayProfile = DecayProfile()) -> tuple[DiagonalVector, DiagonalVector]:
    """Random ``(u0, u1)`` in ``V x H`` with Gaussian coefficients."""
    g = rng(seed, stream)
    z = g.standard_normal((2, spectrum.count))
    e0, e1 = profile.envelopes(spectrum)
    return (DiagonalVector.from_real(spectrum, z[0] * e0),
            DiagonalVector.from_real(spectrum, z[1] * e1))
