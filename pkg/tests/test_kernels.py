"""numba and numpy kernels agree; trig sums match an mpmath oracle."""

from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gevrey_lab import kernels


def _random_coefs(seed, n, zeros=0.2):
    g = np.random.default_rng(seed)
    sign = g.choice(np.array([-1, 1], dtype=np.int8), n)
    sign[g.random(n) < zeros] = 0
    logmag = np.where(sign != 0, g.normal(0.0, 30.0, n), -np.inf)
    return sign, logmag


@given(st.integers(0, 2 ** 32), st.integers(1, 200))
def test_lse_affine_backends_agree(seed, n):
    g = np.random.default_rng(seed)
    base = np.sort(g.uniform(-5, 12, n))
    offset = g.normal(0, 40, n)
    offset[g.random(n) < 0.1] = -np.inf
    scale = np.linspace(0.0, 400.0, 17)
    a = kernels.lse_affine_nb(base, offset, scale)
    b = kernels.lse_affine_np(base, offset, scale)
    assert np.array_equal(np.isinf(a), np.isinf(b))
    fin = np.isfinite(a)
    assert np.allclose(a[fin], b[fin], rtol=1e-13, atol=1e-11)


@given(st.integers(0, 2 ** 32), st.integers(0, 300))
def test_signed_lse_backends_agree(seed, n):
    sign, logmag = _random_coefs(seed, n)
    sa, la, ta = kernels.signed_lse_nb(sign, logmag)
    sb, lb, tb = kernels.signed_lse_np(sign, logmag)
    assert sa == sb
    assert la == pytest.approx(lb, rel=1e-12, abs=1e-10) or (la == lb == -math.inf)
    assert ta == pytest.approx(tb, rel=1e-12, abs=1e-10) or (ta == tb == -math.inf)


@pytest.mark.parametrize("seed", range(4))
def test_trig_sums_backends_agree(seed):
    n = 400
    sign, logmag = _random_coefs(seed, n)
    index = np.arange(1, n + 1, dtype=np.int64)
    log_wave = np.log(index.astype(float))
    num = np.array([1, 3, 7, 123], dtype=np.int64)
    den = np.array([5, 10, 9, 1000], dtype=np.int64)
    ps = np.arange(0, 40, 3, dtype=np.int64)
    a = kernels.trig_sums_nb(sign, logmag, log_wave, index, num, den, ps)
    b = kernels.trig_sums_np(sign, logmag, log_wave, index, num, den, ps)
    assert np.array_equal(a[0], b[0])
    fin = np.isfinite(a[1])
    assert np.array_equal(fin, np.isfinite(b[1]))
    assert np.allclose(a[1][fin], b[1][fin], rtol=1e-9, atol=1e-9)
    assert np.allclose(a[2], b[2], rtol=1e-12)


def test_rk4_backends_agree():
    g = np.random.default_rng(5)
    lam = 10.0 ** g.uniform(-2, 3, 20)
    b = g.uniform(0.1, 4, 20) * lam ** 0.5
    u0, u1 = g.standard_normal((2, 20))
    a = kernels.rk4_modes_nb(lam, b, u0, u1, 1.0, 5000)
    c = kernels.rk4_modes_np(lam, b, u0, u1, 1.0, 5000)
    assert np.allclose(a[0], c[0], rtol=1e-12, atol=1e-14)
    assert np.allclose(a[1], c[1], rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize("p", [0, 1, 2, 3, 6, 11])
def test_trig_sums_match_mpmath(p):
    # sum_n c_n w_n^p d^p/dx^p sin(w_n x) at x = L num/den, w_n = n pi / L, L = pi
    g = np.random.default_rng(p)
    n = 25
    c = g.standard_normal(n) / np.arange(1, n + 1) ** 2
    sign = np.sign(c).astype(np.int8)
    logmag = np.log(np.abs(c))
    index = np.arange(1, n + 1, dtype=np.int64)
    log_wave = np.log(index.astype(float))
    num, den = 3, 7
    s, lm, _ = kernels.trig_sums(sign, logmag, log_wave, index,
                                 np.array([num], dtype=np.int64), np.array([den], dtype=np.int64),
                                 np.array([p], dtype=np.int64))
    mpmath.mp.dps = 40
    x = mpmath.pi * num / den
    ref = mpmath.fsum(mpmath.mpf(float(ci)) * mpmath.diff(lambda y, k=k: mpmath.sin(k * y), x, p)
                      for k, ci in zip(range(1, n + 1), c))
    got = int(s[0, 0]) * math.exp(lm[0, 0])
    assert got == pytest.approx(float(ref), rel=1e-11)


def test_phase_is_exact_at_large_index():
    # n = 10^6 + 1 at x = pi/2: sin(n pi / 2) = +1 exactly
    sign = np.array([1], dtype=np.int8)
    idx = np.array([1_000_001], dtype=np.int64)
    s, lm, tot = kernels.trig_sums(sign, np.zeros(1), np.zeros(1), idx,
                                   np.array([1], dtype=np.int64), np.array([2], dtype=np.int64),
                                   np.array([0], dtype=np.int64))
    assert s[0, 0] == 1 and lm[0, 0] == 0.0
