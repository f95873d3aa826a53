from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from gevrey_lab.data import random_state
from gevrey_lab.errors import CancellationError, CancellationWarning, SupportError
from gevrey_lab.gevrey import fit_gevrey_order, modes_for, power_norm_curve
from gevrey_lab.spectral import DampingConfig, DiagonalVector, Spectrum, evolve, log_power_norms
from gevrey_lab.verification import CounterexampleSpec, build_counterexample
from gevrey_lab.wave1d import (
    WaveDomain,
    as_fraction,
    derivative_table,
    reconstruct,
    snapshot,
    spatial_derivative_curve,
    spatial_gevrey_fit,
    three_to_one_embedding,
)

PS = np.arange(20, 201, 2)


def test_first_eigenfunction_at_midpoint():
    dom = WaveDomain(2.0)
    e1 = DiagonalVector.basis(dom.spectrum(4), 1)
    assert reconstruct(e1, dom, 1.0).to_real() == pytest.approx(1.0, rel=1e-15)
    assert reconstruct(e1, dom, 1.0, 2).to_real() == pytest.approx(-(math.pi / 2.0) ** 2, rel=1e-14)


def test_odd_derivative_uses_cosine():
    dom = WaveDomain(math.pi)
    e2 = DiagonalVector.basis(dom.spectrum(3), 2)
    x = Fraction(1, 8)
    val = reconstruct(e2, dom, x, 1).to_real()
    assert val == pytest.approx(math.sqrt(2 / math.pi) * 2 * math.cos(2 * math.pi / 8), rel=1e-14)


def test_exact_cancellation_warns():
    dom = WaveDomain(math.pi)
    u = DiagonalVector.from_real(dom.spectrum(3), [1.0, 0.0, 1.0])
    with pytest.warns(CancellationWarning):
        v = reconstruct(u, dom, Fraction(1, 2))
    assert v.sign == 0


def test_positions_must_be_interior():
    dom = WaveDomain(math.pi)
    with pytest.raises(ValueError):
        derivative_table(DiagonalVector.basis(dom.spectrum(2), 1), dom, [0.0], [0])


def test_domain_window_validation():
    with pytest.raises(ValueError):
        WaveDomain(math.pi, Fraction(3, 5), Fraction(1, 5))
    dom = WaveDomain.with_window(math.pi, 0.2 * math.pi, 0.8 * math.pi)
    assert (dom.a, dom.b) == (Fraction(1, 5), Fraction(4, 5))
    assert as_fraction(Fraction(1, 3), 5.0) == Fraction(1, 3)


def test_spectrum_mismatch_rejected():
    dom = WaveDomain(math.pi)
    v = DiagonalVector.basis(Spectrum.power_law(1.0, 2.0, 4), 1)
    with pytest.raises(ValueError):
        derivative_table(v, dom, [0.5], [0])


def test_snapshot_matches_sine_series():
    dom = WaveDomain(math.pi)
    c = np.array([1.0, -0.5, 0.25])
    x, u = snapshot(DiagonalVector.from_real(dom.spectrum(3), c), dom, 9)
    ref = math.sqrt(2 / math.pi) * sum(ci * np.sin((i + 1) * x) for i, ci in enumerate(c))
    assert np.allclose(u, ref, rtol=1e-13, atol=1e-15)


def test_single_mode_embedding():
    big = WaveDomain(3.0 * math.pi)
    v = DiagonalVector.basis(big.spectrum(6), 3)
    e = three_to_one_embedding(v)
    assert e.spectrum.count == 2
    assert e.spectrum.eigenvalues[0] == pytest.approx(1.0, rel=1e-15)
    assert e.to_real().tolist() == [1.0, 0.0]
    with pytest.raises(SupportError):
        three_to_one_embedding(DiagonalVector.basis(big.spectrum(6), 2))


def test_embedding_reproduces_power_curves():
    big = WaveDomain(3.0 * math.pi)
    sp = big.spectrum(3000)
    spec = CounterexampleSpec("overdamped", 1.5, 15, sp, 0.75, stride=3)
    (u0, _), _ = build_counterexample(spec)
    e = three_to_one_embedding(u0)
    ks = np.arange(0.0, 10.0)
    assert np.allclose(log_power_norms(e, ks), log_power_norms(u0, ks), rtol=1e-13, atol=1e-12)


@pytest.fixture(scope="module")
def analytic_state():
    dom = WaveDomain(math.pi)
    damping = DampingConfig(0.5, 1.0)
    sp = dom.spectrum(max(2048, modes_for(dom.spectrum(1), 100.0, 1.0, damping)))
    ut, _ = evolve(random_state(sp, 42, 700), damping, 1.0)
    return dom, damping, ut


def test_half_damping_is_analytic_inside(analytic_state):
    dom, damping, ut = analytic_state
    fit = spatial_gevrey_fit(ut, dom, 1.0, PS, damping=damping)
    assert fit.sigma_hat <= 1.1


def test_spatial_fit_is_half_the_power_fit(analytic_state):
    dom, damping, ut = analytic_state
    s_hat = spatial_gevrey_fit(ut, dom, 1.0, PS, damping=damping).sigma_hat
    sigma_hat = fit_gevrey_order(power_norm_curve(ut, np.arange(20.0, 101.0), 1.0, damping), (20, 100)).sigma_hat
    assert abs(s_hat - sigma_hat / 2.0) <= 0.15


def test_curve_raises_when_every_point_cancels():
    dom = WaveDomain(math.pi)
    # sin x + sin 3x vanishes at x = pi/2
    u = DiagonalVector.from_real(dom.spectrum(3), [1.0, 0.0, 1.0])
    with pytest.raises(CancellationError):
        spatial_derivative_curve(u, dom, [0], [Fraction(1, 2)])


def test_curve_skips_unreliable_points():
    dom = WaveDomain(math.pi)
    u = DiagonalVector.from_real(dom.spectrum(3), [1.0, 0.0, 1.0])
    c = spatial_derivative_curve(u, dom, [0], [Fraction(1, 2), Fraction(1, 4)])
    assert c.reliable_points.tolist() == [1]
    assert c.log_sup[0] == pytest.approx(math.log(math.sqrt(2 / math.pi) * 2 * math.sin(math.pi / 4)))
