from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import gammaln

from gevrey_lab.errors import InsufficientData, TruncationError
from gevrey_lab.gevrey import (
    PowerNormCurve,
    check_membership,
    check_tail,
    elliptic_order_map,
    fit_gevrey_order,
    growth_exponent,
    interpolation_inequality_check,
    modes_for,
    peak_eigenvalue,
    power_grid_curve,
    power_norm_curve,
    rescale_order_under_power,
    required_modes,
)
from gevrey_lab.spectral import DampingConfig, DiagonalVector, Spectrum, evolve
from gevrey_lab.verification import CounterexampleSpec, build_counterexample, minimal_n0

KS = np.arange(20.0, 201.0)

# frozen mode counts for lam_n = n^2, k_max = 200, t = 1, c = 1
REQUIRED = {0.75: 1_280_000, 0.25: 5_120_000, 0.5: 1_600}


@pytest.fixture(scope="module")
def overdamped_curve():
    damping = DampingConfig(0.75, 1.0)
    sp = Spectrum.power_law(1.0, 2.0, REQUIRED[0.75])
    spec = CounterexampleSpec("overdamped", 1.5, minimal_n0("overdamped", sp, 0.75), sp, 0.75)
    state, _ = build_counterexample(spec)
    ut, _ = evolve(state, damping, 1.0)
    return ut, power_norm_curve(ut, KS, 1.0, damping)


@pytest.mark.parametrize("model", ["prefactor", "plain"])
def test_fit_recovers_synthetic_curve(model):
    curve = PowerNormCurve(1.0, KS, KS * math.log(2.0) + 1.5 * KS * np.log(KS))
    fit = fit_gevrey_order(curve, (20, 200), model)
    assert fit.sigma_hat == pytest.approx(1.5, abs=1e-10)
    assert fit.log_r_hat == pytest.approx(math.log(2.0), abs=1e-9)
    assert fit.residual < 1e-10
    assert fit.samples == 181


def test_fit_of_eigenvector_curve():
    lam = 49.0
    curve = PowerNormCurve(1.0, KS, KS * math.log(lam))
    fit = fit_gevrey_order(curve)
    assert fit.sigma_hat == pytest.approx(0.0, abs=1e-10)
    assert fit.log_r_hat == pytest.approx(math.log(lam), abs=1e-9)
    mem = check_membership(curve, 0.0)
    assert mem.is_consistent
    assert mem.log_r_required == pytest.approx(math.log(lam))


def test_fit_needs_five_samples():
    curve = PowerNormCurve(1.0, KS, KS)
    with pytest.raises(InsufficientData):
        fit_gevrey_order(curve, (20, 23))


def test_fit_rejects_unknown_model():
    with pytest.raises(ValueError):
        fit_gevrey_order(PowerNormCurve(1.0, KS, KS), model="cubic")


def test_curve_validation():
    with pytest.raises(ValueError):
        PowerNormCurve(1.0, [2.0, 1.0], [0.0, 0.0])
    with pytest.raises(ValueError):
        PowerNormCurve(1.0, [1.0, 2.0], [0.0, -np.inf])


@given(st.floats(0.1, 6.0), st.floats(-3.0, 3.0), st.floats(-5.0, 5.0), st.floats(-20.0, 20.0))
def test_prefactor_model_is_exact_on_its_family(sigma, log_r, p, q):
    logm = sigma * KS * np.log(KS) + log_r * KS + p * np.log(KS) + q
    fit = fit_gevrey_order(PowerNormCurve(1.0, KS, logm))
    assert fit.sigma_hat == pytest.approx(sigma, abs=1e-7)
    assert fit.prefactor_power == pytest.approx(p, abs=1e-4)


def test_growth_exponent_of_factorial_like_sequence():
    ks = np.arange(20.0, 201.0)
    assert growth_exponent(ks, 3.0 * gammaln(ks + 1)) == pytest.approx(3.0, abs=1e-3)


def test_peak_eigenvalue_and_mode_counts():
    for alpha, n in REQUIRED.items():
        assert required_modes((1.0, 2.0), 200.0, 1.0, DampingConfig(alpha, 1.0)) == n
    assert peak_eigenvalue(200.0, 1.0, DampingConfig(0.75)) == pytest.approx(800.0 ** 4)
    with pytest.raises(ValueError):
        peak_eigenvalue(1.0, 0.0, DampingConfig(0.5))


def test_required_modes_is_minimal():
    d = DampingConfig(0.6, 1.3)
    n = modes_for(Spectrum.power_law(2.0, 1.5, 1), 50.0, 0.7, d)
    check_tail(Spectrum.power_law(2.0, 1.5, n), d, 50.0, 0.7)
    with pytest.raises(TruncationError):
        check_tail(Spectrum.power_law(2.0, 1.5, n - 1), d, 50.0, 0.7)


def test_power_norm_curve_enforces_tail():
    sp = Spectrum.power_law(1.0, 2.0, 2048)
    v = DiagonalVector.from_real(sp, 1.0 / np.arange(1, 2049.0))
    with pytest.raises(TruncationError):
        power_norm_curve(v, KS, 1.0, DampingConfig(0.75))
    # no damping or no time: raw sampling, no guard
    assert len(power_norm_curve(v, KS)) == KS.size


def test_overdamped_data_membership(overdamped_curve):
    _, curve = overdamped_curve
    assert check_membership(curve, 4.0).is_consistent
    assert not check_membership(curve, 3.5).is_consistent


def test_overdamped_data_fit_and_half_grid(overdamped_curve):
    ut, curve = overdamped_curve
    fit = fit_gevrey_order(curve)
    assert abs(fit.sigma_hat - 4.0) <= 0.15
    half = fit_gevrey_order(power_grid_curve(ut, 0.5, KS, 1.0, DampingConfig(0.75)))
    assert abs(half.sigma_hat - rescale_order_under_power(fit, 0.5).sigma_hat) <= 0.1


def test_rescale_order_under_power():
    fit = fit_gevrey_order(PowerNormCurve(1.0, KS, 2.0 * KS * np.log(KS)))
    assert rescale_order_under_power(fit, 1.0).sigma_hat == pytest.approx(2.0)
    assert rescale_order_under_power(fit, 0.5).sigma_hat == pytest.approx(1.0)


@pytest.mark.parametrize("sigma, order, s", [(2.0, 2, 1.0), (4.0, 2, 2.0), (4.0, 4, 1.0), (2.5, 2, 1.25)])
def test_elliptic_order_map(sigma, order, s):
    assert elliptic_order_map(sigma, order) == pytest.approx(s)


def test_elliptic_order_map_rejects_odd_order():
    with pytest.raises(ValueError):
        elliptic_order_map(2.0, 3)


def test_interpolation_limits():
    sp = Spectrum.explicit([0.5, 3.0, 40.0])
    v = DiagonalVector.from_real(sp, [1.0, -2.0, 0.5])
    assert interpolation_inequality_check(v, 0.0)
    assert interpolation_inequality_check(v, 1.0)


@given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3), st.floats(-5, 5), st.floats(-5, 5))
def test_interpolation_two_mode_vectors(l1, l2, a, b):
    lam = sorted([l1, l2])
    if lam[0] == lam[1]:
        lam[1] *= 1.5
    v = DiagonalVector.from_real(Spectrum.explicit(lam), [a, b])
    assert interpolation_inequality_check(v, 0.3)
