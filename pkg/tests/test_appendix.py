from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gevrey_lab.appendix import (
    chain_logs,
    compositions,
    diagonal_operator_inequality,
    diagonal_operator_inequality_check,
    multi_index_chain_check,
    scalar_power_inequality_check,
    two_component_step_check,
)
from gevrey_lab.spectral import DiagonalVector, Spectrum


def test_chain_values_for_two_ones():
    logs = np.exp(chain_logs(np.array([[1, 1]]))[0])
    assert np.allclose(logs, [1.0, 1.0, 4.0, 16.0, (4.0 * math.e) ** 2], rtol=1e-14)
    assert (4.0 * math.e) ** 2 == pytest.approx(118.2, abs=0.05)


def test_composition_counts():
    assert compositions(2, 4).tolist() == [[1, 1], [1, 2], [1, 3], [2, 1], [2, 2], [3, 1]]
    assert [compositions(n, 16).shape[0] for n in range(1, 5)] == [16, 120, 560, 1820]
    assert compositions(5, 4).shape == (0, 5)


def test_chain_exhaustive_to_four_parts():
    results = [multi_index_chain_check(n, 16) for n in range(1, 5)]
    assert all(r.all_hold for r in results)
    assert sum(r.checked for r in results) == 2516
    # equality p! = p^p at p = (1, ..., 1) is the tightest link
    assert max(r.worst_ratio for r in results) == 0.0


def test_chain_budget_enforced():
    with pytest.raises(ValueError):
        multi_index_chain_check(7, 10)
    with pytest.raises(ValueError):
        multi_index_chain_check(2, 21)


def test_two_component_step():
    assert two_component_step_check(500)
    with pytest.raises(ValueError):
        two_component_step_check(501)


def test_scalar_power_inequality():
    assert scalar_power_inequality_check(np.linspace(0.0, 1.0, 1000), np.logspace(-10, 10, 1000))
    with pytest.raises(ValueError):
        scalar_power_inequality_check([1.5], [1.0])


def test_chain_link_order_is_strict_somewhere():
    # the links are not vacuous: p = (2, 3) has slack in every link
    logs = chain_logs(np.array([[2, 3]]))[0]
    assert np.all(np.diff(logs) > 0)


def test_diagonal_zero_vector():
    v = DiagonalVector.zeros(Spectrum.explicit([1.0, 2.0]))
    assert diagonal_operator_inequality_check(v, 0.5)


@given(st.lists(st.floats(-3, 3), min_size=1, max_size=20, unique=True),
       st.lists(st.floats(-10, 10), min_size=20, max_size=20), st.floats(0.0, 1.0))
def test_diagonal_inequality_property(log_lams, coefs, beta):
    lam = np.sort(10.0 ** np.array(log_lams))
    v = DiagonalVector.from_real(Spectrum.explicit(lam), coefs[:lam.size])
    res = diagonal_operator_inequality(v, beta)
    assert res.holds and res.interpolation_holds and res.young_holds
    assert res.direct_margin >= -1e-9
