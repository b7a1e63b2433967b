import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import Chebyshev

from bettimc.chebyshev import (
    Polynomial,
    cbne_poly,
    chebyshev_coeffs,
    chebyshev_value,
    degree_for,
    norm_sandwich,
    qbne_poly,
    two_norm_sq,
)


def reference_filter(d, delta, reflected):
    """Independent evaluation via numpy's Chebyshev class."""
    s = 1 / (1 - delta)
    t = Chebyshev.basis(d)
    if reflected:
        return lambda x: t(np.asarray(x) * s) / t(s)
    return lambda x: t((1 - np.asarray(x)) * s) / t(s)


def test_t6_coefficients():
    assert chebyshev_coeffs(6).coeffs == (-1, 0, 18, 0, -48, 0, 32)
    assert chebyshev_coeffs(0).coeffs == (1,)
    assert chebyshev_coeffs(1).coeffs == (0, 1)


@pytest.mark.parametrize("d", range(0, 15))
def test_coefficients_match_numpy(d):
    expected = Chebyshev.basis(d).convert(kind=np.polynomial.Polynomial).coef
    np.testing.assert_allclose(chebyshev_coeffs(d).coeffs, expected, atol=0)


@settings(max_examples=60, deadline=None)
@given(d=st.integers(0, 12), x=st.floats(-3, 3))
def test_value_matches_coefficients(d, x):
    assert chebyshev_value(d, x) == pytest.approx(chebyshev_coeffs(d)(x), rel=1e-9, abs=1e-9)


def test_first_degree_filter():
    p = qbne_poly(1, 0.5)
    assert p.coeffs == pytest.approx((1.0, -1.0))


def test_qbne_degree_six_half_gap():
    p = qbne_poly(6, 0.5)
    assert p(0.0) == pytest.approx(1.0)
    grid = np.linspace(0.5, 1.0, 2001)
    assert np.max(np.abs(p(grid))) <= 1 / 1351 + 1e-12
    assert chebyshev_value(6, 2.0) == 1351
    assert two_norm_sq(p) == pytest.approx(1787.665442, rel=1e-8)


def test_cbne_degree_six_coefficients():
    p = cbne_poly(6, 0.5)
    expected = np.array([-1, 0, 18 * 4, 0, -48 * 16, 0, 32 * 64]) / 1351
    np.testing.assert_allclose(p.coeffs, expected, rtol=1e-12)
    assert p(1.0) == pytest.approx(1.0)
    assert p.nonzero_powers() == [2, 4, 6]


def test_cbne_degree_seven_norm():
    p = cbne_poly(7, 1 / 3)
    assert p.nonzero_powers() == [1, 3, 5, 7]
    assert two_norm_sq(qbne_poly(7, 1 / 3)) == pytest.approx(16014.30359, rel=1e-8)


@settings(max_examples=60, deadline=None)
@given(d=st.integers(1, 12), delta=st.floats(0.05, 0.95))
def test_filters_match_reference(d, delta):
    grid = np.linspace(0, 1, 41)
    q, c = qbne_poly(d, delta), cbne_poly(d, delta)
    np.testing.assert_allclose(q(grid), reference_filter(d, delta, False)(grid), atol=1e-9)
    np.testing.assert_allclose(c(grid), reference_filter(d, delta, True)(grid), atol=1e-9)
    assert q(0.0) == pytest.approx(1.0)
    assert c(1.0) == pytest.approx(1.0)
    bound = 1 / chebyshev_value(d, 1 / (1 - delta))
    # monomial coefficients reach ~1e4, so allow absolute cancellation error
    assert np.max(np.abs(q(np.linspace(delta, 1, 201)))) <= bound + 1e-9
    assert all(c[i] == 0 for i in range(d + 1) if (d - i) % 2)


def test_reflection_identity():
    for d, delta in [(6, 0.5), (7, 1 / 3)]:
        x = np.linspace(0, 1, 11)
        np.testing.assert_allclose(qbne_poly(d, delta)(x), cbne_poly(d, delta)(1 - x), atol=1e-10)


@pytest.mark.parametrize("eps,delta,method,expected", [
    (0.1, 0.5, "chebyshev", 6), (0.1, 1 / 3, "chebyshev", 7),
    (0.1, 0.5, "power", 6), (0.1, 1 / 3, "power", 9),
    (0.1, 0.125, "power", 24),
])
def test_degree_for(eps, delta, method, expected):
    assert degree_for(eps, delta, method) == expected


def test_degree_for_errors():
    with pytest.raises(ValueError):
        degree_for(0.1, 0.5, "other")
    with pytest.raises(ValueError):
        degree_for(1.5, 0.5, "power")
    with pytest.raises(ValueError):
        qbne_poly(0, 0.5)
    with pytest.raises(ValueError):
        cbne_poly(3, 1.0)


@pytest.mark.parametrize("delta,d", [(0.5, 6), (1 / 3, 7)])
def test_norm_sandwich(delta, d):
    lower, upper = norm_sandwich(d, delta, 0.1)
    assert lower <= two_norm_sq(qbne_poly(d, delta)) <= upper


@pytest.mark.parametrize("eps", [0.1, 0.05, 0.01])
@pytest.mark.parametrize("delta", [0.5, 1 / 3, 0.125])
def test_tail_below_epsilon_at_selected_degree(eps, delta):
    d = degree_for(eps, delta, "chebyshev")
    assert 1 / chebyshev_value(d, 1 / (1 - delta)) <= eps


def test_polynomial_trims_and_indexes():
    p = Polynomial((1.0, 2.0, 0.0, 0.0))
    assert p.degree == 1 and p[5] == 0.0 and p(2.0) == 5.0
    assert Polynomial(()).coeffs == (0.0,)
    assert math.isclose(float(np.sum(p(np.array([0.0, 1.0])))), 4.0)
