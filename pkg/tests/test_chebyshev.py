import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hankel_audit import DomainError, g_coefficients, t_poly, u_poly
from hankel_audit.chebyshev import in_class_range
from oracles import cheb_t, cheb_u

unit_t = st.floats(-1.0, 1.0, allow_nan=False)
degrees = st.integers(0, 12)


@pytest.mark.parametrize(
    "n, t, expected",
    [(1, 0.6, 1.2), (2, 0.6, 0.44), (3, 0.9, 2.232), (0, 0.3, 1.0)],
)
def test_u_poly_values(n, t, expected):
    assert u_poly(n, t) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("n", range(13))
def test_u_poly_at_one_is_n_plus_one(n):
    assert u_poly(n, 1.0) == n + 1


@pytest.mark.parametrize("n, t, expected", [(2, 0.5, -0.5), (0, 0.3, 1.0), (5, 1.0, 1.0), (7, 1.0, 1.0)])
def test_t_poly_values(n, t, expected):
    assert t_poly(n, t) == pytest.approx(expected, abs=1e-14)


def test_g_coefficients_examples():
    assert g_coefficients(0.75, 3) == pytest.approx([1, 1.5, 1.25, 0.375], abs=1e-15)
    assert g_coefficients(0.9, 2) == pytest.approx([1, 1.8, 2.24], abs=1e-15)
    assert g_coefficients(0.7, 1) == pytest.approx([1, 1.4])
    assert g_coefficients(0.7, 0) == [1.0]


@pytest.mark.parametrize("func", [u_poly, t_poly])
@pytest.mark.parametrize("t", [1.0000001, -1.5, math.nan])
def test_argument_out_of_range(func, t):
    with pytest.raises(DomainError) as exc:
        func(2, t)
    assert exc.value.param == "t"


def test_negative_degree_rejected():
    with pytest.raises(DomainError):
        u_poly(-1, 0.5)
    with pytest.raises(DomainError):
        t_poly(-2, 0.5)


@pytest.mark.parametrize("t", [0.5, 0.4, 1.0, 0.5 + 1e-10, -0.7])
def test_g_coefficients_class_range(t):
    with pytest.raises(DomainError):
        g_coefficients(t, 3)
    # exploration mode accepts any |t| <= 1
    assert g_coefficients(t, 3, allow_exterior=True)[1] == pytest.approx(2 * t)


def test_class_range_margin():
    assert in_class_range(0.5 + 2e-9)
    assert not in_class_range(0.5 + 5e-10)
    assert not in_class_range(1 - 5e-10)


@given(degrees, unit_t)
def test_u_matches_reference(n, t):
    assert u_poly(n, t) == pytest.approx(cheb_u(n, t), abs=1e-10)


@given(degrees, unit_t)
def test_t_matches_reference(n, t):
    assert t_poly(n, t) == pytest.approx(cheb_t(n, t), abs=1e-11)


@given(degrees, st.floats(1e-3, math.pi - 1e-3))
def test_trig_identities(n, alpha):
    t = math.cos(alpha)
    assert u_poly(n, t) * math.sin(alpha) == pytest.approx(math.sin((n + 1) * alpha), abs=1e-12)
    assert t_poly(n, t) == pytest.approx(math.cos(n * alpha), abs=1e-12)


@given(st.integers(1, 11), unit_t)
def test_u_recurrence(n, t):
    assert u_poly(n + 1, t) == pytest.approx(2 * t * u_poly(n, t) - u_poly(n - 1, t), abs=1e-12)


@given(st.floats(0.5001, 0.9999))
def test_generating_function(t):
    # (1 - 2tz + z^2) * G(t, z) = 1 + O(z^13)
    g = np.array(g_coefficients(t, 12))
    product = np.convolve(g, [1.0, -2 * t, 1.0])[:13]
    assert product[0] == 1.0
    assert np.max(np.abs(product[1:])) < 1e-12


@given(st.integers(1, 12), st.floats(0.5001, 0.9999))
def test_g_coefficients_are_u_values(order, t):
    assert g_coefficients(t, order) == [u_poly(n, t) for n in range(order + 1)]
