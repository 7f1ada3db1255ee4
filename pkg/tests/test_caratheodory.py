import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from hankel_audit import ClassParams, DomainError, RelaxationPoint, p2_from, p3_from, q_side, sample
from hankel_audit.caratheodory import (
    N_FORCED,
    REAL_SWEEP,
    constrained_tau_max,
    sample_batch,
    sum_constraint_offset,
)
from hankel_audit.class_coefficients import q_side_solve, solve_p_side, sum_constraint_residuals
from oracles import lemma_verbatim_p2, lemma_verbatim_p3


def disk(radius):
    return st.builds(
        lambda r, th: radius * math.sqrt(r) * cmath.exp(2j * math.pi * th),
        st.floats(0, 1),
        st.floats(0, 1),
    )


points = st.builds(RelaxationPoint, disk(2.0), disk(1.0), disk(1.0), disk(1.0), disk(1.0))


@pytest.mark.parametrize("p1, x, expected", [(2, 0.3 - 0.4j, 2), (0, 1j, 2j), (1, 1, 2)])
def test_p2_examples(p1, x, expected):
    assert p2_from(p1, x) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("p1, x, z, expected", [(0, 0, 1, 2), (2, 0.5j, -0.3, 2), (1, 1, 0.7j, 1)])
def test_p3_examples(p1, x, z, expected):
    assert p3_from(p1, x, z) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize(
    "call, param",
    [
        (lambda: p2_from(2.1, 0), "p1"),
        (lambda: p2_from(1, 1.01), "x"),
        (lambda: p3_from(1, 0.5, 1.2j), "z"),
        (lambda: RelaxationPoint(0, 0, 0, 0, 1.5), "w"),
        (lambda: RelaxationPoint(2.5j, 0, 0, 0, 0), "p1"),
    ],
)
def test_modulus_bounds_enforced(call, param):
    with pytest.raises(DomainError) as exc:
        call()
    assert exc.value.param == param


def test_q_side_examples():
    assert q_side(RelaxationPoint(2, 0.2, -0.5j, 0.1, 0.9)) == pytest.approx((-2, 2, -2), abs=1e-15)
    assert q_side(RelaxationPoint(0, 0.3, 0, 0.1, 0)) == (0, 0, 0)
    q1, q2, q3 = q_side(RelaxationPoint(0, 0, 1, 0, 0.4 - 0.6j))
    assert (q1, q2, q3) == pytest.approx((0, 2, 0), abs=1e-15)


def test_point_accessors_and_round_trip():
    pt = RelaxationPoint(1 - 1j, 0.6j, -0.8, 0.1 + 0.1j, 0)
    assert pt.tau == pytest.approx(math.sqrt(2))
    assert pt.xi == pytest.approx(0.6)
    assert pt.eta == pytest.approx(0.8)
    assert RelaxationPoint.from_dict(pt.to_dict()) == pt


@given(points)
def test_json_round_trip(pt):
    import json

    assert RelaxationPoint.from_dict(json.loads(json.dumps(pt.to_dict()))) == pt


@given(st.floats(-2, 2), disk(1.0), disk(1.0))
def test_real_axis_matches_printed_formulas(p1, x, z):
    pt = RelaxationPoint(p1, x, 0, z, 0)
    _, p2, p3 = pt.p_coefficients()
    assert p2 == pytest.approx(lemma_verbatim_p2(p1, x), abs=1e-13)
    assert p3 == pytest.approx(lemma_verbatim_p3(p1, x, z), abs=1e-13)


def test_verbatim_formula_breaks_for_complex_p1():
    # the literal (4 - p1^2) factor leaves the coefficient body off the real axis
    assert abs(lemma_verbatim_p2(1.9j, -1)) > 5
    assert abs(p2_from(1.9j, -1)) <= 2


@given(points)
def test_coefficient_moduli_at_most_two(pt):
    for c in pt.p_coefficients() + pt.q_coefficients():
        assert abs(c) <= 2 + 1e-12


@given(points, st.floats(0, 2 * math.pi))
def test_rotation_covariance(pt, theta):
    # at p1 = 0 the direction is a convention (u = 1), so covariance starts at p1 != 0
    assume(pt.tau > 1e-9)
    u = cmath.exp(1j * theta)
    rotated = RelaxationPoint(pt.p1 * u, pt.x, pt.y, pt.z * u, pt.w * u)
    for k, (a, b) in enumerate(zip(rotated.p_coefficients(), pt.p_coefficients()), start=1):
        assert a == pytest.approx(b * u**k, abs=1e-12)
    for k, (a, b) in enumerate(zip(rotated.q_coefficients(), pt.q_coefficients()), start=1):
        assert a == pytest.approx(b * u**k, abs=1e-12)


def test_sample_is_deterministic():
    a = sample(1, seed=11)
    b = sample(1, seed=11)
    assert a == b
    assert sample(500, 3) == sample(500, 3)
    assert sample(500, 3) != sample(500, 4)


def test_sample_forced_points():
    pts = sample(N_FORCED + 5, seed=0)
    assert pts[0].p1 == 2
    assert (pts[1].p1, pts[1].x, pts[1].y) == (0, 1, -1)
    sweep = [pt.p1 for pt in pts[2:N_FORCED]]
    assert all(v.imag == 0 for v in sweep)
    assert np.allclose([v.real for v in sweep], np.linspace(-2, 2, REAL_SWEEP))


def test_sample_invariants_10k():
    batch = sample_batch(0, 10_000, seed=5)
    assert np.all(np.abs(batch.p1) <= 2)
    for arr in (batch.x, batch.y, batch.z, batch.w):
        assert np.all(np.abs(arr) <= 1)
    for c in batch.p_coefficients() + batch.q_coefficients():
        assert np.max(np.abs(c)) <= 2 + 1e-12


@given(st.integers(0, 5000), st.integers(1, 300), st.integers(0, 2**63))
def test_batches_are_keyed_by_index(start, count, seed):
    whole = sample_batch(0, start + count, seed)
    part = sample_batch(start, count, seed)
    for name in ("p1", "x", "y", "z", "w"):
        assert np.array_equal(getattr(whole, name)[start:], getattr(part, name))


def test_sampler_errors():
    with pytest.raises(DomainError):
        sample(0, 1)
    with pytest.raises(DomainError):
        sample_batch(0, 10, 1, mode="bogus")
    with pytest.raises(DomainError):
        sample_batch(0, 10, 1, mode="constrained")


@pytest.mark.parametrize("beta, t", [(0.0, 0.75), (0.5, 0.6), (1.0, 0.9), (0.2, 0.97)])
def test_constrained_mode_satisfies_sum_constraint(beta, t):
    params = ClassParams(beta, t)
    batch = sample_batch(0, 4000, 9, mode="constrained", params=params)
    assert np.max(np.abs(batch.p1)) <= constrained_tau_max(params) + 1e-15
    for arr in (batch.x, batch.y):
        assert np.max(np.abs(arr)) <= 1 + 1e-12
    p1, p2, p3 = batch.p_coefficients()
    _, q2, q3 = batch.q_coefficients()
    r3, _ = sum_constraint_residuals(params, p1, p2, p3, q2, q3)
    assert np.max(np.abs(r3)) < 1e-12
    # the inverse-side solve then lands on the sampled q_2
    for i in range(0, 4000, 97):
        q = q_side_solve(params, solve_p_side(params, p1[i], p2[i], p3[i]))
        assert q[0] == pytest.approx(-p1[i], abs=1e-12)
        assert q[1] == pytest.approx(q2[i], abs=1e-11)


def test_relaxation_mode_violates_sum_constraint():
    params = ClassParams(0.5, 0.7)
    batch = sample_batch(0, 1000, 9)
    p1, p2, p3 = batch.p_coefficients()
    _, q2, q3 = batch.q_coefficients()
    r3, _ = sum_constraint_residuals(params, p1, p2, p3, q2, q3)
    assert np.max(np.abs(r3)) > 0.1


def test_sum_constraint_offset_edges():
    params = ClassParams(0.5, 0.7)
    assert sum_constraint_offset(params, 0.0) == 0.0
    assert sum_constraint_offset(params, 2.0) == 0.0
    # at the largest feasible |p1| the offset reaches |x + y| = 2
    tmax = constrained_tau_max(params)
    assert abs(sum_constraint_offset(params, tmax)) == pytest.approx(2.0, abs=1e-12)
