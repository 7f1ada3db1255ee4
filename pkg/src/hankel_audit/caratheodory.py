"""Coefficient parametrization of the Caratheodory class and deterministic
sampling of admissible parameter tuples.

For real p_1 the classical formulas are

    2 p_2 = p_1^2 + (4 - p_1^2) x
    4 p_3 = p_1^3 + 2 (4 - p_1^2) p_1 x - (4 - p_1^2) p_1 x^2
            + 2 (4 - p_1^2) (1 - |x|^2) z

with |x| <= 1, |z| <= 1.  They only describe the coefficient body when p_1
is real.  For complex p_1 = tau * u (|u| = 1) we use the rotated form in
which every ``4 - p_1^2`` becomes ``(4 - tau^2) u^2``: this is the body of
p(u z) for the real-p_1 case, up to a unit-modulus reparametrization of z,
so |p_n| <= 2 keeps holding.  On the real axis, negative values included,
both forms agree exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# Slack for modulus checks on values produced by floating-point arithmetic.
MODULUS_TOL = 1e-12

# Uniform draws consumed per sample index; a multiple of 4 so each index
# starts on a fresh Philox block.
DRAWS_PER_INDEX = 12
# Number of leading indices pinned to p_1 on the real axis.
REAL_SWEEP = 64
N_FORCED = 2 + REAL_SWEEP

MODES = ("relaxation", "constrained")


def _unit(p1):
    p1 = np.asarray(p1, dtype=complex)
    # rescale by the larger component first so subnormal p1 cannot overflow
    m = np.maximum(np.abs(p1.real), np.abs(p1.imag))
    m = np.where(m > 0, m, 1.0)
    re, im = p1.real / m, p1.imag / m
    r = np.hypot(re, im)
    return np.where(r > 0, (re + 1j * im) / np.where(r > 0, r, 1.0), 1.0 + 0j)


def _p2(p1, x):
    p1 = np.asarray(p1, dtype=complex)
    u = _unit(p1)
    return (p1**2 + (4 - np.abs(p1) ** 2) * u**2 * x) / 2


def _p3(p1, x, z):
    p1 = np.asarray(p1, dtype=complex)
    x = np.asarray(x, dtype=complex)
    u = _unit(p1)
    k = (4 - np.abs(p1) ** 2) * u**2
    return (p1**3 + k * (2 * p1 * x - p1 * x**2 + 2 * (1 - np.abs(x) ** 2) * z)) / 4


def _check_modulus(name: str, value: complex, bound: float) -> None:
    if not abs(value) <= bound + MODULUS_TOL:
        raise DomainError(name, f"modulus must not exceed {bound}, got |{name}| = {abs(value)!r}")


def p2_from(p1: complex, x: complex) -> complex:
    """p_2 from p_1 and the free parameter x."""
    _check_modulus("p1", p1, 2.0)
    _check_modulus("x", x, 1.0)
    return complex(_p2(p1, x))


def p3_from(p1: complex, x: complex, z: complex) -> complex:
    """p_3 from p_1 and the free parameters x, z."""
    _check_modulus("p1", p1, 2.0)
    _check_modulus("x", x, 1.0)
    _check_modulus("z", z, 1.0)
    return complex(_p3(p1, x, z))


@dataclass(frozen=True)
class RelaxationPoint:
    """Free parameters (p1, x, y, z, w) of the coefficient relaxation.

    The q-side first coefficient is not stored; it is always -p1.
    """

    p1: complex
    x: complex
    y: complex
    z: complex
    w: complex

    def __post_init__(self):
        for name in ("p1", "x", "y", "z", "w"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        _check_modulus("p1", self.p1, 2.0)
        for name in ("x", "y", "z", "w"):
            _check_modulus(name, getattr(self, name), 1.0)

    @property
    def tau(self) -> float:
        return abs(self.p1)

    @property
    def xi(self) -> float:
        return abs(self.x)

    @property
    def eta(self) -> float:
        return abs(self.y)

    def p_coefficients(self) -> tuple[complex, complex, complex]:
        return self.p1, complex(_p2(self.p1, self.x)), complex(_p3(self.p1, self.x, self.z))

    def q_coefficients(self) -> tuple[complex, complex, complex]:
        return q_side(self)

    def to_dict(self) -> dict:
        return {k: [getattr(self, k).real, getattr(self, k).imag] for k in ("p1", "x", "y", "z", "w")}

    @classmethod
    def from_dict(cls, d: dict) -> RelaxationPoint:
        return cls(**{k: complex(*d[k]) for k in ("p1", "x", "y", "z", "w")})


def q_side(pt: RelaxationPoint) -> tuple[complex, complex, complex]:
    """(q1, q2, q3) with q1 = -p1 and (y, w) in the roles of (x, z)."""
    q1 = -pt.p1
    return q1, complex(_p2(q1, pt.y)), complex(_p3(q1, pt.y, pt.w))


@dataclass
class SampleBatch:
    """Column arrays for sample indices ``start .. start + len - 1``."""

    start: int
    p1: np.ndarray
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    w: np.ndarray

    def __len__(self) -> int:
        return len(self.p1)

    def point(self, i: int) -> RelaxationPoint:
        return RelaxationPoint(self.p1[i], self.x[i], self.y[i], self.z[i], self.w[i])

    def p_coefficients(self):
        return self.p1, _p2(self.p1, self.x), _p3(self.p1, self.x, self.z)

    def q_coefficients(self):
        q1 = -self.p1
        return q1, _p2(q1, self.y), _p3(q1, self.y, self.w)


def _draws(seed: int, start: int, count: int) -> np.ndarray:
    bitgen = np.random.Philox(key=seed & 0xFFFFFFFFFFFFFFFF)
    bitgen.advance(start * DRAWS_PER_INDEX // 4)
    return np.random.Generator(bitgen).random(count * DRAWS_PER_INDEX).reshape(count, DRAWS_PER_INDEX)


def _disk(radius, u_r, u_theta):
    return radius * np.sqrt(u_r) * np.exp(2j * np.pi * u_theta)


def sum_constraint_offset(params, tau):
    """Real value s(tau) with x + y = s forced by the a_3 sum equation.

    Adding the two a_3 equations of the subordination system (instead of
    subtracting them) ties p_2 + q_2 to p_1; under the parametrization this
    pins x + y.  Returns 0 where 4 - tau^2 vanishes.
    """
    u1, u2 = params.u1, params.u2
    c = (1 + 2 * params.beta) * u1**2 / (2 * (1 + params.beta) ** 2) - u2 / 2
    tau = np.asarray(tau, dtype=float)
    denom = u1 * (4 - tau**2)
    safe = np.where(denom > 0, denom, 1.0)
    return np.where(denom > 0, 4 * tau**2 * c / safe, 0.0)


def constrained_tau_max(params) -> float:
    """Largest |p_1| for which the sum constraint leaves |x|, |y| <= 1 feasible."""
    u1, u2 = params.u1, params.u2
    c = (1 + 2 * params.beta) * u1**2 / (2 * (1 + params.beta) ** 2) - u2 / 2
    return math.sqrt(4 * u1 / (u1 + 2 * abs(c)))


def sample_batch(start: int, count: int, seed: int, mode: str = "relaxation", params=None) -> SampleBatch:
    """Samples for indices start..start+count-1.

    Index i depends only on (seed, i), so batches can be produced in any
    order or in parallel and concatenated.
    """
    if mode not in MODES:
        raise DomainError("mode", f"unknown sampler mode {mode!r}")
    if mode == "constrained" and params is None:
        raise DomainError("params", "constrained sampling needs class parameters")
    if count < 0 or start < 0:
        raise DomainError("count", "sample ranges must be nonnegative")
    d = _draws(seed, start, count)
    idx = np.arange(start, start + count)
    radius = 2.0 if mode == "relaxation" else constrained_tau_max(params)

    p1 = _disk(radius, d[:, 0], d[:, 1])
    x = _disk(1.0, d[:, 2], d[:, 3])
    y = _disk(1.0, d[:, 4], d[:, 5])
    z = _disk(1.0, d[:, 6], d[:, 7])
    w = _disk(1.0, d[:, 8], d[:, 9])

    sweep = (idx >= 2) & (idx < N_FORCED)
    if sweep.any():
        grid = np.linspace(-radius, radius, REAL_SWEEP)
        p1[sweep] = grid[idx[sweep] - 2]
    p1[idx == 0] = radius
    first = idx == 1
    p1[first] = 0.0
    x[first] = 1.0
    y[first] = -1.0

    if mode == "constrained":
        s = sum_constraint_offset(params, np.abs(p1))
        rho = np.clip(1 - np.abs(s) / 2, 0.0, 1.0)
        x = np.where(first, 1.0 + 0j, s / 2 + rho * np.sqrt(d[:, 2]) * np.exp(2j * np.pi * d[:, 3]))
        y = s - x
    return SampleBatch(start, p1, x, y, z, w)


def sample(count: int, seed: int, mode: str = "relaxation", params=None) -> list[RelaxationPoint]:
    """``count`` reproducible relaxation points for ``seed``.

    Index 0 is the extreme point p1 = 2 (the largest admissible |p1| in
    constrained mode), index 1 is p1 = 0 with x = 1, y = -1, and the next
    64 indices sweep p1 along the real axis.  The rest are uniform on their
    disks.
    """
    if count < 1:
        raise DomainError("count", f"need at least one sample, got {count}")
    batch = sample_batch(0, count, seed, mode, params)
    return [batch.point(i) for i in range(count)]
