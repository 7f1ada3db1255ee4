"""Triangle-inequality bound surface F(xi, eta), the quartic profile
H(t, tau) = F(1, 1), and the piecewise bound on |a_2 a_4 - a_3^2|.

Two (Delta, c) pairs drive the case analysis:

* ``printed``: the formulas stated with the theorem, evaluated verbatim;
* ``derived``: read off from the exact expansion of H in tau, via
  H = a0 + (Delta tau^4 + 4 c tau^2) / (32 K), K = (1+b)^4 (1+2b)^2 (1+3b).

Candidate values are always evaluated with :func:`h_value`, never with a
closed form for H at the critical point.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial

from .class_coefficients import ClassParams
from .errors import DomainError

VARIANTS = ("printed", "derived")
CASES = ("i", "ii", "iii", "iv", "degenerate")

# Relative scale for deciding Delta or c is numerically zero.
DEGENERATE_RTOL = 1e-9
ODD_RESIDUE_TOL = 1e-12


@dataclass(frozen=True)
class FCoefficients:
    c1: float
    c2: float
    c3: float
    c4: float


@dataclass(frozen=True)
class QuarticProfile:
    """H(t, tau) = a0 + a2 tau^2 + a4 tau^4."""

    a0: float
    a2: float
    a4: float
    odd_residue: float = 0.0

    def __call__(self, tau):
        tau2 = np.asarray(tau, dtype=float) ** 2
        return self.a0 + self.a2 * tau2 + self.a4 * tau2**2


@dataclass(frozen=True)
class BoundBreakdown:
    variant: str
    delta: float
    c_coef: float
    case_id: str
    tau0: Optional[float]
    h_zero: float
    h_end: float
    h_tau0: Optional[float]
    bound: float
    annotation: str = ""

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> BoundBreakdown:
        return cls(**d)


def _check_tau(tau: float, open_interval: bool = False) -> None:
    ok = 0.0 < tau < 2.0 if open_interval else 0.0 <= tau <= 2.0
    if not ok:
        interval = "(0, 2)" if open_interval else "[0, 2]"
        raise DomainError("tau", f"must lie in {interval}, got {tau!r}")


def _endpoint_gap(params: ClassParams) -> float:
    """|(1+b)^3 U_3 - (1+3b) U_1^3|, the modulus that sets H at tau = 2."""
    b = params.beta
    return abs((1 + b) ** 3 * params.u3 - (1 + 3 * b) * params.u1**3)


def _f_coeffs(params: ClassParams, tau):
    """c1..c4 for scalar or array tau, no range checks."""
    b = params.beta
    u1, u2 = params.u1, params.u2
    tau = np.asarray(tau, dtype=float)
    s = 4 - tau**2
    pq = (1 + b) * (1 + 3 * b)
    c1 = u1**2 * s**2 / (64 * (1 + 2 * b) ** 2)
    c2 = u1**2 * tau * (tau - 2) * s / (32 * pq)
    c3 = u1**3 * tau**2 * s / (64 * (1 + b) ** 2 * (1 + 2 * b)) + u1 * u2 * tau**2 * s / (16 * pq)
    c4 = u1 * _endpoint_gap(params) * tau**4 / (16 * (1 + b) ** 4 * (1 + 3 * b)) + u1**2 * tau * s / (8 * pq)
    return c1, c2, c3, c4


def f_coefficients(params: ClassParams, tau: float) -> FCoefficients:
    _check_tau(tau)
    return FCoefficients(*(float(c) for c in _f_coeffs(params, tau)))


def _f_surface(coeffs, xi, eta):
    c1, c2, c3, c4 = coeffs
    return c1 * (xi + eta) ** 2 + c2 * (xi**2 + eta**2) + c3 * (xi + eta) + c4


def f_value(params: ClassParams, tau: float, xi: float, eta: float) -> float:
    """F(xi, eta) at the given tau."""
    _check_tau(tau)
    for name, v in (("xi", xi), ("eta", eta)):
        if not 0.0 <= v <= 1.0:
            raise DomainError(name, f"must lie in [0, 1], got {v!r}")
    return float(_f_surface(_f_coeffs(params, tau), xi, eta))


def hessian_discriminant(params: ClassParams, tau: float) -> float:
    """F_xx F_yy - F_xy^2 = 4 c2 (2 c1 + c2); constant on the square."""
    _check_tau(tau, open_interval=True)
    c1, c2, _, _ = _f_coeffs(params, tau)
    return float(4 * c2 * (2 * c1 + c2))


def _h(params: ClassParams, tau):
    c1, c2, c3, c4 = _f_coeffs(params, tau)
    return 4 * c1 + 2 * (c2 + c3) + c4


def h_value(params: ClassParams, tau: float) -> float:
    """H(t, tau) = 4 c1 + 2 (c2 + c3) + c4."""
    _check_tau(tau)
    return float(_h(params, tau))


def quartic_profile(params: ClassParams) -> QuarticProfile:
    """Expand H(t, tau) as a polynomial in tau.

    The odd powers cancel identically; a residue above 1e-12 (relative to
    the even coefficients) indicates a coefficient formula was mistyped.
    """
    b = params.beta
    u1, u2 = params.u1, params.u2
    tau = Polynomial([0.0, 1.0])
    s = 4 - tau**2
    pq = (1 + b) * (1 + 3 * b)
    c1 = u1**2 * s**2 / (64 * (1 + 2 * b) ** 2)
    c2 = u1**2 * tau * (tau - 2) * s / (32 * pq)
    c3 = u1**3 * tau**2 * s / (64 * (1 + b) ** 2 * (1 + 2 * b)) + u1 * u2 * tau**2 * s / (16 * pq)
    c4 = u1 * _endpoint_gap(params) * tau**4 / (16 * (1 + b) ** 4 * (1 + 3 * b)) + u1**2 * tau * s / (8 * pq)
    coef = np.zeros(5)
    h = (4 * c1 + 2 * (c2 + c3) + c4).coef
    coef[: len(h)] = h
    scale = 1.0 + abs(coef[0]) + abs(coef[2]) + abs(coef[4])
    odd = max(abs(coef[1]), abs(coef[3]))
    if odd > ODD_RESIDUE_TOL * scale:
        raise ArithmeticError(f"odd powers of tau fail to cancel in H: residue {odd:.3e}")
    return QuarticProfile(float(coef[0]), float(coef[2]), float(coef[4]), float(odd))


def delta_derived(params: ClassParams) -> float:
    return 32 * params.scale_k * quartic_profile(params).a4


def c_derived(params: ClassParams) -> float:
    return 8 * params.scale_k * quartic_profile(params).a2


def delta_printed(params: ClassParams) -> float:
    """Delta(beta, t) exactly as stated with the theorem."""
    b, t = params.beta, params.t
    return (
        16 * t**2 * abs((2 * t**2 - 1) * (1 + b) ** 3 - 2 * t**2 * (1 + 3 * b)) * (1 + 2 * b) ** 2
        - 8 * t * (t**2 - (4 * t**2 - 1) * (1 + b) * (1 + 2 * b)) * (1 + b) ** 2 * (1 + 2 * b) * (1 + 3 * b)
        - 8 * t**2 * (1 + b) ** 3 * b**2
    )


def c_printed(params: ClassParams) -> float:
    """c(beta, t) exactly as stated with the theorem."""
    b, t = params.beta, params.t
    return (
        8 * t * ((5 * t**2 - 1) * (1 + 3 * b) + 2 * (4 * t**2 - 1) * b**2) * (1 + b) ** 2 * (1 + 2 * b)
        - 8 * t**2 * ((1 + b) ** 2 + (2 + b) * b) * (1 + b) ** 3
    )


def delta_c(params: ClassParams, variant: str) -> tuple[float, float]:
    if variant == "printed":
        return delta_printed(params), c_printed(params)
    if variant == "derived":
        return delta_derived(params), c_derived(params)
    raise DomainError("variant", f"must be one of {VARIANTS}, got {variant!r}")


def h_tau0_printed(params: ClassParams, variant: str = "printed") -> float:
    """The closed form stated for H at the critical point: 4t^2/(1+2b)^2 - c^2/(4K)."""
    _, c = delta_c(params, variant)
    return 4 * params.t**2 / (1 + 2 * params.beta) ** 2 - c**2 / (4 * params.scale_k)


def h_tau0_corrected(params: ClassParams, variant: str = "derived") -> float:
    """H at tau0^2 = -2c/Delta for the quartic a0 + (Delta tau^4 + 4 c tau^2)/(32K)."""
    delta, c = delta_c(params, variant)
    return quartic_profile(params).a0 - c**2 / (8 * params.scale_k * delta)


def default_tolerance(delta: float, c_coef: float) -> float:
    return DEGENERATE_RTOL * (1.0 + max(abs(delta), abs(c_coef)))


def classify_case(delta: float, c_coef: float, tol: float = 0.0) -> str:
    """Sign pattern of (Delta, c): i (+,+), ii (+,-), iii (-,-), iv (-,+).

    Either magnitude at or below ``tol`` gives ``"degenerate"``.
    """
    if abs(delta) <= tol or abs(c_coef) <= tol:
        return "degenerate"
    if delta > 0:
        return "i" if c_coef > 0 else "ii"
    return "iv" if c_coef > 0 else "iii"


def theorem_bound(params: ClassParams, variant: str = "derived", tol: Optional[float] = None) -> BoundBreakdown:
    """Piecewise bound for one (Delta, c) variant.

    Case ii has no interior maximum, so it takes the larger endpoint.  When
    the critical point falls outside (0, 2) in case iv, or the case is
    degenerate, every available candidate is compared.
    """
    delta, c = delta_c(params, variant)
    if tol is None:
        tol = default_tolerance(delta, c)
    case = classify_case(delta, c, tol)
    h_zero = h_value(params, 0.0)
    h_end = h_value(params, 2.0)

    tau0 = h_tau0 = None
    if delta * c < 0:
        crit = math.sqrt(-2 * c / delta)
        if 0.0 < crit < 2.0:
            tau0 = crit
            h_tau0 = h_value(params, tau0)

    annotation = ""
    if case == "i":
        bound = h_end
    elif case == "ii":
        bound = max(h_zero, h_end)
    elif case == "iii":
        bound = h_zero
    elif case == "iv":
        if tau0 is None:
            annotation = "tau0-outside-interval"
            bound = max(h_zero, h_end)
        else:
            bound = max(h_tau0, h_end)
    else:
        candidates = [h_zero, h_end] + ([h_tau0] if h_tau0 is not None else [])
        bound = max(candidates)
    return BoundBreakdown(variant, delta, c, case, tau0, h_zero, h_end, h_tau0, bound, annotation)


def corollary_bound(params: ClassParams) -> float:
    """Stated special-case bound: 8t^2 at beta = 0, t^2 (1 - t^2) at beta = 1."""
    if params.beta == 0.0:
        return 8 * params.t**2
    if params.beta == 1.0:
        return params.t**2 * (1 - params.t**2)
    raise DomainError("beta", f"a stated special-case bound exists only for beta in {{0, 1}}, got {params.beta!r}")
