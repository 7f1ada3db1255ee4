"""Initial coefficients of functions in the class.

The ground truth is the six-equation system obtained by matching
coefficients in

    (1 - beta) f(z)/z + beta f'(z) = G(t, omega(z))
    (1 - beta) g(w)/w + beta g'(w) = G(t, varpi(w)),   g = f^{-1},

together with the Caratheodory parametrization.  The closed forms derived
from that system are evaluated here as well, both in corrected form and,
for a_4, exactly as originally printed so the two can be compared.

Functions taking coefficient values accept scalars or numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .chebyshev import in_class_range, u_poly
from .errors import DomainError
from .power_series import TruncatedSeries


@dataclass(frozen=True)
class ClassParams:
    beta: float
    t: float
    allow_exterior: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "t", float(self.t))
        if not 0.0 <= self.beta <= 1.0:
            raise DomainError("beta", f"must lie in [0, 1], got {self.beta!r}")
        if self.allow_exterior:
            if not -1.0 <= self.t <= 1.0:
                raise DomainError("t", f"must lie in [-1, 1] even in exploration mode, got {self.t!r}")
        elif not in_class_range(self.t):
            raise DomainError("t", f"must lie in (1/2, 1), got {self.t!r}")

    @property
    def u1(self) -> float:
        return u_poly(1, self.t)

    @property
    def u2(self) -> float:
        return u_poly(2, self.t)

    @property
    def u3(self) -> float:
        return u_poly(3, self.t)

    @property
    def scale_k(self) -> float:
        """(1+b)^4 (1+2b)^2 (1+3b), the common denominator of the quartic profile."""
        b = self.beta
        return (1 + b) ** 4 * (1 + 2 * b) ** 2 * (1 + 3 * b)


@dataclass(frozen=True)
class CoefficientTriple:
    a2: complex
    a3: complex
    a4: complex


def _rhs(params: ClassParams, c1, c2, c3):
    """Right-hand sides of the coefficient equations for a Caratheodory triple."""
    u1, u2, u3 = params.u1, params.u2, params.u3
    r1 = u1 / 2 * c1
    r2 = u1 / 2 * (c2 - c1**2 / 2) + u2 / 4 * c1**2
    r3 = u1 / 2 * (c3 - c1 * c2 + c1**3 / 4) + u2 / 2 * c1 * (c2 - c1**2 / 2) + u3 / 8 * c1**3
    return r1, r2, r3


def solve_p_side(params: ClassParams, p1, p2, p3) -> CoefficientTriple:
    """a_2, a_3, a_4 from the three equations for f alone."""
    b = params.beta
    r1, r2, r3 = _rhs(params, p1, p2, p3)
    return CoefficientTriple(r1 / (1 + b), r2 / (1 + 2 * b), r3 / (1 + 3 * b))


def q_side_solve(params: ClassParams, triple: CoefficientTriple):
    """The (q1, q2, q3) that make the inverse-function equations hold for ``triple``."""
    b = params.beta
    u1, u2, u3 = params.u1, params.u2, params.u3
    a2, a3, a4 = triple.a2, triple.a3, triple.a4
    q1 = -2 * (1 + b) * a2 / u1
    q2 = 2 / u1 * ((1 + 2 * b) * (2 * a2**2 - a3) - u2 / 4 * q1**2) + q1**2 / 2
    rhs3 = -(1 + 3 * b) * (5 * a2**3 - 5 * a2 * a3 + a4)
    q3 = 2 / u1 * (rhs3 - u2 / 2 * q1 * (q2 - q1**2 / 2) - u3 / 8 * q1**3) + q1 * q2 - q1**3 / 4
    return q1, q2, q3


def a2_closed(params: ClassParams, p1):
    return params.u1 * p1 / (2 * (1 + params.beta))


def a3_closed(params: ClassParams, p1, p2, q2):
    """a_3 = a_2^2 + U_1 (p_2 - q_2) / (4 (1 + 2 beta))."""
    a2 = a2_closed(params, p1)
    return a2**2 + params.u1 * (p2 - q2) / (4 * (1 + 2 * params.beta))


def a4_closed(params: ClassParams, p1, p2, p3, q2, q3):
    """a_4 by eliminating the inverse-function terms, with q_1 = -p_1.

    Subtracting the two a_4 equations gives
    a_4 = (R_p - R_q) / (2 (1 + 3 beta)) + (5/2) a_2 (a_3 - a_2^2).
    """
    b = params.beta
    _, _, rp = _rhs(params, p1, p2, p3)
    _, _, rq = _rhs(params, -p1, q2, q3)
    a2 = a2_closed(params, p1)
    a3 = a3_closed(params, p1, p2, q2)
    return (rp - rq) / (2 * (1 + 3 * b)) + 2.5 * a2 * (a3 - a2**2)


# Term names of the four-term a_4 closed form, in printed order.
A4_TERMS = ("p1*(p2-q2)", "(p3-q3)", "(p2+q2)", "p1^3")


def a4_terms(params: ClassParams, p1, p2, p3, q2, q3, variant: str = "derived"):
    """The four summands of the a_4 closed form.

    ``variant="printed"`` reproduces the originally printed expression,
    which has 6 instead of 16 in the first denominator and lacks the p_1
    factor in the third term.
    """
    b = params.beta
    u1, u2, u3 = params.u1, params.u2, params.u3
    if variant == "derived":
        first = 5 * u1**2 * p1 * (p2 - q2) / (16 * (1 + b) * (1 + 2 * b))
        third = (u2 - u1) * p1 * (p2 + q2) / (4 * (1 + 3 * b))
    elif variant == "printed":
        first = 5 * u1**2 * p1 * (p2 - q2) / (6 * (1 + b) * (1 + 2 * b))
        third = (u2 - u1) * (p2 + q2) / (4 * (1 + 3 * b))
    else:
        raise DomainError("variant", f"unknown variant {variant!r}")
    second = u1 * (p3 - q3) / (4 * (1 + 3 * b))
    fourth = (u1 - 2 * u2 + u3) * p1**3 / (8 * (1 + 3 * b))
    return first, second, third, fourth


def a4_printed(params: ClassParams, p1, p2, p3, q2, q3):
    return sum(a4_terms(params, p1, p2, p3, q2, q3, "printed"))


def closed_form_triple(params: ClassParams, p1, p2, p3, q2, q3, a4_variant: str = "derived") -> CoefficientTriple:
    a2 = a2_closed(params, p1)
    a3 = a3_closed(params, p1, p2, q2)
    if a4_variant == "derived":
        a4 = a4_closed(params, p1, p2, p3, q2, q3)
    else:
        a4 = a4_printed(params, p1, p2, p3, q2, q3)
    return CoefficientTriple(a2, a3, a4)


def hankel2(triple: CoefficientTriple):
    """a_2 a_4 - a_3^2."""
    return triple.a2 * triple.a4 - triple.a3**2


def hankel2_expansion(params: ClassParams, p1, p2, p3, q2, q3):
    """a_2 a_4 - a_3^2 as the five-term expansion in p's and q's (q_1 = -p_1)."""
    b = params.beta
    u1, u2, u3 = params.u1, params.u2, params.u3
    return (
        u1**3 * p1**2 * (p2 - q2) / (32 * (1 + b) ** 2 * (1 + 2 * b))
        + u1**2 * p1 * (p3 - q3) / (8 * (1 + b) * (1 + 3 * b))
        + (u2 - u1) * u1 * p1**2 * (p2 + q2) / (8 * (1 + b) * (1 + 3 * b))
        - u1**2 * (p2 - q2) ** 2 / (16 * (1 + 2 * b) ** 2)
        + u1 * p1**4 / (16 * (1 + b) ** 4 * (1 + 3 * b))
        * ((u1 - 2 * u2 + u3) * (1 + b) ** 3 - u1**3 * (1 + 3 * b))
    )


def fekete_szego_functional(triple: CoefficientTriple, mu: float):
    return triple.a3 - mu * triple.a2**2


def fekete_szego_classical_bound(mu: float) -> float:
    """Classical bound on |a_3 - mu a_2^2| over the normalized univalent class."""
    if mu <= 0:
        return 3 - 4 * mu
    if mu < 1:
        return 1 + 2 * math.exp(-2 * mu / (1 - mu))
    return 4 * mu - 3


def subordination_lhs(f: TruncatedSeries, beta: float) -> TruncatedSeries:
    """(1 - beta) f(z)/z + beta f'(z) for f = z + a_2 z^2 + ...; drops one order."""
    c = f.coefficients
    return TruncatedSeries((1 + n * beta) * c[n + 1] for n in range(f.order))


def sum_constraint_residuals(params: ClassParams, p1, p2, p3, q2, q3):
    """Residuals of the two sum equations that the relaxation drops.

    Returns (r3, r4) for the a_3 and a_4 pairs; both vanish exactly when a
    genuine function in the class produced (p, q).
    """
    b = params.beta
    _, rp2, rp3 = _rhs(params, p1, p2, p3)
    _, rq2, rq3 = _rhs(params, -p1, q2, q3)
    a2 = a2_closed(params, p1)
    a3 = a3_closed(params, p1, p2, q2)
    a4 = a4_closed(params, p1, p2, p3, q2, q3)
    r3 = 2 * (1 + 2 * b) * a2**2 - (rp2 + rq2)
    r4 = (1 + 3 * b) * (a4 - (5 * a2**3 - 5 * a2 * a3 + a4)) - (rp3 + rq3)
    return r3, r4
