"""Chebyshev polynomials of the first and second kind, and the Taylor
coefficients of ``G(t, z) = 1 / (1 - 2 t z + z**2)``."""

from __future__ import annotations

from .errors import DomainError

# Interior margin for the class range 1/2 < t < 1.
T_MARGIN = 1e-9


def _check_arg(t: float) -> None:
    if not abs(t) <= 1.0:
        raise DomainError("t", f"Chebyshev argument must satisfy |t| <= 1, got {t!r}")


def _check_degree(n: int) -> None:
    if n < 0:
        raise DomainError("n", f"degree must be nonnegative, got {n!r}")


def u_poly(n: int, t: float) -> float:
    """U_n(t) by the three-term recurrence U_{k+1} = 2t U_k - U_{k-1}."""
    _check_degree(n)
    _check_arg(t)
    prev, cur = 1.0, 2.0 * t
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, 2.0 * t * cur - prev
    return cur


def t_poly(n: int, t: float) -> float:
    """T_n(t) by the recurrence T_{k+1} = 2t T_k - T_{k-1}."""
    _check_degree(n)
    _check_arg(t)
    prev, cur = 1.0, float(t)
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, 2.0 * t * cur - prev
    return cur


def in_class_range(t: float) -> bool:
    return 0.5 + T_MARGIN < t < 1.0 - T_MARGIN


def g_coefficients(t: float, order: int, allow_exterior: bool = False) -> list[float]:
    """Return ``[U_0(t), ..., U_order(t)]``, the Taylor coefficients of G(t, .).

    Outside 1/2 < t < 1 a :class:`DomainError` is raised unless
    ``allow_exterior`` is set, in which case any |t| <= 1 is accepted.
    """
    _check_degree(order)
    if not allow_exterior and not in_class_range(t):
        raise DomainError("t", f"class parameter must lie in (1/2, 1), got {t!r}")
    _check_arg(t)
    coeffs = [1.0]
    if order >= 1:
        coeffs.append(2.0 * t)
    for k in range(2, order + 1):
        coeffs.append(2.0 * t * coeffs[k - 1] - coeffs[k - 2])
    return coeffs
