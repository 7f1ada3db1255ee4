"""Truncated complex power series.

A :class:`TruncatedSeries` of order N carries c_0..c_N and stands for
``c_0 + c_1 z + ... + c_N z**N + O(z**(N+1))``.  Binary operations
truncate to the smaller of the two orders.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import DomainError


@dataclass(frozen=True)
class TruncatedSeries:
    coefficients: tuple[complex, ...]

    def __init__(self, coefficients: Iterable[complex]):
        coeffs = tuple(complex(c) for c in coefficients)
        if not coeffs:
            raise DomainError("coefficients", "a truncated series needs at least c_0")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int) -> complex:
        return self.coefficients[k]

    def __len__(self) -> int:
        return len(self.coefficients)

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise DomainError("order", f"cannot extend order {self.order} series to {order}")
        return TruncatedSeries(self.coefficients[: order + 1])

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        n = min(self.order, other.order)
        return TruncatedSeries(a + b for a, b in zip(self.coefficients[: n + 1], other.coefficients))

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        n = min(self.order, other.order)
        return TruncatedSeries(a - b for a, b in zip(self.coefficients[: n + 1], other.coefficients))

    def scale(self, factor: complex) -> TruncatedSeries:
        return TruncatedSeries(factor * c for c in self.coefficients)

    def shift_constant(self, delta: complex) -> TruncatedSeries:
        return TruncatedSeries((self.coefficients[0] + delta,) + self.coefficients[1:])

    def max_abs_diff(self, other: TruncatedSeries) -> float:
        n = min(self.order, other.order)
        return max(abs(a - b) for a, b in zip(self.coefficients[: n + 1], other.coefficients))


def identity(order: int) -> TruncatedSeries:
    """The series ``z`` at the given order (order >= 1)."""
    return TruncatedSeries([0, 1] + [0] * (order - 1))


def multiply(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated to min(a.order, b.order)."""
    n = min(a.order, b.order)
    ca, cb = a.coefficients, b.coefficients
    return TruncatedSeries(sum(ca[i] * cb[k - i] for i in range(k + 1)) for k in range(n + 1))


def reciprocal(a: TruncatedSeries) -> TruncatedSeries:
    """1/a to the same order; requires a nonzero constant term."""
    c = a.coefficients
    if c[0] == 0:
        raise DomainError("a", "reciprocal needs a nonzero constant term")
    out = [1 / c[0]]
    for k in range(1, a.order + 1):
        out.append(-sum(c[i] * out[k - i] for i in range(1, k + 1)) / c[0])
    return TruncatedSeries(out)


def compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """Taylor coefficients of outer(inner(z)) by Horner's scheme.

    The inner series must vanish at 0 so every power contributes only to
    higher orders.
    """
    if inner.coefficients[0] != 0:
        raise DomainError("inner", "composition needs an inner series with zero constant term")
    n = min(outer.order, inner.order)
    inner = inner.truncate(n)
    acc = TruncatedSeries([outer.coefficients[n]] + [0] * n)
    for k in range(n - 1, -1, -1):
        acc = multiply(acc, inner).shift_constant(outer.coefficients[k])
    return acc


def revert(f: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse g of a normalized f = z + a_2 z^2 + ...

    Coefficients are fixed order by order: at step k the z^k coefficient of
    f(g(z)) is linear in g_k with unit slope, so subtracting the residual
    zeroes it.
    """
    c = f.coefficients
    if f.order < 1 or c[0] != 0 or c[1] != 1:
        raise DomainError("f", "reversion needs a series of the form z + a_2 z^2 + ...")
    g = list(identity(f.order).coefficients)
    for k in range(2, f.order + 1):
        residual = compose(f, TruncatedSeries(g)).coefficients[k]
        g[k] -= residual
    return TruncatedSeries(g)


def revert_closed_form(a2: complex, a3: complex, a4: complex) -> TruncatedSeries:
    """The classical fourth-order inverse expansion written out explicitly."""
    return TruncatedSeries([0, 1, -a2, 2 * a2**2 - a3, -(5 * a2**3 - 5 * a2 * a3 + a4)])


def schwarz_from_caratheodory(p: TruncatedSeries) -> TruncatedSeries:
    """omega = (p - 1) / (p + 1) for p = 1 + p_1 z + ..."""
    if p.coefficients[0] != 1:
        raise DomainError("p", "Caratheodory series must have constant term 1")
    return multiply(p.shift_constant(-1), reciprocal(p.shift_constant(1)))


def caratheodory_from_schwarz(w: TruncatedSeries) -> TruncatedSeries:
    """p = (1 + omega) / (1 - omega) for omega = w_1 z + ..."""
    if w.coefficients[0] != 0:
        raise DomainError("w", "Schwarz series must vanish at the origin")
    one_minus = w.scale(-1).shift_constant(1)
    return multiply(w.shift_constant(1), reciprocal(one_minus))
