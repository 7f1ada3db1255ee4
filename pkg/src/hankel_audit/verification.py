"""Independent numeric oracles for the bound pipeline.

Everything here is deterministic: grids are fixed, samples are keyed by
(seed, index), and parallel work is reduced in index order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .caratheodory import RelaxationPoint, sample_batch
from .class_coefficients import (
    A4_TERMS,
    ClassParams,
    a4_terms,
    closed_form_triple,
    hankel2,
    hankel2_expansion,
)
from .errors import DomainError
from .hankel_bounds import (
    BoundBreakdown,
    _f_coeffs,
    _f_surface,
    _h,
    corollary_bound,
    theorem_bound,
)

INVPHI = (math.sqrt(5) - 1) / 2

FLAG_INVARIANT = "invariant-violation"
FLAG_MISMATCH = "printed-derived-mismatch"
FLAG_COROLLARY = "corollary-mismatch"
FLAG_ARGMAX = "boundary-argmax-shift"
FLAG_ORDER = (FLAG_INVARIANT, FLAG_MISMATCH, FLAG_COROLLARY, FLAG_ARGMAX)
FINDING_FLAGS = frozenset({FLAG_MISMATCH, FLAG_COROLLARY})

EXIT_CLEAN = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_FINDING = 3

DOMINANCE_TOL = 1e-9
MISMATCH_RTOL = 1e-6
ARGMAX_TOL = 1e-9

CHUNK = 1 << 16
TAU_BLOCK = 32


def golden_max(func: Callable[[float], float], lo: float, hi: float, tol: float = 1e-13, max_iter: int = 200):
    """Golden-section search for a maximum of a unimodal ``func`` on [lo, hi].

    Endpoints are compared too, so monotone functions return the right edge.
    """
    a, b = lo, hi
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = func(c), func(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = func(d)
    best = max(((fc, c), (fd, d), (func(lo), lo), (func(hi), hi)), key=lambda p: p[0])
    return best[1], best[0]


def _refine(func, point: list[float], bounds: Sequence[tuple[float, float]], steps: Sequence[float], sweeps: int = 3):
    """Coordinate-wise golden refinement; only strict improvements are kept."""
    best = func(point)
    for _ in range(sweeps):
        improved = False
        for k, ((lo, hi), h) in enumerate(zip(bounds, steps)):
            a, b = max(lo, point[k] - h), min(hi, point[k] + h)
            if b <= a:
                continue

            def along(v, k=k):
                trial = list(point)
                trial[k] = v
                return func(trial)

            v, fv = golden_max(along, a, b)
            if fv > best:
                point[k] = v
                best = fv
                improved = True
        if not improved:
            break
    return point, best


class SquareMax(NamedTuple):
    value: float
    argmax: tuple[float, float]
    tie: bool


class TauMax(NamedTuple):
    value: float
    tau: float


@lru_cache(maxsize=8)
def _square_basis(resolution: int):
    g = np.linspace(0.0, 1.0, resolution)
    xi, eta = (a.ravel() for a in np.meshgrid(g, g, indexing="ij"))
    basis = np.vstack([(xi + eta) ** 2, xi**2 + eta**2, xi + eta])
    return xi, eta, basis


def maximize_f_on_square(params: ClassParams, tau: float, resolution: int = 401) -> SquareMax:
    """Max of F over [0, 1]^2 at fixed tau by grid scan plus golden refinement.

    When F is constant on the square (tau = 2) the result is flagged as a
    tie and (1, 1) is reported.
    """
    if resolution < 11:
        raise DomainError("resolution", f"need at least 11 points per side, got {resolution}")
    if not 0.0 <= tau <= 2.0:
        raise DomainError("tau", f"must lie in [0, 2], got {tau!r}")
    coeffs = tuple(float(c) for c in _f_coeffs(params, tau))
    xi, eta, basis = _square_basis(resolution)
    values = np.array(coeffs[:3]) @ basis + coeffs[3]
    i = int(np.argmax(values))
    vmax = float(values[i])
    if vmax - float(values.min()) <= 1e-15 * (1.0 + abs(vmax)):
        return SquareMax(vmax, (1.0, 1.0), True)
    h = 1.0 / (resolution - 1)
    point, best = _refine(
        lambda p: float(_f_surface(coeffs, p[0], p[1])),
        [float(xi[i]), float(eta[i])],
        [(0.0, 1.0), (0.0, 1.0)],
        [h, h],
    )
    return SquareMax(max(best, vmax), (point[0], point[1]), False)


def maximize_h_on_tau(params: ClassParams, resolution: int = 4001) -> TauMax:
    """Global max of H(t, .) over [0, 2] by grid scan plus golden refinement."""
    if resolution < 101:
        raise DomainError("resolution", f"need at least 101 tau points, got {resolution}")
    taus = np.linspace(0.0, 2.0, resolution)
    values = _h(params, taus)
    i = int(np.argmax(values))
    h = 2.0 / (resolution - 1)
    lo, hi = max(0.0, taus[i] - h), min(2.0, taus[i] + h)
    tau, val = golden_max(lambda s: float(_h(params, s)), lo, hi)
    if val < values[i]:
        return TauMax(float(values[i]), float(taus[i]))
    return TauMax(val, tau)


def _grid_max_rows(params: ClassParams, taus: np.ndarray, resolution: int):
    """Exact max of F over the (xi, eta) grid for each tau.

    Along a grid row (xi fixed) F is a quadratic in eta, so its grid maximum
    is at eta = 0, eta = 1, or one of the two grid points around the vertex.
    """
    n = resolution - 1
    g = np.linspace(0.0, 1.0, resolution)
    c1, c2, c3, c4 = (np.broadcast_to(c, taus.shape)[:, None, None] for c in _f_coeffs(params, taus))
    xi = g[None, :, None]
    lead = c1 + c2
    lin = 2 * c1 * xi + c3
    with np.errstate(divide="ignore", invalid="ignore"):
        vertex = np.where(lead < 0, -lin / (2 * lead), 0.0)
    vertex = np.clip(vertex, 0.0, 1.0)
    lo = np.floor(vertex * n) / n
    hi = np.minimum(lo + 1.0 / n, 1.0)
    cand = np.concatenate([np.zeros_like(lo), np.ones_like(lo), lo, hi], axis=2)
    # snap candidates onto the grid
    cand = g[np.rint(cand * n).astype(np.int64)]
    vals = _f_surface((c1, c2, c3, c4), xi, cand)
    flat = vals.reshape(vals.shape[0], -1)
    idx = np.argmax(flat, axis=1)
    rows = np.arange(flat.shape[0])
    i_xi, i_c = np.unravel_index(idx, vals.shape[1:])
    return flat[rows, idx], g[i_xi], cand[rows, i_xi, i_c]


@dataclass(frozen=True)
class SurfaceMax:
    """Max of F over the (tau, xi, eta) box, with a per-tau boundary check."""

    value: float
    tau: float
    xi: float
    eta: float
    boundary_shift: float
    worst_shift_tau: float


def maximize_f_over_box(params: ClassParams, tau_resolution: int = 4001, resolution: int = 401) -> SurfaceMax:
    """Max of F over a tau grid on [0, 2] times the (xi, eta) grid on [0, 1]^2.

    Also records how far the square maximum at each grid tau exceeds
    F(1, 1); a positive excess means the maximum is not at the corner.
    """
    if tau_resolution < 101:
        raise DomainError("tau_resolution", f"need at least 101 tau points, got {tau_resolution}")
    if resolution < 11:
        raise DomainError("resolution", f"need at least 11 points per side, got {resolution}")
    taus = np.linspace(0.0, 2.0, tau_resolution)
    corner = _h(params, taus)
    row_max = np.empty(tau_resolution)
    row_xi = np.empty(tau_resolution)
    row_eta = np.empty(tau_resolution)
    for s in range(0, tau_resolution, TAU_BLOCK):
        v, x, e = _grid_max_rows(params, taus[s : s + TAU_BLOCK], resolution)
        row_max[s : s + TAU_BLOCK], row_xi[s : s + TAU_BLOCK], row_eta[s : s + TAU_BLOCK] = v, x, e

    shift = row_max - corner
    j = int(np.argmax(shift))
    k = int(np.argmax(row_max))
    start = [float(taus[k]), float(row_xi[k]), float(row_eta[k])]

    def objective(p):
        return float(_f_surface(_f_coeffs(params, p[0]), p[1], p[2]))

    hs = [2.0 / (tau_resolution - 1), 1.0 / (resolution - 1), 1.0 / (resolution - 1)]
    point, best = _refine(objective, start, [(0.0, 2.0), (0.0, 1.0), (0.0, 1.0)], hs)
    if best < row_max[k]:
        point, best = start, float(row_max[k])
    return SurfaceMax(best, point[0], point[1], point[2], float(shift[j]), float(taus[j]))


def _batch_hankel(params: ClassParams, batch, a4_variant: str = "derived"):
    p1, p2, p3 = batch.p_coefficients()
    _, q2, q3 = batch.q_coefficients()
    return np.abs(hankel2(closed_form_triple(params, p1, p2, p3, q2, q3, a4_variant)))


class EmpiricalMax(NamedTuple):
    value: float
    witness: RelaxationPoint
    index: int


def _chunks(count: int, chunk: int):
    return [(s, min(chunk, count - s)) for s in range(0, count, chunk)]


def _map_ordered(func, items, workers: int):
    if workers <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def empirical_functional_max(
    params: ClassParams,
    count: int,
    seed: int,
    mode: str = "relaxation",
    workers: int = 1,
    chunk: int = CHUNK,
) -> EmpiricalMax:
    """Largest |a_2 a_4 - a_3^2| over ``count`` sampled relaxation points.

    Ties go to the lowest sample index, so the witness does not depend on
    chunking or worker count.
    """
    if count < 1:
        raise DomainError("count", f"need at least one sample, got {count}")

    def work(span):
        start, n = span
        batch = sample_batch(start, n, seed, mode, params)
        vals = _batch_hankel(params, batch)
        i = int(np.argmax(vals))
        return float(vals[i]), start + i, batch.point(i)

    results = _map_ordered(work, _chunks(count, chunk), workers)
    value, index, witness = max(results, key=lambda r: (r[0], -r[1]))
    return EmpiricalMax(value, witness, index)


@dataclass(frozen=True)
class DominationResult:
    count: int
    f_violations: int
    bound_violations: int
    worst_f_margin: float
    worst_bound_margin: float
    bound: float


def relaxation_domination(
    params: ClassParams,
    count: int,
    seed: int,
    f_tol: float = 1e-12,
    bound_tol: float = DOMINANCE_TOL,
    mode: str = "relaxation",
) -> DominationResult:
    """Check |a_2 a_4 - a_3^2| <= F(|x|, |y|) at tau = |p1|, and <= the derived bound, per sample.

    Margins are value minus bound, so positive means violated.
    """
    bound = theorem_bound(params, "derived").bound
    f_viol = b_viol = 0
    worst_f = worst_b = -math.inf
    for start, n in _chunks(count, CHUNK):
        batch = sample_batch(start, n, seed, mode, params)
        vals = _batch_hankel(params, batch)
        fv = _f_surface(_f_coeffs(params, np.abs(batch.p1)), np.abs(batch.x), np.abs(batch.y))
        f_viol += int(np.sum(vals > fv + f_tol))
        b_viol += int(np.sum(vals > bound + bound_tol))
        worst_f = max(worst_f, float(np.max(vals - fv)))
        worst_b = max(worst_b, float(np.max(vals)) - bound)
    return DominationResult(count, f_viol, b_viol, worst_f, worst_b, bound)


def _rel_err(a, b, rtol_floor: float = 1e-12):
    """|a - b| / max(|b|, floor); the floor keeps near-zero values absolute."""
    a, b = np.asarray(a), np.asarray(b)
    return np.abs(a - b) / np.maximum(np.abs(b), rtol_floor)


def random_coefficient_tuples(count: int, seed: int):
    """Arbitrary (p1, p2, p3, q2, q3) with moduli at most 2 for identity checks."""
    rng = np.random.Generator(np.random.Philox(key=seed & 0xFFFFFFFFFFFFFFFF))
    r = 2 * np.sqrt(rng.random((5, count)))
    th = 2 * np.pi * rng.random((5, count))
    return tuple(r * np.exp(1j * th))


def expansion_audit(params: ClassParams, count: int = 1000, seed: int = 0, rtol: float = 1e-10) -> dict:
    """Compare the five-term expansion of a_2 a_4 - a_3^2 against both a_4 variants.

    For the printed variant, the a_4 summands that differ from the derived
    ones are listed so a failure is pinned to specific terms.
    """
    p1, p2, p3, q2, q3 = random_coefficient_tuples(count, seed)
    expansion = hankel2_expansion(params, p1, p2, p3, q2, q3)
    out = {"count": count, "rtol": rtol}
    for variant in ("derived", "printed"):
        direct = hankel2(closed_form_triple(params, p1, p2, p3, q2, q3, variant))
        err = float(np.max(_rel_err(direct, expansion)))
        out[variant] = {"max_rel_err": err, "holds": err < rtol}
    derived_terms = a4_terms(params, p1, p2, p3, q2, q3, "derived")
    printed_terms = a4_terms(params, p1, p2, p3, q2, q3, "printed")
    out["printed"]["faulty_terms"] = [
        name
        for name, d, p in zip(A4_TERMS, derived_terms, printed_terms)
        if float(np.max(_rel_err(p, d))) > rtol
    ]
    return out


@dataclass(frozen=True)
class AuditConfig:
    samples: int = 100_000
    seed: int = 0
    grid: int = 401
    tau_grid: int = 4001
    mode: str = "relaxation"
    workers: int = 1


@dataclass(frozen=True)
class AuditReport:
    beta: float
    t: float
    numeric_bound: float
    argmax: tuple[float, float, float]
    empirical_max: float
    witness: RelaxationPoint
    witness_index: int
    printed_bound: float
    derived_bound: float
    corollary: Optional[float]
    boundary_shift: float
    printed: BoundBreakdown
    derived: BoundBreakdown
    flags: tuple[str, ...]
    seed: int
    sample_count: int
    grid_resolution: int
    tau_resolution: int
    mode: str = "relaxation"

    @property
    def exit_code(self) -> int:
        return exit_code(self.flags)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["argmax"] = {"tau": self.argmax[0], "xi": self.argmax[1], "eta": self.argmax[2]}
        d["witness"] = self.witness.to_dict()
        d["printed"] = self.printed.to_dict()
        d["derived"] = self.derived.to_dict()
        d["flags"] = list(self.flags)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> AuditReport:
        d = dict(d)
        a = d["argmax"]
        d["argmax"] = (a["tau"], a["xi"], a["eta"])
        d["witness"] = RelaxationPoint.from_dict(d["witness"])
        d["printed"] = BoundBreakdown.from_dict(d["printed"])
        d["derived"] = BoundBreakdown.from_dict(d["derived"])
        d["flags"] = tuple(d["flags"])
        return cls(**d)


def exit_code(flags) -> int:
    """0 for no flags, 3 when only printed/corollary findings, 1 otherwise."""
    flags = set(flags)
    if not flags:
        return EXIT_CLEAN
    if flags <= FINDING_FLAGS:
        return EXIT_FINDING
    return EXIT_VIOLATION


def _differs(a: float, b: float) -> bool:
    return abs(a - b) > MISMATCH_RTOL * (1 + abs(b))


def cross_check(params: ClassParams, config: AuditConfig = AuditConfig()) -> AuditReport:
    """Run both bound variants against brute-force maximization and sampling."""
    printed = theorem_bound(params, "printed")
    derived = theorem_bound(params, "derived")
    surface = maximize_f_over_box(params, config.tau_grid, config.grid)
    emp = empirical_functional_max(params, config.samples, config.seed, config.mode, config.workers)
    try:
        corollary = corollary_bound(params)
    except DomainError:
        corollary = None

    flags = set()
    if emp.value > surface.value + DOMINANCE_TOL or surface.value > derived.bound + DOMINANCE_TOL:
        flags.add(FLAG_INVARIANT)
    if _differs(printed.bound, derived.bound):
        flags.add(FLAG_MISMATCH)
    if corollary is not None and _differs(corollary, derived.bound):
        flags.add(FLAG_COROLLARY)
    if surface.boundary_shift > ARGMAX_TOL:
        flags.add(FLAG_ARGMAX)

    return AuditReport(
        beta=params.beta,
        t=params.t,
        numeric_bound=surface.value,
        argmax=(surface.tau, surface.xi, surface.eta),
        empirical_max=emp.value,
        witness=emp.witness,
        witness_index=emp.index,
        printed_bound=printed.bound,
        derived_bound=derived.bound,
        corollary=corollary,
        boundary_shift=surface.boundary_shift,
        printed=printed,
        derived=derived,
        flags=tuple(f for f in FLAG_ORDER if f in flags),
        seed=config.seed,
        sample_count=config.samples,
        grid_resolution=config.grid,
        tau_resolution=config.tau_grid,
        mode=config.mode,
    )


@dataclass(frozen=True)
class RegionCell:
    beta: float
    t: float
    delta_printed: float
    c_printed: float
    case_printed: str
    delta_derived: float
    c_derived: float
    case_derived: str
    tau0_derived: Optional[float]
    bound_printed: float
    bound_derived: float
    agree: bool
    annotation: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def region_cell(params: ClassParams) -> RegionCell:
    pr = theorem_bound(params, "printed")
    de = theorem_bound(params, "derived")
    agree = pr.case_id == de.case_id and not _differs(pr.bound, de.bound)
    return RegionCell(
        params.beta, params.t,
        pr.delta, pr.c_coef, pr.case_id,
        de.delta, de.c_coef, de.case_id,
        de.tau0, pr.bound, de.bound, agree, de.annotation,
    )


def region_map(beta_grid, t_grid, allow_exterior: bool = False, workers: int = 1) -> list[RegionCell]:
    """Case structure of both variants over a (beta, t) grid, beta-major."""
    beta_grid, t_grid = list(beta_grid), list(t_grid)
    if not beta_grid or not t_grid:
        raise DomainError("grid", "region map needs nonempty beta and t grids")
    cells = [ClassParams(b, t, allow_exterior) for b in beta_grid for t in t_grid]
    return _map_ordered(region_cell, cells, workers)


def errata() -> list[dict]:
    """Known defects in the printed derivation and how this package handles each."""
    return [
        {
            "id": "chebyshev-recurrence-index",
            "printed": "U_{n+1}(t) = 2t U_n(t) - U_{n-2}(t)",
            "correct": "U_{n+1}(t) = 2t U_n(t) - U_{n-1}(t)",
            "handling": "standard recurrence; reproduces U_2 = 4t^2 - 1 and U_3 = 8t^3 - 4t",
        },
        {
            "id": "lemma-z-name-collision",
            "printed": "the free parameter z of the p_3 formula shares its name with the disk variable",
            "correct": "separate free parameters z (p-side) and w (q-side)",
            "handling": "RelaxationPoint fields z, w are parameters, never disk points",
        },
        {
            "id": "lemma-complex-p1",
            "printed": "p_3 and p_2 formulas applied with (4 - p_1^2) for complex p_1",
            "correct": "valid for real p_1; complex p_1 = tau u needs (4 - tau^2) u^2",
            "handling": "rotation-covariant form; identical on the real axis",
        },
        {
            "id": "a3-second-equality",
            "printed": "a_3 = U_1^2/(4(1+b)^2) + ...",
            "correct": "a_3 = U_1^2 p_1^2/(4(1+b)^2) + ...",
            "handling": "a_3 evaluated as a_2^2 + U_1 (p_2 - q_2)/(4(1+2b))",
        },
        {
            "id": "a4-first-denominator",
            "printed": "5 U_1^2 p_1 (p_2 - q_2) / (6 (1+b)(1+2b))",
            "correct": "5 U_1^2 p_1 (p_2 - q_2) / (16 (1+b)(1+2b))",
            "handling": "derived a_4 used everywhere; printed a_4 kept as audit variant",
        },
        {
            "id": "a4-missing-p1",
            "printed": "(U_2 - U_1)(p_2 + q_2) / (4(1+3b))",
            "correct": "(U_2 - U_1) p_1 (p_2 + q_2) / (4(1+3b))",
            "handling": "as above",
        },
        {
            "id": "delta-middle-term",
            "printed": "Delta middle term -U_1[U_1^2 - 4U_2(1+b)(1+2b)](1+b)^2(1+2b)(1+3b)",
            "correct": "Delta = 32 K a_4 from the tau^4 coefficient of H",
            "handling": "printed and derived variants both evaluated; region map and audit flag disagreement",
        },
        {
            "id": "h-at-critical-point",
            "printed": "H(t, tau_0) = 4t^2/(1+2b)^2 - c^2 / (4 K)",
            "correct": "H(t, tau_0) = 4t^2/(1+2b)^2 - c^2 / (8 K Delta)",
            "handling": "H(t, tau_0) always evaluated directly from c_1..c_4",
        },
        {
            "id": "critical-point-name",
            "printed": "p_0 = sqrt(-2c/Delta) in the statement, tau_0 in the argument",
            "correct": "one quantity, tau_0",
            "handling": "tau0 field of BoundBreakdown",
        },
        {
            "id": "phi-positivity-line",
            "printed": "phi(tau) > 6b^2 + 8b^2 since 2 - b^2 tau > 0",
            "correct": "phi(tau) = 2(1+b)(1+3b) - b^2 tau >= 2 + 8b + 4b^2 > 0 on [0, 2]",
            "handling": "2 c_1 + c_2 > 0 checked numerically on a grid",
        },
        {
            "id": "special-case-beta-zero",
            "printed": "|a_2 a_4 - a_3^2| <= 8t^2 at beta = 0",
            "correct": "H(t, 2) = 8t^2, but dH/dtau at tau = 2 is -4t(5t^2 - 3t - 1), negative for t above "
            "(3 + sqrt 29)/10 = 0.8385, so the profile maximum exceeds 8t^2 there; sampled values stay below 8t^2",
            "handling": "corollary-mismatch flag",
        },
        {
            "id": "special-case-beta-one",
            "printed": "|a_2 a_4 - a_3^2| <= t^2 (1 - t^2) at beta = 1",
            "correct": "equals H(t, 2) only; the derived analysis exceeds it for t above about 0.635 (interior maximum)",
            "handling": "corollary-mismatch flag",
        },
    ]
