"""Invariant suite behind ``hankel-audit selfcheck``.

Each check returns ``(passed, detail)``; detail is JSON-serializable.
"""

from __future__ import annotations

import math

import numpy as np

from .caratheodory import sample_batch
from .chebyshev import g_coefficients, t_poly, u_poly
from .class_coefficients import (
    ClassParams,
    _rhs,
    a3_closed,
    q_side_solve,
    solve_p_side,
    subordination_lhs,
)
from .hankel_bounds import _f_coeffs, _h, f_coefficients, h_value, quartic_profile, theorem_bound
from .power_series import (
    TruncatedSeries,
    caratheodory_from_schwarz,
    compose,
    revert,
    revert_closed_form,
    schwarz_from_caratheodory,
)
from .verification import (
    errata,
    expansion_audit,
    maximize_f_on_square,
    random_coefficient_tuples,
    relaxation_domination,
)

AUDIT_CELLS = [(b, t) for b in (0.0, 0.5, 1.0) for t in (0.55, 0.75, 0.95)]


def _interior(lo: float, hi: float, n: int) -> np.ndarray:
    return np.linspace(lo, hi, n + 2)[1:-1]


def check_chebyshev() -> tuple[bool, dict]:
    worst_u = worst_t = worst_gf = 0.0
    for alpha in _interior(0.0, math.pi / 3, 100):
        t = math.cos(alpha)
        for n in range(13):
            worst_u = max(worst_u, abs(u_poly(n, t) * math.sin(alpha) - math.sin((n + 1) * alpha)))
            worst_t = max(worst_t, abs(t_poly(n, t) - math.cos(n * alpha)))
    for t in _interior(0.5, 1.0, 20):
        g = np.array(g_coefficients(t, 12))
        conv = np.convolve(g, [1.0, -2 * t, 1.0])[:13]
        target = np.zeros(13)
        target[0] = 1.0
        worst_gf = max(worst_gf, float(np.max(np.abs(conv - target))))
    ok = max(worst_u, worst_t, worst_gf) < 1e-12
    return ok, {"trig_u": worst_u, "trig_t": worst_t, "generating_function": worst_gf}


def check_series(count: int = 100, seed: int = 1) -> tuple[bool, dict]:
    a2, a3, a4, *_ = random_coefficient_tuples(count, seed)
    worst_rt = worst_cf = worst_mob = 0.0
    for i in range(count):
        f = TruncatedSeries([0, 1, a2[i], a3[i], a4[i]])
        g = revert(f)
        worst_rt = max(worst_rt, compose(f, g).max_abs_diff(TruncatedSeries([0, 1, 0, 0, 0])))
        worst_cf = max(worst_cf, g.max_abs_diff(revert_closed_form(a2[i], a3[i], a4[i])))
        p = TruncatedSeries([1, a2[i], a3[i], a4[i]])
        worst_mob = max(worst_mob, caratheodory_from_schwarz(schwarz_from_caratheodory(p)).max_abs_diff(p))
    ok = worst_rt < 1e-12 and worst_cf < 1e-13 and worst_mob < 1e-12
    return ok, {"reversion_roundtrip": worst_rt, "closed_form": worst_cf, "mobius_roundtrip": worst_mob}


def check_lemma_bound(count: int = 10_000, seed: int = 2) -> tuple[bool, dict]:
    batch = sample_batch(0, count, seed)
    worst = max(float(np.max(np.abs(c))) for c in batch.p_coefficients() + batch.q_coefficients())
    return worst <= 2 + 1e-12, {"max_modulus": worst}


def check_coefficient_system(count: int = 200, seed: int = 3) -> tuple[bool, dict]:
    """Series route versus closed equations, on both sides of the inverse."""
    worst_p = worst_q = worst_a3 = 0.0
    for b, t in AUDIT_CELLS:
        params = ClassParams(b, t)
        G = TruncatedSeries(g_coefficients(t, 3))
        batch = sample_batch(0, count, seed)
        p1, p2, p3 = batch.p_coefficients()
        _, q2, q3 = batch.q_coefficients()
        for i in range(count):
            tri = solve_p_side(params, p1[i], p2[i], p3[i])
            f = TruncatedSeries([0, 1, tri.a2, tri.a3, tri.a4])
            omega = schwarz_from_caratheodory(TruncatedSeries([1, p1[i], p2[i], p3[i]]))
            worst_p = max(worst_p, subordination_lhs(f, b).max_abs_diff(compose(G, omega)))
            q = q_side_solve(params, tri)
            varpi = schwarz_from_caratheodory(TruncatedSeries([1, *q]))
            worst_q = max(worst_q, subordination_lhs(revert(f), b).max_abs_diff(compose(G, varpi)))
        # a_3 from differencing the two a_3 equations directly
        _, rp2, _ = _rhs(params, p1, p2, p3)
        _, rq2, _ = _rhs(params, -p1, q2, q3)
        a2 = params.u1 * p1 / (2 * (1 + b))
        joint = a2**2 + (rp2 - rq2) / (2 * (1 + 2 * b))
        closed = a3_closed(params, p1, p2, q2)
        err = np.abs(closed - joint) / np.maximum(np.abs(joint), 1e-12)
        worst_a3 = max(worst_a3, float(np.max(err)))
    ok = worst_p < 1e-12 and worst_q < 1e-12 and worst_a3 < 1e-10
    return ok, {"p_side_residual": worst_p, "q_side_residual": worst_q, "a3_rel_err": worst_a3}


def check_expansion(count: int = 1000) -> tuple[bool, dict]:
    detail = {f"{b},{t}": expansion_audit(ClassParams(b, t), count, seed=4) for b, t in AUDIT_CELLS}
    ok = all(d["derived"]["holds"] for d in detail.values())
    return ok, detail


def check_signs(n: int = 50) -> tuple[bool, dict]:
    worst = {"c1_min": math.inf, "c2_max": -math.inf, "c3_min": math.inf, "c4_min": math.inf, "2c1+c2_min": math.inf}
    taus = _interior(0.0, 2.0, n)
    for b in np.linspace(0.0, 1.0, n):
        for t in _interior(0.5, 1.0, n):
            c1, c2, c3, c4 = _f_coeffs(ClassParams(b, t), taus)
            worst["c1_min"] = min(worst["c1_min"], float(c1.min()))
            worst["c2_max"] = max(worst["c2_max"], float(c2.max()))
            worst["c3_min"] = min(worst["c3_min"], float(c3.min()))
            worst["c4_min"] = min(worst["c4_min"], float(c4.min()))
            worst["2c1+c2_min"] = min(worst["2c1+c2_min"], float((2 * c1 + c2).min()))
    ok = (
        worst["c1_min"] >= 0 and worst["c2_max"] <= 0 and worst["c3_min"] >= 0
        and worst["c4_min"] >= 0 and worst["2c1+c2_min"] > 0
    )
    return ok, worst


def check_profile(count: int = 100, seed: int = 5) -> tuple[bool, dict]:
    rng = np.random.Generator(np.random.Philox(key=seed))
    worst_quartic = worst_end = 0.0
    worst_dom = -math.inf
    taus = np.linspace(0.0, 2.0, 4001)
    for _ in range(count):
        params = ClassParams(rng.uniform(0, 1), rng.uniform(0.5 + 1e-6, 1 - 1e-6))
        prof = quartic_profile(params)
        tau = rng.uniform(0, 2)
        worst_quartic = max(worst_quartic, abs(h_value(params, tau) - float(prof(tau))))
        worst_end = max(worst_end, abs(h_value(params, 2.0) - f_coefficients(params, 2.0).c4))
        worst_dom = max(worst_dom, float(np.max(_h(params, taus))) - theorem_bound(params).bound)
    ok = worst_quartic < 1e-10 and worst_end == 0.0 and worst_dom <= 1e-9
    return ok, {"quartic": worst_quartic, "endpoint": worst_end, "dominance_excess": worst_dom}


def check_boundary_argmax(n: int = 20, resolution: int = 101) -> tuple[bool, dict]:
    exceptions = []
    worst = -math.inf
    for b in np.linspace(0.0, 1.0, n):
        for t in _interior(0.5, 1.0, n):
            params = ClassParams(b, t)
            for tau in np.linspace(0.0, 2.0, n):
                res = maximize_f_on_square(params, float(tau), resolution)
                excess = res.value - h_value(params, float(tau))
                worst = max(worst, excess)
                if excess > 1e-9:
                    exceptions.append({"beta": float(b), "t": float(t), "tau": float(tau), "excess": excess})
    return not exceptions, {"worst_excess": worst, "exceptions": exceptions}


def check_domination(count: int = 10_000, seed: int = 6) -> tuple[bool, dict]:
    detail = {}
    ok = True
    for b, t in AUDIT_CELLS:
        r = relaxation_domination(ClassParams(b, t), count, seed)
        detail[f"{b},{t}"] = {"f_violations": r.f_violations, "bound_violations": r.bound_violations}
        ok = ok and r.f_violations == 0 and r.bound_violations == 0
    return ok, detail


CHECKS = {
    "chebyshev": check_chebyshev,
    "series": check_series,
    "lemma_bound": check_lemma_bound,
    "coefficient_system": check_coefficient_system,
    "expansion": check_expansion,
    "signs": check_signs,
    "profile": check_profile,
    "boundary_argmax": check_boundary_argmax,
    "domination": check_domination,
}


def run_selfcheck() -> dict:
    checks = []
    for name, func in CHECKS.items():
        passed, detail = func()
        checks.append({"name": name, "passed": bool(passed), "detail": detail})
    return {"passed": all(c["passed"] for c in checks), "checks": checks, "errata": errata()}
