"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line."""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from hankel_audit import (
    ClassParams,
    TruncatedSeries,
    compose,
    cross_check,
    empirical_functional_max,
    fekete_szego_classical_bound,
    g_coefficients,
    h_value,
    hankel2,
    hankel2_expansion,
    maximize_f_on_square,
    q_side_solve,
    revert,
    schwarz_from_caratheodory,
    solve_p_side,
    t_poly,
    theorem_bound,
    u_poly,
)
from hankel_audit.class_coefficients import closed_form_triple, subordination_lhs
from hankel_audit.hankel_bounds import delta_derived, delta_printed
from hankel_audit.power_series import identity, revert_closed_form
from hankel_audit.verification import (
    FLAG_COROLLARY,
    FLAG_INVARIANT,
    FLAG_MISMATCH,
    AuditConfig,
    expansion_audit,
    maximize_f_over_box,
    random_coefficient_tuples,
    relaxation_domination,
)
import oracles

CELLS = [(b, t) for b in (0.0, 0.5, 1.0) for t in (0.55, 0.75, 0.95)]


def rng(seed):
    return np.random.Generator(np.random.Philox(key=seed))


def test_criterion_01_chebyshev(acceptance):
    start = time.perf_counter()
    alphas = np.linspace(0, math.pi, 102)[1:-1]
    worst = 0.0
    for alpha in alphas:
        t = math.cos(alpha)
        for n in range(13):
            worst = max(worst, abs(u_poly(n, t) * math.sin(alpha) - math.sin((n + 1) * alpha)))
            worst = max(worst, abs(t_poly(n, t) - math.cos(n * alpha)))
            if n >= 2:
                worst = max(worst, abs(u_poly(n, t) - (2 * t * u_poly(n - 1, t) - u_poly(n - 2, t))))
                worst = max(worst, abs(t_poly(n, t) - (2 * t * t_poly(n - 1, t) - t_poly(n - 2, t))))
    for t in np.linspace(0.5, 1, 22)[1:-1]:
        assert g_coefficients(t, 12) == [u_poly(n, t) for n in range(13)]
    elapsed = time.perf_counter() - start
    ok = worst < 1e-12 and elapsed < 1.0
    acceptance(1, "Chebyshev suite", ok, f"max error {worst:.2e} (< 1e-12), {elapsed:.3f} s (< 1 s)")
    assert ok


def test_criterion_02_series(acceptance):
    start = time.perf_counter()
    gen = rng(2)
    a = 2 * np.sqrt(gen.random((3, 100))) * np.exp(2j * np.pi * gen.random((3, 100)))
    worst_closed = worst_id = 0.0
    for a2, a3, a4 in a.T:
        f = TruncatedSeries([0, 1, a2, a3, a4])
        g = revert(f)
        worst_closed = max(worst_closed, g.max_abs_diff(revert_closed_form(a2, a3, a4)))
        worst_id = max(worst_id, compose(f, g).max_abs_diff(identity(4)))
    koebe = revert(TruncatedSeries([0, 1, 2, 3, 4]))
    koebe_ok = koebe.max_abs_diff(TruncatedSeries(oracles.REVERT_1234)) < 1e-12
    elapsed = time.perf_counter() - start
    ok = worst_closed < 1e-12 and worst_id < 1e-12 and koebe_ok and elapsed < 1.0
    acceptance(
        2, "Series suite", ok,
        f"closed form {worst_closed:.2e}, f(g) - z {worst_id:.2e}, "
        f"Koebe {tuple(round(c.real) for c in koebe.coefficients[2:])}, {elapsed:.3f} s (< 1 s)",
    )
    assert ok


def test_criterion_03_coefficient_system(acceptance):
    start = time.perf_counter()
    worst_p = worst_q = 0.0
    p1s, p2s, p3s, _, _ = random_coefficient_tuples(60, 31)
    for beta, t in [(0.0, 0.6), (0.5, 0.75), (1.0, 0.9)]:
        params = ClassParams(beta, t)
        G = TruncatedSeries(g_coefficients(t, 3))
        for p1, p2, p3 in zip(p1s, p2s, p3s):
            tri = solve_p_side(params, p1, p2, p3)
            f = TruncatedSeries([0, 1, tri.a2, tri.a3, tri.a4])
            omega = schwarz_from_caratheodory(TruncatedSeries([1, p1, p2, p3]))
            worst_p = max(worst_p, subordination_lhs(f, beta).max_abs_diff(compose(G, omega)))
            varpi = schwarz_from_caratheodory(TruncatedSeries([1, *q_side_solve(params, tri)]))
            worst_q = max(worst_q, subordination_lhs(revert(f), beta).max_abs_diff(compose(G, varpi)))

    worst_expansion = 0.0
    faulty = set()
    for beta, t in [(0.0, 0.6), (0.5, 0.75), (1.0, 0.9)]:
        params = ClassParams(beta, t)
        p1, p2, p3, q2, q3 = random_coefficient_tuples(1000, 37)
        direct = hankel2(closed_form_triple(params, p1, p2, p3, q2, q3))
        expansion = hankel2_expansion(params, p1, p2, p3, q2, q3)
        err = np.abs(direct - expansion) / np.maximum(np.abs(expansion), 1e-12)
        worst_expansion = max(worst_expansion, float(err.max()))
        faulty |= set(expansion_audit(params, 1000, seed=37)["printed"]["faulty_terms"])
    elapsed = time.perf_counter() - start
    ok = worst_p < 1e-12 and worst_q < 1e-12 and worst_expansion < 1e-10 and elapsed < 2.0
    acceptance(
        3, "Coefficient-system suite", ok,
        f"round trip p {worst_p:.2e} q {worst_q:.2e}, expansion {worst_expansion:.2e} (derived a4); "
        f"printed a4 localized to {sorted(faulty)}, {elapsed:.3f} s (< 2 s)",
    )
    assert ok
    assert faulty == {"p1*(p2-q2)", "(p2+q2)"}


def test_criterion_04_relaxation_domination(acceptance):
    start = time.perf_counter()
    f_viol = b_viol = 0
    worst_f = worst_b = -math.inf
    for k, (beta, t) in enumerate(CELLS):
        res = relaxation_domination(ClassParams(beta, t), 100_000, seed=100 + k, f_tol=1e-12, bound_tol=1e-9)
        f_viol += res.f_violations
        b_viol += res.bound_violations
        worst_f = max(worst_f, res.worst_f_margin)
        worst_b = max(worst_b, res.worst_bound_margin)
    elapsed = time.perf_counter() - start
    ok = f_viol == 0 and b_viol == 0 and elapsed < 30
    acceptance(
        4, "Relaxation domination (9 cells x 1e5)", ok,
        f"F violations {f_viol}, bound violations {b_viol}, worst margins {worst_f:.2e} / {worst_b:.2e}, "
        f"{elapsed:.2f} s (< 30 s)",
    )
    assert ok


def test_criterion_05_beta_zero_special_case(acceptance):
    start = time.perf_counter()
    misses = []
    worst_numeric = 0.0
    for t in np.round(np.arange(0.55, 0.951, 0.05), 2):
        params = ClassParams(0.0, float(t))
        bound = theorem_bound(params).bound
        numeric = maximize_f_over_box(params).value
        worst_numeric = max(worst_numeric, abs(numeric - bound))
        if abs(bound - 8 * t * t) > 1e-9:
            sampled = empirical_functional_max(params, 100_000, seed=5).value
            misses.append(f"t={t}: derived {bound:.6f} vs 8t^2 {8 * t * t:.6f} (sampled max {sampled:.6f})")
    elapsed = time.perf_counter() - start
    ok = not misses and worst_numeric < 1e-6 and elapsed < 10
    detail = (
        f"numeric vs derived {worst_numeric:.2e} (< 1e-6), {elapsed:.2f} s (< 10 s); "
        + ("all nine t match 8t^2" if not misses else "8t^2 exceeded: " + "; ".join(misses))
    )
    acceptance(5, "beta = 0 special case 8t^2", ok, detail)
    assert worst_numeric < 1e-6 and elapsed < 10
    assert not misses, detail


def test_criterion_06_printed_quarter(acceptance):
    bd = theorem_bound(ClassParams(1.0, math.sqrt(2) / 2), "printed")
    ok = abs(bd.bound - 0.25) <= 1e-9
    acceptance(6, "beta = 1, t = sqrt(2)/2 printed bound 1/4", ok, f"case {bd.case_id}, bound {bd.bound!r}")
    assert ok


def test_criterion_07_discrepancy_detection(acceptance):
    cfg = AuditConfig(samples=100_000, seed=0)
    at09 = cross_check(ClassParams(1.0, 0.9), cfg)
    at075 = cross_check(ClassParams(1.0, 0.75), cfg)

    # independent recomputation of both Delta values
    printed_oracle = oracles.delta_printed_u_form(1.0, 0.9)
    coeffs = oracles.interpolate_quartic(lambda x: h_value(ClassParams(1.0, 0.9), x))
    derived_oracle = 32 * oracles.scale_k(1.0) * coeffs[4]
    delta_ok = (
        abs(delta_printed(ClassParams(1.0, 0.9)) - printed_oracle) < 1e-9 * abs(printed_oracle)
        and abs(delta_derived(ClassParams(1.0, 0.9)) - derived_oracle) < 1e-7 * abs(derived_oracle)
        and round(printed_oracle, -1) == 4490
        and round(derived_oracle, -1) == -1320
        and at09.printed.delta == pytest.approx(printed_oracle)
        and at09.derived.delta == pytest.approx(derived_oracle)
    )
    flags_ok = FLAG_MISMATCH in at09.flags and FLAG_COROLLARY in at075.flags
    flags_ok = flags_ok and FLAG_INVARIANT not in at09.flags + at075.flags
    values_ok = abs(at075.derived_bound - 0.3467) < 5e-5 and abs(at075.corollary - 0.2461) < 5e-5

    proc = subprocess.run(
        [sys.executable, "-m", "hankel_audit", "verify", "--beta", "1", "--t", "0.75"],
        capture_output=True, check=False,
    )
    ok = delta_ok and flags_ok and values_ok and proc.returncode == 3
    acceptance(
        7, "Discrepancy detection", ok,
        f"Delta printed {printed_oracle:.2f} / derived {derived_oracle:.2f}; flags (1,0.9) {list(at09.flags)}, "
        f"(1,0.75) {list(at075.flags)}; derived {at075.derived_bound:.6f} vs t^2(1-t^2) {at075.corollary:.6f}; "
        f"verify exit {proc.returncode}",
    )
    assert ok


def test_criterion_08_boundary_argmax(acceptance):
    start = time.perf_counter()
    exceptions = []
    worst = -math.inf
    for beta in np.linspace(0, 1, 20):
        for t in np.linspace(0.5, 1, 22)[1:-1]:
            params = ClassParams(beta, t)
            for tau in np.linspace(0, 2, 20):
                res = maximize_f_on_square(params, float(tau))
                excess = res.value - h_value(params, float(tau))
                worst = max(worst, excess)
                if abs(excess) > 1e-9:
                    exceptions.append((float(beta), float(t), float(tau), excess))
    elapsed = time.perf_counter() - start
    ok = not exceptions and elapsed < 60
    acceptance(
        8, "Boundary-argmax audit (20x20x20)", ok,
        f"worst excess over F(1,1) {worst:.2e}, exceptions {len(exceptions)}, {elapsed:.2f} s (< 60 s)",
    )
    assert ok, exceptions[:10]


def test_criterion_09_fekete_szego(acceptance):
    values_ok = (
        abs(fekete_szego_classical_bound(0) - 3) < 1e-12
        and abs(fekete_szego_classical_bound(2) - 5) < 1e-12
        and abs(fekete_szego_classical_bound(0.5) - (1 + 2 * math.exp(-2))) < 1e-12
    )
    jumps = [
        abs(fekete_szego_classical_bound(mu - 1e-14) - fekete_szego_classical_bound(mu + 1e-14))
        for mu in (0.0, 1.0)
    ]
    jumps += [abs(fekete_szego_classical_bound(mu) - fekete_szego_classical_bound(mu - 1e-14)) for mu in (0.0, 1.0)]
    ok = values_ok and max(jumps) < 1e-12
    acceptance(9, "Fekete-Szego classical formula", ok, f"branch values ok {values_ok}, max jump {max(jumps):.2e}")
    assert ok


def test_criterion_10_determinism(acceptance):
    argv = [sys.executable, "-m", "hankel_audit", "verify", "--beta", "0.5", "--t", "0.8",
            "--seed", "123", "--samples", "100000", "--grid", "401", "--tau-grid", "4001"]
    first = subprocess.run(argv, capture_output=True, check=False)
    second = subprocess.run(argv, capture_output=True, check=False)
    threaded = subprocess.run(argv + ["--workers", "4"], capture_output=True, check=False)
    ok = first.stdout == second.stdout and first.stdout == threaded.stdout and first.returncode in (0, 3)
    acceptance(
        10, "Deterministic verify output", ok,
        f"{len(first.stdout)} bytes, identical across runs {first.stdout == second.stdout}, "
        f"identical with 4 workers {first.stdout == threaded.stdout}",
    )
    assert ok
