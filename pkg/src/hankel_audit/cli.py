"""Command-line front end.

Exit codes: 0 clean, 3 printed/corollary findings only, 1 invariant
violation, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

from .caratheodory import MODES, sample_batch
from .class_coefficients import ClassParams, closed_form_triple, fekete_szego_classical_bound, fekete_szego_functional
from .errors import DomainError
from .hankel_bounds import VARIANTS, theorem_bound
from .selfcheck import run_selfcheck
from .verification import (
    EXIT_CLEAN,
    EXIT_FINDING,
    EXIT_USAGE,
    EXIT_VIOLATION,
    AuditConfig,
    _chunks,
    cross_check,
    exit_code,
    region_map,
)

SEED_ENV = "HANKEL_AUDIT_SEED"

# DomainError.param -> command-line flag
FLAG_NAMES = {
    "count": "--samples",
    "resolution": "--grid",
    "tau_resolution": "--tau-grid",
}


@dataclass
class SweepRow:
    beta: float
    t: float
    variant: str
    delta: float
    c: float
    case_id: str
    tau0: Optional[float]
    h_zero: float
    h_end: float
    h_tau0: Optional[float]
    bound: float
    numeric_bound: float
    empirical_max: float
    flags: str

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def to_csv(self) -> list[str]:
        out = []
        for name in self.columns():
            v = getattr(self, name)
            if v is None:
                out.append("")
            elif isinstance(v, float):
                out.append(f"{v:.17g}")
            else:
                out.append(str(v))
        return out

    @classmethod
    def from_csv(cls, row: dict) -> SweepRow:
        text = {"variant", "case_id", "flags"}
        optional = {"tau0", "h_tau0"}
        kwargs = {}
        for name in cls.columns():
            raw = row[name]
            if name in text:
                kwargs[name] = raw
            elif name in optional and raw == "":
                kwargs[name] = None
            else:
                kwargs[name] = float(raw)
        return cls(**kwargs)


def parse_range(spec: str) -> list[float]:
    """``A:B:N`` -> N equally spaced points from A to B inclusive; a bare number is one point."""
    parts = spec.split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) != 3:
            raise ValueError
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A:B:N, got {spec!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"point count must be positive, got {n}")
    if n == 1:
        return [a]
    return [float(v) for v in np.linspace(a, b, n)]


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise DomainError("seed", f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _params(args) -> ClassParams:
    return ClassParams(args.beta, args.t, args.allow_exterior)


def _config(args) -> AuditConfig:
    seed = default_seed() if args.seed is None else args.seed
    if args.samples < 1:
        raise DomainError("samples", f"must be at least 1, got {args.samples}")
    return AuditConfig(args.samples, seed, args.grid, args.tau_grid, args.mode, args.workers)


def cmd_bound(args, out) -> int:
    params = _params(args)
    bd = theorem_bound(params, args.variant)
    out.write(_dump({"beta": params.beta, "t": params.t, **bd.to_dict()}))
    return EXIT_CLEAN


def cmd_verify(args, out) -> int:
    report = cross_check(_params(args), _config(args))
    out.write(_dump(report.to_dict()))
    return report.exit_code


def sweep_rows(betas, ts, config: AuditConfig, allow_exterior: bool = False) -> list[SweepRow]:
    rows = []
    for b in betas:
        for t in ts:
            report = cross_check(ClassParams(b, t, allow_exterior), config)
            for bd in (report.printed, report.derived):
                rows.append(
                    SweepRow(
                        report.beta, report.t, bd.variant, bd.delta, bd.c_coef, bd.case_id,
                        bd.tau0, bd.h_zero, bd.h_end, bd.h_tau0, bd.bound,
                        report.numeric_bound, report.empirical_max, ";".join(report.flags),
                    )
                )
    return rows


def write_table(path: str, fmt: str, columns: list[str], rows: list[list[str]], records: list[dict]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if fmt == "csv":
            writer = csv.writer(fh)
            writer.writerow(columns)
            writer.writerows(rows)
        else:
            fh.write(_dump(records))


def cmd_sweep(args, out) -> int:
    config = _config(args)
    rows = sweep_rows(args.beta, args.t, config, args.allow_exterior)
    write_table(args.out, args.format, SweepRow.columns(), [r.to_csv() for r in rows], [vars(r) for r in rows])
    flags = {f for r in rows for f in r.flags.split(";") if f}
    code = exit_code(flags)
    out.write(_dump({"rows": len(rows), "out": args.out, "flags": sorted(flags), "exit_code": code}))
    return code


def cmd_regions(args, out) -> int:
    n = args.resolution
    if n < 1:
        raise DomainError("resolution", f"must be positive, got {n}")
    betas = [0.0] if n == 1 else list(np.linspace(0.0, 1.0, n))
    ts = list(np.linspace(0.5, 1.0, n + 2)[1:-1])
    cells = region_map(betas, ts, workers=args.workers)
    columns = list(cells[0].to_dict())
    records = [c.to_dict() for c in cells]
    rows = [
        ["" if v is None else f"{v:.17g}" if isinstance(v, float) else str(v) for v in rec.values()]
        for rec in records
    ]
    write_table(args.out, args.format, columns, rows, records)
    disagree = sum(not c.agree for c in cells)
    out.write(_dump({"cells": len(cells), "disagree": disagree, "out": args.out}))
    return EXIT_FINDING if disagree else EXIT_CLEAN


def cmd_fs(args, out) -> int:
    if args.beta is None and args.t is None:
        if args.mu is None:
            raise DomainError("mu", "give --mu for the classical bound, or --beta and --t to sample")
        out.write(_dump({"mu": args.mu, "classical_bound": fekete_szego_classical_bound(args.mu)}))
        return EXIT_CLEAN
    if args.beta is None or args.t is None:
        raise DomainError("beta" if args.beta is None else "t", "sampling needs both --beta and --t")
    params = _params(args)
    config = _config(args)
    mus = [args.mu] if args.mu is not None else args.mu_grid
    best = [(-1.0, -1)] * len(mus)
    for start, n in _chunks(config.samples, 1 << 16):
        batch = sample_batch(start, n, config.seed, config.mode, params)
        p1, p2, p3 = batch.p_coefficients()
        _, q2, q3 = batch.q_coefficients()
        tri = closed_form_triple(params, p1, p2, p3, q2, q3)
        for k, mu in enumerate(mus):
            vals = np.abs(fekete_szego_functional(tri, mu))
            i = int(np.argmax(vals))
            if vals[i] > best[k][0]:
                best[k] = (float(vals[i]), start + i)
    rows = [
        {"mu": mu, "empirical_max": v, "witness_index": idx, "classical_bound": fekete_szego_classical_bound(mu)}
        for mu, (v, idx) in zip(mus, best)
    ]
    out.write(_dump({"beta": params.beta, "t": params.t, "seed": config.seed, "samples": config.samples, "rows": rows}))
    return EXIT_CLEAN


def cmd_selfcheck(args, out) -> int:
    result = run_selfcheck()
    out.write(_dump(result))
    return EXIT_CLEAN if result["passed"] else EXIT_VIOLATION


def _add_params(p, required: bool = True) -> None:
    p.add_argument("--beta", type=float, required=required, help="class parameter beta in [0, 1]")
    p.add_argument("--t", type=float, required=required, help="class parameter t in (1/2, 1)")
    p.add_argument("--allow-exterior", action="store_true", help="accept t outside (1/2, 1)")


def _add_audit(p, samples: int, grid: int, tau_grid: int) -> None:
    p.add_argument("--samples", type=int, default=samples)
    p.add_argument("--seed", type=int, default=None, help=f"defaults to ${SEED_ENV}, else 0")
    p.add_argument("--grid", type=int, default=grid, help="points per side of the (xi, eta) grid")
    p.add_argument("--tau-grid", type=int, default=tau_grid, help="points of the tau grid")
    p.add_argument("--mode", choices=MODES, default="relaxation")
    p.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hankel-audit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="piecewise bound breakdown as JSON")
    _add_params(p)
    p.add_argument("--variant", choices=VARIANTS, default="derived")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", help="audit one (beta, t) cell")
    _add_params(p)
    _add_audit(p, samples=100_000, grid=401, tau_grid=4001)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="audit a (beta, t) grid into a table")
    p.add_argument("--beta", type=parse_range, required=True, help="A:B:N")
    p.add_argument("--t", type=parse_range, required=True, help="A:B:N")
    p.add_argument("--allow-exterior", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_audit(p, samples=10_000, grid=101, tau_grid=401)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("regions", help="case structure of both variants over the parameter square")
    p.add_argument("--resolution", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("fs", help="Fekete-Szego functional: classical bound or sampled maxima")
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--mu-grid", type=parse_range, default=parse_range("-1:2:13"))
    _add_params(p, required=False)
    _add_audit(p, samples=100_000, grid=401, tau_grid=4001)
    p.set_defaults(func=cmd_fs)

    p = sub.add_parser("selfcheck", help="run the invariant suite")
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv: Optional[list[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_CLEAN
    try:
        return args.func(args, out)
    except DomainError as exc:
        flag = FLAG_NAMES.get(exc.param, "--" + exc.param.replace("_", "-"))
        print(f"hankel-audit: error: {flag}: {str(exc).split(': ', 1)[-1]}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
