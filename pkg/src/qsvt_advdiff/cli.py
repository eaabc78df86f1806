"""Command-line front end: ``solve``, ``bench`` and ``angles``.

Exit codes: 0 success, 2 configuration error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .bench import TABLES
from .circuit import CircuitError
from .qsp import CACHE_ENV, QSPError, solve_angles
from .reference import InitialCondition
from .solver import ProblemSpec, SolveReport, SolverError, dry_run, gate_report, plan_axis, solve

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class ConfigError(ValueError):
    pass


def load_schema() -> dict:
    return json.loads(resources.files(__package__).joinpath("config.schema.json").read_text())


def parse_config(raw: dict) -> tuple[ProblemSpec, dict]:
    """Validate ``raw`` against the schema and build a ProblemSpec plus output options."""
    try:
        jsonschema.validate(raw, load_schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config error at {where}: {exc.message}") from None
    ic_raw = raw["ic"]
    try:
        ic = InitialCondition(ic_raw["kind"], dict(ic_raw.get("params", {})), float(raw.get("d", 4.0)),
                              ic_raw.get("N0"))
        c = raw["c"]
        spec = ProblemSpec(
            dim=raw["dim"], c=tuple(c) if isinstance(c, list) else float(c), nu=float(raw["nu"]),
            d=float(raw.get("d", 4.0)), T=float(raw["T"]), p=raw["p"], n=raw["n"], ic=ic,
            eps_poly=float(raw.get("eps_poly", 1e-8)), target_scale=float(raw.get("target_scale", 1.0)),
            eps_target=float(raw.get("eps_target", 1e-3)), angle_tol=float(raw.get("angle_tol", 1e-12)),
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"config error: {exc}") from None
    opts = {
        "output_dir": raw.get("output_dir", "."),
        "prefix": raw.get("prefix", "run"),
        "cache_dir": raw.get("cache_dir"),
    }
    return spec, opts


def _fmt(v: float) -> str:
    return repr(float(v))


def _spec_echo(spec: ProblemSpec) -> dict:
    ic = spec.ic
    params = {k: (v.tolist() if isinstance(v, np.ndarray) and not np.iscomplexobj(v)
                  else [[float(z.real), float(z.imag)] for z in v] if isinstance(v, np.ndarray) else v)
              for k, v in sorted(ic.params.items())}
    return {
        "dim": spec.dim, "c": list(spec.velocity) if spec.dim == 2 else spec.velocity[0],
        "nu": spec.nu, "d": spec.d, "T": spec.T, "p": spec.p, "n": spec.n,
        "ic": {"kind": ic.kind, "params": params, "N0": ic.N0},
        "eps_poly": spec.eps_poly, "target_scale": spec.target_scale,
        "eps_target": spec.eps_target, "angle_tol": spec.angle_tol,
    }


def report_summary(spec: ProblemSpec, rep: SolveReport) -> dict:
    deg = rep.degrees
    return {
        "version": __version__,
        "spec": _spec_echo(spec),
        "n": rep.n,
        "error": rep.error_vs_exact,
        "error_vs_exact": rep.error_vs_exact,
        "error_vs_semidiscrete": rep.error_vs_semidiscrete,
        "success_rate": rep.success_rate,
        "predicted_success": rep.predicted_success,
        "one_qubit_gates": rep.gate_counts.one_qubit,
        "cnot_gates": rep.gate_counts.cnot,
        "total_qubits": rep.total_qubits,
        "queries": rep.queries,
        "degrees": {"R1": deg.R1, "R2": deg.R2, "M1": deg.M1, "M2": deg.M2,
                    "even_degree": deg.even_degree, "odd_degree": deg.odd_degree},
        "theory": rep.theory.as_dict() if rep.theory is not None else None,
    }


def _grid_rows(spec: ProblemSpec, n: int, *columns: np.ndarray):
    N = 1 << n
    x = np.arange(N) * spec.d / N
    if spec.dim == 1:
        for i in range(N):
            yield [_fmt(x[i])] + [_fmt(col[i]) for col in columns]
    else:
        for iy in range(N):
            for ix in range(N):
                yield [_fmt(x[ix]), _fmt(x[iy])] + [_fmt(col[iy, ix]) for col in columns]


def _write_csv(path: Path, header: list[str], rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    path.write_text(buf.getvalue())


def write_outputs(spec: ProblemSpec, rep: SolveReport, out_dir: Path, prefix: str) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    axes = ["x"] if spec.dim == 1 else ["x", "y"]
    sol = out_dir / f"{prefix}_solution.csv"
    ref = out_dir / f"{prefix}_reference.csv"
    summ = out_dir / f"{prefix}_summary.json"
    _write_csv(sol, axes + ["value"], _grid_rows(spec, rep.n, rep.grid_solution))
    _write_csv(ref, axes + ["value", "exact", "semidiscrete"],
               _grid_rows(spec, rep.n, rep.grid_solution, rep.exact, rep.semidiscrete))
    summ.write_text(json.dumps(report_summary(spec, rep), indent=2, sort_keys=True) + "\n")
    return [sol, ref, summ]


def cmd_solve(args) -> int:
    try:
        raw = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        spec, opts = parse_config(raw)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.dry_run:
            print(json.dumps(dry_run(spec), indent=2, sort_keys=True))
            return EXIT_OK
        rep = solve(spec, opts["cache_dir"])
    except (SolverError, QSPError, CircuitError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    out_dir = Path(args.output_dir or opts["output_dir"])
    for path in write_outputs(spec, rep, out_dir, opts["prefix"]):
        print(path)
    return EXIT_OK


BENCH_COLUMNS = [
    "table", "order", "spq",
    "qubits_published", "qubits", "error_published", "error", "success_published", "success",
    "one_qubit_published", "one_qubit", "cnot_published", "cnot",
]


def run_bench_row(table_id: int, index: int, counts_only: bool = False, cache_dir=None) -> dict:
    table = TABLES[table_id]
    row = table.rows[index]
    spec = table.spec(row)
    if counts_only:
        counts, width = gate_report(spec, cache_dir)
        err = succ = float("nan")
    else:
        rep = solve(spec, cache_dir)
        counts, width, err, succ = rep.gate_counts, rep.total_qubits, rep.error_vs_exact, rep.success_rate
    return {
        "table": table_id, "order": row.order, "spq": row.spq,
        "qubits_published": row.total_qubits, "qubits": width,
        "error_published": row.error, "error": err,
        "success_published": row.success, "success": succ,
        "one_qubit_published": row.one_qubit, "one_qubit": counts.one_qubit,
        "cnot_published": row.cnot, "cnot": counts.cnot,
    }


def _star(args):
    return run_bench_row(*args)


def cmd_bench_rows(table_id: int, rows=None, counts_only: bool = False, workers: int = 1,
                   cache_dir=None) -> list[dict]:
    table = TABLES[table_id]
    idx = list(range(len(table.rows))) if rows is None else list(rows)
    for i in idx:
        if not 0 <= i < len(table.rows):
            raise ConfigError(f"table {table_id} has rows 1..{len(table.rows)}")
    jobs = [(table_id, i, counts_only, cache_dir) for i in idx]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_star, jobs))
    return [_star(j) for j in jobs]


def format_bench(results: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_COLUMNS)
    for r in results:
        w.writerow([r[k] if isinstance(r[k], int) else f"{r[k]:.4e}" if "error" in k else
                    f"{r[k]:.4f}" if "success" in k else r[k] for k in BENCH_COLUMNS])
    return buf.getvalue()


def cmd_bench(args) -> int:
    rows = None
    if args.rows:
        try:
            rows = [int(s) - 1 for s in args.rows.split(",") if s.strip()]
        except ValueError:
            print("config error: --rows takes comma-separated row numbers", file=sys.stderr)
            return EXIT_CONFIG
    try:
        results = cmd_bench_rows(args.table, rows, args.counts_only, args.workers, args.cache_dir)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, QSPError, CircuitError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = format_bench(results)
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
        out.with_suffix(".json").write_text(json.dumps(results, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_angles(args) -> int:
    """Solve and cache the phase sequences of every benchmark row up to a degree cap."""
    cache = args.cache_dir or os.environ.get(CACHE_ENV)
    if not cache:
        print(f"config error: pass --cache-dir or set {CACHE_ENV}", file=sys.stderr)
        return EXIT_CONFIG
    done = 0
    try:
        for tid in sorted(TABLES):
            table = TABLES[tid]
            for row in table.rows:
                spec = table.spec(row)
                for c in spec.velocity:
                    plan = plan_axis(spec, c, row.spq)
                    de = max(plan.degrees.even_degree, 2)
                    if (de + 1 if plan.parallel else de) > args.degree_cap:
                        continue
                    solve_angles(plan.q_even, args.tol, cache, degree=de)
                    done += 1
                    if plan.parallel:
                        solve_angles(plan.q_odd, args.tol, cache, degree=de + 1)
                        done += 1
    except QSPError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(f"{done} sequences cached in {cache}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qsvt-advdiff", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="run one configuration")
    s.add_argument("--config", required=True)
    s.add_argument("--dry-run", action="store_true", help="plan only")
    s.add_argument("--output-dir", default=None)
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="reproduce a benchmark table")
    b.add_argument("--table", type=int, required=True, choices=sorted(TABLES))
    b.add_argument("--rows", default=None, help="comma-separated 1-based row numbers")
    b.add_argument("--counts-only", action="store_true", help="build circuits and count gates only")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--out", default=None, help="write CSV here and JSON next to it")
    b.add_argument("--cache-dir", default=None)
    b.set_defaults(func=cmd_bench)

    a = sub.add_parser("angles", help="warm the phase cache")
    a.add_argument("--degree-cap", type=int, required=True)
    a.add_argument("--tol", type=float, default=1e-12)
    a.add_argument("--cache-dir", default=None)
    a.set_defaults(func=cmd_angles)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
