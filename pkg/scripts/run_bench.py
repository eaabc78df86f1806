"""Reproduce the benchmark tables and write one CSV/JSON pair per table.

    python scripts/run_bench.py --tables 1 2 3 4 5 --out results
    python scripts/run_bench.py --tables 6 --counts-only

Table 6 rows simulate 20 and 21 qubits and take a few minutes each.
"""

import argparse
import time
from pathlib import Path

from qsvt_advdiff.bench import TABLES
from qsvt_advdiff.cli import cmd_bench_rows, format_bench


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tables", type=int, nargs="+", default=[1, 2, 3, 4, 5], choices=sorted(TABLES))
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--counts-only", action="store_true", help="gate counts without simulation")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for tid in args.tables:
        t0 = time.perf_counter()
        rows = cmd_bench_rows(tid, None, counts_only=args.counts_only, workers=args.workers)
        text = format_bench(rows)
        (args.out / f"table{tid}.csv").write_text(text)
        print(text, end="")
        print(f"# table {tid}: {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
