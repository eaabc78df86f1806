"""Grid-refinement study: error against the exact solution and the observed order.

    python scripts/convergence.py --ic wavepacket --c 1 --nu 1e-3 --T 1.5 --p 1 2 3 --n 5 6 7 8
"""

import argparse
import math

from qsvt_advdiff.reference import InitialCondition
from qsvt_advdiff.solver import ProblemSpec, solve_1d
from qsvt_advdiff.stateprep import ancilla_count


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ic", default="gaussian")
    ap.add_argument("--c", type=float, default=1.0)
    ap.add_argument("--nu", type=float, default=0.0)
    ap.add_argument("--T", type=float, default=1.0)
    ap.add_argument("--p", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--n", type=int, nargs="+", default=[5, 6, 7, 8])
    args = ap.parse_args()
    print("order,n,qubits,error,success,observed_order")
    for p in args.p:
        prev = None
        for n in sorted(args.n):
            if n < ancilla_count(p):  # grid too small for the stencil register
                continue
            spec = ProblemSpec(ic=InitialCondition(args.ic), c=args.c, nu=args.nu, T=args.T, p=p, n=n)
            rep = solve_1d(spec)
            rate = math.log2(prev / rep.error_vs_exact) if prev else float("nan")
            print(f"{2 * p},{n},{rep.total_qubits},{rep.error_vs_exact:.4e},{rep.success_rate:.4f},{rate:.2f}")
            prev = rep.error_vs_exact


if __name__ == "__main__":
    main()
