"""Compare the compiled and numpy kernels on the two hot loops.

    python benchmarks/bench_kernels.py --n 10 --m 200 --P 256
"""

import argparse
import timeit

import numpy as np

from amplicount import _kernels_py
from amplicount.amplification import walsh_hadamard

try:
    from amplicount import _kernels as compiled
except ImportError:
    compiled = None


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=10, help="data-register qubits")
    parser.add_argument("--m", type=int, default=200, help="Q iterations per q_iterate call")
    parser.add_argument("--P", type=int, default=256, help="rows for power_rows")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    N = 1 << args.n
    psi = walsh_hadamard(args.n).psi
    mask = (rng.random(N) < 0.01).astype(np.uint8)
    phi = varphi = -1.0 + 0j
    backends = {"python": _kernels_py}
    if compiled is not None:
        backends["compiled"] = compiled
    else:
        print("compiled extension not built; timing the numpy kernels only")

    results = {}
    for name, mod in backends.items():
        def run_q():
            v = psi.copy()
            mod.q_iterate(v, psi, mask, phi, varphi, args.m)

        def run_rows():
            rows = np.empty((args.P, N), dtype=np.complex128)
            rows[0] = psi
            mod.power_rows(rows, psi, mask, phi, varphi)

        q = min(timeit.repeat(run_q, number=1, repeat=args.repeat))
        r = min(timeit.repeat(run_rows, number=1, repeat=args.repeat))
        results[name] = (q, r)
        print(f"{name:>9}: q_iterate {q * 1e3:8.2f} ms   power_rows {r * 1e3:8.2f} ms")

    if "compiled" in results:
        pq, pr = results["python"]
        cq, cr = results["compiled"]
        print(f"  speedup: q_iterate x{pq / cq:.1f}   power_rows x{pr / cr:.1f}")


if __name__ == "__main__":
    main()
