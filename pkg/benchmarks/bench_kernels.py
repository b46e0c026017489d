"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py --n 18 --repeat 5

Prints best-of-``repeat`` wall time per kernel and backend, plus the
speedup of the compiled build where it is available.
"""

import argparse

from matchshap.bench import run_benchmark


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, nargs="+", default=[12, 16, 18])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print(f"{'kernel':<28}{'n':>4}{'python s':>12}{'compiled s':>12}{'speedup':>10}")
    for n in args.n:
        rows = run_benchmark(n, args.repeat, args.seed)
        by_kernel = {}
        for r in rows:
            by_kernel.setdefault(r["kernel"], {})[r["backend"]] = r["seconds"]
        for kernel, t in by_kernel.items():
            py, cc = t["python"], t.get("compiled")
            if cc is None:
                print(f"{kernel:<28}{n:>4}{py:>12.4f}{'-':>12}{'-':>10}")
            else:
                print(f"{kernel:<28}{n:>4}{py:>12.4f}{cc:>12.4f}{py / cc:>9.1f}x")


if __name__ == "__main__":
    main()
