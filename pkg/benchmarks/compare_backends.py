"""Compare the compiled kernel against the pure-python fallback.

Usage: python benchmarks/compare_backends.py [n_geodesics]
"""

import sys

from monoholo import backend
from monoholo.field import abelian_field, hedgehog_field


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 10
    print(f"backend available: compiled={backend.HAVE_COMPILED}")
    for field in (abelian_field(1.0), hedgehog_field(1.0)):
        out = backend.benchmark(field, n_geodesics=n, T=18.0)
        per = out["per_solve_seconds"]
        line = f"{field.label:20s}"
        for mode in ("compiled", "python"):
            if mode in per:
                line += f"  {mode}: {per[mode] * 1e3:8.2f} ms/solve"
        if "compiled" in per and "python" in per:
            line += f"  speedup: {per['python'] / per['compiled']:6.1f}x"
            line += f"  max pairing diff: {out['max_pairing_diff']:.2e}"
        print(line)


if __name__ == "__main__":
    main()
