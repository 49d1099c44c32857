"""Benchmark the pure-Python and compiled short-vector enumeration kernels.

Run as a script:  python benchmarks/bench_enum.py
"""

import time

from latk import roots
from latk.roots import ade_lattice, short_vectors

CASES = [
    ("E_8 roots", ("E", 8), 2),
    ("D_16 roots", ("D", 16), 2),
    ("D_24 roots", ("D", 24), 2),
    ("A_24 norm 4", ("A", 24), 4),
    ("D_24 norm 4", ("D", 24), 4),
]


def positive_gram(kind, rank):
    return [[-e for e in row] for row in ade_lattice(kind, rank).gram_rows()]


def best_of(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    has_compiled = roots._enumcore is not None
    print(f"compiled kernel available: {has_compiled}")
    header = f"{'case':<14} {'vectors':>8} {'pure':>10}"
    if has_compiled:
        header += f" {'compiled':>10} {'speedup':>8}"
    print(header)
    for name, (kind, rank), target in CASES:
        q = positive_gram(kind, rank)
        t_pure, out_pure = best_of(lambda: short_vectors(q, target, backend="pure"))
        line = f"{name:<14} {len(out_pure):>8} {t_pure:>9.3f}s"
        if has_compiled:
            t_comp, out_comp = best_of(
                lambda: short_vectors(q, target, backend="compiled")
            )
            assert out_comp == out_pure
            line += f" {t_comp:>9.3f}s {t_pure / t_comp:>7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
