#!/usr/bin/env python3
"""Compare the numba and numpy mod-p rank kernels.

Random integer matrices of a few shapes plus the real strand matrices of one
resolution.  Prints a table, or JSON with --json.
"""

import argparse
import json
import time

import numpy as np

from restricted_powers import _kernels
from restricted_powers._kernels import P_DEFAULT, rank_mod_p

SEED = 7
RUNS = 5


def time_it(fn, runs=RUNS):
    fn()  # warm-up (and JIT compile)
    best = float("inf")
    for _ in range(runs):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def random_cases(sizes):
    rng = np.random.default_rng(SEED)
    for n in sizes:
        # sparse-ish with small entries, like a strand matrix
        a = rng.integers(-3, 4, size=(n, n)) * (rng.random((n, n)) < 0.2)
        yield f"random {n}x{n}", a.astype(np.int64)


def strand_cases():
    from restricted_powers.combinat import SetupConfig
    from restricted_powers.complexes import build_L_complex
    from restricted_powers.oracle import StrandEngine, label_box, _to_mod

    cfg = SetupConfig(4, 3, (3, 3, 3, 3))
    L = build_L_complex(cfg)
    eng = StrandEngine(L)
    m = label_box(L)
    fibers = {k: eng.fiber(k, m) for k in L.degrees()}
    for k in L.degrees():
        if k == 0:
            continue
        M = eng.matrix(k, m, fibers)
        if M and M[0]:
            a = np.array([[_to_mod(x, P_DEFAULT) for x in row] for row in M], dtype=np.int64)
            yield f"strand {cfg.n},{cfg.d} deg {k} {a.shape[0]}x{a.shape[1]}", a


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="50,100,200,400")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is unavailable (or RESTRICTED_POWERS_BACKEND=numpy); nothing to compare")

    sizes = [int(s) for s in args.sizes.split(",")]
    rows = []
    cases = list(random_cases(sizes)) + list(strand_cases())
    for name, a in cases:
        r1 = rank_mod_p(a, backend="numba")
        r2 = rank_mod_p(a, backend="numpy")
        if r1 != r2:
            raise SystemExit(f"{name}: backends disagree ({r1} vs {r2})")
        t_nb = time_it(lambda: rank_mod_p(a, backend="numba"))
        t_np = time_it(lambda: rank_mod_p(a, backend="numpy"))
        rows.append({"case": name, "rank": r1, "numba_s": t_nb, "numpy_s": t_np,
                     "speedup": t_np / t_nb if t_nb else float("inf")})

    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'case':<34}{'rank':>6}{'numba ms':>11}{'numpy ms':>11}{'ratio':>8}")
    for r in rows:
        print(f"{r['case']:<34}{r['rank']:>6}{r['numba_s'] * 1e3:>11.3f}"
              f"{r['numpy_s'] * 1e3:>11.3f}{r['speedup']:>8.1f}")


if __name__ == "__main__":
    main()
