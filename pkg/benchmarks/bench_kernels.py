"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat N]

Workloads come from the S3 reference configuration z = (4, 2, 165) (397-element monoid) and from
closing all of S4 x S4 inside the pair-subgroup machinery.
"""

import argparse
import time

import numpy as np

from cartanhunt import _accel
from cartanhunt.builtins import builtin_group, builtin_subgroup
from cartanhunt.monoid import build_biset, build_monoid


def workloads():
    S3 = builtin_group("S3")
    subs = [builtin_subgroup(S3, n) for n in ("diag", "Lb", "Lc")]
    ref = build_monoid(S3, build_biset(S3, subs, [4, 2, 165])).table
    small = build_monoid(S3, build_biset(S3, subs, [1, 1, 3])).table
    S4 = builtin_group("S4")
    n = S4.order
    gens = np.array([S4.index(g) * n for g in S4.generators]
                    + [S4.index(g) for g in S4.generators], dtype=np.int64)
    rng = np.random.default_rng(0)
    samples = [rng.integers(0, ref.shape[0], 10 ** 6) for _ in range(3)]
    return {
        "associativity, exhaustive (|M| = 73)": lambda m: m.check_associativity(small),
        "associativity, exhaustive (|M| = 397)": lambda m: m.check_associativity(ref),
        "associativity, 10^6 samples (|M| = 397)":
            lambda m: m.check_associativity_sampled(ref, *samples),
        "regular flags (|M| = 397)": lambda m: m.regular_flags(ref),
        "J-classes (|M| = 397)": lambda m: m.j_components(ref),
        "closure of S4 x S4 (576 pairs)": lambda m: m.closure_pairs(S4.mul, gens, 10 ** 6),
    }


def timed(fn, mod, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(mod)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--skip-slow", action="store_true",
                    help="skip the exhaustive 397-element check on the Python backend")
    args = ap.parse_args()
    backends = _accel.BACKENDS
    if "cython" not in backends:
        print("compiled extension not built; only the Python backend is available")
    names = sorted(backends, reverse=True)
    print(f"{'workload':44s}" + "".join(f"{n:>12s}" for n in names) + "     speedup")
    for label, fn in workloads().items():
        row = {}
        for name in names:
            if args.skip_slow and name == "python" and "exhaustive (|M| = 397)" in label:
                row[name] = None
                continue
            row[name] = timed(fn, backends[name], args.repeat if name != "python" else 1)
        cells = "".join(f"{row[n]:11.4f}s" if row[n] is not None else f"{'-':>12s}"
                        for n in names)
        speed = ""
        if row.get("cython") and row.get("python"):
            speed = f"{row['python'] / row['cython']:10.1f}x"
        print(f"{label:44s}{cells}{speed}")


if __name__ == "__main__":
    main()
