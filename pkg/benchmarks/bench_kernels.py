"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N] [--end-to-end]

Each workload is run on both backends; outputs are checked for equality
before timing.
"""

import argparse
import os
import subprocess
import sys
import time
import timeit

from divpow import _kernels_py as pure

try:
    from divpow import _kernels as compiled
except ImportError:
    compiled = None


def _tree(n):
    # right-nested bracket [1;[2;[3;..]]], the worst case for combing
    t = n
    for k in range(n - 1, 0, -1):
        t = (k, t)
    return t


WORKLOADS = {
    "interval_fillings 9=(3,3,3)": ("interval_fillings", (tuple(range(1, 10)), (3, 3, 3))),
    "young_fillings 9 in three blocks": (
        "young_fillings",
        ([(1, 4, 7), (2, 5, 8), (3, 6, 9)], [(1, 2), (2, 1), (1, 1, 1)]),
    ),
    "chunk_canonical 3x3": ("chunk_canonical", ((9, 8, 7, 3, 2, 1, 6, 5, 4), [(0, 3, 3)])),
    "lie_tree_normal_form depth 7": ("lie_tree_normal_form", (_tree(7),)),
    "lie_tree_normal_form depth 8": ("lie_tree_normal_form", (_tree(8),)),
}


END_TO_END = [
    ["poisson-frobenius", "--char", "3"],
    ["check-beta", "--char", "3", "--operad", "lie"],
]


def end_to_end():
    """Wall time of whole scenarios with and without the compiled kernels."""
    print(f"{'scenario':36} {'python s':>10} {'compiled s':>12}")
    for argv in END_TO_END:
        times = []
        for pure_only in (True, False):
            env = dict(os.environ)
            env.pop("DIVPOW_PURE_PYTHON", None)
            if pure_only:
                env["DIVPOW_PURE_PYTHON"] = "1"
            t0 = time.perf_counter()
            subprocess.run([sys.executable, "-m", "divpow", *argv], env=env, stdout=subprocess.DEVNULL, check=False)
            times.append(time.perf_counter() - t0)
        print(f"{' '.join(argv):36} {times[0]:10.2f} {times[1]:12.2f}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--end-to-end", action="store_true", help="also time whole CLI scenarios")
    args = ap.parse_args()
    if compiled is None:
        print("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
    print(f"{'workload':36} {'python ms':>10} {'compiled ms':>12} {'speedup':>8}")
    for label, (name, call_args) in WORKLOADS.items():
        f_py = getattr(pure, name)
        number = 3
        t_py = min(timeit.repeat(lambda: f_py(*call_args), number=number, repeat=args.repeat)) / number
        if compiled is None:
            print(f"{label:36} {t_py * 1e3:10.3f} {'-':>12} {'-':>8}")
            continue
        f_c = getattr(compiled, name)
        if f_c(*call_args) != f_py(*call_args):
            raise SystemExit(f"backends disagree on {label}")
        t_c = min(timeit.repeat(lambda: f_c(*call_args), number=number, repeat=args.repeat)) / number
        print(f"{label:36} {t_py * 1e3:10.3f} {t_c * 1e3:12.3f} {t_py / t_c:8.2f}")
    if args.end_to_end:
        print()
        end_to_end()


if __name__ == "__main__":
    main()
