#!/usr/bin/env python3
"""Compare the compiled and pure-Python integer kernels.

Part one times the three kernel routines in-process on identical random
inputs, checking that the implementations agree before timing them.
Part two times an end-to-end depth-9 derivation per backend in
subprocesses, since the backend is chosen once at import.
"""

import argparse
import os
import random
import statistics
import subprocess
import sys
import time

from cfaccel import _kernels_py

try:
    from cfaccel import _kernels
except ImportError:  # extension not built
    _kernels = None


def signed_ints(rng, count, bits):
    return [rng.getrandbits(bits) - (1 << (bits - 1)) for _ in range(count)]


def time_call(fn, args, repeat):
    samples = []
    for _ in range(repeat):
        started = time.perf_counter()
        fn(*args)
        samples.append(time.perf_counter() - started)
    return statistics.median(samples)


def micro_cases(rng, heavy):
    degree = 160 if heavy else 64
    bits = 512 if heavy else 128
    a = signed_ints(rng, degree + 1, bits)
    b = signed_ints(rng, degree + 1, bits)
    den = signed_ints(rng, degree + 1, bits)
    den[0] = den[0] | 1  # keep the constant term nonzero
    return [
        ("poly_mul", (a, b)),
        ("taylor_shift", (a, 3)),
        ("series_div", (a, den, degree)),
    ]


def run_micro(repeat, heavy):
    rng = random.Random(20260823)
    print(f"kernel micro benchmarks (median of {repeat} runs)")
    header = f"{'routine':<14}{'python':>12}{'cython':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, args in micro_cases(rng, heavy):
        pure_fn = getattr(_kernels_py, name)
        pure = time_call(pure_fn, args, repeat)
        if _kernels is None:
            print(f"{name:<14}{pure * 1e3:>10.2f}ms{'-':>12}{'-':>10}")
            continue
        fast_fn = getattr(_kernels, name)
        if fast_fn(*args) != pure_fn(*args):
            raise AssertionError(f"{name}: backends disagree on the bench input")
        fast = time_call(fast_fn, args, repeat)
        print(
            f"{name:<14}{pure * 1e3:>10.2f}ms{fast * 1e3:>10.2f}ms"
            f"{pure / fast:>9.1f}x"
        )


END_TO_END = (
    "import time\n"
    "started = time.perf_counter()\n"
    "from cfaccel.kernels import BACKEND\n"
    "from cfaccel.model import resolve_series\n"
    "from cfaccel.solver import correction_profile\n"
    "term = resolve_series('pi-bbp')\n"
    "loaded = time.perf_counter()\n"
    "correction_profile(term, 9)\n"
    "solved = time.perf_counter()\n"
    "print(f'{BACKEND:<8} import+catalog {loaded - started:6.3f}s"
    "   depth-9 solve {solved - loaded:6.3f}s')\n"
)


def run_end_to_end():
    print()
    print("end-to-end depth-9 derivation (one subprocess per backend)")
    for pure in (False, True):
        env = dict(os.environ)
        env.pop("CFACCEL_PURE", None)
        if pure:
            env["CFACCEL_PURE"] = "1"
        proc = subprocess.run(
            [sys.executable, "-c", END_TO_END],
            env=env,
            capture_output=True,
            text=True,
            timeout=600,
        )
        sys.stdout.write(proc.stdout)
        if proc.returncode:
            sys.stderr.write(proc.stderr)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=9, help="timing repeats")
    parser.add_argument(
        "--heavy",
        action="store_true",
        help="larger degrees and coefficient sizes",
    )
    parser.add_argument("--skip-end-to-end", action="store_true")
    args = parser.parse_args()
    if _kernels is None:
        print("compiled extension not available; timing pure backend only")
    run_micro(args.repeat, args.heavy)
    if not args.skip_end_to_end:
        run_end_to_end()


if __name__ == "__main__":
    main()
