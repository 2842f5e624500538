"""Compare the numba and numpy backends of the two hot kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import math
import timeit

import numpy as np

from dok import _accel


def _cases():
    rng = np.random.default_rng(7)
    for n in (101, 10_001, 1_000_001):
        a = rng.standard_normal(n)
        b = rng.standard_normal(n)
        yield f"neumaier_dot n={n}", (_accel.neumaier_dot_numba, _accel.neumaier_dot_numpy), (a, b)
    z1 = 0.1 * (0.3 + 1.0 / (2.0 * math.pi))
    z2 = 0.1 * (0.3 - 1.0 / (2.0 * math.pi))
    for terms in (1_000, 100_000, 1_000_000):
        yield f"pole_series terms={terms}", (_accel.pole_series_numba, _accel.pole_series_numpy), (z1, z2, terms)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if not _accel.NUMBA_AVAILABLE:
        parser.error("numba backend unavailable (unset DOK_DISABLE_NUMBA or install numba)")

    print(f"{'case':<28}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}{'rel diff':>12}")
    for label, (fast, slow), call_args in _cases():
        fast(*call_args)  # compile outside the timing
        t_fast = min(timeit.repeat(lambda: fast(*call_args), number=1, repeat=args.repeat))
        t_slow = min(timeit.repeat(lambda: slow(*call_args), number=1, repeat=args.repeat))
        x, y = fast(*call_args), slow(*call_args)
        diff = abs(x - y) / max(abs(y), 1e-300)
        print(f"{label:<28}{1e3 * t_fast:>12.3f}{1e3 * t_slow:>12.3f}{t_slow / t_fast:>10.1f}{diff:>12.1e}")


if __name__ == "__main__":
    main()
