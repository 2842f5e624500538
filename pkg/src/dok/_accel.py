"""Hot inner loops, compiled with numba when available.

Every kernel exists twice: a loop version that numba compiles, and a
numpy/stdlib fallback. ``DOK_DISABLE_NUMBA=1`` (or a missing numba install)
selects the fallback at import time. Both versions are always importable
under explicit names so tests and the benchmark can compare them.
"""
import math
import os

import numpy as np

_DISABLED = os.environ.get("DOK_DISABLE_NUMBA", "0").lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError("numba disabled by DOK_DISABLE_NUMBA")
    from numba import njit
    NUMBA_AVAILABLE = True
except ImportError:
    NUMBA_AVAILABLE = False


def _neumaier_dot_loop(a, b):
    total = 0.0
    comp = 0.0
    for i in range(a.shape[0]):
        x = a[i] * b[i]
        t = total + x
        if abs(total) >= abs(x):
            comp += (total - t) + x
        else:
            comp += (x - t) + total
        total = t
    return total + comp


def _neumaier_dot_numpy(a, b):
    return math.fsum(np.multiply(a, b).tolist())


def _pole_series_loop(z1, z2, terms):
    # symmetric partial sum of 1/((k - z1)^2 (k - z2)^2), |k| <= terms,
    # +k and -k paired, smallest terms first
    total = 0.0
    comp = 0.0
    for j in range(terms, -1, -1):
        a = j - z1
        b = j - z2
        x = 1.0 / (a * a * b * b)
        if j > 0:
            a = -j - z1
            b = -j - z2
            x += 1.0 / (a * a * b * b)
        t = total + x
        if abs(total) >= abs(x):
            comp += (total - t) + x
        else:
            comp += (x - t) + total
        total = t
    return total + comp


def _pole_series_numpy(z1, z2, terms):
    k = np.arange(terms, 0, -1, dtype=np.float64)
    pos = 1.0 / ((k - z1) ** 2 * (k - z2) ** 2)
    neg = 1.0 / ((-k - z1) ** 2 * (-k - z2) ** 2)
    centre = 1.0 / (z1 * z1 * z2 * z2)
    return math.fsum((pos + neg).tolist() + [centre])


if NUMBA_AVAILABLE:
    neumaier_dot_numba = njit(cache=False, fastmath=False)(_neumaier_dot_loop)
    pole_series_numba = njit(cache=False, fastmath=False)(_pole_series_loop)
    neumaier_dot = neumaier_dot_numba
    pole_series = pole_series_numba
else:
    neumaier_dot_numba = None
    pole_series_numba = None
    neumaier_dot = _neumaier_dot_numpy
    pole_series = _pole_series_numpy

neumaier_dot_numpy = _neumaier_dot_numpy
pole_series_numpy = _pole_series_numpy
BACKEND = "numba" if NUMBA_AVAILABLE else "numpy"
