import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dok import _accel

needs_numba = pytest.mark.skipif(not _accel.NUMBA_AVAILABLE, reason="numba backend not active")


def exact_dot(a, b):
    from fractions import Fraction

    return float(sum(Fraction(x) * Fraction(y) for x, y in zip(a.tolist(), b.tolist())))


finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


@given(arrays(np.float64, st.integers(1, 60), elements=finite), st.data())
@settings(max_examples=100, deadline=None)
def test_numpy_dot_is_accurate(a, data):
    b = data.draw(arrays(np.float64, a.shape, elements=finite))
    ref = exact_dot(a, b)
    scale = float(np.sum(np.abs(a * b)))
    assert abs(_accel.neumaier_dot_numpy(a, b) - ref) <= 4e-16 * scale + 1e-300


@needs_numba
@given(arrays(np.float64, st.integers(1, 60), elements=finite), st.data())
@settings(max_examples=100, deadline=None)
def test_numba_dot_is_accurate(a, data):
    b = data.draw(arrays(np.float64, a.shape, elements=finite))
    ref = exact_dot(a, b)
    scale = float(np.sum(np.abs(a * b)))
    assert abs(_accel.neumaier_dot_numba(a, b) - ref) <= 4e-16 * scale + 1e-300


def test_compensation_beats_naive():
    a = np.array([1.0, 1e100, 1.0, -1e100])
    b = np.ones(4)
    assert _accel.neumaier_dot_numpy(a, b) == 2.0
    if _accel.NUMBA_AVAILABLE:
        assert _accel.neumaier_dot_numba(a, b) == 2.0


@pytest.mark.parametrize("z1,z2,terms", [(0.046, 0.014, 10), (0.7, 0.4, 1000), (1.3, 1.1, 100_000)])
def test_pole_series_backends_agree(z1, z2, terms):
    ref = math.fsum(1 / ((k - z1) ** 2 * (k - z2) ** 2) for k in range(-terms, terms + 1))
    assert _accel.pole_series_numpy(z1, z2, terms) == pytest.approx(ref, rel=1e-14)
    if _accel.NUMBA_AVAILABLE:
        assert _accel.pole_series_numba(z1, z2, terms) == pytest.approx(ref, rel=1e-14)


def test_selected_backend():
    assert _accel.BACKEND in ("numba", "numpy")
    if _accel.NUMBA_AVAILABLE:
        assert _accel.neumaier_dot is _accel.neumaier_dot_numba
    else:
        assert _accel.neumaier_dot is _accel.neumaier_dot_numpy


def test_env_flag_selects_fallback():
    env = dict(os.environ, DOK_DISABLE_NUMBA="1")
    code = "import dok._accel as a; print(a.BACKEND, a.neumaier_dot is a.neumaier_dot_numpy)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "True"]


def test_suite_identical_across_backends():
    code = (
        "import json; from dok.verify import run_suite; "
        "print(json.dumps([[r.name, r.max_residual] for r in run_suite([0.1])]))"
    )
    outs = []
    for flag in ("0", "1"):
        env = dict(os.environ, DOK_DISABLE_NUMBA=flag)
        outs.append(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                                   check=True).stdout)
    import json

    fast, slow = (json.loads(o) for o in outs)
    assert [n for n, _ in fast] == [n for n, _ in slow]
    for (name, a), (_, b) in zip(fast, slow):
        assert a == pytest.approx(b, rel=1e-3, abs=1e-13), name
