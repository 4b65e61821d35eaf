"""The compiled kernels and the Python fallback must agree bit for bit."""

import os
import random
import subprocess
import sys

import pytest

from rusforge import _core, _core_py

try:
    from rusforge import _core_c
except ImportError:  # extension not built
    _core_c = None

needs_c = pytest.mark.skipif(_core_c is None, reason="compiled extension not built")


def _values(rng):
    small = [rng.randint(-1000, 1000) for _ in range(4)]
    big = [rng.randint(-(1 << 80), 1 << 80) for _ in range(4)]
    edge = [(1 << 30) - 1, -(1 << 30) + 1, 1 << 30, -(1 << 30)]
    return [small, big, edge, [2 * x for x in small]]


@needs_c
def test_zw_kernels_parity():
    rng = random.Random(0)
    for _ in range(500):
        vals = _values(rng)
        for a in vals:
            for b in vals:
                assert _core_c.zw_mul(*a, *b) == _core_py.zw_mul(*a, *b)
            assert _core_c.zw_abs2(*a) == _core_py.zw_abs2(*a)
            assert _core_c.zw_div_sqrt2(*a) == _core_py.zw_div_sqrt2(*a)
            assert _core_c.zw_sqrt2_valuation(*a, 40) == _core_py.zw_sqrt2_valuation(*a, 40)


@needs_c
def test_trial_divide_parity():
    from rusforge.normeq import _trial_table

    table = _trial_table()
    rng = random.Random(1)
    for _ in range(300):
        k = rng.choice([1, 3**5 * 7, 17**2 * 5])
        x, y = rng.randint(-(1 << 25), 1 << 25) * k, rng.randint(-(1 << 25), 1 << 25) * k
        assert _core_c.trial_divide(x, y, table) == _core_py.trial_divide(x, y, table)
        x, y = rng.randint(1, 1 << 90) * k, rng.randint(1, 1 << 60) * k
        assert _core_c.trial_divide(x, y, table) == _core_py.trial_divide(x, y, table)


@needs_c
def test_apply_1q_parity():
    rng = random.Random(2)
    for _ in range(100):
        nq = rng.randint(1, 3)
        amps = [tuple(rng.randint(-(1 << 40), 1 << 40) for _ in range(4)) for _ in range(1 << nq)]
        m = [tuple(rng.randint(-3, 3) for _ in range(4)) for _ in range(4)]
        q = rng.randrange(nq)
        assert _core_c.apply_1q(amps, nq, q, *m) == _core_py.apply_1q(amps, nq, q, *m)


def test_backend_selected():
    assert _core.BACKEND in ("cython", "python")
    if _core_c is not None:
        assert _core.BACKEND == "cython"


def test_pure_python_override():
    code = "import rusforge._core as c; print(c.BACKEND)"
    env = dict(os.environ, RUSFORGE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
