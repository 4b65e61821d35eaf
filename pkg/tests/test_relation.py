import math
import random

import mpmath
import pytest

from rusforge.angles import Angle
from rusforge.relation import (
    PhaseTarget,
    exact_unit,
    find_relation,
    phase_error,
    relation_vector,
    working_precision,
)
from rusforge.ring import CyclotomicInt


def test_relation_identity_is_exact():
    # |z*/z - e^{i theta}| == sqrt2 |m.x| / |z|
    rng = random.Random(0)
    for _ in range(50):
        z = CyclotomicInt(*(rng.randint(-99, 99) for _ in range(4)))
        if not z:
            continue
        th = Angle.from_float(rng.uniform(-3, 3))
        with mpmath.workprec(200):
            x = relation_vector(th)
            dot = mpmath.fsum(m * xi for m, xi in zip(z, x))
            zc = mpmath.mpc(complex(z).real, complex(z).imag)
            a, b, c, d = z
            h = mpmath.sqrt(2) / 2
            zc = mpmath.mpc(d + (c - a) * h, b + (c + a) * h)
            lhs = abs(mpmath.conj(zc) / zc - mpmath.expj(th.mp()))
            rhs = mpmath.sqrt(2) * abs(dot) / abs(zc)
            assert abs(lhs - rhs) < mpmath.mpf(10) ** -50


def test_golden_relation():
    res = find_relation(PhaseTarget.make("pi/64", 1e-11))
    assert tuple(res.z) == (1167, -218, -798, -359)
    assert res.distance < 1e-11
    assert res.iterations > 0


@pytest.mark.parametrize("eps", [1e-3, 1e-6, 1e-9])
def test_relation_meets_bound(eps):
    rng = random.Random(int(-math.log10(eps)))
    for _ in range(10):
        th = Angle.from_float(rng.uniform(0, 2 * math.pi))
        res = find_relation(PhaseTarget(th, eps))
        assert res.distance < eps
        assert phase_error(res.z, th) < eps


def test_exact_angles():
    for k in range(8):
        z = exact_unit(k)
        assert phase_error(z, Angle.parse(f"{k}*pi/4")) < 1e-15
        res = find_relation(PhaseTarget.make(f"{k}*pi/4", 1e-5))
        assert res.exact and res.iterations == 0


def test_working_precision_grows():
    assert working_precision(1e-3) < working_precision(1e-30)
    with pytest.raises(ValueError):
        PhaseTarget.make(0.1, 0)
    with pytest.raises(ValueError):
        PhaseTarget.make(0.1, 1.5)
