import random

import mpmath
import numpy as np
import pytest

from rusforge.circuits import Circuit, word_matrix
from rusforge.ring import CyclotomicInt
from rusforge.verify import (
    NonRingGate,
    NotUnitary,
    ProtocolMismatch,
    RingState,
    distance,
    expected_cost,
    monte_carlo_cost,
    phase_distance_mp,
    rz,
    simulate_exact,
    simulate_float,
    validate_protocol,
)



def random_circuit(rng, n, size):
    c = Circuit(n)
    for _ in range(size):
        if n > 1 and rng.random() < 0.3:
            a, b = rng.sample(range(n), 2)
            c.add(rng.choice(("CX", "CY", "CZ", "SWAP")), a, b)
        else:
            c.add(rng.choice(("H", "T", "Tdg", "S", "Sdg", "X", "Y", "Z")), rng.randrange(n))
    return c


def test_word_convention_is_time_order():
    # "S H" applies S first, so the matrix is H @ S
    h = word_matrix(("H",)).to_numpy()
    s = word_matrix(("S",)).to_numpy()
    np.testing.assert_allclose(word_matrix(("S", "H")).to_numpy(), h @ s)


def test_exact_and_float_simulators_agree():
    rng = random.Random(7)
    for n in (1, 2, 3):
        for _ in range(20):
            c = random_circuit(rng, n, 25)
            ex = simulate_exact(c).to_numpy()
            fl = simulate_float(c)
            np.testing.assert_allclose(ex, fl, atol=1e-10)
            np.testing.assert_allclose(c.unitary().to_numpy(), c.unitary_float(), atol=1e-10)


def test_norm_check_and_hook():
    rng = random.Random(8)
    c = random_circuit(rng, 2, 40)
    seen = []
    out = simulate_exact(c, hook=lambda i, g, st: seen.append(st.is_normalized()), check_norm=True)
    assert all(seen) and len(seen) == len(c)
    assert out.is_normalized()


def test_ringstate_reduce_and_eq():
    s = RingState.from_vector([(0, 0, 0, 2), (0, 0, 0, 0)], 2)
    assert s == RingState.basis(1, 0)
    odd = RingState.from_vector([(0, 0, 0, 1), (0, 0, 0, 1)], 1)
    assert odd.reduced().L == 1


def test_distance_properties():
    t = 0.7
    assert distance(rz(t), rz(t)) < 1e-15
    # global phase invariance
    assert distance(rz(t), np.exp(0.3j) * rz(t)) == pytest.approx(0, abs=1e-8)
    # closed form for z-rotations: sqrt(1 - |cos(dt/2)|), evaluated at high precision
    for dt in (1e-9, 1e-4, 0.3, 2.0):
        with mpmath.workprec(200):
            ref = float(mpmath.sqrt(1 - abs(mpmath.cos(mpmath.mpf(dt) / 2))))
        assert distance(rz(t), rz(t + dt)) == pytest.approx(ref, rel=1e-6)
    with pytest.raises(NotUnitary):
        distance(np.eye(2) * 2, np.eye(2))


def test_phase_distance_mp_matches_float():
    z = CyclotomicInt(1, 2, -3, 5)
    ph = np.angle(complex(z))
    theta = -2 * ph + 1e-3
    d = phase_distance_mp(z, theta)
    u = np.diag([complex(z), complex(z).conjugate()]) / abs(complex(z))
    assert d == pytest.approx(distance(u, rz(theta)), rel=1e-6)


def test_nonring_gate_rejected():
    from rusforge.circuits import Gate

    c = Circuit(1, [Gate("RZ", (0,))])
    with pytest.raises(NonRingGate):
        simulate_exact(c)


def test_expected_cost_formula_and_monte_carlo():
    assert expected_cost(20, 2, 0.5) == pytest.approx((20 + 2 * 0.5) / 0.5)
    assert expected_cost(58, 0, 0.98851) == pytest.approx(58.674, abs=1e-3)
    mean, se = monte_carlo_cost(20, 2, 0.5, trials=200_000, seed=1)
    assert abs(mean - expected_cost(20, 2, 0.5)) < 5 * se
    with pytest.raises(ValueError):
        expected_cost(1, 1, 0)


def test_validate_protocol_detects_wrong_claims():
    from rusforge.rus2q import synthesize

    proto, _ = synthesize("0.3137", 1e-4)
    r0, r1 = validate_protocol(proto, "0.3137", 1e-4)
    assert r0.matches_expected and r1.matches_expected
    assert r0.probability + r1.probability == pytest.approx(1)
    proto.failure_word = ("X",)
    with pytest.raises(ProtocolMismatch) as exc:
        validate_protocol(proto, "0.3137", 1e-4)
    assert "failure" in exc.value.diff


def test_validate_protocol_rejects_loose_epsilon():
    from rusforge.rus2q import synthesize

    proto, _ = synthesize("0.3137", 1e-4)
    d = proto.success_distance()
    r0, _ = validate_protocol(proto, "0.3137", d / 10, raise_on_fail=False)
    assert not r0.matches_expected
