import json
import random

import numpy as np
import pytest

from rusforge.circuits import Circuit, word_matrix
from rusforge.pipeline import SearchParams
from rusforge.ring import RingUnitary, direct_sum
from rusforge.rus2q import (
    LowSuccessProbability,
    NotEqForm,
    NotInSxy,
    RusProtocol,
    build_embedding_2anc,
    build_low_depth_jod,
    ccz_ops,
    controlled_clifford,
    cswap_ops,
    determinant_is_one,
    block_determinant_is_one,
    exact_protocol,
    four_squares,
    gadget_table,
    in_sxy,
    jack_of_daggers,
    random_rational_unitary,
    rus_synthesis,
    s_dagger_optimize,
    synthesize,
)
from rusforge.synth1q import TCode, clifford_table, tcount
from rusforge.verify import validate_protocol

from conftest import random_word, special

I2 = RingUnitary.identity(2)


def test_gadget_table_is_exact_and_cheap():
    table = gadget_table()
    assert len(table) == 192
    for g, gad in table.items():
        c = gad.circuit()
        assert c.unitary() == direct_sum(I2, g)
        assert c.tcount() == gad.tcount <= 5
    # Paulis are free
    for p in ("X", "Y", "Z"):
        assert controlled_clifford((p,)).tcount == 0
    # Clifford-only controls keep the promised budget on the phase-fixed class
    assert max(min(table[m.times_omega(s)].tcount for s in range(8)) for m in clifford_table()) <= 4


def test_controlled_non_clifford_rejected():
    with pytest.raises(ValueError):
        controlled_clifford(("T",))


def test_jack_of_daggers_tcount():
    rng = random.Random(0)
    for _ in range(50):
        t = rng.randint(1, 12)
        code = TCode(tuple(rng.choice((1, -1)) for _ in range(t)))
        c, v = jack_of_daggers(code)
        assert c.unitary() == direct_sum(v, v.adjoint())
        assert c.tcount() in (t, t + 1)


def test_rus_synthesis_variants_and_bound():
    rng = random.Random(1)
    n = 0
    while n < 30:
        v = special(random_word(rng, 10))
        if v is None:
            continue
        try:
            protos = [rus_synthesis(v, var) for var in ("z", "s", "auto")]
        except LowSuccessProbability:
            continue
        n += 1
        t = tcount(v)
        for p in protos:
            assert p.design_tcount <= t + 9
            r0, r1 = validate_protocol(p)
            assert r0.matches_expected and r1.matches_expected
        assert protos[2].design_tcount <= min(protos[0].design_tcount, protos[1].design_tcount)
        assert protos[0].failure_word == ("Z",)


def test_rus_rejects_bad_input():
    with pytest.raises(NotEqForm):
        rus_synthesis(word_matrix(("X",)))
    # V = H has p = 1/2
    v = special(("H",))
    with pytest.raises(LowSuccessProbability):
        rus_synthesis(v)


def _golden_v():
    from rusforge.pipeline import evaluate
    from rusforge.ring import CyclotomicInt, Root2Int

    z = CyclotomicInt(1167, -218, -798, -359)
    return evaluate(Root2Int(-1, 4), z, SearchParams()).matrix()


def test_golden_protocol_numbers():
    v = _golden_v()
    pz = rus_synthesis(v, "z", "pi/64", 1e-11)
    assert pz.design_tcount == 58
    assert pz.expected_tcount == pytest.approx(58.674, abs=1e-3)
    ps = rus_synthesis(v, "s", "pi/64", 1e-11)
    assert ps.design_tcount == 54
    assert ps.expected_tcount == pytest.approx(54.628, abs=1e-3)
    assert s_dagger_optimize(pz).expected_tcount <= ps.expected_tcount
    assert pz.success_distance() == pytest.approx(1.0558e-12, rel=1e-3)
    validate_protocol(pz, "pi/64", 1e-11)


def test_exact_protocols():
    for k in range(8):
        p = exact_protocol(k, f"{k}*pi/4", 1e-3)
        assert p.p == 1 and p.success_distance() < 1e-50
        assert p.design_tcount == k % 2
        validate_protocol(p, f"{k}*pi/4", 1e-3)


def test_protocol_json_roundtrip():
    p, _ = synthesize(0.3137, 1e-6, SearchParams(seed=1))
    q = RusProtocol.from_json(json.loads(json.dumps(p.to_json())))
    assert q.design.unitary() == p.design.unitary()
    assert q.success_unitary == p.success_unitary
    assert q.failure_word == p.failure_word and q.p == p.p
    validate_protocol(q, 0.3137, 1e-6)


def test_four_squares():
    rng = random.Random(2)
    assert four_squares(7) == (2, 1, 1, 1)
    for n in list(range(0, 300)) + [rng.randrange(1 << 40) for _ in range(50)]:
        s = four_squares(n, rng)
        assert sum(x * x for x in s) == n and len(s) == 4


def test_embedding_2anc():
    rng = random.Random(3)
    for _ in range(10):
        A, alpha = random_rational_unitary(rng)
        e = build_embedding_2anc(A, alpha, rng)
        assert e.W.is_unitary()
        assert e.four_squares_identity()
        assert determinant_is_one(e.W)
        assert block_determinant_is_one(e.W)


def test_ccz_and_cswap():
    c = Circuit(3)
    for name, q in ccz_ops(0, 1, 2):
        c.add(name, *q)
    want = np.diag([1, 1, 1, 1, 1, 1, 1, -1])
    np.testing.assert_allclose(c.unitary_float(), want, atol=1e-12)
    assert c.tcount() == 7 and c.tdepth() <= 4
    s = Circuit(3)
    for name, q in cswap_ops(0, 1, 2):
        s.add(name, *q)
    perm = np.eye(8)[[0, 1, 2, 3, 4, 6, 5, 7]]
    np.testing.assert_allclose(s.unitary_float(), perm, atol=1e-12)


def _sxy_sample(rng):
    while True:
        v = special(random_word(rng, 8))
        if v is not None and in_sxy(v):
            return v


def test_low_depth_jod():
    rng = random.Random(4)
    for _ in range(5):
        v = _sxy_sample(rng)
        c = build_low_depth_jod(v)
        u = c.unitary_float()
        vm = v.to_numpy()
        for b, target in ((0, vm), (1, vm.conj().T)):
            for _ in range(3):
                psi = rng.random() * np.array([1, 0]) + np.array([rng.random(), 1j * rng.random()])
                psi = psi / np.linalg.norm(psi)
                inp = np.kron(np.kron(np.eye(2)[b], psi), [1, 0, 0, 0])
                out = np.kron(np.kron(np.eye(2)[b], target @ psi), [1, 0, 0, 0])
                assert np.allclose(u @ inp, out, atol=1e-10)
        assert c.tdepth() <= c.meta["tdepth_v"] + 8


def test_low_depth_needs_sxy():
    with pytest.raises(NotInSxy):
        build_low_depth_jod(word_matrix(("T", "H")).times_omega(0))
