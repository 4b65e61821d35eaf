import random

import pytest

from rusforge.circuits import word_matrix, word_tcount
from rusforge.ring import RingUnitary
from rusforge.synth1q import (
    IDENTITIES,
    SHTH_CASES,
    DecoratedTCode,
    NotUnitary,
    TCode,
    TCountMismatch,
    canonical_clifford,
    check_shth_cases,
    clifford_classes,
    clifford_table,
    decorate,
    decorate_code,
    exact_synthesize,
    is_clifford,
    lde,
    normal_form,
    pauli_product,
    push_rule,
    reduce_paulis,
    rewrite_identities,
    tcount,
    to_tcode_form,
)

from conftest import random_word


def test_clifford_group_sizes():
    assert len(clifford_table()) == 192
    assert len(clifford_classes()) == 24
    for m, word in clifford_table().items():
        assert word_matrix(word) == m
        assert word_tcount(word) == 0


def test_canonical_clifford_roundtrip():
    rng = random.Random(0)
    for _ in range(100):
        w = tuple(rng.choice(("H", "S", "X", "Z", "Sdg", "Y")) for _ in range(rng.randint(0, 10)))
        assert word_matrix(canonical_clifford(w)) == word_matrix(w)
        assert is_clifford(word_matrix(w))
    assert not is_clifford(word_matrix(("T",)))


def test_pauli_product_and_push_rule():
    # X then Z (time order) is Z X = i Y
    p, m = pauli_product("X", "Z")
    assert word_matrix(("X", "Z")) == word_matrix((p,) if p != "I" else ()).times_omega(m)
    for q in ("I", "X", "Y", "Z"):
        for d in (1, -1):
            d2, q2, m = push_rule(q, d)
            t = "T" if d == 1 else "Tdg"
            t2 = "T" if d2 == 1 else "Tdg"
            lhs = word_matrix(((q,) if q != "I" else ()) + (t, "H"))
            rhs = word_matrix((t2, "H") + ((q2,) if q2 != "I" else ())).times_omega(m)
            assert lhs == rhs


def test_all_rewrite_identities_exact():
    assert len(rewrite_identities()) >= 6
    for ident in IDENTITIES:
        assert ident.holds(), ident.name


def test_shth_cases():
    assert len(SHTH_CASES) == 8
    assert check_shth_cases()


def test_tcount_known_values():
    assert tcount(word_matrix(())) == 0
    assert tcount(word_matrix(("T",))) == 1
    assert tcount(word_matrix(("T", "H", "T"))) == 2
    assert tcount(word_matrix(("T", "H", "T", "H", "Tdg", "S", "H", "T"))) == 4
    assert tcount(word_matrix(("T", "T"))) == 0


def test_exact_synthesis_roundtrip_and_minimality():
    rng = random.Random(1)
    for _ in range(200):
        w = random_word(rng, 10)
        m = word_matrix(w)
        out = exact_synthesize(m)
        assert word_matrix(out) == m
        assert word_tcount(out) == tcount(m) <= word_tcount(w)
        nf = normal_form(m)
        assert len(nf.syllables) == tcount(m)


def test_tcount_is_lde_law():
    rng = random.Random(2)
    for _ in range(100):
        m = word_matrix(random_word(rng, 12))
        assert tcount(m) == lde(m)


def test_tcount_rejects_non_unitary():
    from rusforge.ring import CyclotomicInt

    bad = RingUnitary([[CyclotomicInt.from_int(1), CyclotomicInt.from_int(1)], [CyclotomicInt(), CyclotomicInt.from_int(1)]], 0)
    with pytest.raises(NotUnitary):
        tcount(bad)


def test_to_tcode_form_words_and_matrices():
    rng = random.Random(3)
    for _ in range(200):
        w = random_word(rng, 12)
        form = to_tcode_form(w)
        assert form.matrix() == word_matrix(w)
        assert len(form.code) == tcount(word_matrix(w))
        assert word_tcount(form.g1) == word_tcount(form.g2) == 0
        form2 = to_tcode_form(word_matrix(w))
        assert form2.matrix() == word_matrix(w)


def test_canonical_words_use_rule_table():
    w = ("T", "H", "S", "H", "T", "H", "T", "H")
    form = to_tcode_form(w)
    assert form.matrix() == word_matrix(w)
    assert len(form.code) == 3


def test_tcode_inverse_core():
    code = TCode((1, -1, -1, 1))
    inv = code.matrix().adjoint()
    assert word_matrix(("H",) + code.inverse_core().word() + ("H",)) == inv


def test_decoration_matches_target():
    rng = random.Random(4)
    for _ in range(100):
        n = rng.randint(1, 10)
        code = TCode(tuple(rng.choice((1, -1)) for _ in range(n)))
        other = TCode(tuple(rng.choice((1, -1)) for _ in range(n)))
        dec, m = decorate_code(code, other)
        assert dec.strip() == code
        assert dec.matrix().times_omega(m) == other.matrix()
        g3, dec2, g4 = decorate(code, other.matrix())
        assert word_matrix(g3 + dec2.word() + g4) == other.matrix()
    with pytest.raises(TCountMismatch):
        decorate_code(TCode((1,)), TCode((1, 1)))


def test_reduce_paulis_bound():
    rng = random.Random(5)
    paulis = ("I", "X", "Y", "Z")
    for _ in range(200):
        n = rng.randint(1, 12)
        dec = DecoratedTCode(tuple((rng.choice(paulis), rng.choice((1, -1)), rng.choice(paulis)) for _ in range(n)))
        red, m = reduce_paulis(dec)
        assert red.signature() == dec.signature()
        assert red.pauli_count() <= n + 1
        assert dec.matrix() == red.matrix().times_omega(m)
