"""Exact single-qubit Clifford+T synthesis, T-code normal forms, Pauli
decorations and Pauli-count reduction.

Words are tuples of tokens in time order (see :mod:`rusforge.circuits`).  The
rewrite identities below are stated as time-ordered words; every identity over
{H, S, T, X, Y, Z, w} that holds as a matrix product also holds read in the
opposite direction, because transposition fixes all of these gates except Y,
which only changes sign.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .circuits import (
    gate_matrix,
    invert_word,
    is_phase,
    parse_word,
    phase_token,
    simplify_phases,
    word_matrix,
    word_tcount,
)
from .ring import CyclotomicInt, RingUnitary


class NotUnitary(ValueError):
    pass


class TCountMismatch(ValueError):
    pass


Word = tuple[str, ...]

# ---------------------------------------------------------------------------
# Clifford group table


@lru_cache(maxsize=1)
def clifford_table() -> dict[RingUnitary, Word]:
    """All 192 single-qubit Clifford gates (24 up to phase, times w^k) with short words."""
    gens = ("H", "S", "Sdg", "X", "Y", "Z")
    table: dict[RingUnitary, Word] = {RingUnitary.identity(2): ()}
    queue = deque([((), RingUnitary.identity(2))])
    while queue:
        word, m = queue.popleft()
        for g in gens:
            m2 = gate_matrix(g) @ m
            if m2 not in table:
                table[m2] = word + (g,)
                queue.append((word + (g,), m2))
    base = list(table.items())
    for m, word in base:
        for k in range(1, 8):
            mk = m.times_omega(k)
            if mk not in table:
                table[mk] = simplify_phases((phase_token(k),) + word)
    if len(table) != 192:
        raise AssertionError(f"Clifford table has {len(table)} elements")
    return table


@lru_cache(maxsize=1)
def clifford_classes() -> tuple[Word, ...]:
    """The 24 Clifford gates modulo global phase, as phase-free words."""
    seen = set()
    reps = []
    for m, word in sorted(clifford_table().items(), key=lambda kv: (len(kv[1]), kv[1])):
        key = frozenset(m.times_omega(k) for k in range(8))
        if key in seen:
            continue
        seen.add(key)
        reps.append(tuple(t for t in word if not is_phase(t)))
    assert len(reps) == 24
    return tuple(reps)


def clifford_word(m: RingUnitary) -> Word | None:
    return clifford_table().get(m)


def is_clifford(m: RingUnitary) -> bool:
    return m in clifford_table()


def canonical_clifford(word: Sequence[str]) -> Word:
    w = clifford_word(word_matrix(word))
    if w is None:
        raise ValueError(f"not a Clifford word: {' '.join(word)}")
    return w


# ---------------------------------------------------------------------------
# Pauli algebra


@lru_cache(maxsize=1)
def _pauli_lookup() -> dict[RingUnitary, tuple[str, int]]:
    out = {}
    for p in ("I", "X", "Y", "Z"):
        base = gate_matrix(p)
        for k in range(8):
            out[base.times_omega(k)] = (p, k)
    return out


def pauli_of(m: RingUnitary) -> tuple[str, int] | None:
    """``(P, k)`` with ``m == w^k P``, or None."""
    return _pauli_lookup().get(m)


@lru_cache(maxsize=None)
def pauli_product(first: str, second: str) -> tuple[str, int]:
    """Time-ordered ``first second`` as ``w^k P``."""
    r = pauli_of(gate_matrix(second) @ gate_matrix(first))
    assert r is not None
    return r


@lru_cache(maxsize=None)
def push_rule(p: str, d: int) -> tuple[int, str, int]:
    """``P T^d H = T^d' H P' w^m`` (time order); returns ``(d', P', m)``."""
    lhs = word_matrix(_pw(p) + (_t(d), "H"))
    for d2 in (1, -1):
        for q in ("I", "X", "Y", "Z"):
            rhs = word_matrix((_t(d2), "H") + _pw(q))
            for m in range(8):
                if rhs.times_omega(m) == lhs:
                    return d2, q, m
    raise AssertionError("push rule not found")


@lru_cache(maxsize=None)
def h_conjugate(p: str) -> tuple[str, int]:
    """``P H = H P' w^m`` (time order); returns ``(P', m)``."""
    lhs = word_matrix(_pw(p) + ("H",))
    for q in ("I", "X", "Y", "Z"):
        rhs = word_matrix(("H",) + _pw(q))
        for m in range(8):
            if rhs.times_omega(m) == lhs:
                return q, m
    raise AssertionError("conjugation rule not found")


def _pw(p: str) -> Word:
    return () if p == "I" else (p,)


def _t(d: int) -> str:
    return "T" if d == 1 else "Tdg"


# ---------------------------------------------------------------------------
# Rewrite identities


@dataclass(frozen=True)
class Identity:
    name: str
    lhs: Word
    rhs: Word

    def holds(self) -> bool:
        return word_matrix(self.lhs) == word_matrix(self.rhs)


IDENTITIES: tuple[Identity, ...] = tuple(
    Identity(name, parse_word(lhs), parse_word(rhs))
    for name, lhs, rhs in [
        ("XTH", "X T H", "Tdg H Z w^1"),
        ("YTH", "Y T H", "Tdg H Y w^5"),
        ("ZTH", "Z T H", "T H X"),
        ("XSHTH", "X S H T H", "Sdg H T H X w^2"),
        ("YSHTH", "Y S H T H", "Sdg H Tdg H Y w^3"),
        ("ZSHTH", "Z S H T H", "S H Tdg H Z w^1"),
        ("HSH", "H S H", "Tdg Tdg H Tdg Tdg w^1"),
        ("HSdgH", "H Sdg H", "T T H T T w^7"),
    ]
)


def rewrite_identities() -> tuple[Identity, ...]:
    """The identity table, each entry checked by exact evaluation."""
    bad = [i.name for i in IDENTITIES if not i.holds()]
    if bad:
        raise AssertionError(f"identities fail: {bad}")
    return IDENTITIES


# Appending the syllable "S H T H" to  c1 T^d H Q w^l  gives
#   c1 T^d' H T^e H Q' w^(l+dl);  key (Q, d) -> (d', e, Q', dl)
SHTH_CASES: dict[tuple[str, int], tuple[int, int, str, int]] = {
    ("I", 1): (-1, -1, "I", 1),
    ("I", -1): (1, 1, "Z", 0),
    ("X", -1): (1, -1, "I", 1),
    ("X", 1): (-1, 1, "Z", 0),
    ("Y", -1): (1, 1, "Y", 2),
    ("Y", 1): (-1, -1, "X", 5),
    ("Z", 1): (-1, 1, "Y", 4),
    ("Z", -1): (1, -1, "X", -1),
}


def check_shth_cases() -> bool:
    for (q, d), (d1, e, q2, dl) in SHTH_CASES.items():
        lhs = word_matrix((_t(d), "H") + _pw(q) + ("S", "H", "T", "H"))
        rhs = word_matrix((_t(d1), "H", _t(e), "H") + _pw(q2)).times_omega(dl % 8)
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# T codes


@dataclass(frozen=True)
class TCode:
    """Syllables ``T^d H`` (time order), ``d`` in {+1, -1}."""

    powers: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.powers)

    def word(self) -> Word:
        out: list[str] = []
        for d in self.powers:
            out += [_t(d), "H"]
        return tuple(out)

    def signature(self) -> list[int]:
        return list(self.powers)

    def matrix(self) -> RingUnitary:
        return word_matrix(self.word())

    def inverse_core(self) -> TCode:
        """The T code ``c2`` with ``c^-1 = H c2 H``."""
        return TCode(tuple(-d for d in reversed(self.powers)))

    def __str__(self) -> str:
        return " ".join(f"{_t(d)} H" for d in self.powers) or "(empty)"


@dataclass(frozen=True)
class DecoratedTCode:
    """Syllables ``P T^d Q H`` (time order) with P, Q Pauli or I."""

    syllables: tuple[tuple[str, int, str], ...]

    def __len__(self) -> int:
        return len(self.syllables)

    def word(self) -> Word:
        out: list[str] = []
        for p, d, q in self.syllables:
            out += list(_pw(p)) + [_t(d)] + list(_pw(q)) + ["H"]
        return tuple(out)

    def strip(self) -> TCode:
        return TCode(tuple(d for _, d, _ in self.syllables))

    def signature(self) -> list[int]:
        return [d for _, d, _ in self.syllables]

    def pauli_count(self) -> int:
        return sum((p != "I") + (q != "I") for p, _, q in self.syllables)

    def matrix(self) -> RingUnitary:
        return word_matrix(self.word())

    @classmethod
    def plain(cls, code: TCode) -> DecoratedTCode:
        return cls(tuple(("I", d, "I") for d in code.powers))

    def __str__(self) -> str:
        return " ".join(self.word())


@dataclass(frozen=True)
class TCodeForm:
    """``g1 code g2`` in time order; any global phase sits in ``g1``."""

    g1: Word
    code: TCode
    g2: Word

    def word(self) -> Word:
        return tuple(self.g1) + self.code.word() + tuple(self.g2)

    def matrix(self) -> RingUnitary:
        return word_matrix(self.word())


# ---------------------------------------------------------------------------
# Bloch (SO(3)) representation over Z[sqrt2] / sqrt2^k

_SIGMAS = ("X", "Y", "Z")


def _r2mul(x, y):
    return (x[0] * y[0] + 2 * x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _bloch_reduce(N, k):
    while k > 0 and all(a % 2 == 0 for a, _ in N):
        N = [(b, a // 2) for a, b in N]
        k -= 1
    return N, k


def bloch(u: RingUnitary) -> tuple[list[tuple[int, int]], int]:
    """Rotation matrix ``R_ij = tr(s_i U s_j U^dag)/2`` as row-major numerators over sqrt2^k."""
    ud = u.adjoint()
    cols = []
    for sj in _SIGMAS:
        m = u @ gate_matrix(sj) @ ud
        m00, m01 = m.entries[0]
        m10, m11 = m.entries[1]
        i = CyclotomicInt.omega_power(2)
        vals = [m01 + m10, i * (m01 - m10), m00 - m11]
        cols.append(([v.to_root2() for v in vals], m.L + 2))
    k = max(c[1] for c in cols)
    N = [None] * 9
    for j, (vals, kj) in enumerate(cols):
        shift = k - kj
        for i, v in enumerate(vals):
            a, b = v
            for _ in range(shift):
                a, b = 2 * b, a
            N[3 * i + j] = (a, b)
    return _bloch_reduce(N, k)


def _bloch_mul(A, ka, B, kb):
    N = []
    for i in range(3):
        for j in range(3):
            s0 = s1 = 0
            for t in range(3):
                p = _r2mul(A[3 * i + t], B[3 * t + j])
                s0 += p[0]
                s1 += p[1]
            N.append((s0, s1))
    return _bloch_reduce(N, ka + kb)


def lde(u: RingUnitary) -> int:
    """Least sqrt2-denominator exponent of the Bloch matrix; equals the minimal T-count."""
    return bloch(u)[1]


def tcount(u: RingUnitary) -> int:
    if u.size != 2:
        raise ValueError("single-qubit matrices only")
    if not u.is_unitary():
        raise NotUnitary("matrix is not unitary")
    return lde(u)


# matrix-order left syllables and their time-order words
_SYLLABLES = (("T", ("T",)), ("HT", ("T", "H")), ("SHT", ("T", "H", "S")))


@lru_cache(maxsize=1)
def _syllable_inverses():
    out = []
    for name, word in _SYLLABLES:
        inv = invert_word(word)
        R, k = bloch(word_matrix(inv))
        out.append((name, word, word_matrix(inv), R, k))
    return out


@dataclass(frozen=True)
class NormalForm:
    """``U = s_1 ... s_k C`` as matrices; ``syllables`` lists s_1..s_k."""

    syllables: tuple[str, ...]
    clifford: Word

    def word(self) -> Word:
        out = list(self.clifford)
        words = dict((n, w) for n, w in _SYLLABLES)
        for s in reversed(self.syllables):
            out += words[s]
        return tuple(out)


def normal_form(u: RingUnitary, check: bool = True) -> NormalForm:
    if u.size != 2:
        raise ValueError("single-qubit matrices only")
    if check and not u.is_unitary():
        raise NotUnitary("matrix is not unitary")
    R, k = bloch(u)
    cands = _syllable_inverses()
    peeled: list[str] = []
    rest = u
    while k > 0:
        for name, _, inv_m, Rs, ks in cands:
            R2, k2 = _bloch_mul(Rs, ks, R, k)
            if k2 == k - 1:
                peeled.append(name)
                rest = inv_m @ rest
                R, k = R2, k2
                break
        else:
            raise AssertionError("no syllable lowers the denominator exponent")
    cw = clifford_word(rest)
    if cw is None:
        raise AssertionError("residual is not Clifford")
    return NormalForm(tuple(peeled), cw)


def exact_synthesize(u: RingUnitary, verify: bool = True) -> Word:
    """Minimal-T word (time order) whose exact matrix equals ``u``, phase included."""
    word = normal_form(u).word()
    if verify and word_matrix(word) != u:
        raise AssertionError("synthesis round trip failed")
    return word


# ---------------------------------------------------------------------------
# T-code forms


def _is_canonical(word: Word) -> list[str] | None:
    """Split into syllables 'TH' (first) then 'TH' / 'SHTH'; None if not of that shape."""
    out = []
    i = 0
    n = len(word)
    while i < n:
        if word[i : i + 2] == ("T", "H"):
            out.append("TH")
            i += 2
        elif out and word[i : i + 4] == ("S", "H", "T", "H"):
            out.append("SHTH")
            i += 4
        else:
            return None
    return out or None


def canonical_to_tcode(syllables: Sequence[str]) -> TCodeForm:
    """Inductive rewrite of a canonical word into ``code Q w^l`` via the rule table."""
    if not syllables or syllables[0] != "TH":
        raise ValueError("canonical words start with the syllable 'T H'")
    powers = [1]
    q, l = "I", 0
    for s in syllables[1:]:
        if s == "TH":
            d2, q, m = push_rule(q, 1)
            powers.append(d2)
            l += m
        else:
            d1, e, q, dl = SHTH_CASES[(q, powers[-1])]
            powers[-1] = d1
            powers.append(e)
            l += dl
    g1 = (phase_token(l),) if l % 8 else ()
    return TCodeForm(g1, TCode(tuple(powers)), _pw(q))


def tcode_from_normal_form(nf: NormalForm) -> TCodeForm:
    """Rewrite a normal form into ``g1 code g2`` by pushing Paulis through syllables."""
    k = len(nf.syllables)
    if k == 0:
        return TCodeForm(tuple(nf.clifford), TCode(()), ())
    timeline = list(reversed(nf.syllables))  # time order
    exps = []
    prev_s = False
    for s in timeline:
        exps.append(3 if prev_s else 1)
        prev_s = s == "SHT"
    last = timeline[-1]
    tail: Word = {"T": ("H",), "HT": (), "SHT": ("S",)}[last]
    powers = []
    carry, phase = "I", 0
    for e in exps:
        # T^3 = Z T^-1
        p, d = ("Z", -1) if e == 3 else ("I", 1)
        r, m0 = pauli_product(carry, p)
        d2, carry, m1 = push_rule(r, d)
        powers.append(d2)
        phase += m0 + m1
    g1 = simplify_phases((phase_token(phase),) + tuple(nf.clifford))
    g2 = _pw(carry) + tail
    return TCodeForm(g1, TCode(tuple(powers)), tuple(g2))


def to_tcode_form(circuit: Sequence[str] | RingUnitary, verify: bool = True) -> TCodeForm:
    """Rewrite a single-qubit word (or exact matrix) as ``g1 code g2``."""
    if isinstance(circuit, RingUnitary):
        target = circuit
        form = tcode_from_normal_form(normal_form(target))
    else:
        word = tuple(circuit)
        target = word_matrix(word)
        split = _is_canonical(word)
        if split is not None:
            form = canonical_to_tcode(split)
        else:
            form = tcode_from_normal_form(normal_form(target))
    if verify and form.matrix() != target:
        raise AssertionError("T-code form does not match")
    return form


# ---------------------------------------------------------------------------
# decorations


def decorate_code(code: TCode, other: TCode) -> tuple[DecoratedTCode, int]:
    """Decoration ``dec`` of ``code`` and ``m`` with ``other == dec * w^m`` exactly."""
    if len(code) != len(other):
        raise TCountMismatch(f"T-counts differ: {len(code)} vs {len(other)}")
    syl = []
    m = 0
    for d1, d2 in zip(code.powers, other.powers):
        if d1 == d2:
            syl.append(("I", d1, "I"))
        else:
            # X T^d X = w^d T^-d
            syl.append(("X", d1, "X"))
            m -= d1
    return DecoratedTCode(tuple(syl)), m % 8


def decorate(code: TCode, target: RingUnitary | TCodeForm) -> tuple[Word, DecoratedTCode, Word]:
    """``(g3, dec, g4)`` with ``g3 dec g4 == target`` and ``dec`` a decoration of ``code``."""
    form = target if isinstance(target, TCodeForm) else to_tcode_form(target)
    dec, m = decorate_code(code, form.code)
    g4 = simplify_phases((phase_token(m),) + tuple(form.g2)) if m else tuple(form.g2)
    return tuple(form.g1), dec, g4


def reduce_paulis(dec: DecoratedTCode) -> tuple[DecoratedTCode, int]:
    """Equivalent decoration with at most len+1 Paulis: returns ``(dec', m)`` with
    ``dec == dec' * w^m`` (m is even, i.e. a power of i)."""
    n = len(dec)
    if n == 0:
        return dec, 0
    phase = 0
    carry = "I"
    out = []
    for idx, (p, d, q) in enumerate(dec.syllables):
        p2, m0 = pauli_product(carry, p)
        phase += m0
        if idx < n - 1:
            carry, m1 = h_conjugate(q)
            phase += m1
            out.append((p2, d, "I"))
        else:
            out.append((p2, d, q))
    result = DecoratedTCode(tuple(out))
    assert result.signature() == dec.signature()
    return result, phase % 8


def tcount_of_word(word: Iterable[str]) -> int:
    return word_tcount(word)


__all__ = [
    "DecoratedTCode",
    "IDENTITIES",
    "Identity",
    "NormalForm",
    "NotUnitary",
    "SHTH_CASES",
    "TCode",
    "TCodeForm",
    "TCountMismatch",
    "bloch",
    "canonical_clifford",
    "canonical_to_tcode",
    "check_shth_cases",
    "clifford_classes",
    "clifford_table",
    "clifford_word",
    "decorate",
    "decorate_code",
    "exact_synthesize",
    "is_clifford",
    "lde",
    "normal_form",
    "pauli_of",
    "pauli_product",
    "push_rule",
    "reduce_paulis",
    "rewrite_identities",
    "tcode_from_normal_form",
    "tcount",
    "to_tcode_form",
]
