"""Two-qubit repeat-until-success circuits.

Qubit 0 is the target (it only ever acts as a control), qubit 1 is the
ancilla.  For a design matrix V = 1/sqrt2^L [[z, -y*], [y, z*]] the circuit
implements diag(V, W) with W = S^d1 V^dag S^d2; measuring the ancilla in 0
applies diag(z, z*) to the target, measuring 1 applies Z S^d1.

Also here: the two-ancilla algebraic embedding W of a unitary over Q(w) and
the low T-depth circuit for J(V) = diag(V, V^dag) with two extra qubits.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache

from .circuits import (
    Circuit,
    diag_phase_word,
    invert_word,
    phase_token,
    simplify_phases,
    word_matrix,
    word_tcount,
)
from .normeq import is_probable_prime, sqrt_mod
from .ring import SQRT2_Z, CyclotomicInt, RingUnitary, Root2Int, common_denominator, determinant, direct_sum
from .synth1q import (
    DecoratedTCode,
    TCode,
    TCodeForm,
    clifford_classes,
    decorate_code,
    exact_synthesize,
    push_rule,
    reduce_paulis,
    tcount,
    to_tcode_form,
)
from .verify import expected_cost

CTRL, ANC = 0, 1
_CP = {"X": "CX", "Y": "CY", "Z": "CZ"}
VARIANTS = ("auto", "z", "s")


class LowSuccessProbability(ValueError):
    pass


class NotEqForm(ValueError):
    pass


class NoPremultiplier(ValueError):
    pass


class NotInSxy(ValueError):
    pass


Ops = tuple[tuple[str, tuple[int, ...]], ...]


def _ops_from_word(word, qubit: int) -> list[tuple[str, tuple[int, ...]]]:
    out = []
    for tok in word:
        if tok.startswith("w"):
            raise ValueError("phase tokens are not allowed inside gadgets")
        out.append((tok, (qubit,)))
    return out


def _emit(c: Circuit, ops) -> None:
    for name, qs in ops:
        c.add(name, *qs)


# ---------------------------------------------------------------------------
# controlled-Clifford gadgets

_A_WORD = ("S", "H", "T", "H")  # A^dag Z A = H

_BASE_GADGETS: dict[str, tuple[tuple[str, ...], Ops, int]] = {}


def _base_gadgets():
    """h -> (matrix word incl. phase, time-ordered ops, T-count)."""
    if _BASE_GADGETS:
        return _BASE_GADGETS
    ws = (("CX", (CTRL, ANC)), ("Tdg", (ANC,)), ("CX", (CTRL, ANC)), ("T", (ANC,)))
    lh = tuple(_ops_from_word(_A_WORD, ANC)) + (("CZ", (CTRL, ANC)),) + tuple(_ops_from_word(invert_word(_A_WORD), ANC))
    _BASE_GADGETS.update(
        {
            "Id": ((), (), 0),
            "wS": (("w^7", "S"), ws, 2),
            "H": (("H",), lh, 2),
            # matrix w^-1 S H: H first in time
            "wSH": (("H", "w^7", "S"), lh + ws, 4),
            "wHS": (("w^7", "S", "H"), ws + lh, 4),
        }
    )
    return _BASE_GADGETS


@dataclass(frozen=True)
class Gadget:
    target: RingUnitary  # g, realised as diag(I, g)
    ops: Ops
    control_phase: int  # extra diag(1, w^m) on the control
    tcount: int

    def circuit(self) -> Circuit:
        c = Circuit(2)
        _emit(c, self.ops)
        c.add_word(diag_phase_word(self.control_phase), CTRL)
        return c


@lru_cache(maxsize=1)
def gadget_table() -> dict[RingUnitary, Gadget]:
    """Cheapest known controlled version of each of the 192 Clifford gates."""
    table: dict[RingUnitary, Gadget] = {}
    paulis = ("I", "X", "Y", "Z")
    cands = []
    for hname, (hword, hops, hcost) in _base_gadgets().items():
        hm = word_matrix(hword)
        for cw in clifford_classes():
            cm = word_matrix(cw)
            chc = cm @ hm @ cm.adjoint()
            pre = tuple(_ops_from_word(invert_word(cw), ANC))
            post = tuple(_ops_from_word(cw, ANC))
            for ql in paulis:
                for qr in paulis:
                    g0 = word_matrix(() if ql == "I" else (ql,)) @ chc @ word_matrix(() if qr == "I" else (qr,))
                    ops = ((((_CP[qr], (CTRL, ANC)),) if qr != "I" else ()) + pre + hops + post + (((_CP[ql], (CTRL, ANC)),) if ql != "I" else ()))
                    ncliff = len(ops)
                    for m in range(8):
                        cands.append((hcost + (m % 2), ncliff, g0.times_omega(m), ops, m))
    cands.sort(key=lambda t: (t[0], t[1]))
    for cost, _, g, ops, m in cands:
        if g not in table:
            table[g] = Gadget(g, ops, m, cost)
    if len(table) != 192:
        raise AssertionError(f"gadget table covers {len(table)} Cliffords")
    return table


def controlled_clifford(g) -> Gadget:
    """Gadget for diag(I, g), g a Clifford given as a matrix or a time-ordered word."""
    m = g if isinstance(g, RingUnitary) else word_matrix(g)
    try:
        return gadget_table()[m]
    except KeyError:
        raise ValueError("not a Clifford gate") from None


def wrap_controlled_clifford(g) -> Circuit:
    return controlled_clifford(g).circuit()


def clifford_control_cost(g) -> int:
    return controlled_clifford(g).tcount


# ---------------------------------------------------------------------------
# lifting decorated codes


def lift_decorated(dec: DecoratedTCode, circuit: Circuit | None = None) -> Circuit:
    """Per syllable P T^d Q H: controlled P, T^d on the ancilla, controlled Q, H on the ancilla."""
    c = circuit if circuit is not None else Circuit(2)
    for p, d, q in dec.syllables:
        if p != "I":
            c.add(_CP[p], CTRL, ANC)
        c.add("T" if d == 1 else "Tdg", ANC)
        if q != "I":
            c.add(_CP[q], CTRL, ANC)
        c.add("H", ANC)
    return c


def jack_of_daggers(code: TCode) -> tuple[Circuit, RingUnitary]:
    """Circuit for diag(V, V^dag) with V = code followed by H (time order).

    V^dag equals (reversed, negated code) followed by H, a decoration of the
    code up to a phase, so only a controlled phase is added."""
    c2 = code.inverse_core()
    dec, m = decorate_code(code, c2)
    dec, m2 = reduce_paulis(dec)
    circ = lift_decorated(dec)
    circ.add("H", ANC)
    circ.add_word(diag_phase_word(m + m2), CTRL)
    v = word_matrix(code.word() + ("H",))
    return circ, v


# ---------------------------------------------------------------------------
# protocols


@dataclass
class RusProtocol:
    design: Circuit
    success_unitary: RingUnitary  # applied to the target on outcome 0 (up to a scalar)
    failure_word: tuple[str, ...]  # applied to the target on outcome 1 (up to a scalar)
    p_num: Root2Int  # success probability p_num / 2^p_L
    p_L: int
    V: RingUnitary | None = None
    theta: object = None
    epsilon: float | None = None
    info: dict = field(default_factory=dict)

    @property
    def p(self) -> float:
        return float(self.p_num) / 2.0**self.p_L

    @property
    def correction_word(self) -> tuple[str, ...]:
        return invert_word(self.failure_word)

    @property
    def design_tcount(self) -> int:
        return self.design.tcount()

    @property
    def correction_tcount(self) -> int:
        return word_tcount(self.correction_word)

    @property
    def expected_tcount(self) -> float:
        return expected_cost(self.design_tcount, self.correction_tcount, self.p)

    def success_distance(self, theta=None) -> float:
        theta = self.theta if theta is None else theta
        u = self.success_unitary.entries
        if u[0][1] or u[1][0]:
            raise ValueError("success unitary is not diagonal")
        from .verify import diag_distance_mp

        return diag_distance_mp(u[0][0], u[1][1], theta)

    def to_json(self) -> dict:
        return {
            "theta": None if self.theta is None else str(self.theta),
            "epsilon": self.epsilon,
            "design": self.design.to_json(),
            "listing": self.design.listing(),
            "success_unitary": self.success_unitary.to_json(),
            "failure": " ".join(self.failure_word) or "I",
            "correction": " ".join(self.correction_word) or "I",
            "p": self.p,
            "p_exact": {"num": self.p_num.to_json(), "L": self.p_L},
            "design_tcount": self.design_tcount,
            "expected_tcount": self.expected_tcount,
            "V": None if self.V is None else self.V.to_json(),
            "info": self.info,
        }

    @classmethod
    def from_json(cls, data: dict) -> RusProtocol:
        from .angles import Angle
        from .circuits import parse_word

        fail = parse_word(data["failure"]) if data["failure"] != "I" else ()
        return cls(
            Circuit.from_json(data["design"]),
            RingUnitary.from_json(data["success_unitary"]),
            fail,
            Root2Int.from_json(data["p_exact"]["num"]),
            int(data["p_exact"]["L"]),
            None if data.get("V") is None else RingUnitary.from_json(data["V"]),
            None if data.get("theta") is None else Angle.coerce(data["theta"]),
            data.get("epsilon"),
            data.get("info", {}),
        )


def eq_form_parts(v: RingUnitary) -> tuple[CyclotomicInt, CyclotomicInt, int]:
    """(z, y, L) for V = 1/sqrt2^L [[z, -y*], [y, z*]]."""
    if v.size != 2:
        raise NotEqForm("need a 2x2 matrix")
    (z, b), (y, d) = v.entries
    if d != z.conj() or b != -y.conj():
        raise NotEqForm("matrix is not of the form [[z, -y*], [y, z*]]")
    if not v.is_unitary():
        raise NotEqForm("matrix is not unitary")
    return z, y, v.L


def _rebase(form: TCodeForm, p: str) -> TCodeForm:
    """Same matrix with the Pauli p pushed through the code."""
    if p == "I":
        return form
    carry, phase, powers = p, 0, []
    for d in form.code.powers:
        d2, carry, m = push_rule(carry, d)
        powers.append(d2)
        phase += m
    g1 = tuple(form.g1) + (p,)
    g2 = simplify_phases((phase_token(phase),) + (() if carry == "I" else (carry,)) + tuple(form.g2))
    return TCodeForm(g1, TCode(tuple(powers)), g2)


def _s_word(d: int) -> tuple[str, ...]:
    return {0: (), 1: ("S",), -1: ("Sdg",)}[d]


def _variant_pairs(variant: str):
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    pairs = [(d1, d2) for d1 in (0, 1, -1) for d2 in (0, 1, -1)]
    if variant == "z":
        return [(0, 0)]
    if variant == "s":
        return [pr for pr in pairs if pr[0] != 0]
    return pairs


@dataclass(frozen=True)
class _Plan:
    cost: int
    form: TCodeForm
    dec: DecoratedTCode
    a: RingUnitary
    b: RingUnitary
    d1: int
    d2: int
    rebase: str
    s: int


def _plan(v: RingUnitary, variant: str) -> _Plan:
    base = to_tcode_form(v)
    gt = gadget_table()
    best = None
    for pauli in ("I", "X", "Y", "Z"):
        form = _rebase(base, pauli)
        c2 = form.code.inverse_core()
        dec, m = decorate_code(form.code, c2)
        dec, m2 = reduce_paulis(dec)
        inv_g1 = invert_word(form.g1)
        inv_g2 = invert_word(form.g2)
        for d1, d2 in _variant_pairs(variant):
            g3 = _s_word(d2) + inv_g2 + ("H",)
            g4 = ("H",) + inv_g1 + _s_word(d1)
            a = word_matrix(g3 + inv_g1)
            b = word_matrix(inv_g2 + g4).times_omega(m + m2)
            for s in range(8):
                ca = gt[a.times_omega(s)].tcount
                cb = gt[b.times_omega(-s % 8)].tcount
                cost = len(form.code) + ca + cb
                if best is None or cost < best.cost:
                    best = _Plan(cost, form, dec, a.times_omega(s), b.times_omega(-s % 8), d1, d2, pauli, s)
    return best


def rus_synthesis(v: RingUnitary, variant: str = "auto", theta=None, epsilon=None, verify: bool = True) -> RusProtocol:
    """RUS protocol for an eq-form design matrix."""
    z, y, L = eq_form_parts(v)
    pnum = z.abs_squared()
    # p > 1/2  <=>  2 |z|^2 > 2^L
    if not pnum * 2 > Root2Int(1 << L, 0):
        raise LowSuccessProbability(f"success probability {float(pnum) / 2.0**L:.4f} <= 1/2")
    t = tcount(v)
    plan = _plan(v, variant)
    circ = Circuit(2)
    circ.extend(controlled_clifford(plan.a).circuit())
    circ.add_word(plan.form.g1, ANC)
    lift_decorated(plan.dec, circ)
    circ.add_word(plan.form.g2, ANC)
    circ.extend(controlled_clifford(plan.b).circuit())
    d1 = plan.d1
    failure = _s_word(d1) + ("Z",)
    success = RingUnitary([[z, CyclotomicInt()], [CyclotomicInt(), z.conj()]], 0, reduce=False)
    if verify:
        # W = S^d1 V^dag S^d2 as matrices
        w = word_matrix(_s_word(d1)) @ v.adjoint() @ word_matrix(_s_word(plan.d2))
        want = direct_sum(v, w)
        if circ.unitary() != want:
            raise AssertionError("RUS circuit does not implement diag(V, W)")
    info = {
        "t": t,
        "d1": plan.d1,
        "d2": plan.d2,
        "rebase": plan.rebase,
        "phase_shift": plan.s,
        "wrapper_tcount": plan.cost - len(plan.form.code),
        "paulis": plan.dec.pauli_count(),
        "variant": variant,
    }
    circ.meta = {"kind": "rus", **info}
    return RusProtocol(circ, success, failure, pnum, L, v, theta, epsilon, info)


def exact_protocol(k: int, theta=None, epsilon=None) -> RusProtocol:
    """Rotation by k pi/4: diag(1, w^k) on the target, succeeds with certainty."""
    circ = Circuit(2)
    circ.add_word(diag_phase_word(k), CTRL)
    circ.meta = {"kind": "exact", "k": k % 8}
    one, zero = CyclotomicInt.from_int(1), CyclotomicInt()
    success = RingUnitary([[one, zero], [zero, CyclotomicInt.omega_power(k)]], 0)
    return RusProtocol(circ, success, ("Z",), Root2Int(1, 0), 0, None, theta, epsilon, {"t": k % 2, "exact": True})


def s_dagger_optimize(protocol: RusProtocol) -> RusProtocol:
    """Best of the nine S^d1 V^dag S^d2 variants; never worse than the input."""
    if protocol.V is None:
        return protocol
    cand = rus_synthesis(protocol.V, "auto", protocol.theta, protocol.epsilon)
    return cand if cand.expected_tcount <= protocol.expected_tcount else protocol


def synthesize(theta, epsilon: float, params=None, variant: str = "auto", trace: bool = False, normalization: int = 1):
    """End-to-end: design V for Rz(theta) and build its RUS protocol."""
    from .pipeline import single_qubit_design

    design = single_qubit_design(theta, epsilon, params, normalization, trace)
    if design.exact_k is not None:
        proto = exact_protocol(design.exact_k, design.theta, epsilon)
    else:
        proto = rus_synthesis(design.V, variant, design.theta, epsilon)
    proto.info.update(
        {
            "halvings": design.halvings,
            "epsilon_used": design.epsilon_used,
            "pslq_iterations": 0 if design.relation is None else design.relation.iterations,
            "candidates_tried": design.stats.tried,
            "norm_equations_solved": design.stats.solvable,
            "z": None if design.relation is None else design.relation.z.to_json(),
        }
    )
    if trace:
        proto.info["trace"] = design.stats.trace
    return proto, design


# ---------------------------------------------------------------------------
# two-ancilla embedding


def _two_squares_prime(p: int) -> tuple[int, int]:
    """a^2 + b^2 = p for a prime p = 1 mod 4 (Hermite-Serret)."""
    r = sqrt_mod(-1, p)
    a, b = p, r
    lim = math.isqrt(p)
    while b > lim:
        a, b = b, a % b
    c = math.isqrt(p - b * b)
    assert b * b + c * c == p
    return b, c


def _four_squares_brute(n: int) -> tuple[int, int, int, int]:
    for a in range(math.isqrt(n), -1, -1):
        ra = n - a * a
        for b in range(min(a, math.isqrt(ra)), -1, -1):
            rb = ra - b * b
            for c in range(min(b, math.isqrt(rb)), -1, -1):
                rc = rb - c * c
                d = math.isqrt(rc)
                if d * d == rc and d <= c:
                    return (a, b, c, d)
    raise AssertionError("four squares search failed")


def four_squares(n: int, rng: random.Random | None = None, attempts: int = 10_000) -> tuple[int, int, int, int]:
    """(a, b, c, d), sorted descending, with a^2 + b^2 + c^2 + d^2 = n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n < 1 << 16:
        return _four_squares_brute(n)
    rng = rng or random.Random(n)
    k = 0
    m = n
    while m % 4 == 0:
        m //= 4
        k += 1
    scale = 1 << k
    for _ in range(attempts):
        # pick a, b so that m - a^2 - b^2 is a prime = 1 mod 4 (or twice one)
        a = rng.randrange(0, math.isqrt(m) + 1)
        rest = m - a * a
        if rest < 0:
            continue
        b = rng.randrange(0, math.isqrt(rest) + 1)
        p = rest - b * b
        if p == 0:
            out = (a, b, 0, 0)
        elif p == 1 or p == 2:
            out = (a, b, 1, p - 1)
        elif p % 4 == 1 and is_probable_prime(p):
            c, d = _two_squares_prime(p)
            out = (a, b, c, d)
        else:
            continue
        res = tuple(sorted((scale * x for x in out), reverse=True))
        assert sum(x * x for x in res) == n
        return res
    return _four_squares_brute(n)


@dataclass
class Embedding4Block:
    alpha: int
    beta0: tuple[int, int]  # Gaussian integer (re, im)
    gamma0: tuple[int, int]
    ell: int
    W: RingUnitary
    A: RingUnitary  # alpha V

    def four_squares_identity(self) -> bool:
        a2 = self.alpha * self.alpha
        b = self.beta0[0] ** 2 + self.beta0[1] ** 2
        c = self.gamma0[0] ** 2 + self.gamma0[1] ** 2
        return a2 + b + c == 1 << self.ell


def build_embedding_2anc(v, alpha: int, rng: random.Random | None = None) -> Embedding4Block:
    """Unitary W on two ancillas plus the target with W|00>|psi> having the
    branch alpha V |psi> / sqrt2^ell; all other branches are multiples of |psi>.

    ``v`` is either a RingUnitary A = alpha V (entries in Z[w]/sqrt2^k), or a
    pair (A, alpha).  The premultiplier alpha must be a rational integer with
    A^dag A == alpha^2 I."""
    A = v
    if A.size != 2:
        raise NoPremultiplier("single-qubit V only")
    gram = A.adjoint() @ A
    a2 = alpha * alpha
    if gram != RingUnitary([[CyclotomicInt.from_int(a2), CyclotomicInt()], [CyclotomicInt(), CyclotomicInt.from_int(a2)]], 0):
        raise NoPremultiplier("alpha V is not alpha times a unitary over Z[w]/sqrt2^k")
    ell = max(0, math.ceil(math.log2(a2))) if a2 > 0 else 0
    while (1 << ell) < a2:
        ell += 1
    while ell > 0 and (1 << (ell - 1)) >= a2:
        ell -= 1
    a, b, c, d = four_squares((1 << ell) - a2, rng)
    beta = CyclotomicInt.gaussian(a, b)
    gamma = CyclotomicInt.gaussian(c, d)
    k = A.L
    # scalars must share A's denominator sqrt2^k
    s = CyclotomicInt(-1, 0, 1, 0) ** k  # sqrt2^k
    B = beta * s
    C = gamma * s
    zero = CyclotomicInt()
    Ae = A.entries
    Ad = A.adjoint().entries

    def blk(kind):
        if kind == "A":
            return Ae
        if kind == "Ad":
            return Ad
        if kind == 0:
            return ((zero, zero), (zero, zero))
        return ((kind, zero), (zero, kind))

    layout = [
        ["A", -B.conj(), -C.conj(), 0],
        [B, "Ad", 0, -C.conj()],
        [C, 0, "Ad", B.conj()],
        [0, C, -B, "A"],
    ]
    rows = []
    for brow in layout:
        for i in range(2):
            row = []
            for bk in brow:
                row.extend(blk(bk)[i])
            rows.append(row)
    W = RingUnitary(rows, ell + k)
    return Embedding4Block(alpha, (a, b), (c, d), ell, W, A)


def _det_is_one(rows, L) -> bool:
    det, k = determinant(RingUnitary(rows, L, reduce=False))
    return det == SQRT2_Z**k


def determinant_is_one(W: RingUnitary) -> bool:
    return _det_is_one(W.entries, W.L)


def block_determinant_is_one(W: RingUnitary) -> bool:
    """det(W) == 1 through the block formula det(P S - Q R), valid when R S == S R."""
    n = W.size // 2
    e = W.entries

    def sub(r0, c0):
        return RingUnitary([[e[r0 + i][c0 + j] for j in range(n)] for i in range(n)], W.L, reduce=False)

    P, Q, R, S = sub(0, 0), sub(0, n), sub(n, 0), sub(n, n)
    if R @ S != S @ R:
        return False
    (ps, qr), L = common_denominator([P @ S, Q @ R])
    diff = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(ps, qr)]
    return _det_is_one(diff, L)


def random_rational_unitary(rng: random.Random, coeff: int = 4, tgates: int = 6) -> tuple[RingUnitary, int]:
    """(A, alpha): A = alpha V for a random V over Q(w) with det V = 1.

    V is the unit quaternion u^2 / |u|^2 (u a random integer quaternion) times a
    random Clifford+T special unitary; alpha = |u|^2."""
    while True:
        u = [rng.randint(-coeff, coeff) for _ in range(4)]
        if any(u):
            break
    a, b, c, d = u
    q = (a * a - b * b - c * c - d * d, 2 * a * b, 2 * a * c, 2 * a * d)
    alpha = a * a + b * b + c * c + d * d
    x0, x1, x2, x3 = q
    Q = RingUnitary(
        [[CyclotomicInt.gaussian(x0, x1), CyclotomicInt.gaussian(x2, x3)], [CyclotomicInt.gaussian(-x2, x3), CyclotomicInt.gaussian(x0, -x1)]],
        0,
        reduce=False,
    )
    word = tuple(rng.choice(("H", "T", "S", "Tdg")) for _ in range(4 * tgates))
    G = word_matrix(word)
    # make det G = 1 by a phase: det G = w^k for Clifford+T words
    det, k = determinant(G)
    ph = None
    for j in range(8):
        if det.times_omega(2 * j) == SQRT2_Z**k:
            ph = j
            break
    if ph is None:
        # odd determinant phase: fix with T T^... impossible by a scalar; append a T gate
        G = word_matrix(word + ("T",))
        det, k = determinant(G)
        ph = next(j for j in range(8) if det.times_omega(2 * j) == SQRT2_Z**k)
    G = G.times_omega(ph)
    return Q @ G, alpha


# ---------------------------------------------------------------------------
# low T-depth J(V) with two ancillas

# qubits: b (control), psi, a1, a2


def ccz_ops(a: int, b: int, c: int) -> list[tuple[str, tuple[int, ...]]]:
    """Doubly controlled Z with 7 T gates in three T layers."""
    return [
        ("T", (a,)), ("T", (b,)), ("T", (c,)),
        ("CX", (b, c)), ("CX", (a, b)), ("CX", (c, a)),
        ("T", (a,)), ("Tdg", (b,)), ("Tdg", (c,)),
        ("CX", (b, c)),
        ("Tdg", (c,)),
        ("CX", (b, c)), ("CX", (c, a)), ("CX", (a, b)), ("CX", (b, c)),
    ]


def cswap_ops(ctrl: int, t1: int, t2: int) -> list[tuple[str, tuple[int, ...]]]:
    return [("CX", (t2, t1)), ("H", (t2,))] + ccz_ops(ctrl, t1, t2) + [("H", (t2,)), ("CX", (t2, t1))]


def in_sxy(v: RingUnitary) -> bool:
    """Special unitary with a real top-left entry."""
    z, _, _ = eq_form_parts(v)
    return z.is_real()


def build_low_depth_jod(v: RingUnitary, word: tuple[str, ...] | None = None) -> Circuit:
    """4-qubit circuit: |b>|psi>|00> -> |b> V^((-1)^b) |psi> |00>."""
    try:
        ok = in_sxy(v)
    except NotEqForm as exc:
        raise NotInSxy(str(exc)) from None
    if not ok:
        raise NotInSxy("top-left entry of V is not real")
    if word is None:
        word = exact_synthesize(v)
    b, psi, a1, a2 = 0, 1, 2, 3
    prep = [("H", (a1,)), ("X", (a2,)), ("CX", (a1, a2)), ("CZ", (b, a1))]
    c = Circuit(4)
    _emit(c, prep)
    _emit(c, cswap_ops(b, psi, a1))
    c.add_word(word, psi)
    c.add_word([t for t in invert_word(word) if not t.startswith("w")], a1)
    c.add_word([t for t in word if not t.startswith("w")], a2)
    _emit(c, cswap_ops(b, psi, a1))
    _emit(c, [(n, q) for n, q in reversed(prep)])
    c.meta = {"kind": "low_depth_jod", "tdepth_v": Circuit.from_word(word).tdepth()}
    return c
