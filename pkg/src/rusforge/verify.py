"""Simulation and validation.

Two simulators: an exact one over Z[w] / sqrt2^L and a numpy one.  Every
check that can be exact is exact; floating point (or mpmath) is only used for
distances to irrational targets such as Rz(theta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import mpmath
import numpy as np

from .angles import Angle
from .circuits import Circuit, Gate, apply_gate_float, apply_gate_raw, norm_squared, word_matrix
from .ring import CyclotomicInt, NotInRing, RingUnitary, Root2Int


class NonRingGate(ValueError):
    pass


class NotUnitary(ValueError):
    pass


class NormViolation(AssertionError):
    pass


class ProtocolMismatch(AssertionError):
    def __init__(self, message: str, diff: dict | None = None):
        super().__init__(message)
        self.diff = diff or {}


# ---------------------------------------------------------------------------
# exact states


@dataclass(frozen=True)
class RingState:
    """Amplitudes ``amps / sqrt2^L`` with amps in Z[w]."""

    amps: tuple[CyclotomicInt, ...]
    L: int = 0

    @property
    def nqubits(self) -> int:
        return len(self.amps).bit_length() - 1

    @classmethod
    def basis(cls, nqubits: int, index: int = 0) -> RingState:
        amps = [CyclotomicInt()] * (1 << nqubits)
        amps[index] = CyclotomicInt.from_int(1)
        return cls(tuple(amps), 0)

    @classmethod
    def from_vector(cls, amps, L: int = 0) -> RingState:
        return cls(tuple(CyclotomicInt(*a) for a in amps), L)

    def norm_squared(self) -> Root2Int:
        return norm_squared(self.amps)

    def is_normalized(self) -> bool:
        return self.norm_squared() == Root2Int(1 << self.L, 0)

    def reduced(self) -> RingState:
        amps, L = list(self.amps), self.L
        while L > 0:
            try:
                amps = [a.div_sqrt2() for a in amps]
            except NotInRing:
                break
            L -= 1
        return RingState(tuple(amps), L)

    def to_numpy(self) -> np.ndarray:
        return np.array([complex(a) for a in self.amps]) / math.sqrt(2) ** self.L

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingState):
            return NotImplemented
        a, b = self.reduced(), other.reduced()
        return a.L == b.L and a.amps == b.amps

    def __hash__(self) -> int:
        r = self.reduced()
        return hash((r.amps, r.L))


def simulate_exact(
    circuit: Circuit,
    state: RingState | None = None,
    hook: Callable[[int, Gate, RingState], None] | None = None,
    check_norm: bool = False,
) -> RingState:
    """Exact output state.  ``hook`` sees the state after every gate; with
    ``check_norm`` the identity sum |amp|^2 == 2^L is asserted at every step."""
    n = circuit.nqubits
    if state is None:
        state = RingState.basis(n)
    if len(state.amps) != 1 << n:
        raise ValueError("state size does not match the circuit")
    col = [tuple(a) for a in state.amps]
    cols = [col]
    L = state.L
    for i, g in enumerate(circuit.gates):
        try:
            L += apply_gate_raw(cols, n, g)
        except ValueError as exc:
            raise NonRingGate(str(exc)) from exc
        if hook is not None or check_norm:
            st = RingState(tuple(CyclotomicInt(*a) for a in cols[0]), L)
            if check_norm and st.norm_squared() != Root2Int(1 << L, 0):
                raise NormViolation(f"norm not conserved after gate {i} ({g})")
            if hook is not None:
                hook(i, g, st)
    return RingState(tuple(CyclotomicInt(*a) for a in cols[0]), L)


def simulate_float(circuit: Circuit, state: np.ndarray | None = None) -> np.ndarray:
    n = circuit.nqubits
    if state is None:
        state = np.zeros(1 << n, dtype=complex)
        state[0] = 1
    psi = np.asarray(state, dtype=complex)
    for g in circuit.gates:
        psi = apply_gate_float(psi, n, g)
    return psi


# ---------------------------------------------------------------------------
# distances


def rz(theta) -> np.ndarray:
    t = float(theta)
    return np.array([[np.exp(-0.5j * t), 0], [0, np.exp(0.5j * t)]])


def _check_unitary(u: np.ndarray, tol: float = 1e-12):
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or np.max(np.abs(u.conj().T @ u - np.eye(2))) > max(tol, 1e-9):
        raise NotUnitary("matrix is not unitary")
    return u


def distance(u, v, tol: float = 1e-12) -> float:
    """d(U, V) = sqrt(1 - |tr(U^dag V)|/2), evaluated without cancellation."""
    u = _check_unitary(u, tol)
    v = _check_unitary(v, tol)
    w = u.conj().T @ v
    ph = np.sqrt(np.linalg.det(w))
    s = w / ph
    a, b = s[0, 0], s[1, 0]
    c = abs(a.real)
    sn = math.sqrt(a.imag**2 + abs(b) ** 2)
    x = math.atan2(sn, c)  # |tr|/2 = cos x
    return math.sqrt(2) * math.sin(x / 2)


def phase_distance_mp(z: CyclotomicInt, theta, prec: int = 200) -> float:
    """d(diag(z, z*)/|z|, Rz(theta)) at high precision."""
    theta = Angle.coerce(theta)
    with mpmath.workprec(prec):
        a, b, c, d = z
        h = mpmath.sqrt(2) / 2
        zc = mpmath.mpc(d + (c - a) * h, b + (c + a) * h)
        # both diagonal: tr(U^dag V) = 2 Re(conj(u0) v0) up to the SU(2) phase
        u0 = zc / abs(zc)
        v0 = mpmath.expj(-theta.mp() / 2)
        t = abs(mpmath.re(mpmath.conj(u0) * v0))
        # 1 - cos x with x = acos(t), computed via sin
        x = mpmath.acos(min(t, mpmath.mpf(1)))
        return float(mpmath.sqrt(2) * mpmath.sin(x / 2))


def diag_distance_mp(d0: CyclotomicInt, d1: CyclotomicInt, theta, prec: int = 200) -> float:
    """d(diag(d0, d1)/|d0|, Rz(theta)) for |d0| == |d1|."""
    theta = Angle.coerce(theta)
    with mpmath.workprec(prec):
        def c(z):
            a, b, cc, d = z
            h = mpmath.sqrt(2) / 2
            return mpmath.mpc(d + (cc - a) * h, b + (cc + a) * h)

        x0, x1 = c(d0), c(d1)
        # relative phase of the diagonal against e^{i theta}
        rel = (x1 / x0) / abs(x1 / x0)
        t = mpmath.expj(theta.mp())
        ang = abs(mpmath.arg(rel / t))
        # |tr|/2 = |cos(ang/2)|
        return float(mpmath.sqrt(2) * mpmath.sin(ang / 4))


# ---------------------------------------------------------------------------
# protocol validation


@dataclass
class BranchReport:
    outcome: int
    probability_num: Root2Int
    probability_L: int
    induced: RingUnitary | None
    matches_expected: bool
    detail: dict = field(default_factory=dict)

    @property
    def probability(self) -> float:
        return float(self.probability_num) / 2.0**self.probability_L

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "probability": self.probability,
            "probability_exact": {"num": self.probability_num.to_json(), "L": self.probability_L},
            "induced": None if self.induced is None else self.induced.to_json(),
            "matches_expected": self.matches_expected,
            **self.detail,
        }


def branch_operators(design: Circuit) -> tuple[RingUnitary, RingUnitary]:
    """K_m = (I x <m|) U (I x |0>) for a two-qubit design (target 0, ancilla 1)."""
    if design.nqubits != 2:
        raise ValueError("branch operators need a two-qubit design")
    u = design.unitary()
    e = u.entries
    k0 = [[e[0][0], e[0][2]], [e[2][0], e[2][2]]]
    k1 = [[e[1][0], e[1][2]], [e[3][0], e[3][2]]]
    return RingUnitary(k0, u.L, reduce=False), RingUnitary(k1, u.L, reduce=False)


def _scalar_of(m: RingUnitary) -> CyclotomicInt | None:
    e = m.entries
    if e[0][1] or e[1][0] or e[0][0] != e[1][1]:
        return None
    return e[0][0]


def _proportional(k: RingUnitary, target: RingUnitary) -> bool:
    """k == c * target for some scalar c (exact)."""
    return _scalar_of(k @ target.adjoint()) is not None


def _gram(k: RingUnitary) -> tuple[Root2Int, int] | None:
    """(num, L) with K^dag K == num / 2^L * I, or None when not scalar."""
    g = k.adjoint() @ k
    c = _scalar_of(g)
    if c is None or not c.is_real():
        return None
    # g = c / sqrt2^gL ; express over a power of 2
    L = g.L
    num = c.to_root2()
    if L % 2:
        num = num * Root2Int(0, 1)
        L += 1
    return num, L // 2


def validate_protocol(protocol, theta=None, epsilon: float | None = None, raise_on_fail: bool = True) -> tuple[BranchReport, BranchReport]:
    """Check both measurement branches of ``protocol`` by exact simulation."""
    k0, k1 = branch_operators(protocol.design)
    diff: dict = {}
    g0 = _gram(k0)
    g1 = _gram(k1)
    ok_norm = g0 is not None and g1 is not None
    if ok_norm:
        (n0, l0), (n1, l1) = g0, g1
        L = max(l0, l1)
        tot = n0 * (1 << (L - l0)) + n1 * (1 << (L - l1))
        ok_norm = tot == Root2Int(1 << L, 0)
    else:
        n0 = n1 = Root2Int(0, 0)
        l0 = l1 = 0
    if not ok_norm:
        diff["completeness"] = "K0^dag K0 + K1^dag K1 != I or not scalar"

    # probability against the declared exact value
    pnum, pL = protocol.p_num, protocol.p_L
    ok_p = ok_norm and n0 * (1 << pL) == pnum * (1 << l0)
    if not ok_p:
        diff["probability"] = {"declared": float(pnum) / 2.0**pL, "simulated": float(n0) / 2.0**l0 if ok_norm else None}

    ok_s = _proportional(k0, protocol.success_unitary)
    if not ok_s:
        diff["success"] = {"expected": protocol.success_unitary.to_json(), "simulated": k0.to_json()}
    detail0: dict = {}
    if theta is not None:
        dist = protocol.success_distance(theta)
        detail0["distance"] = dist
        if epsilon is not None and not dist <= epsilon:
            ok_s = False
            diff["distance"] = {"achieved": dist, "requested": epsilon}
    fail_prob_zero = n1 == 0
    ok_f = True
    if not fail_prob_zero:
        fail_m = word_matrix(protocol.failure_word)
        ok_f = _proportional(k1, fail_m)
        if not ok_f:
            diff["failure"] = {"expected": list(protocol.failure_word), "simulated": k1.to_json()}
    r0 = BranchReport(0, n0, l0, k0, ok_s and ok_p, detail0)
    r1 = BranchReport(1, n1, l1, None if fail_prob_zero else k1, ok_f and ok_norm, {"failure_word": list(protocol.failure_word)})
    if raise_on_fail and diff:
        raise ProtocolMismatch("protocol validation failed: " + ", ".join(sorted(diff)), diff)
    return r0, r1


# ---------------------------------------------------------------------------
# cost


def expected_cost(design_t: float, correction_t: float, p: float) -> float:
    """E[C] = (C(U) + C(W) (1 - p)) / p for repeat-until-success."""
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    return (design_t + correction_t * (1 - p)) / p


def monte_carlo_cost(design_t: float, correction_t: float, p: float, trials: int = 1_000_000, seed: int = 0) -> tuple[float, float]:
    """Sample mean and standard error of the total cost of repeated rounds."""
    rng = np.random.default_rng(seed)
    rounds = rng.geometric(p, size=trials)
    cost = rounds * design_t + (rounds - 1) * correction_t
    return float(cost.mean()), float(cost.std(ddof=1) / math.sqrt(trials))
