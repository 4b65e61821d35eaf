"""Design of the single-qubit unitary V.

Given z with z*/z close to e^{i theta}, look for a real modifier r in Z[sqrt2]
such that the norm equation |y|^2 = 2^L - |r z|^2 is easy, and assemble

    V = 1/sqrt2^L [[r z, -y*], [y, (r z)*]].

The success probability of the resulting protocol is |r z|^2 / 2^L.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field

import mpmath
import numpy as np

from . import normeq
from .angles import Angle
from .relation import PhaseTarget, RelationResult, find_relation
from .ring import CyclotomicInt, RingUnitary, Root2Int, ceil_log2
from .rng import stream
from .synth1q import NotUnitary, tcount
from .verify import distance

MAX_HALVINGS = 16


class IterationCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchParams:
    delta: float = 0.5
    sz: float = 4.0
    p_min: float = 0.5
    seed: int = 0
    budget_ms: float = normeq.DEFAULT_BUDGET_MS

    def __post_init__(self):
        if not 0 < self.delta <= 1:
            raise ValueError("delta must lie in (0, 1]")
        if self.sz <= 0:
            raise ValueError("sz must be positive")


@dataclass(frozen=True)
class Candidate:
    r: Root2Int
    rz: CyclotomicInt
    y: CyclotomicInt
    Lr: int
    p_num: Root2Int  # |r z|^2; p = p_num / 2^Lr
    tcount: int

    @property
    def p(self) -> float:
        return float(self.p_num) / 2.0**self.Lr

    @property
    def tc(self) -> float:
        return self.tcount / self.p

    def key(self):
        return (self.tc, self.Lr, float(self.r), self.r[1])

    def matrix(self) -> RingUnitary:
        return eq_matrix(self.rz, self.y, self.Lr)


def eq_matrix(z: CyclotomicInt, y: CyclotomicInt, L: int) -> RingUnitary:
    return RingUnitary([[z, -y.conj()], [y, z.conj()]], L)


# ---------------------------------------------------------------------------
# sampling domain


def sample_domain(L1: int, delta: float) -> list[Root2Int]:
    """All r = a + b sqrt2 > 0 with |r| and |r.bullet| below 2^(delta L1 / 2), in
    lexicographic (a, b) order; r = 1 is always included."""
    with mpmath.workprec(128):
        bound = mpmath.mpf(2) ** (mpmath.mpf(delta) * L1 / 2)
        r2 = mpmath.sqrt(2)
        amax = int(mpmath.floor(bound))
        out = []
        for a in range(-amax, amax + 1):
            bmax = int(mpmath.floor((bound - abs(a)) / r2)) + 1
            for b in range(-bmax, bmax + 1):
                # |a + b sqrt2| and |a - b sqrt2| both < bound  <=>  |a| + |b| sqrt2 < bound
                if abs(a) + abs(b) * r2 >= bound:
                    continue
                r = Root2Int(a, b)
                if r.sign() > 0:
                    out.append(r)
    if Root2Int(1, 0) not in out:
        out.insert(0, Root2Int(1, 0))
    return out


# ---------------------------------------------------------------------------
# candidates


@dataclass
class SearchStats:
    tried: int = 0
    solvable: int = 0
    trace: list = field(default_factory=list)


def evaluate(r: Root2Int, z: CyclotomicInt, params: SearchParams, stats: SearchStats | None = None, keep_trace=False, rng=None) -> Candidate | None:
    rz = z * r.to_cyclotomic()
    n = rz.abs_squared()
    Lr = ceil_log2(n)
    xi = Root2Int(1 << Lr, 0) - n
    if stats is not None:
        stats.tried += 1
    if xi == 0:
        y = CyclotomicInt()
        reason = "exact"
    else:
        fact, y = normeq.solve(xi, params.budget_ms, rng)
        reason = fact.verdict.reason
    cand = None
    if y is not None:
        v = eq_matrix(rz, y, Lr)
        cand = Candidate(r, rz, y, Lr, n, tcount(v))
        if stats is not None:
            stats.solvable += 1
    if keep_trace and stats is not None:
        rec = {"r": r.to_json(), "Lr": Lr, "p": float(n) / 2.0**Lr, "verdict": reason}
        if cand is not None:
            rec["tcount"] = cand.tcount
            rec["tc"] = cand.tc
        stats.trace.append(rec)
    return cand


def _prepare(z: CyclotomicInt, params: SearchParams, label: str):
    if not z:
        raise ValueError("z must be nonzero")
    L1 = ceil_log2(z.abs_squared())
    domain = sample_domain(L1, params.delta)
    rng = stream(params.seed, label)
    order = list(domain)
    rng.shuffle(order)
    return L1, order


def rand_normalization_1(z: CyclotomicInt, params: SearchParams, stats: SearchStats | None = None, trace: bool = False, label: str = "normalization") -> Candidate | None:
    """Best candidate over at most sz * delta * L1^2 + 1 samples of S_delta."""
    L1, order = _prepare(z, params, label)
    count = int(math.floor(params.sz * params.delta * L1 * L1)) + 1
    best = None
    mr = stream(params.seed, label + ":mr")
    for r in order[:count]:
        c = evaluate(r, z, params, stats, trace, mr)
        if c is not None and (best is None or c.key() < best.key()):
            best = c
    return best


def rand_normalization_2(z: CyclotomicInt, params: SearchParams, stats: SearchStats | None = None, trace: bool = False, label: str = "normalization2") -> Candidate | None:
    """Best candidate with p > p_min over the whole of S_delta."""
    _, order = _prepare(z, params, label)
    best = None
    mr = stream(params.seed, label + ":mr")
    for r in order:
        c = evaluate(r, z, params, stats, trace, mr)
        if c is None or not c.p > params.p_min:
            continue
        if best is None or c.key() < best.key():
            best = c
    return best


def tcount_of(m: RingUnitary) -> int:
    """Minimal T-count of a single-qubit exact unitary."""
    return tcount(m)


# ---------------------------------------------------------------------------
# design loop


@dataclass
class Design:
    theta: Angle
    epsilon: float
    V: RingUnitary
    z: CyclotomicInt  # raw relation output
    candidate: Candidate | None
    relation: RelationResult | None
    epsilon_used: float
    halvings: int
    restarts: int
    stats: SearchStats
    exact_k: int | None = None  # theta = k pi / 4
    wall_ms: float = 0.0

    @property
    def p(self) -> float:
        return 1.0 if self.candidate is None else self.candidate.p

    @property
    def L(self) -> int:
        return self.V.L

    def phase_distance(self) -> float:
        """d(success rotation, Rz(theta))."""
        from .verify import phase_distance_mp

        if self.exact_k is not None:
            return 0.0
        return phase_distance_mp(self.candidate.rz, self.theta)


def exact_design(k: int) -> RingUnitary:
    """diag(1, w^k): the exact rotation by k pi/4 up to phase."""
    return RingUnitary([[CyclotomicInt.from_int(1), CyclotomicInt()], [CyclotomicInt(), CyclotomicInt.omega_power(k)]], 0)


def single_qubit_design(theta, epsilon: float, params: SearchParams | None = None, variant: int = 1, trace: bool = False) -> Design:
    """Halve epsilon until the normalization search succeeds; raise sz and retry once."""
    params = params or SearchParams()
    theta = Angle.coerce(theta)
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    t0 = time.perf_counter()
    stats = SearchStats()
    k = theta.eighth_turns()
    if k is not None:
        return Design(theta, epsilon, exact_design(k), CyclotomicInt.from_int(1), None, None, epsilon, 0, 0, stats, exact_k=k % 8)
    cur = params
    for restart in range(2):
        eps = epsilon
        for halving in range(MAX_HALVINGS + 1):
            rel = find_relation(PhaseTarget(theta, eps))
            label = f"normalization:{restart}:{halving}"
            if variant == 2:
                cand = rand_normalization_2(rel.z, cur, stats, trace, label)
            else:
                cand = rand_normalization_1(rel.z, cur, stats, trace, label)
            if cand is not None:
                d = Design(theta, epsilon, cand.matrix(), rel.z, cand, rel, eps, halving, restart, stats)
                d.wall_ms = (time.perf_counter() - t0) * 1000
                return d
            # halving may leave the relation unchanged; step just below what z achieves
            eps = min(eps / 2, 0.9 * rel.distance) if rel.distance > 0 else eps / 2
        cur = SearchParams(cur.delta, cur.sz * 4, cur.p_min, cur.seed, cur.budget_ms)
    raise IterationCapExceeded(f"no design after {MAX_HALVINGS} halvings and one restart")


# ---------------------------------------------------------------------------
# axial decomposition


def _rz(t):
    return np.array([[cmath.exp(-0.5j * t), 0], [0, cmath.exp(0.5j * t)]])


_H = np.array([[1, 1], [1, -1]]) / math.sqrt(2)


def compose_zxz(alpha: float, beta: float, gamma: float, delta: float) -> np.ndarray:
    """e^{i delta} Rz(alpha) H Rz(beta) H Rz(gamma)."""
    return cmath.exp(1j * delta) * (_rz(alpha) @ _H @ _rz(beta) @ _H @ _rz(gamma))


def decompose_zxz(u) -> tuple[float, float, float, float]:
    """(alpha, beta, gamma, delta) with u == e^{i delta} Rz(alpha) H Rz(beta) H Rz(gamma)."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or np.max(np.abs(u.conj().T @ u - np.eye(2))) > 1e-12 * 100:
        raise NotUnitary("matrix is not unitary")
    delta = cmath.phase(np.linalg.det(u)) / 2
    w = u * cmath.exp(-1j * delta)
    c, s = abs(w[0, 0]), abs(w[1, 0])
    beta = 2 * math.atan2(s, c)
    plus = -2 * cmath.phase(w[0, 0]) if c > 1e-15 else 0.0
    minus = 2 * (cmath.phase(w[1, 0]) + math.pi / 2) if s > 1e-15 else 0.0
    if c <= 1e-15:
        plus = 0.0
    if s <= 1e-15:
        # pure z rotation: put everything in alpha
        alpha, gamma = plus, 0.0
    else:
        alpha = (plus + minus) / 2
        gamma = (plus - minus) / 2
    # the SU(2) lift is fixed only up to sign; absorb it in delta
    if np.max(np.abs(compose_zxz(alpha, beta, gamma, delta) - u)) > 1e-9:
        delta += math.pi
    return alpha, beta, gamma, delta


def zxz_error(u) -> float:
    a, b, g, d = decompose_zxz(u)
    return distance(np.asarray(u, dtype=complex), compose_zxz(a, b, g, d))
