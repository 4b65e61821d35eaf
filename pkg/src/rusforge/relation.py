"""Phase approximation by integer relations.

For z = a w^3 + b w^2 + c w + d and x = (C - S, sqrt2 C, C + S, sqrt2 S) with
C = cos(theta/2), S = sin(theta/2) one has exactly

    |z*/z - e^{i theta}| = sqrt2 |m . x| / |z|,     m = (a, b, c, d),

so a relation m with |m . x| < eps |z| / sqrt2 gives the required phase.  The
search runs PSLQ on x and inspects the columns of the basis matrix after every
iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from .angles import Angle
from .ring import CyclotomicInt

GAMMA = 2 / math.sqrt(3)
MAX_PRECISION_RETRIES = 3


class PrecisionExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class PhaseTarget:
    theta: Angle
    epsilon: float

    def __post_init__(self):
        if not (0 < self.epsilon < 1):
            raise ValueError("epsilon must lie in (0, 1)")

    @classmethod
    def make(cls, theta, epsilon: float) -> PhaseTarget:
        return cls(Angle.coerce(theta), float(epsilon))


@dataclass(frozen=True)
class RelationResult:
    z: CyclotomicInt
    iterations: int
    precision: int
    distance: float  # |z*/z - e^{i theta}|
    exact: bool = False


def working_precision(epsilon: float) -> int:
    return 64 + 4 * math.ceil(math.log2(1 / epsilon))


def relation_vector(theta: Angle) -> list:
    """x at the current mpmath precision."""
    h = theta.mp() / 2
    c, s = mpmath.cos(h), mpmath.sin(h)
    r2 = mpmath.sqrt(2)
    return [c - s, r2 * c, c + s, r2 * s]


def _relation_vector_iv(theta: Angle) -> list:
    iv = mpmath.iv
    h = theta.interval() / 2
    c, s = iv.cos(h), iv.sin(h)
    r2 = iv.sqrt(2)
    return [c - s, r2 * c, c + s, r2 * s]


def exact_unit(k: int) -> CyclotomicInt:
    """z with z*/z = w^k exactly."""
    k %= 8
    if k % 2 == 0:
        return CyclotomicInt.omega_power(-k // 2)
    return CyclotomicInt.omega_power(-(k - 1) // 2) * (CyclotomicInt.from_int(1) + CyclotomicInt.omega_power(7))


def phase_error(z: CyclotomicInt, theta) -> float:
    """|z*/z - e^{i theta}| evaluated at double-plus precision."""
    theta = Angle.coerce(theta)
    with mpmath.workprec(128):
        zc = mpmath.mpc(*_cplx(z))
        return float(abs(mpmath.conj(zc) / zc - mpmath.expj(theta.mp())))


def _cplx(z: CyclotomicInt):
    a, b, c, d = z
    h = mpmath.sqrt(2) / 2
    re = d + c * h - a * h
    im = b + c * h + a * h
    return re, im


def _certify(m, theta: Angle, epsilon: float, prec: int) -> bool:
    """Interval check of |m.x| < eps |z| / sqrt2."""
    iv = mpmath.iv
    old = iv.prec
    iv.prec = prec
    try:
        x = _relation_vector_iv(theta)
        dot = sum((iv.mpf(mi) * xi for mi, xi in zip(m, x)), iv.mpf(0))
        z = CyclotomicInt(*m)
        n2 = z.abs_squared()
        absz = iv.sqrt(iv.mpf(n2.a) + iv.mpf(n2.b) * iv.sqrt(2))
        bound = iv.mpf(epsilon) * absz / iv.sqrt(2)
        return abs(dot).b < bound.a
    finally:
        iv.prec = old


def _pslq(x, theta: Angle, epsilon: float, prec: int, max_iter: int):
    """PSLQ over x; returns (m, iterations) for the first column meeting the bound."""
    n = len(x)
    mpf = mpmath.mpf
    eps_mp = mpf(epsilon)
    unit_err = mpf(2) ** (-prec + 6)
    r2 = mpmath.sqrt(2)

    def check(B):
        best = None
        for j in range(n):
            m = [B[i][j] for i in range(n)]
            if not any(m):
                continue
            dot = mpmath.fsum(mi * xi for mi, xi in zip(m, x))
            err = unit_err * sum(abs(mi) for mi in m)
            z2 = m[0] ** 2 + m[1] ** 2 + m[2] ** 2 + m[3] ** 2 + r2 * (m[0] * m[1] + m[1] * m[2] + m[2] * m[3] - m[3] * m[0])
            if z2 <= 0:
                continue
            if abs(dot) + 2 * err < eps_mp * mpmath.sqrt(z2) / r2:
                key = (z2, m)
                if best is None or key < best:
                    best = key
        return None if best is None else best[1]

    s = [mpf(0)] * n
    acc = mpf(0)
    for k in range(n - 1, -1, -1):
        acc += x[k] ** 2
        s[k] = mpmath.sqrt(acc)
    t = s[0]
    y = [xi / t for xi in x]
    s = [sk / t for sk in s]
    H = [[mpf(0)] * (n - 1) for _ in range(n)]
    for i in range(n):
        for j in range(min(i + 1, n - 1)):
            if i == j:
                H[i][j] = s[j + 1] / s[j]
            elif i > j:
                H[i][j] = -y[i] * y[j] / (s[j] * s[j + 1])
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    B = [[int(i == j) for j in range(n)] for i in range(n)]

    def reduce_rows(rows, upto):
        for i in rows:
            for j in range(min(i - 1, upto), -1, -1):
                if H[j][j] == 0:
                    continue
                q = int(mpmath.nint(H[i][j] / H[j][j]))
                if q == 0:
                    continue
                y[j] += q * y[i]
                for k in range(j + 1):
                    H[i][k] -= q * H[j][k]
                for k in range(n):
                    A[i][k] -= q * A[j][k]
                    B[k][j] += q * B[k][i]

    reduce_rows(range(1, n), n)
    found = check(B)
    if found is not None:
        return found, 0
    tiny = mpf(2) ** (-prec + 16)
    for it in range(1, max_iter + 1):
        m = max(range(n - 1), key=lambda i: GAMMA ** (i + 1) * abs(H[i][i]))
        y[m], y[m + 1] = y[m + 1], y[m]
        A[m], A[m + 1] = A[m + 1], A[m]
        H[m], H[m + 1] = H[m + 1], H[m]
        for row in B:
            row[m], row[m + 1] = row[m + 1], row[m]
        if m < n - 2:
            t0 = mpmath.sqrt(H[m][m] ** 2 + H[m][m + 1] ** 2)
            if t0 == 0:
                raise PrecisionExhausted("degenerate corner in PSLQ")
            t1, t2 = H[m][m] / t0, H[m][m + 1] / t0
            for i in range(m, n):
                t3, t4 = H[i][m], H[i][m + 1]
                H[i][m] = t1 * t3 + t2 * t4
                H[i][m + 1] = -t2 * t3 + t1 * t4
        reduce_rows(range(m + 1, n), m + 1)
        found = check(B)
        if found is not None:
            return found, it
        if min(abs(H[i][i]) for i in range(n - 1)) < tiny:
            raise PrecisionExhausted("PSLQ ran out of working precision")
        if max(abs(v) for row in B for v in row) > 2 ** (prec // 2):
            raise PrecisionExhausted("PSLQ basis outgrew working precision")
    raise PrecisionExhausted(f"no relation within {max_iter} iterations")


def find_relation(target: PhaseTarget, max_iter: int | None = None) -> RelationResult:
    theta, eps = target.theta, target.epsilon
    k = theta.eighth_turns()
    if k is not None:
        return RelationResult(exact_unit(k), 0, 0, 0.0, exact=True)
    prec = working_precision(eps)
    if max_iter is None:
        max_iter = 200 + 40 * math.ceil(math.log2(1 / eps))
    last: Exception | None = None
    for _ in range(MAX_PRECISION_RETRIES + 1):
        try:
            with mpmath.workprec(prec):
                x = relation_vector(theta)
                m, iters = _pslq(x, theta, eps, prec, max_iter)
            if not _certify(m, theta, eps, prec):
                raise PrecisionExhausted("interval certification failed")
            z = CyclotomicInt(*m)
            return RelationResult(z, iters, prec, phase_error(z, theta))
        except PrecisionExhausted as exc:
            last = exc
            prec *= 2
    raise PrecisionExhausted(str(last))


def approximate_phase(theta, epsilon: float) -> CyclotomicInt:
    """z with |z*/z - e^{i theta}| < epsilon."""
    return find_relation(PhaseTarget.make(theta, epsilon)).z


def pslq_iteration_count(theta, epsilon: float) -> int:
    return find_relation(PhaseTarget.make(theta, epsilon)).iterations
