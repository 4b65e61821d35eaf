"""Norm equations |y|^2 = xi over Z[w] with xi in Z[sqrt2].

The classifier strips a fixed table of small primes of Z[sqrt2] and accepts
when what is left is a unit or a single "good" prime and every "bad" prime
(one whose rational norm is 7 mod 8) appears to an even power.  Solutions are
built prime by prime: square roots modulo p, then a gcd in Z[w].
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from functools import lru_cache

from ._core import trial_divide
from .ring import LAMBDA, CyclotomicInt, Root2Int, _division_parts

DEFAULT_BUDGET_MS = 50
PRIME_NORM_BOUND = 1000
MR_ROUNDS = 40

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_LIMIT = 3317044064679887385961981


class NoSolution(ArithmeticError):
    pass


class BudgetExceeded(TimeoutError):
    pass


# ---------------------------------------------------------------------------
# rational number theory


def is_probable_prime(n: int, rng: random.Random | None = None, rounds: int = MR_ROUNDS) -> bool:
    """Miller-Rabin; deterministic below ~3.3e24, ``rounds`` random bases above."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    def witness(a: int) -> bool:
        x = pow(a, d, n)
        if x in (1, n - 1):
            return False
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                return False
        return True

    if n < _MR_DETERMINISTIC_LIMIT:
        return not any(witness(a) for a in _MR_BASES)
    rng = rng or random.Random(n)
    return not any(witness(rng.randrange(2, n - 1)) for _ in range(rounds))


def primality_status(n: int, rng=None) -> str:
    if not is_probable_prime(n, rng):
        return "composite"
    return "provenPrime" if n < _MR_DETERMINISTIC_LIMIT else "probablePrime"


def sqrt_mod(a: int, p: int) -> int:
    """Square root of ``a`` modulo an odd prime ``p`` (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        raise NoSolution(f"{a} is not a square modulo {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


# ---------------------------------------------------------------------------
# gcds


def _zw_divmod(x: CyclotomicInt, y: CyclotomicInt) -> tuple[CyclotomicInt, CyclotomicInt]:
    q, r = x.divmod_round(y)
    ny = y.norm()
    if abs(r.norm()) < abs(ny):
        return q, r
    n, num = _division_parts(x, y)
    best = None
    for mask in range(16):
        coeffs = [(c // n) + ((mask >> i) & 1) for i, c in enumerate(num)]
        q2 = CyclotomicInt(*coeffs)
        r2 = x - q2 * y
        if best is None or abs(r2.norm()) < abs(best[1].norm()):
            best = (q2, r2)
    return best


def zw_gcd(a: CyclotomicInt, b: CyclotomicInt) -> CyclotomicInt:
    while b:
        _, r = _zw_divmod(a, b)
        a, b = b, r
    return a


def r2_gcd(a: Root2Int, b: Root2Int) -> Root2Int:
    while b != 0:
        _, r = a.divmod_round(b)
        a, b = b, r
    return a


# ---------------------------------------------------------------------------
# small primes of Z[sqrt2]


@dataclass(frozen=True)
class PrimeEntry:
    pi: Root2Int
    norm: int  # positive rational norm
    p: int  # rational prime below pi
    kind: str  # ramified | inert | split

    @property
    def good(self) -> bool:
        return not (self.kind == "split" and self.p % 8 == 7)


def _primes_upto(n: int) -> list[int]:
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\x00\x00"
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(n + 1) if sieve[i]]


def split_rational_prime(p: int) -> Root2Int:
    """A totally positive pi with N(pi) = p, for p = +-1 mod 8."""
    u = sqrt_mod(2, p)
    g = r2_gcd(Root2Int(p, 0), Root2Int(u, 1))
    if abs(g.norm()) != p:
        raise AssertionError(f"failed to split {p}")
    return totally_positive(g)


def totally_positive(x: Root2Int) -> Root2Int:
    """Unit multiple of x with both embeddings positive (needs N(x) > 0 up to a unit)."""
    if x.norm() < 0:
        x = x * LAMBDA
    if x.sign() < 0:
        x = -x
    return x


def _small_split_rep(p: int) -> Root2Int:
    # smallest x + y sqrt2 with x^2 - 2 y^2 = p, x, y > 0
    for y in range(1, p):
        x2 = p + 2 * y * y
        x = math.isqrt(x2)
        if x * x == x2:
            return Root2Int(x, y)
    return split_rational_prime(p)


@lru_cache(maxsize=1)
def prime_table(bound: int = PRIME_NORM_BOUND) -> tuple[PrimeEntry, ...]:
    """Totally positive primes of Z[sqrt2] with rational norm at most ``bound``."""
    out = [PrimeEntry(Root2Int(2, 1), 2, 2, "ramified")]
    for p in _primes_upto(bound):
        if p == 2:
            continue
        if p % 8 in (3, 5):
            if p * p <= bound:
                out.append(PrimeEntry(Root2Int(p, 0), p * p, p, "inert"))
        else:
            pi = _small_split_rep(p)
            out.append(PrimeEntry(pi, p, p, "split"))
            out.append(PrimeEntry(pi.bullet(), p, p, "split"))
    out.sort(key=lambda e: (e.norm, e.pi[1]))
    return tuple(out)


@lru_cache(maxsize=1)
def _trial_table():
    return tuple((e.pi[0], e.pi[1], e.norm) for e in prime_table())


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class SolvabilityVerdict:
    easily_solvable: bool
    reason: str  # goodPrimeResidual | evenBadPowers | badResidual | negativeUnderEmbedding | timeout


@dataclass
class LimitedFactorization:
    xi: Root2Int
    unit_part: Root2Int
    factors: list[tuple[PrimeEntry, int]]
    residual: Root2Int
    residual_status: str  # unit | provenPrime | probablePrime | unknown
    verdict: SolvabilityVerdict
    residual_kind: str = ""  # how the residual will be solved
    residual_prime: int = 0
    notes: dict = field(default_factory=dict)

    def product(self) -> Root2Int:
        acc = self.unit_part * self.residual
        for e, k in self.factors:
            acc = acc * e.pi**k
        return acc

    def display(self) -> str:
        """Factorization with rational primes collected: ``2^5 * 3^3 * ... * (2+sqrt2)``."""
        rational: dict[int, int] = {}
        extra: list[tuple[Root2Int, int]] = []
        split: dict[int, list[tuple[Root2Int, int]]] = {}
        for e, k in self.factors:
            if e.kind == "ramified":
                if k // 2:
                    rational[2] = rational.get(2, 0) + k // 2
                if k % 2:
                    extra.append((e.pi, 1))
            elif e.kind == "inert":
                rational[e.p] = rational.get(e.p, 0) + k
            else:
                split.setdefault(e.p, []).append((e.pi, k))
        for p, items in split.items():
            if len(items) == 2:
                m = min(k for _, k in items)
                rational[p] = rational.get(p, 0) + m
                items = [(pi, k - m) for pi, k in items if k > m]
            extra.extend(items)
        parts = [f"{p}^{k}" if k > 1 else str(p) for p, k in sorted(rational.items())]
        for pi, k in extra:
            s = f"({_fmt(pi)})"
            parts.append(f"{s}^{k}" if k > 1 else s)
        if self.residual != 1:
            parts.append(f"[{_fmt(self.residual)}]")
        return " * ".join(parts) if parts else "1"


def _fmt(x: Root2Int) -> str:
    a, b = x
    if b == 0:
        return str(a)
    mag = "" if abs(b) == 1 else str(abs(b))
    return f"{a}{'+' if b > 0 else '-'}{mag}sqrt2"


def classify_good_prime(xi: Root2Int) -> bool:
    """True iff xi is, up to a unit, 2 +- sqrt2, a prime of norm 1 mod 8, or a
    rational prime that is not 7 mod 8."""
    xi = Root2Int(*xi)
    n = abs(xi.norm())
    if n == 2:
        return True
    if n > 1 and is_probable_prime(n):
        return n % 8 == 1
    q = math.isqrt(n)
    if q * q == n and is_probable_prime(q) and Root2Int(q, 0).divides(xi):
        return q % 8 != 7
    return False


def limited_factor(
    xi: Root2Int,
    budget_ms: float = DEFAULT_BUDGET_MS,
    rng: random.Random | None = None,
) -> LimitedFactorization:
    """Strip the small-prime table from xi and classify what remains."""
    xi = Root2Int(*xi)
    deadline = time.perf_counter() + budget_ms / 1000.0

    def fail(reason, factors=(), residual=xi, status="unknown"):
        return LimitedFactorization(xi, Root2Int(1, 0), list(factors), residual, status, SolvabilityVerdict(False, reason))

    if xi.sign() <= 0 or xi.bullet().sign() <= 0:
        return fail("negativeUnderEmbedding")
    table = prime_table()
    exps, x, y = trial_divide(xi[0], xi[1], _trial_table())
    factors = [(e, k) for e, k in zip(table, exps) if k]
    eta = Root2Int(x, y)
    bad_odd = any(not e.good and k % 2 for e, k in factors)
    fact = LimitedFactorization(xi, Root2Int(1, 0), factors, eta, "unknown", SolvabilityVerdict(False, "badResidual"))
    n = eta.norm()
    try:
        if abs(n) == 1:
            fact.unit_part, fact.residual = eta, Root2Int(1, 0)
            fact.residual_status = "unit"
            fact.residual_kind = "unit"
        else:
            _classify_residual(fact, abs(n), rng, deadline)
    except BudgetExceeded:
        fact.verdict = SolvabilityVerdict(False, "timeout")
        fact.residual_status = "unknown"
        return fact
    if not fact.residual_kind:
        fact.verdict = SolvabilityVerdict(False, "badResidual")
    elif bad_odd:
        fact.verdict = SolvabilityVerdict(False, "evenBadPowers")
    else:
        fact.verdict = SolvabilityVerdict(True, "goodPrimeResidual")
    assert fact.product() == xi
    return fact


def _check_time(deadline):
    if time.perf_counter() > deadline:
        raise BudgetExceeded()


def _classify_residual(fact: LimitedFactorization, n: int, rng, deadline) -> None:
    eta = fact.residual
    _check_time(deadline)
    status = primality_status(n, rng)
    if status != "composite":
        fact.residual_status = status
        fact.residual_prime = n
        if n % 8 == 1:
            fact.residual_kind = "split"
        return
    q = math.isqrt(n)
    _check_time(deadline)
    if q * q != n:
        return
    status = primality_status(q, rng)
    if status == "composite":
        return
    fact.residual_status = status
    fact.residual_prime = q
    if Root2Int(q, 0).divides(eta):
        # eta ~ q
        if q % 8 in (3, 5):
            fact.residual_kind = "inert"
        elif q % 8 == 1:
            fact.residual_kind = "rational_split"
    else:
        # eta ~ pi^2 for a split prime pi of norm q
        fact.residual_kind = "square"


# ---------------------------------------------------------------------------
# solving


def _gauss_root(p: int) -> CyclotomicInt:
    """y with |y|^2 = p * unit, for a rational prime p = 3 or 5 mod 8."""
    if p % 8 == 5:
        u = sqrt_mod(-1, p)
        y = zw_gcd(CyclotomicInt.from_int(p), CyclotomicInt(0, 1, 0, u))
    else:
        u = sqrt_mod(-2, p)
        # u + i sqrt2, with i sqrt2 = w^3 + w
        y = zw_gcd(CyclotomicInt.from_int(p), CyclotomicInt(1, 0, 1, u))
    return y


def _split_root(pi: Root2Int, p: int) -> CyclotomicInt:
    """y with |y|^2 = pi * unit, for a prime pi of norm p = 1 mod 8."""
    u = sqrt_mod(-1, p)
    return zw_gcd(pi.to_cyclotomic(), CyclotomicInt(0, 1, 0, u))


def _prime_root(e: PrimeEntry) -> CyclotomicInt:
    if e.kind == "ramified":
        return CyclotomicInt(0, 0, 1, 1)  # 1 + w
    if e.kind == "inert":
        return _gauss_root(e.p)
    return _split_root(e.pi, e.p)


def _fix_unit(y: CyclotomicInt, xi: Root2Int) -> CyclotomicInt:
    """Scale y by a real unit so that |y|^2 == xi, given |y|^2 = xi * (totally positive unit)."""
    got = y.abs_squared()
    u = got.exact_div(xi)
    if not u.is_unit() or u.sign() <= 0 or u.bullet().sign() <= 0:
        raise NoSolution("unit mismatch")
    # u = lambda^(2k)
    k = 0
    cur = u
    lam2 = LAMBDA * LAMBDA
    inv2 = lam2.inverse()
    while cur != 1:
        if cur > 1:
            cur = cur * inv2
            k += 1
        else:
            cur = cur * lam2
            k -= 1
        if abs(k) > 10_000:
            raise NoSolution("unit is not an even power of 1+sqrt2")
    fix = LAMBDA.inverse() ** k if k >= 0 else LAMBDA ** (-k)
    return y * fix.to_cyclotomic()


def solve_norm_equation(xi: Root2Int, fact: LimitedFactorization | None = None) -> CyclotomicInt:
    """y with |y|^2 == xi exactly; raises NoSolution if xi is not easily solvable."""
    xi = Root2Int(*xi)
    if xi == 0:
        return CyclotomicInt()
    if fact is None:
        fact = limited_factor(xi)
    if not fact.verdict.easily_solvable:
        raise NoSolution(f"not easily solvable ({fact.verdict.reason})")
    y = CyclotomicInt.from_int(1)
    for e, k in fact.factors:
        if e.good:
            y = y * _prime_root(e) ** k
        else:
            y = y * e.pi.to_cyclotomic() ** (k // 2)
    eta = fact.residual
    kind = fact.residual_kind
    if kind == "split":
        pi = totally_positive(eta)
        y = y * _split_root(pi, fact.residual_prime)
    elif kind == "inert":
        y = y * _gauss_root(fact.residual_prime)
    elif kind == "rational_split":
        q = fact.residual_prime
        pi = split_rational_prime(q)
        y = y * _split_root(pi, q) * _split_root(pi.bullet() if pi.bullet().sign() > 0 else -pi.bullet(), q)
    elif kind == "square":
        q = fact.residual_prime
        pi = split_rational_prime(q)
        if not (pi * pi).divides(eta):
            pi = totally_positive(pi.bullet())
        y = y * pi.to_cyclotomic()
    y = _fix_unit(y, xi)
    if y.abs_squared() != xi:
        raise NoSolution("internal error: solution failed the norm check")
    return y


def solve(xi: Root2Int, budget_ms: float = DEFAULT_BUDGET_MS, rng=None) -> tuple[LimitedFactorization, CyclotomicInt | None]:
    fact = limited_factor(xi, budget_ms, rng)
    if not fact.verdict.easily_solvable:
        return fact, None
    return fact, solve_norm_equation(xi, fact)
