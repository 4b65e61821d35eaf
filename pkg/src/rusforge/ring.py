"""Exact arithmetic in Z[w] (w = exp(i pi/4)) and Z[sqrt2], plus matrices over Z[w]
with a power-of-sqrt2 denominator."""

from __future__ import annotations

import math
from operator import itemgetter
from typing import Iterable, Sequence

import numpy as np

from ._core import zw_abs2, zw_div_sqrt2, zw_mul, zw_sqrt2_valuation

SQRT2 = math.sqrt(2.0)
_OMEGA = complex(SQRT2 / 2, SQRT2 / 2)
_OMEGA_POWERS = [_OMEGA**k for k in range(4)]


class NotInRing(ValueError):
    """An exact division or conversion left the ring."""


class Root2Int(tuple):
    r"""Element ``a + b*sqrt2`` of :math:`\mathbb{Z}[\sqrt{2}]`."""

    __slots__ = ()

    def __new__(cls, a: int = 0, b: int = 0) -> Root2Int:
        return tuple.__new__(cls, (int(a), int(b)))

    a = property(itemgetter(0))
    b = property(itemgetter(1))

    @classmethod
    def _make(cls, a: int, b: int) -> Root2Int:
        return tuple.__new__(cls, (a, b))

    def __repr__(self) -> str:
        return f"Root2Int({self[0]}, {self[1]})"

    def __str__(self) -> str:
        a, b = self
        if b == 0:
            return str(a)
        if a == 0:
            return f"{b}*sqrt2"
        return f"{a}{b:+d}*sqrt2"

    def __float__(self) -> float:
        a, b = self
        # keep precision when the two terms nearly cancel
        if a and b and (a > 0) != (b > 0):
            n = a * a - 2 * b * b
            return n / (a - b * SQRT2)
        return a + b * SQRT2

    def to_float(self) -> float:
        return float(self)

    def __add__(self, other):
        if isinstance(other, int):
            return Root2Int._make(self[0] + other, self[1])
        if isinstance(other, Root2Int):
            return Root2Int._make(self[0] + other[0], self[1] + other[1])
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> Root2Int:
        return Root2Int._make(-self[0], -self[1])

    def __sub__(self, other):
        if isinstance(other, int):
            return Root2Int._make(self[0] - other, self[1])
        if isinstance(other, Root2Int):
            return Root2Int._make(self[0] - other[0], self[1] - other[1])
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int):
            return Root2Int._make(other - self[0], -self[1])
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            return Root2Int._make(self[0] * other, self[1] * other)
        if isinstance(other, Root2Int):
            a, b = self
            c, d = other
            return Root2Int._make(a * c + 2 * b * d, a * d + b * c)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Root2Int:
        if k < 0:
            return self.inverse() ** (-k)
        result = Root2Int._make(1, 0)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # tuple equality would make Root2Int(1, 0) == (1, 0); keep that, but compare ints too
    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self[1] == 0 and self[0] == other
        return tuple.__eq__(self, other)

    def __ne__(self, other) -> bool:
        return not self.__eq__(other)

    __hash__ = tuple.__hash__

    def bullet(self) -> Root2Int:
        """The sqrt2-conjugate ``a - b*sqrt2``."""
        return Root2Int._make(self[0], -self[1])

    def norm(self) -> int:
        a, b = self
        return a * a - 2 * b * b

    def sign(self) -> int:
        """Exact sign of ``a + b*sqrt2`` under the real embedding."""
        a, b = self
        if a >= 0 and b >= 0:
            return 0 if a == 0 and b == 0 else 1
        if a <= 0 and b <= 0:
            return -1
        # mixed signs: compare a^2 with 2b^2
        n = a * a - 2 * b * b
        if a > 0:
            return 1 if n > 0 else -1
        return 1 if n < 0 else -1

    def __lt__(self, other) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - other).sign() >= 0

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def inverse(self) -> Root2Int:
        n = self.norm()
        if n == 1:
            return self.bullet()
        if n == -1:
            return -self.bullet()
        raise NotInRing(f"{self} is not a unit")

    def divides(self, other: Root2Int) -> bool:
        n = self.norm()
        if n == 0:
            return other == 0
        a, b = other * self.bullet()
        return a % n == 0 and b % n == 0

    def exact_div(self, other) -> Root2Int:
        if isinstance(other, int):
            other = Root2Int._make(other, 0)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[sqrt2]")
        a, b = self * other.bullet()
        if a % n or b % n:
            raise NotInRing(f"{other} does not divide {self}")
        return Root2Int._make(a // n, b // n)

    def divmod_round(self, other: Root2Int) -> tuple[Root2Int, Root2Int]:
        """Euclidean division with the quotient rounded coefficient-wise."""
        n = other.norm()
        a, b = self * other.bullet()
        q = Root2Int._make(_round_div(a, n), _round_div(b, n))
        return q, self - q * other

    def to_cyclotomic(self) -> CyclotomicInt:
        # sqrt2 = w - w^3
        a, b = self
        return CyclotomicInt._make(-b, 0, b, a)

    def to_json(self) -> list[int]:
        return [self[0], self[1]]

    @classmethod
    def from_json(cls, data: Sequence[int]) -> Root2Int:
        return cls(data[0], data[1])


def _round_div(a: int, n: int) -> int:
    """Nearest integer to a/n (n may be negative)."""
    if n < 0:
        a, n = -a, -n
    return (2 * a + n) // (2 * n)


class CyclotomicInt(tuple):
    r"""Element ``a*w^3 + b*w^2 + c*w + d`` of :math:`\mathbb{Z}[\omega]`, ``w = e^{i\pi/4}``."""

    __slots__ = ()

    def __new__(cls, a: int = 0, b: int = 0, c: int = 0, d: int = 0) -> CyclotomicInt:
        return tuple.__new__(cls, (int(a), int(b), int(c), int(d)))

    a = property(itemgetter(0))
    b = property(itemgetter(1))
    c = property(itemgetter(2))
    d = property(itemgetter(3))

    @classmethod
    def _make(cls, a: int, b: int, c: int, d: int) -> CyclotomicInt:
        return tuple.__new__(cls, (a, b, c, d))

    @classmethod
    def from_int(cls, n: int) -> CyclotomicInt:
        return cls._make(0, 0, 0, n)

    @classmethod
    def omega_power(cls, k: int) -> CyclotomicInt:
        k %= 8
        sign = -1 if k >= 4 else 1
        k %= 4
        coeffs = [0, 0, 0, 0]
        coeffs[3 - k] = sign
        return cls._make(*coeffs)

    @classmethod
    def gaussian(cls, re: int, im: int) -> CyclotomicInt:
        # i = w^2
        return cls._make(0, im, 0, re)

    def __repr__(self) -> str:
        return "CyclotomicInt({}, {}, {}, {})".format(*self)

    def __str__(self) -> str:
        a, b, c, d = self
        return f"{a}*w^3 + {b}*w^2 + {c}*w + {d}"

    @classmethod
    def parse(cls, text: str) -> CyclotomicInt:
        """Inverse of :meth:`__str__`; accepts any sum of ``k*w^j`` and integer terms."""
        coeffs = [0, 0, 0, 0]
        s = text.replace(" ", "").replace("-", "+-")
        for term in filter(None, s.split("+")):
            if "w" in term:
                head, _, power = term.partition("w")
                power = power.lstrip("^") or "1"
                head = head.rstrip("*")
                k = 1 if head in ("", "+") else -1 if head == "-" else int(head)
                j = int(power)
                coeffs = list(cls._make(*coeffs) + k * cls.omega_power(j))
            else:
                coeffs[3] += int(term)
        return cls._make(*coeffs)

    def __complex__(self) -> complex:
        a, b, c, d = self
        w0, w1, w2, w3 = _OMEGA_POWERS
        return d * w0 + c * w1 + b * w2 + a * w3

    def complex_value(self) -> complex:
        return complex(self)

    def __add__(self, other):
        if isinstance(other, CyclotomicInt):
            return CyclotomicInt._make(
                self[0] + other[0], self[1] + other[1], self[2] + other[2], self[3] + other[3]
            )
        if isinstance(other, int):
            return CyclotomicInt._make(self[0], self[1], self[2], self[3] + other)
        if isinstance(other, Root2Int):
            return self + other.to_cyclotomic()
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> CyclotomicInt:
        return CyclotomicInt._make(-self[0], -self[1], -self[2], -self[3])

    def __sub__(self, other):
        if isinstance(other, CyclotomicInt):
            return CyclotomicInt._make(
                self[0] - other[0], self[1] - other[1], self[2] - other[2], self[3] - other[3]
            )
        if isinstance(other, (int, Root2Int)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CyclotomicInt):
            return tuple.__new__(CyclotomicInt, zw_mul(*self, *other))
        if isinstance(other, int):
            return CyclotomicInt._make(self[0] * other, self[1] * other, self[2] * other, self[3] * other)
        if isinstance(other, Root2Int):
            return self * other.to_cyclotomic()
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int) -> CyclotomicInt:
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = CyclotomicInt._make(0, 0, 0, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self[0] == 0 and self[1] == 0 and self[2] == 0 and self[3] == other
        return tuple.__eq__(self, other)

    def __ne__(self, other) -> bool:
        return not self.__eq__(other)

    __hash__ = tuple.__hash__

    def __bool__(self) -> bool:
        return any(self)

    def conj(self) -> CyclotomicInt:
        """Complex conjugate."""
        a, b, c, d = self
        return CyclotomicInt._make(-c, -b, -a, d)

    def bullet(self) -> CyclotomicInt:
        """The automorphism w -> -w (extends sqrt2 -> -sqrt2)."""
        a, b, c, d = self
        return CyclotomicInt._make(-a, b, -c, d)

    def abs_squared(self) -> Root2Int:
        return Root2Int._make(*zw_abs2(*self))

    def norm(self) -> int:
        """Absolute norm |z|^2 * |z.bullet|^2, a non-negative integer."""
        return self.abs_squared().norm()

    def is_real(self) -> bool:
        return self[1] == 0 and self[0] == -self[2]

    def to_root2(self) -> Root2Int:
        if not self.is_real():
            raise NotInRing(f"{self} is not real")
        return Root2Int._make(self[3], self[2])

    def times_omega(self, k: int = 1) -> CyclotomicInt:
        a, b, c, d = self
        for _ in range(k % 8):
            a, b, c, d = b, c, d, -a
        return CyclotomicInt._make(a, b, c, d)

    def div_sqrt2(self) -> CyclotomicInt:
        r = zw_div_sqrt2(*self)
        if r is None:
            raise NotInRing(f"sqrt2 does not divide {self}")
        return CyclotomicInt._make(*r)

    def sqrt2_valuation(self, cap: int = 1 << 30) -> int:
        if not any(self):
            return cap
        return zw_sqrt2_valuation(*self, cap)

    def exact_div(self, other) -> CyclotomicInt:
        if isinstance(other, int):
            if any(x % other for x in self):
                raise NotInRing(f"{other} does not divide {self}")
            return CyclotomicInt._make(*(x // other for x in self))
        n, num = _division_parts(self, other)
        if any(x % n for x in num):
            raise NotInRing(f"{other} does not divide {self}")
        return CyclotomicInt._make(*(x // n for x in num))

    def divides(self, other: CyclotomicInt) -> bool:
        if not self:
            return not other
        n, num = _division_parts(other, self)
        return not any(x % n for x in num)

    def divmod_round(self, other: CyclotomicInt) -> tuple[CyclotomicInt, CyclotomicInt]:
        n, num = _division_parts(self, other)
        q = CyclotomicInt._make(*(_round_div(x, n) for x in num))
        return q, self - q * other

    def to_json(self) -> list[int]:
        return list(self)

    @classmethod
    def from_json(cls, data: Sequence[int]) -> CyclotomicInt:
        return cls(*data)


def _division_parts(x: CyclotomicInt, y: CyclotomicInt) -> tuple[int, CyclotomicInt]:
    """x / y == num / n with num in Z[w] and n a positive integer."""
    m = y.abs_squared()  # y * conj(y)
    n = m.norm()
    if n == 0:
        raise ZeroDivisionError("division by zero in Z[w]")
    num = x * y.conj() * m.bullet().to_cyclotomic()
    if n < 0:
        n, num = -n, -num
    return n, num


ZERO = CyclotomicInt(0, 0, 0, 0)
ONE = CyclotomicInt(0, 0, 0, 1)
OMEGA = CyclotomicInt(0, 0, 1, 0)
I_UNIT = CyclotomicInt(0, 1, 0, 0)
SQRT2_Z = CyclotomicInt(-1, 0, 1, 0)
LAMBDA = Root2Int(1, 1)  # fundamental unit 1 + sqrt2


def sde(z: CyclotomicInt, L: int) -> int:
    """Least k >= 0 with z / sqrt2^(L-k) in Z[w]."""
    if L < 0:
        raise ValueError("L must be non-negative")
    return max(0, L - z.sqrt2_valuation(L))


class RingUnitary:
    """Square matrix ``M / sqrt2^L`` with entries of ``M`` in Z[w].

    The stored form is fully reduced: ``L`` is lowered while every entry is
    divisible by sqrt2. Instances are immutable and hashable.
    """

    __slots__ = ("entries", "L", "_hash")

    def __init__(self, entries: Iterable[Iterable[CyclotomicInt]], L: int = 0, reduce: bool = True):
        rows = tuple(tuple(_as_zw(x) for x in row) for row in entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        if L < 0:
            raise ValueError("denominator exponent must be non-negative")
        if reduce:
            rows, L = _reduce(rows, L)
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("RingUnitary is immutable")

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingUnitary):
            return NotImplemented
        return self.L == other.L and self.entries == other.entries

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.entries, self.L)))
        return self._hash

    def __repr__(self) -> str:
        return f"RingUnitary(L={self.L}, entries={[list(map(list, r)) for r in self.entries]})"

    @classmethod
    def identity(cls, n: int = 2) -> RingUnitary:
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], 0)

    def __matmul__(self, other: RingUnitary) -> RingUnitary:
        if not isinstance(other, RingUnitary):
            return NotImplemented
        n = self.size
        if other.size != n:
            raise ValueError(f"shape mismatch: {n} vs {other.size}")
        A, B = self.entries, other.entries
        out = []
        for i in range(n):
            row = []
            Ai = A[i]
            for j in range(n):
                acc = (0, 0, 0, 0)
                for k in range(n):
                    x = Ai[k]
                    y = B[k][j]
                    if not (x[0] or x[1] or x[2] or x[3]) or not (y[0] or y[1] or y[2] or y[3]):
                        continue
                    p = zw_mul(*x, *y)
                    acc = (acc[0] + p[0], acc[1] + p[1], acc[2] + p[2], acc[3] + p[3])
                row.append(CyclotomicInt._make(*acc))
            out.append(row)
        return RingUnitary(out, self.L + other.L)

    def adjoint(self) -> RingUnitary:
        n = self.size
        E = self.entries
        return RingUnitary([[E[j][i].conj() for j in range(n)] for i in range(n)], self.L, reduce=False)

    dagger = adjoint

    def scale(self, z: CyclotomicInt) -> RingUnitary:
        return RingUnitary([[x * z for x in row] for row in self.entries], self.L)

    def times_omega(self, k: int) -> RingUnitary:
        return RingUnitary([[x.times_omega(k) for x in row] for row in self.entries], self.L, reduce=False)

    def is_unitary(self) -> bool:
        """Exact test of M M^dagger == 2^L I."""
        P = self @ self.adjoint()
        n = self.size
        if P.L != 0:
            return False
        return all(P.entries[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))

    def is_scalar(self) -> bool:
        n = self.size
        E = self.entries
        return all(E[i][j] == 0 for i in range(n) for j in range(n) if i != j) and all(
            E[i][i] == E[0][0] for i in range(n)
        )

    def kron(self, other: RingUnitary) -> RingUnitary:
        n, m = self.size, other.size
        A, B = self.entries, other.entries
        out = [[A[i // m][j // m] * B[i % m][j % m] for j in range(n * m)] for i in range(n * m)]
        return RingUnitary(out, self.L + other.L)

    def to_numpy(self) -> np.ndarray:
        scale = SQRT2**-self.L if self.L < 1000 else 0.0
        return np.array([[complex(x) * scale for x in row] for row in self.entries], dtype=complex)

    def to_json(self) -> dict:
        return {"L": self.L, "entries": [[x.to_json() for x in row] for row in self.entries]}

    @classmethod
    def from_json(cls, data: dict) -> RingUnitary:
        return cls([[CyclotomicInt.from_json(x) for x in row] for row in data["entries"]], data["L"])


def direct_sum(A: RingUnitary, B: RingUnitary) -> RingUnitary:
    """Block-diagonal ``diag(A, B)`` brought to a common denominator."""
    L = max(A.L, B.L)
    n, m = A.size, B.size
    sa = SQRT2_Z ** (L - A.L)
    sb = SQRT2_Z ** (L - B.L)
    rows = []
    for i in range(n):
        rows.append([A.entries[i][j] * sa for j in range(n)] + [ZERO] * m)
    for i in range(m):
        rows.append([ZERO] * n + [B.entries[i][j] * sb for j in range(m)])
    return RingUnitary(rows, L)


def common_denominator(mats: Sequence[RingUnitary]) -> tuple[list[list[list[CyclotomicInt]]], int]:
    """Raw entry lists of all matrices over the shared denominator sqrt2^L."""
    L = max(m.L for m in mats)
    out = []
    for m in mats:
        s = SQRT2_Z ** (L - m.L)
        out.append([[x * s for x in row] for row in m.entries])
    return out, L


def determinant(m: RingUnitary) -> tuple[CyclotomicInt, int]:
    """Exact determinant as ``(value, k)`` meaning ``value / sqrt2^k`` (fraction-free Bareiss)."""
    n = m.size
    A = [list(row) for row in m.entries]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if not A[k][k]:
            for r in range(k + 1, n):
                if A[r][k]:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return ZERO, 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]).exact_div(prev)
        prev = A[k][k]
    return A[n - 1][n - 1] * sign, n * m.L


def _as_zw(x) -> CyclotomicInt:
    if isinstance(x, CyclotomicInt):
        return x
    if isinstance(x, int):
        return CyclotomicInt._make(0, 0, 0, x)
    if isinstance(x, Root2Int):
        return x.to_cyclotomic()
    return CyclotomicInt(*x)


def _reduce(rows, L):
    if L == 0:
        return rows, 0
    k = L
    for row in rows:
        for x in row:
            if x[0] or x[1] or x[2] or x[3]:
                k = min(k, zw_sqrt2_valuation(*x, k))
                if k == 0:
                    return rows, L
    if k == 0:
        return rows, L
    out = []
    for row in rows:
        new = []
        for x in row:
            for _ in range(k):
                x = zw_div_sqrt2(*x)
            new.append(CyclotomicInt._make(*x))
        out.append(tuple(new))
    return tuple(out), L - k


def root2_to_cyclotomic(x: Root2Int) -> CyclotomicInt:
    return x.to_cyclotomic()


def ceil_log2(x: Root2Int) -> int:
    """Least L with 2^L >= x, for x > 0 in Z[sqrt2]; exact."""
    if x.sign() <= 0:
        raise ValueError("ceil_log2 needs a positive argument")
    f = float(x)
    L = max(0, math.ceil(math.log2(f))) if f > 0 and math.isfinite(f) else 0
    while L > 0 and (Root2Int._make(1 << (L - 1), 0) - x).sign() >= 0:
        L -= 1
    while (Root2Int._make(1 << L, 0) - x).sign() < 0:
        L += 1
    return L
