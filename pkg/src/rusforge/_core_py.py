"""Pure-Python reference kernels.

Every function here has a twin in ``_core_c.pyx`` with the same signature and
results; ``rusforge._core`` picks the compiled one when it imports.

Cyclotomic integers travel as 4-tuples ``(a, b, c, d)`` meaning
``a*w^3 + b*w^2 + c*w + d`` with ``w = exp(i*pi/4)``; elements of Z[sqrt2]
travel as pairs ``(x, y)`` meaning ``x + y*sqrt2``.
"""

from __future__ import annotations


def zw_mul(a, b, c, d, e, f, g, h):
    # coefficients in ascending powers of w, reduced with w^4 = -1
    r0 = d * h - (c * e + b * f + a * g)
    r1 = d * g + c * h - (b * e + a * f)
    r2 = d * f + c * g + b * h - a * e
    r3 = d * e + c * f + b * g + a * h
    return (r3, r2, r1, r0)


def zw_abs2(a, b, c, d):
    return (a * a + b * b + c * c + d * d, a * b + b * c + c * d - d * a)


def zw_div_sqrt2(a, b, c, d):
    """Exact division by sqrt2 = w - w^3, or ``None`` if it does not divide."""
    if (a - c) & 1 or (b - d) & 1:
        return None
    # z * (w - w^3) / 2
    return ((b - d) >> 1, (c + a) >> 1, (d + b) >> 1, (c - a) >> 1)


def zw_sqrt2_valuation(a, b, c, d, cap):
    """Number of times sqrt2 divides z, stopping at ``cap``."""
    k = 0
    while k < cap:
        if (a - c) & 1 or (b - d) & 1:
            break
        a, b, c, d = (b - d) >> 1, (c + a) >> 1, (d + b) >> 1, (c - a) >> 1
        k += 1
    return k


def trial_divide(x, y, table):
    """Strip small primes of Z[sqrt2] from ``x + y*sqrt2``.

    ``table`` is a sequence of ``(p, q, n)`` with ``p + q*sqrt2`` a prime of
    norm ``n = p^2 - 2q^2 > 0``. Returns the exponent list and the cofactor.
    """
    exps = []
    for p, q, n in table:
        k = 0
        while True:
            # (x + y r2)(p - q r2) / n
            u = x * p - 2 * y * q
            v = y * p - x * q
            if u % n or v % n:
                break
            x = u // n
            y = v // n
            k += 1
        exps.append(k)
    return exps, x, y


def apply_1q(amps, nq, q, m00, m01, m10, m11):
    """Apply a 2x2 matrix over Z[w] (entries as 4-tuples) to qubit ``q``.

    ``amps`` is a list of 4-tuples of length ``2**nq``; qubit 0 is the most
    significant index bit. Returns a new list.
    """
    out = list(amps)
    stride = 1 << (nq - 1 - q)
    for i in range(1 << nq):
        if i & stride:
            continue
        j = i | stride
        x0 = amps[i]
        x1 = amps[j]
        p = zw_mul(*m00, *x0)
        s = zw_mul(*m01, *x1)
        out[i] = (p[0] + s[0], p[1] + s[1], p[2] + s[2], p[3] + s[3])
        p = zw_mul(*m10, *x0)
        s = zw_mul(*m11, *x1)
        out[j] = (p[0] + s[0], p[1] + s[1], p[2] + s[2], p[3] + s[3])
    return out
