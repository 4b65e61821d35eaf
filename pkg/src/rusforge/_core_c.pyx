# cython: language_level=3
"""Compiled kernels; see ``_core_py`` for the reference semantics.

Each kernel runs on C ``long long`` when the inputs are small enough that no
intermediate can overflow, and hands over to the Python version otherwise.
"""

from rusforge import _core_py

# |inputs| < 2^30 keeps every sum of four products below 2^62
cdef long long SMALL = 1 << 30


cdef inline bint _small4(object a, object b, object c, object d):
    return -SMALL < a < SMALL and -SMALL < b < SMALL and -SMALL < c < SMALL and -SMALL < d < SMALL


def zw_mul(a, b, c, d, e, f, g, h):
    cdef long long A, B, C, D, E, F, G, H
    if not (_small4(a, b, c, d) and _small4(e, f, g, h)):
        return _core_py.zw_mul(a, b, c, d, e, f, g, h)
    A, B, C, D, E, F, G, H = a, b, c, d, e, f, g, h
    return (
        D * E + C * F + B * G + A * H,
        D * F + C * G + B * H - A * E,
        D * G + C * H - (B * E + A * F),
        D * H - (C * E + B * F + A * G),
    )


def zw_abs2(a, b, c, d):
    cdef long long A, B, C, D
    if not _small4(a, b, c, d):
        return _core_py.zw_abs2(a, b, c, d)
    A, B, C, D = a, b, c, d
    return (A * A + B * B + C * C + D * D, A * B + B * C + C * D - D * A)


def zw_div_sqrt2(a, b, c, d):
    cdef long long A, B, C, D
    if not _small4(a, b, c, d):
        return _core_py.zw_div_sqrt2(a, b, c, d)
    A, B, C, D = a, b, c, d
    if (A - C) & 1 or (B - D) & 1:
        return None
    return ((B - D) >> 1, (C + A) >> 1, (D + B) >> 1, (C - A) >> 1)


def zw_sqrt2_valuation(a, b, c, d, cap):
    cdef long long A, B, C, D, k = 0, kcap = cap, t0, t1, t2, t3
    if not _small4(a, b, c, d):
        return _core_py.zw_sqrt2_valuation(a, b, c, d, cap)
    A, B, C, D = a, b, c, d
    while k < kcap:
        if (A - C) & 1 or (B - D) & 1:
            break
        t0 = (B - D) >> 1
        t1 = (C + A) >> 1
        t2 = (D + B) >> 1
        t3 = (C - A) >> 1
        A, B, C, D = t0, t1, t2, t3
        k += 1
    return k


def trial_divide(x, y, table):
    cdef long long X, Y, P, Q, N, u, v, k
    # u = x p - 2 y q needs |x|,|y| < 2^30 and |p|,|q| < 2^30
    if not (-SMALL < x < SMALL and -SMALL < y < SMALL):
        return _core_py.trial_divide(x, y, table)
    X, Y = x, y
    exps = []
    for p, q, n in table:
        P, Q, N = p, q, n
        k = 0
        while True:
            u = X * P - 2 * Y * Q
            v = Y * P - X * Q
            if u % N or v % N:
                break
            X = u // N
            Y = v // N
            k += 1
        exps.append(k)
    return exps, X, Y


def apply_1q(amps, nq, q, m00, m01, m10, m11):
    cdef Py_ssize_t i, j, stride, size
    out = list(amps)
    stride = 1 << (nq - 1 - q)
    size = 1 << nq
    for i in range(size):
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
