# cython: language_level=3
"""Compiled twin of cfaccel._kernels_py.

Same three entry points, same semantics, same arbitrary-precision int
coefficients.  Cython only tightens the loop bookkeeping; the big-int
arithmetic itself is still CPython's.
"""

BACKEND = "cython"


def poly_mul(list a, list b):
    """Convolution product of two integer coefficient lists."""
    cdef Py_ssize_t la = len(a), lb = len(b), i, j
    if la == 0 or lb == 0:
        return []
    cdef list out = [0] * (la + lb - 1)
    for i in range(la):
        ai = a[i]
        if ai:
            for j in range(lb):
                out[i + j] = out[i + j] + ai * b[j]
    return out


def taylor_shift(list a, s):
    """Coefficients of a(x + s) for an integer shift s."""
    cdef list b = list(a)
    cdef Py_ssize_t n = len(b), i, j
    if s == 0 or n <= 1:
        return b
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            b[j] = b[j] + s * b[j + 1]
    return b


def series_div(list p, list q, Py_ssize_t n):
    """Scaled series coefficients of p/q; see the pure twin for the contract."""
    q0 = q[0]
    if q0 == 0:
        raise ZeroDivisionError("series division needs a unit constant term")
    cdef Py_ssize_t lp = len(p), lq = len(q), k, j, jmax
    cdef list pw = [1] * (n + 1)
    for k in range(1, n + 1):
        pw[k] = pw[k - 1] * q0
    cdef list out = []
    for k in range(n):
        acc = p[k] * pw[k] if k < lp else 0
        jmax = k if k < lq else lq - 1
        for j in range(1, jmax + 1):
            cj = q[j]
            if cj:
                acc = acc - cj * out[k - j] * pw[j - 1]
        out.append(acc)
    return out
