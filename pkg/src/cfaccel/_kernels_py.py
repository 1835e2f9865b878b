"""Pure-Python integer kernels for the hot polynomial and series loops.

Every routine here works on plain lists of Python ints (coefficients in
increasing degree order), so arbitrary precision comes for free.  Callers
clear rational denominators before entering and reattach them afterwards.

A compiled twin of this module (``cfaccel._kernels``, built from Cython
source) provides the same three functions; ``cfaccel.kernels`` selects
whichever one imports.
"""

BACKEND = "python"


def poly_mul(a, b):
    """Convolution product of two integer coefficient lists.

    The empty list is the zero polynomial.
    """
    la = len(a)
    lb = len(b)
    if la == 0 or lb == 0:
        return []
    out = [0] * (la + lb - 1)
    for i in range(la):
        ai = a[i]
        if ai:
            for j in range(lb):
                out[i + j] += ai * b[j]
    return out


def taylor_shift(a, s):
    """Coefficients of a(x + s) for an integer shift s.

    Classic in-place synthetic-division sweep: after pass i the low i+1
    entries hold the shifted coefficients.
    """
    b = list(a)
    n = len(b)
    if s == 0 or n <= 1:
        return b
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            b[j] += s * b[j + 1]
    return b


def series_div(p, q, n):
    """First n scaled power-series coefficients of (sum p_i x^i)/(sum q_j x^j).

    Requires q[0] != 0.  Returns the integer list C such that the true
    k-th series coefficient equals C[k] / q[0]**(k+1).  Keeping the
    recurrence over integers avoids one gcd per coefficient; the caller
    divides once at the end.
    """
    q0 = q[0]
    if q0 == 0:
        raise ZeroDivisionError("series division needs a unit constant term")
    lp = len(p)
    lq = len(q)
    pw = [1] * (n + 1)
    for k in range(1, n + 1):
        pw[k] = pw[k - 1] * q0
    out = []
    for k in range(n):
        acc = p[k] * pw[k] if k < lp else 0
        jmax = k if k < lq else lq - 1
        for j in range(1, jmax + 1):
            cj = q[j]
            if cj:
                acc -= cj * out[k - j] * pw[j - 1]
        out.append(acc)
    return out
