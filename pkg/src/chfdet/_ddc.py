"""Vectorized double-double (compensated) arithmetic, internal use only.

A double-double number is an unevaluated sum ``hi + lo`` of two IEEE
doubles with ``|lo| <= ulp(hi)/2``, which behaves like a ~31-digit float.
The Taylor branch of the confluent hypergeometric series suffers severe
cancellation on the imaginary axis (the largest term is ~ e^{|z|} while
the sum is O(1)), so the term recurrence and the accumulator run in
double-double; everything here is elementwise over numpy arrays.

Only the operations that branch needs are provided: error-free transforms
(Knuth two-sum, Dekker split / two-prod), double-double add, multiply and
divide, and a small complex layer represented as 4-tuples
``(re_hi, re_lo, im_hi, im_lo)``.
"""

from __future__ import annotations

import numpy as np

# 2**27 + 1, Dekker's splitter for 53-bit doubles.
_SPLITTER = 134217729.0


def _two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _quick_two_sum(a, b):
    # assumes |a| >= |b| (holds where used: b is a rounding residual)
    s = a + b
    err = b - (s - a)
    return s, err


def _two_prod(a, b):
    p = a * b
    ta = _SPLITTER * a
    ahi = ta - (ta - a)
    alo = a - ahi
    tb = _SPLITTER * b
    bhi = tb - (tb - b)
    blo = b - bhi
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


def dd_add(xh, xl, yh, yl):
    s, e = _two_sum(xh, yh)
    e = e + xl + yl
    return _quick_two_sum(s, e)


def dd_mul(xh, xl, yh, yl):
    p, e = _two_prod(xh, yh)
    e = e + (xh * yl + xl * yh)
    return _quick_two_sum(p, e)


def dd_div(xh, xl, yh, yl):
    q1 = xh / yh
    mh, ml = dd_mul(yh, yl, q1, np.zeros_like(q1) if isinstance(q1, np.ndarray) else 0.0)
    rh, rl = dd_add(xh, xl, -mh, -ml)
    q2 = (rh + rl) / yh
    return _quick_two_sum(q1, q2)


def cdd(re, im):
    """Promote exact double components to a complex double-double."""
    zero_r = np.zeros_like(re) if isinstance(re, np.ndarray) else 0.0
    zero_i = np.zeros_like(im) if isinstance(im, np.ndarray) else 0.0
    return (re, zero_r, im, zero_i)


def cdd_add(a, b):
    re = dd_add(a[0], a[1], b[0], b[1])
    im = dd_add(a[2], a[3], b[2], b[3])
    return (re[0], re[1], im[0], im[1])


def cdd_mul(a, b):
    ar, arl, ai, ail = a
    br, brl, bi, bil = b
    p1 = dd_mul(ar, arl, br, brl)
    p2 = dd_mul(ai, ail, bi, bil)
    re = dd_add(p1[0], p1[1], -p2[0], -p2[1])
    p3 = dd_mul(ar, arl, bi, bil)
    p4 = dd_mul(ai, ail, br, brl)
    im = dd_add(p3[0], p3[1], p4[0], p4[1])
    return (re[0], re[1], im[0], im[1])


def cdd_div(a, b):
    br, brl, bi, bil = b
    num = cdd_mul(a, (br, brl, -bi, -bil))
    d1 = dd_mul(br, brl, br, brl)
    d2 = dd_mul(bi, bil, bi, bil)
    den = dd_add(d1[0], d1[1], d2[0], d2[1])
    re = dd_div(num[0], num[1], den[0], den[1])
    im = dd_div(num[2], num[3], den[0], den[1])
    return (re[0], re[1], im[0], im[1])


def cdd_to_complex(a):
    return (a[0] + a[1]) + 1j * (a[2] + a[3])


def cdd_abs_hi(a):
    """Cheap magnitude estimate |re_hi| + |im_hi| (enough for stopping tests)."""
    return np.abs(a[0]) + np.abs(a[2])
