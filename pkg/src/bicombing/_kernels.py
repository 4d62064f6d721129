"""Compiled inner loops for the recursive barycenter construction.

Two JIT kernels implement the deletion-tuple iteration
``x_i <- b_{n-1}(x without entry i)`` until the tuple diameter drops
below a tolerance:

* :func:`bary_coeff` works in coefficient space: each tuple entry is a
  row of barycentric coefficients over the distinct input points. On a
  space with linear geodesics the iteration commutes with taking affine
  combinations, so running it on coefficient rows is equivalent to
  running it on the points themselves. The l1 metric on rows is used
  only for stopping and deduplication.

* :func:`bary_tree` works directly on star-tree points encoded as
  ``[leg, t]`` rows (center canonicalized to ``[0, 0]``), with the tree
  metric and the tree midpoint.

Both kernels sort rows so the result does not depend on the input
order, deduplicate equal rows within an iteration, run bursts of
``log(diameter/tol)/log(n-1)`` iterations between diameter checks
(the deletion map contracts the diameter by 1/(n-1)), and bail out if
the diameter stalls above the tolerance (floating-point floor).
"""

from __future__ import annotations

from math import log

import numpy as np
from numba import njit

__all__ = ["bary_coeff", "bary_tree"]


@njit(cache=True)
def _row_less(A, i, j):
    for c in range(A.shape[1]):
        if A[i, c] < A[j, c]:
            return True
        if A[i, c] > A[j, c]:
            return False
    return False


@njit(cache=True)
def _sort_rows(A):
    # insertion sort; row counts are tiny
    n = A.shape[0]
    for i in range(1, n):
        j = i
        while j > 0 and _row_less(A, j, j - 1):
            for c in range(A.shape[1]):
                tmp = A[j, c]
                A[j, c] = A[j - 1, c]
                A[j - 1, c] = tmp
            j -= 1


@njit(cache=True)
def _l1(A, i, j):
    s = 0.0
    for c in range(A.shape[1]):
        d = A[i, c] - A[j, c]
        s += d if d >= 0 else -d
    return s


@njit(cache=True)
def bary_coeff(pts, tol):
    """Deletion-tuple limit of ``pts`` rows under row-averaging midpoints."""
    n = pts.shape[0]
    r = pts.shape[1]
    out = np.empty(r)
    if n == 1:
        for c in range(r):
            out[c] = pts[0, c]
        return out
    if n == 2:
        for c in range(r):
            out[c] = (pts[0, c] + pts[1, c]) * 0.5
        return out
    if n == 3:
        p = pts.copy()
        _sort_rows(p)
        q = np.empty((3, r))
        prevD = -1.0
        while True:
            D = max(_l1(p, 0, 1), max(_l1(p, 0, 2), _l1(p, 1, 2)))
            if D < tol or (prevD >= 0.0 and D > 0.5 * prevD):
                break
            prevD = D
            T = int(log(D / tol) * 1.4426950408889634) + 1
            for _ in range(T):
                for c in range(r):
                    q[0, c] = (p[1, c] + p[2, c]) * 0.5
                    q[1, c] = (p[0, c] + p[2, c]) * 0.5
                    q[2, c] = (p[0, c] + p[1, c]) * 0.5
                tmp = p
                p = q
                q = tmp
        for c in range(r):
            out[c] = p[0, c]
        return out
    cur = pts.copy()
    _sort_rows(cur)
    new = np.empty((n, r))
    sub = np.empty((n - 1, r))
    prevD = -1.0
    while True:
        D = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                dd = _l1(cur, i, j)
                if dd > D:
                    D = dd
        if D < tol or (prevD >= 0.0 and D > 0.5 * prevD):
            break
        prevD = D
        T = int(log(D / tol) / log(n - 1.0))
        if T < 1:
            T = 1
        for _ in range(T):
            for i in range(n):
                if i > 0:
                    same = True
                    for c in range(r):
                        if cur[i, c] != cur[i - 1, c]:
                            same = False
                            break
                    if same:
                        for c in range(r):
                            new[i, c] = new[i - 1, c]
                        continue
                k = 0
                for j in range(n):
                    if j != i:
                        for c in range(r):
                            sub[k, c] = cur[j, c]
                        k += 1
                v = bary_coeff(sub, tol)
                for c in range(r):
                    new[i, c] = v[c]
            tmp = cur
            cur = new
            new = tmp
            _sort_rows(cur)
    for c in range(r):
        out[c] = cur[0, c]
    return out


@njit(cache=True)
def _tdist(A, i, j):
    if A[i, 0] == A[j, 0]:
        d = A[i, 1] - A[j, 1]
        return d if d >= 0 else -d
    return A[i, 1] + A[j, 1]


@njit(cache=True)
def _tmid(a0, a1, b0, b1):
    # midpoint of tree points (leg a0, t a1) and (leg b0, t b1), canonical
    if a0 == b0:
        m = (a1 + b1) * 0.5
        if m == 0.0:
            return 0.0, 0.0
        return a0, m
    m = (a1 + b1) * 0.5
    if m < a1:
        return a0, a1 - m
    if m > a1:
        return b0, m - a1
    return 0.0, 0.0


@njit(cache=True)
def bary_tree(pts, tol):
    """Deletion-tuple limit for star-tree points given as [leg, t] rows."""
    n = pts.shape[0]
    out = np.empty(2)
    if n == 1:
        out[0] = pts[0, 0]
        out[1] = pts[0, 1]
        return out
    if n == 2:
        leg, t = _tmid(pts[0, 0], pts[0, 1], pts[1, 0], pts[1, 1])
        out[0] = leg
        out[1] = t
        return out
    if n == 3:
        p = pts.copy()
        _sort_rows(p)
        q = np.empty((3, 2))
        prevD = -1.0
        while True:
            D = max(_tdist(p, 0, 1), max(_tdist(p, 0, 2), _tdist(p, 1, 2)))
            if D < tol or (prevD >= 0.0 and D > 0.5 * prevD):
                break
            prevD = D
            T = int(log(D / tol) * 1.4426950408889634) + 1
            for _ in range(T):
                q[0, 0], q[0, 1] = _tmid(p[1, 0], p[1, 1], p[2, 0], p[2, 1])
                q[1, 0], q[1, 1] = _tmid(p[0, 0], p[0, 1], p[2, 0], p[2, 1])
                q[2, 0], q[2, 1] = _tmid(p[0, 0], p[0, 1], p[1, 0], p[1, 1])
                tmp = p
                p = q
                q = tmp
        out[0] = p[0, 0]
        out[1] = p[0, 1]
        return out
    cur = pts.copy()
    _sort_rows(cur)
    new = np.empty((n, 2))
    sub = np.empty((n - 1, 2))
    prevD = -1.0
    while True:
        D = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                dd = _tdist(cur, i, j)
                if dd > D:
                    D = dd
        if D < tol or (prevD >= 0.0 and D > 0.5 * prevD):
            break
        prevD = D
        T = int(log(D / tol) / log(n - 1.0))
        if T < 1:
            T = 1
        for _ in range(T):
            for i in range(n):
                if i > 0 and cur[i, 0] == cur[i - 1, 0] and cur[i, 1] == cur[i - 1, 1]:
                    new[i, 0] = new[i - 1, 0]
                    new[i, 1] = new[i - 1, 1]
                    continue
                k = 0
                for j in range(n):
                    if j != i:
                        sub[k, 0] = cur[j, 0]
                        sub[k, 1] = cur[j, 1]
                        k += 1
                v = bary_tree(sub, tol)
                new[i, 0] = v[0]
                new[i, 1] = v[1]
            tmp = cur
            cur = new
            new = tmp
            _sort_rows(cur)
    out[0] = cur[0, 0]
    out[1] = cur[0, 1]
    return out
