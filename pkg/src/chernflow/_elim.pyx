# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled integer row-reduction kernel (same contract as ``_elim_py``)."""
from math import gcd


cdef object _content(list row):
    cdef object g = 0
    cdef object v
    for v in row:
        if v:
            g = gcd(g, v)
            if g == 1:
                return 1
    return g


def rref_int(rows, Py_ssize_t ncols, Py_ssize_t limit=-1):
    cdef list work
    cdef list pivots = []
    cdef list prow, row, new
    cdef Py_ssize_t nrows, r, c, i, k, best
    cdef object a, b, g, ma, mb, v, best_abs, av
    if limit < 0 or limit > ncols:
        limit = ncols
    work = [list(x) for x in rows if any(x)]
    nrows = len(work)
    r = 0
    for c in range(limit):
        if r >= nrows:
            break
        best = -1
        best_abs = 0
        for i in range(r, nrows):
            v = (<list>work[i])[c]
            if v:
                av = v if v > 0 else -v
                if best < 0 or av < best_abs:
                    best = i
                    best_abs = av
                    if av == 1:
                        break
        if best < 0:
            continue
        if best != r:
            work[r], work[best] = work[best], work[r]
        prow = <list>work[r]
        if prow[c] < 0:
            prow = [-v for v in prow]
        g = _content(prow)
        if g > 1:
            prow = [v // g for v in prow]
        work[r] = prow
        a = prow[c]
        for i in range(nrows):
            if i == r:
                continue
            row = <list>work[i]
            b = row[c]
            if not b:
                continue
            g = gcd(a, b)
            ma = a // g
            mb = b // g
            new = [None] * ncols
            for k in range(ncols):
                new[k] = ma * row[k] - mb * prow[k]
            g = _content(new)
            if g > 1:
                new = [v // g for v in new]
            work[i] = new
        pivots.append(c)
        r += 1
    out = work[:r]
    out.extend([x for x in work[r:] if any(x)])
    return out, pivots
