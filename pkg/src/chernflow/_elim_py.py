"""Pure-Python fallback for the integer row-reduction kernel.

Mirrors ``_elim.pyx`` line for line; ``linalg`` picks whichever imports.
"""
from math import gcd


def _content(row):
    g = 0
    for v in row:
        if v:
            g = gcd(g, v)
            if g == 1:
                return 1
    return g


def rref_int(rows, ncols, limit=-1):
    """Fraction-free reduced row echelon form over the integers.

    Returns ``(rows, pivots)``. Each returned row is primitive with a positive
    pivot entry, and every pivot column is zero outside its pivot row. Pivots
    are only searched in the first ``limit`` columns (all columns if negative).
    """
    if limit < 0 or limit > ncols:
        limit = ncols
    work = [list(r) for r in rows if any(r)]
    pivots = []
    nrows = len(work)
    r = 0
    for c in range(limit):
        if r >= nrows:
            break
        best = -1
        best_abs = 0
        for i in range(r, nrows):
            v = work[i][c]
            if v:
                a = v if v > 0 else -v
                if best < 0 or a < best_abs:
                    best = i
                    best_abs = a
                    if a == 1:
                        break
        if best < 0:
            continue
        if best != r:
            work[r], work[best] = work[best], work[r]
        prow = work[r]
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
            row = work[i]
            b = row[c]
            if not b:
                continue
            g = gcd(a, b)
            ma = a // g
            mb = b // g
            new = [ma * x - mb * y for x, y in zip(row, prow)]
            g = _content(new)
            if g > 1:
                new = [v // g for v in new]
            work[i] = new
        pivots.append(c)
        r += 1
    out = [row for row in work[:r]]
    # trailing rows may still be nonzero when limit < ncols
    out.extend(row for row in work[r:] if any(row))
    return out, pivots
