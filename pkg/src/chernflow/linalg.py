"""Exact linear algebra over the rationals.

Matrices are dense lists of rows whose entries are ``int`` or ``Fraction``.
Row reduction is done fraction-free on integer rows by ``rref_int``, which
comes from the compiled ``_elim`` extension when it was built and from the
pure-Python ``_elim_py`` otherwise.  Setting ``CHERNFLOW_PURE=1`` forces the
fallback.
"""
from __future__ import annotations

import os
from fractions import Fraction
from math import lcm
from typing import Sequence

if os.environ.get("CHERNFLOW_PURE"):
    from ._elim_py import rref_int
    BACKEND = "python"
else:
    try:
        from ._elim import rref_int  # type: ignore[attr-defined]
        BACKEND = "compiled"
    except ImportError:  # extension not built
        from ._elim_py import rref_int
        BACKEND = "python"

Vector = list
Matrix = list


def _int_row(row: Sequence) -> list[int]:
    dens = [v.denominator for v in row if isinstance(v, Fraction) and v.denominator != 1]
    if not dens:
        return [int(v) for v in row]
    m = lcm(*dens)
    return [int(v * m) for v in row]


def rref(rows: Sequence[Sequence], ncols: int, limit: int = -1) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form with unit pivots, zero rows dropped."""
    irows, piv = rref_int([_int_row(r) for r in rows], ncols, limit)
    out = []
    for i, row in enumerate(irows):
        if i < len(piv):
            p = row[piv[i]]
            out.append([Fraction(v, p) for v in row])
        else:
            out.append([Fraction(v) for v in row])
    return out, piv


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    if not rows or ncols == 0:
        return 0
    return len(rref_int([_int_row(r) for r in rows], ncols, -1)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Basis of {v : A v = 0}; integer-scaled, deterministic."""
    if ncols == 0:
        return []
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    irows, piv = rref_int([_int_row(r) for r in rows], ncols, -1)
    pivset = set(piv)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        # v[f] = L, v[p_i] = -row_i[f] * L / row_i[p_i], L clears denominators
        L = 1
        for i, p in enumerate(piv):
            if irows[i][f]:
                L = lcm(L, irows[i][p])
        v = [Fraction(0)] * ncols
        v[f] = Fraction(L)
        for i, p in enumerate(piv):
            if irows[i][f]:
                v[p] = Fraction(-irows[i][f] * L, irows[i][p])
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence, ncols: int) -> Vector | None:
    """One solution of A v = rhs, or None when inconsistent."""
    if not rows:
        return [Fraction(0)] * ncols if not any(rhs) else None
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    irows, piv = rref_int([_int_row(r) for r in aug], ncols + 1, ncols)
    for row in irows[len(piv):]:
        if row[ncols]:
            return None
    v = [Fraction(0)] * ncols
    for i, p in enumerate(piv):
        v[p] = Fraction(irows[i][ncols], irows[i][p])
    return v


def matvec(A: Sequence[Sequence], v: Sequence) -> Vector:
    return [sum((a * b for a, b in zip(row, v) if a and b), Fraction(0)) for row in A]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence], inner: int, ncols: int) -> Matrix:
    out = []
    for row in A:
        acc = [Fraction(0)] * ncols
        for k in range(inner):
            a = row[k]
            if a:
                brow = B[k]
                for j in range(ncols):
                    if brow[j]:
                        acc[j] += a * brow[j]
        out.append(acc)
    return out


def transpose(A: Sequence[Sequence], nrows: int, ncols: int) -> Matrix:
    if nrows == 0:
        return [[] for _ in range(ncols)]
    return [[A[i][j] for i in range(nrows)] for j in range(ncols)]


def is_zero(v: Sequence) -> bool:
    return not any(v)


class Span:
    """Span of a list of vectors with coordinate extraction.

    ``coords(w)`` returns coefficients c with w = sum c_i * vectors[i], or None
    when w lies outside the span.  Dependent input vectors are allowed; the
    coefficients are then one valid choice.
    """

    def __init__(self, vectors: Sequence[Sequence], dim: int):
        self.dim = dim
        self.vectors = [list(v) for v in vectors]
        n = len(self.vectors)
        self._rows: list[list[Fraction]] = []
        self._combo: list[list[Fraction]] = []
        self._piv: list[int] = []
        if n == 0 or dim == 0:
            return
        aug = [list(v) + [int(i == j) for j in range(n)] for i, v in enumerate(self.vectors)]
        R, piv = rref(aug, dim + n, dim)
        for i, p in enumerate(piv):
            self._rows.append(R[i][:dim])
            self._combo.append(R[i][dim:])
            self._piv.append(p)

    @property
    def rank(self) -> int:
        return len(self._piv)

    def _reduce(self, w: Sequence) -> tuple[list, list]:
        w = [Fraction(x) for x in w]
        coef = [Fraction(0)] * len(self.vectors)
        for row, combo, p in zip(self._rows, self._combo, self._piv):
            c = w[p]
            if c:
                for j in range(p, self.dim):
                    if row[j]:
                        w[j] -= c * row[j]
                for j, t in enumerate(combo):
                    if t:
                        coef[j] += c * t
        return w, coef

    def remainder(self, w: Sequence) -> list:
        return self._reduce(w)[0]

    def contains(self, w: Sequence) -> bool:
        return not any(self._reduce(w)[0])

    def coords(self, w: Sequence) -> list | None:
        rem, coef = self._reduce(w)
        if any(rem):
            return None
        return coef


def extend_basis(sub: Sequence[Sequence], candidates: Sequence[Sequence], dim: int) -> list[list]:
    """Candidates (in order) that extend span(sub) to span(sub + candidates)."""
    rows: list[list[Fraction]] = []
    piv: list[int] = []

    def reduce(w):
        w = [Fraction(x) for x in w]
        for row, p in zip(rows, piv):
            c = w[p]
            if c:
                for j in range(dim):
                    if row[j]:
                        w[j] -= c * row[j]
        return w

    def push(w):
        p = next(j for j, x in enumerate(w) if x)
        inv = 1 / w[p]
        w = [x * inv for x in w]
        for k, row in enumerate(rows):
            c = row[p]
            if c:
                rows[k] = [a - c * b for a, b in zip(row, w)]
        rows.append(w)
        piv.append(p)

    for v in sub:
        r = reduce(v)
        if any(r):
            push(r)
    chosen = []
    for v in candidates:
        r = reduce(v)
        if any(r):
            push(r)
            chosen.append(list(v))
    return chosen
