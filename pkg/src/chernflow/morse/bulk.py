"""Morse complexes, the boundary identity for bulk counts, and the deformed Floer differential."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian

from ..dgmodule import FreeDgModule
from ..errors import PreconditionError, ValidationError
from ..gca import GcaElement, GradedAlgebra, bulk_ring, polynomial_ring
from .tables import (CountTables, FloerSkeleton, MorseModel, b_letters, empty_word,
                     entry_allowed, letters, word_length)

QQ = polynomial_ring([])


def morse_complex(m: MorseModel) -> FreeDgModule:
    m.check_d_squared()
    diff: dict = {}
    for (b, a), c in m.counts.items():
        diff.setdefault(a, {})[b] = c
    return FreeDgModule(QQ, sorted(m.points.items(), key=lambda p: (p[1], p[0])), diff)


def check_ells(fs: FloerSkeleton) -> None:
    for r, l in fs.ells.items():
        if l < 4 or l % 2:
            raise ValidationError(f"ell_{r} = {l}: bulk classes need even ell >= 4 "
                                  "so that hbar has even negative degree")


# -- word enumeration ---------------------------------------------------------------

def _spread(fs: FloerSkeleton) -> int:
    d = list(fs.generators.values())
    return max(d) - min(d) if d else 0


def _weight(fs: FloerSkeleton, qs) -> int:
    return sum((fs.ells[r] - 2) * q for r, q in zip(fs.rhos, qs))


def _length_vectors(fs: FloerSkeleton, budget: int):
    """Length vectors q with sum (ell - 2) q <= budget."""
    rhos = fs.rhos

    def rec(i, left):
        if i == len(rhos):
            yield ()
            return
        step = fs.ells[rhos[i]] - 2
        for q in range(left // step + 1):
            for rest in rec(i + 1, left - q * step):
                yield (q,) + rest
    yield from rec(0, budget)


def plain_words(fs: FloerSkeleton, m: MorseModel, qs) -> list:
    per = [list(cartesian(letters(fs, m, r), repeat=q)) for r, q in zip(fs.rhos, qs)]
    return [tuple(w) for w in cartesian(*per)]


def b_words(fs: FloerSkeleton, m: MorseModel, qs) -> list:
    """Words of length vector qs with exactly one letter replaced by a B-letter."""
    out = []
    for w in plain_words(fs, m, qs):
        for ci, r in enumerate(fs.rhos):
            for s in range(len(w[ci])):
                for b in b_letters(fs, m, r):
                    out.append(_replace(w, ci, s, b))
    return sorted(set(out))


def _replace(w, ci, s, b):
    c = list(w[ci])
    c[s] = b
    return w[:ci] + (tuple(c),) + w[ci + 1:]


def required_entries(fs: FloerSkeleton, m: MorseModel) -> list:
    """All (y, x, W) whose degree constraint can hold: plain words and one-B words."""
    spread = _spread(fs)
    out = []
    for qs in _length_vectors(fs, max(spread - 1, -1)):
        words = plain_words(fs, m, qs) + (b_words(fs, m, qs) if sum(qs) else [])
        for w in words:
            for y in fs.generators:
                for x in fs.generators:
                    if entry_allowed(fs, m, y, x, w):
                        out.append((y, x, w))
    return out


# -- the boundary identity ------------------------------------------------------------

@dataclass
class IdentityReport:
    status: str                       # "pass" | "fail" | "incomplete"
    checked: int = 0
    witness: dict | None = None
    missing: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {"status": self.status, "checked": self.checked}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.missing:
            out["missing"] = [{"y": y, "x": x, "word": [list(c) for c in w]}
                              for y, x, w in self.missing[:20]]
            out["missing_count"] = len(self.missing)
        return out


class _Lookup:
    def __init__(self, fs, m, ct):
        self.fs, self.m, self.ct = fs, m, ct
        self.missing: set = set()

    def __call__(self, y, x, w) -> int:
        if not entry_allowed(self.fs, self.m, y, x, w):
            return 0
        v = self.ct.entries.get((y, x, w))
        if v is None:
            self.missing.add((y, x, w))
            return 0
        return v


def identity_terms(fs: FloerSkeleton, m: MorseModel, y: str, x: str, w) -> list:
    """The identity at (y, x, W) as a list of (weight, [table keys]) monomials."""
    terms = []
    Q = [len(c) for c in w]
    for qs in cartesian(*[range(n + 1) for n in Q]):
        wt = math.prod(math.comb(n, q) for n, q in zip(Q, qs))
        left = tuple(c[:q] for c, q in zip(w, qs))
        right = tuple(c[q:] for c, q in zip(w, qs))
        for z in fs.generators:
            if entry_allowed(fs, m, y, z, left) and entry_allowed(fs, m, z, x, right):
                terms.append((wt, [(y, z, left), (z, x, right)]))
    for ci, r in enumerate(fs.rhos):
        for s, a in enumerate(w[ci]):
            for b in b_letters(fs, m, r):
                c = m.counts.get((b, a), 0)
                wb = _replace(w, ci, s, b)
                if c and entry_allowed(fs, m, y, x, wb):
                    terms.append((c, [(y, x, wb)]))
    return terms


def identity_index(fs: FloerSkeleton, m: MorseModel) -> list:
    spread = _spread(fs)
    out = []
    for qs in _length_vectors(fs, max(spread - 2, -1)):
        shift = _weight(fs, qs) + 2
        for w in plain_words(fs, m, qs):
            for y, dy in fs.generators.items():
                for x, dx in fs.generators.items():
                    if dx == dy + shift:
                        out.append((y, x, w))
    return out


def validate_boundary_identity(ct: CountTables, m: MorseModel, fs: FloerSkeleton) -> IdentityReport:
    """Check sum binom * F F + sum F M = 0 at every (y, x, W) in range.

    A failure anywhere wins over missing data; otherwise any missing entry
    makes the result incomplete.
    """
    check_ells(fs)
    for (y, x, w) in ct.entries:
        if len(w) != len(fs.rhos):
            raise ValidationError(f"word {w} does not have one slot per bulk class")
        for p in (y, x):
            if p not in fs.generators:
                raise ValidationError(f"unknown generator {p!r}")
        for c in w:
            for a in c:
                if a not in m.points:
                    raise ValidationError(f"unknown critical point {a!r}")
        if ct.entries[(y, x, w)] and not entry_allowed(fs, m, y, x, w):
            raise ValidationError(f"entry ({y}, {x}, {w}) violates the degree constraint")
    look = _Lookup(fs, m, ct)
    index = identity_index(fs, m)
    witness = None
    for (y, x, w) in index:
        total = 0
        for wt, keys in identity_terms(fs, m, y, x, w):
            v = wt
            for k in keys:
                v *= look(*k)
            total += v
        if total and witness is None:
            witness = {"y": y, "x": x, "word": [list(c) for c in w], "value": total}
    for key in required_entries(fs, m):
        look(*key)
    missing = sorted(look.missing)
    if witness is not None:
        return IdentityReport("fail", len(index), witness, missing)
    if missing:
        return IdentityReport("incomplete", len(index), None, missing)
    return IdentityReport("pass", len(index))


# -- assembly -------------------------------------------------------------------------

def _u_weight(m: MorseModel, fs: FloerSkeleton, w) -> Fraction:
    out = Fraction(1)
    for r, c in zip(fs.rhos, w):
        for a in c:
            out *= m.cocycles.get(r, {}).get(a, 0)
    return out


def _plain(fs, m, w) -> bool:
    return all(m.points[a] == fs.ells[r] for r, c in zip(fs.rhos, w) for a in c)


def assemble_by_clusters(fs: FloerSkeleton, m: MorseModel, ct: CountTables, ring: GradedAlgebra) -> dict:
    """delta(y) = sum_W (prod_rho 1/q_rho!) U_W F(y, x, W) hbar^q x."""
    diff: dict = {}
    for (y, x, w), c in ct.entries.items():
        if not c or not _plain(fs, m, w):
            continue
        qs = tuple(len(cl) for cl in w)
        coeff = _u_weight(m, fs, w) * c / math.prod(math.factorial(q) for q in qs)
        if coeff:
            term = ring.from_terms({qs: coeff})
            row = diff.setdefault(y, {})
            row[x] = row.get(x, ring.zero()) + term
    return diff


def _deinterleave(fs, seq):
    return tuple(tuple(a for rr, a in seq if rr == r) for r in fs.rhos)


def assemble_by_interleavings(fs: FloerSkeleton, m: MorseModel, ct: CountTables,
                              ring: GradedAlgebra) -> dict:
    """Same differential, summing over ordered letter sequences with weight 1/|q|!."""
    alphabet = [(r, a) for r in fs.rhos for a in letters(fs, m, r)]
    lengths = {}
    for (y, x, w), c in ct.entries.items():
        if c and _plain(fs, m, w):
            lengths.setdefault(word_length(w), []).append((y, x, w))
    diff: dict = {}
    for L in sorted(lengths):
        needed = {}
        for key in lengths[L]:
            needed[(key[0], key[1], key[2])] = ct.entries[key]
        for seq in cartesian(alphabet, repeat=L):
            w = _deinterleave(fs, seq)
            u = _u_weight(m, fs, w)
            if not u:
                continue
            qs = tuple(len(cl) for cl in w)
            for y in fs.generators:
                for x in fs.generators:
                    c = needed.get((y, x, w))
                    if c:
                        term = ring.from_terms({qs: u * c / math.factorial(L)})
                        row = diff.setdefault(y, {})
                        row[x] = row.get(x, ring.zero()) + term
    return diff


def _clean(diff):
    return {y: {x: c for x, c in row.items() if c} for y, row in diff.items()
            if any(c for c in row.values())}


def assemblers_agree(fs: FloerSkeleton, m: MorseModel, ct: CountTables) -> bool:
    ring = bulk_ring(fs.ells)
    return _clean(assemble_by_clusters(fs, m, ct, ring)) == \
        _clean(assemble_by_interleavings(fs, m, ct, ring))


def build_bulk_complex(fs: FloerSkeleton, m: MorseModel, ct: CountTables,
                       window=None) -> FreeDgModule:
    check_ells(fs)
    m.check_d_squared()
    for r in fs.rhos:
        if r not in m.cocycles:
            raise ValidationError(f"no cocycle supplied for bulk class {r}")
    m.check_cocycles(fs.ells)
    rep = validate_boundary_identity(ct, m, fs)
    if rep.status == "fail":
        raise PreconditionError("boundary identity fails", witness=rep.witness)
    if rep.status == "incomplete":
        k = rep.missing[0]
        raise PreconditionError(f"count tables incomplete ({len(rep.missing)} required entries missing)",
                                witness={"y": k[0], "x": k[1], "word": [list(c) for c in k[2]]})
    ring = bulk_ring(fs.ells)
    diff = _clean(assemble_by_clusters(fs, m, ct, ring))
    return FreeDgModule(ring, sorted(fs.generators.items(), key=lambda p: (p[1], p[0])), diff, window)


def contracted_bulk_table(fs: FloerSkeleton, m: MorseModel, ct: CountTables) -> dict:
    """(y, x) -> {q: sum over W of length vector q of U_W F(y, x, W)} (no factorial weight)."""
    out: dict = {}
    for (y, x, w), c in ct.entries.items():
        if not c or not _plain(fs, m, w) or not word_length(w):
            continue
        u = _u_weight(m, fs, w)
        if u:
            qs = tuple(len(cl) for cl in w)
            row = out.setdefault((y, x), {})
            row[qs] = row.get(qs, 0) + u * c
    return {k: {q: v for q, v in row.items() if v} for k, row in out.items()
            if any(row.values())}


def plain_floer_table(fs: FloerSkeleton, m: MorseModel, ct: CountTables) -> dict:
    e = empty_word(len(fs.rhos))
    return {(y, x): c for (y, x, w), c in ct.entries.items() if w == e and c}
