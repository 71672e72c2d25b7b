"""Characteristic classes on products of complex projective spaces.

Cohomology of a product of CP^{n_i} is Q[H_1..H_m]/(H_i^{n_i+1}) with H_i in
degree 2.  Bundles are (rank, total Chern class) pairs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from typing import Iterable, Mapping, Sequence

from . import linalg
from .errors import ValidationError
from .gca import GcaElement, GradedAlgebra, GradedVariable, bordism_ring, element_from_json


class Space:
    def __init__(self, factors: Iterable[tuple[str, int]] = ()):
        self.factors = tuple((str(n), int(d)) for n, d in factors)
        for _, d in self.factors:
            if d < 0:
                raise ValidationError("complex dimensions must be non-negative")
        free = GradedAlgebra([GradedVariable(n, 2) for n, _ in self.factors])
        self.ring = free.quotient([{n: d + 1} for n, d in self.factors]) if self.factors else free

    @property
    def complex_dim(self) -> int:
        return sum(d for _, d in self.factors)

    @property
    def real_dim(self) -> int:
        return 2 * self.complex_dim

    def H(self, i: int = 0) -> GcaElement:
        return self.ring.var(self.factors[i][0])

    def top_monomial(self) -> tuple:
        return tuple(d for _, d in self.factors)

    def integrate(self, a: GcaElement) -> Fraction:
        """Coefficient of the top class (the fundamental class pairing)."""
        return a.coefficient(self.top_monomial())

    def betti(self, k: int) -> int:
        return len(self.ring.basis(k))

    def __mul__(self, other: "Space") -> "Space":
        names = [n for n, _ in self.factors]
        clash = [n for n, _ in other.factors if n in names]
        if clash:
            raise ValidationError(f"factor names collide: {clash}")
        return Space(self.factors + other.factors)

    def __repr__(self) -> str:
        return " x ".join(f"CP^{d}" for _, d in self.factors) or "pt"


def point() -> Space:
    return Space(())


def cp(n: int, name: str = "H") -> Space:
    return Space([(name, n)])


@dataclass(frozen=True)
class BundleClass:
    space: Space
    rank: int
    total: GcaElement

    def __post_init__(self):
        if self.total.algebra != self.space.ring:
            raise ValidationError("Chern class over a different ring")
        if self.total.constant() != 1:
            raise ValidationError("total Chern class must have constant term 1")
        for d in self.total.degrees():
            if d % 2:
                raise ValidationError("Chern classes live in even degrees")

    def c(self, i: int) -> GcaElement:
        return self.total.component(2 * i)

    def dual(self) -> "BundleClass":
        out = self.space.ring.zero()
        for d, comp in self.total.homogeneous_components().items():
            out = out + comp * (-1 if (d // 2) % 2 else 1)
        return BundleClass(self.space, self.rank, out)

    def __add__(self, other: "BundleClass") -> "BundleClass":
        return BundleClass(self.space, self.rank + other.rank, self.total * other.total)

    def euler(self) -> GcaElement:
        """Top Chern class c_rank (the Euler class of the underlying real bundle)."""
        return self.c(self.rank)


def trivial_bundle(space: Space, rank: int) -> BundleClass:
    return BundleClass(space, rank, space.ring.one())


def tangent_bundle(space: Space) -> BundleClass:
    """c(T) = prod_i (1 + H_i)^{n_i + 1}."""
    tot = space.ring.one()
    for i, (_, d) in enumerate(space.factors):
        tot = tot * (space.ring.one() + space.H(i)) ** (d + 1)
    return BundleClass(space, space.complex_dim, tot)


def stable_cotangent_tangent(n: int, name: str = "H") -> BundleClass:
    """TCP^n + (TCP^n)^dual, the stable tangent class of T*CP^n restricted to the zero section."""
    if n < 1:
        raise ValidationError("n must be at least 1")
    t = tangent_bundle(cp(n, name))
    return t + t.dual()


def power_sums(b: BundleClass, kmax: int) -> list[GcaElement]:
    """p_0..p_kmax by Newton's identities from the Chern classes."""
    ring = b.space.ring
    p = [ring.scalar(b.rank)]
    for k in range(1, kmax + 1):
        acc = b.c(k) * ((-1) ** (k - 1) * k)
        for i in range(1, k):
            acc = acc + b.c(i) * p[k - i] * ((-1) ** (i - 1))
        p.append(acc)
    return p


def chern_character(b: BundleClass, rho_max: int) -> list[GcaElement]:
    if rho_max < 0:
        raise ValidationError("rho_max must be non-negative")
    p = power_sums(b, rho_max)
    return [p[0]] + [p[k] * Fraction(1, math.factorial(k)) for k in range(1, rho_max + 1)]


def _partitions_by_weight(total: int, parts: int):
    """Exponent tuples (q_1..q_parts) with sum k*q_k = total."""
    def rec(k, left):
        if k > parts:
            if left == 0:
                yield ()
            return
        for q in range(left // k + 1):
            for rest in rec(k + 1, left - q * k):
                yield (q,) + rest
    yield from rec(1, total)


def bordism_character(space: Space, tangent: BundleClass | None = None,
                      top: int | None = None) -> GcaElement:
    """sum over q of (1/prod q_k!) (integral of prod ch_k^{q_k}) prod b_k^{q_k}."""
    tangent = tangent or tangent_bundle(space)
    n = space.complex_dim
    top = max(top or n, 1)
    ring = bordism_ring(top)
    ch = chern_character(tangent, n)
    out = ring.zero()
    for q in _partitions_by_weight(n, top):
        integrand = space.ring.one()
        weight = Fraction(1)
        for k, e in enumerate(q, start=1):
            if e:
                integrand = integrand * ch[k] ** e
                weight /= math.factorial(e)
        val = space.integrate(integrand) if space.factors else integrand.constant()
        if val:
            mono = tuple(q) + (0,) * (top - len(q))
            out = out + ring.from_terms({mono: val * weight})
    return out


def bordism_rank_test(max_dim: int = 3) -> dict[int, tuple[int, int]]:
    """In each complex dimension k <= max_dim: (rank of images of products of CP's, dim of Q[b] in degree 2k)."""
    out = {}
    for k in range(1, max_dim + 1):
        images = []
        for part in _integer_partitions(k):
            sp = Space([(f"H{i}", d) for i, d in enumerate(part)])
            images.append(bordism_character(sp, top=max_dim))
        ring = bordism_ring(max_dim)
        basis = ring.basis(2 * k)
        rows = [[img.coefficient(m) for m in basis] for img in images]
        out[k] = (linalg.rank(rows, len(basis)), len(basis))
    return out


def _integer_partitions(k: int, largest: int | None = None):
    largest = k if largest is None else largest
    if k == 0:
        yield ()
        return
    for first in range(min(k, largest), 0, -1):
        for rest in _integer_partitions(k - first, first):
            yield (first,) + rest


# -- Gysin sequence ---------------------------------------------------------------

def _cup_matrix(space: Space, e: GcaElement, k: int, r: int):
    src = space.ring.basis(k)
    tgt = space.ring.basis(k + r)
    idx = {m: i for i, m in enumerate(tgt)}
    M = [[Fraction(0)] * len(src) for _ in tgt]
    for j, m in enumerate(src):
        prod = e * space.ring.from_terms({m: 1})
        for mm, c in prod.terms.items():
            M[idx[mm]][j] = c
    return M, len(src), len(tgt)


def gysin_sphere_dims(space: Space, euler: GcaElement, rank: int, window) -> dict[int, int]:
    """Rational cohomology of the unit sphere bundle of a real rank-``rank`` oriented bundle.

    dim H^k(S) = dim coker(e: H^{k-r} -> H^k) + dim ker(e: H^{k-r+1} -> H^{k+1}).
    """
    lo, hi = window
    if euler and euler.degree() != rank:
        raise ValidationError(f"Euler class has degree {euler.degree()}, expected {rank}")
    out = {}
    for k in range(lo, hi + 1):
        M, ns, nt = _cup_matrix(space, euler, k - rank, rank)
        coker = nt - (linalg.rank(M, ns) if ns and nt else 0)
        M2, ns2, nt2 = _cup_matrix(space, euler, k - rank + 1, rank)
        ker = ns2 - (linalg.rank(M2, ns2) if ns2 and nt2 else 0)
        out[k] = coker + ker
    return out


def unit_tangent_sphere_dims(n: int, window) -> dict[int, int]:
    """Sphere bundle of TCP^n: rank 2n, Euler class c_n = (n+1) H^n."""
    sp = cp(n)
    return gysin_sphere_dims(sp, tangent_bundle(sp).euler(), 2 * n, window)


# -- JSON -----------------------------------------------------------------------------

def space_from_json(doc: Mapping) -> Space:
    return Space([(f["name"], f["dim"]) for f in doc.get("factors", [])])


def bundle_from_json(doc: Mapping) -> BundleClass:
    sp = space_from_json(doc["space"])
    kind = doc.get("kind", "explicit")
    if kind == "tangent":
        return tangent_bundle(sp)
    if kind == "stable_cotangent":
        if len(sp.factors) != 1:
            raise ValidationError("stable_cotangent needs a single CP^n factor")
        return stable_cotangent_tangent(sp.factors[0][1], sp.factors[0][0])
    if kind == "trivial":
        return trivial_bundle(sp, int(doc["rank"]))
    return BundleClass(sp, int(doc["rank"]), element_from_json(sp.ring, doc["total"]))
