"""Free graded-commutative algebras over Q, monomial quotients and DGAs.

Monomials are exponent tuples aligned with the algebra's variable list.  A
product is brought to normal form by sorting variables into list order; the
Koszul sign of moving odd variables past each other is absorbed there.
Degrees follow the cochain convention (differentials raise degree by one).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from . import linalg
from .errors import InfiniteBasisError, UnsupportedRelationError, ValidationError

Monomial = tuple


@dataclass(frozen=True)
class GradedVariable:
    name: str
    degree: int

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact rational: {c!r}")


class GradedAlgebra:
    """Graded-commutative Q-algebra on named variables modulo monomial relations.

    ``killed`` holds the exponent tuples of monomials generating the relation
    ideal.  Only monomial relations are supported; over Q a relation
    ``c * m`` with ``c != 0`` kills ``m``.
    """

    def __init__(self, variables: Iterable[GradedVariable | tuple], relations: Iterable = ()):
        vs = []
        for v in variables:
            if not isinstance(v, GradedVariable):
                v = GradedVariable(*v)
            if not isinstance(v.name, str) or not v.name:
                raise ValidationError(f"bad variable name {v.name!r}")
            vs.append(GradedVariable(v.name, int(v.degree)))
        self.variables = tuple(vs)
        self.names = tuple(v.name for v in vs)
        if len(set(self.names)) != len(self.names):
            raise ValidationError("variable names must be unique")
        self.index = {n: i for i, n in enumerate(self.names)}
        self.degrees = tuple(v.degree for v in vs)
        self.odd = tuple(v.odd for v in vs)
        self.nvars = len(vs)
        killed = []
        for rel in relations:
            m = self._relation_monomial(rel)
            # odd squares vanish anyway; dropping them keeps the key canonical
            if m is not None and not any(o and e > 1 for o, e in zip(self.odd, m)):
                killed.append(m)
        # keep only minimal generators
        killed = sorted(set(killed), key=lambda m: (sum(m), m))
        minimal = []
        for m in killed:
            if not any(all(a <= b for a, b in zip(k, m)) for k in minimal):
                minimal.append(m)
        self.killed = tuple(minimal)
        self._mul_cache: dict = {}
        self._basis_cache: dict = {}
        self._key = (self.variables, self.killed)

    def _relation_monomial(self, rel) -> Monomial | None:
        if isinstance(rel, GcaElement):
            if not rel.terms:  # e.g. the square of an odd variable: already zero
                return None
            terms = [(m, c) for m, c in rel.terms.items()]
            if len(terms) != 1:
                raise UnsupportedRelationError(
                    "only monomial relations are supported; got " + str(rel))
            return terms[0][0]
        if isinstance(rel, Mapping):
            return self.monomial(rel)
        raise TypeError(f"relation must be an element or a name->exponent map: {rel!r}")

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedAlgebra) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        vs = ", ".join(f"{v.name}:{v.degree}" for v in self.variables)
        return f"GradedAlgebra([{vs}], killed={len(self.killed)})"

    # -- construction helpers -------------------------------------------
    def quotient(self, relations: Iterable) -> "GradedAlgebra":
        rels = [dict((self.names[i], e) for i, e in enumerate(k) if e) for k in self.killed]
        extra = []
        for r in relations:
            if isinstance(r, GcaElement):
                if r.algebra.variables != self.variables:
                    raise ValidationError("relation over a different algebra")
                extra.append(r)
            else:
                extra.append(r)
        return GradedAlgebra(self.variables, rels + extra)

    def free(self) -> "GradedAlgebra":
        return GradedAlgebra(self.variables)

    def monomial(self, spec: Mapping[str, int] | Sequence) -> Monomial:
        """Exponent tuple from a name->exponent map or [[name, exp], ...] list.

        The sign from reordering is not applied here; use ``term`` for that.
        """
        exps = [0] * self.nvars
        items = spec.items() if isinstance(spec, Mapping) else spec
        for name, e in items:
            if name not in self.index:
                raise ValidationError(f"unknown variable {name!r}")
            if int(e) < 0:
                raise ValidationError("negative exponent")
            exps[self.index[name]] += int(e)
        return tuple(exps)

    def is_killed(self, m: Monomial) -> bool:
        for k in self.killed:
            if all(a <= b for a, b in zip(k, m)):
                return True
        for i, e in enumerate(m):
            if e > 1 and self.odd[i]:
                return True
        return False

    def mono_degree(self, m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    def mono_mul(self, m1: Monomial, m2: Monomial):
        """(sign, monomial) of m1*m2 in normal form, or None if zero."""
        key = (m1, m2)
        hit = self._mul_cache.get(key)
        if hit is not None or key in self._mul_cache:
            return hit
        res = self._mono_mul(m1, m2)
        if len(self._mul_cache) < 200000:
            self._mul_cache[key] = res
        return res

    def _mono_mul(self, m1, m2):
        sign = 0
        higher = 0  # odd letters of m1 sitting to the right of position i
        for i in range(self.nvars - 1, -1, -1):
            if self.odd[i]:
                if m2[i]:
                    sign ^= higher & 1
                if m1[i]:
                    higher += 1
        m = tuple(a + b for a, b in zip(m1, m2))
        if self.is_killed(m):
            return None
        return (-1 if sign else 1), m

    @property
    def one_monomial(self) -> Monomial:
        return (0,) * self.nvars

    # -- elements ---------------------------------------------------------
    def zero(self) -> "GcaElement":
        return GcaElement(self, {})

    def one(self) -> "GcaElement":
        return self.scalar(1)

    def scalar(self, c) -> "GcaElement":
        c = _as_fraction(c)
        if not c or self.is_killed(self.one_monomial):
            return self.zero()
        return GcaElement(self, {self.one_monomial: c})

    def var(self, name: str) -> "GcaElement":
        i = self.index[name]
        m = tuple(int(j == i) for j in range(self.nvars))
        if self.is_killed(m):
            return self.zero()
        return GcaElement(self, {m: Fraction(1)})

    def gens(self) -> dict[str, "GcaElement"]:
        return {n: self.var(n) for n in self.names}

    def term(self, coeff, factors: Sequence[tuple[str, int]]) -> "GcaElement":
        """coeff times the ordered product of the listed powers (signs applied)."""
        out = self.scalar(coeff)
        for name, e in factors:
            for _ in range(int(e)):
                out = out * self.var(name)
        return out

    def from_terms(self, terms: Mapping[Monomial, object]) -> "GcaElement":
        clean = {}
        for m, c in terms.items():
            c = _as_fraction(c)
            if c and not self.is_killed(m):
                clean[m] = clean.get(m, Fraction(0)) + c
        return GcaElement(self, {m: c for m, c in clean.items() if c})

    # -- bases --------------------------------------------------------------
    def _bounds(self) -> list:
        bounds = []
        for i in range(self.nvars):
            if self.odd[i]:
                bounds.append(1)
                continue
            b = None
            for k in self.killed:
                if k[i] and sum(k) == k[i]:
                    b = k[i] - 1 if b is None else min(b, k[i] - 1)
            bounds.append(b)
        return bounds

    def check_finite_basis(self) -> None:
        bounds = self._bounds()
        signs = set()
        for i, b in enumerate(bounds):
            if b is None:
                d = self.degrees[i]
                if d == 0:
                    raise InfiniteBasisError(
                        f"unbounded degree-0 variable {self.names[i]!r}: infinite basis per degree")
                signs.add(d > 0)
        if len(signs) > 1:
            raise InfiniteBasisError(
                "unbounded variables of both signs: per-degree basis is infinite")

    def basis(self, degree: int) -> list[Monomial]:
        """Sorted normal-form monomials of the given degree."""
        hit = self._basis_cache.get(degree)
        if hit is not None:
            return hit
        self.check_finite_basis()
        bounds = self._bounds()
        n = self.nvars
        INF = math.inf
        lo = [0.0] * (n + 1)
        hi = [0.0] * (n + 1)
        for i in range(n - 1, -1, -1):
            d = self.degrees[i]
            b = bounds[i]
            if b is None:
                lo[i] = lo[i + 1] + (-INF if d < 0 else 0)
                hi[i] = hi[i + 1] + (INF if d > 0 else 0)
            else:
                lo[i] = lo[i + 1] + min(0, d * b)
                hi[i] = hi[i + 1] + max(0, d * b)
        out: list[Monomial] = []
        exps = [0] * n

        def rec(i: int, target: int):
            if i == n:
                if target == 0:
                    m = tuple(exps)
                    if not self.is_killed(m):
                        out.append(m)
                return
            if not (lo[i] <= target <= hi[i]):
                return
            d = self.degrees[i]
            b = bounds[i]
            e = 0
            while True:
                if b is not None and e > b:
                    break
                rest = target - e * d
                if b is None and e > 0:
                    if d < 0 and rest > hi[i + 1]:
                        break
                    if d > 0 and rest < lo[i + 1]:
                        break
                if lo[i + 1] <= rest <= hi[i + 1]:
                    exps[i] = e
                    rec(i + 1, rest)
                if d == 0 and b is None:
                    break
                e += 1
            exps[i] = 0

        rec(0, degree)
        out.sort()
        self._basis_cache[degree] = out
        return out

    # -- json ---------------------------------------------------------------
    def to_json(self) -> dict:
        rels = []
        for k in self.killed:
            rels.append([{"monomial": [[self.names[i], e] for i, e in enumerate(k) if e],
                          "coeff": "1"}])
        return {"variables": [{"name": v.name, "degree": v.degree} for v in self.variables],
                "relations": rels}

    @classmethod
    def from_json(cls, doc: Mapping) -> "GradedAlgebra":
        free = cls([GradedVariable(v["name"], int(v["degree"])) for v in doc["variables"]])
        rels = [element_from_json(free, r) for r in doc.get("relations", [])]
        return free.quotient(rels) if rels else free


class GcaElement:
    """Immutable element: map from normal-form monomials to nonzero rationals."""

    __slots__ = ("algebra", "terms", "_hash")

    def __init__(self, algebra: GradedAlgebra, terms: Mapping[Monomial, Fraction]):
        self.algebra = algebra
        self.terms = dict(terms)
        self._hash = None

    # arithmetic
    def _check(self, other) -> "GcaElement":
        if isinstance(other, (int, Fraction)):
            return self.algebra.scalar(other)
        if not isinstance(other, GcaElement):
            return NotImplemented
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise ValidationError("elements of different algebras")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m, 0) + c
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return GcaElement(self.algebra, t)

    __radd__ = __add__

    def __neg__(self):
        return GcaElement(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return self.algebra.zero()
            return GcaElement(self.algebra, {m: v * c for m, v in self.terms.items()})
        other = self._check(other)
        if other is NotImplemented:
            return other
        alg = self.algebra
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                r = alg.mono_mul(m1, m2)
                if r is None:
                    continue
                s, m = r
                v = t.get(m, 0) + s * c1 * c2
                if v:
                    t[m] = v
                else:
                    t.pop(m, None)
        return GcaElement(alg, t)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        out = self.algebra.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.algebra.scalar(other)
        if not isinstance(other, GcaElement):
            return NotImplemented
        return self.algebra == other.algebra and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.algebra, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # grading
    def degrees(self) -> set[int]:
        return {self.algebra.mono_degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int | None:
        """Degree of a homogeneous element; None for zero."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ValidationError(f"inhomogeneous element {self}")
        return next(iter(ds))

    def homogeneous_components(self) -> dict[int, "GcaElement"]:
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            out.setdefault(self.algebra.mono_degree(m), {})[m] = c
        return {d: GcaElement(self.algebra, t) for d, t in sorted(out.items())}

    def component(self, degree: int) -> "GcaElement":
        return GcaElement(self.algebra, {m: c for m, c in self.terms.items()
                                         if self.algebra.mono_degree(m) == degree})

    def constant(self) -> Fraction:
        return self.terms.get(self.algebra.one_monomial, Fraction(0))

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]))

    def __repr__(self) -> str:
        return format_element(self)

    def to_json(self) -> list:
        return element_to_json(self)


def format_monomial(alg: GradedAlgebra, m: Monomial) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(alg.names[i])
        elif e > 1:
            parts.append(f"{alg.names[i]}^{e}")
    return "*".join(parts)


def format_element(a: GcaElement) -> str:
    if not a.terms:
        return "0"
    out = []
    for m, c in a.sorted_terms():
        mono = format_monomial(a.algebra, m)
        if not mono:
            s = str(c)
        elif c == 1:
            s = mono
        elif c == -1:
            s = "-" + mono
        else:
            s = f"{c}*{mono}"
        out.append(s)
    text = " + ".join(out)
    return text.replace("+ -", "- ")


def element_to_json(a: GcaElement) -> list:
    alg = a.algebra
    return [{"monomial": [[alg.names[i], e] for i, e in enumerate(m) if e], "coeff": str(c)}
            for m, c in a.sorted_terms()]


def element_from_json(alg: GradedAlgebra, doc: Sequence) -> GcaElement:
    """Terms are multiplied out in the listed order, so signs follow the listing."""
    out = alg.zero()
    for t in doc:
        c = Fraction(str(t["coeff"]))
        out = out + alg.term(c, [(n, e) for n, e in t["monomial"]])
    return out


def multiply(a: GcaElement, b: GcaElement) -> GcaElement:
    return a * b


# -- DGAs ----------------------------------------------------------------------

class Dga:
    """Graded-commutative algebra with a Leibniz differential given on generators."""

    def __init__(self, algebra: GradedAlgebra, differential: Mapping[str, GcaElement] | None = None):
        self.algebra = algebra
        diff = {}
        for name, val in (differential or {}).items():
            if name not in algebra.index:
                raise ValidationError(f"differential on unknown variable {name!r}")
            if val.algebra != algebra:
                raise ValidationError("differential value over a different algebra")
            if val:
                d = val.degree()
                want = algebra.degrees[algebra.index[name]] + 1
                if d != want:
                    raise ValidationError(f"d({name}) has degree {d}, expected {want}")
            diff[name] = val
        self.gen_diff = {n: diff.get(n, algebra.zero()) for n in algebra.names}
        self._cache: dict = {}
        self.trivial = all(not v for v in self.gen_diff.values())
        self._validate()

    def _validate(self):
        alg = self.algebra
        for n in alg.names:
            dd = self.d(self.gen_diff[n])
            if dd:
                raise ValidationError(f"d^2({n}) = {dd} != 0")
        if alg.killed and not self.trivial:
            free = alg.free()
            fd = Dga(free, {n: GcaElement(free, v.terms) for n, v in self.gen_diff.items()})
            for k in alg.killed:
                img = fd.d(GcaElement(free, {k: Fraction(1)}))
                for m in img.terms:
                    if not alg.is_killed(m):
                        raise ValidationError(
                            "differential does not preserve the relation ideal at "
                            + format_monomial(alg, k))

    def d_monomial(self, m: Monomial) -> GcaElement:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        alg = self.algebra
        i = next((j for j, e in enumerate(m) if e), None)
        if i is None:
            res = alg.zero()
        else:
            rest = list(m)
            rest[i] -= 1
            rest = tuple(rest)
            v = GcaElement(alg, {tuple(int(j == i) for j in range(alg.nvars)): Fraction(1)})
            r = GcaElement(alg, {rest: Fraction(1)}) if not alg.is_killed(rest) else alg.zero()
            sign = -1 if alg.odd[i] else 1
            res = self.gen_diff[alg.names[i]] * r + v * self.d_monomial(rest) * sign
        self._cache[m] = res
        return res

    def d(self, a: GcaElement) -> GcaElement:
        if a.algebra != self.algebra:
            raise ValidationError("element of a different algebra")
        if self.trivial:
            return self.algebra.zero()
        out = self.algebra.zero()
        for m, c in a.terms.items():
            out = out + self.d_monomial(m) * c
        return out

    def to_json(self) -> dict:
        return {"algebra": self.algebra.to_json(),
                "differential": {n: v.to_json() for n, v in self.gen_diff.items() if v}}

    @classmethod
    def from_json(cls, doc: Mapping) -> "Dga":
        alg = GradedAlgebra.from_json(doc["algebra"])
        diff = {n: element_from_json(alg, v) for n, v in doc.get("differential", {}).items()}
        return cls(alg, diff)


def as_dga(ring) -> Dga:
    if isinstance(ring, Dga):
        return ring
    if isinstance(ring, GradedAlgebra):
        return Dga(ring)
    raise TypeError(f"not a ring: {ring!r}")


def differentiate(d: Dga, a: GcaElement) -> GcaElement:
    return d.d(a)


class DgaMorphism:
    """Algebra map given on generators; checked to be degree- and d-compatible."""

    def __init__(self, source, target, images: Mapping[str, GcaElement]):
        self.source = as_dga(source)
        self.target = as_dga(target)
        sa, ta = self.source.algebra, self.target.algebra
        imgs = {}
        for n in sa.names:
            img = images.get(n, ta.zero()) if n in images else ta.var(n) if n in ta.index else ta.zero()
            if img.algebra != ta:
                raise ValidationError(f"image of {n} lies in a different algebra")
            if img and img.degree() != sa.degrees[sa.index[n]]:
                raise ValidationError(f"image of {n} has degree {img.degree()}, "
                                      f"expected {sa.degrees[sa.index[n]]}")
            imgs[n] = img
        for n in images:
            if n not in sa.index:
                raise ValidationError(f"image given for unknown variable {n!r}")
        self.images = imgs
        self._cache: dict = {}
        for k in sa.killed:
            if self.apply_monomial(k):
                raise ValidationError("map does not respect relations at "
                                      + format_monomial(sa, k))
        for n in sa.names:
            lhs = self.apply(self.source.gen_diff[n])
            rhs = self.target.d(imgs[n])
            if lhs != rhs:
                raise ValidationError(f"map does not commute with d on {n}")

    def apply_monomial(self, m: Monomial) -> GcaElement:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        sa = self.source.algebra
        out = self.target.algebra.one()
        for i, e in enumerate(m):
            for _ in range(e):
                out = out * self.images[sa.names[i]]
        self._cache[m] = out
        return out

    def apply(self, a: GcaElement) -> GcaElement:
        out = self.target.algebra.zero()
        for m, c in a.terms.items():
            out = out + self.apply_monomial(m) * c
        return out

    __call__ = apply

    def is_identity(self) -> bool:
        return (self.source.algebra == self.target.algebra
                and all(self.images[n] == self.target.algebra.var(n) for n in self.source.algebra.names))


def identity_morphism(ring) -> DgaMorphism:
    r = as_dga(ring)
    return DgaMorphism(r, r, r.algebra.gens())


def setting_to_zero(source, target, names: Iterable[str]) -> DgaMorphism:
    """Map sending the listed variables to 0 and the rest to same-named variables."""
    s = as_dga(source)
    t = as_dga(target)
    names = set(names)
    imgs = {}
    for n in s.algebra.names:
        if n in names:
            imgs[n] = t.algebra.zero()
        elif n in t.algebra.index:
            imgs[n] = t.algebra.var(n)
        else:
            raise ValidationError(f"variable {n!r} has no target")
    return DgaMorphism(s, t, imgs)


# -- homology of a DGA --------------------------------------------------------

@dataclass
class HomologyRow:
    degree: int
    dim: int
    basis: list


def _window(window) -> tuple[int, int]:
    if window is None:
        raise ValidationError("a finite degree window is required")
    lo, hi = window
    if lo is None or hi is None or not all(isinstance(x, int) for x in (lo, hi)):
        raise ValidationError("window must be a pair of integers")
    if lo > hi:
        raise ValidationError("empty window")
    return lo, hi


def _d_matrix(d: Dga, n: int) -> list[list[Fraction]]:
    src = d.algebra.basis(n)
    tgt = d.algebra.basis(n + 1)
    idx = {m: i for i, m in enumerate(tgt)}
    A = [[Fraction(0)] * len(src) for _ in tgt]
    for j, m in enumerate(src):
        for mm, c in d.d_monomial(m).terms.items():
            A[idx[mm]][j] = c
    return A


def dga_homology_basis(d: Dga, window) -> list[HomologyRow]:
    lo, hi = _window(window)
    alg = d.algebra
    rows = []
    for n in range(lo, hi + 1):
        B = alg.basis(n)
        dim = len(B)
        if dim == 0:
            rows.append(HomologyRow(n, 0, []))
            continue
        A_out = _d_matrix(d, n)
        ker = linalg.nullspace(A_out, dim) if A_out else [
            [Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
        A_in = _d_matrix(d, n - 1)
        im = linalg.transpose(A_in, dim, len(alg.basis(n - 1)))
        reps = linalg.extend_basis(im, ker, dim)
        basis = [alg.from_terms({B[i]: v[i] for i in range(dim) if v[i]}) for v in reps]
        rows.append(HomologyRow(n, len(reps), basis))
    return rows


def exp_degree_zero(a: GcaElement, cap: int) -> GcaElement:
    """Truncated exponential sum_{k<=cap} a^k/k! of a degree-0 element."""
    if a.constant():
        raise ValidationError("exp: nonzero constant term is not supported")
    if a and a.degree() != 0:
        raise ValidationError("exp: element must have total degree 0")
    out = a.algebra.one()
    power = a.algebra.one()
    for k in range(1, cap + 1):
        power = power * a
        if not power:
            break
        out = out + power * Fraction(1, math.factorial(k))
    return out


# -- standard rings ----------------------------------------------------------

def polynomial_ring(specs: Iterable[tuple[str, int]]) -> GradedAlgebra:
    return GradedAlgebra([GradedVariable(n, d) for n, d in specs])


def bordism_ring(top: int) -> GradedAlgebra:
    """Q[b_1..b_top]; b_k carries its homological degree 2k."""
    return polynomial_ring([(f"b{k}", 2 * k) for k in range(1, top + 1)])


def bulk_ring(ells: Mapping[int, int] | Sequence[int]) -> GradedAlgebra:
    """Q[hbar_rho] with deg hbar_rho = 2 - ell_rho."""
    items = ells.items() if isinstance(ells, Mapping) else enumerate(ells, start=1)
    return polynomial_ring([(f"h{r}", 2 - l) for r, l in items])


def chern_bulk_ring(rhos: Iterable[int]) -> GradedAlgebra:
    """Q[B_rho] with cochain degree -2 rho (the de Rham bulk coefficients)."""
    return polynomial_ring([(f"B{r}", -2 * r) for r in rhos])


def interpolating_dga(rhos: Iterable[int]) -> Dga:
    """Q[B_rho, L_rho, h_rho] with dB = dh = L, dL = 0; deg B = deg h = -2 rho."""
    rhos = list(rhos)
    specs = []
    for r in rhos:
        specs += [(f"B{r}", -2 * r), (f"L{r}", -2 * r + 1), (f"h{r}", -2 * r)]
    alg = polynomial_ring(specs)
    diff = {}
    for r in rhos:
        diff[f"B{r}"] = alg.var(f"L{r}")
        diff[f"h{r}"] = alg.var(f"L{r}")
    return Dga(alg, diff)


def interpolating_projections(rhos: Iterable[int]):
    """(L~, pi_B onto Q[B], pi_h onto Q[h]) as DGA morphisms."""
    rhos = list(rhos)
    lt = interpolating_dga(rhos)
    rb = Dga(chern_bulk_ring(rhos))
    rh = Dga(polynomial_ring([(f"h{r}", -2 * r) for r in rhos]))
    pi_b = DgaMorphism(lt, rb, {n: (rb.algebra.var(n) if n.startswith("B") else rb.algebra.zero())
                                for n in lt.algebra.names})
    pi_h = DgaMorphism(lt, rh, {n: (rh.algebra.var(n) if n.startswith("h") else rh.algebra.zero())
                                for n in lt.algebra.names})
    return lt, pi_b, pi_h


def iter_monomials_upto(alg: GradedAlgebra, length: int) -> Iterator[Monomial]:
    """All normal monomials with total exponent <= length (small helper for tests)."""
    def rec(i, left, acc):
        if i == alg.nvars:
            m = tuple(acc)
            if not alg.is_killed(m):
                yield m
            return
        top = 1 if alg.odd[i] else left
        for e in range(0, min(top, left) + 1):
            yield from rec(i + 1, left - e, acc + [e])
    yield from rec(0, length, [])
