"""Free DG-modules over a coefficient DGA, maps between them, cones and homology.

A module element is a dict ``label -> GcaElement`` meaning sum c_g * g with
coefficients written on the left.  The differential satisfies
D(c g) = dc g + (-1)^{|c|} c D(g).  A map f of degree |f| satisfies
f(c g) = (-1)^{|f||c|} phi(c) f(g), where phi is the coefficient map
(identity unless the map changes rings).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg
from .errors import PreconditionError, ValidationError
from .gca import (Dga, DgaMorphism, GcaElement, GradedAlgebra, HomologyRow, _window, as_dga,
                  element_from_json, element_to_json, format_monomial)


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def _add_into(acc: dict, label: str, c: GcaElement) -> None:
    if not c:
        return
    v = acc.get(label)
    v = c if v is None else v + c
    if v:
        acc[label] = v
    else:
        acc.pop(label, None)


def _clean(elem: Mapping[str, GcaElement]) -> dict:
    return {k: v for k, v in elem.items() if v}


class FreeDgModule:
    """Finitely generated free module with a degree +1 differential.

    ``differential`` maps a source label to ``{target label: coefficient}``.
    Construction checks degrees and D^2 = 0 exactly over the ring.
    """

    def __init__(self, ring, generators: Iterable, differential: Mapping | None = None,
                 window: tuple[int, int] | None = None, check: bool = True):
        self.ring: Dga = as_dga(ring)
        alg = self.ring.algebra
        gens = []
        for g in generators:
            if isinstance(g, Mapping):
                g = (g["label"], g["degree"])
            label, deg = g
            gens.append((str(label), int(deg)))
        self.generators = tuple(gens)
        self.labels = tuple(l for l, _ in gens)
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError("generator labels must be unique")
        self.gdeg = dict(gens)
        self.window = None if window is None else _window(window)
        diff: dict[str, dict[str, GcaElement]] = {}
        for src, row in (differential or {}).items():
            if src not in self.gdeg:
                raise ValidationError(f"differential from unknown generator {src!r}")
            out = {}
            for tgt, c in row.items():
                if tgt not in self.gdeg:
                    raise ValidationError(f"differential to unknown generator {tgt!r}")
                if not isinstance(c, GcaElement):
                    c = alg.scalar(c)
                if c.algebra != alg:
                    raise ValidationError("coefficient over a different ring")
                if c:
                    want = self.gdeg[src] + 1 - self.gdeg[tgt]
                    if c.degrees() != {want}:
                        raise ValidationError(
                            f"coefficient {src}->{tgt} = {c} must have degree {want}")
                    out[tgt] = c
            if out:
                diff[src] = out
        self.diff = diff
        self._basis_cache: dict = {}
        self._dmat_cache: dict = {}
        if check:
            self.check_d_squared()

    # -- elements -----------------------------------------------------------
    @property
    def algebra(self) -> GradedAlgebra:
        return self.ring.algebra

    def gen(self, label: str) -> dict:
        return {label: self.algebra.one()}

    def D(self, elem: Mapping[str, GcaElement]) -> dict:
        out: dict = {}
        for g, c in elem.items():
            dc = self.ring.d(c)
            _add_into(out, g, dc)
            row = self.diff.get(g)
            if not row:
                continue
            for d, comp in c.homogeneous_components().items():
                cs = comp * _sign(d)
                for t, a in row.items():
                    _add_into(out, t, cs * a)
        return out

    def check_d_squared(self) -> None:
        for g in self.labels:
            dd = self.D(self.D(self.gen(g)))
            if dd:
                raise PreconditionError(f"D^2({g}) != 0: {format_module_element(dd)}",
                                        witness={"generator": g})

    # -- degreewise linear algebra -----------------------------------------
    def basis(self, n: int) -> list[tuple[str, tuple]]:
        hit = self._basis_cache.get(n)
        if hit is None:
            hit = [(g, m) for g, d in self.generators for m in self.algebra.basis(n - d)]
            self._basis_cache[n] = hit
        return hit

    def vector(self, elem: Mapping[str, GcaElement], n: int) -> list[Fraction]:
        idx = {b: i for i, b in enumerate(self.basis(n))}
        v = [Fraction(0)] * len(idx)
        for g, c in elem.items():
            for m, a in c.terms.items():
                key = (g, m)
                if key not in idx:
                    raise ValidationError(f"element has a component outside degree {n}")
                v[idx[key]] = a
        return v

    def element(self, vec: Sequence, n: int) -> dict:
        out: dict = {}
        for (g, m), a in zip(self.basis(n), vec):
            if a:
                _add_into(out, g, self.algebra.from_terms({m: a}))
        return out

    def d_matrix(self, n: int) -> list[list[Fraction]]:
        """Matrix of D from degree n to degree n+1 (rows index the target)."""
        hit = self._dmat_cache.get(n)
        if hit is not None:
            return hit
        src = self.basis(n)
        tgt = self.basis(n + 1)
        idx = {b: i for i, b in enumerate(tgt)}
        A = [[Fraction(0)] * len(src) for _ in tgt]
        for j, (g, m) in enumerate(src):
            img = self.D({g: self.algebra.from_terms({m: 1})})
            for t, c in img.items():
                for mm, a in c.terms.items():
                    A[idx[(t, mm)]][j] = a
        self._dmat_cache[n] = A
        return A

    def cycles(self, n: int) -> list[list[Fraction]]:
        dim = len(self.basis(n))
        return linalg.nullspace(self.d_matrix(n), dim)

    def boundaries(self, n: int) -> list[list[Fraction]]:
        dim = len(self.basis(n))
        prev = len(self.basis(n - 1))
        return [v for v in linalg.transpose(self.d_matrix(n - 1), dim, prev) if any(v)]

    def homology_degree(self, n: int) -> HomologyRow:
        dim = len(self.basis(n))
        if dim == 0:
            return HomologyRow(n, 0, [])
        reps = linalg.extend_basis(self.boundaries(n), self.cycles(n), dim)
        return HomologyRow(n, len(reps), [self.element(v, n) for v in reps])

    def homology(self, window=None) -> list[HomologyRow]:
        lo, hi = _window(window if window is not None else self.window)
        return [self.homology_degree(n) for n in range(lo, hi + 1)]

    # -- misc -----------------------------------------------------------------
    def __eq__(self, other) -> bool:
        return (isinstance(other, FreeDgModule) and self.ring.algebra == other.ring.algebra
                and self.generators == other.generators and self.diff == other.diff)

    def __repr__(self) -> str:
        return f"FreeDgModule({len(self.generators)} generators over {self.algebra!r})"

    def with_window(self, window) -> "FreeDgModule":
        return FreeDgModule(self.ring, self.generators, self.diff, window, check=False)

    def to_json(self) -> dict:
        diff = []
        for src in self.labels:
            for tgt, c in self.diff.get(src, {}).items():
                diff.append({"from": src, "to": tgt, "coeff": element_to_json(c)})
        out = {"ring": self.ring.to_json(),
               "generators": [{"label": l, "degree": d} for l, d in self.generators],
               "differential": diff}
        if self.window is not None:
            out["window"] = list(self.window)
        return out

    @classmethod
    def from_json(cls, doc: Mapping) -> "FreeDgModule":
        ring = Dga.from_json(doc["ring"])
        diff: dict = {}
        for e in doc.get("differential", []):
            c = element_from_json(ring.algebra, e["coeff"])
            row = diff.setdefault(e["from"], {})
            row[e["to"]] = row[e["to"]] + c if e["to"] in row else c
        w = doc.get("window")
        return cls(ring, [(g["label"], g["degree"]) for g in doc["generators"]], diff,
                   tuple(w) if w is not None else None)


def module_homology(m: FreeDgModule, window=None) -> list[HomologyRow]:
    return m.homology(window)


def format_module_element(elem: Mapping[str, GcaElement]) -> str:
    if not elem:
        return "0"
    parts = []
    for g, c in sorted(elem.items()):
        parts.append(f"({c})*{g}")
    return " + ".join(parts)


def module_element_to_json(elem: Mapping[str, GcaElement]) -> list:
    return [{"generator": g, "coeff": element_to_json(c)} for g, c in sorted(elem.items())]


# -- maps ------------------------------------------------------------------------

class ModuleMap:
    """Map of free modules given on generators: ``matrix[src][tgt] = coeff``."""

    def __init__(self, source: FreeDgModule, target: FreeDgModule, matrix: Mapping,
                 degree: int = 0, coeff_map: DgaMorphism | None = None):
        self.source = source
        self.target = target
        self.degree = int(degree)
        if coeff_map is not None and coeff_map.is_identity():
            coeff_map = None
        if coeff_map is None and source.algebra != target.algebra:
            raise ValidationError("maps between different rings need a coefficient map")
        if coeff_map is not None:
            if coeff_map.source.algebra != source.algebra or coeff_map.target.algebra != target.algebra:
                raise ValidationError("coefficient map does not match the module rings")
        self.coeff_map = coeff_map
        talg = target.algebra
        mat: dict = {}
        for src, row in matrix.items():
            if src not in source.gdeg:
                raise ValidationError(f"unknown source generator {src!r}")
            out = {}
            for tgt, c in row.items():
                if tgt not in target.gdeg:
                    raise ValidationError(f"unknown target generator {tgt!r}")
                if not isinstance(c, GcaElement):
                    c = talg.scalar(c)
                if c.algebra != talg:
                    raise ValidationError("map coefficient over the wrong ring")
                if c:
                    want = source.gdeg[src] + self.degree - target.gdeg[tgt]
                    if c.degrees() != {want}:
                        raise ValidationError(
                            f"map entry {src}->{tgt} = {c} must have degree {want}")
                    out[tgt] = c
            if out:
                mat[src] = out
        self.matrix = mat

    def phi(self, c: GcaElement) -> GcaElement:
        return c if self.coeff_map is None else self.coeff_map.apply(c)

    def apply(self, elem: Mapping[str, GcaElement]) -> dict:
        out: dict = {}
        for g, c in elem.items():
            row = self.matrix.get(g)
            if not row:
                continue
            for d, comp in c.homogeneous_components().items():
                pc = self.phi(comp) * _sign(self.degree * d)
                for t, a in row.items():
                    _add_into(out, t, pc * a)
        return out

    __call__ = apply

    def on_generator(self, g: str) -> dict:
        return dict(self.matrix.get(g, {}))

    def __eq__(self, other) -> bool:
        return (isinstance(other, ModuleMap) and self.degree == other.degree
                and self.source == other.source and self.target == other.target
                and self.matrix == other.matrix)

    def is_zero(self) -> bool:
        return not self.matrix

    def _like(self, matrix, degree=None) -> "ModuleMap":
        return ModuleMap(self.source, self.target, matrix,
                         self.degree if degree is None else degree, self.coeff_map)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        if other.degree != self.degree or other.source != self.source or other.target != self.target:
            raise ValidationError("can only add parallel maps of equal degree")
        mat = {g: dict(r) for g, r in self.matrix.items()}
        for g, row in other.matrix.items():
            acc = mat.setdefault(g, {})
            for t, c in row.items():
                _add_into(acc, t, c)
        return self._like({g: r for g, r in mat.items() if r})

    def __neg__(self) -> "ModuleMap":
        return self.scale(-1)

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        return self + (-other)

    def scale(self, c) -> "ModuleMap":
        return self._like({g: {t: a * c for t, a in r.items()} for g, r in self.matrix.items()})

    def compose(self, first: "ModuleMap") -> "ModuleMap":
        """self o first (first applied first)."""
        if first.target != self.source:
            raise ValidationError("composition endpoints do not match")
        if first.coeff_map is not None or self.coeff_map is not None:
            raise ValidationError("composition only for maps over a fixed ring")
        mat = {g: self.apply(first.on_generator(g)) for g in first.source.labels}
        return ModuleMap(first.source, self.target, {g: r for g, r in mat.items() if r},
                         self.degree + first.degree)

    def differential(self) -> "ModuleMap":
        """d f = D_B f - (-1)^{|f|} f D_A, a map of degree |f| + 1."""
        if self.coeff_map is not None:
            raise ValidationError("differential of a ring-changing map is not defined here")
        s = _sign(self.degree)
        mat = {}
        for g in self.source.labels:
            left = self.target.D(self.on_generator(g))
            right = self.apply(self.source.D(self.source.gen(g)))
            for t, c in right.items():
                _add_into(left, t, c * (-s))
            if left:
                mat[g] = left
        return ModuleMap(self.source, self.target, mat, self.degree + 1)

    def chain_defect(self) -> dict:
        """{generator: D_B f(g) - f(D_A g)} for a degree-0 map; empty iff chain map."""
        out = {}
        for g in self.source.labels:
            left = self.target.D(self.on_generator(g))
            for t, c in self.apply(self.source.D(self.source.gen(g))).items():
                _add_into(left, t, -c)
            if left:
                out[g] = left
        return out

    def is_chain_map(self) -> bool:
        return self.degree == 0 and not self.chain_defect()

    def matrix_in_degree(self, n: int) -> list[list[Fraction]]:
        src = self.source.basis(n)
        tgt = self.target.basis(n + self.degree)
        idx = {b: i for i, b in enumerate(tgt)}
        A = [[Fraction(0)] * len(src) for _ in tgt]
        salg = self.source.algebra
        for j, (g, m) in enumerate(src):
            img = self.apply({g: salg.from_terms({m: 1})})
            for t, c in img.items():
                for mm, a in c.terms.items():
                    A[idx[(t, mm)]][j] = a
        return A

    def to_json(self) -> list:
        return [{"from": g, "to": t, "coeff": element_to_json(c)}
                for g in self.source.labels for t, c in self.matrix.get(g, {}).items()]


def identity_map(m: FreeDgModule) -> ModuleMap:
    one = m.algebra.one()
    return ModuleMap(m, m, {g: {g: one} for g in m.labels})


def zero_map(a: FreeDgModule, b: FreeDgModule, degree: int = 0) -> ModuleMap:
    return ModuleMap(a, b, {}, degree)


def direct_sum(a: FreeDgModule, b: FreeDgModule, tags: tuple[str, str] = ("", "")) -> FreeDgModule:
    if a.algebra != b.algebra:
        raise ValidationError("direct sum over different rings")
    ra = {l: tags[0] + l for l in a.labels}
    rb = {l: tags[1] + l for l in b.labels}
    gens = [(ra[l], d) for l, d in a.generators] + [(rb[l], d) for l, d in b.generators]
    diff = {ra[s]: {ra[t]: c for t, c in r.items()} for s, r in a.diff.items()}
    diff.update({rb[s]: {rb[t]: c for t, c in r.items()} for s, r in b.diff.items()})
    return FreeDgModule(a.ring, gens, diff, a.window)


def shift_label(label: str) -> str:
    return f"{label}[1]"


def cone(f: ModuleMap) -> FreeDgModule:
    """Mapping cone B + A[1] of a degree-0 chain map f: A -> B.

    D(s a) = -s(D_A a) + f(a) extended with the Koszul rule, so on a
    generator with D_A a_i = sum c_ij a_j:
    D(s a_i) = -sum (-1)^{|c_ij|} c_ij s a_j + sum f_ik b_k.
    """
    if f.degree != 0:
        raise ValidationError("cone needs a degree-0 map")
    if f.coeff_map is not None:
        raise ValidationError("cone needs a map over a fixed ring")
    defect = f.chain_defect()
    if defect:
        g = next(iter(defect))
        raise PreconditionError(f"not a chain map at generator {g}", witness={"generator": g})
    A, B = f.source, f.target
    clash = set(shift_label(l) for l in A.labels) & set(B.labels)
    if clash:
        raise ValidationError(f"shifted labels collide with target labels: {sorted(clash)}")
    gens = [(l, d) for l, d in B.generators] + [(shift_label(l), d - 1) for l, d in A.generators]
    diff: dict = {s: dict(r) for s, r in B.diff.items()}
    for a in A.labels:
        row: dict = {}
        for t, c in A.diff.get(a, {}).items():
            for d, comp in c.homogeneous_components().items():
                _add_into(row, shift_label(t), comp * (-_sign(d)))
        for t, c in f.on_generator(a).items():
            _add_into(row, t, c)
        if row:
            diff[shift_label(a)] = row
    win = A.window or B.window
    return FreeDgModule(A.ring, gens, diff, win)


def base_change(m: FreeDgModule, phi: DgaMorphism) -> FreeDgModule:
    if phi.source.algebra != m.algebra:
        raise ValidationError("coefficient map source does not match the module ring")
    diff = {s: {t: phi.apply(c) for t, c in r.items()} for s, r in m.diff.items()}
    return FreeDgModule(phi.target, m.generators, diff, m.window)


def base_change_map(f: ModuleMap, phi: DgaMorphism) -> ModuleMap:
    if f.coeff_map is not None:
        raise ValidationError("base change of a ring-changing map")
    src = base_change(f.source, phi)
    tgt = base_change(f.target, phi)
    return ModuleMap(src, tgt, {g: {t: phi.apply(c) for t, c in r.items()}
                                for g, r in f.matrix.items()}, f.degree)


def base_change_comparison(m: FreeDgModule, phi: DgaMorphism) -> ModuleMap:
    """The canonical degree-0 map m -> base_change(m, phi), identity on generators."""
    tgt = base_change(m, phi)
    one = tgt.algebra.one()
    return ModuleMap(m, tgt, {g: {g: one} for g in m.labels}, 0, phi)


@dataclass
class QuasiIsoRow:
    degree: int
    source_dim: int
    target_dim: int
    rank: int

    @property
    def iso(self) -> bool:
        return self.source_dim == self.target_dim == self.rank


@dataclass
class QuasiIsoReport:
    rows: list = field(default_factory=list)
    window: tuple = (0, 0)

    @property
    def passed(self) -> bool:
        return all(r.iso for r in self.rows)

    def first_failure(self):
        return next((r.degree for r in self.rows if not r.iso), None)


def induced_rank(f: ModuleMap, n: int) -> tuple[int, int, int]:
    """(dim H^n(A), dim H^{n+|f|}(B), rank of the induced map)."""
    A, B = f.source, f.target
    hA = A.homology_degree(n)
    m = n + f.degree
    dimB = len(B.basis(m))
    bd = B.boundaries(m)
    hB = B.homology_degree(m)
    if hA.dim == 0 or dimB == 0:
        return hA.dim, hB.dim, 0
    M = f.matrix_in_degree(n)
    imgs = []
    for rep in hA.basis:
        v = A.vector(rep, n)
        imgs.append(linalg.matvec(M, v))
    r = linalg.rank(bd + imgs, dimB) - linalg.rank(bd, dimB) if bd else linalg.rank(imgs, dimB)
    return hA.dim, hB.dim, r


def quasi_iso_check(f: ModuleMap, window=None) -> QuasiIsoReport:
    """Degreewise bijectivity of H(f); only certified inside the window."""
    if f.degree != 0:
        raise ValidationError("quasi-isomorphism check needs a degree-0 map")
    defect = f.chain_defect()
    if defect:
        raise PreconditionError("not a chain map", witness={"generator": next(iter(defect))})
    lo, hi = _window(window if window is not None else (f.source.window or f.target.window))
    rows = []
    for n in range(lo, hi + 1):
        a, b, r = induced_rank(f, n)
        rows.append(QuasiIsoRow(n, a, b, r))
    return QuasiIsoReport(rows, (lo, hi))


# -- DG-nerve simplices -------------------------------------------------------

@dataclass
class NerveReport:
    passed: bool
    failing: tuple | None = None
    detail: str = ""


def _subsets(n: int):
    from itertools import combinations
    for size in range(2, n + 2):
        for I in combinations(range(n + 1), size):
            yield I


def nerve_rhs(sigma: Mapping[tuple, ModuleMap], I: tuple) -> ModuleMap | None:
    """sum_{0<l<mu} (-1)^{mu-l} (sigma_{I - j_l} - sigma_{I>=j_l} o sigma_{I<=j_l})."""
    mu = len(I) - 1
    out = None
    for l in range(1, mu):
        s = _sign(mu - l)
        drop = I[:l] + I[l + 1:]
        term = sigma[drop] - sigma[I[l:]].compose(sigma[I[:l + 1]])
        term = term.scale(s)
        out = term if out is None else out + term
    return out


def verify_dg_nerve_simplex(objects: Sequence[FreeDgModule], sigma: Mapping[tuple, ModuleMap],
                            convention: str = "nerve") -> NerveReport:
    """Check the DG-nerve identity for every I with |I| >= 2.

    sigma_I : X_{j_0} -> X_{j_mu} has cochain degree 1 - mu.  With the
    default convention the left side is the mapping-complex differential
    D sigma - (-1)^{1-mu} sigma D; ``convention="flow"`` (the flow-simplex
    form) uses the sign (-1)^mu on the second term instead.
    """
    if convention not in ("nerve", "flow"):
        raise ValidationError(f"unknown convention {convention!r}")
    n = len(objects) - 1
    for I in _subsets(n):
        if I not in sigma:
            raise ValidationError(f"missing simplex component {I}")
        s = sigma[I]
        mu = len(I) - 1
        if s.source != objects[I[0]] or s.target != objects[I[-1]]:
            raise ValidationError(f"component {I} has inconsistent endpoints")
        if s.degree != 1 - mu:
            raise ValidationError(f"component {I} has degree {s.degree}, expected {1 - mu}")
    for I in _subsets(n):
        s = sigma[I]
        mu = len(I) - 1
        lhs = s.differential()
        if convention == "flow":
            mat = {}
            for g in s.source.labels:
                left = s.target.D(s.on_generator(g))
                for t, c in s.apply(s.source.D(s.source.gen(g))).items():
                    _add_into(left, t, c * (-_sign(mu)))
                if left:
                    mat[g] = left
            lhs = ModuleMap(s.source, s.target, mat, s.degree + 1)
        rhs = nerve_rhs(sigma, I)
        if rhs is None:
            ok = lhs.is_zero()
        else:
            ok = (lhs - rhs).is_zero()
        if not ok:
            return NerveReport(False, I, f"identity fails at I={I}")
    return NerveReport(True)
