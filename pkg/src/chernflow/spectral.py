"""Spectral sequence of the truncation filtration on a module over a coefficient ring.

For a free module over S with all variables of negative degree, the
filtration degree of a basis element c*g is p = -deg(c).  Pages are computed
from the classical subspaces

    Z_s^p = F^p  intersected with  d^{-1} F^{p+s},
    E_s^p = Z_s^p / (Z_{s-1}^{p+1} + d Z_{s-1}^{p-s+1}),

one total degree at a time.  Pages are *labelled* one above the index s used
in these formulas: the page called E_1 here is gr F with d induced by the
coefficient-free part of the differential, and the page called E_r carries
d_r raising filtration by r - 1.  With this labelling a module extended from
a scalar complex degenerates at E_2, and a one-variable module with
deg(hbar) = 2 - l first differs from gr F at d_{l-1}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import linalg
from .dgmodule import FreeDgModule, ModuleMap, base_change
from .errors import PreconditionError, ValidationError
from .gca import Dga, _window, polynomial_ring, setting_to_zero


def _unit(i: int, dim: int) -> list[Fraction]:
    v = [Fraction(0)] * dim
    v[i] = Fraction(1)
    return v


@dataclass
class _Cell:
    Z: list
    den: list
    reps: list
    span: linalg.Span | None = None

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coords(self, w) -> list | None:
        """Coordinates of w in the quotient basis, or None if w is not in Z."""
        if self.span is None:
            self.span = linalg.Span(self.den + self.reps, len(w))
        if not self.den and not self.reps:
            return [] if not any(w) else None
        c = self.span.coords(w)
        if c is None:
            return None
        return c[len(self.den):]


class FilteredComplex:
    """A FreeDgModule with its truncation filtration, restricted to a window."""

    def __init__(self, module: FreeDgModule, window=None):
        ring = module.ring
        alg = ring.algebra
        if not ring.trivial:
            raise ValidationError("truncation filtration needs a coefficient ring with zero differential")
        for v in alg.variables:
            if v.degree >= 0:
                raise ValidationError(
                    f"coefficient variable {v.name} has degree {v.degree}; all must be negative")
        self.module = module
        self.window = _window(window if window is not None else module.window)
        self._filt: dict = {}
        self._Z: dict = {}
        self._cells: dict = {}
        self._dmat: dict = {}

    def filtration(self, n: int) -> list[int]:
        hit = self._filt.get(n)
        if hit is None:
            alg = self.module.algebra
            hit = [-alg.mono_degree(m) for _, m in self.module.basis(n)]
            self._filt[n] = hit
        return hit

    def dim(self, n: int) -> int:
        return len(self.module.basis(n))

    def pmax(self, n: int) -> int:
        f = self.filtration(n)
        return max(f) if f else -1

    def F(self, p: int, n: int) -> list[list[Fraction]]:
        f = self.filtration(n)
        dim = len(f)
        return [_unit(i, dim) for i in range(dim) if f[i] >= p]

    def D(self, n: int):
        hit = self._dmat.get(n)
        if hit is None:
            hit = self.module.d_matrix(n)
            self._dmat[n] = hit
        return hit

    def Z(self, n: int, p: int, s: int) -> list[list[Fraction]]:
        # p may be negative: F^p is then everything but the target F^{p+s} is not
        key = (n, p, s)
        hit = self._Z.get(key)
        if hit is not None:
            return hit
        f = self.filtration(n)
        dim = len(f)
        if p > self.pmax(n):
            out = []
        elif s <= 0:
            out = self.F(p, n)
        else:
            cols = [i for i in range(dim) if f[i] >= p]
            ft = self.filtration(n + 1)
            D = self.D(n)
            rows = [[D[r][c] for c in cols] for r in range(len(ft)) if ft[r] < p + s]
            rows = [r for r in rows if any(r)]
            if not rows:
                out = self.F(p, n)
            else:
                out = []
                for v in linalg.nullspace(rows, len(cols)):
                    w = [Fraction(0)] * dim
                    for c, x in zip(cols, v):
                        w[c] = x
                    out.append(w)
        self._Z[key] = out
        return out

    def cell(self, n: int, p: int, s: int) -> _Cell:
        key = (n, p, s)
        hit = self._cells.get(key)
        if hit is not None:
            return hit
        dim = self.dim(n)
        Z = self.Z(n, p, s)
        if p < 0 or not Z:
            c = _Cell(Z, [], []) if p >= 0 else _Cell([], [], [])
            self._cells[key] = c
            return c
        den = list(self.Z(n, p + 1, s - 1))
        src = self.Z(n - 1, p - s + 1, s - 1) if p - s + 1 <= self.pmax(n - 1) else []
        if src:
            D = self.D(n - 1)
            den += [v for v in (linalg.matvec(D, x) for x in src) if any(v)]
        den_basis = linalg.extend_basis([], den, dim)
        reps = linalg.extend_basis(den_basis, Z, dim)
        c = _Cell(Z, den_basis, reps)
        self._cells[key] = c
        return c

    def leading(self, vec, n: int, p: int) -> list[Fraction]:
        f = self.filtration(n)
        return [x if f[i] == p else Fraction(0) for i, x in enumerate(vec)]

    # E_infinity straight from kernel and image
    def einf_dims(self, n: int) -> dict[int, int]:
        dim = self.dim(n)
        f = self.filtration(n)
        Dn = self.D(n)
        Dp = self.D(n - 1)
        prev_f = self.filtration(n - 1)
        out = {}
        pm = self.pmax(n)

        def ker_dim(p):
            cols = [i for i in range(dim) if f[i] >= p]
            if not cols:
                return 0
            rows = [[Dn[r][c] for c in cols] for r in range(len(Dn))]
            return len(cols) - linalg.rank(rows, len(cols)) if rows else len(cols)

        def im_dim(p):
            # dim of F^p intersected with the image of d from degree n-1
            m = len(prev_f)
            if m == 0:
                return 0
            low = [r for r in range(dim) if f[r] < p]
            if low:
                rows = [Dp[r] for r in low]
                K = linalg.nullspace(rows, m)
            else:
                K = [_unit(i, m) for i in range(m)]
            return linalg.rank([linalg.matvec(Dp, v) for v in K], dim) if K else 0

        for p in range(0, pm + 1):
            e = ker_dim(p) - ker_dim(p + 1) - (im_dim(p) - im_dim(p + 1))
            out[p] = e
        return out


def truncation_filtration(m: FreeDgModule, window=None) -> FilteredComplex:
    return FilteredComplex(m, window)


@dataclass
class SpectralPage:
    r: int
    dims: dict = field(default_factory=dict)      # (p, q) -> dim
    d: dict = field(default_factory=dict)         # (p, q) -> matrix into (p + r - 1, q - r + 2)
    reps: dict = field(default_factory=dict)      # (p, q) -> list of vectors in degree p + q

    @property
    def shift(self) -> int:
        return self.r - 1

    def target(self, p: int, q: int) -> tuple[int, int]:
        return p + self.shift, q + 1 - self.shift

    def differential_is_zero(self) -> bool:
        return all(not any(any(row) for row in M) for M in self.d.values())

    def total_dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (p, q), v in self.dims.items():
            out[p + q] = out.get(p + q, 0) + v
        return out

    def to_json(self) -> dict:
        return {"r": self.r,
                "dims": [{"p": p, "q": q, "dim": v} for (p, q), v in sorted(self.dims.items()) if v],
                "d": [{"p": p, "q": q, "matrix": [[str(x) for x in row] for row in M]}
                      for (p, q), M in sorted(self.d.items()) if any(any(row) for row in M)]}


@dataclass
class PageLadder:
    pages: list
    first_nonzero: int | None
    stable_page: int | None
    einf: dict
    homology: dict

    def page(self, r: int) -> SpectralPage:
        return self.pages[r - 1]

    def converges(self) -> bool:
        tot: dict[int, int] = {}
        for (p, q), v in self.einf.items():
            tot[p + q] = tot.get(p + q, 0) + v
        return all(tot.get(n, 0) == h for n, h in self.homology.items())

    def to_json(self) -> dict:
        return {"pages": [pg.to_json() for pg in self.pages],
                "first_nonzero_differential": self.first_nonzero,
                "stable_page": self.stable_page,
                "e_infinity": [{"p": p, "q": q, "dim": v}
                               for (p, q), v in sorted(self.einf.items()) if v],
                "homology": [{"degree": n, "dim": h} for n, h in sorted(self.homology.items())]}


def _page(fc: FilteredComplex, r: int, degrees) -> SpectralPage:
    s = r - 1
    page = SpectralPage(r)
    for n in degrees:
        for p in range(0, fc.pmax(n) + 1):
            c = fc.cell(n, p, s)
            if c.dim == 0:
                continue
            q = n - p
            page.dims[(p, q)] = c.dim
            page.reps[(p, q)] = c.reps
            tgt = fc.cell(n + 1, p + s, s)
            D = fc.D(n)
            M = [[Fraction(0)] * c.dim for _ in range(tgt.dim)]
            for j, x in enumerate(c.reps):
                co = tgt.coords(linalg.matvec(D, x))
                if co is None:
                    raise PreconditionError(f"internal: d of a page cycle left Z at {(p, q)}")
                for i, a in enumerate(co):
                    M[i][j] = a
            page.d[(p, q)] = M
    return page


def compute_pages(fc: FilteredComplex, r_max: int) -> PageLadder:
    """Pages E_1..E_{r_max} over the window, with E_infinity and homology."""
    if r_max < 1:
        raise ValidationError("r_max must be at least 1")
    lo, hi = fc.window
    degrees = range(lo, hi + 1)
    pages = [_page(fc, r, degrees) for r in range(1, r_max + 1)]
    einf = {}
    hom = {}
    for n in degrees:
        for p, v in fc.einf_dims(n).items():
            if v:
                einf[(p, n - p)] = v
        hom[n] = fc.module.homology_degree(n).dim
    first = next((pg.r for pg in pages if not pg.differential_is_zero()), None)
    stable = None
    for pg in pages:
        if {k: v for k, v in pg.dims.items() if v} == einf:
            stable = pg.r
            break
    return PageLadder(pages, first, stable, einf, hom)


def check_page_consistency(ladder: PageLadder) -> list[str]:
    """d_r o d_r = 0 and E_{r+1} = H(E_r, d_r) at every computed bidegree."""
    problems = []
    for a, b in zip(ladder.pages, ladder.pages[1:]):
        for (p, q), M in a.d.items():
            t = a.target(p, q)
            M2 = a.d.get(t)
            if M2 is not None and M:
                prod = linalg.matmul(M2, M, len(M), len(M[0]) if M else 0)
                if any(any(r) for r in prod):
                    problems.append(f"d_{a.r}^2 != 0 at {(p, q)}")
        keys = set(a.dims) | set(b.dims)
        for (p, q) in keys:
            dim = a.dims.get((p, q), 0)
            out = a.d.get((p, q))
            rk_out = linalg.rank(out, dim) if out and dim else 0
            src = (p - a.shift, q - 1 + a.shift)
            inc = a.d.get(src)
            rk_in = linalg.rank(inc, a.dims.get(src, 0)) if inc and a.dims.get(src, 0) else 0
            if dim - rk_out - rk_in != b.dims.get((p, q), 0):
                # the edge of the window may miss incoming differentials
                n = p + q
                lo, hi = _span_of(ladder)
                if lo < n < hi:
                    problems.append(f"E_{b.r} mismatch at {(p, q)}")
    return problems


def _span_of(ladder: PageLadder) -> tuple[int, int]:
    ns = list(ladder.homology)
    return min(ns), max(ns)


# -- closed-form E_2 for one-variable rings -------------------------------------

def _single_variable(m: FreeDgModule) -> tuple[str, int]:
    alg = m.algebra
    if alg.nvars != 1 or alg.killed:
        raise ValidationError("closed form needs a free one-variable coefficient ring; "
                              "use the generic engine")
    v = alg.variables[0]
    if v.degree >= 0:
        raise ValidationError("the coefficient variable must have negative degree")
    return v.name, v.degree


def reduced_complex(m: FreeDgModule) -> FreeDgModule:
    """Base change along the augmentation (all coefficient variables to 0)."""
    target = Dga(polynomial_ring([]))
    phi = setting_to_zero(m.ring, target, m.algebra.names)
    return base_change(m, phi)


def e2_closed_form(m: FreeDgModule, window=None) -> dict:
    """dim E_2^{p,q} = dim S^{-p} * dim H^{2p+q}(Ybar), Ybar the augmented complex."""
    name, deg = _single_variable(m)
    step = -deg
    lo, hi = _window(window if window is not None else m.window)
    Y = reduced_complex(m)
    hcache: dict[int, int] = {}

    def h(k):
        if k not in hcache:
            hcache[k] = Y.homology_degree(k).dim
        return hcache[k]

    out = {}
    gdeg = [d for _, d in m.generators]
    if not gdeg:
        return out
    for n in range(lo, hi + 1):
        pmax = max(gdeg) - n
        for p in range(0, pmax + 1, step):
            q = n - p
            v = h(2 * p + q)
            if v:
                out[(p, q)] = v
    return out


# -- first differential versus a bracket operator -------------------------------

@dataclass
class FirstDifferentialReport:
    passed: bool
    ell: int
    vanishing_ok: bool
    nonvanishing_pages: list
    blocks: list
    mismatches: list

    @property
    def multiplicity(self) -> int:
        return sum(1 for b in self.blocks if b["dim"])

    def to_json(self) -> dict:
        return {"passed": self.passed, "ell": self.ell, "vanishing_ok": self.vanishing_ok,
                "nonvanishing_pages": self.nonvanishing_pages, "multiplicity": self.multiplicity,
                "blocks": self.blocks, "mismatches": self.mismatches}


def first_bulk_differential(m: FreeDgModule, bracket: Mapping, ell: int,
                            window=None) -> FirstDifferentialReport:
    """Check d_r = 0 for 2 <= r <= l-2 and d_{l-1}[hbar^k y] = [hbar^{k+1} B y].

    ``bracket`` is a chain-level operator on the reduced complex, given as
    ``{source label: {target label: rational}}`` of degree l - 1.  The
    prediction carries the Koszul sign (-1)^{k |hbar|} of moving the
    differential past hbar^k.  One block per power of hbar is compared.
    """
    if ell < 3:
        raise ValidationError("ell must be at least 3")
    name, deg = _single_variable(m)
    if deg != 2 - ell:
        raise ValidationError(f"coefficient variable has degree {deg}, expected {2 - ell}")
    gdeg = m.gdeg
    B: dict = {}
    for src, row in bracket.items():
        if src not in gdeg:
            raise ValidationError(f"bracket matrix mentions unknown generator {src!r}")
        for tgt, c in row.items():
            if tgt not in gdeg:
                raise ValidationError(f"bracket matrix mentions unknown generator {tgt!r}")
            c = Fraction(c)
            if c and gdeg[tgt] != gdeg[src] + ell - 1:
                raise ValidationError(
                    f"bracket entry {src}->{tgt} does not have degree {ell - 1}")
            if c:
                B.setdefault(src, {})[tgt] = c
    fc = FilteredComplex(m, window)
    lo, hi = fc.window
    degrees = range(lo, hi + 1)
    s = ell - 2
    bad_pages = []
    for r in range(2, ell - 1):
        if not _page(fc, r, degrees).differential_is_zero():
            bad_pages.append(r)
    page = _page(fc, ell - 1, degrees)
    alg = m.algebra
    step = -deg
    blocks = []
    mismatches = []
    for (p, q), M in sorted(page.d.items()):
        n = p + q
        if p % step:
            mismatches.append({"p": p, "q": q, "reason": "page entry off the hbar lattice"})
            continue
        k = p // step
        sign = -1 if (k * deg) % 2 else 1
        tgt = fc.cell(n + 1, p + s, s)
        basis = m.basis(n)
        tbasis = m.basis(n + 1)
        tidx = {b: i for i, b in enumerate(tbasis)}
        mono = alg.basis(-(p + step))
        P = [[Fraction(0)] * len(page.reps[(p, q)]) for _ in range(tgt.dim)]
        ok = True
        for j, x in enumerate(page.reps[(p, q)]):
            w = [Fraction(0)] * len(tbasis)
            for i, a in enumerate(fc.leading(x, n, p)):
                if not a:
                    continue
                g, _ = basis[i]
                if not mono:        # hbar^{k+1} = 0 for odd hbar
                    continue
                for t, c in B.get(g, {}).items():
                    w[tidx[(t, mono[0])]] += sign * a * c
            co = tgt.coords(w)
            if co is None:
                ok = False
                mismatches.append({"p": p, "q": q, "column": j,
                                   "reason": "predicted class is not a page cycle"})
                continue
            for i, a in enumerate(co):
                P[i][j] = a
        equal = ok and P == M
        if ok and not equal:
            mismatches.append({"p": p, "q": q, "reason": "matrix differs"})
        blocks.append({"p": p, "q": q, "k": k, "dim": len(page.reps[(p, q)]),
                       "target_dim": tgt.dim, "equal": equal})
    passed = not bad_pages and not mismatches
    return FirstDifferentialReport(passed, ell, not bad_pages, bad_pages, blocks, mismatches)


# -- maps of spectral sequences --------------------------------------------------

@dataclass
class PageMapReport:
    matrices: dict          # r -> {(p, q): matrix}
    natural: bool
    surjective_e2: bool
    failures: list


def page_morphism(f: ModuleMap, r_max: int = 3, window=None) -> PageMapReport:
    """Induced maps E_r(A) -> E_r(B) for a filtration-preserving chain map."""
    if f.degree != 0:
        raise ValidationError("page morphism needs a degree-0 map")
    if f.chain_defect():
        raise PreconditionError("not a chain map")
    for g, row in f.matrix.items():
        for t, c in row.items():
            if any(d > 0 for d in c.degrees()):
                raise ValidationError(f"map entry {g}->{t} lowers the filtration")
    A = FilteredComplex(f.source, window)
    B = FilteredComplex(f.target, A.window)
    lo, hi = A.window
    fmat = {n: f.matrix_in_degree(n) for n in range(lo, hi + 2)}

    def induced(n, p, s):
        ca = A.cell(n, p, s)
        cb = B.cell(n, p, s)
        M = [[Fraction(0)] * ca.dim for _ in range(cb.dim)]
        for j, x in enumerate(ca.reps):
            co = cb.coords(linalg.matvec(fmat[n], x))
            if co is None:
                raise PreconditionError(f"map does not respect the filtration at {(p, n - p)}")
            for i, a in enumerate(co):
                M[i][j] = a
        return M

    mats: dict = {}
    failures = []
    surj = True
    for r in range(1, r_max + 1):
        s = r - 1
        pa = _page(A, r, range(lo, hi + 1))
        pb = _page(B, r, range(lo, hi + 1))
        mats[r] = {}
        for n in range(lo, hi + 1):
            for p in range(0, max(A.pmax(n), B.pmax(n)) + 1):
                q = n - p
                M = induced(n, p, s)
                da = A.cell(n, p, s).dim
                db = B.cell(n, p, s).dim
                if da or db:
                    mats[r][(p, q)] = M
                if r == 2 and db and (not da or linalg.rank(M, da) < db):
                    surj = False
                if not da or n + 1 > hi + 1:
                    continue
                # naturality on this bidegree: d_B o F = F o d_A
                ta = A.cell(n + 1, p + s, s).dim
                tb = B.cell(n + 1, p + s, s).dim
                if not tb:
                    continue
                N = induced(n + 1, p + s, s)
                dA = pa.d.get((p, q)) or [[Fraction(0)] * da for _ in range(ta)]
                dB = pb.d.get((p, q)) or [[Fraction(0)] * db for _ in range(tb)]
                lhs = linalg.matmul(dB, M, db, da) if db else [[Fraction(0)] * da for _ in range(tb)]
                rhs = linalg.matmul(N, dA, ta, da) if ta else [[Fraction(0)] * da for _ in range(tb)]
                if lhs != rhs:
                    failures.append({"r": r, "p": p, "q": q})
    return PageMapReport(mats, not failures, surj, failures)
