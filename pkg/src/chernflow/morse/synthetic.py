"""Test support: random instances that satisfy the coherence identities by construction.

Every generator here solves the relevant linear system and then checks its
answer, so it is the oracle for the derived examples in the test suite.  The
builders in the rest of the package never import this module.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Mapping

from .. import linalg
from ..dgmodule import FreeDgModule, ModuleMap, verify_dg_nerve_simplex
from ..gca import GcaElement, GradedAlgebra, chern_bulk_ring, interpolating_projections, polynomial_ring
from .bulk import (_length_vectors, _spread, _weight, b_words, identity_index, identity_terms,
                   plain_words, required_entries)
from .interpolate import interpolating_differential, interpolating_ells
from .simplex import face_table, faces_of
from .tables import CountTables, FloerSkeleton, MorseModel, empty_word, entry_allowed
from .twisted import ch_integral_table, ordered


def _combo(rng: random.Random, basis, span: int = 2, nonzero: bool = True):
    if not basis:
        return None
    n = len(basis[0])
    for _ in range(20):
        coeffs = [rng.randint(-span, span) for _ in basis]
        v = [sum((c * b[i] for c, b in zip(coeffs, basis)), Fraction(0)) for i in range(n)]
        if any(v) or not nonzero:
            return v
    return list(basis[0])


def _integral(v):
    L = 1
    for x in v:
        L = lcm(L, Fraction(x).denominator)
    return [int(Fraction(x) * L) for x in v]


def random_chain_complex(rng: random.Random, degrees: Mapping[str, int], density: float = 0.7) -> dict:
    """Random integer differential {(src, tgt): c} with d^2 = 0."""
    by_deg: dict = {}
    for g, d in sorted(degrees.items()):
        by_deg.setdefault(d, []).append(g)
    out = {}
    prev = None          # matrix of d into the current degree: rows = current gens
    for d in sorted(by_deg):
        src, tgt = by_deg[d], by_deg.get(d + 1)
        if not tgt:
            prev = None
            continue
        if prev is None:
            basis = [[Fraction(int(i == j)) for j in range(len(src))] for i in range(len(src))]
        else:
            basis = linalg.nullspace(linalg.transpose(prev, len(src), len(prev[0])), len(src)) \
                if prev and prev[0] else [[Fraction(int(i == j)) for j in range(len(src))]
                                          for i in range(len(src))]
        mat = []
        for _ in tgt:
            row = _combo(rng, basis, 1, nonzero=False) if basis and rng.random() < density else None
            mat.append(_integral(row) if row else [0] * len(src))
        for i, t in enumerate(tgt):
            for j, s in enumerate(src):
                if mat[i][j]:
                    out[(s, t)] = mat[i][j]
        prev = mat
    return out


# -- bulk count tables ---------------------------------------------------------------

@dataclass
class BulkInstance:
    fs: FloerSkeleton
    m: MorseModel
    ct: CountTables


def random_morse_model(rng: random.Random, ells: Mapping[int, int], nletters: int = 2,
                       nb: int = 1) -> MorseModel:
    points, counts, cocycles = {}, {}, {}
    for r, l in sorted(ells.items()):
        A = [f"a{r}_{i}" for i in range(nletters)]
        B = [f"b{r}_{j}" for j in range(nb)]
        points.update({a: l for a in A})
        points.update({b: l + 1 for b in B})
        while True:
            M = [[rng.randint(-2, 2) for _ in A] for _ in B]
            ker = linalg.nullspace(M, len(A))
            u = _combo(rng, ker)
            if u is not None and all(u):
                break
        for j, b in enumerate(B):
            for i, a in enumerate(A):
                if M[j][i]:
                    counts[(b, a)] = M[j][i]
        cocycles[r] = {a: c for a, c in zip(A, _integral(u))}
    return MorseModel(points, counts, cocycles)


def _floer_generators(rng, ngens, spread) -> dict:
    degs = [0, spread] + [rng.randint(0, spread) for _ in range(ngens - 2)]
    return {f"y{i}": d for i, d in enumerate(sorted(degs))}


def solve_bulk_tables(rng: random.Random, fs: FloerSkeleton, m: MorseModel, f0: Mapping,
                      span: int = 2) -> CountTables | None:
    """Solve the boundary identity length by length.

    At a fixed length vector the identity is linear in the new plain and
    one-B entries; take a particular solution plus a random kernel element,
    then rescale entries of length L by lam^L to clear denominators.
    """
    nc = len(fs.rhos)
    e = empty_word(nc)
    known = {(y, x, e): Fraction(c) for (y, x), c in f0.items()}
    spread = _spread(fs)
    vectors = sorted((q for q in _length_vectors(fs, spread - 1) if sum(q)), key=lambda q: (sum(q), q))
    for qs in vectors:
        unknowns = []
        for w in plain_words(fs, m, qs) + b_words(fs, m, qs):
            for y in fs.generators:
                for x in fs.generators:
                    if entry_allowed(fs, m, y, x, w):
                        unknowns.append((y, x, w))
        col = {k: i for i, k in enumerate(unknowns)}
        rows, rhs = [], []
        shift = _weight(fs, qs) + 2
        for w in plain_words(fs, m, qs):
            for y, dy in fs.generators.items():
                for x, dx in fs.generators.items():
                    if dx != dy + shift:
                        continue
                    row = [Fraction(0)] * len(unknowns)
                    const = Fraction(0)
                    for wt, keys in identity_terms(fs, m, y, x, w):
                        unk = [k for k in keys if k in col]
                        val = Fraction(wt)
                        for k in keys:
                            if k not in col:
                                val *= known.get(k, 0)
                        if not unk:
                            const += val
                        elif len(unk) == 1:
                            row[col[unk[0]]] += val
                        else:
                            raise AssertionError("identity is not linear in the new entries")
                    rows.append(row)
                    rhs.append(-const)
        if not unknowns:
            if any(rhs):
                return None
            continue
        sol = linalg.solve(rows, rhs, len(unknowns)) if rows else [Fraction(0)] * len(unknowns)
        if sol is None:
            return None
        ker = linalg.nullspace(rows, len(unknowns)) if rows else \
            [[Fraction(int(i == j)) for j in range(len(unknowns))] for i in range(len(unknowns))]
        extra = _combo(rng, ker, span, nonzero=False)
        if extra:
            sol = [a + b for a, b in zip(sol, extra)]
        for k, v in zip(unknowns, sol):
            known[k] = v
    lam = 1
    for (y, x, w), v in known.items():
        if any(w):
            lam = lcm(lam, v.denominator)
    entries = {}
    for (y, x, w), v in known.items():
        L = sum(len(c) for c in w)
        entries[(y, x, w)] = int(v * lam ** L)
    for key in required_entries(fs, m):
        entries.setdefault(key, 0)
    return CountTables(entries)


def random_bulk_instance(rng: random.Random, ells: Mapping[int, int] | None = None, ngens: int = 6,
                         spread: int = 6, nletters: int = 2, nb: int = 1) -> BulkInstance:
    ells = dict(ells or {1: 4})
    while True:
        fs = FloerSkeleton(_floer_generators(rng, ngens, spread), ells)
        m = random_morse_model(rng, ells, nletters, nb)
        f0 = random_chain_complex(rng, fs.generators)
        if not f0:
            continue
        ct = solve_bulk_tables(rng, fs, m, f0)
        if ct is not None and sensitive_entries(fs, m, ct):
            return BulkInstance(fs, m, ct)


def sensitive_entries(fs: FloerSkeleton, m: MorseModel, ct: CountTables) -> list:
    """Entries with a nonzero partial derivative in some identity (none occur squared)."""
    out = set()
    for (y, x, w) in identity_index(fs, m):
        deriv: dict = {}
        for wt, keys in identity_terms(fs, m, y, x, w):
            for i, k in enumerate(keys):
                v = Fraction(wt)
                for j, kk in enumerate(keys):
                    if j != i:
                        v *= ct.entries.get(kk, 0)
                deriv[k] = deriv.get(k, 0) + v
        out |= {k for k, v in deriv.items() if v and k in ct.entries}
    return sorted(out)


def perturb(ct: CountTables, key, delta: int = 1) -> CountTables:
    out = ct.copy()
    out.entries[key] = out.entries.get(key, 0) + delta
    return out


# -- linear D^2 solving ----------------------------------------------------------------

def _d2_vector(ring, generators, diff) -> dict:
    mod = FreeDgModule(ring, ordered(generators), diff, check=False)
    out = {}
    for g in mod.labels:
        for t, c in mod.D(mod.D(mod.gen(g))).items():
            for mono, v in c.terms.items():
                if v:
                    out[(g, t, mono)] = v
    return out


def solve_d2_linear(ring, generators: Mapping[str, int], build: Callable[[dict], dict],
                    unknowns: list, rng: random.Random | None = None, span: int = 2) -> dict | None:
    """Values for ``unknowns`` making D^2 = 0, assuming D^2 is affine in them.

    ``build(values)`` returns the differential.  The affine model is read off
    by evaluation and the final answer is checked exactly, so a quadratic
    dependence shows up as ``None`` rather than a wrong answer.
    """
    base = _d2_vector(ring, generators, build({}))
    cols = []
    for k in unknowns:
        v = _d2_vector(ring, generators, build({k: Fraction(1)}))
        cols.append({key: v.get(key, 0) - base.get(key, 0) for key in set(v) | set(base)})
    keys = sorted(set(base).union(*[set(c) for c in cols]) if cols else set(base), key=repr)
    rows = [[c.get(key, 0) for c in cols] for key in keys]
    rhs = [-base.get(key, 0) for key in keys]
    n = len(unknowns)
    if n == 0:
        return {} if not any(rhs) else None
    sol = linalg.solve(rows, rhs, n) if rows else [Fraction(0)] * n
    if sol is None:
        return None
    if rng is not None:
        ker = linalg.nullspace(rows, n) if rows else \
            [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        extra = _combo(rng, ker, span, nonzero=False)
        if extra:
            sol = [a + b for a, b in zip(sol, extra)]
    values = {k: v for k, v in zip(unknowns, sol)}
    if _d2_vector(ring, generators, build(values)):
        return None
    return values


def _pairs(generators, shift):
    return [(s, t) for s, ds in generators.items() for t, dt in generators.items() if dt == ds + shift]


def solve_mixed_tables(fs: FloerSkeleton, psi: Mapping, bulk: Mapping, patterns=None,
                       rng: random.Random | None = None) -> dict | None:
    """Mixed tables making D^2 = 0 over L~, one unknown per (pair, pattern).

    Patterns default to a single L_rho for each class.  Products of two mixed
    terms are assumed to vanish; the exact final check catches it if not.
    """
    rhos = fs.rhos
    k = len(rhos)
    lt, _, _ = interpolating_projections(rhos)
    if patterns is None:
        patterns = [((0,) * k, tuple(int(i == j) for j in range(k)), (0,) * k) for i in range(k)]
    unknowns = []
    for pat in patterns:
        qb, qL, qh = pat
        shift = 1 + sum(2 * r * (a + b + c) for r, a, b, c in zip(rhos, qb, qL, qh)) - sum(qL)
        for s, t in _pairs(fs.generators, shift):
            unknowns.append((s, t, pat))

    def build(values):
        mixed: dict = {}
        for (s, t, pat), v in values.items():
            mixed.setdefault((s, t), {})[pat] = v
        return interpolating_differential(fs.generators, rhos, psi, bulk, mixed, lt.algebra)

    vals = solve_d2_linear(lt, fs.generators, build, unknowns, rng)
    if vals is None:
        return None
    mixed: dict = {}
    for (s, t, pat), v in vals.items():
        if v:
            mixed.setdefault((s, t), {})[pat] = v
    return mixed


@dataclass
class InterpolatingInstance:
    fs: FloerSkeleton
    m: MorseModel
    ct: CountTables
    psi: dict
    mixed: dict


def random_interpolating_instance(rng: random.Random, ngens: int = 5, spread: int = 4) -> InterpolatingInstance:
    """One class rho = 1 with a single mixed L-term K.

    Psi_1 is a random solution of the twisted D^2 = 0 constraint; K is random;
    the bulk table T is then forced by the L-coefficient of D^2 over L~ and
    becomes the length-one count table of a one-letter Morse model.
    """
    rhos = [1]
    lt, _, _ = interpolating_projections(rhos)
    while True:
        gens = _floer_generators(rng, ngens, spread)
        f0 = random_chain_complex(rng, gens)
        if not f0:
            continue
        psi0 = {(s, t): {(0,): Fraction(c)} for (s, t), c in f0.items()}
        ring_b = chern_bulk_ring(rhos)
        unk = [(s, t) for s, t in _pairs(gens, 3)]

        def build_psi(values):
            psi = {k: dict(v) for k, v in psi0.items()}
            for key, v in values.items():
                psi.setdefault(key, {})[(1,)] = v
            diff: dict = {}
            for (s, t), c in ch_integral_table(gens, psi, rhos)[1].items():
                diff.setdefault(s, {})[t] = c
            return diff

        vals = solve_d2_linear(ring_b, gens, build_psi, unk, rng)
        if vals is None or not any(vals.values()):
            continue
        psi = {k: dict(v) for k, v in psi0.items()}
        for key, v in vals.items():
            if v:
                psi.setdefault(key, {})[(1,)] = v
        K = {}
        for s, t in _pairs(gens, 2):
            c = rng.randint(-2, 2)
            if c:
                K[(s, t)] = {((0,), (1,), (0,)): c}
        tunk = _pairs(gens, 3)

        def build_t(values):
            bulk = {}
            for key, v in values.items():
                bulk[key] = {(1,): v}
            return interpolating_differential(gens, rhos, psi, bulk, K, lt.algebra)

        tv = solve_d2_linear(lt, gens, build_t, tunk)
        if tv is None or any(v.denominator != 1 for v in tv.values()) or not any(tv.values()):
            continue
        fs = FloerSkeleton(gens, interpolating_ells(rhos))
        m = MorseModel({"a1": 4}, {}, {1: {"a1": 1}})
        e = empty_word(1)
        entries = {(s, t, e): c for (s, t), c in f0.items()}
        for (s, t), v in tv.items():
            entries[(s, t, (("a1",),))] = int(v)
        for key in required_entries(fs, m):
            entries.setdefault(key, 0)
        return InterpolatingInstance(fs, m, CountTables(entries), psi, K)


# -- DG-nerve simplices ---------------------------------------------------------------

def hom_unknowns(A: FreeDgModule, B: FreeDgModule, degree: int) -> list:
    out = []
    for g in A.labels:
        for t in B.labels:
            for mono in A.algebra.basis(A.gdeg[g] + degree - B.gdeg[t]):
                out.append((g, t, mono))
    return out


def map_from_values(A, B, degree, values: Mapping) -> ModuleMap:
    mat: dict = {}
    for (g, t, mono), v in values.items():
        if v:
            row = mat.setdefault(g, {})
            term = A.algebra.from_terms({mono: v})
            row[t] = row[t] + term if t in row else term
    return ModuleMap(A, B, mat, degree)


def map_values(f: ModuleMap) -> dict:
    return {(g, t, mono): v for g, row in f.matrix.items() for t, c in row.items()
            for mono, v in c.terms.items() if v}


def solve_homotopy(A, B, degree, rhs: ModuleMap | None, rng: random.Random | None,
                   span: int = 1) -> ModuleMap | None:
    """X of the given degree with dX = rhs (closed X when rhs is None), plus a random cycle."""
    unk = hom_unknowns(A, B, degree)
    target = map_values(rhs) if rhs is not None else {}
    cols = [map_values(map_from_values(A, B, degree, {k: 1}).differential()) for k in unk]
    keys = sorted(set(target).union(*[set(c) for c in cols]) if cols else set(target), key=repr)
    rows = [[c.get(key, 0) for c in cols] for key in keys]
    rhs_v = [target.get(key, 0) for key in keys]
    n = len(unk)
    if n == 0:
        return map_from_values(A, B, degree, {}) if not any(rhs_v) else None
    sol = linalg.solve(rows, rhs_v, n) if rows else [Fraction(0)] * n
    if sol is None:
        return None
    if rng is not None:
        ker = linalg.nullspace(rows, n) if rows else \
            [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        extra = _combo(rng, ker, span, nonzero=False)
        if extra:
            sol = [a + b for a, b in zip(sol, extra)]
    return map_from_values(A, B, degree, dict(zip(unk, sol)))


def random_vertex(rng: random.Random, j: int, ring: GradedAlgebra) -> tuple[dict, dict]:
    """Generators and integral table of a complex with homology only in degree 0.

    Over Q[B] the plain differential is conjugated by the unipotent gauge
    1 + B N, which keeps D^2 = 0 and puts B into the table.
    """
    gens = {f"u{j}": -1, f"v{j}": 0, f"h{j}": 0, f"w{j}": 1, f"z{j}": 2}
    c1, c2, c3 = rng.choice([1, 2, -1]), rng.choice([1, -1, 3]), rng.randint(-2, 2)
    D = {f"u{j}": {f"v{j}": c1, f"h{j}": c3}, f"w{j}": {f"z{j}": c2}}
    if "B1" not in ring.names:
        return gens, {(s, t): c for s, r in D.items() for t, c in r.items()}
    B = ring.var("B1")
    N = {f"u{j}": {f"w{j}": rng.randint(-1, 1)}, f"v{j}": {f"z{j}": rng.randint(-2, 2)},
         f"h{j}": {f"z{j}": rng.randint(-1, 1)}}

    def app(M, vec):
        out: dict = {}
        for g, c in vec.items():
            for t, a in M.get(g, {}).items():
                out[t] = out.get(t, ring.zero()) + c * a
        return out

    def add(a, b, s=1):
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, ring.zero()) + v * s
        return out

    I = {}
    for g in gens:
        x = {g: ring.one()}
        Dx = app(D, x)
        Nx = app(N, x)
        val = add(Dx, {k: B * v for k, v in app(N, Dx).items()})
        val = add(val, {k: B * v for k, v in app(D, Nx).items()}, -1)
        val = add(val, {k: B * B * v for k, v in app(N, app(D, Nx)).items()}, -1)
        for t, c in val.items():
            if c:
                I[(g, t)] = c
    return gens, I


@dataclass
class SimplexInstance:
    ring: GradedAlgebra
    vertices: list
    faces: dict
    mutants: list = field(default_factory=list)   # (description, faces) pairs


def _flip_entry(table: dict, key) -> dict:
    out = dict(table)
    out[key] = -out[key]
    return out


def random_simplex_instance(rng: random.Random, n: int, over_b: bool = False,
                            tries: int = 50) -> SimplexInstance:
    """Simplex data for n <= 3; retries until every sign-flipped mutant is detected.

    Spine edges are random chain maps; other edges are composites along the
    spine plus a random null-homotopic term, so every square commutes up to
    homotopy and the higher components solve dX = rhs exactly.
    """
    from ..dgmodule import nerve_rhs
    from .twisted import build_twisted_complex
    ring = chern_bulk_ring([1]) if over_b else polynomial_ring([])
    for _ in range(tries):
        vertices = [random_vertex(rng, j, ring) for j in range(n + 1)]
        objs = [build_twisted_complex(g, I, ring) for g, I in vertices]
        sigma: dict = {}
        ok = True
        for i in range(n):
            f = solve_homotopy(objs[i], objs[i + 1], 0, None, rng)
            if f is None or f.is_zero():
                ok = False
                break
            sigma[(i, i + 1)] = f
        if not ok:
            continue
        for i in range(n + 1):
            for k in range(i + 2, n + 1):
                comp = sigma[(i, i + 1)]
                for s in range(i + 1, k):
                    comp = sigma[(s, s + 1)].compose(comp)
                unk = hom_unknowns(objs[i], objs[k], -1)
                Kr = map_from_values(objs[i], objs[k], -1, {u: rng.randint(-1, 1) for u in unk})
                sigma[(i, k)] = comp + Kr.differential()
        for I in faces_of(n):
            if len(I) < 3:
                continue
            rhs = nerve_rhs(sigma, I)
            X = solve_homotopy(objs[I[0]], objs[I[-1]], 1 - (len(I) - 1), rhs, rng)
            if X is None:
                ok = False
                break
            sigma[I] = X
        if not ok or not verify_dg_nerve_simplex(objs, sigma).passed:
            continue
        faces = {I: face_table(f) for I, f in sigma.items()}
        mutants = []
        for I, tab in faces.items():
            if not tab:
                continue
            if n == 1:
                for key in sorted(tab, key=repr):
                    mutants.append((f"flip {key} in {I}", {**faces, I: _flip_entry(tab, key)}))
            else:
                mutants.append((f"flip {I}", {**faces, I: {k: -v for k, v in tab.items()}}))
        if not mutants:
            continue
        if all(not _passes(objs, ring, m) for _, m in mutants):
            return SimplexInstance(ring, vertices, faces, mutants)
    raise RuntimeError("could not generate a nondegenerate simplex instance")


def _passes(objs, ring, faces) -> bool:
    sigma = {}
    for I in faces_of(len(objs) - 1):
        mat: dict = {}
        for (s, t), c in faces.get(I, {}).items():
            mat.setdefault(s, {})[t] = c
        sigma[I] = ModuleMap(objs[I[0]], objs[I[-1]], mat, 1 - (len(I) - 1))
    return verify_dg_nerve_simplex(objs, sigma).passed
