"""Acceptance suite: eleven end-to-end checks with exact answers and time limits."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from itertools import product as cartesian
from math import comb
from typing import Callable

CriterionFn = Callable[[], tuple[bool, str]]


@dataclass
class CriterionResult:
    number: int
    name: str
    correct: bool
    seconds: float
    limit: float | None
    detail: str

    @property
    def passed(self) -> bool:
        return self.correct and (self.limit is None or self.seconds < self.limit)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lim = f" (limit {self.limit:g}s)" if self.limit is not None else ""
        return f"[{status}] {self.number:>2} {self.name}: {self.seconds:.2f}s{lim} {self.detail}"

    def to_json(self) -> dict:
        return {"number": self.number, "name": self.name, "passed": self.passed,
                "correct": self.correct, "seconds": round(self.seconds, 3),
                "limit": self.limit, "detail": self.detail}


# -- individual criteria --------------------------------------------------------------

def c1_ch2_cotangent() -> tuple[bool, str]:
    from .chern import chern_character, stable_cotangent_tangent
    bad = []
    for n in (3, 5, 7):
        b = stable_cotangent_tangent(n)
        ch2 = chern_character(b, 2)[2]
        want = b.space.ring.from_terms({(2,): -2 * comb(n + 1, 2) + (n + 1) ** 2})
        if ch2 != want:
            bad.append(n)
    return not bad, "ch2 = (n+1) H^2 for n = 3, 5, 7" if not bad else f"mismatch for n in {bad}"


def c2_criterion() -> tuple[bool, str]:
    from .stringtop import LoopAlgebra, ch2_class, criterion_check
    notes = []
    ok = True
    for n in (3, 5, 7):
        alg = LoopAlgebra(n)
        c = ch2_class(alg)
        res = criterion_check(alg, c)
        good = (res.witness is not None and res.witness == alg.var("w")
                and res.bracket_value == c * (-2))
        ok &= good
        notes.append(f"n={n}:{'w' if good else 'bad'}")
    res1 = criterion_check(LoopAlgebra(1), ch2_class(LoopAlgebra(1)))
    ok &= res1.witness is None
    notes.append(f"n=1:{'none' if res1.witness is None else 'unexpected witness'}")
    return ok, " ".join(notes)


def c3_brackets() -> tuple[bool, str]:
    from .stringtop import LoopAlgebra
    bad = []
    for n in range(1, 8):
        alg = LoopAlgebra(n)
        F = alg.free
        H, w, v = alg.var("H"), alg.var("w"), alg.var("v")
        expect_vw = F.var("v") * (n + 1) + (F.var("H") ** n) * F.var("v") ** 2 * comb(n + 1, 2)
        checks = [
            alg.bracket(H, w) == -H,
            alg.bracket_free(F.var("v"), F.var("w")) == expect_vw,
            alg.bracket(v, w) == alg.reduce(expect_vw),
            alg.bracket(H * H, w) == H * H * (-2),
        ]
        if not all(checks):
            bad.append(n)
    return not bad, "n = 1..7 exact" if not bad else f"mismatch for n in {bad}"


def c4_bordism() -> tuple[bool, str]:
    from fractions import Fraction
    from .chern import bordism_character, bordism_rank_test, cp, point
    from .gca import bordism_ring
    R = bordism_ring(3)
    b1, b2 = R.var("b1"), R.var("b2")
    checks = {
        "pt": bordism_character(point(), top=3) == R.one(),
        "CP1": bordism_character(cp(1), top=3) == b1 * 2,
        "CP2": bordism_character(cp(2), top=3) == b1 * b1 * Fraction(9, 2) + b2 * Fraction(3, 2),
    }
    ranks = bordism_rank_test(3)
    full = all(r == d for r, d in ranks.values())
    bad = [k for k, v in checks.items() if not v]
    detail = f"ranks {dict(ranks)}" + (f"; wrong: {bad}" if bad else "")
    return full and not bad, detail


def c5_interpolating_dga() -> tuple[bool, str]:
    from .dgmodule import FreeDgModule, base_change_comparison, quasi_iso_check
    from .gca import dga_homology_basis, interpolating_projections, polynomial_ring
    rhos = [1, 2]
    window = (-20, 0)
    lt, pi_b, pi_h = interpolating_projections(rhos)
    got = {r.degree: r.dim for r in dga_homology_basis(lt, window)}
    poly = polynomial_ring([(f"c{r}", -2 * r) for r in rhos])
    want = {d: len(poly.basis(d)) for d in range(window[0], window[1] + 1)}
    dims_ok = all(got.get(d, 0) == want[d] for d in want)
    free = FreeDgModule(lt, [("1", 0)])
    qb = quasi_iso_check(base_change_comparison(free, pi_b), window)
    qh = quasi_iso_check(base_change_comparison(free, pi_h), window)
    return dims_ok and qb.passed and qh.passed, \
        f"dims {'match' if dims_ok else 'differ'}; pi_b {'qis' if qb.passed else 'fails'}; " \
        f"pi_h {'qis' if qh.passed else 'fails'}"


def c6_spectral() -> tuple[bool, str]:
    from .fixtures import bracket_fixture_ell4, scalar_extension_fixtures, spectral_fixtures
    from .spectral import compute_pages, first_bulk_differential, truncation_filtration
    degenerate = all(all(pg.differential_is_zero() for pg in
                         compute_pages(truncation_filtration(m), 5).pages[1:])
                     for _, m in scalar_extension_fixtures())
    m, bracket = bracket_fixture_ell4()
    rep = first_bulk_differential(m, bracket, 4)
    conv = all(compute_pages(truncation_filtration(mm), 6).converges() for _, mm in spectral_fixtures())
    return degenerate and rep.passed and conv, \
        f"(a) {'ok' if degenerate else 'fail'} (b) {'ok' if rep.passed else 'fail'} " \
        f"multiplicity {rep.multiplicity} (c) {'ok' if conv else 'fail'}"


def c7_bulk_tables(count: int = 50, seed: int = 7) -> tuple[bool, str]:
    from .errors import PreconditionError
    from .morse import build_bulk_complex
    from .morse.synthetic import perturb, random_bulk_instance, sensitive_entries
    rng = random.Random(seed)
    built = caught = 0
    for _ in range(count):
        inst = random_bulk_instance(rng)
        try:
            build_bulk_complex(inst.fs, inst.m, inst.ct)
            built += 1
        except PreconditionError:
            pass
        key = rng.choice(sensitive_entries(inst.fs, inst.m, inst.ct))
        try:
            build_bulk_complex(inst.fs, inst.m, perturb(inst.ct, key))
        except PreconditionError as e:
            if e.witness:
                caught += 1
    return built == count and caught == count, f"built {built}/{count}, perturbations caught {caught}/{count}"


def c8_dg_nerve(seed: int = 8, per_case: int = 3) -> tuple[bool, str]:
    from .morse import simplex_from_twisted_data
    from .morse.synthetic import random_simplex_instance
    from .errors import PreconditionError
    rng = random.Random(seed)
    simplices = mutants = caught = 0
    ok = True
    for n in (1, 2, 3):
        for over_b in (False, True):
            for _ in range(per_case):
                inst = random_simplex_instance(rng, n, over_b)
                simplex_from_twisted_data(inst.vertices, inst.faces, inst.ring)
                simplices += 1
                for _, faces in inst.mutants:
                    mutants += 1
                    try:
                        simplex_from_twisted_data(inst.vertices, faces, inst.ring)
                        ok = False
                    except PreconditionError:
                        caught += 1
    return ok and caught == mutants, f"{simplices} simplices pass; {caught}/{mutants} mutants rejected"


def c9_koszul(count: int = 1000, seed: int = 9) -> tuple[bool, str]:
    from .flowcomb import koszul_sign_face, koszul_sign_product, oracle_face, oracle_product
    from .flowcomb.signs import even_face_context, even_product_context, random_context
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        c = random_context(rng)
        bad += koszul_sign_product(c) != oracle_product(c)
        f = random_context(rng, strict=True)
        bad += koszul_sign_face(f) != oracle_face(f)
    red = 0
    for _ in range(200):
        c = even_product_context(rng)
        red += koszul_sign_product(c) != (-1) ** (c.jp - c.k + 1)
        c = even_face_context(rng)
        red += koszul_sign_face(c) != (-1) ** (c.jp - c.k)
    return bad == 0 and red == 0, f"{bad} oracle mismatches in {count}; {red} reduction mismatches"


def c10_flow_posets() -> tuple[bool, str]:
    from .flowcomb import ObjectTuple, all_posets, check_model
    total = failed = 0
    for nlev in (1, 2, 3):
        for shape in cartesian((1, 2, 3), repeat=nlev):
            levels = [[(f"o{i}_{j}", 0) for j in range(k)] for i, k in enumerate(shape)]
            t = ObjectTuple.make(levels)
            for p in all_posets(t):
                total += 1
                if not check_model(p).passed:
                    failed += 1
    return failed == 0 and total > 0, f"{total} posets, {failed} failures"


def c11_dimension_identity() -> tuple[bool, str]:
    from .chern import cp, unit_tangent_sphere_dims
    from .stringtop import LoopAlgebra, loop_dims
    n = 3
    lo, hi = -30, 6
    loops = loop_dims(LoopAlgebra(n), (lo, hi))
    shift = 2 * n
    kmax = (2 * (2 * n - 1) + 1 - lo) // shift + 1
    sphere = unit_tangent_sphere_dims(n, (lo + shift, hi + shift * kmax))
    base = cp(n)
    bad = []
    for d in range(lo, hi + 1):
        rhs = base.betti(d) + sum(sphere.get(d + shift * k, 0) for k in range(1, kmax + 1))
        if loops[d] != rhs:
            bad.append(d)
    return not bad, f"degrees {lo}..{hi} agree" if not bad else f"mismatch at {bad}"


CRITERIA: list[tuple[int, str, CriterionFn, float | None]] = [
    (1, "ch2 of T*CP^n", c1_ch2_cotangent, 1.0),
    (2, "non-base-change criterion", c2_criterion, 1.0),
    (3, "bracket regression", c3_brackets, None),
    (4, "bordism character", c4_bordism, 5.0),
    (5, "interpolating DGA", c5_interpolating_dga, 10.0),
    (6, "spectral sequence suite", c6_spectral, 10.0),
    (7, "bulk tables and perturbations", c7_bulk_tables, 30.0),
    (8, "DG-nerve identity", c8_dg_nerve, None),
    (9, "Koszul signs", c9_koszul, 5.0),
    (10, "flow posets", c10_flow_posets, 30.0),
    (11, "loop/sphere dimension identity", c11_dimension_identity, 5.0),
]


def run_criterion(number: int) -> CriterionResult:
    for num, name, fn, limit in CRITERIA:
        if num == number:
            t = time.perf_counter()
            try:
                ok, detail = fn()
            except Exception as e:  # a crash is a failure, reported with its message
                ok, detail = False, f"raised {type(e).__name__}: {e}"
            return CriterionResult(num, name, ok, time.perf_counter() - t, limit, detail)
    raise KeyError(f"no criterion {number}")


def run_suite(numbers=None) -> list[CriterionResult]:
    numbers = numbers or [c[0] for c in CRITERIA]
    return [run_criterion(n) for n in numbers]
