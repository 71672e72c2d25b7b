"""Loop homology of CP^n as a graded ring with a degree -1 bracket.

Presentation: Lambda[w] (x) Q[H, v] / (H^{n+1}, (n+1) H^n v, w H^n) with
|w| = 1, |H| = 2, |v| = -2n.  The only nonzero generator brackets are
{H, w} = -H and {v, w} = (n+1) v + C(n+1, 2) H^n v^2.  Brackets are
extended by
    {a, bc} = {a, b} c + (-1)^{(|a|-1)|b|} b {a, c},
    {a, b}  = -(-1)^{(|a|-1)(|b|-1)} {b, a},
computed on free-algebra representatives and reduced in the quotient.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable

from .errors import ValidationError
from .gca import GcaElement, GradedAlgebra, GradedVariable, format_monomial

ORDER = ("w", "H", "v")


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


class LoopAlgebra:
    def __init__(self, n: int):
        if n < 1:
            raise ValidationError("n must be at least 1")
        self.n = n
        self.free = GradedAlgebra([GradedVariable("w", 1), GradedVariable("H", 2),
                                   GradedVariable("v", -2 * n)])
        self.ring = self.free.quotient([{"H": n + 1}, {"H": n, "v": 1}, {"w": 1, "H": n}])
        F = self.free
        w, H, v = F.var("w"), F.var("H"), F.var("v")
        self.table = {
            ("H", "w"): -H,
            ("v", "w"): v * (n + 1) + (H ** n) * v * v * comb(n + 1, 2),
        }
        self._memo: dict = {}
        self._check_relations()

    # -- helpers ----------------------------------------------------------------
    def reduce(self, a: GcaElement) -> GcaElement:
        return self.ring.from_terms(a.terms)

    def lift(self, a: GcaElement) -> GcaElement:
        return GcaElement(self.free, dict(a.terms))

    def var(self, name: str) -> GcaElement:
        return self.ring.var(name)

    def element(self, spec: dict, coeff=1) -> GcaElement:
        return self.ring.from_terms({self.ring.monomial(spec): coeff})

    def _gen_bracket(self, a: str, b: str) -> GcaElement:
        F = self.free
        if (a, b) in self.table:
            return self.table[(a, b)]
        if (b, a) in self.table:
            da, db = F.degrees[F.index[a]], F.degrees[F.index[b]]
            return self.table[(b, a)] * (-_sgn((da - 1) * (db - 1)))
        return F.zero()

    @staticmethod
    def _split(m: tuple) -> tuple[int, tuple] | None:
        """First variable of m and the rest (m = x_i * rest with sign +1)."""
        for i, e in enumerate(m):
            if e:
                rest = list(m)
                rest[i] -= 1
                return i, tuple(rest)
        return None

    def _mono_bracket(self, m1: tuple, m2: tuple) -> GcaElement:
        key = (m1, m2)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        F = self.free
        res = F.zero()
        s2 = self._split(m2)
        s1 = self._split(m1)
        if s1 is None or s2 is None:
            pass
        elif sum(m2) >= 2:
            i, rest = s2
            b = F.from_terms({tuple(int(j == i) for j in range(3)): 1})
            c = F.from_terms({rest: 1})
            da = F.mono_degree(m1)
            db = F.degrees[i]
            res = self._mono_bracket(m1, tuple(int(j == i) for j in range(3))) * c \
                + b * self._mono_bracket(m1, rest) * _sgn((da - 1) * db)
        elif sum(m1) >= 2:
            da, db = F.mono_degree(m1), F.mono_degree(m2)
            res = self._mono_bracket(m2, m1) * (-_sgn((da - 1) * (db - 1)))
        else:
            res = self._gen_bracket(F.names[s1[0]], F.names[s2[0]])
        self._memo[key] = res
        return res

    def bracket_free(self, a: GcaElement, b: GcaElement) -> GcaElement:
        out = self.free.zero()
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                out = out + self._mono_bracket(m1, m2) * (c1 * c2)
        return out

    def bracket(self, a: GcaElement, b: GcaElement) -> GcaElement:
        if not a.is_homogeneous() or not b.is_homogeneous():
            raise ValidationError("bracket needs homogeneous inputs")
        return self.reduce(self.bracket_free(self.lift(a), self.lift(b)))

    def _check_relations(self):
        for k in self.ring.killed:
            r = GcaElement(self.free, {k: 1})
            for g in ORDER:
                val = self.reduce(self.bracket_free(self.free.var(g), r))
                if val:
                    raise ValidationError(f"relation {format_monomial(self.free, k)} "
                                          f"is not closed under bracket with {g}")

    # -- bases --------------------------------------------------------------------
    def basis(self, degree: int) -> list[tuple]:
        return self.ring.basis(degree)

    def canonical_order(self, monos: Iterable[tuple]) -> list[tuple]:
        """Word length first, then exponents descending in the order w, H, v."""
        return sorted(monos, key=lambda m: (sum(m), tuple(-e for e in m)))

    def default_window(self) -> tuple[int, int]:
        return (-4 * self.n, 2 * self.n + 1)


def bracket(alg: LoopAlgebra, a: GcaElement, b: GcaElement) -> GcaElement:
    return alg.bracket(a, b)


@dataclass
class CriterionResult:
    witness: GcaElement | None
    witness_monomial: tuple | None
    bracket_value: GcaElement | None

    def to_json(self, alg: LoopAlgebra) -> dict:
        if self.witness is None:
            return {"witness": None}
        return {"witness": format_monomial(alg.ring, self.witness_monomial),
                "bracket_value": self.bracket_value.to_json()}


def criterion_check(alg: LoopAlgebra, c: GcaElement, window=None) -> CriterionResult:
    """First monomial alpha (canonical order) in the window with {c, alpha} != 0."""
    if not c.is_homogeneous():
        raise ValidationError("class must be homogeneous")
    lo, hi = window or alg.default_window()
    monos = [m for d in range(lo, hi + 1) for m in alg.basis(d)]
    for m in alg.canonical_order(monos):
        alpha = alg.ring.from_terms({m: 1})
        val = alg.bracket(c, alpha)
        if val:
            return CriterionResult(alpha, m, val)
    return CriterionResult(None, None, None)


def loop_dims(alg: LoopAlgebra, window) -> dict[int, int]:
    lo, hi = window
    return {d: len(alg.basis(d)) for d in range(lo, hi + 1)}


def ch2_class(alg: LoopAlgebra) -> GcaElement:
    """ch_2 of TCP^n + (TCP^n)^dual moved into the loop ring along H -> H.

    The coefficient is computed in a ring where H^2 survives, so for n = 1
    the class is 2 H^2 before it is reduced to zero by H^{n+1} = 0.
    """
    from .chern import BundleClass, Space, chern_character
    sp = Space([("H", max(alg.n, 2))])
    H = sp.H()
    tot = ((sp.ring.one() + H) * (sp.ring.one() - H)) ** (alg.n + 1)
    ch = chern_character(BundleClass(sp, 2 * alg.n, tot), 2)[2]
    return alg.element({"H": 2}, ch.coefficient((2,)))
