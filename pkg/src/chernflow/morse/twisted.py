"""Twisted complexes over Q[B] from integral tables, and the ch-bulk form built from Psi tables."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping

from ..dgmodule import FreeDgModule
from ..errors import PreconditionError, ValidationError
from ..gca import GcaElement, GradedAlgebra, chern_bulk_ring, element_from_json, element_to_json


def ordered(generators: Mapping[str, int]) -> list:
    return sorted(generators.items(), key=lambda p: (p[1], p[0]))


def stokes_check(generators: Mapping[str, int], I: Mapping) -> dict | None:
    """First (x, y) with sum_z I_xz I_zy != 0, as a witness dict, or None."""
    out_edges: dict = {}
    for (x, y), c in I.items():
        if c:
            out_edges.setdefault(x, {})[y] = c
    for x, _ in ordered(generators):
        acc: dict = {}
        via: dict = {}
        for z, a in out_edges.get(x, {}).items():
            for y, b in out_edges.get(z, {}).items():
                acc[y] = acc[y] + a * b if y in acc else a * b
                via.setdefault(y, []).append(z)
        for y, v in sorted(acc.items()):
            if v:
                return {"x": x, "y": y, "via": sorted(via[y]), "value": str(v)}
    return None


def build_twisted_complex(generators: Mapping[str, int], I: Mapping, ring: GradedAlgebra,
                          window=None) -> FreeDgModule:
    """d x = sum_y I_xy y, extended linearly over the (even, d = 0) ring."""
    for v in ring.degrees:
        if v % 2:
            raise ValidationError("twisting ring must be concentrated in even degrees")
    table = {}
    for (x, y), c in I.items():
        if x not in generators or y not in generators:
            raise ValidationError(f"integral table mentions unknown generator in ({x}, {y})")
        if not isinstance(c, GcaElement):
            c = ring.scalar(c)
        if c.algebra != ring:
            raise ValidationError("integral table over a different ring")
        if c:
            table[(x, y)] = c
    w = stokes_check(generators, table)
    if w is not None:
        raise PreconditionError(f"Stokes identity fails at ({w['x']}, {w['y']})", witness=w)
    diff: dict = {}
    for (x, y), c in table.items():
        diff.setdefault(x, {})[y] = c
    return FreeDgModule(ring, ordered(generators), diff, window)


def integral_table_from_json(ring: GradedAlgebra, doc) -> dict:
    return {(e["from"], e["to"]): element_from_json(ring, e["value"]) for e in doc}


def integral_table_to_json(I: Mapping) -> list:
    return [{"from": x, "to": y, "value": element_to_json(c)} for (x, y), c in sorted(I.items()) if c]


def ch_integral_table(generators: Mapping[str, int], psi: Mapping, rhos) -> tuple[GradedAlgebra, dict]:
    """I_xy = sum_q (prod B_rho^{q_rho} / prod q_rho!) Psi_q(x, y) over Q[B_rho]."""
    rhos = list(rhos)
    ring = chern_bulk_ring(rhos)
    I: dict = {}
    for (x, y), row in psi.items():
        acc = ring.zero()
        for q, v in row.items():
            q = tuple(q)
            if len(q) != len(rhos):
                raise ValidationError(f"Psi index {q} needs one entry per bulk class")
            v = Fraction(v)
            if not v:
                continue
            want = generators[x] + 1 + sum(2 * r * e for r, e in zip(rhos, q))
            if generators[y] != want:
                raise ValidationError(f"Psi_{q}({x}, {y}) violates the degree constraint")
            acc = acc + ring.from_terms({q: v / math.prod(math.factorial(e) for e in q)})
        if acc:
            I[(x, y)] = acc
    return ring, I


def build_ch_bulk_complex(generators: Mapping[str, int], psi: Mapping, rhos, window=None) -> FreeDgModule:
    ring, I = ch_integral_table(generators, psi, rhos)
    return build_twisted_complex(generators, I, ring, window)


def exp_form_table(generators: Mapping[str, int], additive: Mapping, ring: GradedAlgebra,
                   t: GcaElement, cap: int) -> dict:
    """Entries base * exp(a t) truncated at the nilpotency order of t (at most ``cap``).

    With composable pairs x -> z -> y the Stokes sum becomes a sum of
    exp((a_xz + a_zy) t) terms, so it vanishes exactly when the exponents
    are additive and the bases cancel.
    """
    out = {}
    for (x, y), (base, a) in additive.items():
        acc = ring.zero()
        power = ring.one()
        for k in range(cap + 1):
            acc = acc + power * (Fraction(base) * Fraction(a) ** k / math.factorial(k))
            power = power * t
            if not power:
                break
        out[(x, y)] = acc
    return out
