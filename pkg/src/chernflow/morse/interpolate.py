"""The complex over Q[B, L, h] (dB = dh = L) interpolating the ch-bulk and bulk differentials.

The coefficient of B^{qb} L^{qL} h^{qh} / (prod of all q!) in the
differential from src to tgt is

  * the Psi table when qL = qh = 0,
  * the U-contracted bulk table when qb = qL = 0,
  * a supplied mixed table otherwise.

Bulk classes use ell_rho = 2 rho + 2 so that h_rho and B_rho share the degree
-2 rho.  Setting h = L = 0 gives the ch-bulk complex and B = L = 0 the bulk
complex, on the nose.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from ..dgmodule import FreeDgModule, base_change, module_homology
from ..errors import PreconditionError, ValidationError
from ..gca import interpolating_projections
from .bulk import build_bulk_complex, contracted_bulk_table, plain_floer_table
from .tables import CountTables, FloerSkeleton, MorseModel
from .twisted import build_ch_bulk_complex, ordered


def interpolating_ells(rhos) -> dict:
    return {r: 2 * r + 2 for r in rhos}


def _mono(rhos, qb, qL, qh) -> tuple:
    out = []
    for i in range(len(rhos)):
        out += [qb[i], qL[i], qh[i]]
    return tuple(out)


def interpolating_differential(generators: Mapping[str, int], rhos, psi: Mapping,
                               bulk: Mapping, mixed: Mapping, ring) -> dict:
    """Assemble the differential over L~ as {src: {tgt: element}}.

    ``psi[(src, tgt)][qb]``, ``bulk[(src, tgt)][qh]`` (qh != 0) and
    ``mixed[(src, tgt)][(qb, qL, qh)]`` hold the raw table values.
    """
    rhos = list(rhos)
    k = len(rhos)
    zero = (0,) * k
    acc: dict = {}

    def add(src, tgt, qb, qL, qh, v):
        v = Fraction(v)
        if not v:
            return
        for i in range(k):
            if qL[i] > 1:
                raise ValidationError("L is odd, so its exponent is at most one")
        want = generators[src] + 1 + sum(2 * r * (a + b + c) for r, a, b, c in zip(rhos, qb, qL, qh)) \
            - sum(qL)
        if generators[tgt] != want:
            raise ValidationError(f"table entry ({src}, {tgt}, {qb}, {qL}, {qh}) violates the degree constraint")
        w = math.prod(math.factorial(e) for e in qb + qL + qh)
        term = ring.from_terms({_mono(rhos, qb, qL, qh): v / w})
        row = acc.setdefault(src, {})
        row[tgt] = row[tgt] + term if tgt in row else term

    for (s, t), row in psi.items():
        for qb, v in row.items():
            add(s, t, tuple(qb), zero, zero, v)
    for (s, t), row in bulk.items():
        for qh, v in row.items():
            if any(qh):
                add(s, t, zero, zero, tuple(qh), v)
    for (s, t), row in mixed.items():
        for (qb, qL, qh), v in row.items():
            qb, qL, qh = tuple(qb), tuple(qL), tuple(qh)
            if not any(qL) and not (any(qb) and any(qh)):
                raise ValidationError(f"mixed entry {(qb, qL, qh)} is not mixed")
            add(s, t, qb, qL, qh, v)
    return {s: {t: c for t, c in row.items() if c} for s, row in acc.items()}


@dataclass
class InterpolationResult:
    module: FreeDgModule
    twisted: FreeDgModule
    bulk: FreeDgModule
    reduce_b: FreeDgModule
    reduce_h: FreeDgModule

    @property
    def reductions_equal(self) -> tuple[bool, bool]:
        return self.reduce_b == self.twisted, self.reduce_h == self.bulk

    def homology_dims(self, window) -> dict:
        out = {}
        for name, mod in (("interpolating", self.module), ("twisted", self.twisted), ("bulk", self.bulk)):
            out[name] = {r.degree: r.dim for r in module_homology(mod, window)}
        return out


def build_interpolating_complex(fs: FloerSkeleton, m: MorseModel, ct: CountTables,
                                psi: Mapping, mixed: Mapping | None = None,
                                window=None) -> InterpolationResult:
    rhos = fs.rhos
    if fs.ells != interpolating_ells(rhos):
        raise ValidationError("interpolation needs ell_rho = 2 rho + 2 for every bulk class")
    bulk_mod = build_bulk_complex(fs, m, ct, window)
    twisted = build_ch_bulk_complex(fs.generators, psi, rhos, window)
    zero = (0,) * len(rhos)
    plain = plain_floer_table(fs, m, ct)
    psi0 = {k: Fraction(v[zero]) for k, v in psi.items() if Fraction(v.get(zero, 0))}
    if plain != psi0:
        raise ValidationError("the undeformed parts of the Psi and count tables differ")
    lt, pi_b, pi_h = interpolating_projections(rhos)
    bulk = contracted_bulk_table(fs, m, ct)
    diff = interpolating_differential(fs.generators, rhos, psi, bulk, mixed or {}, lt.algebra)
    try:
        mod = FreeDgModule(lt, ordered(fs.generators), diff, window)
    except PreconditionError as e:
        raise PreconditionError("differential over the interpolating ring does not square to zero "
                                "(mixed tables are not coherent)", witness=e.witness) from None
    return InterpolationResult(mod, twisted, bulk_mod, base_change(mod, pi_b), base_change(mod, pi_h))
