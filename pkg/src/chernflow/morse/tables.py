"""Input data for Morse, Floer and bulk-deformed complexes.

Degrees are cochain degrees.  A Morse count M[(b, a)] is the coefficient of
b in the coboundary of a, so deg b = deg a + 1.  A bulk count
F[(y, x, W)] is the coefficient of x in the deformed differential of y; W
is a word with one tuple of letters per bulk class (in increasing class
order) and the empty word gives the undeformed differential.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from ..errors import PreconditionError, ValidationError


def _count(v) -> int:
    if isinstance(v, (list, tuple)):
        return sum(_count(x) for x in v)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValidationError(f"counts must be integers, got {v!r}")
    return v


@dataclass
class MorseModel:
    """Critical points, Morse coboundary counts and bulk cocycles U_rho."""
    points: dict                                  # label -> degree
    counts: dict = field(default_factory=dict)    # (b, a) -> int
    cocycles: dict = field(default_factory=dict)  # rho -> {label: Fraction}

    def __post_init__(self):
        self.points = {str(k): int(v) for k, v in self.points.items()}
        clean = {}
        for (b, a), v in self.counts.items():
            for p in (a, b):
                if p not in self.points:
                    raise ValidationError(f"unknown critical point {p!r}")
            if self.points[b] != self.points[a] + 1:
                raise ValidationError(f"count ({b}, {a}) does not raise degree by one")
            c = _count(v)
            if c:
                clean[(b, a)] = c
        self.counts = clean
        cocs = {}
        for rho, vec in self.cocycles.items():
            cocs[int(rho)] = {str(a): Fraction(c) for a, c in vec.items() if Fraction(c)}
            for a in cocs[int(rho)]:
                if a not in self.points:
                    raise ValidationError(f"cocycle mentions unknown point {a!r}")
        self.cocycles = cocs

    def coboundary(self, a: str) -> dict:
        return {b: c for (b, aa), c in self.counts.items() if aa == a}

    def check_d_squared(self):
        for a in self.points:
            acc: dict = {}
            for b, c in self.coboundary(a).items():
                for e, c2 in self.coboundary(b).items():
                    acc[e] = acc.get(e, 0) + c * c2
            for e, v in acc.items():
                if v:
                    raise PreconditionError(f"Morse differential squares to {v} on ({a} -> {e})",
                                            witness={"from": a, "to": e})

    def check_cocycles(self, ells: Mapping[int, int] | None = None):
        for rho, vec in self.cocycles.items():
            if ells is not None:
                for a in vec:
                    if self.points[a] != ells[rho]:
                        raise ValidationError(f"cocycle {rho} has a term of degree {self.points[a]}, "
                                              f"expected {ells[rho]}")
            acc: dict = {}
            for a, u in vec.items():
                for b, c in self.coboundary(a).items():
                    acc[b] = acc.get(b, 0) + u * c
            bad = {b: v for b, v in acc.items() if v}
            if bad:
                b = next(iter(bad))
                raise PreconditionError(f"U_{rho} is not a cocycle (coefficient {bad[b]} on {b})",
                                        witness={"rho": rho, "point": b})

    def to_json(self) -> dict:
        return {"points": [{"label": a, "degree": d} for a, d in self.points.items()],
                "counts": [{"to": b, "from": a, "count": c} for (b, a), c in sorted(self.counts.items())],
                "cocycles": {str(r): {a: str(c) for a, c in v.items()}
                             for r, v in sorted(self.cocycles.items())}}

    @classmethod
    def from_json(cls, doc: Mapping) -> "MorseModel":
        pts = {p["label"]: p["degree"] for p in doc["points"]}
        counts: dict = {}
        for e in doc.get("counts", []):
            key = (e["to"], e["from"])
            counts[key] = counts.get(key, 0) + _count(e["count"])
        cocs = {int(r): v for r, v in doc.get("cocycles", {}).items()}
        return cls(pts, counts, cocs)


@dataclass
class FloerSkeleton:
    generators: dict                     # label -> degree
    ells: dict = field(default_factory=dict)   # rho -> ell_rho

    def __post_init__(self):
        self.generators = {str(k): int(v) for k, v in self.generators.items()}
        self.ells = {int(k): int(v) for k, v in self.ells.items()}

    @property
    def rhos(self) -> list[int]:
        return sorted(self.ells)

    def to_json(self) -> dict:
        return {"generators": [{"label": g, "degree": d} for g, d in self.generators.items()],
                "ells": {str(r): l for r, l in sorted(self.ells.items())}}

    @classmethod
    def from_json(cls, doc: Mapping) -> "FloerSkeleton":
        return cls({g["label"]: g["degree"] for g in doc["generators"]},
                   {int(r): l for r, l in doc.get("ells", {}).items()})


Word = tuple  # tuple over clusters of tuples of letters


def word_length(w: Word) -> int:
    return sum(len(c) for c in w)


def empty_word(nclusters: int) -> Word:
    return tuple(() for _ in range(nclusters))


@dataclass
class CountTables:
    """Sparse integer counts F[(y, x, W)]; absent keys are *unknown*, not zero."""
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        self.entries = {(str(y), str(x), tuple(tuple(str(a) for a in c) for c in w)): _count(v)
                        for (y, x, w), v in self.entries.items()}

    def get(self, y: str, x: str, w: Word):
        return self.entries.get((y, x, w))

    def copy(self) -> "CountTables":
        return CountTables(dict(self.entries))

    def to_json(self) -> dict:
        return {"entries": [{"y": y, "x": x, "word": [list(c) for c in w], "count": v}
                            for (y, x, w), v in sorted(self.entries.items())]}

    @classmethod
    def from_json(cls, doc: Mapping) -> "CountTables":
        ent: dict = {}
        for e in doc.get("entries", []):
            key = (e["y"], e["x"], tuple(tuple(c) for c in e["word"]))
            ent[key] = ent.get(key, 0) + _count(e["count"])
        return cls(ent)


def entry_allowed(fs: FloerSkeleton, m: MorseModel, y: str, x: str, w: Word) -> bool:
    """deg x = deg y + sum over letters of (deg letter - 2) + 1."""
    shift = sum(m.points[a] - 2 for c in w for a in c)
    return fs.generators[x] == fs.generators[y] + shift + 1


def letters(fs: FloerSkeleton, m: MorseModel, rho: int) -> list[str]:
    return sorted(a for a, d in m.points.items() if d == fs.ells[rho])


def b_letters(fs: FloerSkeleton, m: MorseModel, rho: int) -> list[str]:
    return sorted(a for a, d in m.points.items() if d == fs.ells[rho] + 1)
