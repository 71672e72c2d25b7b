"""Tree posets of a flow simplex: enumeration, collapse morphisms, the cube test, faces.

A tree in P(x, y) is a path of edges labelled by objects.  Edge labels
strictly ascend in the total order (level, position within the level), the
first label is x and the last is y.  The vertex between edges on levels k and
k' carries a subset S of {k+1, ..., k'-1}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from ..errors import ValidationError

DEFAULT_MAX_TREES = 100_000


@dataclass(frozen=True)
class ObjectTuple:
    levels: tuple  # tuple of tuples of (label, degree)

    def __post_init__(self):
        labels = [l for lvl in self.levels for l, _ in lvl]
        if len(set(labels)) != len(labels):
            raise ValidationError("object labels must be unique across levels")

    @classmethod
    def make(cls, levels: Iterable[Iterable]) -> "ObjectTuple":
        out = []
        for lvl in levels:
            row = []
            for obj in lvl:
                if isinstance(obj, Mapping):
                    obj = (obj["label"], obj.get("degree", 0))
                elif isinstance(obj, str):
                    obj = (obj, 0)
                row.append((str(obj[0]), int(obj[1])))
            out.append(tuple(row))
        return cls(tuple(out))

    @property
    def n(self) -> int:
        return len(self.levels) - 1

    def position(self, label: str) -> tuple[int, int]:
        for i, lvl in enumerate(self.levels):
            for j, (l, _) in enumerate(lvl):
                if l == label:
                    return i, j
        raise ValidationError(f"object {label!r} is not in the tuple")

    def level(self, label: str) -> int:
        return self.position(label)[0]

    def degree(self, label: str) -> int:
        i, j = self.position(label)
        return self.levels[i][j][1]

    def ordered(self) -> list[str]:
        return [l for lvl in self.levels for l, _ in lvl]

    def to_json(self) -> dict:
        return {"levels": [[{"label": l, "degree": d} for l, d in lvl] for lvl in self.levels]}

    @classmethod
    def from_json(cls, doc: Mapping) -> "ObjectTuple":
        return cls.make(doc["levels"])


@dataclass(frozen=True)
class FlowTree:
    edges: tuple          # object labels, x first and y last
    labels: tuple         # one frozenset per vertex (len(edges) - 1 of them)

    def key(self) -> str:
        parts = [self.edges[0]]
        for e, s in zip(self.edges[1:], self.labels):
            parts.append("{" + ",".join(str(v) for v in sorted(s)) + "}")
            parts.append(e)
        return ">".join(parts)

    def __str__(self) -> str:
        return self.key()


def vertex_range(t: ObjectTuple, left: str, right: str) -> frozenset:
    return frozenset(range(t.level(left) + 1, t.level(right)))


def codim(t: ObjectTuple, tree: FlowTree) -> int:
    """Number of internal edges plus, per vertex, the allowed levels missing from S."""
    c = len(tree.edges) - 2
    for (a, b), s in zip(zip(tree.edges, tree.edges[1:]), tree.labels):
        c += len(vertex_range(t, a, b) - s)
    return c


def _subsets(s: Iterable[int]):
    s = sorted(s)
    for r in range(len(s) + 1):
        for c in combinations(s, r):
            yield frozenset(c)


def enumerate_trees(t: ObjectTuple, x: str, y: str, max_trees: int = DEFAULT_MAX_TREES) -> list[FlowTree]:
    order = t.ordered()
    ix, iy = order.index(x), order.index(y)
    if ix >= iy:
        raise ValidationError(f"{x!r} must precede {y!r} in the level order")
    middle = order[ix + 1:iy]
    out: list[FlowTree] = []
    for r in range(len(middle) + 1):
        for mid in combinations(middle, r):
            edges = (x,) + mid + (y,)
            ranges = [vertex_range(t, a, b) for a, b in zip(edges, edges[1:])]
            choices = [[]]
            for rg in ranges:
                choices = [c + [s] for c in choices for s in _subsets(rg)]
                if len(out) + len(choices) > max_trees:
                    raise ValidationError(f"poset exceeds {max_trees} trees")
            for c in choices:
                out.append(FlowTree(edges, tuple(c)))
    out.sort(key=lambda tr: (codim(t, tr), tr.key()))
    return out


def is_morphism(t: ObjectTuple, a: FlowTree, b: FlowTree, level_clause: bool = True) -> bool:
    """Collapse morphism a -> b: a is obtained from b by collapsing edge segments.

    The label of each vertex of a must contain the labels of the collapsed
    vertices of b and, when ``level_clause`` is set, every level whose edges
    in b all lie in the collapsed segment.
    """
    if a.edges[0] != b.edges[0] or a.edges[-1] != b.edges[-1]:
        return False
    pos = []
    i = 0
    for e in a.edges:
        while i < len(b.edges) and b.edges[i] != e:
            i += 1
        if i == len(b.edges):
            return False
        pos.append(i)
        i += 1
    blevels = [t.level(e) for e in b.edges]
    for v, (lo, hi) in enumerate(zip(pos, pos[1:])):
        need = set()
        for w in range(lo, hi):
            need |= b.labels[w]
        collapsed = blevels[lo + 1:hi]
        for k in set(collapsed) if level_clause else ():
            if blevels.count(k) == collapsed.count(k):
                need.add(k)
        if not need <= a.labels[v]:
            return False
    return True


@dataclass
class TreePoset:
    tuple: ObjectTuple
    x: str
    y: str
    objects: list
    codims: list
    rel: set = field(default_factory=set)   # (i, j) for a morphism objects[i] -> objects[j]

    def index(self, tree: FlowTree) -> int:
        return self.objects.index(tree)

    def over(self, j: int) -> list[int]:
        return [i for i in range(len(self.objects)) if (i, j) in self.rel]

    def to_json(self) -> dict:
        return {"x": self.x, "y": self.y,
                "objects": [{"tree": o.key(), "codim": c} for o, c in zip(self.objects, self.codims)],
                "morphisms": [[self.objects[a].key(), self.objects[b].key()]
                              for a, b in sorted(self.rel) if a != b]}

    def to_dot(self) -> str:
        lines = ["digraph P {", "  rankdir=BT;"]
        for i, (o, c) in enumerate(zip(self.objects, self.codims)):
            lines.append(f'  n{i} [label="{o.key()}\\ncodim {c}"];')
        cover = self.covers()
        for a, b in sorted(cover):
            lines.append(f"  n{a} -> n{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def covers(self) -> set:
        strict = {(a, b) for a, b in self.rel if a != b}
        out = set()
        for a, b in strict:
            if not any((a, m) in strict and (m, b) in strict for m in range(len(self.objects))):
                out.add((a, b))
        return out


def enumerate_poset(t: ObjectTuple, x: str, y: str, max_trees: int = DEFAULT_MAX_TREES,
                    level_clause: bool = True) -> TreePoset:
    lx, ly = t.level(x), t.level(y)
    if lx > ly:
        raise ValidationError("x must lie on a level at or below y")
    objs = enumerate_trees(t, x, y, max_trees)
    cods = [codim(t, o) for o in objs]
    rel = set()
    for i, a in enumerate(objs):
        for j, b in enumerate(objs):
            if cods[i] <= cods[j] and is_morphism(t, a, b, level_clause):
                rel.add((i, j))
    return TreePoset(t, x, y, objs, cods, rel)


@dataclass
class ModelReport:
    passed: bool
    witness: str | None = None
    reason: str = ""


def check_model(p: TreePoset) -> ModelReport:
    """Each overcategory P_{/T} must be isomorphic to the cube 2^{codim T}."""
    for j, tree in enumerate(p.objects):
        c = p.codims[j]
        over = p.over(j)
        if len(over) != 2 ** c:
            return ModelReport(False, tree.key(), f"overcategory has {len(over)} elements, expected {2 ** c}")
        bottoms = [b for b in over if all((b, u) in p.rel for u in over)]
        if len(bottoms) != 1:
            return ModelReport(False, tree.key(), "overcategory has no unique bottom")
        bot = bottoms[0]
        atoms = [a for a in over if a != bot
                 and all(m in (a, bot) for m in over if (m, a) in p.rel)]
        if len(atoms) != c:
            return ModelReport(False, tree.key(), f"{len(atoms)} atoms, expected {c}")
        image = {}
        for u in over:
            image[u] = frozenset(a for a in atoms if (a, u) in p.rel)
        if len(set(image.values())) != len(over):
            return ModelReport(False, tree.key(), "atom sets are not distinct")
        for u in over:
            for w in over:
                if ((u, w) in p.rel) != (image[u] <= image[w]):
                    return ModelReport(False, tree.key(), "order is not inclusion of atom sets")
    return ModelReport(True)


def check_codim_monotone(p: TreePoset) -> bool:
    return all(p.codims[a] < p.codims[b] for a, b in p.rel if a != b)


def concatenate(t: ObjectTuple, a: FlowTree, b: FlowTree) -> FlowTree:
    if a.edges[-1] != b.edges[0]:
        raise ValidationError(f"cannot concatenate: {a.edges[-1]!r} != {b.edges[0]!r}")
    return FlowTree(a.edges + b.edges[1:], a.labels + b.labels)


# -- faces ------------------------------------------------------------------------

def face(t: ObjectTuple, j: int) -> ObjectTuple:
    """Drop level j (the j-th face of the simplex)."""
    if not 0 <= j <= t.n:
        raise ValidationError(f"face index {j} out of range")
    return ObjectTuple(t.levels[:j] + t.levels[j + 1:])


def face_inclusion(t: ObjectTuple, j: int, tree: FlowTree) -> FlowTree:
    """Image in P of a tree of face(P, j): reindex levels and mark j as passed."""
    labels = []
    for (a, b), s in zip(zip(tree.edges, tree.edges[1:]), tree.labels):
        shifted = {v if v < j else v + 1 for v in s}
        if t.level(a) < j < t.level(b):
            shifted.add(j)
        labels.append(frozenset(shifted))
    return FlowTree(tree.edges, tuple(labels))


@dataclass
class FaceReport:
    passed: bool
    detail: str = ""


def check_face_identity(t: ObjectTuple, j: int, jp: int) -> FaceReport:
    """face(face(P, jp), j) == face(face(P, j), jp - 1) for j < jp, with matching inclusions."""
    if not j < jp:
        raise ValidationError("need j < jp")
    left = face(face(t, jp), j)
    right = face(face(t, j), jp - 1)
    if left != right:
        return FaceReport(False, "iterated faces differ as object tuples")
    f_jp, f_j = face(t, jp), face(t, j)
    objs = left.ordered()
    for x in objs:
        for y in objs:
            if objs.index(x) >= objs.index(y):
                continue
            for tree in enumerate_trees(left, x, y):
                a = face_inclusion(t, jp, face_inclusion(f_jp, j, tree))
                b = face_inclusion(t, j, face_inclusion(f_j, jp - 1, tree))
                if a != b:
                    return FaceReport(False, f"inclusions disagree on {tree.key()}")
                if codim(t, a) != codim(left, tree):
                    return FaceReport(False, f"codim not preserved on {tree.key()}")
    return FaceReport(True)


def all_posets(t: ObjectTuple) -> Iterable[TreePoset]:
    objs = t.ordered()
    for a in range(len(objs)):
        for b in range(a + 1, len(objs)):
            yield enumerate_poset(t, objs[a], objs[b])
