"""DG-nerve simplices assembled from vertex and face integral tables."""
from __future__ import annotations

from itertools import combinations
from typing import Mapping, Sequence

from ..dgmodule import ModuleMap, verify_dg_nerve_simplex
from ..errors import PreconditionError, ValidationError
from ..gca import GcaElement, GradedAlgebra
from .twisted import build_twisted_complex


def faces_of(n: int):
    for size in range(2, n + 2):
        yield from combinations(range(n + 1), size)


def simplex_from_twisted_data(vertices: Sequence[tuple[Mapping[str, int], Mapping]],
                              faces: Mapping[tuple, Mapping], ring: GradedAlgebra,
                              convention: str = "nerve"):
    """Build (objects, sigma) from tables and certify the DG-nerve identity.

    ``vertices[j] = (generators, I_j)`` gives the twisted complex at vertex
    j; ``faces[I][(src, tgt)]`` gives sigma_I, a map of degree 1 - mu from
    vertex I[0] to vertex I[-1].  Missing faces are zero.
    """
    objects = [build_twisted_complex(g, I, ring) for g, I in vertices]
    n = len(objects) - 1
    for I in faces:
        if tuple(I) not in set(faces_of(n)):
            raise ValidationError(f"face index {I} is not a sub-simplex of [0..{n}]")
    sigma = {}
    for I in faces_of(n):
        table = faces.get(I, {})
        mat: dict = {}
        for (s, t), c in table.items():
            if not isinstance(c, GcaElement):
                c = ring.scalar(c)
            mat.setdefault(s, {})[t] = c
        sigma[I] = ModuleMap(objects[I[0]], objects[I[-1]], mat, 1 - (len(I) - 1))
    rep = verify_dg_nerve_simplex(objects, sigma, convention)
    if not rep.passed:
        raise PreconditionError(f"face tables violate the Stokes identity at {rep.failing}",
                                witness={"face": list(rep.failing)})
    return objects, sigma


def face_table(f: ModuleMap) -> dict:
    return {(s, t): c for s, row in f.matrix.items() for t, c in row.items()}
