"""Independent sign oracle: orientations as ordered lists of graded slots.

Every identification in the commuting square of virtual bundles is modelled
as a rearrangement of a list of ``(name, dim)`` slots.  Rearranging costs the
Koszul sign (-1)^{sum of dim(a) dim(b) over swapped pairs}.  The trivial
bundle R^m attached to levels is a list of one-dimensional coordinate slots
in *decreasing* level order, which is what makes R^a + R^b = R^{a+b} cost
(-1)^{ab}.  Nothing here refers to the closed-form exponents.
"""
from __future__ import annotations

from .signs import SignContext


def permutation_sign(before: list, after: list) -> int:
    """Koszul sign of reordering graded slots; ``after`` must permute ``before``."""
    names = [n for n, _ in before]
    if sorted(names) != sorted(n for n, _ in after) or len(set(names)) != len(names):
        raise ValueError("slot lists are not permutations of each other")
    dims = dict(before)
    pos = {n: i for i, (n, _) in enumerate(after)}
    e = 0
    for a in range(len(before)):
        for b in range(a + 1, len(before)):
            na, nb = names[a], names[b]
            if pos[na] > pos[nb]:
                e += dims[na] * dims[nb]
    return -1 if e % 2 else 1


def coords(tag: str, levels) -> list:
    """Trivial bundle on the given levels, oriented in decreasing level order."""
    return [(f"{tag}{l}", 1) for l in sorted(levels, reverse=True)]


def _replace(slots: list, old: list, new: list) -> list:
    """Swap the contiguous block ``old`` for ``new`` (an orientation-defining map, sign +1)."""
    names = [n for n, _ in slots]
    first = names.index(old[0][0])
    if names[first:first + len(old)] != [n for n, _ in old]:
        raise ValueError("block is not contiguous")
    return slots[:first] + new + slots[first + len(old):]


def oracle_product(c: SignContext) -> int:
    """Sign comparing the product orientation of X_xz x X_zy with its boundary orientation."""
    sign = 1
    TXxz, Ra, TXzy = ("TXxz", 0), ("Ra", 1), ("TXzy", c.dim_X_zy)
    Vy, Rb = ("Vy", c.y), ("Rb", 1)
    Izy, Vz, Vx = ("Izy", c.dim_I_zy), ("Vz", c.z), ("Vx", c.x)
    Rzy = coords("c", range(c.k + 1, c.jp + 1))
    Rxz = coords("c", range(c.j + 1, c.k + 1))
    start = [TXxz, Ra, TXzy, Vy, Rb]
    # right path: unfold the zy factor, then the xz factor, then merge
    s = _replace(start, [TXzy, Vy, Rb], [Izy] + Rzy + [Vz])
    t = [TXxz, Vz, Ra, Izy] + Rzy
    sign *= permutation_sign(s, t)
    s = _replace(t, [TXxz, Vz, Ra], [("Ixz", 0)] + Rxz + [Vx])
    t = [("Ixz", 0), Izy] + Rxz + Rzy + [Vx]
    sign *= permutation_sign(s, t)
    if c.z % 2:  # I_xz + I_zy = I_xy carries (-1)^{|z|} by definition
        sign = -sign
    merged = coords("c", range(c.j + 1, c.jp + 1))
    sign *= permutation_sign(Rxz + Rzy, merged)
    # down path: move the collar coordinate Ra to the front of TX_zy, then
    # outward versus inward normal
    down = permutation_sign(start, [TXxz, TXzy, Ra, Vy, Rb]) * -1
    return sign * down


def oracle_face(c: SignContext) -> int:
    """Sign comparing the face orientation at level k with the boundary orientation."""
    if not (c.j < c.k < c.jp):
        raise ValueError("face needs j < k < jp")
    dX, Rk, Vy, Rb = ("dX", 0), (f"c{c.k}", 1), ("Vy", c.y), ("Rb", 1)
    Ixy, Vx = ("Ixy", 0), ("Vx", c.x)
    hat = coords("c", [l for l in range(c.j + 1, c.jp + 1) if l != c.k])
    start = [dX, Rk, Vy, Rb]
    sign = 1
    t = [dX, Vy, Rb, Rk]
    sign *= permutation_sign(start, t)
    s = _replace(t, [dX, Vy, Rb], [Ixy] + hat + [Vx])
    t = [Ixy] + hat + [Rk, Vx]
    sign *= permutation_sign(s, t)
    sign *= permutation_sign(hat + [Rk], coords("c", range(c.j + 1, c.jp + 1)))
    down = -1  # the collar coordinate already sits next to dX; only the normal flips
    return sign * down
