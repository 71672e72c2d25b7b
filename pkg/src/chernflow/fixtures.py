"""Small hand-built modules shared by the CLI demos, the tests and the acceptance runner."""
from __future__ import annotations

from .dgmodule import FreeDgModule
from .gca import polynomial_ring


def dx_hy(window=(-8, 4)) -> FreeDgModule:
    """x in degree 0, y in degree 3, dx = hbar y with |hbar| = -2.

    Homology is spanned by y alone; the spectral sequence has d_2 = 0 and
    d_3(x) = y.
    """
    R = polynomial_ring([("h", -2)])
    return FreeDgModule(R, [("x", 0), ("y", 3)], {"x": {"y": R.var("h")}}, window)


def bracket_fixture_ell4(window=(-6, 4)):
    """Module over Q[hbar], |hbar| = -2, whose hbar-linear part is a given bracket matrix.

    The hbar-free part is a Floer-type differential (c -> e, f -> g); the
    hbar-linear part sends a0, a1 into b0, b1 by the matrix returned with it.
    """
    R = polynomial_ring([("h", -2)])
    h = R.var("h")
    gens = [("a0", 0), ("a1", 0), ("f", 0), ("c", 1), ("g", 1), ("e", 2), ("b0", 3), ("b1", 3)]
    bracket = {"a0": {"b0": 1, "b1": 1}, "a1": {"b1": 2}}
    diff = {"c": {"e": 1}, "f": {"g": 1}, "a0": {"b0": h, "b1": h}, "a1": {"b1": h * 2}}
    return FreeDgModule(R, gens, diff, window), bracket


def bracket_fixture_ell3(window=(-4, 4)):
    """|hbar| = -1 (so hbar^2 = 0); d_2 is compared directly with the bracket."""
    R = polynomial_ring([("h", -1)])
    h = R.var("h")
    gens = [("a", 0), ("u", 1), ("v", 2), ("b", 2)]
    bracket = {"a": {"b": 3}}
    diff = {"u": {"v": 1}, "a": {"b": h * 3}}
    return FreeDgModule(R, gens, diff, window), bracket


def scalar_extension_fixtures() -> list[tuple[str, FreeDgModule]]:
    """Modules S (x) Z with S of non-positive degrees and Z a complex over Q."""
    out = []
    R1 = polynomial_ring([("h", -2)])
    out.append(("xy over Q[h]", FreeDgModule(R1, [("x", 0), ("y", 1)], {"x": {"y": 1}}, (-8, 3))))
    out.append(("CP2 Morse over Q[h]",
                 FreeDgModule(R1, [("p0", 0), ("p2", 2), ("p4", 4)], {}, (-6, 5))))
    R2 = polynomial_ring([("h1", -2), ("h2", -4)])
    out.append(("four cells over Q[h1, h2]",
                 FreeDgModule(R2, [("s", 0), ("t", 1), ("u", 1), ("w", 2)],
                              {"s": {"t": 1, "u": 1}, "t": {"w": 2}, "u": {"w": -2}}, (-8, 3))))
    R3 = polynomial_ring([("h", -1)])
    out.append(("circle over Q[h], odd h",
                 FreeDgModule(R3, [("m", 0), ("n", 1)], {"m": {"n": 0}}, (-3, 2))))
    return out


def spectral_fixtures() -> list[tuple[str, FreeDgModule]]:
    return scalar_extension_fixtures() + [("dx = hbar y", dx_hy()),
                                          ("ell = 4 bracket", bracket_fixture_ell4()[0]),
                                          ("ell = 3 bracket", bracket_fixture_ell3()[0])]
