"""Closed-form orientation signs for products and faces of flow simplices."""
from __future__ import annotations

import random
from dataclasses import asdict, dataclass, fields


@dataclass(frozen=True)
class SignContext:
    """Integers entering the product and face sign formulas.

    x lies on level j, z on level k and y on level jp (j <= k <= jp).
    ``dim_I_zy`` is the rank of the index bundle I(z, y) and ``dim_X_zy`` the
    dimension of the moduli space X_{zy}; ``dim_X_xz`` and ``dim_I_xz`` only
    enter the parity hypotheses of the reduced formulas.
    """
    x: int
    y: int
    z: int
    j: int
    k: int
    jp: int
    dim_I_zy: int = 0
    dim_X_zy: int = 0
    dim_I_xz: int = 0
    dim_X_xz: int = 0

    def __post_init__(self):
        for f in fields(self):
            if not isinstance(getattr(self, f.name), int):
                raise TypeError(f"{f.name} must be an integer")
        if not (self.j <= self.k <= self.jp):
            raise ValueError("levels must satisfy j <= k <= jp")

    def to_json(self) -> dict:
        return asdict(self)


def product_exponent(c: SignContext) -> int:
    dI = c.dim_I_zy
    return (c.z * (1 + dI + c.jp - c.k) + c.x * (dI + c.jp - c.k) + dI * (c.k - c.j)
            + c.z + (c.jp - c.k) * (c.k - c.j) - c.dim_X_zy - 1)


def face_exponent(c: SignContext) -> int:
    return c.y + 1 + c.x + c.k - c.j


def koszul_sign_product(c: SignContext) -> int:
    return -1 if product_exponent(c) % 2 else 1


def koszul_sign_face(c: SignContext) -> int:
    return -1 if face_exponent(c) % 2 else 1


def random_context(rng: random.Random, span: int = 6, strict: bool = False) -> SignContext:
    """Uniform small context; ``strict`` forces j < k < jp (needed for faces)."""
    lo = 1 if strict else 0
    j = rng.randint(0, 3)
    k = j + rng.randint(lo, 3)
    jp = k + rng.randint(lo, 3)
    r = lambda: rng.randint(-span, span)  # noqa: E731
    return SignContext(r(), r(), r(), j, k, jp, r(), r(), r(), r())


def even_product_context(rng: random.Random) -> SignContext:
    """Random context meeting the even-dimension hypotheses of the reduced product sign.

    dim X_xz = |x| - |z| + k - j - 1 is forced even; all other dims even.
    """
    while True:
        c = random_context(rng)
        if (c.x - c.z + c.k - c.j - 1) % 2 == 0:
            ev = lambda v: v - (v % 2)  # noqa: E731
            return SignContext(c.x, c.y, c.z, c.j, c.k, c.jp, ev(c.dim_I_zy), ev(c.dim_X_zy),
                               ev(c.dim_I_xz), c.x - c.z + c.k - c.j - 1)


def even_face_context(rng: random.Random) -> SignContext:
    """Random context with dim X_xy = |x| - |y| + jp - j - 1 even and j < k < jp."""
    while True:
        c = random_context(rng)
        if c.j < c.k < c.jp and (c.x - c.y + c.jp - c.j - 1) % 2 == 0:
            return c
