"""Mordell curves y^2 = x^3 + d over Q: exact group law, point order, torsion.

All coordinate arithmetic is exact (fractions.Fraction keeps everything in
lowest terms). Point order uses the Mazur bound (rational torsion order <= 12,
and only 1, 2, 3, 6 occur on Mordell curves) with a Nagell-Lutz integrality
test as a fast path. Torsion classification reduces d by sixth powers first,
since (x, y) -> (x/e^2, y/e^3) is an isomorphism from d to d/e^6.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .intmath import exact_cbrt, exact_sqrt, sixth_power_reduce


@dataclass(frozen=True)
class Point:
    """Affine rational point or the point at infinity (x = y = None)."""

    x: Fraction | None
    y: Fraction | None

    @classmethod
    def affine(cls, x, y) -> "Point":
        return cls(Fraction(x), Fraction(y))

    @classmethod
    def infinity(cls) -> "Point":
        return cls(None, None)

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __neg__(self) -> "Point":
        if self.is_infinity:
            return self
        return Point(self.x, -self.y)

    def __str__(self) -> str:
        return format_point(self)


INFINITY = Point.infinity()


@dataclass(frozen=True)
class TorsionGroup:
    """Torsion subgroup structure: one of trivial, Z2, Z3, Z6."""

    name: str
    order: int
    generator: Point | None

    def elements(self, curve: "MordellCurve") -> list[Point]:
        """All torsion points, identity included."""
        pts = [INFINITY]
        if self.generator is not None:
            q = self.generator
            while not q.is_infinity:
                pts.append(q)
                q = curve.add(q, self.generator)
        return pts


@dataclass(frozen=True)
class MordellCurve:
    """y^2 = x^3 + d with d a nonzero integer."""

    d: int

    def __post_init__(self):
        if self.d == 0:
            raise ValueError("d must be nonzero (the curve is singular for d = 0)")

    @property
    def discriminant(self) -> int:
        return -432 * self.d * self.d

    def __str__(self) -> str:
        return f"y^2 = x^3 + {self.d}" if self.d > 0 else f"y^2 = x^3 - {-self.d}"

    # -- membership ---------------------------------------------------------

    def contains(self, p: Point) -> bool:
        if p.is_infinity:
            return True
        return p.y * p.y == p.x**3 + self.d

    def require_on_curve(self, p: Point) -> Point:
        if not self.contains(p):
            raise ValueError(f"point {p} is not on {self}")
        return p

    # -- group law ------------------------------------------------------------

    def add(self, p: Point, q: Point) -> Point:
        if p.is_infinity:
            return q
        if q.is_infinity:
            return p
        if p.x == q.x:
            if p.y == -q.y:
                return INFINITY
            # p == q with y != 0: tangent slope
            slope = Fraction(3 * p.x * p.x, 2 * p.y)
        else:
            slope = (q.y - p.y) / (q.x - p.x)
        x3 = slope * slope - p.x - q.x
        y3 = slope * (p.x - x3) - p.y
        return Point(x3, y3)

    def negate(self, p: Point) -> Point:
        return -p

    def double(self, p: Point) -> Point:
        return self.add(p, p)

    def multiply(self, n: int, p: Point) -> Point:
        """n*p by double-and-add; 0*p is infinity, (-n)*p = -(n*p)."""
        if n < 0:
            return -self.multiply(-n, p)
        acc = INFINITY
        addend = p
        while n:
            if n & 1:
                acc = self.add(acc, addend)
            addend = self.add(addend, addend)
            n >>= 1
        return acc

    # -- torsion ----------------------------------------------------------------

    def order_of_point(self, p: Point) -> int | None:
        """Exact order if finite, else None.

        Torsion points have integer coordinates with y = 0 or y^2 | disc
        (Nagell-Lutz), so non-integral points are of infinite order without
        any multiplication. Otherwise order <= 12 by Mazur, and a Mordell
        curve only admits orders 1, 2, 3, 6.
        """
        if p.is_infinity:
            raise ValueError("the point at infinity has order 1; pass an affine point")
        self.require_on_curve(p)
        if p.x.denominator != 1 or p.y.denominator != 1:
            return None
        if p.y != 0 and self.discriminant % (p.y.numerator ** 2) != 0:
            return None
        q = p
        for n in range(1, 13):
            if q.is_infinity:
                return n
            q = self.add(q, p)
        return None

    def torsion_subgroup(self) -> TorsionGroup:
        """Classify torsion by the sixth-power-free part of d.

        d0 = 1 gives Z6; d0 a square != 1 or d0 = -432 gives Z3; d0 a cube
        != 1 gives Z2; anything else is trivial. Generators are mapped back
        to the original model through (x, y) -> (x*e^2, y*e^3).
        """
        d0, e = sixth_power_reduce(self.d)
        e2, e3 = e * e, e * e * e
        if d0 == 1:
            return TorsionGroup("Z6", 6, Point.affine(2 * e2, 3 * e3))
        r = exact_sqrt(d0)
        if r is not None:
            return TorsionGroup("Z3", 3, Point.affine(0, r * e3))
        if d0 == -432:
            return TorsionGroup("Z3", 3, Point.affine(12 * e2, 36 * e3))
        c = exact_cbrt(d0)
        if c is not None:
            return TorsionGroup("Z2", 2, Point.affine(-c * e2, 0))
        return TorsionGroup("trivial", 1, None)


# -- textual point format -------------------------------------------------------

_RAT = r"-?\d+(?:/\d+)?"
_POINT_RE = re.compile(rf"^\(\s*({_RAT})\s*,\s*({_RAT})\s*\)$")


def format_point(p: Point) -> str:
    """`(x, y)` with `num/den` components, or `O` for infinity."""
    if p.is_infinity:
        return "O"
    return f"({_format_rational(p.x)}, {_format_rational(p.y)})"


def _format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_point(text: str) -> Point:
    text = text.strip()
    if text == "O":
        return INFINITY
    m = _POINT_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse point {text!r}; expected `(x, y)` or `O`")
    return Point.affine(Fraction(m.group(1)), Fraction(m.group(2)))
