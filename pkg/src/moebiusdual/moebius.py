"""Fractional-linear maps of the projective line over the rationals.

A map x -> (n0 + n1 x)/(d0 + d1 x) is stored as a primitive integer quadruple
(n0, n1, d0, d1) with gcd 1 and the sign fixed so d0 > 0, or d0 = 0 and
d1 > 0.  This makes structural equality coincide with equality as maps.  The
associated 2x2 matrix has rows (n1, n0) and (d1, d0), so composition is matrix
multiplication and the transpose gives the dual branch used by the symmetry
machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Union

from .exactnum import (
    Polynomial,
    RationalFunction,
    Scalar,
    as_fraction,
    format_fraction,
)

__all__ = [
    "DegenerateMapError",
    "INFINITY",
    "ProjPoint",
    "MoebiusMap",
    "FixedPoints",
    "make_map",
]


class DegenerateMapError(ValueError):
    """Raised when a quadruple has zero determinant."""


@dataclass(frozen=True, order=False)
class ProjPoint:
    """A rational point of the projective line, or the point at infinity.

    ``value`` is None exactly for infinity.  Ordering treats infinity as
    larger than every finite point, which matches its use as the top end of
    dual rays [c, inf).
    """

    value: Optional[Fraction]

    @classmethod
    def of(cls, value: Scalar) -> "ProjPoint":
        return cls(as_fraction(value))

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    @property
    def finite(self) -> Fraction:
        if self.value is None:
            raise ValueError("point at infinity has no finite value")
        return self.value

    def __lt__(self, other: "ProjPoint") -> bool:
        if self.is_infinite:
            return False
        if other.is_infinite:
            return True
        return self.value < other.value

    def __le__(self, other: "ProjPoint") -> bool:
        return self == other or self < other

    def __gt__(self, other: "ProjPoint") -> bool:
        return other < self

    def __ge__(self, other: "ProjPoint") -> bool:
        return other <= self

    def __str__(self) -> str:
        return "inf" if self.value is None else format_fraction(self.value)

    def __repr__(self) -> str:
        return f"ProjPoint({self})"


INFINITY = ProjPoint(None)

PointLike = Union[ProjPoint, Fraction, int, str]


def _as_point(x: PointLike) -> ProjPoint:
    if isinstance(x, ProjPoint):
        return x
    return ProjPoint.of(x)


@dataclass(frozen=True)
class FixedPoints:
    """Solutions of f(x) = x.

    ``points`` lists rational or infinite fixed points with multiplicity.  If
    the finite fixed points form an irrational conjugate pair (or a complex
    one), ``points`` omits them and ``quadratic`` carries the exact quadratic
    they satisfy.
    """

    points: tuple[ProjPoint, ...]
    quadratic: Optional[Polynomial] = None


@dataclass(frozen=True)
class MoebiusMap:
    """x -> (n0 + n1 x)/(d0 + d1 x) as a primitive integer quadruple."""

    n0: int
    n1: int
    d0: int
    d1: int

    def __post_init__(self):
        if self.n1 * self.d0 - self.n0 * self.d1 == 0:
            raise DegenerateMapError("degenerate map")
        g = gcd(self.n0, self.n1, self.d0, self.d1)
        sign = 1 if (self.d0 > 0 or (self.d0 == 0 and self.d1 > 0)) else -1
        if g != sign:
            g *= sign
            object.__setattr__(self, "n0", self.n0 // g)
            object.__setattr__(self, "n1", self.n1 // g)
            object.__setattr__(self, "d0", self.d0 // g)
            object.__setattr__(self, "d1", self.d1 // g)

    @classmethod
    def make(cls, n0: Scalar, n1: Scalar, d0: Scalar, d1: Scalar) -> "MoebiusMap":
        """Build from rational entries by clearing denominators."""
        fracs = [as_fraction(v) for v in (n0, n1, d0, d1)]
        from math import lcm

        scale = lcm(*(f.denominator for f in fracs))
        return cls(*(int(f * scale) for f in fracs))

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(0, 1, 1, 0)

    @property
    def is_identity(self) -> bool:
        return (self.n0, self.n1, self.d0, self.d1) == (0, 1, 1, 0)

    @property
    def det(self) -> int:
        return self.n1 * self.d0 - self.n0 * self.d1

    @property
    def is_linear(self) -> bool:
        return self.d1 == 0

    def quadruple(self) -> tuple[int, int, int, int]:
        return (self.n0, self.n1, self.d0, self.d1)

    def evaluate(self, x: PointLike) -> ProjPoint:
        p = _as_point(x)
        if p.is_infinite:
            if self.d1 == 0:
                return INFINITY
            return ProjPoint(Fraction(self.n1, self.d1))
        v = p.finite
        den = self.d0 + self.d1 * v
        if den == 0:
            return INFINITY
        return ProjPoint(Fraction(self.n0 + self.n1 * v, den))

    def __call__(self, x: PointLike) -> ProjPoint:
        return self.evaluate(x)

    def evaluate_float(self, x: float) -> float:
        return (self.n0 + self.n1 * x) / (self.d0 + self.d1 * x)

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """self after other, by 2x2 matrix multiplication."""
        # rows (n1, n0) / (d1, d0) on each side
        n1 = self.n1 * other.n1 + self.n0 * other.d1
        n0 = self.n1 * other.n0 + self.n0 * other.d0
        d1 = self.d1 * other.n1 + self.d0 * other.d1
        d0 = self.d1 * other.n0 + self.d0 * other.d0
        return MoebiusMap(n0, n1, d0, d1)

    def invert(self) -> "MoebiusMap":
        """Inverse map, from the adjugate matrix."""
        return MoebiusMap(-self.n0, self.d0, self.n1, -self.d1)

    def transpose_dual(self) -> "MoebiusMap":
        """The map of the transposed matrix; an involution."""
        return MoebiusMap(self.d1, self.n1, self.d0, self.n0)

    def jacobian(self) -> RationalFunction:
        """|det| / (d0 + d1 x)^2, the derivative magnitude on any interval
        where the denominator keeps one sign."""
        return RationalFunction(
            Polynomial([abs(self.det)]),
            Polynomial([self.d0, self.d1]) * Polynomial([self.d0, self.d1]),
        )

    def fixed_point_quadratic(self) -> Polynomial:
        """d1 x^2 + (d0 - n1) x - n0, whose roots are the finite fixed points."""
        return Polynomial([-self.n0, self.d0 - self.n1, self.d1])

    def fixed_points(self) -> FixedPoints:
        """All solutions of f(x) = x on the projective line."""
        if self.is_identity:
            raise ValueError("all points fixed")
        q = self.fixed_point_quadratic()
        if self.d1 == 0:
            if self.d0 == self.n1:
                # translation: infinity is a double fixed point
                return FixedPoints((INFINITY, INFINITY))
            return FixedPoints(
                (ProjPoint(Fraction(self.n0, self.d0 - self.n1)), INFINITY)
            )
        a, b, c = self.d1, self.d0 - self.n1, -self.n0
        disc = b * b - 4 * a * c
        if disc < 0:
            return FixedPoints((), q)
        from math import isqrt

        root = isqrt(disc)
        if root * root != disc:
            return FixedPoints((), q)
        x1 = Fraction(-b - root, 2 * a)
        x2 = Fraction(-b + root, 2 * a)
        pts = tuple(ProjPoint(v) for v in sorted((x1, x2)))
        return FixedPoints(pts)

    def conjugate_reflect(self) -> "MoebiusMap":
        """Conjugation by the reflection x -> 1 - x of the unit interval."""
        psi = MoebiusMap(1, -1, 1, 0)
        return psi.compose(self).compose(psi)

    def display(self) -> str:
        """Short form like '(1+5x)/(3+6x)', 'x/(1+2x)', or '(-1+3x)/3'."""
        num = Polynomial([self.n0, self.n1]).format().replace(" ", "")
        den = Polynomial([self.d0, self.d1]).format().replace(" ", "")
        if den == "1":
            return num
        if self.n1 != 0 and self.n0 != 0:
            num = f"({num})"
        if self.d1 != 0:
            den = f"({den})"
        return f"{num}/{den}"

    def to_json(self) -> dict:
        return {
            "n0": str(self.n0),
            "n1": str(self.n1),
            "d0": str(self.d0),
            "d1": str(self.d1),
        }

    @classmethod
    def from_json(cls, data: dict) -> "MoebiusMap":
        return cls.make(data["n0"], data["n1"], data["d0"], data["d1"])

    def __repr__(self) -> str:
        return f"MoebiusMap[{self.display()}]"


def make_map(n0: Scalar, n1: Scalar, d0: Scalar, d1: Scalar) -> MoebiusMap:
    """Canonical map from rational coefficients of (n0 + n1 x)/(d0 + d1 x)."""
    return MoebiusMap.make(n0, n1, d0, d1)
