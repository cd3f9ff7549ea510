"""Exact arithmetic substrate: rational scalars, dense polynomials, reduced
rational functions.

Scalars are ``fractions.Fraction`` throughout, so every identity proved by the
rest of the package is a statement about integers, never about floats.
Polynomials store coefficients lowest degree first with trailing zeros
stripped.  Rational functions are reduced on construction to a canonical form
(coprime numerator and denominator, jointly primitive integer coefficients,
positive denominator leading coefficient), which makes ``==`` a reliable
equality test and keeps JSON output readable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[Fraction, int, str]

__all__ = [
    "Polynomial",
    "RationalFunction",
    "as_fraction",
    "format_fraction",
    "poly_interpolate",
    "rf_compose_moebius",
    "rf_equal",
    "rf_proportional",
    "solve_linear",
    "matrix_rank",
    "nullspace",
]


def as_fraction(value: Scalar) -> Fraction:
    """Coerce ints, Fractions, and 'num/den' strings to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):  # bool is an int subclass; reject it
        raise TypeError("bool is not a rational scalar")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"not an exact rational scalar: {value!r}")


def format_fraction(value: Fraction) -> str:
    """Render a Fraction as 'num/den', or plain 'num' for integers."""
    return str(value)


def _sorted_divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k != n // k:
                large.append(n // k)
        k += 1
    return small + large[::-1]


class Polynomial:
    """Dense univariate polynomial over Fraction, lowest coefficient first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def constant(cls, value: Scalar) -> "Polynomial":
        return cls([as_fraction(value)])

    @classmethod
    def linear(cls, c0: Scalar, c1: Scalar) -> "Polynomial":
        """The polynomial c0 + c1*x."""
        return cls([as_fraction(c0), as_fraction(c1)])

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    @property
    def leading(self) -> Fraction:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __call__(self, x: Scalar) -> Fraction:
        x = as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Polynomial([other])
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(
            [self.coefficient(k) + other.coefficient(k) for k in range(n)]
        )

    def __radd__(self, other) -> "Polynomial":
        return self.__add__(other)

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return Polynomial([c * other for c in self.coeffs])
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    def __rmul__(self, other) -> "Polynomial":
        return self.__mul__(other)

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        out = Polynomial([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    @staticmethod
    def _coerce(other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial([other])
        raise TypeError(f"cannot combine Polynomial with {other!r}")

    def divmod(self, divisor: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        """Euclidean division: self = q*divisor + r with deg r < deg divisor."""
        if divisor.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dlead = divisor.leading
        dd = divisor.degree
        q = [Fraction(0)] * max(len(rem) - dd, 0)
        for k in range(len(rem) - dd - 1, -1, -1):
            factor = rem[k + dd] / dlead
            if factor == 0:
                continue
            q[k] = factor
            for j, c in enumerate(divisor.coeffs):
                rem[k + j] -= factor * c
        return Polynomial(q), Polynomial(rem)

    @staticmethod
    def gcd(a: "Polynomial", b: "Polynomial") -> "Polynomial":
        """Monic greatest common divisor; gcd(0, 0) is the zero polynomial."""
        while not b.is_zero:
            a, b = b, a.divmod(b)[1]
        if a.is_zero:
            return a
        return a * (1 / a.leading)

    def derivative(self) -> "Polynomial":
        return Polynomial([k * c for k, c in enumerate(self.coeffs)][1:])

    def primitive_integer_coeffs(self) -> tuple[int, ...]:
        """Integer coefficient tuple after clearing denominators and content.

        The sign is normalized so the leading entry is positive.
        """
        if self.is_zero:
            return ()
        from math import gcd, lcm

        denom = lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * denom) for c in self.coeffs]
        content = gcd(*ints)
        ints = [c // content for c in ints]
        if ints[-1] < 0:
            ints = [-c for c in ints]
        return tuple(ints)

    def rational_roots(self) -> list[tuple[Fraction, int]]:
        """All rational roots with multiplicities, sorted increasing."""
        if self.is_zero:
            raise ValueError("zero polynomial vanishes everywhere")
        roots: dict[Fraction, int] = {}
        work = self
        # factor out x^k first
        zero_mult = 0
        while not work.is_zero and work.coefficient(0) == 0:
            work = Polynomial(work.coeffs[1:])
            zero_mult += 1
        if zero_mult:
            roots[Fraction(0)] = zero_mult
        while work.degree >= 1:
            ints = work.primitive_integer_coeffs()
            found = None
            for p in _sorted_divisors(ints[0]):
                for q in _sorted_divisors(ints[-1]):
                    for cand in (Fraction(p, q), Fraction(-p, q)):
                        if work(cand) == 0:
                            found = cand
                            break
                    if found is not None:
                        break
                if found is not None:
                    break
            if found is None:
                break
            work = work.divmod(Polynomial([-found, 1]))[0]
            roots[found] = roots.get(found, 0) + 1
        return sorted(roots.items())

    def format(self, var: str = "x") -> str:
        """Human-readable form like '-1 + 3x' or '2x^2'."""
        if self.is_zero:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(format_fraction(c))
                continue
            power = var if k == 1 else f"{var}^{k}"
            if c == 1:
                term = power
            elif c == -1:
                term = f"-{power}"
            else:
                term = f"{format_fraction(c)}{power}"
            parts.append(term)
        out = parts[0]
        for term in parts[1:]:
            out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
        return out

    def __repr__(self) -> str:
        return f"Polynomial([{', '.join(str(c) for c in self.coeffs)}])"


class RationalFunction:
    """Quotient of two polynomials, held in canonical reduced form."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=Polynomial([1])):
        num = Polynomial._coerce(num)
        den = Polynomial._coerce(den)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero:
            object.__setattr__(self, "num", Polynomial())
            object.__setattr__(self, "den", Polynomial([1]))
            return
        g = Polynomial.gcd(num, den)
        if g.degree >= 1:
            num = num.divmod(g)[0]
            den = den.divmod(g)[0]
        from math import gcd, lcm

        all_coeffs = num.coeffs + den.coeffs
        scale = Fraction(
            lcm(*(c.denominator for c in all_coeffs)),
            gcd(*(c.numerator for c in all_coeffs)),
        )
        if den.leading < 0:
            scale = -scale
        object.__setattr__(self, "num", num * scale)
        object.__setattr__(self, "den", den * scale)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def constant(cls, value: Scalar) -> "RationalFunction":
        return cls(Polynomial([as_fraction(value)]))

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __call__(self, x: Scalar) -> Fraction:
        x = as_fraction(x)
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at x = {x}")
        return self.num(x) / d

    def eval_float(self, x: float) -> float:
        return self.num.eval_float(x) / self.den.eval_float(x)

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, Polynomial)):
            return self == RationalFunction(Polynomial._coerce(other))
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    @staticmethod
    def _coerce_rf(other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        return RationalFunction(Polynomial._coerce(other))

    def __add__(self, other) -> "RationalFunction":
        other = self._coerce_rf(other)
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __radd__(self, other) -> "RationalFunction":
        return self.__add__(other)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> "RationalFunction":
        return self + (-self._coerce_rf(other))

    def __rsub__(self, other) -> "RationalFunction":
        return self._coerce_rf(other) - self

    def __mul__(self, other) -> "RationalFunction":
        if isinstance(other, (int, Fraction)):
            return RationalFunction(self.num * other, self.den)
        other = self._coerce_rf(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __rmul__(self, other) -> "RationalFunction":
        return self.__mul__(other)

    def __truediv__(self, other) -> "RationalFunction":
        other = self._coerce_rf(other)
        if other.is_zero:
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def format(self, var: str = "x") -> str:
        num = self.num.format(var)
        den = self.den.format(var)
        if den == "1":
            return num
        if self.num.degree >= 1:
            num = f"({num})"
        if self.den.degree >= 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def to_json(self) -> dict:
        return {
            "num": [format_fraction(c) for c in self.num.coeffs],
            "den": [format_fraction(c) for c in self.den.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "RationalFunction":
        return cls(Polynomial(data["num"]), Polynomial(data["den"]))


def poly_interpolate(points: Sequence[tuple[Scalar, Scalar]]) -> Polynomial:
    """Unique polynomial of degree < n through n points, by Newton differences.

    Raises ValueError on a duplicate node.
    """
    xs = [as_fraction(x) for x, _ in points]
    ys = [as_fraction(y) for _, y in points]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate node")
    if not xs:
        return Polynomial()
    # divided differences
    coeffs = list(ys)
    for level in range(1, len(xs)):
        for i in range(len(xs) - 1, level - 1, -1):
            coeffs[i] = (coeffs[i] - coeffs[i - 1]) / (xs[i] - xs[i - level])
    # expand the Newton form
    result = Polynomial()
    basis = Polynomial([1])
    for i, c in enumerate(coeffs):
        result = result + basis * c
        basis = basis * Polynomial([-xs[i], 1])
    return result


def rf_compose_moebius(h: RationalFunction, v) -> RationalFunction:
    """Exact substitution h((n0 + n1 x)/(d0 + d1 x)).

    ``v`` is anything carrying integer or rational fields n0, n1, d0, d1 with
    n1*d0 != n0*d1.  Raises ValueError("singular map") otherwise.
    """
    n0, n1 = as_fraction(v.n0), as_fraction(v.n1)
    d0, d1 = as_fraction(v.d0), as_fraction(v.d1)
    if n1 * d0 - n0 * d1 == 0:
        raise ValueError("singular map")
    top = Polynomial([n0, n1])
    bottom = Polynomial([d0, d1])
    deg = max(h.num.degree, h.den.degree, 0)
    # clear the substituted denominator by bottom^deg on both sides
    tops = [Polynomial([1])]
    bottoms = [Polynomial([1])]
    for _ in range(deg):
        tops.append(tops[-1] * top)
        bottoms.append(bottoms[-1] * bottom)
    num = Polynomial()
    for k, c in enumerate(h.num.coeffs):
        num = num + tops[k] * bottoms[deg - k] * c
    den = Polynomial()
    for k, c in enumerate(h.den.coeffs):
        den = den + tops[k] * bottoms[deg - k] * c
    return RationalFunction(num, den)


def rf_equal(f: RationalFunction, g: RationalFunction) -> bool:
    """Exact equality via the cross-multiplied polynomial identity."""
    if f.num == g.num and f.den == g.den:
        return True
    return (f.num * g.den - g.num * f.den).is_zero


def rf_proportional(f: RationalFunction, g: RationalFunction) -> bool:
    """True when f = c*g for some nonzero rational constant c."""
    p = f.num * g.den
    q = g.num * f.den
    if p.is_zero or q.is_zero:
        return p.is_zero and q.is_zero
    if p.degree != q.degree:
        return False
    scale = p.leading / q.leading
    return p == q * scale


def solve_linear(
    matrix: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar]
) -> list[Fraction]:
    """Solve a small square system exactly by Gaussian elimination."""
    n = len(matrix)
    rows = [[as_fraction(c) for c in row] + [as_fraction(b)]
            for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular system")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [c * inv for c in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return [rows[r][n] for r in range(n)]


def _echelon(matrix: Sequence[Sequence[Scalar]]) -> list[list[Fraction]]:
    rows = [[as_fraction(c) for c in row] for row in matrix]
    if not rows:
        return rows
    ncols = len(rows[0])
    lead = 0
    for col in range(ncols):
        pivot = next((r for r in range(lead, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[lead], rows[pivot] = rows[pivot], rows[lead]
        inv = 1 / rows[lead][col]
        rows[lead] = [c * inv for c in rows[lead]]
        for r in range(len(rows)):
            if r != lead and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[lead])]
        lead += 1
        if lead == len(rows):
            break
    return rows


def matrix_rank(matrix: Sequence[Sequence[Scalar]]) -> int:
    return sum(1 for row in _echelon(matrix) if any(c != 0 for c in row))


def nullspace(matrix: Sequence[Sequence[Scalar]]) -> list[list[Fraction]]:
    """Basis of the right nullspace of a small exact matrix."""
    rows = _echelon(matrix)
    if not rows:
        return []
    ncols = len(rows[0])
    pivots: dict[int, int] = {}
    for r, row in enumerate(rows):
        for c, v in enumerate(row):
            if v != 0:
                pivots[c] = r
                break
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for col, r in pivots.items():
            vec[col] = -rows[r][free]
        basis.append(vec)
    return basis
