"""Invariant densities and transfer operators, exact where it counts.

The transfer operator of a piecewise-invertible map sends a density h to
sum_i h(V_i(x)) * |V_i'(x)| over the inverse branches V_i.  For the jump
transformation all three branches are full, so the sum is a single rational
function and invariance is a polynomial identity.  For the base map T the
operator acts piecewise.

Closed-form normalization integrates rational functions whose denominators
split into rational linear factors, via exact partial fractions; the result
is cross-checked against adaptive quadrature.  A denominator root at a
domain endpoint means the mass diverges there and the density is only
sigma-finite; that is reported as None rather than an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .exactnum import (
    Polynomial,
    RationalFunction,
    as_fraction,
    format_fraction,
    rf_compose_moebius,
    solve_linear,
)
from .systems import JumpSystem, SystemSpec, TypeVector, build_branches, build_jump

__all__ = [
    "RationalDensity",
    "PiecewiseDensity",
    "DensityCDF",
    "transfer_jump",
    "invariance_residual",
    "closed_form_density",
    "lift_density",
    "transfer_base",
    "normalize",
    "cdf_eval",
    "make_cdf",
]

QUAD_CHECK_TOL = 1e-10


@dataclass(frozen=True)
class RationalDensity:
    """A density candidate given by a single rational function."""

    rf: RationalFunction

    def __call__(self, x) -> Fraction:
        return self.rf(x)

    def eval_float(self, x: float) -> float:
        return self.rf.eval_float(x)

    def assert_positive_on(self, lo: Fraction, hi: Fraction) -> None:
        """Reject poles strictly inside (lo, hi) and sampled non-positivity."""
        for root, _ in self.rf.den.rational_roots():
            if lo < root < hi:
                raise ValueError(f"pole at x = {root} inside ({lo}, {hi})")
        for k in range(1, 22):
            x = lo + (hi - lo) * Fraction(k, 22)
            if self.rf(x) <= 0:
                raise ValueError(f"not positive at x = {x}")

    def format(self) -> str:
        return self.rf.format()

    def to_json(self) -> dict:
        return self.rf.to_json()

    @classmethod
    def from_json(cls, data: dict) -> "RationalDensity":
        return cls(RationalFunction.from_json(data))


@dataclass(frozen=True)
class PiecewiseDensity:
    """One rational function per cell of the partition (left, middle, right)."""

    p1: Fraction
    p2: Fraction
    pieces: tuple[RationalFunction, RationalFunction, RationalFunction]

    def piece_at(self, x) -> RationalFunction:
        # right-closed: x = p1 middle, x = p2 right
        x = as_fraction(x)
        if x < self.p1:
            return self.pieces[0]
        if x < self.p2:
            return self.pieces[1]
        return self.pieces[2]

    def __call__(self, x) -> Fraction:
        return self.piece_at(x)(x)

    def cells(self) -> tuple[tuple[Fraction, Fraction], ...]:
        return (
            (Fraction(0), self.p1),
            (self.p1, self.p2),
            (self.p2, Fraction(1)),
        )

    def to_json(self) -> dict:
        return {
            "breakpoints": [format_fraction(self.p1), format_fraction(self.p2)],
            "pieces": [rf.to_json() for rf in self.pieces],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PiecewiseDensity":
        p1, p2 = (as_fraction(v) for v in data["breakpoints"])
        pieces = tuple(RationalFunction.from_json(p) for p in data["pieces"])
        return cls(p1, p2, pieces)


Density = Union[RationalDensity, PiecewiseDensity]


def transfer_jump(h: RationalDensity, js: JumpSystem) -> RationalDensity:
    """Push h through the transfer operator of the jump transformation."""
    total = RationalFunction(Polynomial())
    for branch in js.maps():
        total = total + rf_compose_moebius(h.rf, branch) * branch.jacobian()
    return RationalDensity(total)


def invariance_residual(h: RationalDensity, js: JumpSystem) -> RationalFunction:
    """Transfer image minus the input; identically zero iff h is invariant."""
    return transfer_jump(h, js).rf - h.rf


def closed_form_density(type_vector: TypeVector, beta) -> RationalDensity:
    """The known invariant density of the jump map at partition (1/3, 2/3).

    Only the two dual-admitting orientation types have one:
    (+,+,+) gives 1/((2-beta+3beta*x)(2+3beta*x)) and (+,-,+) gives
    1/((4+beta+3beta*x)(4+3beta*x)).  At beta = 0 both collapse to a
    constant, the Lebesgue case.
    """
    beta = as_fraction(beta)
    if not (-1 < beta <= 2):
        raise ValueError(f"beta = {beta} outside (-1, 2]")
    if isinstance(type_vector, tuple):
        type_vector = TypeVector(*type_vector)
    signs = type_vector.signs()
    if signs == (1, 1, 1):
        den = Polynomial([2 - beta, 3 * beta]) * Polynomial([2, 3 * beta])
    elif signs == (1, -1, 1):
        den = Polynomial([4 + beta, 3 * beta]) * Polynomial([4, 3 * beta])
    else:
        raise ValueError(f"no closed-form density for type {type_vector}")
    return RationalDensity(RationalFunction(Polynomial([1]), den))


def lift_density(h: RationalDensity, spec: SystemSpec) -> PiecewiseDensity:
    """Extend an S-invariant density to a T-invariant piecewise density.

    The outer cells keep h; the middle cell gains the mass in transit
    through the outer cells: h + h(V_alpha x) w_alpha(x) + h(V_gamma x)
    w_gamma(x).  Raises ValueError if h is not S-invariant.
    """
    js = build_jump(spec)
    if not invariance_residual(h, js).is_zero:
        raise ValueError("input not S-invariant")
    branches = build_branches(spec)
    middle = (
        h.rf
        + rf_compose_moebius(h.rf, branches.inv_alpha) * branches.inv_alpha.jacobian()
        + rf_compose_moebius(h.rf, branches.inv_gamma) * branches.inv_gamma.jacobian()
    )
    out = PiecewiseDensity(spec.p1, spec.p2, (h.rf, middle, h.rf))
    for rf, (lo, hi) in zip(out.pieces, out.cells()):
        RationalDensity(rf).assert_positive_on(lo, hi)
    return out


def transfer_base(g: PiecewiseDensity, spec: SystemSpec) -> PiecewiseDensity:
    """Push a piecewise density through the transfer operator of T.

    Every cell receives the middle-branch term g_mid(V_beta x) w_beta(x),
    because V_beta lands in the middle cell; the middle cell additionally
    receives the two outer-branch terms evaluated with the outer pieces.
    """
    branches = build_branches(spec)
    g_left, g_mid, g_right = g.pieces
    beta_term = (
        rf_compose_moebius(g_mid, branches.inv_beta) * branches.inv_beta.jacobian()
    )
    middle = (
        beta_term
        + rf_compose_moebius(g_left, branches.inv_alpha)
        * branches.inv_alpha.jacobian()
        + rf_compose_moebius(g_right, branches.inv_gamma)
        * branches.inv_gamma.jacobian()
    )
    return PiecewiseDensity(spec.p1, spec.p2, (beta_term, middle, beta_term))


# ---------------------------------------------------------------------------
# exact integration of rational functions with rational-splitting denominators


@dataclass(frozen=True)
class _Antiderivative:
    """Closed-form antiderivative: polynomial + logs + negative powers."""

    poly: Polynomial
    logs: tuple[tuple[Fraction, Fraction], ...]       # coef * ln|x - root|
    powers: tuple[tuple[Fraction, Fraction, int], ...]  # coef * (x - root)^(-k)

    def den_roots(self) -> set[Fraction]:
        return {r for _, r in self.logs} | {r for _, r, _ in self.powers}

    def eval_float(self, x: float) -> float:
        acc = self.poly.eval_float(x)
        for coef, root in self.logs:
            acc += float(coef) * math.log(abs(x - float(root)))
        for coef, root, k in self.powers:
            acc += float(coef) * (x - float(root)) ** (-k)
        return acc

    def eval_array(self, xs: np.ndarray) -> np.ndarray:
        acc = np.zeros_like(xs, dtype=float)
        for c in reversed(self.poly.coeffs):
            acc = acc * xs + float(c)
        for coef, root in self.logs:
            acc = acc + float(coef) * np.log(np.abs(xs - float(root)))
        for coef, root, k in self.powers:
            acc = acc + float(coef) * (xs - float(root)) ** (-k)
        return acc


def _split_denominator(den: Polynomial) -> list[tuple[Fraction, int]]:
    """Rational roots with multiplicity; error if any factor resists."""
    roots = den.rational_roots()
    if sum(m for _, m in roots) != den.degree:
        raise ValueError("denominator does not split over the rationals")
    return roots


def _build_antiderivative(rf: RationalFunction) -> _Antiderivative:
    poly_part, remainder = rf.num.divmod(rf.den)
    poly_anti = Polynomial(
        [Fraction(0)] + [c / (k + 1) for k, c in enumerate(poly_part.coeffs)]
    )
    if remainder.is_zero:
        return _Antiderivative(poly_anti, (), ())
    roots = _split_denominator(rf.den)
    lead = rf.den.leading
    # remainder/den = sum over roots r, powers j of c[r,j] / (x - r)^j;
    # multiplying by the monic denominator product gives one linear
    # equation per coefficient of remainder/lead
    unknowns = [(root, j) for root, mult in roots for j in range(1, mult + 1)]
    columns = []
    for root, j in unknowns:
        col = Polynomial([1])
        for other, mult in roots:
            power = mult - j if other == root else mult
            col = col * Polynomial([-other, 1]) ** power
        columns.append(col)
    size = len(unknowns)
    matrix = [[columns[c].coefficient(k) for c in range(size)] for k in range(size)]
    rhs = [(remainder * (1 / lead)).coefficient(k) for k in range(size)]
    coeffs = solve_linear(matrix, rhs)
    logs = []
    powers = []
    for (root, j), coef in zip(unknowns, coeffs):
        if coef == 0:
            continue
        if j == 1:
            logs.append((coef, root))
        else:
            powers.append((coef / (1 - j), root, j - 1))
    return _Antiderivative(poly_anti, tuple(logs), tuple(powers))


def _integrate_exact(
    rf: RationalFunction, lo: Fraction, hi: Fraction
) -> Optional[float]:
    """Definite integral on [lo, hi]; None when it diverges at an endpoint.

    Raises ValueError on a pole strictly inside the interval.
    """
    if rf.is_zero or lo == hi:
        return 0.0
    for root, _ in _split_denominator(rf.den):
        if lo < root < hi:
            raise ValueError(f"pole at x = {root} inside the domain")
    anti = _build_antiderivative(rf)
    if lo in anti.den_roots() or hi in anti.den_roots():
        return None
    return anti.eval_float(float(hi)) - anti.eval_float(float(lo))


def _quad_check(rf: RationalFunction, lo: Fraction, hi: Fraction, exact: float):
    from scipy.integrate import quad

    approx, _ = quad(
        rf.eval_float, float(lo), float(hi), limit=200, epsabs=1e-13, epsrel=1e-13
    )
    if abs(approx - exact) > QUAD_CHECK_TOL * max(1.0, abs(exact)):
        raise RuntimeError(
            f"closed-form integral {exact} disagrees with quadrature {approx}"
        )


def _segments(
    d: Density, domain: tuple[Fraction, Fraction]
) -> list[tuple[Fraction, Fraction, RationalFunction]]:
    lo, hi = (as_fraction(domain[0]), as_fraction(domain[1]))
    if not (0 <= lo < hi <= 1):
        raise ValueError(f"domain [{lo}, {hi}] must sit inside [0, 1]")
    if isinstance(d, RationalDensity):
        return [(lo, hi, d.rf)]
    out = []
    for rf, (a, b) in zip(d.pieces, d.cells()):
        a2, b2 = max(a, lo), min(b, hi)
        if a2 < b2:
            out.append((a2, b2, rf))
    return out


def normalize(
    d: Density, domain: tuple[Fraction, Fraction] = (Fraction(0), Fraction(1))
) -> Optional[float]:
    """Total mass over the domain, or None when the integral diverges.

    Closed form first, then an adaptive-quadrature cross-check to 1e-10.
    Divergence is detected exactly, from a reduced-denominator root at a
    segment endpoint.
    """
    total = 0.0
    parts = []
    for a, b, rf in _segments(d, domain):
        value = _integrate_exact(rf, a, b)
        if value is None:
            return None
        parts.append((a, b, rf, value))
        total += value
    for a, b, rf, value in parts:
        _quad_check(rf, a, b, value)
    if total <= 0:
        raise ValueError("density mass is not positive")
    return total


@dataclass(frozen=True)
class DensityCDF:
    """Vector-friendly cumulative distribution of a normalized density."""

    breaks: tuple[float, ...]            # segment endpoints, len = n + 1
    antis: tuple[_Antiderivative, ...]   # one per segment
    offsets: tuple[float, ...]           # mass accumulated before each segment
    total: float

    def __call__(self, x):
        scalar = np.ndim(x) == 0
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        xs = np.clip(xs, self.breaks[0], self.breaks[-1])
        idx = np.clip(
            np.searchsorted(np.asarray(self.breaks[1:-1]), xs, side="right"),
            0,
            len(self.antis) - 1,
        )
        out = np.empty_like(xs)
        for seg, anti in enumerate(self.antis):
            mask = idx == seg
            if not np.any(mask):
                continue
            lo = self.breaks[seg]
            out[mask] = (
                self.offsets[seg] + anti.eval_array(xs[mask]) - anti.eval_float(lo)
            )
        result = out / self.total
        return float(result[0]) if scalar else result


def make_cdf(
    d: Density, domain: tuple[Fraction, Fraction] = (Fraction(0), Fraction(1))
) -> DensityCDF:
    """Build the exact-coefficient CDF; raises if the mass diverges."""
    segs = _segments(d, domain)
    breaks = [float(segs[0][0])]
    antis = []
    offsets = []
    acc = 0.0
    for a, b, rf in segs:
        value = _integrate_exact(rf, a, b)
        if value is None:
            raise ValueError("density is not normalizable on the domain")
        offsets.append(acc)
        antis.append(_build_antiderivative(rf))
        breaks.append(float(b))
        acc += value
    return DensityCDF(tuple(breaks), tuple(antis), tuple(offsets), acc)


def cdf_eval(
    d: Density,
    x,
    domain: tuple[Fraction, Fraction] = (Fraction(0), Fraction(1)),
) -> float:
    """F(x) = mass on [domain start, x] / total mass."""
    return float(make_cdf(d, domain)(float(x)))
