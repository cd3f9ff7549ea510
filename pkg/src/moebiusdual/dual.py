"""Natural duals of jump systems via the symmetry determinant.

A symmetric matrix M = ((d, b), (b, a)), read as the map
M(x) = (b + d x)/(a + b x), conjugates every inverse branch V of the jump
transformation to its transpose when M V is itself symmetric.  For a branch
with quadruple (n0, n1, d0, d1) that symmetry is one linear condition on
(a, b, d), the row (d1, n1 - d0, -n0).  Three full branches give a 3x3
system; a dual exists exactly when its determinant vanishes and the solution
line is unique.

M carries [0, 1] to the dual interval B*, and integrating the kernel
1/(1 + x y)^2 over B* in y produces an invariant density of the jump map in
closed form.  The determinant, viewed as a polynomial in the middle
parameter beta, factors through a conic in the partition points; partitions
on that conic admit duals for every admissible beta.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .density import RationalDensity
from .exactnum import (
    Polynomial,
    RationalFunction,
    Scalar,
    as_fraction,
    format_fraction,
    matrix_rank,
    nullspace,
    poly_interpolate,
)
from .moebius import INFINITY, MoebiusMap, ProjPoint
from .systems import (
    CheckEntry,
    JumpSystem,
    SystemSpec,
    TypeVector,
    ValidationReport,
    branch_quadruples,
)

__all__ = [
    "SymmetryRow",
    "ProjInterval",
    "DualCandidate",
    "symmetry_row",
    "det_system",
    "det_polynomial",
    "solve_dual",
    "dual_interval",
    "validate_dual",
    "common_fixed_point",
    "density_from_interval",
    "fixed_point_density",
    "conic_point",
    "conic_residual",
]


@dataclass(frozen=True)
class SymmetryRow:
    """Coefficients (c_a, c_b, c_d) of the condition c_a*a + c_b*b + c_d*d = 0."""

    c_a: Fraction
    c_b: Fraction
    c_d: Fraction

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.c_a, self.c_b, self.c_d)

    def applied_to(self, a: Fraction, b: Fraction, d: Fraction) -> Fraction:
        return self.c_a * a + self.c_b * b + self.c_d * d


def symmetry_row(branch) -> SymmetryRow:
    """The linear condition making M * branch symmetric.

    ``branch`` is a MoebiusMap or any quadruple carrier; scaling the branch
    scales the row, which never changes where the determinant vanishes.
    """
    n0, n1 = as_fraction(branch.n0), as_fraction(branch.n1)
    d0, d1 = as_fraction(branch.d0), as_fraction(branch.d1)
    return SymmetryRow(d1, n1 - d0, -n0)


def _row_matrix(js: JumpSystem) -> list[list[Fraction]]:
    return [list(symmetry_row(branch).as_tuple()) for branch in js.maps()]


def det_system(js: JumpSystem) -> Fraction:
    """Determinant of the three symmetry rows, in branch order (ab, b, gb)."""
    m = _row_matrix(js)
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


@dataclass(frozen=True)
class _Quadruple:
    """Plain coefficient carrier for beta-uniform determinant sampling."""

    n0: Fraction
    n1: Fraction
    d0: Fraction
    d1: Fraction


def _raw_jump_rows(spec: SystemSpec) -> list[SymmetryRow]:
    qa, qb, qg = branch_quadruples(spec)

    def compose(outer, inner):
        # 2x2 product with rows (n1, n0), (d1, d0); no rescaling
        on0, on1, od0, od1 = outer
        in0, in1, id0, id1 = inner
        return (
            on1 * in0 + on0 * id0,
            on1 * in1 + on0 * id1,
            od1 * in0 + od0 * id0,
            od1 * in1 + od0 * id1,
        )

    rows = []
    for quad in (compose(qa, qb), qb, compose(qg, qb)):
        rows.append(symmetry_row(_Quadruple(*quad)))
    return rows


def _raw_det(spec: SystemSpec) -> Fraction:
    m = [list(r.as_tuple()) for r in _raw_jump_rows(spec)]
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


_SAMPLE_NODES = [Fraction(k, 4) for k in (1, 2, 3, 4, 5, 6, 7)]
_CHECK_NODES = [Fraction(-1, 2), Fraction(1, 3), Fraction(9, 5)]


def det_polynomial(p1: Scalar, p2: Scalar, type_vector: TypeVector) -> Polynomial:
    """The symmetry determinant as an exact polynomial in beta.

    The branch coefficients are kept in their beta-uniform scaling, so each
    row entry is affine in beta and the determinant has degree at most 3.
    Seven interpolation nodes leave slack; the interpolant is re-checked at
    three fresh nodes before being returned.
    """
    p1, p2 = as_fraction(p1), as_fraction(p2)

    def sample(beta: Fraction) -> Fraction:
        return _raw_det(
            SystemSpec(p1, p2, beta, type_vector, allow_beta_outside=True)
        )

    poly = poly_interpolate([(b, sample(b)) for b in _SAMPLE_NODES])
    if poly.degree > 3:
        raise RuntimeError("determinant interpolant exceeded degree 3")
    for beta in _CHECK_NODES:
        if poly(beta) != sample(beta):
            raise RuntimeError("determinant interpolant failed re-check")
    return poly


@dataclass(frozen=True)
class ProjInterval:
    """A closed rational interval [lo, hi], or the ray [lo, inf).

    ``density_ok`` records whether 1 + x*y stays positive for all x in
    [0, 1] and y in the interval, the condition the density kernel needs.
    """

    lo: ProjPoint
    hi: ProjPoint

    def __post_init__(self):
        if self.lo.is_infinite:
            raise ValueError("interval must have a finite lower endpoint")
        if not self.lo < self.hi:
            raise ValueError("degenerate interval")

    @property
    def is_ray(self) -> bool:
        return self.hi.is_infinite

    @property
    def density_ok(self) -> bool:
        # minimum of 1 + x*y over the box is at x = 1, y = lo
        return 1 + self.lo.finite > 0

    def contains(self, p: ProjPoint) -> bool:
        return self.lo <= p <= self.hi

    def to_json(self) -> dict:
        return {"lo": str(self.lo), "hi": str(self.hi)}

    @classmethod
    def from_json(cls, data: dict) -> "ProjInterval":
        def parse(text: str) -> ProjPoint:
            return INFINITY if text == "inf" else ProjPoint.of(text)

        return cls(parse(data["lo"]), parse(data["hi"]))

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}{')' if self.is_ray else ']'}"


@dataclass(frozen=True)
class DualCandidate:
    """Solution (a, b, d) of the symmetry system, with its map and interval.

    The map is M(x) = (b + d x)/(a + b x).  When a*d = b^2 the matrix is
    singular, M collapses to a constant, and the candidate is degenerate
    (the all-linear Lebesgue case); map and interval are then None.
    """

    a: Fraction
    b: Fraction
    d: Fraction
    m: Optional[MoebiusMap]
    interval: Optional[ProjInterval]
    degenerate: bool

    def triple(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.d)

    def to_json(self) -> dict:
        out = {
            "A": format_fraction(self.a),
            "B": format_fraction(self.b),
            "D": format_fraction(self.d),
            "degenerate": self.degenerate,
        }
        out["M"] = self.m.to_json() if self.m else None
        out["interval"] = self.interval.to_json() if self.interval else None
        return out

    @classmethod
    def from_json(cls, data: dict) -> "DualCandidate":
        m = MoebiusMap.from_json(data["M"]) if data.get("M") else None
        interval = (
            ProjInterval.from_json(data["interval"]) if data.get("interval") else None
        )
        return cls(
            as_fraction(data["A"]),
            as_fraction(data["B"]),
            as_fraction(data["D"]),
            m,
            interval,
            bool(data["degenerate"]),
        )


def _primitive_triple(vec: Sequence[Fraction]) -> tuple[Fraction, Fraction, Fraction]:
    from math import gcd, lcm

    denom = lcm(*(v.denominator for v in vec))
    ints = [int(v * denom) for v in vec]
    content = gcd(*ints)
    ints = [v // content for v in ints]
    first = next(v for v in ints if v != 0)
    if first < 0:
        ints = [-v for v in ints]
    return tuple(Fraction(v) for v in ints)


def solve_dual(js: JumpSystem) -> Optional[DualCandidate]:
    """Solve the three symmetry conditions for (a, b, d).

    Returns None when the determinant is nonzero (no dual), the unique
    candidate when the solution space is a line, and raises ValueError
    when the rows leave more than one free direction.
    """
    rows = _row_matrix(js)
    if det_system(js) != 0:
        return None
    rank = matrix_rank(rows)
    if rank < 2:
        raise ValueError("underdetermined system")
    basis = nullspace(rows)
    a, b, d = _primitive_triple(basis[0])
    if a * d - b * b == 0:
        return DualCandidate(a, b, d, None, None, True)
    m = MoebiusMap.make(b, d, a, b)
    return DualCandidate(a, b, d, m, dual_interval(m), False)


def _limit_is_plus_infinity(m: MoebiusMap, at: Fraction, from_right: bool) -> bool:
    """Sign of M(x) as x approaches a pole of M from inside [0, 1]."""
    num_at = m.n0 + m.n1 * at
    # denominator d0 + d1 x crosses zero linearly at the pole
    den_slope = m.d1
    approach = 1 if from_right else -1
    return (num_at > 0) == (den_slope * approach > 0)


def dual_interval(m: MoebiusMap) -> ProjInterval:
    """Image of [0, 1] under M, as an interval or upward ray.

    Raises ValueError when a pole interior to (0, 1) splits the image, or
    when the image opens downward, which the density kernel cannot use.
    """
    lo_img = m.evaluate(Fraction(0))
    hi_img = m.evaluate(Fraction(1))
    if m.d1 != 0:
        pole = Fraction(-m.d0, m.d1)
        if 0 < pole < 1:
            raise ValueError("image not an interval")
        if pole == 0 and not _limit_is_plus_infinity(m, Fraction(0), True):
            raise ValueError("image opens downward")
        if pole == 1 and not _limit_is_plus_infinity(m, Fraction(1), False):
            raise ValueError("image opens downward")
    if lo_img.is_infinite and hi_img.is_infinite:
        raise ValueError("image not an interval")
    if lo_img.is_infinite or hi_img.is_infinite:
        finite = hi_img if lo_img.is_infinite else lo_img
        return ProjInterval(finite, INFINITY)
    lo, hi = sorted((lo_img, hi_img))
    return ProjInterval(lo, hi)


def _image_on(m: MoebiusMap, interval: ProjInterval) -> ProjInterval:
    """Image of an interval under a map with no pole inside it."""
    if m.d1 != 0:
        pole = ProjPoint.of(Fraction(-m.d0, m.d1))
        if interval.lo < pole < interval.hi:
            raise ValueError(f"pole at {pole} inside {interval}")
    a = m.evaluate(interval.lo)
    b = m.evaluate(interval.hi)
    lo, hi = sorted((a, b))
    return ProjInterval(lo, hi)


def validate_dual(js: JumpSystem, cand: DualCandidate) -> ValidationReport:
    """Conjugation, interval, and tiling checks for a dual candidate.

    Verifies that every symmetry row annihilates (a, b, d), that
    M V_i = V_i* M holds as an exact map identity, that the dual interval
    satisfies the kernel condition, and that the transposed branches map
    the dual interval onto pieces that tile it edge to edge.
    """
    entries: list[CheckEntry] = []
    if cand.degenerate or cand.m is None or cand.interval is None:
        entries.append(
            CheckEntry(
                "nondegenerate", False,
                "candidate matrix is singular (Lebesgue case)",
            )
        )
        return ValidationReport(False, tuple(entries))
    entries.append(CheckEntry("nondegenerate", True, f"M = {cand.m.display()}"))

    names = ("inv_ab", "inv_b", "inv_gb")
    for name, branch in zip(names, js.maps()):
        row = symmetry_row(branch)
        value = row.applied_to(cand.a, cand.b, cand.d)
        entries.append(
            CheckEntry(
                f"{name}: symmetry row", value == 0,
                f"row {tuple(map(str, row.as_tuple()))} gives {value}",
            )
        )
    for name, branch in zip(names, js.maps()):
        lhs = cand.m.compose(branch)
        rhs = branch.transpose_dual().compose(cand.m)
        entries.append(
            CheckEntry(
                f"{name}: conjugation", lhs == rhs,
                f"M V = {lhs.display()}, V* M = {rhs.display()}",
            )
        )

    interval = cand.interval
    entries.append(
        CheckEntry(
            "kernel condition", interval.density_ok,
            f"B* = {interval}",
        )
    )

    images = []
    tiling_ok = True
    for name, branch in zip(names, js.maps()):
        dual_branch = branch.transpose_dual()
        try:
            img = _image_on(dual_branch, interval)
        except ValueError as exc:
            entries.append(CheckEntry(f"{name}: dual image", False, str(exc)))
            tiling_ok = False
            continue
        inside = interval.contains(img.lo) and interval.contains(img.hi)
        entries.append(
            CheckEntry(
                f"{name}: dual image", inside,
                f"{dual_branch.display()} maps B* to {img}",
            )
        )
        tiling_ok = tiling_ok and inside
        images.append(img)
    if tiling_ok and len(images) == 3:
        images.sort(key=lambda iv: iv.lo.finite)
        chain = (
            images[0].lo == interval.lo
            and images[0].hi == images[1].lo
            and images[1].hi == images[2].lo
            and images[2].hi == interval.hi
        )
        entries.append(
            CheckEntry(
                "tiling", chain,
                " | ".join(str(iv) for iv in images),
            )
        )
    else:
        entries.append(CheckEntry("tiling", False, "images incomplete"))
    return ValidationReport(all(e.ok for e in entries), tuple(entries))


def common_fixed_point(maps: Iterable[MoebiusMap]) -> Optional[ProjPoint]:
    """The point fixed by every map, when the maps share one.

    Finite candidates come from the gcd of the fixed-point quadratics;
    infinity is common when every map is affine.  With several common
    points the smallest finite one is returned.  Irrational common pairs
    are not representable here and yield None.
    """
    maps = list(maps)
    if not maps:
        return None
    shared: Optional[Polynomial] = None
    for m in maps:
        if m.is_identity:
            continue
        q = m.fixed_point_quadratic()
        shared = q if shared is None else Polynomial.gcd(shared, q)
        if shared.degree == 0:
            shared = Polynomial()  # coprime quadratics: no common finite root
            break
    if shared is None:
        raise ValueError("all points fixed")
    candidates: list[ProjPoint] = []
    if not shared.is_zero and shared.degree >= 1:
        candidates.extend(ProjPoint(r) for r, _ in shared.rational_roots())
    if all(m.d1 == 0 for m in maps):
        candidates.append(INFINITY)
    finite = sorted(
        (p for p in candidates if not p.is_infinite), key=lambda p: p.finite
    )
    if finite:
        return finite[0]
    if candidates:
        return candidates[0]
    return None


def density_from_interval(interval: ProjInterval) -> RationalDensity:
    """Integrate the kernel 1/(1 + x y)^2 in y over the dual interval.

    Bounded [lo, hi] gives (hi - lo)/((1 + lo*x)(1 + hi*x)); the ray
    [lo, inf) gives 1/(x (1 + lo*x)).
    """
    if not interval.density_ok:
        raise ValueError(f"kernel condition fails on {interval}")
    lo = interval.lo.finite
    if interval.is_ray:
        return RationalDensity(
            RationalFunction(
                Polynomial([1]),
                Polynomial([0, 1]) * Polynomial([1, lo]),
            )
        )
    hi = interval.hi.finite
    return RationalDensity(
        RationalFunction(
            Polynomial([hi - lo]),
            Polynomial([1, lo]) * Polynomial([1, hi]),
        )
    )


def fixed_point_density(tau: Scalar) -> RationalDensity:
    """The density 1/(1 + tau*x)^2 attached to a common dual fixed point."""
    tau = as_fraction(tau)
    if tau <= -1:
        raise ValueError(f"pole of 1/(1 + tau x)^2 inside [0, 1] for tau = {tau}")
    return RationalDensity(
        RationalFunction(Polynomial([1]), Polynomial([1, tau]) ** 2)
    )


def conic_residual(p1: Scalar, p2: Scalar) -> Fraction:
    """p1^2 + p2^2 - p1*p2 - p1; zero exactly on the dual-admitting conic."""
    p1, p2 = as_fraction(p1), as_fraction(p2)
    return p1 * p1 + p2 * p2 - p1 * p2 - p1


def conic_point(t: Scalar) -> tuple[Fraction, Fraction]:
    """Rational parametrization (1, t)/(t^2 - t + 1) of the conic, for t > 1."""
    t = as_fraction(t)
    if t <= 1:
        raise ValueError(f"parameter must exceed 1, got {t}")
    q = t * t - t + 1
    return (1 / q, t / q)
