"""Three-branch interval maps with linear outer branches and a
fractional-linear middle branch.

The unit interval is cut at 0 < p1 < p2 < 1.  The forward map T sends the
left cell onto the middle cell, the middle cell onto the whole interval, and
the right cell onto the middle cell; each restriction is monotone with an
orientation sign from the type vector.  The maps are described by their
inverse branches, which is what every downstream computation consumes.

The jump transformation S accelerates T: it applies T twice on the outer
cells and once on the middle cell, so all three of its inverse branches are
full, mapping [0, 1] onto one cell each.

Cell membership at the breakpoints follows the right-closed rule: x = p1
belongs to the middle cell and x = p2 to the right cell.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .exactnum import Scalar, as_fraction, format_fraction
from .moebius import MoebiusMap

__all__ = [
    "SpecError",
    "TypeVector",
    "SystemSpec",
    "BranchSet",
    "JumpSystem",
    "ValidationReport",
    "CheckEntry",
    "branch_quadruples",
    "build_branches",
    "build_jump",
    "validate_system",
    "reflect_system",
    "forward_map",
]

BETA_MAX = Fraction(2)


class SpecError(ValueError):
    """A system description violates a structural requirement."""


@dataclass(frozen=True)
class TypeVector:
    """Orientation signs (eps_alpha, eps_beta, eps_gamma), each +1 or -1."""

    eps_alpha: int
    eps_beta: int
    eps_gamma: int

    def __post_init__(self):
        for eps in (self.eps_alpha, self.eps_beta, self.eps_gamma):
            if eps not in (1, -1):
                raise SpecError(f"orientation sign must be +1 or -1, got {eps}")

    @classmethod
    def parse(cls, text: str) -> "TypeVector":
        """Parse a sign string like '+-+'."""
        if len(text) != 3 or any(ch not in "+-" for ch in text):
            raise SpecError(f"type vector must be three signs, got {text!r}")
        return cls(*(1 if ch == "+" else -1 for ch in text))

    def reversed(self) -> "TypeVector":
        return TypeVector(self.eps_gamma, self.eps_beta, self.eps_alpha)

    def signs(self) -> tuple[int, int, int]:
        return (self.eps_alpha, self.eps_beta, self.eps_gamma)

    def __str__(self) -> str:
        return "".join("+" if e == 1 else "-" for e in self.signs())


@dataclass(frozen=True)
class SystemSpec:
    """Partition points, middle-branch parameter, and orientation type.

    ``beta`` controls the curvature of the middle branch; beta = 0 makes
    every branch linear.  The default range (-1, 2] keeps the middle
    denominator positive on [0, 1] and the invariant density integrable or
    at worst sigma-finite at the top end.  ``allow_beta_outside`` admits
    other beta for exploration; validation still reports the breach.
    """

    p1: Fraction
    p2: Fraction
    beta: Fraction
    type_vector: TypeVector
    allow_beta_outside: bool = False

    def __post_init__(self):
        object.__setattr__(self, "p1", as_fraction(self.p1))
        object.__setattr__(self, "p2", as_fraction(self.p2))
        object.__setattr__(self, "beta", as_fraction(self.beta))
        if isinstance(self.type_vector, str):
            object.__setattr__(self, "type_vector", TypeVector.parse(self.type_vector))

    @classmethod
    def make(
        cls,
        p1: Scalar,
        p2: Scalar,
        beta: Scalar,
        type_vector: Union[TypeVector, str],
        allow_beta_outside: bool = False,
    ) -> "SystemSpec":
        return cls(
            as_fraction(p1),
            as_fraction(p2),
            as_fraction(beta),
            type_vector,
            allow_beta_outside,
        )

    def violations(self) -> list[str]:
        """Structural problems, each naming the violated requirement."""
        out = []
        if not (0 < self.p1 < self.p2 < 1):
            out.append("partition: requires 0 < p1 < p2 < 1")
        if self.beta == -1:
            out.append("beta-range: denominator vanishes at x = 1")
        elif not (-1 < self.beta <= BETA_MAX) and not self.allow_beta_outside:
            out.append(
                "beta-range: requires -1 < beta <= 2"
                " (set allow_beta_outside to explore)"
            )
        return out

    def require_valid(self) -> None:
        problems = self.violations()
        if problems:
            raise SpecError(problems[0])

    def to_json(self) -> dict:
        return {
            "p1": format_fraction(self.p1),
            "p2": format_fraction(self.p2),
            "beta": format_fraction(self.beta),
            "type": str(self.type_vector),
        }

    @classmethod
    def from_json(cls, data: dict) -> "SystemSpec":
        return cls.make(data["p1"], data["p2"], data["beta"], data["type"])


@dataclass(frozen=True)
class BranchSet:
    """Inverse branches of T.

    inv_alpha maps the middle cell onto [0, p1], inv_beta maps [0, 1] onto
    the middle cell, inv_gamma maps the middle cell onto [p2, 1].
    """

    spec: SystemSpec
    inv_alpha: MoebiusMap
    inv_beta: MoebiusMap
    inv_gamma: MoebiusMap

    def maps(self) -> tuple[MoebiusMap, MoebiusMap, MoebiusMap]:
        return (self.inv_alpha, self.inv_beta, self.inv_gamma)


@dataclass(frozen=True)
class JumpSystem:
    """Inverse branches of the jump transformation S.

    All three are full branches on [0, 1]: inv_ab onto the left cell, inv_b
    onto the middle cell, inv_gb onto the right cell.
    """

    spec: SystemSpec
    inv_ab: MoebiusMap
    inv_b: MoebiusMap
    inv_gb: MoebiusMap

    def maps(self) -> tuple[MoebiusMap, MoebiusMap, MoebiusMap]:
        return (self.inv_ab, self.inv_b, self.inv_gb)


Quad = tuple[Fraction, Fraction, Fraction, Fraction]


def branch_quadruples(spec: SystemSpec) -> tuple[Quad, Quad, Quad]:
    """Raw (n0, n1, d0, d1) coefficients for the three inverse branches.

    These are the defining formulas with a scaling that is uniform in beta:
    outer denominators p2 - p1, middle denominator 1 + beta*x.  Keeping the
    scaling beta-uniform matters for interpolating determinants as
    polynomials in beta; the canonical maps rescale per instance.
    """
    p1, p2, beta = spec.p1, spec.p2, spec.beta
    ea, eb, eg = spec.type_vector.signs()
    width = p2 - p1
    if ea == 1:
        q_alpha = (-p1 * p1, p1, width, Fraction(0))
    else:
        q_alpha = (p1 * p2, -p1, width, Fraction(0))
    if eb == 1:
        q_beta = (p1, p2 - p1 + p2 * beta, Fraction(1), beta)
    else:
        q_beta = (p2, p1 - p2 + p1 * beta, Fraction(1), beta)
    if eg == 1:
        q_gamma = (p2 * p2 - p1, 1 - p2, width, Fraction(0))
    else:
        q_gamma = (p2 * (1 - p1), -(1 - p2), width, Fraction(0))
    return q_alpha, q_beta, q_gamma


def build_branches(spec: SystemSpec) -> BranchSet:
    """Canonical inverse branches of T; raises SpecError on a bad spec."""
    spec.require_valid()
    qa, qb, qg = branch_quadruples(spec)
    return BranchSet(
        spec,
        MoebiusMap.make(*qa),
        MoebiusMap.make(*qb),
        MoebiusMap.make(*qg),
    )


def build_jump(spec: SystemSpec) -> JumpSystem:
    """Inverse branches of S: compositions through the middle branch."""
    branches = build_branches(spec)
    return JumpSystem(
        spec,
        branches.inv_alpha.compose(branches.inv_beta),
        branches.inv_beta,
        branches.inv_gamma.compose(branches.inv_beta),
    )


@dataclass(frozen=True)
class CheckEntry:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a validation pass: overall verdict plus one entry per check."""

    ok: bool
    entries: tuple[CheckEntry, ...]

    def entry(self, name: str) -> CheckEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "entries": [
                {"name": e.name, "ok": e.ok, "detail": e.detail}
                for e in self.entries
            ],
        }


def _branch_checks(
    name: str,
    branch: MoebiusMap,
    domain: tuple[Fraction, Fraction],
    target: tuple[Fraction, Fraction],
    eps: int,
) -> list[CheckEntry]:
    lo, hi = domain
    out = []
    den_lo = branch.d0 + branch.d1 * lo
    den_hi = branch.d0 + branch.d1 * hi
    if den_lo <= 0 or den_hi <= 0:
        where = lo if den_lo <= 0 else hi
        out.append(
            CheckEntry(f"{name}: denominator", False,
                       f"not positive at x = {where}")
        )
        return out
    out.append(CheckEntry(f"{name}: denominator", True, "positive on domain"))
    img_lo = branch.evaluate(lo).finite
    img_hi = branch.evaluate(hi).finite
    expect = (target[0], target[1]) if eps == 1 else (target[1], target[0])
    if (img_lo, img_hi) == expect:
        out.append(
            CheckEntry(
                f"{name}: endpoints", True,
                f"{lo} -> {img_lo}, {hi} -> {img_hi}",
            )
        )
    else:
        out.append(
            CheckEntry(
                f"{name}: endpoints", False,
                f"maps {lo}, {hi} to {img_lo}, {img_hi}, expected {expect}",
            )
        )
    orientation_ok = (branch.det > 0) == (eps == 1)
    out.append(
        CheckEntry(
            f"{name}: orientation", orientation_ok,
            f"det sign {'+' if branch.det > 0 else '-'} vs eps {eps:+d}",
        )
    )
    return out


def validate_system(spec: SystemSpec) -> ValidationReport:
    """Check the partition, the beta range, and every branch of T.

    Failures are report entries, never exceptions.
    """
    entries: list[CheckEntry] = []
    partition_ok = 0 < spec.p1 < spec.p2 < 1
    entries.append(
        CheckEntry(
            "partition",
            partition_ok,
            "0 < p1 < p2 < 1" if partition_ok else
            f"requires 0 < p1 < p2 < 1, got p1 = {spec.p1}, p2 = {spec.p2}",
        )
    )
    if spec.beta == -1:
        entries.append(
            CheckEntry("beta-range", False, "denominator vanishes at x = 1")
        )
    elif not (-1 < spec.beta <= BETA_MAX):
        detail = f"beta = {spec.beta} outside (-1, 2]"
        if spec.allow_beta_outside:
            detail += " (override active)"
        entries.append(CheckEntry("beta-range", False, detail))
    else:
        entries.append(CheckEntry("beta-range", True, f"beta = {spec.beta}"))

    if partition_ok and spec.beta != -1:
        p1, p2 = spec.p1, spec.p2
        qa, qb, qg = branch_quadruples(spec)
        ea, eb, eg = spec.type_vector.signs()
        try:
            branches = (
                MoebiusMap.make(*qa), MoebiusMap.make(*qb), MoebiusMap.make(*qg)
            )
        except ValueError as exc:
            entries.append(CheckEntry("branches", False, str(exc)))
        else:
            zero, one = Fraction(0), Fraction(1)
            for name, branch, dom, target, eps in (
                ("inv_alpha", branches[0], (p1, p2), (zero, p1), ea),
                ("inv_beta", branches[1], (zero, one), (p1, p2), eb),
                ("inv_gamma", branches[2], (p1, p2), (p2, one), eg),
            ):
                entries.extend(_branch_checks(name, branch, dom, target, eps))
    return ValidationReport(all(e.ok for e in entries), tuple(entries))


def reflect_system(spec: SystemSpec) -> SystemSpec:
    """The system conjugate under x -> 1 - x.

    The partition reflects to (1 - p2, 1 - p1), the orientation vector
    reverses, and the middle parameter becomes -beta/(1 + beta).  When the
    new beta leaves (-1, 2] the result carries the override flag.
    """
    if spec.beta == -1:
        raise SpecError("beta-range: reflection undefined at beta = -1")
    new_beta = -spec.beta / (1 + spec.beta)
    outside = not (-1 < new_beta <= BETA_MAX)
    return SystemSpec(
        1 - spec.p2,
        1 - spec.p1,
        new_beta,
        spec.type_vector.reversed(),
        allow_beta_outside=spec.allow_beta_outside or outside,
    )


def _cell_index(x, p1, p2) -> int:
    # right-closed: x = p1 is middle, x = p2 is right
    if x < p1:
        return 0
    if x < p2:
        return 1
    return 2


def forward_map(spec: SystemSpec, which: str, x):
    """One forward step of T or S at x in [0, 1].

    Accepts an exact rational (result exact) or a float (result float).
    S applies T twice on the outer cells and once on the middle cell.
    """
    if which not in ("T", "S"):
        raise ValueError(f"which must be 'T' or 'S', got {which!r}")
    branches = build_branches(spec)
    exact = not isinstance(x, float)

    def step_t(value):
        if exact:
            p1, p2 = spec.p1, spec.p2
        else:
            p1, p2 = float(spec.p1), float(spec.p2)
        cell = _cell_index(value, p1, p2)
        forward = branches.maps()[cell].invert()
        if exact:
            return forward.evaluate(as_fraction(value)).finite
        return forward.evaluate_float(value)

    if exact:
        x = as_fraction(x)
        if not (0 <= x <= 1):
            raise ValueError(f"x = {x} outside [0, 1]")
    elif not (0.0 <= x <= 1.0):
        raise ValueError(f"x = {x} outside [0, 1]")

    y = step_t(x)
    if which == "S":
        p1, p2 = (spec.p1, spec.p2) if exact else (float(spec.p1), float(spec.p2))
        if _cell_index(x, p1, p2) != 1:
            y = step_t(y)
    return y
