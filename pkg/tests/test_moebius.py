"""Fractional-linear maps: canonical form, composition, duals, fixed points."""

import random
from fractions import Fraction

import pytest

from moebiusdual import (
    INFINITY,
    DegenerateMapError,
    MoebiusMap,
    Polynomial,
    ProjPoint,
    RationalFunction,
    make_map,
)
from conftest import random_moebius

F = Fraction


# --- projective points -----------------------------------------------------

def test_projpoint_ordering_puts_infinity_on_top():
    a = ProjPoint.of(F(1, 2))
    b = ProjPoint.of(3)
    assert a < b < INFINITY
    assert not INFINITY < a
    assert INFINITY <= INFINITY
    assert str(INFINITY) == "inf"
    assert str(ProjPoint.of("3/2")) == "3/2"


def test_projpoint_finite_accessor():
    assert ProjPoint.of(2).finite == 2
    with pytest.raises(ValueError):
        INFINITY.finite


# --- construction and canonical form ----------------------------------------

def test_quadruple_is_reduced_and_sign_fixed():
    m = MoebiusMap(2, 4, 6, 8)
    assert m.quadruple() == (1, 2, 3, 4)
    # d0 < 0 flips the overall sign
    m2 = MoebiusMap(1, 1, -2, 1)
    assert m2.quadruple() == (-1, -1, 2, -1)
    # d0 = 0: sign comes from d1
    m3 = MoebiusMap(1, 2, 0, -1)
    assert m3.quadruple() == (-1, -2, 0, 1)


def test_make_clears_denominators():
    m = MoebiusMap.make(F(1, 2), 0, 1, F(3, 4))
    assert m.quadruple() == (2, 0, 4, 3)
    assert make_map("1/3", 1, "1/3", 0).quadruple() == (1, 3, 1, 0)


def test_degenerate_quadruple_rejected():
    with pytest.raises(DegenerateMapError):
        MoebiusMap(1, 2, 2, 4)
    with pytest.raises(DegenerateMapError):
        MoebiusMap.make(0, 0, 1, 1)


def test_structural_equality_is_map_equality():
    assert MoebiusMap(0, 2, 2, 4) == MoebiusMap(0, 1, 1, 2)
    assert MoebiusMap.make(0, F(1, 3), F(1, 3), F(2, 3)) == MoebiusMap(0, 1, 1, 2)


# --- evaluation -------------------------------------------------------------

def test_evaluate_and_poles():
    v = MoebiusMap(0, 1, 1, 2)  # x/(1+2x)
    assert v.evaluate(0) == ProjPoint.of(0)
    assert v.evaluate(F(1, 2)) == ProjPoint.of(F(1, 4))
    assert v.evaluate(F(-1, 2)) == INFINITY
    assert v.evaluate(INFINITY) == ProjPoint.of(F(1, 2))
    w = MoebiusMap(1, 2, 1, 0)  # affine
    assert w.evaluate(INFINITY) == INFINITY
    assert v(F(1, 2)) == ProjPoint.of(F(1, 4))


def test_evaluate_float_matches_exact():
    rng = random.Random(31)
    for _ in range(10):
        m = random_moebius(rng)
        x = F(rng.randint(1, 9), 10)
        exact = m.evaluate(x)
        if exact.is_infinite:
            continue
        assert abs(m.evaluate_float(float(x)) - float(exact.finite)) < 1e-12


# --- algebra ----------------------------------------------------------------

def test_compose_oracle():
    f = MoebiusMap(0, 1, 1, 1)   # x/(1+x)
    g = MoebiusMap(1, 0, 0, 1)   # 1/x
    assert f.compose(g) == MoebiusMap(1, 0, 1, 1)  # 1/(1+x)
    assert g.compose(f) == MoebiusMap(1, 1, 0, 1)  # (1+x)/x


def test_compose_matches_pointwise():
    rng = random.Random(32)
    for _ in range(20):
        f, g = random_moebius(rng), random_moebius(rng)
        fg = f.compose(g)
        for x in (F(1, 3), F(2, 7), F(5, 4)):
            inner = g.evaluate(x)
            assert fg.evaluate(x) == f.evaluate(inner)
    print("✓ composition equals pointwise chaining for 20 random pairs")


def test_invert():
    rng = random.Random(33)
    for _ in range(20):
        m = random_moebius(rng)
        assert m.compose(m.invert()).is_identity
        assert m.invert().compose(m).is_identity


def test_transpose_dual_is_involution():
    rng = random.Random(34)
    for _ in range(20):
        m = random_moebius(rng)
        assert m.transpose_dual().transpose_dual() == m


def test_transpose_dual_of_affine_fixes_zero():
    # (n0 + n1 x)/1 dualizes to n1 x/(1 + n0 x), which fixes 0
    m = MoebiusMap(3, 2, 1, 0)
    dual = m.transpose_dual()
    assert dual == MoebiusMap(0, 2, 1, 3)
    assert dual.evaluate(0) == ProjPoint.of(0)


def test_jacobian():
    v = MoebiusMap(0, 1, 1, 2)
    assert v.jacobian() == RationalFunction(
        Polynomial([1]), Polynomial([1, 4, 4])
    )
    # |det| keeps the jacobian positive for orientation-reversing maps
    w = MoebiusMap(1, -1, 1, 0)
    assert w.jacobian() == RationalFunction(Polynomial([1]))


def test_det_and_is_linear():
    assert MoebiusMap(0, 1, 1, 2).det == 1
    assert MoebiusMap(1, -1, 1, 0).det == -1
    assert MoebiusMap(1, 2, 3, 0).is_linear
    assert not MoebiusMap(0, 1, 1, 2).is_linear


# --- fixed points -----------------------------------------------------------

def test_fixed_points_quadratic_coefficients():
    m = MoebiusMap(1, 0, 0, 1)  # 1/x
    assert m.fixed_point_quadratic() == Polynomial([-1, 0, 1])


def test_fixed_points_rational_pair():
    m = MoebiusMap(0, 2, 1, 1)  # 2x/(1+x): fixes 0 and 1
    fp = m.fixed_points()
    assert fp.points == (ProjPoint.of(0), ProjPoint.of(1))
    assert fp.quadratic is None


def test_fixed_points_irrational_pair_reports_quadratic():
    m = MoebiusMap(2, 0, 0, 1)  # 2/x: x^2 = 2
    fp = m.fixed_points()
    assert fp.points == ()
    assert fp.quadratic == Polynomial([-2, 0, 1])


def test_fixed_points_affine_and_translation():
    affine = MoebiusMap(1, 2, 1, 0)  # 1 + 2x fixes -1 and infinity
    fp = affine.fixed_points()
    assert fp.points == (ProjPoint.of(-1), INFINITY)
    translation = MoebiusMap(1, 1, 1, 0)  # x + 1
    assert translation.fixed_points().points == (INFINITY, INFINITY)
    with pytest.raises(ValueError, match="all points fixed"):
        MoebiusMap.identity().fixed_points()


# --- reflection conjugation -------------------------------------------------

def test_conjugate_reflect_oracle():
    v = MoebiusMap(0, 1, 1, 2)  # x/(1+2x)
    # 1 - V(1-x) = (2-x)/(3-2x)
    assert v.conjugate_reflect() == MoebiusMap(2, -1, 3, -2)


def test_conjugate_reflect_is_involution():
    rng = random.Random(35)
    for _ in range(20):
        m = random_moebius(rng)
        assert m.conjugate_reflect().conjugate_reflect() == m


# --- display and JSON --------------------------------------------------------

def test_display_compact_forms():
    assert MoebiusMap(1, 5, 3, 6).display() == "(1+5x)/(3+6x)"
    assert MoebiusMap(0, 1, 1, 2).display() == "x/(1+2x)"
    assert MoebiusMap(2, 0, 3, 3).display() == "2/(3+3x)"
    assert MoebiusMap(-1, 3, 3, 0).display() == "(-1+3x)/3"
    assert MoebiusMap(1, -1, 3, 3).display() == "(1-x)/(3+3x)"
    assert MoebiusMap.identity().display() == "x"


def test_json_roundtrip():
    m = MoebiusMap(1, -5, 3, 6)
    data = m.to_json()
    assert data == {"n0": "1", "n1": "-5", "d0": "3", "d1": "6"}
    assert MoebiusMap.from_json(data) == m
