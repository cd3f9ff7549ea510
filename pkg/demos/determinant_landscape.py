"""
Where duals live: the determinant over partitions and beta
==========================================================

The symmetry system has a solution exactly where its 3x3 determinant
vanishes.  Treating the determinant as a polynomial in beta shows the
structure: for the two workable orientation types it factors through a
conic in the partition plane, and on that conic it vanishes for every
beta at once.  Off the conic, and for the other six types, it has no
admissible root.
"""

from fractions import Fraction as F

from moebiusdual import (
    SystemSpec,
    TypeVector,
    build_jump,
    conic_point,
    conic_residual,
    det_polynomial,
    solve_dual,
)

# --- the determinant as a polynomial in beta, on a partition grid --------

print("type +++, det(beta) over a grid of partitions:")
print(f"{'p1':>6} {'p2':>6}   {'residual':>9}   det(beta)")
plus = TypeVector.parse("+++")
for p1, p2 in [
    (F(1, 4), F(1, 2)),
    (F(1, 4), F(3, 4)),
    (F(1, 3), F(2, 3)),
    (F(2, 5), F(4, 5)),
    (F(1, 2), F(3, 4)),
    (F(4, 7), F(6, 7)),
]:
    poly = det_polynomial(p1, p2, plus)
    res = conic_residual(p1, p2)
    body = "0 identically" if poly.is_zero else poly.format("beta")
    print(f"{str(p1):>6} {str(p2):>6}   {str(res):>9}   {body}")

# the pattern: det = -(p2 - p1)^2 (beta^2 + beta) * residual, so the
# partitions with residual zero (the conic) kill it for every beta, and
# everywhere else the only rational roots are beta = 0 (degenerate) and
# beta = -1 (outside the parameter range)
print()
print("off the conic the roots in beta are:")
poly = det_polynomial(F(1, 2), F(3, 4), plus)
for root, mult in poly.rational_roots():
    print(f"  beta = {root} (multiplicity {mult})")

# --- the conic itself, parametrized --------------------------------------

print()
print("rational points on the conic p1^2 + p2^2 - p1 p2 - p1 = 0:")
print(f"{'t':>5} {'p1':>6} {'p2':>6}   residual")
for t in [F(5, 4), F(3, 2), F(2), F(3), F(5)]:
    p1, p2 = conic_point(t)
    print(f"{str(t):>5} {str(p1):>6} {str(p2):>6}   {conic_residual(p1, p2)}")

# --- vanishing determinant is necessary, not sufficient ------------------

# at (4/7, 6/7) with all branches increasing the determinant vanishes for
# every beta, yet the solved matrix develops a pole inside [0, 1] once
# beta reaches 1: the candidate line exists but the dual interval does not
print()
p1, p2 = conic_point(F(3, 2))
print(f"at ({p1}, {p2}), type +++:")
for beta in [F(1, 2), F(3, 4), F(1), F(3, 2)]:
    js = build_jump(SystemSpec.make(p1, p2, beta, "+++"))
    try:
        cand = solve_dual(js)
        print(f"  beta = {beta}: dual interval {cand.interval}")
    except ValueError as exc:
        print(f"  beta = {beta}: {exc}")

# --- the other six types never vanish ------------------------------------

print()
print("type-by-type verdict at (1/3, 2/3):")
for bits in range(8):
    type_str = "".join("+" if bits & (1 << k) == 0 else "-" for k in range(3))
    poly = det_polynomial(F(1, 3), F(2, 3), TypeVector.parse(type_str))
    if poly.is_zero:
        verdict = "det = 0 for every beta: duals exist"
    else:
        roots = [r for r, _ in poly.rational_roots() if -1 < r <= 2 and r != 0]
        verdict = (
            f"admissible roots {roots}" if roots else "no admissible root: no dual"
        )
    print(f"  {type_str}: {verdict}")
