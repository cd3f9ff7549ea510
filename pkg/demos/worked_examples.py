"""
The lucky partition (1/3, 2/3), worked end to end
=================================================

Build the three-branch map, jump to its full-branch version, solve the
symmetry system for the dual, and read off the invariant density in closed
form.  Everything here is exact rational arithmetic; run it and diff the
output against your own derivation.
"""

from fractions import Fraction as F

from moebiusdual import (
    SystemSpec,
    build_branches,
    build_jump,
    density_from_interval,
    det_system,
    invariance_residual,
    lift_density,
    normalize,
    solve_dual,
    symmetry_row,
    validate_dual,
)

# the partition both constructions in this package start from
P1, P2 = F(1, 3), F(2, 3)


def show(vec):
    return "(" + ", ".join(str(v) for v in vec) + ")"


def walk(beta, type_str):
    print(f"\n=== beta = {beta}, type {type_str} ===")
    spec = SystemSpec.make(P1, P2, beta, type_str)
    branches = build_branches(spec)
    print("inverse branches of T:")
    for name, m in zip(("V_a", "V_b", "V_g"), branches.maps()):
        print(f"  {name}(x) = {m.display()}")

    js = build_jump(spec)
    print("inverse branches of the jump map S (outer ones composed through V_b):")
    for name, m in zip(("V_ab", "V_b", "V_gb"), js.maps()):
        print(f"  {name}(x) = {m.display()}")

    # one linear condition per branch: M V symmetric
    print("symmetry rows (coefficients of a, b, d):")
    for m in js.maps():
        print(f"  {show(symmetry_row(m).as_tuple())}")
    print(f"det = {det_system(js)}")

    cand = solve_dual(js)
    print(f"solution line (A, B, D) = {show(cand.triple())}")
    print(f"M(x) = {cand.m.display()},  B* = M([0,1]) = {cand.interval}")
    print(f"validation: {'ok' if validate_dual(js, cand).ok else 'FAILED'}")

    # integrate the kernel 1/(1+xy)^2 over B* to get the invariant density
    h = density_from_interval(cand.interval)
    print(f"h(x) = {h.format()}")
    residual = invariance_residual(h, js)
    print(f"transfer residual identically zero: {residual.is_zero}")

    mass = normalize(h)
    if mass is None:
        print("mass on [0,1]: diverges (sigma-finite; indifferent fixed point)")
    else:
        print(f"mass on [0,1] = {mass:.12g}")

    g = lift_density(h, spec)
    print("lift to a T-invariant density, per cell:")
    for rf, (lo, hi) in zip(g.pieces, g.cells()):
        print(f"  on [{lo}, {hi}]: {rf.format()}")


# the two orientation types that admit duals here, at the cleanest parameter
walk(F(1), "+++")
walk(F(1), "+-+")

# beta = 2 puts an indifferent fixed point at 0: the dual interval becomes a
# ray and the density is only sigma-finite
walk(F(2), "+++")
