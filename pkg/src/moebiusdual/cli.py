"""Command-line interface.

Subcommands: analyze, detscan, conic, verify, simulate.  Reports go to
stdout as JSON with rationals rendered as 'num/den' strings; exit codes are
0 for success (dual found, verification passed, simulation within
threshold), 1 for a failed verification, 2 for unusable input, 3 when no
dual exists, 4 when a simulation misses its distance threshold.  The
environment variable MDL_LOG (error, info, debug) controls diagnostics on
stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
import tempfile
from fractions import Fraction
from typing import Optional

import numpy as np

from .density import (
    PiecewiseDensity,
    RationalDensity,
    invariance_residual,
    lift_density,
    make_cdf,
    normalize,
    transfer_base,
)
from .dual import (
    common_fixed_point,
    conic_point,
    conic_residual,
    det_polynomial,
    det_system,
    solve_dual,
    symmetry_row,
    validate_dual,
)
from .exactnum import RationalFunction, as_fraction, format_fraction, rf_equal
from .simulate import OrbitConfig, histogram, histogram_csv, ks_distance, run_orbit
from .systems import (
    SpecError,
    SystemSpec,
    TypeVector,
    build_branches,
    build_jump,
    validate_system,
)

log = logging.getLogger("mdl")

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_NO_DUAL = 3
EXIT_KS_FAIL = 4


def _setup_logging() -> None:
    level = os.environ.get("MDL_LOG", "error").lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(
        stream=sys.stderr,
        level=levels.get(level, logging.ERROR),
        format="%(levelname)s %(name)s: %(message)s",
    )


def _emit(data: dict, out: Optional[str] = None) -> None:
    text = json.dumps(data, indent=2)
    if out and out not in ("json", "text"):
        _atomic_write(out, text + "\n")
        log.info("wrote %s", out)
    print(text)


def _atomic_write(path: str, content: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".mdl-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_spec(args) -> SystemSpec:
    try:
        spec = SystemSpec.make(
            Fraction(args.p1), Fraction(args.p2), Fraction(args.beta), args.type
        )
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecError(str(exc)) from exc
    spec.require_valid()
    return spec


def _map_json(m) -> dict:
    return {"display": m.display(), "coeffs": m.to_json()}


def _unit_numerator_scale(rf) -> Fraction:
    """Constant dividing out of a report so a constant numerator reads 1."""
    if rf.num.degree == 0:
        return rf.num.coefficient(0)
    return Fraction(1)


def _density_json(d: RationalDensity) -> dict:
    scaled = RationalDensity(d.rf / _unit_numerator_scale(d.rf))
    out = scaled.to_json()
    mass = normalize(scaled)
    out["normalizable"] = mass is not None
    out["norm"] = None if mass is None else f"{mass:.12g}"
    return out


def _piecewise_json(g: PiecewiseDensity) -> dict:
    scale = _unit_numerator_scale(g.pieces[0])
    scaled = PiecewiseDensity(g.p1, g.p2, tuple(p / scale for p in g.pieces))
    out = scaled.to_json()
    mass = normalize(scaled)
    out["normalizable"] = mass is not None
    out["norm"] = None if mass is None else f"{mass:.12g}"
    return out


def _lebesgue_density() -> RationalDensity:
    return RationalDensity(RationalFunction.constant(1))


def _dual_density(cand) -> RationalDensity:
    """Density attached to a dual candidate; constant in the singular case."""
    if cand.degenerate:
        return _lebesgue_density()
    from .dual import density_from_interval

    return density_from_interval(cand.interval)


def cmd_analyze(args) -> int:
    spec = _parse_spec(args)
    branches = build_branches(spec)
    js = build_jump(spec)
    det = det_system(js)
    poly = det_polynomial(spec.p1, spec.p2, spec.type_vector)
    cand = solve_dual(js)
    report = {
        "spec": spec.to_json(),
        "system_validation": validate_system(spec).to_json(),
        "branches": {
            "inv_alpha": _map_json(branches.inv_alpha),
            "inv_beta": _map_json(branches.inv_beta),
            "inv_gamma": _map_json(branches.inv_gamma),
        },
        "jump_branches": {
            "inv_ab": _map_json(js.inv_ab),
            "inv_b": _map_json(js.inv_b),
            "inv_gb": _map_json(js.inv_gb),
        },
        "symmetry_rows": {
            name: [format_fraction(c) for c in symmetry_row(branch).as_tuple()]
            for name, branch in zip(("inv_ab", "inv_b", "inv_gb"), js.maps())
        },
        "det": format_fraction(det),
        "det_polynomial": {
            "coeffs": [format_fraction(c) for c in poly.coeffs],
            "identically_zero": poly.is_zero,
        },
        "conic_residual": format_fraction(conic_residual(spec.p1, spec.p2)),
    }
    if cand is None:
        report["dual"] = {"found": False}
        report["density"] = None
        _finish_analyze(report, args)
        return EXIT_NO_DUAL
    dual_json = {"found": True}
    dual_json.update(cand.to_json())
    report["dual"] = dual_json
    h = _dual_density(cand)
    report["density"] = _density_json(h)
    if not cand.degenerate:
        duals = [b.transpose_dual() for b in js.maps()]
        try:
            shared = common_fixed_point(duals)
        except ValueError:
            shared = None
        report["common_dual_fixed_point"] = None if shared is None else str(shared)
        report["dual_validation"] = validate_dual(js, cand).to_json()
    residual = invariance_residual(h, js)
    report["invariance_residual_zero"] = residual.is_zero
    report["lifted_density"] = _piecewise_json(lift_density(h, spec))
    _finish_analyze(report, args)
    return EXIT_OK


def _finish_analyze(report: dict, args) -> None:
    if args.out == "text":
        _print_analyze_text(report)
    else:
        _emit(report, args.out)


def _print_analyze_text(report: dict) -> None:
    spec = report["spec"]
    print(
        f"system p1={spec['p1']} p2={spec['p2']} beta={spec['beta']}"
        f" type={spec['type']}"
    )
    for name, m in report["jump_branches"].items():
        print(f"  {name}: {m['display']}")
    print(f"  det = {report['det']}")
    dual = report["dual"]
    if not dual["found"]:
        print("  dual: none")
        return
    if dual["degenerate"]:
        print("  dual: degenerate (Lebesgue case)")
    else:
        print(f"  dual: M(x) with (A, B, D) = ({dual['A']}, {dual['B']}, {dual['D']})")
        interval = dual["interval"]
        closer = ")" if interval["hi"] == "inf" else "]"
        print(f"  dual interval: [{interval['lo']}, {interval['hi']}{closer}")
    density = report["density"]
    num = ", ".join(density["num"])
    den = ", ".join(density["den"])
    print(f"  density: num [{num}] den [{den}]")
    norm = density["norm"] if density["normalizable"] else "sigma-finite"
    print(f"  norm: {norm}")


def cmd_detscan(args) -> int:
    p1, p2 = Fraction(args.p1), Fraction(args.p2)
    if not (0 < p1 < p2 < 1):
        raise SpecError("partition: requires 0 < p1 < p2 < 1")
    tv = TypeVector.parse(args.type)
    poly = det_polynomial(p1, p2, tv)
    report = {
        "p1": format_fraction(p1),
        "p2": format_fraction(p2),
        "type": str(tv),
        "conic_residual": format_fraction(conic_residual(p1, p2)),
        "det_polynomial": {
            "coeffs": [format_fraction(c) for c in poly.coeffs],
            "identically_zero": poly.is_zero,
        },
    }
    if poly.is_zero:
        report["rational_roots"] = None
        report["admissible_roots"] = None
    else:
        roots = poly.rational_roots()
        report["rational_roots"] = [
            {"root": format_fraction(r), "multiplicity": m} for r, m in roots
        ]
        report["admissible_roots"] = [
            format_fraction(r) for r, _ in roots if -1 < r <= 2 and r != 0
        ]
    _emit(report, getattr(args, "out", None))
    return EXIT_OK


def cmd_conic(args) -> int:
    if args.t_list:
        try:
            ts = [Fraction(part) for part in args.t_list.split(",") if part.strip()]
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecError(f"bad t value: {exc}") from exc
    elif args.t_max is not None:
        if args.t_max < 2:
            raise SpecError("--t-max must be at least 2")
        ts = [Fraction(t) for t in range(2, args.t_max + 1)]
    else:
        raise SpecError("one of --t-list or --t-max is required")
    tv = TypeVector.parse(args.type)
    points = []
    for t in ts:
        if t <= 1:
            log.warning("skipping t = %s (needs t > 1)", t)
            points.append({"t": format_fraction(t), "skipped": "needs t > 1"})
            continue
        p1, p2 = conic_point(t)
        poly = det_polynomial(p1, p2, tv)
        points.append(
            {
                "t": format_fraction(t),
                "p1": format_fraction(p1),
                "p2": format_fraction(p2),
                "conic_residual": format_fraction(conic_residual(p1, p2)),
                "det_polynomial": {
                    "coeffs": [format_fraction(c) for c in poly.coeffs],
                    "identically_zero": poly.is_zero,
                },
            }
        )
    _emit({"type": str(tv), "points": points}, getattr(args, "out", None))
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = _parse_spec(args)
    js = build_jump(spec)
    cand = solve_dual(js)
    checks = []
    report = {"spec": spec.to_json(), "checks": checks}
    if cand is None:
        report["dual_found"] = False
        report["ok"] = False
        _emit(report)
        return EXIT_VERIFY_FAIL
    report["dual_found"] = True
    report["degenerate"] = cand.degenerate
    h = _dual_density(cand)
    if not cand.degenerate:
        dv = validate_dual(js, cand)
        checks.append(
            {"name": "dual validation", "ok": dv.ok, "detail": dv.to_json()}
        )
    residual = invariance_residual(h, js)
    checks.append(
        {
            "name": "invariance residual",
            "ok": residual.is_zero,
            "detail": "zero function" if residual.is_zero else residual.format(),
        }
    )
    ok_so_far = all(c["ok"] for c in checks)
    if residual.is_zero:
        lifted = lift_density(h, spec)
        pushed = transfer_base(lifted, spec)
        lift_ok = all(
            rf_equal(a, b) for a, b in zip(lifted.pieces, pushed.pieces)
        )
        checks.append(
            {
                "name": "lift fixed by base transfer",
                "ok": lift_ok,
                "detail": "T-transfer fixes the lifted density"
                if lift_ok
                else "lifted density moved",
            }
        )
        mass = normalize(RationalDensity(h.rf / _unit_numerator_scale(h.rf)))
        report["normalizable"] = mass is not None
        report["norm"] = None if mass is None else f"{mass:.12g}"
    ok = all(c["ok"] for c in checks) and ok_so_far
    report["ok"] = ok
    _emit(report)
    return EXIT_OK if ok else EXIT_VERIFY_FAIL


def cmd_simulate(args) -> int:
    spec = _parse_spec(args)
    if args.iters <= args.burn_in:
        raise SpecError("--iters must exceed --burn-in")
    if args.bins < 1:
        raise SpecError("--bins must be positive")
    domain = (Fraction(0), Fraction(1))
    if args.restrict_domain is not None:
        lo = Fraction(args.restrict_domain)
        if not (0 < lo < 1):
            raise SpecError("--restrict-domain must lie in (0, 1)")
        domain = (lo, Fraction(1))

    js = build_jump(spec)
    cand = solve_dual(js)
    density = None
    if cand is not None:
        h = _dual_density(cand)
        density = h if args.map == "S" else lift_density(h, spec)
    cdf = None
    normalizable = None
    if density is not None:
        try:
            mass = normalize(density, domain)
        except ValueError as exc:
            raise SpecError(
                f"density not integrable on the domain: {exc};"
                " adjust --restrict-domain"
            ) from exc
        normalizable = mass is not None
        if mass is None:
            raise SpecError(
                "density is sigma-finite on [0, 1];"
                " pass --restrict-domain EPS to compare on [EPS, 1]"
            )
        cdf = make_cdf(density, domain)

    seeds = [args.seed + k for k in range(args.seeds)]
    if args.x0 is not None and args.seeds > 1:
        raise SpecError("--x0 fixes the orbit; use a single seed")
    all_samples = []
    per_seed = []
    escapes = 0
    degenerate = False
    for seed in seeds:
        cfg = OrbitConfig(
            spec=spec,
            which=args.map,
            iterations=args.iters,
            burn_in=args.burn_in,
            seed=seed,
            x0=args.x0,
        )
        result = run_orbit(cfg)
        samples = result.samples
        if args.restrict_domain is not None:
            samples = samples[samples >= float(domain[0])]
        entry = {"seed": seed, "x0": result.x0, "kept": int(len(samples))}
        if cdf is not None and len(samples):
            entry["ks"] = ks_distance(samples, cdf)
        per_seed.append(entry)
        all_samples.append(samples)
        escapes += result.escapes
        degenerate = degenerate or result.degenerate
    pooled = np.concatenate(all_samples)
    report_hist = histogram(
        pooled,
        args.bins,
        cdf,
        escapes=escapes,
        domain=(float(domain[0]), float(domain[1])),
    )
    ks_values = [e["ks"] for e in per_seed if "ks" in e]
    worst = max(ks_values) if ks_values else None
    report = {
        "spec": spec.to_json(),
        "map": args.map,
        "iterations": args.iters,
        "burn_in": args.burn_in,
        "bins": args.bins,
        "domain": [format_fraction(domain[0]), format_fraction(domain[1])],
        "per_seed": per_seed,
        "escapes": escapes,
        "degenerate_orbit": degenerate,
        "normalizable": normalizable,
        "ks": worst,
        "ks_threshold": args.ks_threshold if worst is not None else None,
    }
    if args.out:
        _atomic_write(args.out, histogram_csv(report_hist))
        report["csv"] = args.out
        log.info("wrote %s", args.out)
    _emit(report)
    if worst is not None and worst > args.ks_threshold:
        return EXIT_KS_FAIL
    return EXIT_OK


def _add_spec_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p1", required=True, help="left breakpoint, e.g. 1/3")
    parser.add_argument("--p2", required=True, help="right breakpoint, e.g. 2/3")
    parser.add_argument("--beta", required=True, help="middle parameter, e.g. 1/2")
    parser.add_argument("--type", required=True, help="orientation signs, e.g. +-+")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mdl",
        description="Duals and invariant densities of three-branch"
        " piecewise Moebius interval maps",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="full exact report for one system")
    _add_spec_flags(p_analyze)
    p_analyze.add_argument(
        "--out",
        default="json",
        help="'json' (default), 'text', or a path for the JSON report",
    )
    p_analyze.set_defaults(func=cmd_analyze)

    p_detscan = sub.add_parser(
        "detscan", help="determinant polynomial in beta for one partition"
    )
    p_detscan.add_argument("--p1", required=True)
    p_detscan.add_argument("--p2", required=True)
    p_detscan.add_argument("--type", required=True)
    p_detscan.add_argument("--out", default=None, help="optional JSON file path")
    p_detscan.set_defaults(func=cmd_detscan)

    p_conic = sub.add_parser(
        "conic", help="enumerate partitions on the dual-admitting conic"
    )
    p_conic.add_argument("--t-list", default=None, help="comma-separated t values")
    p_conic.add_argument("--t-max", type=int, default=None, help="integer t range 2..N")
    p_conic.add_argument("--type", default="+++", help="orientation signs")
    p_conic.add_argument("--out", default=None, help="optional JSON file path")
    p_conic.set_defaults(func=cmd_conic)

    p_verify = sub.add_parser(
        "verify", help="re-derive the dual and replay the exactness checks"
    )
    _add_spec_flags(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_sim = sub.add_parser("simulate", help="orbit statistics vs analytic density")
    _add_spec_flags(p_sim)
    p_sim.add_argument("--map", choices=("T", "S"), default="S")
    p_sim.add_argument("--iters", type=int, default=100_000)
    p_sim.add_argument("--burn-in", type=int, default=1000)
    p_sim.add_argument("--bins", type=int, default=50)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--seeds", type=int, default=1, help="independent seed count")
    p_sim.add_argument("--x0", type=float, default=None)
    p_sim.add_argument("--out", default=None, help="CSV path for the histogram")
    p_sim.add_argument("--ks-threshold", type=float, default=0.02)
    p_sim.add_argument(
        "--restrict-domain",
        default=None,
        help="compare on [EPS, 1] with the renormalized density",
    )
    p_sim.set_defaults(func=cmd_simulate)
    return parser


_VALUE_FLAGS = ("--type", "--beta", "--p1", "--p2", "--x0", "--restrict-domain", "--t-list")

# sign strings and negative rationals: dashes, pluses, digits, '/', '.', exponents
_DASH_VALUE = re.compile(r"^-[+\-0-9/.eE,]*$")


def _merge_dash_values(argv: list) -> list:
    """Join flag/value pairs whose value starts with '-' (e.g. --type -+-).

    Real option names always contain a letter, so a following token made of
    signs and digits is a value, even when it begins with '--' like ---.
    """
    out = []
    i = 0
    while i < len(argv):
        arg = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if arg in _VALUE_FLAGS and _DASH_VALUE.match(nxt):
            out.append(f"{arg}={nxt}")
            i += 2
            continue
        out.append(arg)
        i += 1
    return out


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    argv = _merge_dash_values(list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except SpecError as exc:
        log.error("%s", exc)
        print(json.dumps({"error": str(exc)}))
        return EXIT_USAGE
    except (ValueError, ZeroDivisionError) as exc:
        log.error("%s", exc)
        print(json.dumps({"error": str(exc)}))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
