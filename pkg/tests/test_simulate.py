"""Orbit simulation, KS distances, histograms."""

import numpy as np
import pytest

from moebiusdual import (
    OrbitConfig,
    Polynomial,
    RationalDensity,
    RationalFunction,
    SystemSpec,
    closed_form_density,
    histogram,
    histogram_csv,
    ks_distance,
    lift_density,
    make_cdf,
    run_orbit,
)

LEBESGUE = RationalDensity(RationalFunction(Polynomial([1])))


def spec(beta, type_str):
    return SystemSpec.make("1/3", "2/3", beta, type_str)


# --- orbits --------------------------------------------------------------------

def test_orbit_deterministic_for_seed():
    cfg = OrbitConfig(spec(1, "+++"), which="S", iterations=5000, burn_in=100, seed=9)
    a = run_orbit(cfg)
    b = run_orbit(cfg)
    assert a.x0 == b.x0
    assert np.array_equal(a.samples, b.samples)
    other = run_orbit(
        OrbitConfig(spec(1, "+++"), which="S", iterations=5000, burn_in=100, seed=10)
    )
    assert other.x0 != a.x0


def test_orbit_respects_explicit_start():
    cfg = OrbitConfig(
        spec(1, "+++"), which="S", iterations=2000, burn_in=10, seed=0, x0=0.25
    )
    result = run_orbit(cfg)
    assert result.x0 == 0.25
    assert len(result.samples) == 1990


def test_orbit_config_validation():
    with pytest.raises(ValueError, match="which"):
        OrbitConfig(spec(1, "+++"), which="Q")
    with pytest.raises(ValueError, match="exceed burn_in"):
        OrbitConfig(spec(1, "+++"), iterations=100, burn_in=100)
    with pytest.raises(ValueError, match="x0"):
        OrbitConfig(spec(1, "+++"), x0=1.5)


def test_fixed_point_orbit_is_flagged_degenerate():
    # at beta = 0 the middle branch of T is 3x - 1, which fixes 1/2
    cfg = OrbitConfig(
        spec(0, "+++"), which="T", iterations=3000, burn_in=100, seed=0, x0=0.5
    )
    result = run_orbit(cfg)
    assert result.degenerate
    assert np.all(result.samples == 0.5)
    assert result.escapes == 0


def test_generic_orbit_not_degenerate():
    cfg = OrbitConfig(spec(1, "+++"), which="S", iterations=5000, burn_in=100, seed=3)
    assert not run_orbit(cfg).degenerate


# --- KS distance ------------------------------------------------------------------

def test_ks_constant_sample_against_uniform():
    samples = np.full(100, 0.5)
    assert ks_distance(samples, lambda xs: np.asarray(xs)) == pytest.approx(0.5)


def test_ks_midpoint_grid_against_uniform():
    n = 200
    samples = (np.arange(n) + 0.5) / n
    assert ks_distance(samples, lambda xs: np.asarray(xs)) == pytest.approx(0.5 / n)


def test_ks_empty_rejected():
    with pytest.raises(ValueError, match="no samples"):
        ks_distance(np.array([]), lambda xs: np.asarray(xs))


def test_jump_orbit_matches_closed_form():
    cfg = OrbitConfig(
        spec(1, "+++"), which="S", iterations=200_000, burn_in=1000, seed=42
    )
    result = run_orbit(cfg)
    cdf = make_cdf(closed_form_density((1, 1, 1), 1))
    ks = ks_distance(result.samples, cdf)
    assert ks < 0.01, ks
    assert result.escapes < 5
    print(f"✓ S orbit at beta = 1, type +++: KS = {ks:.5f} over {len(result.samples)} samples")


def test_base_orbit_matches_lifted_density():
    s = spec(1, "+-+")
    cfg = OrbitConfig(s, which="T", iterations=200_000, burn_in=1000, seed=7)
    result = run_orbit(cfg)
    g = lift_density(closed_form_density((1, -1, 1), 1), s)
    ks = ks_distance(result.samples, make_cdf(g))
    assert ks < 0.01, ks
    print(f"✓ T orbit at beta = 1, type +-+: KS = {ks:.5f}")


def test_restricted_domain_orbit_for_sigma_finite_density():
    from fractions import Fraction

    s = spec(2, "+++")
    cfg = OrbitConfig(s, which="S", iterations=200_000, burn_in=1000, seed=1)
    result = run_orbit(cfg)
    eps = 0.1
    kept = result.samples[result.samples >= eps]
    cdf = make_cdf(closed_form_density((1, 1, 1), 2), (Fraction(1, 10), Fraction(1)))
    ks = ks_distance(kept, cdf)
    assert 0 < len(kept) < len(result.samples)
    assert ks < 0.05, ks


# --- histograms ----------------------------------------------------------------------

def test_histogram_masses():
    rng = np.random.default_rng(5)
    samples = rng.uniform(0, 1, 20_000)
    report = histogram(samples, bins=10)
    assert report.analytic is None and report.ks is None
    assert report.empirical.sum() == pytest.approx(1.0)
    assert len(report.edges) == 11

    with_cdf = histogram(samples, bins=10, cdf=make_cdf(LEBESGUE), escapes=2)
    assert with_cdf.analytic == pytest.approx(np.full(10, 0.1))
    assert with_cdf.ks < 0.02
    assert with_cdf.escapes == 2
    assert with_cdf.to_json()["samples"] == 20_000


def test_histogram_csv_format():
    rng = np.random.default_rng(6)
    samples = rng.uniform(0, 1, 1000)
    text = histogram_csv(histogram(samples, bins=4, cdf=make_cdf(LEBESGUE)))
    lines = text.strip().split("\n")
    assert lines[0] == "bin_lo,bin_hi,empirical,analytic"
    assert len(lines) == 5
    row = lines[1].split(",")
    assert float(row[0]) == 0.0 and float(row[1]) == 0.25
    assert float(row[3]) == pytest.approx(0.25)

    bare = histogram_csv(histogram(samples, bins=4))
    assert bare.strip().split("\n")[1].endswith(",")
