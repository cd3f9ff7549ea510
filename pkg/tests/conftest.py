"""Shared helpers: seeded random rationals, partitions, and maps."""

from fractions import Fraction

from moebiusdual import DegenerateMapError, MoebiusMap


def random_fraction(rng, lo=-4, hi=4, max_den=12):
    """Rational in [lo, hi] with denominator at most max_den."""
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_partition(rng, max_den=30):
    # 0 < p1 < p2 < 1 with one shared small denominator
    den = rng.randint(4, max_den)
    a = rng.randint(1, den - 2)
    b = rng.randint(a + 1, den - 1)
    return Fraction(a, den), Fraction(b, den)


def random_beta(rng, max_den=10, nonzero=False):
    """Middle parameter in the admissible range (-1, 2]."""
    while True:
        beta = random_fraction(rng, lo=-1, hi=2, max_den=max_den)
        if not (-1 < beta <= 2):
            continue
        if nonzero and beta == 0:
            continue
        return beta


def random_moebius(rng, bound=6):
    while True:
        quad = [rng.randint(-bound, bound) for _ in range(4)]
        try:
            return MoebiusMap(*quad)
        except DegenerateMapError:
            continue
