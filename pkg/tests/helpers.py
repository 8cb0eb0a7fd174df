"""Random instance generators shared by the test modules."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from gaudin_lab.scalars import to_exact


def rational(rng, lo=-9, hi=9, dens=(1, 2, 3, 5, 7)):
    while True:
        v = Fraction(int(rng.integers(lo, hi + 1)), int(rng.choice(dens)))
        if v != 0:
            return to_exact(v)


def distinct_rationals(rng, n, lo=1, hi=40):
    out = []
    while len(out) < n:
        v = rational(rng, lo, hi)
        if not any(v == w for w in out):
            out.append(v)
    return out


def rational_mu(rng, avoid_half=True):
    """Rational mu with denominator 3, 5 or 7: never in (1/2)Z."""
    while True:
        v = Fraction(int(rng.integers(-20, 21)), int(rng.choice([3, 5, 7])))
        if v.denominator != 1 and (not avoid_half or (2 * v).denominator != 1):
            return to_exact(v)


def generic_z(rng, n):
    """Complex poles of unit scale, well separated from each other and from 0."""
    while True:
        z = rng.normal(size=n) + 1j * rng.normal(size=n)
        d = np.abs(z[:, None] - z[None, :]) + np.eye(n) * 10
        if np.min(np.abs(z)) > 0.2 and np.min(d) > 0.2:
            return list(z)


def generic_mu(rng):
    """Real mu away from (1/2)Z."""
    frac = rng.uniform(0.1, 0.4) if rng.random() < 0.5 else rng.uniform(0.6, 0.9)
    return float(int(rng.integers(-2, 3)) + frac)


def generic_zeta(rng):
    """zeta away from (1/4)Z so that mu = 2 zeta + nu/2 avoids the integers too."""
    return float(rng.uniform(0.03, 0.22) + 0.25 * int(rng.integers(-4, 4)))


def random_a(rng, n):
    """Wronski coefficients of a polynomial with random simple roots."""
    b = rng.normal(size=n) + 1j * rng.normal(size=n)
    poly = np.poly(b)
    return [complex(poly[s] * (-1) ** s) for s in range(1, n + 1)]
