"""JSON encoding of scalars, vectors and matrices.

Exact values become ``[numerator, denominator]`` (real) or a pair of such pairs
(complex); floating values become ``[re, im]``.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .scalars import GaussianRational, imag_part, real_part, to_exact


def _frac(f: Fraction) -> list:
    return [f.numerator, f.denominator]


def encode(v):
    if isinstance(v, np.ndarray):
        return [encode(x) for x in v]
    if isinstance(v, (list, tuple)):
        return [encode(x) for x in v]
    if isinstance(v, GaussianRational):
        re, im = real_part(v), imag_part(v)
        return _frac(re) if im == 0 else [_frac(re), _frac(im)]
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return [int(v), 1]
    c = complex(v)
    return [c.real, c.imag]


def decode_exact(obj):
    """Inverse of :func:`encode` for exact values."""
    if isinstance(obj[0], list):
        return to_exact(Fraction(*obj[0])) + to_exact(Fraction(*obj[1])) * to_exact(complex(0, 1))
    return to_exact(Fraction(*obj))


def decode_float(obj) -> complex:
    return complex(obj[0], obj[1])


def dumps(obj) -> str:
    """Deterministic JSON (sorted keys, fixed separators, trailing newline)."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
