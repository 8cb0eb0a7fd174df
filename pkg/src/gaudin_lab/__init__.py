"""Trigonometric sl2 Gaudin model: operators, Bethe ansatz, Wronski duality, KZB series."""

from .scalars import EXACT, FLOAT, get_backend, parse_scalar
from .repn import TensorSpace, WeightMatrix, build_irrep

__all__ = ["EXACT", "FLOAT", "get_backend", "parse_scalar", "TensorSpace", "WeightMatrix", "build_irrep"]
