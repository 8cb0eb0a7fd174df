"""Rational functions of ``x`` with scalar or matrix coefficients.

:class:`PoleExpansion` stores a rational function in the basis

    x^i  (i >= 0)      and      (x - p)^{-k}  (k >= 1)

over a fixed list of distinct poles ``p`` (``0`` allowed). Coefficients may be
scalars or square matrices; products keep the left/right order of matrix
coefficients, so operator-valued expressions such as column determinants can be
expanded exactly.

:class:`PartialFractionOperator` is the operator ``c0 + sum_s A_s/(1-x/z_s) +
B_s/(1-x/z_s)^2`` used for the second-order coefficient of the universal
differential operator and for its scalar eigenvalue functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .scalars import Backend, infer_backend, max_abs

Key = tuple  # ("x", i) or (pole_index, k)


def smul(s, c):
    """Scalar times coefficient; keeps numpy arrays on the left (``QQ_I * ndarray`` fails)."""
    if isinstance(c, np.ndarray):
        return c * s
    return s * c


def cmul(a, b):
    if isinstance(a, np.ndarray) and isinstance(b, np.ndarray) and a.ndim == 2 and b.ndim == 2:
        return a @ b
    if isinstance(b, np.ndarray):
        return b * a if not isinstance(a, np.ndarray) else a * b
    return a * b


class PoleExpansion:
    """Rational function ``sum c_key * basis(key)`` with shared pole list."""

    def __init__(self, poles, terms: dict | None = None, backend: Backend | None = None):
        self.poles = tuple(poles)
        self.backend = backend or infer_backend(list(self.poles))
        self.terms: dict[Key, object] = dict(terms or {})
        self._index = {i: p for i, p in enumerate(self.poles)}

    # -- construction -----------------------------------------------------
    def _new(self, terms) -> PoleExpansion:
        out = PoleExpansion.__new__(PoleExpansion)
        out.poles = self.poles
        out.backend = self.backend
        out.terms = terms
        out._index = self._index
        return out

    def pole_index(self, p) -> int:
        for i, q in self._index.items():
            if q == p or (not self.backend.exact and abs(complex(q) - complex(p)) == 0):
                return i
        raise KeyError(f"{p} is not among the poles")

    @classmethod
    def constant(cls, poles, c, backend=None) -> PoleExpansion:
        return cls(poles, {("x", 0): c}, backend)

    def monomial(self, key: Key, c) -> PoleExpansion:
        return self._new({key: c})

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other: PoleExpansion) -> PoleExpansion:
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms[k] + v if k in terms else v
        return self._new(terms)

    def __neg__(self) -> PoleExpansion:
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: PoleExpansion) -> PoleExpansion:
        return self + (-other)

    def scale(self, s) -> PoleExpansion:
        return self._new({k: smul(s, v) for k, v in self.terms.items()})

    def map_coeffs(self, fn) -> PoleExpansion:
        return self._new({k: fn(v) for k, v in self.terms.items()})

    def __mul__(self, other: PoleExpansion) -> PoleExpansion:
        terms: dict[Key, object] = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                prod = cmul(va, vb)
                for k, s in self._basis_product(ka, kb).items():
                    c = smul(s, prod)
                    terms[k] = terms[k] + c if k in terms else c
        return self._new(terms)

    def _basis_product(self, ka: Key, kb: Key) -> dict:
        cache = self.__dict__.setdefault("_cache", {})
        if (ka, kb) not in cache:
            cache[(ka, kb)] = self._compute_product(ka, kb)
        return cache[(ka, kb)]

    def _compute_product(self, ka: Key, kb: Key) -> dict:
        one = self.backend.scalar(1)
        if ka[0] == "x" and kb[0] == "x":
            return {("x", ka[1] + kb[1]): one}
        if ka[0] == "x" or kb[0] == "x":
            i = ka[1] if ka[0] == "x" else kb[1]
            pole, k = kb if ka[0] == "x" else ka
            return self._x_power_times_pole(i, pole, k)
        (pa, ja), (pb, jb) = ka, kb
        if pa == pb:
            return {(pa, ja + jb): one}
        return self._two_poles(pa, ja, pb, jb)

    def _x_power_times_pole(self, i: int, pole: int, k: int) -> dict:
        # x = (x - a) + a, expanded binomially
        a = self._index[pole]
        out: dict = {}
        for r in range(i + 1):
            c = self.backend.scalar(comb(i, r)) * a ** (i - r)
            e = r - k
            if e < 0:
                key = (pole, -e)
                out[key] = out[key] + c if key in out else c
            else:
                for u in range(e + 1):
                    cu = c * self.backend.scalar(comb(e, u)) * (-a) ** (e - u)
                    key = ("x", u)
                    out[key] = out[key] + cu if key in out else cu
        return out

    def _two_poles(self, pa: int, ja: int, pb: int, jb: int) -> dict:
        if ja == 0:
            return {(pb, jb): self.backend.scalar(1)}
        if jb == 0:
            return {(pa, ja): self.backend.scalar(1)}
        inv = self.backend.scalar(1) / (self._index[pa] - self._index[pb])
        out: dict = {}
        for sign, part in ((1, self._two_poles(pa, ja, pb, jb - 1)), (-1, self._two_poles(pa, ja - 1, pb, jb))):
            for key, c in part.items():
                t = inv * c if sign > 0 else -(inv * c)
                out[key] = out[key] + t if key in out else t
        return out

    # -- calculus ----------------------------------------------------------
    def derivative(self) -> PoleExpansion:
        terms: dict = {}
        for (tag, k), v in self.terms.items():
            if tag == "x":
                if k == 0:
                    continue
                key, s = ("x", k - 1), self.backend.scalar(k)
            else:
                key, s = (tag, k + 1), self.backend.scalar(-k)
            c = smul(s, v)
            terms[key] = terms[key] + c if key in terms else c
        return self._new(terms)

    def times_x(self) -> PoleExpansion:
        return self * self.monomial(("x", 1), self.backend.scalar(1))

    def x_dx(self) -> PoleExpansion:
        """The Euler derivative ``x d/dx``."""
        return self.derivative().times_x()

    # -- inspection --------------------------------------------------------
    def coeff(self, key: Key, zero=None):
        if key in self.terms:
            return self.terms[key]
        return zero if zero is not None else self.backend.scalar(0)

    def pole_coeff(self, p, k: int, zero=None):
        return self.coeff((self.pole_index(p), k), zero)

    def defect(self) -> float:
        """Largest coefficient magnitude (``0.0`` iff identically zero in exact mode)."""
        return max((max_abs(v) for v in self.terms.values()), default=0.0)

    def largest_term(self):
        best = (None, 0.0)
        for k, v in self.terms.items():
            d = max_abs(v)
            if d > best[1]:
                best = (k, d)
        return best

    def evaluate(self, x):
        total = None
        for (tag, k), v in self.terms.items():
            f = x**k if tag == "x" else 1 / (x - self._index[tag]) ** k
            term = smul(f, v)
            total = term if total is None else total + term
        return total if total is not None else self.backend.scalar(0)

    def laurent_at_infinity(self, order: int, zero=None) -> list:
        """Coefficients of ``x^{-j}``, ``j = 0..order``.

        ``(x - p)^{-k} = sum_i C(k+i-1, i) p^i x^{-k-i}``. Positive powers of
        ``x`` must be absent.
        """
        zero = zero if zero is not None else self.backend.scalar(0)
        out = [zero for _ in range(order + 1)]
        for (tag, k), v in self.terms.items():
            if tag == "x":
                if k > 0:
                    if max_abs(v) == 0.0:
                        continue
                    raise ValueError("expansion has a polynomial part of positive degree")
                out[0] = out[0] + v
                continue
            p = self._index[tag]
            for j in range(k, order + 1):
                i = j - k
                s = self.backend.scalar(comb(k + i - 1, i)) * p**i
                out[j] = out[j] + smul(s, v)
        return out

    def to_unit_basis(self):
        """Rewrite in the basis ``1, 1/(1-x/p), 1/(1-x/p)^2`` (nonzero poles, order <= 2).

        Returns ``(c0, {pole_index: (A, B)})``.
        """
        c0 = self.coeff(("x", 0))
        out: dict = {}
        for (tag, k), v in self.terms.items():
            if tag == "x":
                if k > 0 and max_abs(v) != 0.0:
                    raise ValueError("positive-degree polynomial part")
                continue
            p = self._index[tag]
            A, B = out.get(tag, (None, None))
            if k == 1:
                # (x-p)^{-1} = -(1/p) / (1 - x/p)
                t = smul(-1 / p, v)
                A = t if A is None else A + t
            elif k == 2:
                t = smul(1 / p**2, v)
                B = t if B is None else B + t
            else:
                raise ValueError("pole order above 2")
            out[tag] = (A, B)
        return c0, out

    def __repr__(self) -> str:
        return f"PoleExpansion(poles={self.poles}, terms={len(self.terms)})"


def unit_pole_terms(poles_obj: PoleExpansion, z, A=None, B=None) -> PoleExpansion:
    """``A/(1-x/z) + B/(1-x/z)^2`` as a :class:`PoleExpansion`."""
    i = poles_obj.pole_index(z)
    terms = {}
    if A is not None:
        terms[(i, 1)] = smul(-z, A)
    if B is not None:
        terms[(i, 2)] = smul(z * z, B)
    return poles_obj._new(terms)


@dataclass
class PartialFractionOperator:
    """``c0 + sum_s [A_s/(1 - x/z_s) + B_s/(1 - x/z_s)^2]`` times ``(pi*i)^pi_power``.

    Coefficients are matrices on one weight block, or scalars for eigenvalue
    functions.
    """

    z: tuple
    c0: object
    A: list
    B: list
    pi_power: int = 0
    ms: tuple | None = None
    nu: int | None = None
    backend: Backend = field(default=None, repr=False)

    def __post_init__(self):
        self.z = tuple(self.z)
        if self.backend is None:
            self.backend = infer_backend(list(self.z))

    def evaluate(self, x):
        one = self.backend.scalar(1)
        total = self.c0
        for zs, a, b in zip(self.z, self.A, self.B):
            f = one / (one - x / zs)
            total = total + smul(f, a) + smul(f * f, b)
        return total

    def to_pole_expansion(self, extra_poles=()) -> PoleExpansion:
        pe = PoleExpansion(tuple(self.z) + tuple(extra_poles), backend=self.backend)
        out = pe.monomial(("x", 0), self.c0)
        for zs, a, b in zip(self.z, self.A, self.B):
            out = out + unit_pole_terms(pe, zs, a, b)
        return out

    def laurent_coeff(self, j: int):
        """Coefficient of ``x^{-j}`` of the stored function at ``x = infinity``.

        ``1/(1-x/z) = -sum_{j>=1} z^j x^{-j}``, ``1/(1-x/z)^2 = sum_{j>=2} (j-1) z^j x^{-j}``.
        """
        if j < 0:
            raise ValueError("order must be nonnegative")
        if j == 0:
            return self.c0
        total = smul(self.backend.scalar(0), self.c0)
        for zs, a, b in zip(self.z, self.A, self.B):
            total = total + smul(-(zs**j), a)
            if j >= 2:
                total = total + smul(self.backend.scalar(j - 1) * zs**j, b)
        return total

    def limit_at_infinity(self):
        """``c0`` plus what the simple poles leave at infinity (nothing)."""
        return self.c0

    def coefficient_defect(self, other: PartialFractionOperator) -> float:
        d = max_abs(self.c0 - other.c0)
        for a1, a2, b1, b2 in zip(self.A, other.A, self.B, other.B):
            d = max(d, max_abs(a1 - a2), max_abs(b1 - b2))
        return d


def from_rational(num, lead, poles, backend: Backend) -> PoleExpansion:
    """Partial fractions of ``num / (lead * prod (x - p)^r)`` for ``poles = [(p, r), ...]``.

    The numerator degree must be below the denominator degree. The coefficient of
    ``(x - p)^{-k}`` is the Taylor coefficient of order ``r - k`` at ``p`` of
    ``num / (lead * prod_{q != p} (x - q)^{r_q})``.
    """
    from . import polys

    be = backend
    num = be.convert(np.asarray(num, dtype=object))
    pole_vals = [be.scalar(p) for p, _ in poles]
    pe = PoleExpansion(tuple(pole_vals), backend=be)
    terms: dict = {}
    for i, (p, r) in enumerate(zip(pole_vals, [r for _, r in poles])):
        other = be.array([1])
        for j, (q, rq) in enumerate(zip(pole_vals, [r for _, r in poles])):
            if j != i:
                for _ in range(rq):
                    other = polys.mul(other, be.array([-q, 1]))
        other = other * be.scalar(lead)
        h = polys.series_div(polys.taylor_shift(num, p), polys.taylor_shift(other, p), r - 1)
        for k in range(1, r + 1):
            terms[(i, k)] = h[r - k]
    return pe._new(terms)
