"""Finite-dimensional sl2-modules, their tensor products and weight blocks.

Basis vectors of the irreducible module ``V_m`` are ``v_0, ..., v_m`` with

    (e11 - e22) v_k = (m - 2k) v_k,   e21 v_k = (k+1) v_{k+1},   e12 v_k = (m-k+1) v_{k-1},

and the central element ``e11 + e22`` acting by zero. A weight block ``V[nu]`` of
``V_{m_1} x ... x V_{m_n}`` is spanned by index tuples ``(k_1, ..., k_n)`` with
``sum(m_s - 2 k_s) = nu``, ordered lexicographically; every module in the
package relies on that ordering.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import factorial

import numpy as np

from .scalars import EXACT, Backend, get_backend, infer_backend

GENERATORS = ("e11", "e12", "e21", "e22", "h", "c")
# weight shift of each generator
SHIFT = {"e11": 0, "e22": 0, "h": 0, "c": 0, "e12": 2, "e21": -2}


class PoleError(ZeroDivisionError):
    """The requested parameter hits a pole of the dynamical Weyl operator."""

    def __init__(self, j: int, msg: str):
        super().__init__(msg)
        self.j = j


@dataclass(frozen=True)
class IrrepData:
    m: int
    gen: dict
    backend: Backend = EXACT

    @property
    def dim(self) -> int:
        return self.m + 1


def _local(m: int, g: str, k: int):
    """Action of a generator on ``v_k`` of ``V_m`` as ``(k', coefficient)`` or ``None``.

    Coefficients are returned as pairs ``(numerator, denominator)`` of ints so
    that both backends can consume them.
    """
    if g == "h":
        return k, (m - 2 * k, 1)
    if g == "e11":
        return k, (m - 2 * k, 2)
    if g == "e22":
        return k, (2 * k - m, 2)
    if g == "c":
        return k, (0, 1)
    if g == "e21":
        return (k + 1, (k + 1, 1)) if k < m else None
    if g == "e12":
        return (k - 1, (m - k + 1, 1)) if k > 0 else None
    raise ValueError(f"unknown generator {g!r}")


def build_irrep(m: int, backend="exact") -> IrrepData:
    if m < 0:
        raise ValueError("highest weight must be nonnegative")
    be = get_backend(backend)
    gens = {}
    for g in ("e11", "e12", "e21", "e22"):
        mat = be.zeros((m + 1, m + 1))
        for k in range(m + 1):
            r = _local(m, g, k)
            if r is not None:
                k2, (num, den) = r
                mat[k2, k] = be.scalar(num) / be.scalar(den)
        gens[g] = mat
    return IrrepData(m, gens, be)


@dataclass(frozen=True)
class WeightMatrix:
    """Matrix of an operator ``V[nu] -> V[nu_out]`` times ``(pi*i)^pi_power``."""

    nu: int
    entries: np.ndarray
    pi_power: int = 0
    nu_out: int | None = None

    def __post_init__(self):
        if self.nu_out is None:
            object.__setattr__(self, "nu_out", self.nu)

    @property
    def shape(self):
        return self.entries.shape

    def __matmul__(self, other: WeightMatrix) -> WeightMatrix:
        if other.nu_out != self.nu:
            raise ValueError(f"cannot compose V[{other.nu}]->V[{other.nu_out}] with V[{self.nu}]->...")
        return WeightMatrix(other.nu, self.entries @ other.entries, self.pi_power + other.pi_power, self.nu_out)


@dataclass(frozen=True)
class TensorSpace:
    """``V_{m_1} x ... x V_{m_n}`` with its weight decomposition."""

    ms: tuple
    backend: Backend = field(default=EXACT, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "ms", tuple(int(m) for m in self.ms))
        if any(m < 0 for m in self.ms):
            raise ValueError("highest weights must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.ms)

    @property
    def M(self) -> int:
        return sum(self.ms)

    @cached_property
    def basis(self) -> list:
        return list(itertools.product(*(range(m + 1) for m in self.ms)))

    @cached_property
    def weight_blocks(self) -> dict:
        blocks: dict = {}
        for idx in self.basis:
            blocks.setdefault(self.weight_of(idx), []).append(idx)
        return dict(sorted(blocks.items(), reverse=True))

    @cached_property
    def _positions(self) -> dict:
        return {nu: {idx: i for i, idx in enumerate(b)} for nu, b in self.weight_blocks.items()}

    @cached_property
    def _full_positions(self) -> dict:
        return {idx: i for i, idx in enumerate(self.basis)}

    def weight_of(self, idx) -> int:
        return sum(m - 2 * k for m, k in zip(self.ms, idx))

    def weights(self) -> list:
        return list(self.weight_blocks)

    def block(self, nu: int) -> list:
        if nu not in self.weight_blocks:
            raise ValueError(f"weight block V[{nu}] is empty for ms={self.ms}")
        return self.weight_blocks[nu]

    def dim(self, nu: int | None = None) -> int:
        if nu is None:
            return len(self.basis)
        return len(self.weight_blocks.get(nu, ()))

    def position(self, nu: int | None, idx) -> int:
        if nu is None:
            return self._full_positions[idx]
        return self._positions[nu][idx]

    def with_backend(self, backend) -> TensorSpace:
        return TensorSpace(self.ms, get_backend(backend))


def _basis_for(space: TensorSpace, nu):
    return space.basis if nu is None else space.block(nu)


def site_matrix(space: TensorSpace, g: str, s, nu=None) -> np.ndarray:
    """Matrix of ``g^{(s)}`` (``s`` a 0-based site) or of ``sum_s g^{(s)}`` (``s="diagonal"``).

    With ``nu`` given the result maps ``V[nu] -> V[nu + shift(g)]``; with
    ``nu=None`` it acts on the whole tensor product in its product-order basis.
    """
    if g not in SHIFT:
        raise ValueError(f"unknown generator {g!r}")
    be = space.backend
    src = _basis_for(space, nu)
    if nu is None:
        dst_nu = None
        dst = space.basis
    else:
        dst_nu = nu + SHIFT[g]
        dst = space.weight_blocks.get(dst_nu, [])
    out = be.zeros((len(dst), len(src)))
    sites = range(space.n) if s == "diagonal" else [s]
    for j, idx in enumerate(src):
        for site in sites:
            r = _local(space.ms[site], g, idx[site])
            if r is None:
                continue
            k2, (num, den) = r
            if num == 0:
                continue
            tgt = idx[:site] + (k2,) + idx[site + 1 :]
            i = space.position(dst_nu, tgt)
            out[i, j] = out[i, j] + be.scalar(num) / be.scalar(den)
    return out


def act_generator(g: str, site, space: TensorSpace, nu: int) -> WeightMatrix:
    """Generator ``g`` at one site (0-based) or ``"diagonal"``, restricted to ``V[nu]``.

    ``g`` is one of ``e11, e12, e21, e22`` or ``h = e11 - e22``, ``c = e11 + e22``.
    """
    if g not in SHIFT:
        raise ValueError(f"unknown generator {g!r}")
    space.block(nu)
    mat = site_matrix(space, g, site, nu)
    return WeightMatrix(nu, mat, 0, nu + SHIFT[g])


def weyl_sigma(space: TensorSpace, nu) -> WeightMatrix:
    """``v_k -> (-1)^k v_{m-k}`` factorwise, as a map ``V[nu] -> V[-nu]``."""
    src = space.block(nu)
    space.block(-nu)
    be = space.backend
    out = be.zeros((len(src), len(src)))
    for j, idx in enumerate(src):
        tgt = tuple(m - k for m, k in zip(space.ms, idx))
        sign = -1 if sum(idx) % 2 else 1
        out[space.position(-nu, tgt), j] = be.scalar(sign)
    return WeightMatrix(nu, out, 0, -nu)


def _power_chain(space: TensorSpace, g: str, nu: int, k: int):
    """``g^k`` restricted to ``V[nu]`` (``None`` once the chain leaves the module)."""
    be = space.backend
    mat = be.eye(space.dim(nu))
    cur = nu
    for _ in range(k):
        if space.dim(cur + SHIFT[g]) == 0:
            return None
        mat = site_matrix(space, g, "diagonal", cur) @ mat
        cur += SHIFT[g]
    return mat


def p_operator(mu, space: TensorSpace, nu: int) -> np.ndarray:
    """``p(mu) = sum_k e21^k e12^k / k! * prod_{j<k} 1/(mu + e22 - e11 - j)`` on ``V[nu]``.

    The rightmost factor acts first, so ``e22 - e11 = -nu`` there; the sum is
    finite because ``e12`` is nilpotent.
    """
    be = space.backend
    mu = be.scalar(mu)
    d = space.dim(nu)
    total = be.eye(d)
    for k in range(1, space.M + 1):
        up = _power_chain(space, "e12", nu, k)
        if up is None:
            break
        down = _power_chain(space, "e21", nu + 2 * k, k)
        term = down @ up
        if not any(bool(v) if be.exact else abs(v) > 0 for v in term.reshape(-1)):
            break
        coef = be.scalar(1) / be.scalar(factorial(k))
        for j in range(k):
            den = mu - be.scalar(nu) - be.scalar(j)
            if (be.exact and not den) or (not be.exact and abs(den) == 0):
                raise PoleError(j, f"p(mu) has a pole at mu={mu} on V[{nu}] (factor j={j})")
            coef = coef / den
        total = total + term * coef
    return total


def dynamical_weyl_A(mu, space: TensorSpace, nu: int) -> WeightMatrix:
    """``A(mu) = sigma p(mu)`` as a map ``V[nu] -> V[-nu]`` (argument taken literally)."""
    sig = weyl_sigma(space, nu)
    return WeightMatrix(nu, sig.entries @ p_operator(mu, space, nu), 0, -nu)


def shifted_A(mu, space: TensorSpace, nu: int) -> WeightMatrix:
    """``A(mu + nu/2 - 1)`` restricted to ``V[nu]``, the form used by the intertwiner."""
    be = space.backend
    arg = be.scalar(mu) + be.scalar(nu) / be.scalar(2) - be.scalar(1)
    return dynamical_weyl_A(arg, space, nu)


def composition_scalar(mu, space: TensorSpace, nu: int):
    """Expected scalar ``(-1)^M (mu - nu/2)/(mu + nu/2)`` of ``A(-mu-nu/2-1) A(mu+nu/2-1)`` on ``V[nu]``."""
    be = space.backend
    mu = be.scalar(mu)
    half = be.scalar(nu) / be.scalar(2)
    sign = be.scalar(-1 if space.M % 2 else 1)
    return sign * (mu - half) / (mu + half)


def composition_matrix(mu, space: TensorSpace, nu: int) -> np.ndarray:
    """``A(-mu - nu/2 - 1)|_{V[-nu]}`` composed with ``A(mu + nu/2 - 1)|_{V[nu]}``.

    The left factor is the shifted operator at ``(-mu, -nu)``; the composition
    is then scalar on ``V[nu]``.
    """
    be = space.backend
    mu = be.scalar(mu)
    right = shifted_A(mu, space, nu)
    left = shifted_A(-mu, space, -nu)
    return (left @ right).entries


def as_space(ms, backend=None) -> TensorSpace:
    if isinstance(ms, TensorSpace):
        return ms if backend is None else ms.with_backend(backend)
    return TensorSpace(tuple(ms), get_backend(backend) if backend is not None else EXACT)


def space_backend(space: TensorSpace, *values) -> TensorSpace:
    """Space re-targeted to the backend implied by ``values``."""
    be = infer_backend(*values)
    return space if space.backend == be else space.with_backend(be)
