"""Truncated series in ``L = exp(-2 pi i lam)`` and the trigonometric KZB operators.

A vector-valued series ``psi = exp(pi i mu lam) sum_k L^k psi^k`` is stored by its
coefficients ``psi^0..psi^K`` in ``V[0]``. Everything is normalized by powers of
``pi*i``: ``d/dlam`` multiplies the ``L^k`` term by ``(mu - 2k)`` and raises
``pi_power`` by one. With that normalization all operator actions stay rational
when ``mu`` and ``z`` are, so the exact backend gives exact zeros.

Operator results are returned divided by ``(pi i)^p`` with ``p = 1`` for ``H_0``
and ``H_s`` and ``p = 2`` for ``C_2``; the ``pi_power`` tag records it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gaudin import check_poles, d2_partial_fractions, gaudin_operator, two_site
from .repn import TensorSpace, as_space, site_matrix
from .scalars import Backend, SingularSystemError, _domain_matrix, get_backend, infer_backend, max_abs, solve, to_complex
from .serialize import encode

DEFAULT_K = 8


class KZBSingularError(SingularSystemError):
    """The order-``k`` recursion for an ``H_0`` eigenfunction is singular."""

    def __init__(self, k: int, msg: str):
        super().__init__(msg)
        self.k = k


@dataclass(frozen=True)
class ScalarLambdaSeries:
    """``(pi i)^pi_power * sum_k c_k L^k`` truncated at ``L^K``."""

    coeffs: tuple
    pi_power: int = 0

    @property
    def K(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def _check(self, other: ScalarLambdaSeries):
        if other.K != self.K:
            raise ValueError(f"truncation mismatch: {self.K} vs {other.K}")

    def __add__(self, other: ScalarLambdaSeries) -> ScalarLambdaSeries:
        self._check(other)
        if other.pi_power != self.pi_power:
            raise ValueError("cannot add series with different pi powers")
        return ScalarLambdaSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.pi_power)

    def __mul__(self, other: ScalarLambdaSeries) -> ScalarLambdaSeries:
        self._check(other)
        out = []
        for k in range(self.K + 1):
            acc = self.coeffs[0] * other.coeffs[k]
            for j in range(1, k + 1):
                acc = acc + self.coeffs[j] * other.coeffs[k - j]
            out.append(acc)
        return ScalarLambdaSeries(tuple(out), self.pi_power + other.pi_power)

    def scale(self, c) -> ScalarLambdaSeries:
        return ScalarLambdaSeries(tuple(c * a for a in self.coeffs), self.pi_power)

    def evaluate(self, L) -> complex:
        """Numerical value of the truncated sum, ``(pi i)^pi_power`` included."""
        total = sum(to_complex(a) * L**k for k, a in enumerate(self.coeffs))
        return total * (np.pi * 1j) ** self.pi_power


def trig_expansions(K: int, backend="exact") -> tuple[ScalarLambdaSeries, ScalarLambdaSeries]:
    """``pi cot(pi lam)`` and ``1/sin^2(pi lam)`` as series in ``L``.

    ``pi cot(pi lam) = pi i (1 + L)/(1 - L)`` gives coefficients ``1, 2, 2, ...``
    with one power of ``pi i``; ``1/sin^2(pi lam) = -4 L/(1 - L)^2`` has none.
    """
    if K < 0:
        raise ValueError("truncation order must be nonnegative")
    be = get_backend(backend)
    cot = tuple(be.scalar(1 if k == 0 else 2) for k in range(K + 1))
    inv_sin2 = tuple(be.scalar(-4 * k) for k in range(K + 1))
    return ScalarLambdaSeries(cot, 1), ScalarLambdaSeries(inv_sin2, 0)


@dataclass
class LambdaSeriesVector:
    """``(pi i)^pi_power exp(pi i mu lam) sum_k L^k psi^k`` with ``psi^k`` in ``V[0]``."""

    mu: object
    coeffs: np.ndarray  # shape (K+1, dim V[0])
    pi_power: int = 0
    backend: Backend = field(default=None, repr=False)

    def __post_init__(self):
        if self.backend is None:
            self.backend = infer_backend(self.mu, list(self.coeffs.reshape(-1)))
        if self.coeffs.ndim != 2:
            raise ValueError("coefficients must be a (K+1, dim) array")

    @property
    def K(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def dim(self) -> int:
        return self.coeffs.shape[1]

    def _like(self, coeffs, pi_power=None) -> LambdaSeriesVector:
        return LambdaSeriesVector(self.mu, coeffs, self.pi_power if pi_power is None else pi_power, self.backend)

    def _check(self, other: LambdaSeriesVector):
        if other.coeffs.shape != self.coeffs.shape:
            raise ValueError(f"shape mismatch: {self.coeffs.shape} vs {other.coeffs.shape}")
        if other.pi_power != self.pi_power:
            raise ValueError("cannot combine series with different pi powers")
        if other.mu != self.mu:
            raise ValueError("series have different exponents")

    def __add__(self, other: LambdaSeriesVector) -> LambdaSeriesVector:
        self._check(other)
        return self._like(self.coeffs + other.coeffs)

    def __sub__(self, other: LambdaSeriesVector) -> LambdaSeriesVector:
        self._check(other)
        return self._like(self.coeffs - other.coeffs)

    def scale(self, c) -> LambdaSeriesVector:
        return self._like(self.coeffs * self.backend.scalar(c))

    def times(self, f: ScalarLambdaSeries) -> LambdaSeriesVector:
        """Product with a scalar series, truncated at ``K``."""
        if f.K < self.K:
            raise ValueError("scalar series is truncated too early")
        out = self.backend.zeros(self.coeffs.shape)
        for k in range(self.K + 1):
            for j in range(k + 1):
                out[k] = out[k] + self.coeffs[k - j] * f[j]
        return self._like(out, self.pi_power + f.pi_power)

    def apply(self, mat: np.ndarray) -> LambdaSeriesVector:
        return self._like(self.coeffs @ mat.T)

    def d_lambda(self) -> LambdaSeriesVector:
        be = self.backend
        out = self.coeffs.copy()
        for k in range(self.K + 1):
            out[k] = out[k] * (be.scalar(self.mu) - be.scalar(2 * k))
        return self._like(out, self.pi_power + 1)

    def retag(self, pi_power: int) -> LambdaSeriesVector:
        return self._like(self.coeffs, pi_power)

    def defect(self) -> float:
        return max_abs(self.coeffs)

    def to_record(self) -> dict:
        return {"mu": encode(self.backend.scalar(self.mu)), "K": self.K, "pi_power": self.pi_power,
                "coeffs": encode(self.coeffs)}


@dataclass(frozen=True)
class KZBSystem:
    """Weight-zero data of ``V_{m_1} x ... x V_{m_n}`` shared by all operator actions."""

    space: TensorSpace
    omega0_total: np.ndarray
    hopping_total: np.ndarray

    @classmethod
    def build(cls, ms, backend="exact") -> KZBSystem:
        space = as_space(ms, backend)
        if space.M % 2:
            raise ValueError("V[0] is empty: total highest weight is odd")
        n = space.n
        d = space.dim(0)
        be = space.backend
        o0, hop = be.zeros((d, d)), be.zeros((d, d))
        for s in range(n):
            for t in range(n):
                o0 = o0 + two_site(space, "e11", s, "e11", t, 0) + two_site(space, "e22", s, "e22", t, 0)
                hop = hop + two_site(space, "e12", s, "e21", t, 0) + two_site(space, "e21", s, "e12", t, 0)
        return cls(space, o0, hop)

    @property
    def backend(self) -> Backend:
        return self.space.backend

    def pair_terms(self, s: int, t: int):
        """``(Omega^(s,t), Omega_12^(s,t) - Omega_21^(s,t))`` on ``V[0]``."""
        sp = self.space
        o0 = two_site(sp, "e11", s, "e11", t, 0) + two_site(sp, "e22", s, "e22", t, 0)
        a = two_site(sp, "e12", s, "e21", t, 0)
        b = two_site(sp, "e21", s, "e12", t, 0)
        return o0 + a + b, a - b


def _system_for(ms_or_system, backend) -> KZBSystem:
    if isinstance(ms_or_system, KZBSystem):
        return ms_or_system
    return KZBSystem.build(ms_or_system, backend)


def build_eigenfunction(v, mu, K: int = DEFAULT_K, ms=None, *, system: KZBSystem | None = None,
                        pi_power: int = 0) -> LambdaSeriesVector:
    """The ``H_0`` eigenfunction with leading coefficient ``v``, to order ``K``.

    At order ``k`` the equation reads
    ``[((mu-2k)^2 - mu^2)/2 + Omega0/8 + c_0 X/4] psi^k = -1/4 sum_{j>=1} c_j X psi^{k-j}``
    where ``c_j`` are the coefficients of ``1/sin^2`` and ``X`` the total
    hopping term; ``c_0 = 0`` and ``Omega0 = 0`` on ``V[0]``, so the matrix is
    ``2k(k - mu)`` times the identity.
    """
    if system is None:
        if ms is None:
            raise ValueError("need ms or a prebuilt system")
        system = KZBSystem.build(ms, infer_backend(mu, list(v)))
    be = system.backend
    mu = be.scalar(mu)
    v = be.array(list(v))
    d = system.space.dim(0)
    if v.shape != (d,):
        raise ValueError(f"vector has length {v.shape[0]}, dim V[0] = {d}")
    if max_abs(v) == 0:
        raise ValueError("leading vector must be nonzero")
    _, s2 = trig_expansions(K, be)
    quarter = be.scalar(1) / be.scalar(4)
    eighth = be.scalar(1) / be.scalar(8)
    half = be.scalar(1) / be.scalar(2)
    base = system.omega0_total * eighth + system.hopping_total * (s2[0] * quarter)
    if max_abs(base @ v) > (0 if be.exact else 1e-12):
        raise ValueError("leading vector is not an eigenvector at order 0")
    coeffs = be.zeros((K + 1, d))
    coeffs[0] = v
    for k in range(1, K + 1):
        shift = mu - be.scalar(2 * k)
        mat = be.eye(d) * ((shift * shift - mu * mu) * half) + base
        rhs = be.zeros(d)
        for j in range(1, k + 1):
            rhs = rhs + system.hopping_total @ coeffs[k - j] * s2[j]
        rhs = rhs * (-quarter)
        try:
            coeffs[k] = solve(mat, rhs)
        except (SingularSystemError, np.linalg.LinAlgError) as exc:
            raise KZBSingularError(k, f"order-{k} system is singular at mu={mu}") from exc
    return LambdaSeriesVector(mu, coeffs, pi_power, be)


def apply_H0(psi: LambdaSeriesVector, system: KZBSystem) -> LambdaSeriesVector:
    """``H_0 psi`` in units of ``pi i``; uses ``d_1^2 + d_2^2 = 2 d_lam^2``."""
    be = psi.backend
    _, s2 = trig_expansions(psi.K, be)
    quarter = be.scalar(1) / be.scalar(4)
    kinetic = psi.d_lambda().d_lambda().scale(be.scalar(1) / be.scalar(2))
    potential = psi.apply(system.omega0_total * (quarter / be.scalar(2)))
    potential = potential + psi.apply(system.hopping_total * quarter).times(s2)
    return kinetic.retag(kinetic.pi_power - 1) + potential.retag(potential.pi_power + 1)


def apply_Hs(psi: LambdaSeriesVector, s: int, z, system: KZBSystem) -> LambdaSeriesVector:
    """``H_s(z) psi`` (``s`` 0-based) in units of ``pi i``."""
    be = psi.backend
    z = [be.scalar(a) for a in z]
    check_poles(z)
    if len(z) != system.space.n:
        raise ValueError("need one pole per tensor factor")
    cot, _ = trig_expansions(psi.K, be)
    h = site_matrix(system.space, "h", s, 0)
    out = psi.d_lambda().apply(-h)
    for t in range(system.space.n):
        if t == s:
            continue
        omega, antisym = system.pair_terms(s, t)
        out = out + psi.apply(omega * ((z[t] + z[s]) / (z[t] - z[s]))).retag(out.pi_power)
        out = out - psi.apply(antisym).times(cot)
    return out


def casimir_scalar(m: int, be: Backend):
    """Value ``-m(m+2)/4`` of ``c_2 = e11 e22 - e12 e21 + e11`` on ``V_m``."""
    return be.scalar(-m * (m + 2)) / be.scalar(4)


def apply_C2(psi: LambdaSeriesVector, x, z, system: KZBSystem) -> LambdaSeriesVector:
    """``C_2(x) psi`` in units of ``(pi i)^2`` (note ``4 pi^2 = -4 (pi i)^2``)."""
    be = psi.backend
    x = be.scalar(x)
    z = [be.scalar(a) for a in z]
    one = be.scalar(1)
    if any(x == a for a in z):
        raise ZeroDivisionError(f"C_2(x) has a pole at x={x}")
    out = apply_H0(psi, system).scale(-2).retag(psi.pi_power + 2)
    for s, (zs, m) in enumerate(zip(z, system.space.ms)):
        f = one / (one - x / zs)
        hs = apply_Hs(psi, s, z, system)
        out = out - hs.scale(2 * f).retag(out.pi_power)
        c2 = casimir_scalar(m, be)
        out = out + psi.scale(be.scalar(4) * (c2 * f * f - c2 * f)).retag(out.pi_power)
    return out


def hs_target(v, s: int, z, mu, system: KZBSystem):
    """``-2 K_s(z, mu) v``: the leading vector of ``H_s psi_v`` in units of ``pi i``."""
    K = gaudin_operator(s, z, mu, system.space, 0).entries
    return (K @ system.backend.array(list(v))) * system.backend.scalar(-2)


def c2_target(v, x, z, mu, system: KZBSystem):
    """Leading vector of ``C_2(x) psi_v`` in units of ``(pi i)^2``: four times ``D_2(x)/(2 pi i)^2`` on ``V[0]``."""
    be = system.backend
    pf = d2_partial_fractions(z, mu, system.space, 0)
    return (pf.evaluate(be.scalar(x)) @ be.array(list(v))) * be.scalar(4)


def series_defect(a: LambdaSeriesVector, b: LambdaSeriesVector) -> float:
    """Largest coefficient of ``a - b`` relative to the larger of the two series (at least 1)."""
    return (a - b).defect() / max(1.0, a.defect(), b.defect())


def _psi_or_zero(w, mu, K, system, pi_power) -> LambdaSeriesVector:
    """``psi_w``, extended linearly to ``w = 0``."""
    be = system.backend
    if max_abs(w) == 0:
        return LambdaSeriesVector(be.scalar(mu), be.zeros((K + 1, len(w))), pi_power, be)
    return build_eigenfunction(w, mu, K, system=system, pi_power=pi_power)


@dataclass
class KZBReport:
    h0: float
    hs: list
    hs_sum: float
    c2: float
    c2_commutator: float

    @property
    def max_defect(self) -> float:
        return max([self.h0, self.hs_sum, self.c2, self.c2_commutator, *self.hs])


def kzb_check(ms, z, mu, K: int = DEFAULT_K, x=None, ab=None, backend=None, basis=None) -> KZBReport:
    """All series checks for each basis vector of ``V[0]`` (or the vectors in ``basis``)."""
    be = get_backend(backend) if backend is not None else infer_backend(list(z), mu)
    system = KZBSystem.build(ms, be)
    d = system.space.dim(0)
    vectors = basis if basis is not None else list(be.eye(d))
    x = be.scalar(x if x is not None else sum(z) * be.scalar(1) / be.scalar(7) + be.scalar(1) / be.scalar(3))
    a, b = ab if ab is not None else (be.scalar(1) / be.scalar(5), be.scalar(11) / be.scalar(2))
    h0 = hs_sum = c2 = comm = 0.0
    hs = [0.0] * system.space.n
    for v in vectors:
        psi = build_eigenfunction(v, mu, K, system=system)
        h0 = max(h0, series_defect(apply_H0(psi, system), psi.scale(be.scalar(mu) ** 2 / be.scalar(2)).retag(1)))
        total = None
        for s in range(system.space.n):
            out = apply_Hs(psi, s, z, system)
            want = _psi_or_zero(hs_target(v, s, z, mu, system), mu, K, system, 1)
            hs[s] = max(hs[s], series_defect(out, want))
            total = out if total is None else total + out
        hs_sum = max(hs_sum, total.defect())
        want = _psi_or_zero(c2_target(v, x, z, mu, system), mu, K, system, 2)
        c2 = max(c2, series_defect(apply_C2(psi, x, z, system), want))
        ab_ = apply_C2(apply_C2(psi, b, z, system), a, z, system)
        ba_ = apply_C2(apply_C2(psi, a, z, system), b, z, system)
        comm = max(comm, series_defect(ab_, ba_))
    return KZBReport(h0, hs, hs_sum, c2, comm)


def charpoly_defect(z, mu, ms) -> float:
    """Compare characteristic polynomials of ``K_s(z, mu)`` and ``K_s(z, -mu)`` on ``V[0]``."""
    space = as_space(ms)
    worst = 0.0
    be = infer_backend(list(z), mu)
    space = space.with_backend(be)
    for s in range(space.n):
        plus = gaudin_operator(s, z, mu, space, 0).entries
        minus = gaudin_operator(s, z, -be.scalar(mu), space, 0).entries
        if be.exact:
            cp = _domain_matrix(plus).charpoly()
            cm = _domain_matrix(minus).charpoly()
            if any(p != q for p, q in zip(cp, cm)):
                worst = max(worst, max(abs(to_complex(p) - to_complex(q)) for p, q in zip(cp, cm)))
        else:
            worst = max(worst, float(np.max(np.abs(np.poly(plus) - np.poly(minus)))))
    return worst
