"""Pairs of quasi-polynomials, their Wronskians, duality of Bethe roots and Wronski fibers.

A pair in ``Omega(zeta, m, l)`` is ``p = x^{-zeta} P``, ``q = x^{zeta} Q`` with monic
``P`` of degree ``m`` and ``Q`` of degree ``l``. Exponents are never evaluated:
with ``theta = x d/dx`` one has ``theta(x^a F) = x^a (theta + a) F``, so every
operator applied to a quasi-polynomial reduces to polynomial arithmetic.

Writing ``Wr(p, q) = R/x`` gives ``R = 2 zeta P Q + x (P Q' - P' Q)`` with leading
coefficient ``2 zeta + l - m``; the Wronski image is
``R / lead = x^n + sum_s (-1)^s Sigma_s x^{n-s}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import polys
from .bethe import (
    BAEOptions,
    BAEResult,
    BAESolution,
    bae_residual,
    conjugated_operator,
    solve_bae,
    weight_function,
)
from .gaudin import d2_partial_fractions, f2_laurent_coeff, joint_eigenvalues
from .pfrac import PoleExpansion, from_rational
from .repn import TensorSpace, shifted_A
from .scalars import (
    FLOAT,
    Backend,
    SingularSystemError,
    infer_backend,
    is_zero,
    max_abs,
    solve_consistent,
    to_complex,
)


def is_half_integer(v) -> bool:
    c = to_complex(v) * 2
    return abs(c.imag) < 1e-12 and abs(c.real - round(c.real)) < 1e-12


@dataclass
class QuasiPolyPair:
    zeta: object
    m: int
    l: int
    p_coeffs: tuple
    q_coeffs: tuple
    backend: Backend = field(default=None, repr=False)

    def __post_init__(self):
        self.p_coeffs = tuple(self.p_coeffs)
        self.q_coeffs = tuple(self.q_coeffs)
        if len(self.p_coeffs) != self.m or len(self.q_coeffs) != self.l:
            raise ValueError("coefficient count must match the degrees")
        if is_half_integer(self.zeta):
            raise ValueError("zeta must avoid (1/2)Z")
        if self.backend is None:
            self.backend = infer_backend(self.zeta, list(self.p_coeffs), list(self.q_coeffs))
        be = self.backend
        self.zeta = be.scalar(self.zeta)
        self.p_coeffs = tuple(be.scalar(v) for v in self.p_coeffs)
        self.q_coeffs = tuple(be.scalar(v) for v in self.q_coeffs)

    @property
    def n(self) -> int:
        return self.m + self.l

    def P(self) -> np.ndarray:
        return polys.monic_from_tail(self.p_coeffs, self.backend)

    def Q(self) -> np.ndarray:
        return polys.monic_from_tail(self.q_coeffs, self.backend)

    def scaled(self, c) -> QuasiPolyPair:
        """``p_i -> c^i p_i``, ``q_j -> c^j q_j``."""
        be = self.backend
        c = be.scalar(c)
        p = [v * c ** (i + 1) for i, v in enumerate(self.p_coeffs)]
        q = [v * c ** (j + 1) for j, v in enumerate(self.q_coeffs)]
        return QuasiPolyPair(self.zeta, self.m, self.l, p, q, be)


@dataclass
class WronskiImage:
    sigma: tuple
    lead: object

    def monic(self, backend: Backend) -> np.ndarray:
        return sigma_to_poly(self.sigma, backend)


def theta_shift(F, a, be: Backend) -> np.ndarray:
    """``(theta + a) F = x F' + a F`` for a polynomial ``F``."""
    F = np.asarray(F)
    xd = polys.shift_x(polys.der(F), 1) if len(F) > 1 else F * 0
    return polys.add(xd, F * be.scalar(a))


def wronskian_numerator(pair: QuasiPolyPair) -> np.ndarray:
    """``R = x Wr(p, q) = 2 zeta P Q + x (P Q' - P' Q)``."""
    be = pair.backend
    P, Q = pair.P(), pair.Q()
    two_zeta = pair.zeta * be.scalar(2)
    cross = polys.sub(polys.mul(P, polys.der(Q)), polys.mul(polys.der(P), Q))
    R = polys.add(polys.mul(P, Q) * two_zeta, polys.shift_x(cross, 1))
    return _resize(R, pair.n + 1, be)


def _resize(c, size: int, be: Backend) -> np.ndarray:
    c = np.asarray(c)
    out = be.zeros(size)
    k = min(size, len(c))
    out[:k] = c[:k]
    return out


def wronskian_pair(pair: QuasiPolyPair) -> WronskiImage:
    be = pair.backend
    R = wronskian_numerator(pair)
    lead = pair.zeta * be.scalar(2) + be.scalar(pair.l - pair.m)
    if is_zero(lead):
        raise SingularSystemError("2 zeta + l - m vanishes")
    monic = R * (be.scalar(1) / lead)
    n = pair.n
    sigma = tuple(monic[n - s] * be.scalar((-1) ** s) for s in range(1, n + 1))
    return WronskiImage(sigma, lead)


def sigma_to_poly(a, backend: Backend) -> np.ndarray:
    """``x^n + sum_s (-1)^s a_s x^{n-s}`` (ascending coefficients)."""
    return polys.monic_from_tail([backend.scalar((-1) ** s) * backend.scalar(v) for s, v in enumerate(a, start=1)], backend)


def transpose_pair(pair: QuasiPolyPair) -> QuasiPolyPair:
    """``(p, q) -> (q, p)`` as a point of ``Omega(-zeta, l, m)``."""
    return QuasiPolyPair(-pair.zeta, pair.l, pair.m, pair.q_coeffs, pair.p_coeffs, pair.backend)


# -- the dual polynomial ------------------------------------------------------


@dataclass
class DualResult:
    ytilde: np.ndarray
    const: object
    residual: float


def dual_polynomial(y, z, mu, nu: int, ms) -> DualResult:
    """Monic ``yt`` of degree ``M - m`` with ``a y yt + x (y yt' - y' yt) = (mu + nu/2) prod (x - z_s)^{m_s}``, ``a = mu - nu/2``.

    That is ``Wr(y, x^a yt) = const x^{a-1} prod (x - z_s)^{m_s}``. The coefficient
    system is overdetermined but consistent when the roots of ``y`` solve the Bethe
    equations; a rank-deficient system means ``yt`` is not unique.
    """
    be = infer_backend(np.asarray(y, dtype=object), list(z), mu)
    y = polys.trim(be.convert(np.asarray(y, dtype=object)))
    m = len(y) - 1
    M = sum(ms)
    d = M - m
    if d < 0:
        raise ValueError("degree of y exceeds M")
    mu = be.scalar(mu)
    half_nu = be.scalar(nu) / be.scalar(2)
    a = mu - half_nu
    if not is_zero(y[-1] - be.scalar(1)):
        raise ValueError("y must be monic")
    if d > 0 and nu != M - 2 * m:
        raise ValueError(f"nu must equal M - 2 deg y = {M - 2 * m}")
    const = mu + half_nu
    target = polys.from_roots([zs for zs, k in zip(z, ms) for _ in range(k)], be) * const

    def L(f):
        cross = polys.sub(polys.mul(y, polys.der(f)), polys.mul(polys.der(y), f))
        return _resize(polys.add(polys.mul(y, f) * a, polys.shift_x(cross, 1)), M + 1, be)

    top = be.zeros(d + 1)
    top[d] = be.scalar(1)
    rhs = target - L(top)
    cols = []
    for k in range(d):
        e = be.zeros(k + 1)
        e[k] = be.scalar(1)
        cols.append(L(e))
    if d == 0:
        res = max_abs(rhs)
        if be.exact and res:
            raise SingularSystemError("y admits no dual polynomial")
        return DualResult(top, const, res)
    A = np.array(cols, dtype=be.dtype).T
    coeffs, res = solve_consistent(A, rhs)
    yt = be.zeros(d + 1)
    yt[:d] = coeffs
    yt[d] = be.scalar(1)
    if not be.exact:
        res = max_abs(L(yt) - target)
    return DualResult(yt, const, res)


def dual_solution(sol: BAESolution) -> tuple[BAESolution, DualResult]:
    """Roots of the dual polynomial, as a solution at ``(-mu, -nu)``."""
    dual = dual_polynomial(sol.y(), sol.z, sol.mu, sol.nu, sol.ms)
    if sol.backend.exact and len(dual.ytilde) <= 2:
        roots = [-dual.ytilde[0]] if len(dual.ytilde) == 2 else []
    else:
        roots = list(polys.roots(dual.ytilde))
    be = sol.backend if sol.backend.exact and len(dual.ytilde) <= 2 else FLOAT
    mu = be.scalar(sol.mu)
    res = max_abs(bae_residual(roots, sol.z, -mu, -sol.nu, sol.ms)) if roots else 0.0
    return BAESolution(tuple(roots), tuple(be.scalar(v) for v in sol.z), -mu, -sol.nu, sol.ms, res), dual


# -- kernel operator ------------------------------------------------------------


@dataclass
class KernelOperator:
    """``G = d^2 + G_1 d + G_2`` with ``G_1 = (R - x R')/(x R)`` and ``G_2 = S/(x^2 R)``."""

    R: np.ndarray
    S: np.ndarray
    backend: Backend

    def g1(self):
        be = self.backend
        num = polys.sub(self.R, polys.shift_x(polys.der(self.R), 1))
        return num, polys.shift_x(self.R, 1)

    def g2(self):
        return self.S, polys.shift_x(self.R, 2)

    def laurent(self, i: int, order: int) -> np.ndarray:
        num, den = self.g1() if i == 1 else self.g2()
        return polys.laurent_at_infinity(num, den, order)

    def pole_form(self, i: int, poles=None) -> PoleExpansion:
        """``G_i`` over the poles ``0`` and the roots of ``R``."""
        num, den = self.g1() if i == 1 else self.g2()
        R = polys.trim(self.R)
        roots = list(poles) if poles is not None else list(polys.roots(R))
        be = FLOAT if not self.backend.exact or poles is None else self.backend
        order0 = 1 if i == 1 else 2
        return from_rational(num, R[-1], [(be.scalar(0), order0)] + [(r, 1) for r in roots], be)

    def annihilation_defect(self, pair: QuasiPolyPair) -> tuple[float, float]:
        """Max coefficient of ``x^2 R x^{+-zeta} G`` applied to ``p`` and ``q`` (exact zeros when exact)."""
        be = self.backend
        R = self.R
        xR1 = polys.shift_x(polys.der(R), 1)
        out = []
        for F, e in ((pair.P(), -pair.zeta), (pair.Q(), pair.zeta)):
            t1 = theta_shift(F, e, be)
            t2 = theta_shift(t1, e, be)
            expr = polys.add(polys.mul(R, polys.sub(t2, t1)), polys.mul(polys.sub(R, xR1), t1))
            expr = polys.add(expr, polys.mul(self.S, F))
            out.append(max_abs(expr))
        return out[0], out[1]


def kernel_operator(pair: QuasiPolyPair) -> KernelOperator:
    """The monic second-order operator whose kernel is spanned by ``p`` and ``q``.

    ``S = x^3 (p' q'' - p'' q')`` equals
    ``(theta - zeta)P (theta + zeta)^2 Q - (theta - zeta)^2 P (theta + zeta)Q``.
    """
    be = pair.backend
    R = wronskian_numerator(pair)
    if max_abs(R) == 0.0:
        raise SingularSystemError("the quasi-polynomials are proportional")
    P, Q = pair.P(), pair.Q()
    p1 = theta_shift(P, -pair.zeta, be)
    p2 = theta_shift(p1, -pair.zeta, be)
    q1 = theta_shift(Q, pair.zeta, be)
    q2 = theta_shift(q1, pair.zeta, be)
    S = polys.sub(polys.mul(p1, q2), polys.mul(p2, q1))
    return KernelOperator(R, _resize(S, pair.n + 1, be), be)


def g_laurent_coeffs(pair: QuasiPolyPair, i: int, j: int):
    """``x^{-j}`` coefficient of ``G_i`` at infinity (``j >= i``)."""
    if i not in (1, 2):
        raise ValueError("i must be 1 or 2")
    if j < i:
        raise ValueError("need j >= i")
    return kernel_operator(pair).laurent(i, j)[j]


# -- fibers of the Wronski map ---------------------------------------------------


@dataclass
class FiberPoint:
    pair: QuasiPolyPair
    solution: BAESolution
    dual: BAESolution
    sigma_residual: float
    dual_residual: float


@dataclass
class FiberResult:
    a: tuple
    zeta: object
    m: int
    l: int
    b: tuple
    points: list
    expected: int
    generic: bool = True
    notes: list = field(default_factory=list)
    bae: BAEResult | None = field(default=None, repr=False)

    @property
    def count(self) -> int:
        return len(self.points)

    @property
    def complete(self) -> bool:
        return self.count == self.expected

    @property
    def mu(self):
        return 2 * to_complex(self.zeta) + (self.l - self.m) / 2

    @property
    def nu(self) -> int:
        return self.l - self.m

    def to_record(self) -> dict:
        from .serialize import encode

        return {
            "a": encode(list(self.a)),
            "zeta": encode(self.zeta),
            "m": self.m,
            "l": self.l,
            "pairs": [{"p": encode(list(pt.pair.p_coeffs)), "q": encode(list(pt.pair.q_coeffs))} for pt in self.points],
            "sigma_residuals": [pt.sigma_residual for pt in self.points],
            "count": self.count,
            "expected": self.expected,
            "generic": self.generic,
            "notes": list(self.notes),
        }


class NonGenericError(ValueError):
    """The Wronskian polynomial has a repeated or zero root."""


def fiber_roots(a, sep: float = 1e-6) -> np.ndarray:
    """Roots ``b`` of the Wronskian polynomial, refusing repeated or zero roots.

    Exact coefficients are tested exactly (``gcd(f, f') = 1``); floating ones by
    relative root separation, since a double root splits by about ``sqrt(eps)``.
    """
    be = infer_backend(list(a))
    if be.exact:
        f = sigma_to_poly(a, be)
        if is_zero(f[0]):
            raise NonGenericError("a root of the Wronskian polynomial is zero")
        if not polys.is_squarefree(f):
            raise NonGenericError("the Wronskian polynomial has a repeated root")
    poly = sigma_to_poly([to_complex(v) for v in a], FLOAT)
    b = polys.roots(poly)
    scale = max(1.0, float(np.max(np.abs(b)))) if len(b) else 1.0
    if np.any(np.abs(b) < sep * scale):
        raise NonGenericError("a root of the Wronskian polynomial is zero")
    d = np.abs(b[:, None] - b[None, :]) + np.eye(len(b)) * scale
    if np.any(d < sep * scale):
        raise NonGenericError("the Wronskian polynomial has a repeated root")
    return np.array(sorted(b, key=lambda v: (round(v.real, 12), round(v.imag, 12))))


def wronski_fiber(a, zeta, m: int, l: int, opts: BAEOptions | None = None) -> FiberResult:
    """All pairs in ``Omega(zeta, m, l)`` with Wronski image ``a``, via Bethe roots at ``z = b``."""
    if is_half_integer(zeta):
        raise ValueError("zeta must avoid (1/2)Z")
    n = m + l
    if len(a) != n:
        raise ValueError(f"need {n} Wronskian coefficients")
    b = fiber_roots(a)
    zeta_c = to_complex(zeta)
    nu = l - m
    mu = 2 * zeta_c + nu / 2
    ms = (1,) * n
    bae = solve_bae(list(b), mu, nu, ms, opts)
    points = []
    for sol in bae:
        dsol, dual = dual_solution(sol)
        P = sol.y()
        pair = QuasiPolyPair(zeta_c, m, l, polys.tail_of_monic(P), polys.tail_of_monic(dual.ytilde), FLOAT)
        img = wronskian_pair(pair)
        res = max(abs(complex(s) - to_complex(v)) for s, v in zip(img.sigma, a))
        points.append(FiberPoint(pair, sol, dsol, res, dual.residual))
    out = FiberResult(tuple(a), zeta, m, l, tuple(b), points, TensorSpace(ms).dim(nu), True, list(bae.notes), bae)
    if not out.complete:
        out.notes.append(f"incomplete fiber: {out.count} of {out.expected}")
    return out


# -- fiber checks -----------------------------------------------------------------


def match_multisets(rows_a: np.ndarray, rows_b: np.ndarray) -> float:
    """Smallest max relative elementwise difference over bijections between the rows."""
    rows_a, rows_b = np.atleast_2d(rows_a), np.atleast_2d(rows_b)
    if rows_a.shape != rows_b.shape:
        return float("inf")
    scale = np.maximum(1.0, np.maximum(np.abs(rows_a)[:, None, :], np.abs(rows_b)[None, :, :]))
    cost = np.max(np.abs(rows_a[:, None, :] - rows_b[None, :, :]) / scale, axis=2)
    r, c = linear_sum_assignment(cost)
    return float(np.max(cost[r, c])) if len(r) else 0.0


def dictionary_defect(fiber: FiberResult, J: int | None = None) -> float:
    """Compare ``(G_2j(U))_{2<=j<=J}`` over the fiber with joint eigenvalues of ``F_2j`` on ``V[nu]`` at ``z = b``."""
    n = fiber.m + fiber.l
    J = J if J is not None else n + 2
    pf = d2_partial_fractions(list(fiber.b), fiber.mu, TensorSpace((1,) * n, FLOAT), fiber.nu)
    mats = [f2_laurent_coeff(pf, j) for j in range(2, J + 1)]
    eig = joint_eigenvalues(mats)
    g = np.array([[complex(v) for v in kernel_operator(pt.pair).laurent(2, J)[2:]] for pt in fiber.points])
    return match_multisets(g, eig)


def kernel_dictionary_defect(pt: FiberPoint) -> float:
    """``G_U`` against the conjugated fundamental operator over the pole basis ``(0, b)``."""
    from .bethe import fundamental_operator

    sol = pt.solution
    conj = conjugated_operator(fundamental_operator(sol))
    kern = kernel_operator(pt.pair)
    poles = conj.F2.poles[1:]
    worst = 0.0
    for i, F in ((1, conj.F1), (2, conj.F2)):
        G = kern.pole_form(i, poles)
        diff = PoleExpansion(F.poles, {k: complex(v) for k, v in F.terms.items()}, FLOAT)
        diff = diff - PoleExpansion(F.poles, G.terms, FLOAT)
        worst = max(worst, diff.defect() / max(1.0, F.defect()))
    return worst


def collinearity_defect(u, v) -> float:
    """Sine of the angle between two complex vectors."""
    u = np.asarray([to_complex(x) for x in u])
    v = np.asarray([to_complex(x) for x in v])
    nu_, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu_ == 0 or nv == 0:
        return 1.0
    u, v = u / nu_, v / nv
    # projection residual; sqrt(1 - cos^2) would floor at sqrt(eps)
    return float(np.linalg.norm(v - np.vdot(u, v) * u))


def weyl_diagram_defect(pt: FiberPoint) -> float:
    """``A(mu + nu/2 - 1) omega(t0)`` against ``omega(t~0)`` in ``V[-nu]``."""
    sol = pt.solution
    space = TensorSpace(sol.ms, FLOAT)
    A = shifted_A(to_complex(sol.mu), space, sol.nu).entries
    w = np.asarray([to_complex(v) for v in weight_function(sol.t, sol.z, sol.ms, FLOAT)])
    wt = weight_function(pt.dual.t, pt.dual.z, pt.dual.ms, FLOAT)
    return collinearity_defect(A @ w, wt)


def graded_character(m: int, l: int, maxdeg: int) -> list:
    """Coefficients of ``prod_{i<=m} 1/(1-a^i) prod_{j<=l} 1/(1-a^j)`` up to ``a^maxdeg``."""
    if maxdeg < 0:
        raise ValueError("maxdeg must be nonnegative")
    coeffs = [1] + [0] * maxdeg
    for k in list(range(1, m + 1)) + list(range(1, l + 1)):
        for d in range(k, maxdeg + 1):
            coeffs[d] += coeffs[d - k]
    return coeffs
