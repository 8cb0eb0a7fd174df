"""Trigonometric Gaudin operators and the second-order coefficient of the universal operator.

Conventions (all in units of ``pi*sqrt(-1)`` unless noted):

* ``r(x) = (Omega_+ x + Omega_-)/(x - 1)`` with
  ``Omega_+ = Omega_0/2 + e12 (x) e21``, ``Omega_- = Omega_0/2 + e21 (x) e12`` and
  ``Omega_0 = e11 (x) e11 + e22 (x) e22``;
* ``K_s(z, mu) = mu/2 h^(s) + sum_{t != s} r^(s,t)(z_s/z_t)``;
* ``D_2(x) / (2 pi i)^2`` on ``V[nu]`` is
  ``-(mu+nu/2)^2/4 + sum_s [(c_s + K_s)/(1-x/z_s) - c_s/(1-x/z_s)^2]``,
  ``c_s = m_s(m_s+2)/4``. :class:`PartialFractionOperator` objects built here count
  ``pi_power`` in factors of ``2*pi*sqrt(-1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pfrac import PartialFractionOperator, PoleExpansion, smul, unit_pole_terms
from .repn import (
    SHIFT,
    PoleError,
    TensorSpace,
    WeightMatrix,
    shifted_A,
    site_matrix,
    space_backend,
)
from .scalars import Backend, infer_backend, is_zero, max_abs, to_float_array


def check_poles(z) -> None:
    for i, a in enumerate(z):
        if is_zero(a):
            raise ValueError(f"pole z_{i + 1} is zero")
        for b in z[:i]:
            if a == b:
                raise ValueError(f"coincident poles ({a})")


def two_site(space: TensorSpace, g1: str, s: int, g2: str, t: int, nu=None) -> np.ndarray:
    """``g1^(s) g2^(t)`` on ``V[nu]`` (``g2`` acts first) or on the whole space."""
    right = site_matrix(space, g2, t, nu)
    mid = None if nu is None else nu + SHIFT[g2]
    if mid is not None and space.dim(mid) == 0:
        out_nu = mid + SHIFT[g1]
        return space.backend.zeros((space.dim(out_nu), space.dim(nu)))
    return site_matrix(space, g1, s, mid) @ right


def omega_parts(space: TensorSpace, s: int, t: int, nu=None):
    """``(Omega_0, e12^(s) e21^(t), e21^(s) e12^(t))`` on ``V[nu]``."""
    o0 = two_site(space, "e11", s, "e11", t, nu) + two_site(space, "e22", s, "e22", t, nu)
    return o0, two_site(space, "e12", s, "e21", t, nu), two_site(space, "e21", s, "e12", t, nu)


def r_matrix(x, space: TensorSpace, s: int, t: int, nu=None) -> np.ndarray:
    be = space.backend
    o0, a, b = omega_parts(space, s, t, nu)
    half = be.scalar(1) / be.scalar(2)
    plus = o0 * half + a
    minus = o0 * half + b
    return (plus * x + minus) * (be.scalar(1) / (x - be.scalar(1)))


def gaudin_operator(s: int, z, mu, space: TensorSpace, nu=None) -> WeightMatrix:
    """``K_s(z, mu)`` (``s`` 0-based) on ``V[nu]``; ``nu=None`` gives the whole space."""
    space = space_backend(space, list(z), mu)
    be = space.backend
    z = [be.scalar(v) for v in z]
    check_poles(z)
    if len(z) != space.n:
        raise ValueError("need one pole per tensor factor")
    if nu is not None:
        space.block(nu)
    mat = site_matrix(space, "h", s, nu) * (be.scalar(mu) / be.scalar(2))
    for t in range(space.n):
        if t != s:
            mat = mat + r_matrix(z[s] / z[t], space, s, t, nu)
    return WeightMatrix(0 if nu is None else nu, mat)


@dataclass
class GaudinFamily:
    z: tuple
    mu: object
    nu: int | None
    K: list
    space: TensorSpace = field(repr=False)

    @classmethod
    def build(cls, z, mu, space: TensorSpace, nu=None) -> GaudinFamily:
        space = space_backend(space, list(z), mu)
        be = space.backend
        z = tuple(be.scalar(v) for v in z)
        mu = be.scalar(mu)
        K = [gaudin_operator(s, z, mu, space, nu) for s in range(space.n)]
        return cls(z, mu, nu, K, space)

    def commutator_defect(self) -> float:
        worst = 0.0
        for i, a in enumerate(self.K):
            for b in self.K[i + 1 :]:
                worst = max(worst, max_abs(a.entries @ b.entries - b.entries @ a.entries))
        return worst

    def cartan_defect(self) -> float:
        """``[K_s, h]`` (only meaningful on the whole space)."""
        h = site_matrix(self.space, "h", "diagonal", self.nu)
        return max(max_abs(k.entries @ h - h @ k.entries) for k in self.K)


def casimir_shift(m: int, be: Backend):
    """``m(m+2)/4``, minus the value of ``c_2`` on ``V_m``."""
    return be.scalar(m * (m + 2)) / be.scalar(4)


def d2_partial_fractions(z, mu, space: TensorSpace, nu: int) -> PartialFractionOperator:
    """Coefficient data of ``(2 pi i)^{-2} D_2(x)`` on ``V[nu]``."""
    fam = GaudinFamily.build(z, mu, space, nu)
    be = fam.space.backend
    d = fam.space.dim(nu)
    eye = be.eye(d)
    shift = fam.mu + be.scalar(nu) / be.scalar(2)
    c0 = eye * (-(shift * shift) / be.scalar(4))
    A, B = [], []
    for m, k in zip(fam.space.ms, fam.K):
        c = casimir_shift(m, be)
        A.append(eye * c + k.entries)
        B.append(eye * (-c))
    return PartialFractionOperator(fam.z, c0, A, B, 2, fam.space.ms, nu, be)


def d2_commutator_defect(pf: PartialFractionOperator, a, b) -> float:
    da, db = pf.evaluate(a), pf.evaluate(b)
    return max_abs(da @ db - db @ da)


# -- column determinant -------------------------------------------------------


@dataclass
class CdetReport:
    d1_is_zero: bool
    d2_matches: bool
    d1_defect: float
    d2_defect: float
    worst_term: object = None

    @property
    def ok(self) -> bool:
        return self.d1_is_zero and self.d2_matches


def _unit_sum(pe: PoleExpansion, z, coeffs, scale) -> PoleExpansion:
    out = pe.monomial(("x", 0), smul(scale * 0, coeffs[0]))
    for zs, c in zip(z, coeffs):
        out = out + unit_pole_terms(pe, zs, smul(scale, c))
    return out


def cdet_cross_check(z, mu, space: TensorSpace) -> CdetReport:
    """Expand the 2x2 column determinant on the whole space and compare with ``D_2``.

    In units of ``pi*i`` the matrix entries are
    ``M11 = sum 2 e11^(s)/(1-x/z_s) - e11``, ``M22`` likewise,
    ``M12 = sum 2 e21^(s)/(1-x/z_s) - 2 e21``, ``M21 = sum 2 e12^(s)/(1-x/z_s)``,
    and ``d/du`` becomes ``-2 x d/dx`` there. Then
    ``D_1 = M11 + M22`` and ``D_2 = (-mu + M11)(mu + M22) - 2 x d/dx M22 - M21 M12``.
    """
    space = space_backend(space, list(z), mu)
    be = space.backend
    z = tuple(be.scalar(v) for v in z)
    check_poles(z)
    mu = be.scalar(mu)
    n = space.n
    pe = PoleExpansion(z, backend=be)
    two, one = be.scalar(2), be.scalar(1)

    def entry(g, const_scale):
        per_site = [site_matrix(space, g, s) for s in range(n)]
        total = site_matrix(space, g, "diagonal")
        return _unit_sum(pe, z, per_site, two) + pe.monomial(("x", 0), total * const_scale)

    m11 = entry("e11", -one)
    m22 = entry("e22", -one)
    m12 = entry("e21", -two)
    m21 = _unit_sum(pe, z, [site_matrix(space, "e12", s) for s in range(n)], two)

    dim = space.dim()
    eye = be.eye(dim)
    d1 = m11 + m22
    d2 = (m11 - pe.monomial(("x", 0), eye * mu)) * (m22 + pe.monomial(("x", 0), eye * mu))
    d2 = d2 - m22.x_dx().scale(two) - m21 * m12

    # expected: 4 * [-(mu^2 + mu h - e11 e22)/4 + sum_s (c_s + K_s)/(1-x/z_s) - c_s/(1-x/z_s)^2]
    h = site_matrix(space, "h", "diagonal")
    e11 = site_matrix(space, "e11", "diagonal")
    e22 = site_matrix(space, "e22", "diagonal")
    const = -(eye * (mu * mu) + h * mu - e11 @ e22)
    expected = pe.monomial(("x", 0), const)
    for s, m in enumerate(space.ms):
        c = casimir_shift(m, be) * be.scalar(4)
        k = gaudin_operator(s, z, mu, space).entries * be.scalar(4)
        expected = expected + unit_pole_terms(pe, z[s], eye * c + k, eye * (-c))
    diff = d2 - expected
    worst = diff.largest_term()
    return CdetReport(d1.defect() == 0.0, diff.defect() == 0.0, d1.defect(), diff.defect(), worst[0])


# -- intertwiner --------------------------------------------------------------


@dataclass
class IntertwinerReport:
    nu: int
    defects: list
    skipped: bool = False
    reason: str = ""

    @property
    def max_defect(self) -> float:
        return max(self.defects, default=0.0)


def intertwiner_check(z, mu, space: TensorSpace, nu: int) -> IntertwinerReport:
    """``A(mu+nu/2-1) K_s(z,mu) = K_s(z,-mu) A(mu+nu/2-1)`` on ``V[nu]`` for every ``s``."""
    space = space_backend(space, list(z), mu)
    be = space.backend
    mu = be.scalar(mu)
    try:
        a = shifted_A(mu, space, nu)
    except PoleError as exc:
        return IntertwinerReport(nu, [], True, str(exc))
    defects = []
    for s in range(space.n):
        left = a.entries @ gaudin_operator(s, z, mu, space, nu).entries
        right = gaudin_operator(s, z, -mu, space, -nu).entries @ a.entries
        defects.append(max_abs(left - right))
    return IntertwinerReport(nu, defects)


# -- Laurent generators -------------------------------------------------------


def f1_laurent_coeff(z, j: int, ms=None):
    """``x^{-j}`` coefficient of ``1/x - sum_s m_s/(x - z_s)``."""
    if j < 1:
        raise ValueError("first-order coefficients start at j = 1")
    be = infer_backend(list(z))
    ms = ms or (1,) * len(z)
    if j == 1:
        return be.scalar(1 - sum(ms))
    total = be.scalar(0)
    for m, zs in zip(ms, z):
        total = total - be.scalar(m) * be.scalar(zs) ** (j - 1)
    return total


def conjugation_terms(z, ms, be: Backend) -> PoleExpansion:
    """Zero-order terms produced by conjugating with ``prod (x - z_s)^{-m_s/2}`` (plus the ``1/x`` cross term).

    ``-(1/x) sum (m_s/2)/(x-z_s) + sum m_s(m_s+2)/4/(x-z_s)^2 + sum_{s!=p} m_s m_p/4/((x-z_s)(x-z_p))``.
    Poles are ``(0, z_1, ..., z_n)``.
    """
    z = tuple(be.scalar(v) for v in z)
    pe = PoleExpansion((be.scalar(0),) + z, backend=be)
    half, quarter = be.scalar(1) / be.scalar(2), be.scalar(1) / be.scalar(4)
    inv_x = pe.monomial((0, 1), be.scalar(1))
    out = pe.monomial(("x", 0), be.scalar(0))
    singles = [pe.monomial((i + 1, 1), be.scalar(1)) for i in range(len(z))]
    for i, m in enumerate(ms):
        out = out - (inv_x * singles[i]).scale(be.scalar(m) * half)
        out = out + pe.monomial((i + 1, 2), be.scalar(m * (m + 2)) * quarter)
        for p, mp in enumerate(ms):
            if p != i:
                out = out + (singles[i] * singles[p]).scale(be.scalar(m * mp) * quarter)
    return out


def f2_laurent_coeff(pf: PartialFractionOperator, j: int):
    """``x^{-j}`` coefficient of ``F_2 = conj terms + x^{-2} * pf`` at infinity (``j >= 2``)."""
    if j < 2:
        raise ValueError("second-order coefficients start at j = 2")
    be = pf.backend
    ms = pf.ms if pf.ms is not None else (1,) * len(pf.z)
    scal = conjugation_terms(pf.z, ms, be).laurent_at_infinity(j)[j]
    main = pf.laurent_coeff(j - 2)
    if isinstance(main, np.ndarray):
        return main + be.eye(main.shape[0]) * scal
    return main + scal


def f_laurent_coeffs(obj, j: int, ms=None):
    """``F_1j`` when ``obj`` is a pole list, ``F_2j`` when it is a :class:`PartialFractionOperator`."""
    if isinstance(obj, PartialFractionOperator):
        return f2_laurent_coeff(obj, j)
    return f1_laurent_coeff(obj, j, ms)


def f2_pole_expansion(pf: PartialFractionOperator) -> PoleExpansion:
    """``F_2`` itself over the poles ``(0, z_1, ..., z_n)``."""
    be = pf.backend
    ms = pf.ms if pf.ms is not None else (1,) * len(pf.z)
    conj = conjugation_terms(pf.z, ms, be)
    pe = PoleExpansion(conj.poles, backend=be)
    body = pe.monomial(("x", 0), pf.c0)
    for zs, a, b in zip(pf.z, pf.A, pf.B):
        body = body + unit_pole_terms(pe, zs, a, b)
    body = body * pe.monomial((0, 2), be.scalar(1))
    if isinstance(pf.c0, np.ndarray):
        eye = be.eye(pf.c0.shape[0])
        conj = conj.map_coeffs(lambda c: eye * c)
    return conj + body


def joint_eigenvalues(mats, seed: int = 0) -> np.ndarray:
    """Joint eigenvalues of commuting diagonalizable matrices (one row per eigenvector)."""
    mats = [np.asarray(to_float_array(mt), dtype=complex) for mt in mats]
    rng = np.random.default_rng(seed)
    combo = sum(mt * (rng.normal() + 1j * rng.normal()) for mt in mats)
    _, vecs = np.linalg.eig(combo)
    left = np.linalg.inv(vecs)
    return np.array([[left[k] @ mt @ vecs[:, k] for mt in mats] for k in range(vecs.shape[1])])
