"""Bethe ansatz equations, Bethe vectors and the scalar fundamental operator.

For highest weights ``m_s`` at poles ``z_s`` and ``m`` roots ``t_i`` the equations read

    (1 - mu + nu/2)/t_i + sum_{j != i} 2/(t_i - t_j) - sum_s m_s/(t_i - z_s) = 0,

with ``nu = M - 2m``. Solutions are found by damped Newton iteration from many
starting configurations; the expected number of orbits is ``dim V[nu]``.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import factorial

import numpy as np
from numpy.polynomial import polynomial as P

from . import polys
from .gaudin import casimir_shift, check_poles, conjugation_terms, gaudin_operator, joint_eigenvalues
from .pfrac import PartialFractionOperator, PoleExpansion
from .repn import TensorSpace
from .scalars import EXACT, FLOAT, Backend, SingularSystemError, infer_backend, is_zero, max_abs, to_complex


@dataclass(frozen=True)
class BAEOptions:
    starts: int = 24  # per round; rounds continue until the expected count is reached
    rounds: int = 4
    spectral: bool = True  # seed from the Gaudin spectrum when multi-start comes up short
    tol: float = 1e-12
    accept_tol: float = 1e-11
    verify_tol: float = 1e-8
    max_iter: int = 80
    separation: float = 1e-6  # relative to the scale of z
    seed: int = 0
    threads: int | None = None

    def n_threads(self) -> int:
        if self.threads is not None:
            return max(1, self.threads)
        return max(1, int(os.environ.get("GAUDIN_LAB_THREADS", "1")))


def n_roots(ms, nu: int) -> int:
    M = sum(ms)
    if (M - nu) % 2 or not 0 <= (M - nu) // 2 <= M:
        raise ValueError(f"weight {nu} is not of the form M - 2m for ms={tuple(ms)}")
    return (M - nu) // 2


def compositions(ms, m: int) -> list:
    """``{l : 0 <= l_s <= m_s, sum l = m}`` in lexicographic order."""
    return [c for c in itertools.product(*(range(k + 1) for k in ms)) if sum(c) == m]


def assumption_violated(mu, nu: int) -> bool:
    """``mu`` in ``nu/2 + Z_{>=0}``."""
    d = to_complex(mu) - nu / 2
    return abs(d.imag) < 1e-12 and abs(d.real - round(d.real)) < 1e-12 and round(d.real) >= 0


def bae_residual(t, z, mu, nu: int, ms) -> np.ndarray:
    be = infer_backend(list(t), list(z), mu)
    t = [be.scalar(v) for v in t]
    z = [be.scalar(v) for v in z]
    c = be.scalar(1) - be.scalar(mu) + be.scalar(nu) / be.scalar(2)
    out = be.zeros(len(t))
    for i, ti in enumerate(t):
        if is_zero(ti):
            raise SingularSystemError(f"root t_{i + 1} is zero")
        acc = c / ti
        for j, tj in enumerate(t):
            if j != i:
                if is_zero(ti - tj):
                    raise SingularSystemError("coincident Bethe roots")
                acc = acc + be.scalar(2) / (ti - tj)
        for m, zs in zip(ms, z):
            if is_zero(ti - zs):
                raise SingularSystemError("Bethe root coincides with a pole")
            acc = acc - be.scalar(m) / (ti - zs)
        out[i] = acc
    return out


def _residual_and_jacobian(t: np.ndarray, z: np.ndarray, c: complex, ms: np.ndarray):
    dt = t[:, None] - t[None, :]
    np.fill_diagonal(dt, 1.0)
    inv = 1.0 / dt
    np.fill_diagonal(inv, 0.0)
    dz = 1.0 / (t[:, None] - z[None, :])
    F = c / t + 2 * inv.sum(axis=1) - (ms[None, :] * dz).sum(axis=1)
    J = 2 * inv**2
    diag = -c / t**2 - 2 * (inv**2).sum(axis=1) + (ms[None, :] * dz**2).sum(axis=1)
    J[np.diag_indices_from(J)] = diag
    return F, J


def newton(t0, z, mu, nu, ms, opts: BAEOptions):
    """Damped Newton on the root equations from ``t0``; returns ``(t, residual)`` or ``None``.

    Iteration stops once ``max |t_i F_i| < tol`` or when no step decreases it. The
    point is accepted when the plain residual is below ``accept_tol`` and the scaled
    one below ``sqrt(accept_tol)``: roots escaping to infinity make the plain
    residual small but keep ``t_i F_i`` of order one.
    """
    z = np.asarray(z, dtype=complex)
    msa = np.asarray(ms, dtype=float)
    c = 1 - complex(mu) + nu / 2
    t = np.asarray(t0, dtype=complex).copy()

    def scaled(F, t):
        return np.max(np.abs(t * F))

    with np.errstate(all="ignore"):
        F, J = _residual_and_jacobian(t, z, c, msa)
        r = scaled(F, t)
        for _ in range(opts.max_iter):
            if not np.isfinite(r):
                return None
            if r < opts.tol:
                break
            try:
                step = np.linalg.solve(J, -F)
            except np.linalg.LinAlgError:
                break
            lam = 1.0
            while lam > 1e-4:
                cand = t + lam * step
                F2, J2 = _residual_and_jacobian(cand, z, c, msa)
                r2 = scaled(F2, cand)
                if np.isfinite(r2) and r2 < r:
                    break
                lam /= 2
            else:
                break
            t, F, J, r = cand, F2, J2, r2
        plain = float(np.max(np.abs(F)))
    if not (np.isfinite(r) and plain < opts.accept_tol and r < np.sqrt(opts.accept_tol)):
        return None
    return t, plain


class _CoefficientSystem:
    """The root equations rewritten for the coefficients of ``y = prod (x - t_i)``.

    With ``Z = prod (x - z_s)^{m_s}`` they say that
    ``L(y) = x Z y'' + (c Z - x Z sum_s m_s/(x - z_s)) y'`` is divisible by ``y``.
    The remainder is a polynomial map without the collision singularities of the
    root form, and its Newton basins are much larger.
    """

    def __init__(self, z, mu, nu, ms, m):
        c = 1 - complex(mu) + nu / 2
        zr = np.repeat(np.asarray(z, dtype=complex), ms)
        Z = P.polyfromroots(zr) if len(zr) else np.ones(1, complex)
        Q = c * Z
        for zs, k in zip(z, ms):
            if k:
                Q = P.polysub(Q, k * P.polymulx(P.polydiv(Z, [-zs, 1.0])[0]))
        self.xZ = P.polymulx(Z)
        self.Q = Q
        self.m = m
        self.scale = float(np.max(np.abs(z)))

    def L(self, y):
        return P.polyadd(P.polymul(self.xZ, P.polyder(y, 2)), P.polymul(self.Q, P.polyder(y)))

    def _pad(self, r):
        out = np.zeros(self.m, complex)
        r = np.asarray(r, complex)[: self.m]
        out[: len(r)] = r
        return out

    def residual_and_jacobian(self, a):
        y = np.concatenate([a, [1.0]])
        q, r = P.polydiv(self.L(y), y)
        J = np.empty((self.m, self.m), complex)
        for k in range(self.m):
            e = np.zeros(k + 1, complex)
            e[k] = 1.0
            # d(remainder) = L(e) - q e  (mod y)
            J[:, k] = self._pad(P.polydiv(P.polysub(self.L(e), P.polymul(q, e)), y)[1])
        return self._pad(r), J

    def solve(self, t0, max_iter: int):
        a = P.polyfromroots(np.asarray(t0, complex))[:-1].astype(complex)
        w = self.scale ** np.arange(self.m, 0, -1)
        with np.errstate(all="ignore"):
            for _ in range(max_iter):
                r, J = self.residual_and_jacobian(a)
                try:
                    step = np.linalg.solve(J, -r)
                except np.linalg.LinAlgError:
                    return None
                if not np.all(np.isfinite(step)):
                    return None
                a = a + step
                if np.max(np.abs(step) / w) < 1e-13:
                    return np.roots(np.concatenate([a, [1.0]])[::-1])
        return None


def canonical(t) -> tuple:
    return tuple(sorted((complex(v) for v in t), key=lambda v: (round(v.real, 9), round(v.imag, 9))))


@dataclass
class BAESolution:
    t: tuple
    z: tuple
    mu: object
    nu: int
    ms: tuple
    residual: float

    def __post_init__(self):
        self.t = tuple(self.t)
        self.z = tuple(self.z)
        self.ms = tuple(self.ms)

    @classmethod
    def from_roots(cls, t, z, mu, ms) -> BAESolution:
        """Wrap given roots (exact or float) and record their residual."""
        nu = sum(ms) - 2 * len(t)
        be = infer_backend(list(t), list(z), mu)
        t = tuple(be.scalar(v) for v in t)
        z = tuple(be.scalar(v) for v in z)
        res = max_abs(bae_residual(t, z, mu, nu, ms)) if t else 0.0
        return cls(t, z, be.scalar(mu), nu, tuple(ms), res)

    @property
    def m(self) -> int:
        return len(self.t)

    @property
    def backend(self) -> Backend:
        return infer_backend(list(self.t), list(self.z), self.mu)

    @property
    def canonical(self) -> tuple:
        return canonical(self.t)

    def y(self) -> np.ndarray:
        """Monic polynomial with roots ``t`` (ascending coefficients)."""
        return polys.from_roots(self.t, self.backend)

    def space(self) -> TensorSpace:
        return TensorSpace(self.ms, self.backend)

    def to_record(self) -> dict:
        from .serialize import encode

        return {
            "ms": list(self.ms),
            "nu": self.nu,
            "mu": encode(self.mu),
            "z": [encode(v) for v in self.z],
            "roots": [encode(v) for v in self.canonical] if not self.backend.exact else [encode(v) for v in self.t],
            "residual": self.residual,
            "eigenvalues": [encode(v) for v in bethe_eigenvalues(self)],
        }


@dataclass
class BAEResult:
    """Deduplicated solutions of one BAE instance, in canonical order."""

    solutions: list
    expected_count: int
    assumption_violated: bool = False
    starts_used: int = 0
    rejected: int = 0
    spectral: int = 0  # solutions found only from spectral seeds
    notes: list = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return len(self.solutions) == self.expected_count

    def __iter__(self):
        return iter(self.solutions)

    def __len__(self) -> int:
        return len(self.solutions)

    def __getitem__(self, i):
        return self.solutions[i]


def _starts(z, ms, m, count, rng) -> list:
    """Perturbed cluster starts near the poles (one family per composition) plus random draws."""
    z = np.asarray(z, dtype=complex)
    scale = float(np.max(np.abs(z)))
    out = []
    comps = compositions(ms, m)
    per = max(1, count // (2 * max(len(comps), 1)))
    for comp in comps:
        for _ in range(per):
            t = []
            for zs, k in zip(z, comp):
                for _ in range(k):
                    eps = (rng.normal() + 1j * rng.normal()) * 0.3 * abs(zs)
                    t.append(zs + eps)
            out.append(np.array(t))
    k = 0
    while len(out) < count:
        # alternate uniform draws in the disk of radius 2 max|z| with log-uniform
        # radii, since roots can sit far outside the disk
        if k % 2 == 0:
            r = 2 * scale * np.sqrt(rng.uniform(size=m))
        else:
            r = scale * 10 ** rng.uniform(-2, 2, size=m)
        th = rng.uniform(0, 2 * np.pi, size=m)
        out.append(r * np.exp(1j * th))
        k += 1
    return out


def _is_admissible(t, z, scale, sep) -> bool:
    if np.any(np.abs(t) < sep * scale) or np.any(np.abs(t) > scale / sep):
        return False
    if np.any(np.abs(t[:, None] - np.asarray(z)[None, :]) < sep * scale):
        return False
    d = np.abs(t[:, None] - t[None, :]) + np.eye(len(t)) * scale
    return bool(np.all(d > sep * scale))


def _same_orbit(a, b, scale, tol) -> bool:
    # compare elementary symmetric functions, normalized by the root scale
    pa = np.poly(np.asarray(a))
    pb = np.poly(np.asarray(b))
    w = scale ** np.arange(len(pa))
    return bool(np.max(np.abs(pa - pb) / w) < tol)


def _two_stage(system: _CoefficientSystem, start, z, mu, nu, ms, opts: BAEOptions):
    """Coefficient-space Newton, then a polish of the roots with the analytic Jacobian."""
    t = system.solve(start, opts.max_iter)
    if t is None:
        return None
    return newton(t, z, mu, nu, ms, opts)


def solve_bae(z, mu, nu: int, ms, opts: BAEOptions | None = None) -> BAEResult:
    """All Bethe root orbits for ``V[nu]`` of ``V_{m_1} x ... x V_{m_n}`` (float backend)."""
    opts = opts or BAEOptions()
    ms = tuple(int(v) for v in ms)
    if len(ms) != len(z):
        raise ValueError("need one pole per highest weight")
    m = n_roots(ms, nu)
    zc = tuple(to_complex(v) for v in z)
    check_poles(zc)
    muc = to_complex(mu)
    space = TensorSpace(ms)
    expected = space.dim(nu)
    result = BAEResult([], expected, assumption_violated(muc, nu))
    if result.assumption_violated:
        result.notes.append("assumption-violated: mu in nu/2 + Z>=0")
    if m == 0:
        result.solutions.append(BAESolution((), zc, muc, nu, ms, 0.0))
        return result
    scale = max(abs(v) for v in zc)
    system = _CoefficientSystem(zc, muc, nu, np.asarray(ms), m)
    rng = np.random.default_rng(opts.seed)
    found: list = []
    pool = ThreadPoolExecutor(opts.n_threads()) if opts.n_threads() > 1 else None
    try:
        for _ in range(opts.rounds):
            batch = _starts(zc, ms, m, opts.starts, rng)
            runner = pool.map if pool else map
            outcomes = list(runner(lambda s: _two_stage(system, s, zc, muc, nu, ms, opts), batch))
            result.starts_used += len(batch)
            for out in outcomes:
                if out is None:
                    continue
                t, r = out
                if not _is_admissible(t, zc, scale, opts.separation):
                    result.rejected += 1
                    continue
                if any(_same_orbit(t, f[0], scale, 1e-6) for f in found):
                    continue
                found.append((canonical(t), r))
            if len(found) >= expected:
                break
    finally:
        if pool:
            pool.shutdown()
    if len(found) < expected and opts.spectral:
        for guess in spectral_starts(zc, muc, nu, ms):
            # the guesses are already accurate; polish the roots directly
            out = newton(guess, zc, muc, nu, ms, opts) or _two_stage(system, guess, zc, muc, nu, ms, opts)
            if out is None:
                continue
            t, r = out
            if not _is_admissible(t, zc, scale, opts.separation):
                result.rejected += 1
                continue
            if any(_same_orbit(t, f[0], scale, 1e-6) for f in found):
                continue
            found.append((canonical(t), r))
            result.spectral += 1
    found.sort(key=lambda f: [(round(v.real, 9), round(v.imag, 9)) for v in f[0]])
    result.solutions = [BAESolution(t, zc, muc, nu, ms, r) for t, r in found]
    if len(found) != expected:
        result.notes.append(f"found {len(found)} of {expected} solutions")
    return result


# -- Bethe vectors ------------------------------------------------------------


def _assignments(sites_left: list, roots: tuple):
    """Ways to distribute ``roots`` among sites with the prescribed multiplicities."""
    if not sites_left:
        yield ()
        return
    (s, k), rest = sites_left[0], sites_left[1:]
    for chosen in itertools.combinations(roots, k):
        remaining = tuple(r for r in roots if r not in chosen)
        for tail in _assignments(rest, remaining):
            yield ((s, chosen),) + tail


def weight_function(t, z, ms, backend=None) -> np.ndarray:
    """Coordinates of ``omega(t, z)`` in the weight-block basis of ``V[M - 2m]``.

    ``omega_l = Sym prod_s prod_{i in block s} 1/(t_i - z_s)``; the symmetrization
    over ``S_m`` equals ``prod l_s!`` times the sum over set partitions of the roots.
    """
    be = backend or infer_backend(list(t), list(z))
    t = tuple(be.scalar(v) for v in t)
    z = tuple(be.scalar(v) for v in z)
    ms = tuple(ms)
    m = len(t)
    nu = sum(ms) - 2 * m
    space = TensorSpace(ms, be)
    vec = be.zeros(space.dim(nu))
    idx = tuple(range(m))
    for comp in compositions(ms, m):
        sites = [(s, k) for s, k in enumerate(comp) if k]
        total = be.scalar(0)
        for assign in _assignments(sites, idx):
            term = be.scalar(1)
            for s, chosen in assign:
                for i in chosen:
                    d = t[i] - z[s]
                    if is_zero(d):
                        raise SingularSystemError("Bethe root coincides with a pole")
                    term = term / d
            total = total + term
        mult = 1
        for k in comp:
            mult *= factorial(k)
        vec[space.position(nu, comp)] = total * be.scalar(mult)
    return vec


def bethe_eigenvalues(sol: BAESolution) -> list:
    """``k_s = (m_s/2)[(mu - nu/2 + m_s/2) + sum_p m_p z_s/(z_s - z_p) + 2 sum_i z_s/(t_i - z_s)]``."""
    be = sol.backend
    z = [be.scalar(v) for v in sol.z]
    t = [be.scalar(v) for v in sol.t]
    mu = be.scalar(sol.mu)
    half = be.scalar(1) / be.scalar(2)
    out = []
    for s, (ms_, zs) in enumerate(zip(sol.ms, z)):
        acc = mu - be.scalar(sol.nu) * half + be.scalar(ms_) * half
        for p, (mp, zp) in enumerate(zip(sol.ms, z)):
            if p != s:
                acc = acc + be.scalar(mp) * zs / (zs - zp)
        for ti in t:
            acc = acc + be.scalar(2) * zs / (ti - zs)
        out.append(be.scalar(ms_) * half * acc)
    return out


@dataclass
class EigenReport:
    errors: list
    norm: float

    @property
    def max_error(self) -> float:
        return max(self.errors, default=0.0)


def verify_eigenvector(sol: BAESolution) -> EigenReport:
    """``|K_s w - k_s w| / |w|`` for each site."""
    be = sol.backend
    w = weight_function(sol.t, sol.z, sol.ms, be)
    norm = float(np.linalg.norm(np.asarray([to_complex(v) for v in w])))
    space = TensorSpace(sol.ms, be)
    ks = bethe_eigenvalues(sol)
    errs = []
    for s, k in enumerate(ks):
        K = gaudin_operator(s, sol.z, sol.mu, space, sol.nu).entries
        diff = K @ w - w * k
        errs.append(max_abs(diff) / norm if norm else float("inf"))
    return EigenReport(errs, norm)


def bethe_matrix(solutions) -> np.ndarray:
    """Columns are the unit-normalized Bethe vectors (float)."""
    cols = []
    for sol in solutions:
        w = np.asarray([to_complex(v) for v in weight_function(sol.t, sol.z, sol.ms, FLOAT)])
        cols.append(w / np.linalg.norm(w))
    return np.array(cols).T


def bethe_basis_sv(solutions) -> float:
    """Smallest singular value of the normalized Bethe-vector matrix."""
    mat = bethe_matrix(solutions)
    if mat.size == 0:
        return 0.0
    return float(np.linalg.svd(mat, compute_uv=False)[-1])


# -- fundamental operator -----------------------------------------------------


def fundamental_operator(sol: BAESolution) -> PartialFractionOperator:
    """Scalar data of ``E_2/(2 pi i)^2``: ``c0 = -(mu+nu/2)^2/4``, ``A_s = c_s + k_s``, ``B_s = -c_s``."""
    be = sol.backend
    mu = be.scalar(sol.mu)
    shift = mu + be.scalar(sol.nu) / be.scalar(2)
    c0 = -(shift * shift) / be.scalar(4)
    ks = bethe_eigenvalues(sol)
    A = [casimir_shift(m, be) + k for m, k in zip(sol.ms, ks)]
    B = [-casimir_shift(m, be) for m in sol.ms]
    return PartialFractionOperator(tuple(be.scalar(v) for v in sol.z), c0, A, B, 2, sol.ms, sol.nu, be)


def log_derivative(sol: BAESolution) -> PoleExpansion:
    """``g = x d/dx ln w`` with ``w = y x^{(nu/2-mu)/2} prod (x-z_s)^{-m_s/2}``, poles ``z`` then ``t``.

    ``g = -(mu+nu/2)/2 - sum_i 1/(1-x/t_i) + sum_s (m_s/2)/(1-x/z_s)``.
    """
    be = sol.backend
    z = tuple(be.scalar(v) for v in sol.z)
    t = tuple(be.scalar(v) for v in sol.t)
    pe = PoleExpansion(z + t, backend=be)
    half = be.scalar(1) / be.scalar(2)
    g = pe.monomial(("x", 0), -(be.scalar(sol.mu) + be.scalar(sol.nu) * half) * half)
    for i, ti in enumerate(t):
        # 1/(1-x/t) = -t/(x-t)
        g = g + pe.monomial((len(z) + i, 1), ti)
    for s, (m, zs) in enumerate(zip(sol.ms, z)):
        g = g + pe.monomial((s, 1), -zs * be.scalar(m) * half)
    return g


def factorization_defect(sol: BAESolution) -> float:
    """Relative size of ``E_2/(2 pi i)^2 - (-x g' - g^2)`` over the pole basis (exactly 0 when it holds)."""
    be = sol.backend
    g = log_derivative(sol)
    rhs = -(g.x_dx() + g * g)
    lhs = fundamental_operator(sol).to_pole_expansion(tuple(be.scalar(v) for v in sol.t))
    diff = lhs - rhs
    d = diff.defect()
    if be.exact:
        return d
    return d / max(1.0, lhs.defect())


def closed_form_root(mu, z):
    """The single root for ``n = 1``, ``m_1 = 2``, ``nu = 0``: ``t = (mu-1) z/(mu+1)``."""
    be = infer_backend(mu, z)
    mu, z = be.scalar(mu), be.scalar(z)
    return (mu - be.scalar(1)) * z / (mu + be.scalar(1))


def exact_backend_for(*values) -> Backend:
    return EXACT if infer_backend(*values).exact else FLOAT


# -- conjugated operator and spectral seeding ---------------------------------


@dataclass
class ConjugatedOperator:
    """``d^2 + F_1 d + F_2`` with ``F_1 = 1/x - sum m_s/(x - z_s)``, over the poles ``(0, z)``."""

    F1: PoleExpansion
    F2: PoleExpansion

    def apply_to_quasi(self, alpha, y) -> PoleExpansion:
        """``x^{-alpha}`` times the operator applied to ``x^alpha y``, a rational function."""
        pe = self.F1
        be = pe.backend
        alpha = be.scalar(alpha)
        y = np.asarray(y)

        def poly(c):
            return pe._new({("x", i): v for i, v in enumerate(c) if not is_zero(v)})

        inv_x = pe.monomial((0, 1), be.scalar(1))
        Y, Y1, Y2 = poly(y), poly(polys.der(y)), poly(polys.der(polys.der(y)))
        first = (Y * inv_x).scale(alpha) + Y1
        second = (Y * inv_x * inv_x).scale(alpha * (alpha - be.scalar(1))) + (Y1 * inv_x).scale(be.scalar(2) * alpha) + Y2
        return second + self.F1 * first + self.F2 * Y


def conjugated_operator(pf: PartialFractionOperator, z=None, ms=None) -> ConjugatedOperator:
    """Conjugate ``(x d/dx)^2 + E_2`` by ``prod (x - z_s)^{m_s/2}`` and divide by ``x^2``.

    ``pf`` holds scalar data as returned by :func:`fundamental_operator`.
    """
    be = pf.backend
    z = tuple(be.scalar(v) for v in (z if z is not None else pf.z))
    ms = tuple(ms if ms is not None else (pf.ms or (1,) * len(z)))
    conj = conjugation_terms(z, ms, be)
    pe = PoleExpansion(conj.poles, backend=be)
    F1 = pe.monomial((0, 1), be.scalar(1))
    for i, m in enumerate(ms):
        F1 = F1 + pe.monomial((i + 1, 1), -be.scalar(m))
    body = pe.monomial(("x", 0), pf.c0)
    for i, (zs, a, b) in enumerate(zip(z, pf.A, pf.B)):
        # 1/(1-x/z) = -z/(x-z), 1/(1-x/z)^2 = z^2/(x-z)^2
        body = body + pe._new({(i + 1, 1): -zs * a, (i + 1, 2): zs * zs * b})
    body = body * pe.monomial((0, 2), be.scalar(1))
    return ConjugatedOperator(F1, conj + body)


def kernel_polynomial(conj: ConjugatedOperator, alpha, m: int) -> np.ndarray:
    """Monic ``y`` of degree ``m`` with ``x^alpha y`` in the kernel (least squares, float)."""
    cols = [conj.apply_to_quasi(alpha, np.eye(k + 1, dtype=complex)[k]) for k in range(m + 1)]
    keys = sorted({key for c in cols for key in c.terms}, key=str)
    mat = np.array([[complex(c.coeff(key)) for c in cols] for key in keys])
    a, *_ = np.linalg.lstsq(mat[:, :m], -mat[:, m], rcond=None)
    return np.concatenate([a, [1.0]])


def spectral_starts(z, mu, nu: int, ms) -> list:
    """Root guesses read off the joint spectrum of the Gaudin operators on ``V[nu]``.

    Each eigenvalue tuple ``k`` defines a scalar operator; its quasi-polynomial
    kernel element ``x^alpha y`` (``alpha = (nu/2 - mu)/2``) gives ``y``.
    """
    space = TensorSpace(ms, FLOAT)
    m = n_roots(ms, nu)
    K = [gaudin_operator(s, z, mu, space, nu).entries for s in range(len(ms))]
    eig = joint_eigenvalues(K)
    z = tuple(complex(v) for v in z)
    mu = complex(mu)
    out = []
    for ks in eig:
        pf = PartialFractionOperator(
            z,
            -((mu + nu / 2) ** 2) / 4,
            [m_ * (m_ + 2) / 4 + k for m_, k in zip(ms, ks)],
            [-m_ * (m_ + 2) / 4 for m_ in ms],
            2,
            ms,
            nu,
            FLOAT,
        )
        y = kernel_polynomial(conjugated_operator(pf), (nu / 2 - mu) / 2, m)
        out.append(np.roots(y[::-1]))
    return out
