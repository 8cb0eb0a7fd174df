"""Verification suites run by the command-line harness.

Each suite turns one family of identities into report entries. A check passes
when its defect is at most its limit; exact-backend identity checks use limit 0.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .bethe import BAEOptions, bethe_basis_sv, factorization_defect, solve_bae, verify_eigenvector
from .gaudin import GaudinFamily, cdet_cross_check, d2_commutator_defect, d2_partial_fractions, intertwiner_check
from .kzb import DEFAULT_K, KZBSingularError, charpoly_defect, kzb_check
from .repn import PoleError, TensorSpace, composition_matrix, composition_scalar, shifted_A, site_matrix, weyl_sigma
from .scalars import SingularSystemError, det, get_backend, is_exact_scalar, max_abs, to_complex, to_exact
from .wronski import (
    NonGenericError,
    dictionary_defect,
    dual_polynomial,
    dual_solution,
    kernel_dictionary_defect,
    transpose_pair,
    weyl_diagram_defect,
    wronski_fiber,
    wronskian_pair,
)

PASS, FAIL, SKIPPED = "pass", "fail", "skipped-assumption"
SUITES = ("repn", "gaudin", "bethe", "wronski", "kzb")


@dataclass
class RunConfig:
    """Inputs shared by all subcommands; ``resolve`` fills the random parts."""

    ms: tuple = (1, 1)
    m: int | None = None
    nu: int | None = None
    mu: object = None
    z: tuple | None = None
    backend: str = "exact"
    tol: float = 1e-8
    K: int = DEFAULT_K
    starts: int = 24
    seed: int = 0
    a: tuple | None = None
    zeta: object = None

    def __post_init__(self):
        self.ms = tuple(int(v) for v in self.ms)
        if not self.ms or any(v < 0 for v in self.ms):
            raise ValueError("ms must be a nonempty list of nonnegative integers")

    @property
    def n(self) -> int:
        return len(self.ms)

    @property
    def M(self) -> int:
        return sum(self.ms)

    def weight(self) -> int:
        """``nu`` from ``--nu`` or ``--m`` (default one root, or none when ``M = 0``)."""
        if self.nu is not None and self.m is not None and self.nu != self.M - 2 * self.m:
            raise ValueError(f"inconsistent m={self.m} and nu={self.nu} for M={self.M}")
        if self.nu is not None:
            nu = self.nu
        else:
            nu = self.M - 2 * (self.m if self.m is not None else min(1, self.M))
        if (self.M - nu) % 2 or not -self.M <= nu <= self.M:
            raise ValueError(f"nu={nu} is not a weight of V with M={self.M}: m = (M - nu)/2 must be an integer in [0, M]")
        return nu

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def resolve(self) -> RunConfig:
        """Draw ``z`` (distinct integers in [1, 100]) and ``mu`` when not given."""
        rng = self.rng()
        z = self.z
        if z is None:
            z = tuple(int(v) for v in rng.choice(np.arange(1, 101), size=self.n, replace=False))
        if len(z) != self.n:
            raise ValueError(f"need {self.n} poles, got {len(z)}")
        if len(set(map(to_complex, z))) != len(z) or any(to_complex(v) == 0 for v in z):
            raise ValueError("poles z must be distinct and nonzero")
        mu = self.mu
        if mu is None:
            mu = to_exact(f"{int(rng.integers(1, 20))}/{int(rng.choice([3, 5, 7, 11]))}")
        return RunConfig(self.ms, self.m, self.nu, mu, tuple(z), self.backend, self.tol, self.K,
                         self.starts, self.seed, self.a, self.zeta)

    def scalars(self, values):
        """Inputs in the configured backend (exact literals stay exact only there)."""
        be = get_backend(self.backend)
        if be.exact:
            return [to_exact(v) if is_exact_scalar(v) else to_exact(complex(v)) for v in values]
        return [to_complex(v) for v in values]

    def flags(self) -> dict:
        """Assumption flags recorded in every report."""
        mu = to_complex(self.mu) if self.mu is not None else None
        out = {}
        if mu is not None:
            near = abs(mu.imag) < 1e-12 and abs(mu.real - round(mu.real)) < 1e-12
            out["mu_integer"] = bool(near)
            out["mu_positive_integer"] = bool(near and round(mu.real) > 0)
            half = (mu - self.M / 2)
            out["mu_in_M_half_plus_Z"] = bool(abs(half.imag) < 1e-12 and abs(half.real - round(half.real)) < 1e-12)
        return out

    def to_record(self) -> dict:
        from .serialize import encode

        rec = {"ms": list(self.ms), "backend": self.backend, "K": self.K, "seed": self.seed, "tol": self.tol,
               "starts": self.starts}
        if self.mu is not None:
            rec["mu"] = encode(self.mu)
        if self.z is not None:
            rec["z"] = encode(list(self.z))
        if self.m is not None or self.nu is not None:
            rec["nu"] = self.weight()
        if self.a is not None:
            rec["a"] = encode(list(self.a))
        if self.zeta is not None:
            rec["zeta"] = encode(self.zeta)
        rec["flags"] = self.flags()
        return rec


@dataclass
class Check:
    name: str
    status: str
    defect: float
    limit: float
    anchor: str
    wall_time: float = 0.0
    detail: str = ""

    def to_record(self, timings: bool = False) -> dict:
        rec = {"name": self.name, "status": self.status, "defect": _finite(self.defect), "limit": self.limit,
               "anchor": self.anchor}
        if self.detail:
            rec["detail"] = self.detail
        if timings:
            rec["wall_time"] = round(self.wall_time, 6)
        return rec


def _finite(x: float):
    x = float(x)
    return x if np.isfinite(x) else str(x)


@dataclass
class Report:
    suite: str
    config: dict
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def counts(self) -> dict:
        out = {PASS: 0, FAIL: 0, SKIPPED: 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def to_record(self, timings: bool = False) -> dict:
        return {"suite": self.suite, "config": self.config, "ok": self.ok, "counts": self.counts(),
                "checks": [c.to_record(timings) for c in self.checks]}

    def summary(self) -> str:
        lines = [f"suite {self.suite}"]
        for c in self.checks:
            lines.append(f"  [{c.status:>18}] {c.name:<44} defect={c.defect:.3e} (limit {c.limit:.1e})")
        cnt = self.counts()
        lines.append(f"  {cnt[PASS]} passed, {cnt[FAIL]} failed, {cnt[SKIPPED]} skipped")
        return "\n".join(lines)


class _Recorder:
    def __init__(self, report: Report):
        self.report = report

    def add(self, name: str, anchor: str, limit: float, fn):
        """Run ``fn() -> defect`` (or ``None`` for skipped) and record the outcome."""
        t0 = time.perf_counter()
        detail = ""
        try:
            defect = fn()
        except (PoleError, KZBSingularError) as exc:
            # parameter sits where the claim's hypotheses fail
            defect, detail = None, str(exc)
        except SingularSystemError as exc:
            defect, detail = float("inf"), str(exc)
        wall = time.perf_counter() - t0
        if isinstance(defect, tuple):
            defect, detail = defect
        if defect is None:
            self.report.checks.append(Check(name, SKIPPED, 0.0, limit, anchor, wall, detail))
            return
        defect = float(defect)
        status = PASS if defect <= limit else FAIL
        self.report.checks.append(Check(name, status, defect, limit, anchor, wall, detail))


def _exact_limit(cfg: RunConfig, tol: float) -> float:
    return 0.0 if get_backend(cfg.backend).exact else tol


def _space(cfg: RunConfig) -> TensorSpace:
    return TensorSpace(cfg.ms, get_backend(cfg.backend))


# -- suites -------------------------------------------------------------------


def suite_repn(cfg: RunConfig) -> Report:
    cfg = cfg.resolve()
    rep = Report("repn", cfg.to_record())
    rec = _Recorder(rep)
    space = _space(cfg)
    be = space.backend
    lim = _exact_limit(cfg, cfg.tol)
    (mu,) = cfg.scalars([cfg.mu])

    def sl2():
        worst = 0.0
        for s in range(space.n):
            e12 = site_matrix(space, "e12", s)
            e21 = site_matrix(space, "e21", s)
            h = site_matrix(space, "h", s)
            worst = max(worst, max_abs(e12 @ e21 - e21 @ e12 - h), max_abs(site_matrix(space, "c", s)))
        return worst

    rec.add("sl2 relations per site", "generators satisfy [e12, e21] = e11 - e22 with central element zero", lim, sl2)
    rec.add("weight blocks partition the basis", "weight decomposition of the tensor product", 0,
            lambda: abs(sum(space.dim(nu) for nu in space.weights()) - space.dim()))
    sign = be.scalar(-1 if space.M % 2 else 1)

    def sigma_sq():
        worst = 0.0
        for nu in space.weights():
            s2 = weyl_sigma(space, -nu) @ weyl_sigma(space, nu)
            worst = max(worst, max_abs(s2.entries - be.eye(space.dim(nu)) * sign))
        return worst

    rec.add("Weyl involution squares to (-1)^M", "Weyl involution squares to a sign", lim, sigma_sq)
    if cfg.flags().get("mu_in_M_half_plus_Z"):
        rec.add("composition of dynamical Weyl operators", "composition scalar for mu outside M/2 + Z", 0, lambda: None)
        rec.add("dynamical Weyl operator invertible", "dynamical Weyl operator invertible off M/2 + Z", 0, lambda: None)
        return rep

    def composition():
        worst = 0.0
        for nu in space.weights():
            mat = composition_matrix(mu, space, nu)
            worst = max(worst, max_abs(mat - be.eye(space.dim(nu)) * composition_scalar(mu, space, nu)))
        return worst

    def invertible():
        worst = 0.0
        for nu in space.weights():
            d = det(shifted_A(mu, space, nu).entries)
            # defect 1 when singular
            worst = max(worst, 0.0 if abs(to_complex(d)) > 0 else 1.0)
        return worst

    rec.add("composition of dynamical Weyl operators", "composition of shifted dynamical Weyl operators is scalar",
            lim, composition)
    rec.add("dynamical Weyl operator invertible", "dynamical Weyl operator invertible off M/2 + Z", 0, invertible)
    return rep


def suite_gaudin(cfg: RunConfig) -> Report:
    cfg = cfg.resolve()
    rep = Report("gaudin", cfg.to_record())
    rec = _Recorder(rep)
    space = _space(cfg)
    lim = _exact_limit(cfg, cfg.tol)
    z = cfg.scalars(cfg.z)
    (mu,) = cfg.scalars([cfg.mu])
    fams = {nu: GaudinFamily.build(z, mu, space, nu) for nu in space.weights()}
    rec.add("Gaudin operators commute", "trigonometric Gaudin operators commute", lim,
            lambda: max(f.commutator_defect() for f in fams.values()))
    rec.add("Gaudin operators preserve weights", "Gaudin operators commute with the Cartan subalgebra", lim,
            lambda: GaudinFamily.build(z, mu, space).cartan_defect())

    def d2_comm():
        a, b = space.backend.scalar(1) / space.backend.scalar(3), space.backend.scalar(7) / space.backend.scalar(2)
        a, b = a + z[0] * space.backend.scalar(2), b - z[-1]
        return max(d2_commutator_defect(d2_partial_fractions(z, mu, space, nu), a, b) for nu in space.weights())

    rec.add("D2 at two points commute", "the operators D2(a) and D2(b) commute", lim, d2_comm)

    def intertwiner():
        if cfg.flags().get("mu_in_M_half_plus_Z"):
            return None, "mu in M/2 + Z"
        reps = [intertwiner_check(z, mu, space, nu) for nu in space.weights()]
        skipped = [r for r in reps if r.skipped]
        if skipped:
            return None, skipped[0].reason
        return max(r.max_defect for r in reps)

    rec.add("dynamical Weyl intertwiner", "A(mu + nu/2 - 1) K_s(z, mu) = K_s(z, -mu) A(mu + nu/2 - 1)", lim,
            intertwiner)
    if space.n <= 3 and get_backend(cfg.backend).exact:
        cd = None

        def cdet_d1():
            nonlocal cd
            cd = cdet_cross_check(z, mu, space)
            return cd.d1_defect

        rec.add("cdet expansion: D1 vanishes", "first coefficient of the universal operator is zero", 0, cdet_d1)
        rec.add("cdet expansion: D2 matches", "second coefficient of the universal operator in closed form", 0,
                lambda: cd.d2_defect)
    return rep


def suite_bethe(cfg: RunConfig) -> Report:
    cfg = cfg.resolve()
    rep = Report("bethe", cfg.to_record())
    rec = _Recorder(rep)
    nu = cfg.weight()
    z = [to_complex(v) for v in cfg.z]
    mu = to_complex(cfg.mu)
    expected = TensorSpace(cfg.ms).dim(nu)
    res = solve_bae(z, mu, nu, cfg.ms, BAEOptions(starts=cfg.starts, seed=cfg.seed))
    if res.assumption_violated:
        for name in ("solution count", "BAE residual", "Bethe vectors form a basis", "eigenvector defect",
                     "fundamental operator factorization", "dual Bethe roots", "double dual"):
            rec.add(name, "requires mu outside nu/2 + Z>=0", 0, lambda: (None, "mu in nu/2 + Z>=0"))
        return rep
    sols = res.solutions
    rec.add("solution count", "Bethe vectors form a basis of the weight space", 0,
            lambda: abs(len(sols) - expected))
    rec.add("BAE residual", "Bethe roots solve the Bethe ansatz equations", 1e-10,
            lambda: max((s.residual for s in sols), default=0.0))
    rec.add("Bethe vectors form a basis", "Bethe vectors form a basis (defect is 1/smallest singular value)", 1e8,
            lambda: 1.0 / max(bethe_basis_sv(sols), 1e-300))
    rec.add("eigenvector defect", "Bethe vectors are joint eigenvectors of the Gaudin operators", cfg.tol,
            lambda: max((verify_eigenvector(s).max_error for s in sols), default=0.0))
    rec.add("fundamental operator factorization", "E2 = -(ln w)'' - ((ln w)')^2", cfg.tol,
            lambda: max((factorization_defect(s) for s in sols), default=0.0))
    duals = []

    def dual_res():
        duals.clear()
        for s in sols:
            duals.append(dual_solution(s))
        return max((d.residual for d, _ in duals), default=0.0)

    rec.add("dual Bethe roots", "roots of the dual polynomial solve the BAE at (-mu, -nu)", cfg.tol, dual_res)

    def double():
        worst = 0.0
        for s, (_, d) in zip(sols, duals):
            back = dual_polynomial(d.ytilde, s.z, -s.mu, -s.nu, s.ms).ytilde
            y = s.y()
            worst = max(worst, float(np.max(np.abs(np.asarray(back, complex) - np.asarray(y, complex)))))
        return worst

    rec.add("double dual", "the dual of the dual polynomial is the original", 1e-10, double)
    return rep


def _random_a(n: int, rng: np.random.Generator) -> tuple:
    b = rng.normal(size=n) + 1j * rng.normal(size=n)
    poly = np.poly(b)
    return tuple(complex(poly[s] * (-1) ** s) for s in range(1, n + 1))


def suite_wronski(cfg: RunConfig) -> Report:
    cfg = cfg.resolve()
    rep = Report("wronski", cfg.to_record())
    rec = _Recorder(rep)
    n = cfg.n
    m = cfg.m if cfg.m is not None else min(1, n)
    l = n - m
    rng = cfg.rng()
    a = cfg.a if cfg.a is not None else _random_a(n, rng)
    zeta = cfg.zeta if cfg.zeta is not None else 0.1 + 0.2 * float(rng.random())
    rep.config["a"] = [[complex(v).real, complex(v).imag] for v in a]
    rep.config["zeta"] = [to_complex(zeta).real, to_complex(zeta).imag]
    try:
        fib = wronski_fiber(a, zeta, m, l, BAEOptions(starts=cfg.starts, seed=cfg.seed))
    except NonGenericError as exc:
        rec.add("fiber count", "degree of the Wronski map equals dim V[nu]", 0, lambda: (None, f"non-generic: {exc}"))
        return rep
    rec.add("fiber count", "degree of the Wronski map equals dim V[nu]", 0, lambda: abs(fib.count - comb(n, m)))
    rec.add("Wronskian residual", "every fiber point maps to a", cfg.tol,
            lambda: max((p.sigma_residual for p in fib.points), default=0.0))
    rec.add("fiber-eigenvalue dictionary", "fiber points match joint eigenvalues of the Bethe algebra", 1e-7,
            lambda: dictionary_defect(fib))
    rec.add("kernel operator dictionary", "kernel operator of U equals the conjugated fundamental operator",
            cfg.tol, lambda: max((kernel_dictionary_defect(p) for p in fib.points), default=0.0))
    rec.add("Weyl/transposition diagram", "A omega(t0, mu) is a nonzero multiple of omega(t~0, -mu)", cfg.tol,
            lambda: max((weyl_diagram_defect(p) for p in fib.points), default=0.0))

    def transpose():
        worst = 0.0
        for p in fib.points:
            s1 = np.asarray(wronskian_pair(p.pair).sigma, complex)
            s2 = np.asarray(wronskian_pair(transpose_pair(p.pair)).sigma, complex)
            worst = max(worst, float(np.max(np.abs(s1 - s2), initial=0.0)))
        return worst

    rec.add("transposition preserves the Wronskian", "transposition preserves the Wronski image", cfg.tol, transpose)
    return rep


def suite_kzb(cfg: RunConfig) -> Report:
    cfg = cfg.resolve()
    rep = Report("kzb", cfg.to_record())
    rec = _Recorder(rep)
    names = ["H0 eigenvalue", "H_s action", "sum of H_s vanishes", "C2 action", "C2 commutativity"]
    anchors = ["H0 psi_v = pi i mu^2/2 psi_v", "H_s psi_v = psi_w with w = -2 pi i K_s v",
               "the KZB operators H_s sum to zero", "C2(x) psi_v = psi_w with w from the D2 bracket",
               "C2(a) and C2(b) commute"]
    exact = get_backend(cfg.backend).exact
    lim = 0.0 if exact else 1e-10
    if cfg.M % 2:
        for nm, an in zip(names, anchors):
            rec.add(nm, an, lim, lambda: (None, "V[0] is empty"))
        return rep
    if cfg.flags().get("mu_positive_integer"):
        for nm, an in zip(names, anchors):
            rec.add(nm, an, lim, lambda: (None, "mu is a positive integer"))
        return rep
    z = cfg.scalars(cfg.z)
    (mu,) = cfg.scalars([cfg.mu])
    out = {}

    def run():
        out["r"] = kzb_check(cfg.ms, z, mu, cfg.K, backend=cfg.backend)
        return out["r"].h0

    rec.add(names[0], anchors[0], lim, run)
    if "r" not in out:
        return rep
    r = out["r"]
    rec.add(names[1], anchors[1], lim, lambda: max(r.hs))
    rec.add(names[2], anchors[2], lim, lambda: r.hs_sum)
    rec.add(names[3], anchors[3], lim, lambda: r.c2)
    rec.add(names[4], anchors[4], lim, lambda: r.c2_commutator)
    rec.add("spectrum symmetric under mu -> -mu", "K_s(z, mu) and K_s(z, -mu) are conjugate on V[0]",
            0.0 if exact else cfg.tol, lambda: charpoly_defect(z, mu, cfg.ms))
    return rep


RUNNERS = {"repn": suite_repn, "gaudin": suite_gaudin, "bethe": suite_bethe, "wronski": suite_wronski,
           "kzb": suite_kzb}


def run_suite(name: str, cfg: RunConfig) -> list:
    if name == "all":
        return [RUNNERS[s](cfg) for s in SUITES]
    if name not in RUNNERS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    return [RUNNERS[name](cfg)]

