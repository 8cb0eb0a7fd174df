"""The twelve acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line; ``conftest.py`` prints them at the end
of the run, and running this file directly prints them as well.
"""

from __future__ import annotations

import time
from math import comb

import numpy as np
import pytest

from gaudin_lab.bethe import (
    BAESolution,
    bethe_basis_sv,
    closed_form_root,
    factorization_defect,
    solve_bae,
    verify_eigenvector,
)
from gaudin_lab.gaudin import GaudinFamily, cdet_cross_check, intertwiner_check
from gaudin_lab.kzb import kzb_check
from gaudin_lab.repn import TensorSpace, composition_matrix, composition_scalar
from gaudin_lab.scalars import max_abs, to_exact
from gaudin_lab.wronski import (
    dictionary_defect,
    dual_polynomial,
    dual_solution,
    kernel_dictionary_defect,
    weyl_diagram_defect,
    wronski_fiber,
)

from helpers import distinct_rationals, generic_mu, generic_z, generic_zeta, random_a, rational_mu

RESULTS: list = []
DESK = [(2, 1), (3, 1), (4, 2)]


def record(label: str, ok: bool, detail: str):
    line = f"{label:<44} {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _exact_sweep(seed):
    rng = np.random.default_rng(seed)
    for n in (2, 3, 4):
        for _ in range(5):
            yield n, distinct_rationals(rng, n), rational_mu(rng)


def test_ac01_gaudin_commutativity():
    t0 = time.perf_counter()
    worst = 0.0
    for n, z, mu in _exact_sweep(101):
        space = TensorSpace((1,) * n)
        for nu in space.weights():
            worst = max(worst, GaudinFamily.build(z, mu, space, nu).commutator_defect())
    wall = time.perf_counter() - t0
    record("AC1 Gaudin operators commute", worst == 0 and wall < 10, f"defect={worst} wall={wall:.2f}s")


def test_ac02_composition_scalar():
    rng = np.random.default_rng(102)
    worst = 0.0
    for n in range(1, 6):
        space = TensorSpace((1,) * n)
        for _ in range(5):
            mu = rational_mu(rng)  # denominators 3, 5, 7 keep mu outside M/2 + Z
            for nu in space.weights():
                mat = composition_matrix(mu, space, nu)
                worst = max(worst, max_abs(mat - space.backend.eye(space.dim(nu)) * composition_scalar(mu, space, nu)))
    record("AC2 composition of Weyl operators is scalar", worst == 0, f"defect={worst}")


def test_ac03_intertwiner():
    worst = 0.0
    skipped = 0
    for n, z, mu in _exact_sweep(101):
        space = TensorSpace((1,) * n)
        for nu in space.weights():
            rep = intertwiner_check(z, mu, space, nu)
            skipped += rep.skipped
            worst = max(worst, rep.max_defect)
    record("AC3 intertwiner A K_s(mu) = K_s(-mu) A", worst == 0 and skipped == 0,
           f"defect={worst} skipped={skipped}")


def test_ac04_cdet_cross_check():
    rng = np.random.default_rng(104)
    d1 = d2 = 0.0
    for ms in [(1,), (2,), (3,), (1, 1), (2, 1), (1, 1, 1), (2, 1, 1)]:
        z = distinct_rationals(rng, len(ms))
        rep = cdet_cross_check(z, rational_mu(rng), TensorSpace(ms))
        d1, d2 = max(d1, rep.d1_defect), max(d2, rep.d2_defect)
    record("AC4 cdet expansion: D1 = 0, D2 closed form", d1 == 0 and d2 == 0, f"D1={d1} D2={d2}")


def _desk_runs():
    """Ten generic instances per (n, m); cached because criteria 5-7 share them."""
    if not hasattr(_desk_runs, "cache"):
        rng = np.random.default_rng(105)
        runs = []
        t0 = time.perf_counter()
        for n, m in DESK:
            for _ in range(10):
                z, mu = generic_z(rng, n), generic_mu(rng)
                runs.append((n, m, solve_bae(z, mu, n - 2 * m, (1,) * n)))
        _desk_runs.cache = (runs, time.perf_counter() - t0)
    return _desk_runs.cache


def test_ac05_bethe_completeness():
    t0 = time.perf_counter()
    runs, _ = _desk_runs()
    counts_ok = all(len(r) == comb(n, m) for n, m, r in runs)
    res = max(s.residual for _, _, r in runs for s in r)
    sv = min(bethe_basis_sv(r.solutions) for _, _, r in runs)
    eig = max(verify_eigenvector(s).max_error for _, _, r in runs for s in r)
    wall = time.perf_counter() - t0
    ok = counts_ok and res < 1e-10 and sv > 1e-8 and eig < 1e-8 and wall < 60
    record("AC5 Bethe completeness at desk scale", ok,
           f"counts={'ok' if counts_ok else 'short'} residual={res:.1e} sv={sv:.2e} eigen={eig:.1e} wall={wall:.1f}s")


def test_ac06_factorization():
    mu, z = to_exact("2/7"), to_exact(3)
    exact = factorization_defect(BAESolution.from_roots([closed_form_root(mu, z)], [z], mu, (2,)))
    runs, _ = _desk_runs()
    num = max(factorization_defect(s) for _, _, r in runs for s in r)
    record("AC6 fundamental operator factorization", exact == 0 and num < 1e-8, f"exact={exact} numeric={num:.1e}")


def test_ac07_wronskian_duality():
    runs, _ = _desk_runs()
    dual_res = round_trip = 0.0
    for _, _, r in runs:
        for s in r:
            dsol, dual = dual_solution(s)  # raises if the linear system is singular
            dual_res = max(dual_res, dsol.residual)
            back = dual_polynomial(dual.ytilde, s.z, -s.mu, -s.nu, s.ms).ytilde
            round_trip = max(round_trip, float(np.max(np.abs(np.asarray(back, complex) - np.asarray(s.y(), complex)))))
    record("AC7 Wronskian duality", dual_res < 1e-8 and round_trip < 1e-10,
           f"dual residual={dual_res:.1e} double dual={round_trip:.1e}")


def _fibers():
    if not hasattr(_fibers, "cache"):
        rng = np.random.default_rng(109)
        out = []
        for n, m in DESK:
            for _ in range(20):
                out.append(wronski_fiber(random_a(rng, n), generic_zeta(rng), m, n - m))
        _fibers.cache = out
    return _fibers.cache


def test_ac08_kernel_dictionary():
    worst = max(kernel_dictionary_defect(p) for f in _fibers() for p in f.points)
    record("AC8 kernel operator = conjugated operator", worst < 1e-8, f"defect={worst:.1e}")


def test_ac09_wronski_degree():
    fibers = _fibers()
    short = [(f.m + f.l, f.m, f.count) for f in fibers if f.count != comb(f.m + f.l, f.m)]
    sig = max(p.sigma_residual for f in fibers for p in f.points)
    record("AC9 Wronski map degree", not short and sig < 1e-8, f"incomplete={short} sigma residual={sig:.1e}")


def test_ac10_fiber_eigenvalue_dictionary():
    worst = max(dictionary_defect(f) for f in _fibers())
    record("AC10 fiber points match joint eigenvalues", worst < 1e-7, f"defect={worst:.1e}")


def test_ac11_weyl_transposition():
    worst = max(weyl_diagram_defect(p) for f in _fibers() for p in f.points)
    record("AC11 Weyl/transposition diagram", worst < 1e-8, f"collinearity defect={worst:.1e}")


def test_ac12_kzb_series():
    rng = np.random.default_rng(112)
    t0 = time.perf_counter()
    worst = 0.0
    for n in (2, 4):
        z, mu = distinct_rationals(rng, n), rational_mu(rng, avoid_half=False)
        worst = max(worst, kzb_check((1,) * n, z, mu, 8).max_defect)
    wall = time.perf_counter() - t0
    record("AC12 KZB series through order 8", worst == 0 and wall < 30, f"defect={worst} wall={wall:.1f}s")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_ac"):
            try:
                fn()
            except AssertionError:
                pass
    raise SystemExit(0 if all("PASS" in line for line in RESULTS) and len(RESULTS) == 12 else 1)
