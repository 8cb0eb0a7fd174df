import json
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaudin_lab.bethe import (
    BAEOptions,
    BAESolution,
    assumption_violated,
    bae_residual,
    bethe_basis_sv,
    bethe_eigenvalues,
    closed_form_root,
    compositions,
    factorization_defect,
    fundamental_operator,
    n_roots,
    solve_bae,
    verify_eigenvector,
    weight_function,
)
from gaudin_lab.gaudin import d2_partial_fractions
from gaudin_lab.repn import TensorSpace
from gaudin_lab.scalars import FLOAT, max_abs, to_exact

from helpers import generic_mu, generic_z

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=11)


def _closed_form(mu, z):
    return BAESolution.from_roots([closed_form_root(mu, z)], [z], mu, (2,))


@settings(max_examples=30, deadline=None)
@given(fractions.filter(lambda f: f not in (-1, 1)), fractions.filter(lambda f: f != 0))
def test_closed_form_root_is_exact(mu, z):
    sol = _closed_form(to_exact(mu), to_exact(z))
    assert sol.residual == 0
    # a single V_2 has V[0] one-dimensional and K_1 = mu * 0 / 2
    assert bethe_eigenvalues(sol)[0] == to_exact(0)
    assert factorization_defect(sol) == 0


def test_closed_form_float_value():
    assert abs(closed_form_root(0.5, 3.0) - (-1.0)) < 1e-15


def test_counting_helpers():
    assert n_roots((1, 1, 1), -1) == 2
    with pytest.raises(ValueError):
        n_roots((1, 1), 1)
    assert compositions((1, 2), 2) == [(0, 2), (1, 1)]
    assert assumption_violated(to_exact(2), 0) and assumption_violated(1.5, 1)
    assert not assumption_violated(-1.0, 0) and not assumption_violated(0.3, 0)


def test_two_site_single_root_matches_quadratic():
    # c/t - 1/(t-z1) - 1/(t-z2) = 0 with c = 1 - mu clears to a quadratic
    rng = np.random.default_rng(11)
    z, mu = generic_z(rng, 2), generic_mu(rng)
    c = 1 - mu
    want = np.roots([c - 2, (1 - c) * (z[0] + z[1]), c * z[0] * z[1]])
    res = solve_bae(z, mu, 0, (1, 1))
    assert res.complete and len(res) == 2
    got = np.array([s.t[0] for s in res])
    assert max(np.min(np.abs(got - w)) for w in want) < 1e-10
    assert bethe_basis_sv(res.solutions) > 1e-6


def test_single_site_has_one_solution():
    res = solve_bae([1.5 + 0.5j], 0.3, 0, (2,))
    assert len(res) == 1 and res.expected_count == 1
    assert abs(res[0].t[0] - closed_form_root(0.3, 1.5 + 0.5j)) < 1e-10


@pytest.mark.parametrize("n,m", [(3, 1), (4, 2)])
def test_completeness_and_eigenvectors(n, m):
    rng = np.random.default_rng(n * 7 + m)
    z, mu = generic_z(rng, n), generic_mu(rng)
    res = solve_bae(z, mu, n - 2 * m, (1,) * n)
    assert len(res) == comb(n, m)
    assert all(s.residual < 1e-10 for s in res)
    assert max(verify_eigenvector(s).max_error for s in res) < 1e-8


def test_assumption_flag_is_reported():
    res = solve_bae([1.0, 2.0 + 1j], 2.0, 0, (1, 1))
    assert res.assumption_violated


def test_residual_is_permutation_invariant():
    rng = np.random.default_rng(12)
    z, mu = generic_z(rng, 4), generic_mu(rng)
    sol = solve_bae(z, mu, 0, (1,) * 4)[0]
    t = list(sol.t)
    r1 = bae_residual(t, z, mu, 0, (1,) * 4)
    r2 = bae_residual(t[::-1], z, mu, 0, (1,) * 4)
    assert np.allclose(r1, r2[::-1], atol=1e-14)


def test_scaling_covariance():
    # t -> lam t, z -> lam z scales every equation by 1/lam
    rng = np.random.default_rng(13)
    z, mu = generic_z(rng, 3), generic_mu(rng)
    sol = solve_bae(z, mu, 1, (1, 1, 1))[0]
    lam = 2.5 - 1.5j
    r = bae_residual([lam * v for v in sol.t], [lam * v for v in z], mu, 1, (1, 1, 1))
    assert np.max(np.abs(r)) < 1e-10


def test_weight_function_small_cases():
    t, z = [to_exact(5)], [to_exact(2), to_exact(-1)]
    w = weight_function(t, z, (1, 1))
    # basis of V[0]: (0,1) then (1,0)
    assert w[0] == to_exact(1) / to_exact(6) and w[1] == to_exact(1) / to_exact(3)
    w0 = weight_function([], z, (1, 1))
    assert w0.shape == (1,) and w0[0] == to_exact(1)


def test_weight_function_double_site():
    # m_1 = 2 with both roots there: Sym 1/((t1-z)(t2-z)) = 2/((t1-z)(t2-z))
    t, z = [to_exact(3), to_exact(7)], [to_exact(1)]
    assert weight_function(t, z, (2,))[0] == to_exact(2) / to_exact(12)


@settings(max_examples=20, deadline=None)
@given(st.lists(fractions, min_size=2, max_size=2, unique=True), st.permutations([0, 1]))
def test_weight_function_symmetric(t, perm):
    z = [to_exact("1/3"), to_exact(-4), to_exact(9)]
    t = [to_exact(v + 100) for v in t]
    a = weight_function(t, z, (1, 1, 1))
    b = weight_function([t[i] for i in perm], z, (1, 1, 1))
    assert max_abs(a - b) == 0


def test_eigenvalues_sum_to_scalar():
    rng = np.random.default_rng(14)
    z, mu = generic_z(rng, 3), generic_mu(rng)
    for sol in solve_bae(z, mu, -1, (1, 1, 1)):
        assert abs(sum(bethe_eigenvalues(sol)) - mu * -1 / 2) < 1e-9


def test_second_order_eigenvalue_on_bethe_vector():
    rng = np.random.default_rng(15)
    z, mu = generic_z(rng, 3), generic_mu(rng)
    space = TensorSpace((1, 1, 1), FLOAT)
    pf_op = d2_partial_fractions(z, mu, space, 1)
    for sol in solve_bae(z, mu, 1, (1, 1, 1)):
        w = weight_function(sol.t, sol.z, sol.ms, FLOAT)
        for a in (0.4 + 0.1j, -2.0 + 3j):
            lhs = pf_op.evaluate(a) @ w
            rhs = fundamental_operator(sol).evaluate(a) * w
            assert np.max(np.abs(lhs - rhs)) < 1e-8 * max(1.0, np.max(np.abs(lhs)))


def test_factorization_numeric():
    rng = np.random.default_rng(16)
    z, mu = generic_z(rng, 3), generic_mu(rng)
    for sol in solve_bae(z, mu, 1, (1, 1, 1)):
        assert factorization_defect(sol) < 1e-8


def test_solver_is_deterministic():
    rng = np.random.default_rng(17)
    z, mu = generic_z(rng, 3), generic_mu(rng)
    a = solve_bae(z, mu, 1, (1, 1, 1), BAEOptions(seed=4))
    b = solve_bae(z, mu, 1, (1, 1, 1), BAEOptions(seed=4))
    assert [s.canonical for s in a] == [s.canonical for s in b]


def test_record_is_json():
    rec = _closed_form(to_exact("2/7"), to_exact(3)).to_record()
    text = json.dumps(rec)
    assert set(rec) == {"ms", "nu", "mu", "z", "roots", "residual", "eigenvalues"}
    assert json.loads(text)["roots"] == [[-5, 3]]  # (2/7 - 1) 3 / (2/7 + 1)
