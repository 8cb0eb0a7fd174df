from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaudin_lab.repn import (
    PoleError,
    TensorSpace,
    WeightMatrix,
    act_generator,
    build_irrep,
    composition_matrix,
    composition_scalar,
    dynamical_weyl_A,
    p_operator,
    shifted_A,
    site_matrix,
    weyl_sigma,
)
from gaudin_lab.scalars import EXACT, FLOAT, det, max_abs, to_complex, to_exact

ms_lists = st.lists(st.integers(0, 3), min_size=1, max_size=3)


def q(a, b=1):
    return to_exact(Fraction(a, b))


def test_trivial_module():
    ir = build_irrep(0)
    assert all(mat.shape == (1, 1) and max_abs(mat) == 0 for mat in ir.gen.values())


def test_v1_and_v2_actions():
    g = build_irrep(1).gen
    assert g["e21"][1, 0] == q(1) and g["e12"][0, 1] == q(1)
    assert [g["e11"][k, k] - g["e22"][k, k] for k in range(2)] == [q(1), q(-1)]
    g = build_irrep(2).gen
    assert g["e21"][2, 1] == q(2) and g["e12"][1, 2] == q(1)
    assert [g["e11"][k, k] - g["e22"][k, k] for k in range(3)] == [q(2), q(0), q(-2)]


def test_build_irrep_rejects_negative():
    with pytest.raises(ValueError):
        build_irrep(-1)


@settings(max_examples=25, deadline=None)
@given(ms_lists)
def test_sl2_relations_and_central_zero(ms):
    sp = TensorSpace(ms)
    for s in range(sp.n):
        e12, e21, h = (site_matrix(sp, g, s) for g in ("e12", "e21", "h"))
        assert max_abs(e12 @ e21 - e21 @ e12 - h) == 0
        assert max_abs(site_matrix(sp, "c", s)) == 0


@settings(max_examples=25, deadline=None)
@given(ms_lists)
def test_weight_blocks_partition(ms):
    sp = TensorSpace(ms)
    assert sum(sp.dim(nu) for nu in sp.weights()) == sp.dim()
    for nu in sp.weights():
        h = act_generator("h", "diagonal", sp, nu).entries
        assert max_abs(h - sp.backend.eye(sp.dim(nu)) * sp.backend.scalar(nu)) == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_block_dimensions_binomial(n):
    sp = TensorSpace((1,) * n)
    for m in range(n + 1):
        assert sp.dim(n - 2 * m) == comb(n, m)


def test_lowering_on_two_sites_by_hand():
    sp = TensorSpace((1, 1))
    assert sp.block(0) == [(0, 1), (1, 0)]
    wm = act_generator("e21", 0, sp, 0)
    assert wm.nu_out == -2
    assert wm.entries.tolist() == [[q(1), q(0)]]


def test_act_generator_errors():
    sp = TensorSpace((1, 1))
    with pytest.raises(ValueError):
        act_generator("e33", 0, sp, 0)
    with pytest.raises(ValueError):
        act_generator("h", 0, sp, 4)


def test_sigma_examples():
    sp = TensorSpace((1,))
    s = weyl_sigma(sp, 1).entries
    assert s[0, 0] == q(1)  # v0 -> v1
    assert weyl_sigma(sp, -1).entries[0, 0] == q(-1)  # v1 -> -v0
    sp2 = TensorSpace((2,))
    assert weyl_sigma(sp2, 0).entries[0, 0] == q(-1)


@settings(max_examples=20, deadline=None)
@given(ms_lists)
def test_sigma_squared_sign(ms):
    sp = TensorSpace(ms)
    sign = -1 if sp.M % 2 else 1
    for nu in sp.weights():
        sq = weyl_sigma(sp, -nu) @ weyl_sigma(sp, nu)
        assert max_abs(sq.entries - sp.backend.eye(sp.dim(nu)) * sp.backend.scalar(sign)) == 0


def test_sigma_flips_weights():
    sp = TensorSpace((1, 2, 1))
    for nu in sp.weights():
        sig = weyl_sigma(sp, nu).entries
        h_in = act_generator("h", "diagonal", sp, nu).entries
        h_out = act_generator("h", "diagonal", sp, -nu).entries
        assert max_abs(sig @ h_in + h_out @ sig) == 0


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_shifted_p_product_formula(m):
    """``p(mu + nu/2 - 1) v_k = prod_{j<k} (mu + m/2 - j)/(mu - m/2 + j) v_k`` on a single ``V_m``."""
    sp = TensorSpace((m,))
    mu = q(2, 7)
    for k in range(m + 1):
        nu = m - 2 * k
        p = p_operator(mu + q(nu, 2) - q(1), sp, nu)
        want = q(1)
        for j in range(k):
            want = want * (mu + q(m, 2) - q(j)) / (mu - q(m, 2) + q(j))
        assert p[0, 0] == want


def test_large_mu_limit_is_sigma():
    sp = TensorSpace((1, 2), FLOAT)
    for nu in sp.weights():
        a = dynamical_weyl_A(1e9 + 0.5j, sp, nu).entries
        assert np.max(np.abs(a - weyl_sigma(sp, nu).entries)) < 1e-7


def test_pole_is_reported():
    sp = TensorSpace((1, 1))
    with pytest.raises(PoleError) as info:
        p_operator(q(0), sp, 0)
    assert info.value.j == 0


rational_mu = st.fractions(min_value=-12, max_value=12, max_denominator=9).filter(lambda f: (2 * f).denominator > 1)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 4), rational_mu)
def test_composition_is_scalar(n, mu):
    sp = TensorSpace((1,) * n)
    mu = to_exact(mu)
    for nu in sp.weights():
        mat = composition_matrix(mu, sp, nu)
        assert max_abs(mat - sp.backend.eye(sp.dim(nu)) * composition_scalar(mu, sp, nu)) == 0


def test_composition_scalar_value_v1():
    # one site, nu = 1: (-1)^1 (mu - 1/2)/(mu + 1/2)
    sp = TensorSpace((1,))
    mu = q(1, 3)
    assert composition_scalar(mu, sp, 1) == -(mu - q(1, 2)) / (mu + q(1, 2))
    assert composition_matrix(mu, sp, 1)[0, 0] == composition_scalar(mu, sp, 1)


@settings(max_examples=10, deadline=None)
@given(rational_mu)
def test_shifted_A_invertible(mu):
    sp = TensorSpace((1, 1, 2))
    for nu in sp.weights():
        if (to_complex(to_exact(mu)) - sp.M / 2).real % 1 == 0:
            continue
        assert to_complex(det(shifted_A(to_exact(mu), sp, nu).entries)) != 0


def test_weight_matrix_composition_checks_blocks():
    a = WeightMatrix(0, EXACT.eye(2), 0, 2)
    b = WeightMatrix(0, EXACT.eye(2))
    with pytest.raises(ValueError):
        a @ a
    assert (a @ b).nu_out == 2
