import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaudin_lab.gaudin import (
    GaudinFamily,
    cdet_cross_check,
    d2_commutator_defect,
    d2_partial_fractions,
    f1_laurent_coeff,
    f2_laurent_coeff,
    f2_pole_expansion,
    gaudin_operator,
    intertwiner_check,
    joint_eigenvalues,
)
from gaudin_lab.pfrac import PartialFractionOperator
from gaudin_lab.repn import TensorSpace
from gaudin_lab.scalars import EXACT, FLOAT, max_abs, to_exact

from helpers import distinct_rationals, rational_mu

E12 = np.array([[0, 1], [0, 0]], complex)
E21 = E12.T.copy()
# traceless normalization: e11 + e22 = 0
E11 = np.diag([0.5, -0.5]).astype(complex)
E22 = -E11


def k1_by_hand(z1, z2, mu):
    """``K_1`` on ``V_1 (x) V_1`` assembled with Kronecker products."""
    o0 = np.kron(E11, E11) + np.kron(E22, E22)
    plus = o0 / 2 + np.kron(E12, E21)
    minus = o0 / 2 + np.kron(E21, E12)
    x = z1 / z2
    h1 = np.kron(E11 - E22, np.eye(2))
    return mu / 2 * h1 + (plus * x + minus) / (x - 1)


def test_two_site_operator_by_hand():
    z, mu = [1.3 + 0.2j, -0.7 + 1.1j], 0.37
    got = gaudin_operator(0, z, mu, TensorSpace((1, 1), FLOAT)).entries
    assert np.max(np.abs(got - k1_by_hand(z[0], z[1], mu))) < 1e-14


def test_single_site_zero_weight_is_zero():
    k = gaudin_operator(0, [to_exact(3)], to_exact("2/5"), TensorSpace((2,)), 0)
    assert k.entries.shape == (1, 1) and max_abs(k.entries) == 0


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=2, max_size=3), st.integers(0, 10**6))
def test_family_commutes_and_preserves_weight(ms, seed):
    rng = np.random.default_rng(seed)
    space = TensorSpace(ms)
    z, mu = distinct_rationals(rng, len(ms)), rational_mu(rng)
    fam = GaudinFamily.build(z, mu, space)
    assert fam.commutator_defect() == 0
    assert fam.cartan_defect() == 0


def test_sum_of_operators_is_scalar():
    # r^(s,t)(x) + r^(t,s)(1/x) = 0, so sum_s K_s = mu nu / 2 on V[nu]
    rng = np.random.default_rng(3)
    space = TensorSpace((1, 2, 1))
    z, mu = distinct_rationals(rng, 3), rational_mu(rng)
    for nu in space.weights():
        fam = GaudinFamily.build(z, mu, space, nu)
        total = sum((k.entries for k in fam.K[1:]), fam.K[0].entries)
        want = space.backend.eye(space.dim(nu)) * (mu * to_exact(nu) / to_exact(2))
        assert max_abs(total - want) == 0


def test_invalid_poles():
    space = TensorSpace((1, 1))
    with pytest.raises(ValueError):
        gaudin_operator(0, [to_exact(1), to_exact(1)], to_exact(1), space)
    with pytest.raises(ValueError):
        gaudin_operator(0, [to_exact(0), to_exact(1)], to_exact(1), space)
    with pytest.raises(ValueError):
        gaudin_operator(0, [to_exact(2)], to_exact(1), space)


def test_d2_limits():
    rng = np.random.default_rng(5)
    space = TensorSpace((1, 1, 1))
    z, mu = distinct_rationals(rng, 3), rational_mu(rng)
    nu = 1
    pf = d2_partial_fractions(z, mu, space, nu)
    eye = space.backend.eye(3)
    shift = mu + to_exact(nu) / to_exact(2)
    assert max_abs(pf.limit_at_infinity() - eye * (-(shift * shift) / to_exact(4))) == 0
    # at x = 0 the Casimir shifts cancel and only c0 + sum K_s = c0 + mu nu / 2 survives
    at0 = pf.evaluate(to_exact(0))
    assert max_abs(at0 - pf.c0 - eye * (mu * to_exact(nu) / to_exact(2))) == 0


def test_d2_commutes_with_itself():
    rng = np.random.default_rng(6)
    space = TensorSpace((1, 1, 1, 1))
    z, mu = distinct_rationals(rng, 4), rational_mu(rng)
    pf = d2_partial_fractions(z, mu, space, 0)
    assert d2_commutator_defect(pf, to_exact("1/7"), to_exact("-5/3")) == 0


@pytest.mark.parametrize("ms", [(1,), (2,), (1, 1), (1, 2), (1, 1, 1)])
def test_cdet_expansion(ms):
    rng = np.random.default_rng(len(ms) * 10 + sum(ms))
    rep = cdet_cross_check(distinct_rationals(rng, len(ms)), rational_mu(rng), TensorSpace(ms))
    assert rep.ok and rep.d1_defect == 0 and rep.d2_defect == 0


def test_intertwiner_exact():
    rng = np.random.default_rng(8)
    space = TensorSpace((1, 1, 1))
    z, mu = distinct_rationals(rng, 3), rational_mu(rng)
    for nu in space.weights():
        rep = intertwiner_check(z, mu, space, nu)
        assert not rep.skipped and rep.max_defect == 0


def test_intertwiner_skips_at_pole():
    # A(mu + nu/2 - 1) on V[0] of V_1 (x) V_1 meets a pole at mu = 1
    rep = intertwiner_check([to_exact(1), to_exact(2)], to_exact(1), TensorSpace((1, 1)), 0)
    assert rep.skipped and rep.reason


def test_first_order_coefficients():
    z = [to_exact(2), to_exact(-3), to_exact("1/2")]
    assert f1_laurent_coeff(z, 1) == to_exact(-2)
    assert f1_laurent_coeff(z, 2) == -(z[0] + z[1] + z[2])
    assert f1_laurent_coeff(z, 3, (1, 2, 1)) == -(z[0] ** 2 + to_exact(2) * z[1] ** 2 + z[2] ** 2)
    with pytest.raises(ValueError):
        f1_laurent_coeff(z, 0)


def test_second_order_zero_operator_vanishes():
    # with c0 = A = B = 0 only the conjugation terms remain; for a single pole at z
    # with m = 0 they vanish identically
    z = (to_exact(3),)
    pf = PartialFractionOperator(z, to_exact(0), [to_exact(0)], [to_exact(0)], 2, (0,), None, EXACT)
    assert all(f2_laurent_coeff(pf, j) == to_exact(0) for j in range(2, 7))


def test_second_order_laurent_matches_pole_expansion():
    space = TensorSpace((1, 1), FLOAT)
    z = [1.2 + 0.3j, -0.8 + 0.9j]
    pf = d2_partial_fractions(z, 0.31, space, 0)
    pe = f2_pole_expansion(pf)
    x = 30.0 + 7j
    series = sum(f2_laurent_coeff(pf, j) * x ** (-j) for j in range(2, 60))
    assert np.max(np.abs(series - pe.evaluate(x))) < 1e-12


def test_joint_eigenvalues_diagonal():
    a, b = np.diag([1.0, 2.0, 3.0]), np.diag([4.0, 5.0, 6.0])
    rows = sorted(map(tuple, np.round(joint_eigenvalues([a, b]).real, 10)))
    assert rows == [(1, 4), (2, 5), (3, 6)]
