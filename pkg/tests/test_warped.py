import numpy as np
import pytest
import sympy as sp

from torsionkit import lie, warped as W
from torsionkit.errors import UnsupportedSignatureError

import oracles

# Any multiple of the canonical form gives a parallel nu: the sweep below
# finds an identically zero residual, so the fixture records the unit scale.
SU2_TAU_SCALE = 1.0
TOL = 1e-8


def su2_model(scale=SU2_TAU_SCALE, **kw):
    return W.WarpedModel(lie.su2(), scale, **kw)


def test_default_samples():
    m = su2_model()
    assert len(m.t_samples) == 50 and m.t_samples[0] == -2.0 and m.t_samples[-1] == 2.0


def test_base_connection_su2():
    b = W.base_connection(lie.su2())
    assert b.gamma[0, 1, 2] == pytest.approx(0.5)
    assert np.allclose(b.gamma, 0.5 * lie.su2().structure)
    assert b.nabla_tau == 0.0


def test_base_connection_abelian_and_su3():
    assert np.all(W.base_connection(lie.abelian(3)).gamma == 0.0)
    b = W.base_connection(lie.su3())
    assert b.nabla_tau <= 1e-10 and b.tau_jacobi <= 1e-10


def test_base_connection_rejects_noncompact():
    c = np.zeros((3, 3, 3))
    for i, j, k, v in ((0, 1, 1, 2.0), (0, 2, 2, -2.0), (1, 2, 0, 1.0)):
        c[i, j, k], c[j, i, k] = v, -v
    with pytest.raises(UnsupportedSignatureError):
        W.base_connection(lie.MetricLieAlgebra(c))


@pytest.mark.parametrize("t", [-1.5, 0.0, 0.7])
def test_abelian_matches_sympy_christoffels(t):
    # metric dt^2 + e^{2t} (dx^2 + dy^2) in coordinates (t, x, y)
    tt, x, y = sp.symbols("t x y")
    g = sp.diag(1, sp.exp(2 * tt), sp.exp(2 * tt))
    gam = oracles.coordinate_christoffels(g, [tt, x, y])
    # orthonormal frame f_0 = d_t, f_i = e^{-t} d_i
    frame = [[1, 0, 0], [0, sp.exp(-tt), 0], [0, 0, sp.exp(-tt)]]
    inv = [[1, 0, 0], [0, sp.exp(tt), 0], [0, 0, sp.exp(tt)]]
    want = np.zeros((3, 3, 3))
    for a in range(3):
        for b in range(3):
            # nabla_{f_a} f_b = f_a(f_b^k) d_k + f_a^i f_b^j Gamma^k_ij d_k
            vec = [sum(frame[a][i] * sp.diff(frame[b][k], [tt, x, y][i]) for i in range(3)) +
                   sum(frame[a][i] * frame[b][j] * gam[k][i][j] for i in range(3) for j in range(3))
                   for k in range(3)]
            for c in range(3):
                want[a, b, c] = float(sum(inv[c][k] * vec[k] for k in range(3)).subs(tt, t))
    got = W.warped_connection(W.WarpedModel(lie.abelian(2)), t).gamma
    assert np.max(np.abs(got - want)) < 1e-12
    # nabla_{f_i} f_j = -delta_ij f_0 and nabla_{f_i} f_0 = f_i
    assert got[1, 1, 0] == pytest.approx(-1.0) and got[1, 0, 1] == pytest.approx(1.0)


def test_su2_frame_coefficients_at_zero():
    g = W.warped_connection(su2_model(), 0.0).gamma
    assert g[1, 2, 3] == pytest.approx(0.5)
    assert g[1, 1, 0] == pytest.approx(-1.0)


@pytest.mark.parametrize("name", ["su2", "su3", "r3", "so4"])
def test_warped_postconditions(name, rng):
    base = {"su2": lie.su2(), "su3": lie.su3(), "r3": lie.abelian(3), "so4": lie.so(4)}[name]
    m = W.WarpedModel(base)
    for t in rng.uniform(-2, 2, size=20):
        res = W.warped_residuals(W.warped_connection(m, t))
        assert res["metric"] <= 1e-12
        assert max(res["a"], res["b"], res["c"]) <= 1e-12


@pytest.mark.parametrize("name", ["su2", "su3", "so4"])
def test_parallel_and_elemprop(name):
    base = {"su2": lie.su2(), "su3": lie.su3(), "so4": lie.so(4)}[name]
    m = W.WarpedModel(base)
    par = W.check_connection_parallel(m)
    assert par["max_xi"] <= TOL and par["max_nu"] <= TOL
    assert max(W.check_elemprop(m)["max"].values()) <= TOL


def test_nu_xi_and_dxi_are_exact():
    e = W.check_elemprop(su2_model())
    assert e["max"]["nu_xi"] == 0.0 and e["max"]["d_xi"] == 0.0


def test_abelian_pure_vectorial():
    m = W.WarpedModel(lie.abelian(3))
    assert m.nu(0.3).norm() == 0.0
    assert W.check_connection_parallel(m)["max_xi"] == 0.0


def test_conformal_rescaling(rng):
    m = su2_model()
    for t in rng.uniform(-2, 2, size=10):
        c = W.conformal_check(m, t)
        assert c["direct"] <= 1e-10 and c["formula"] <= 1e-10


def test_rotation_invariance(rng):
    q = lie.random_orthogonal(8, rng)
    m = W.WarpedModel(lie.su3().transform(q), t_samples=(-1.0, 0.5, 2.0))
    assert W.check_connection_parallel(m)["max_nu"] <= TOL
    assert max(W.check_elemprop(m)["max"].values()) <= TOL


def test_scale_sweep_is_identically_zero():
    # the residual is not a quadratic with an isolated root: every scale works
    res = W.scale_sweep(lie.su2(), np.linspace(-3, 3, 13), (-2.0, 0.0, 2.0))
    assert max(res) <= 1e-12


def test_wrong_exponent_is_detected():
    m = W.WarpedModel(lie.su2(), exponent=2, t_samples=(-1.0, 1.0))
    assert W.check_connection_parallel(m)["max_nu"] > 1e-2
    e = W.check_elemprop(m)["max"]
    assert e["d_nu"] > 1e-2 and e["lie_xi"] > 1e-2
    assert e["d_crosscheck"] <= 1e-12


def test_non_invariant_three_form_is_not_parallel():
    # a 3-form on so(4) supported on one factor and a mixed slot is not ad-invariant
    from torsionkit.exterior import KForm, derivation_action
    m = W.WarpedModel(lie.so(4))
    mats = W.warped_connection(m, 0.0).matrices() + W.torsion_endos(m, 0.0)
    nu = KForm.basis(7, 1, 2, 4)
    assert max(derivation_action(a, nu).norm() for a in mats) > 1e-2


def test_frame_d_matches_levi_civita_d(rng):
    from conftest import random_form
    m = W.WarpedModel(lie.su3())
    c = W.structure_functions(m, 0.4)
    conn = W.FrameConnection(W.levi_civita(c), 0.4)
    for k in (1, 2, 3):
        s = random_form(rng, 9, k)
        assert W.frame_d(s, 1.3, c).allclose(W.levi_civita_d(s, 1.3, conn), atol=1e-11)


def test_perturbed_scale_keeps_nabla_nu_small():
    # recorded behavior: a 1% change of tau_scale leaves nabla nu at round-off
    assert W.check_connection_parallel(su2_model(1.01 * SU2_TAU_SCALE))["max_nu"] <= 1e-12


def test_monotone_falsifiability():
    # five increasing perturbations of tau_scale should give strictly increasing residuals
    eps = [1e-4, 1e-3, 1e-2, 1e-1, 1.0]
    res = [W.check_connection_parallel(su2_model(SU2_TAU_SCALE * (1 + e)))["max_nu"] for e in eps]
    assert all(a < b for a, b in zip(res, res[1:])), res
