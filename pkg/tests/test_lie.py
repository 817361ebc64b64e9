import numpy as np
import pytest
from hypothesis import given, strategies as st

from torsionkit import lie
from torsionkit.errors import InvalidAlgebraError, UnsupportedSignatureError
from torsionkit.exterior import four_form_sum

import oracles


@pytest.mark.parametrize("alg", [lie.su2(), lie.su3(), lie.so(4), lie.so(5), lie.sp(2)],
                         ids=lambda a: a.name)
def test_killing_matches_trace_oracle(alg):
    assert np.max(np.abs(lie.killing_form(alg) - oracles.killing_trace(alg.structure))) < 1e-12


def test_su2_fixtures():
    s = lie.su2()
    assert np.max(np.abs(lie.killing_form(s) + 2 * np.eye(3))) < 1e-12
    omega = lie.canonical_three_form(s)
    assert omega.coeffs == pytest.approx({(0, 1, 2): -2.0}, abs=1e-12)


def test_canonical_form_against_definition(rng):
    alg = lie.su3()
    omega = lie.canonical_three_form(alg)
    b = oracles.killing_trace(alg.structure)
    for _ in range(5):
        x, y, z = rng.normal(size=(3, 8))
        assert omega(x, y, z) == pytest.approx(alg.bracket(x, y) @ b @ z, abs=1e-11)


def test_su3_killing_and_four_form():
    s = lie.su3()
    assert np.max(np.abs(lie.killing_form(s) + 3 * np.eye(8))) < 1e-12
    assert four_form_sum(lie.canonical_three_form(s)).norm() < 1e-12


@pytest.mark.parametrize("alg", [lie.su2(), lie.su3(), lie.so(5), lie.su(4), lie.sp(2)],
                         ids=lambda a: a.name)
def test_generators_are_compact_semisimple(alg):
    assert lie.is_lie(alg)
    assert lie.is_compact_type(alg) == lie.COMPACT_SEMISIMPLE


def test_status_variants():
    assert lie.is_compact_type(lie.direct_sum(lie.su2(), lie.abelian(2))) == lie.COMPACT_WITH_CENTER
    assert lie.is_compact_type(lie.abelian(3)) == lie.COMPACT_WITH_CENTER
    # sl(2, R): [h, e] = 2e, [h, f] = -2f, [e, f] = h
    c = np.zeros((3, 3, 3))
    for i, j, k, v in ((0, 1, 1, 2.0), (0, 2, 2, -2.0), (1, 2, 0, 1.0)):
        c[i, j, k], c[j, i, k] = v, -v
    assert lie.is_compact_type(lie.MetricLieAlgebra(c)) == lie.NON_COMPACT
    solvable = np.zeros((3, 3, 3))
    solvable[0, 1, 0], solvable[1, 0, 0] = 1.0, -1.0
    solvable[0, 2, 1], solvable[2, 0, 1] = 1.0, -1.0
    solvable[1, 2, 2], solvable[2, 1, 2] = 1.0, -1.0
    # a genuine (solvable) bracket whose metric is not ad-invariant
    assert lie.is_compact_type(lie.MetricLieAlgebra(solvable)) == lie.NON_COMPACT


def test_antisymmetry_enforced():
    with pytest.raises(InvalidAlgebraError):
        lie.MetricLieAlgebra(np.ones((2, 2, 2)))


@pytest.mark.parametrize("alg,dims", [
    (lie.so(4), [3, 3]),
    (lie.direct_sum(lie.su2(), lie.su3()), [3, 8]),
    (lie.direct_sum(lie.su2(), lie.su2(), lie.su2()), [3, 3, 3]),
    (lie.su3(), [8]),
], ids=["so4", "su2+su3", "3su2", "su3"])
def test_simple_ideal_decomposition(alg, dims, rng):
    q = lie.random_orthogonal(alg.dim, rng)
    d = lie.simple_ideal_decomposition(alg.transform(q), rng)
    assert sorted(d.dims) == sorted(dims)
    assert d.center.shape[1] == 0


def test_decomposition_with_center(rng):
    d = lie.simple_ideal_decomposition(lie.direct_sum(lie.su2(), lie.abelian(2)), rng)
    assert d.dims == [3] and d.center.shape[1] == 2
    assert lie.simple_ideal_decomposition(lie.abelian(4), rng).dims == []


def test_decomposition_rejects_noncompact(rng):
    c = np.zeros((3, 3, 3))
    for i, j, k, v in ((0, 1, 1, 2.0), (0, 2, 2, -2.0), (1, 2, 0, 1.0)):
        c[i, j, k], c[j, i, k] = v, -v
    with pytest.raises(UnsupportedSignatureError):
        lie.simple_ideal_decomposition(lie.MetricLieAlgebra(c), rng)


@pytest.mark.parametrize("alg,label,rank", [
    (lie.su2(), "A1", 1), (lie.su3(), "A2", 2), (lie.so(5), "B2", 2),
    (lie.su(4), "A3", 3), (lie.so(7), "B3", 3), (lie.sp(3), "C3", 3),
    (lie.so(8), "D4", 4),
], ids=lambda v: getattr(v, "name", str(v)))
def test_identify_type(alg, label, rank, rng):
    t = lie.identify_type(alg, rng)
    assert t.rank == rank and t.label == label


def test_identify_type_rotation_invariant(rng):
    q = lie.random_orthogonal(8, rng)
    assert lie.identify_type(lie.su3().transform(q), rng).label == "A2"


@given(st.integers(0, 2 ** 32 - 1))
def test_canonical_form_is_invariant(seed):
    from torsionkit.exterior import derivation_action
    alg = lie.su3().transform(lie.random_orthogonal(8, np.random.default_rng(seed)))
    omega = lie.canonical_three_form(alg)
    assert max(derivation_action(a, omega).norm() for a in alg.ad_basis()) < 1e-10


def test_center_and_jacobi():
    alg = lie.direct_sum(lie.su2(), lie.abelian(1))
    z = lie.center(alg)
    assert z.shape == (4, 1) and abs(abs(z[3, 0]) - 1.0) < 1e-12
    assert lie.jacobi_defect(lie.su3()) < 1e-13


def test_canonical_rejects_non_lie():
    c = np.zeros((3, 3, 3))
    c[0, 1, 0], c[1, 0, 0] = 1.0, -1.0
    c[0, 2, 2], c[2, 0, 2] = 1.0, -1.0
    c[1, 2, 0], c[2, 1, 0] = 1.0, -1.0
    alg = lie.MetricLieAlgebra(c)
    assert lie.jacobi_defect(alg) == pytest.approx(np.sqrt(2.0))
    assert lie.is_compact_type(alg) == lie.INVALID
    with pytest.raises(InvalidAlgebraError):
        lie.canonical_three_form(alg)
