import numpy as np
import pytest
from hypothesis import given, strategies as st

from torsionkit.errors import DegenerateDimensionError, DimensionMismatchError, InvariantViolationError
from torsionkit.exterior import KForm
from torsionkit.torsion import (TorsionTensor, classify_type, component_norms, decompose,
                                dimensions, embed_skew, embed_vectorial, endo_slices,
                                torsion_two_form, type_label)

import oracles


def random_torsion(rng, n):
    a = rng.normal(size=(n, n, n))
    return TorsionTensor(a - np.transpose(a, (0, 2, 1)))


@pytest.mark.parametrize("n,t2", [(2, 0), (3, 5), (4, 16), (5, 35)])
def test_dimensions(n, t2):
    d = dimensions(n)
    assert d["T2"] == t2
    assert d["T1"] + d["T2"] + d["T3"] == n * n * (n - 1) // 2


@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 7))
def test_matches_projection_oracle(seed, n):
    t = random_torsion(np.random.default_rng(seed), n)
    p1, p2, p3 = oracles.torsion_projections(t.array)
    a, b, c = decompose(t).components()
    scale = np.max(np.abs(t.array))
    assert np.max(np.abs(a.array - p1)) <= 1e-10 * scale
    assert np.max(np.abs(b.array - p2)) <= 1e-10 * scale
    assert np.max(np.abs(c.array - p3)) <= 1e-10 * scale


@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 8))
def test_components_orthogonal_and_reconstruct(seed, n):
    t = random_torsion(np.random.default_rng(seed), n)
    d = decompose(t)
    a, b, c = d.components()
    s = t.norm() ** 2
    for x, y in ((a, b), (a, c), (b, c)):
        assert abs(x.dot(y)) <= 1e-12 * s
    assert (d.reconstruct() - t).norm() <= 1e-12 * t.norm()
    assert a.norm() ** 2 + b.norm() ** 2 + c.norm() ** 2 == pytest.approx(s, rel=1e-12)


def test_pure_components_are_fixed(rng):
    xi = rng.normal(size=5)
    tau = KForm.from_tensor(oracles.full_tensor(5, 3, {(0, 1, 2): 1.0, (1, 3, 4): -2.0}))
    d = decompose(embed_vectorial(xi))
    assert np.allclose(d.vectorial.as_vector(), xi)
    assert d.twistorial.norm() < 1e-13 and d.skew.norm() < 1e-13
    d = decompose(embed_skew(tau))
    assert d.skew.allclose(tau) and d.vectorial.norm() < 1e-13


def test_twistorial_part_traceless_and_cyclic_free(rng):
    b = decompose(random_torsion(rng, 5)).twistorial.array
    assert np.max(np.abs(np.einsum("iib->b", b))) < 1e-12
    cyc = b + np.transpose(b, (1, 2, 0)) + np.transpose(b, (2, 0, 1))
    assert np.max(np.abs(cyc)) < 1e-12


def test_equivariance(rng):
    t = random_torsion(rng, 4)
    q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    rotated = TorsionTensor(np.einsum("ia,jb,kc,ijk->abc", q.T, q.T, q.T, t.array))
    assert component_norms(rotated) == pytest.approx(component_norms(t), rel=1e-12)


def test_classify_labels():
    xi = embed_vectorial([1.0, 0, 0, 0])
    tau = embed_skew(KForm.basis(4, 0, 1, 2))
    info = classify_type(xi + tau)
    assert info["label"] == "T1⊕T3" and info["twistor_free"]
    assert type_label(info) == "T1⊕T3 (twistor-free)"
    zero = classify_type(TorsionTensor.zero(3))
    assert zero["label"] == "zero" and zero["components"] == []


def test_twistor_like_label(rng):
    b = decompose(random_torsion(rng, 4)).twistorial
    info = classify_type(b)
    assert info["components"] == ["T2"] and type_label(info).endswith("(twistor-like)")


def test_n3_twistorial_dimension_by_rank():
    # rank of the T2 projector on R^3 (x) Lambda^2 R^3
    basis = []
    for i in range(3):
        for a, b in ((0, 1), (0, 2), (1, 2)):
            t = np.zeros((3, 3, 3))
            t[i, a, b], t[i, b, a] = 1.0, -1.0
            basis.append(decompose(TorsionTensor(t)).twistorial.array.ravel())
    assert np.linalg.matrix_rank(np.array(basis), tol=1e-9) == 5


def test_torsion_two_form(rng):
    t = random_torsion(rng, 3)
    x, y = rng.normal(size=(2, 3))
    tilde = torsion_two_form(t)
    assert np.allclose(tilde(x, y), -tilde(y, x))
    assert np.allclose(endo_slices(t)[0] @ y, t.endo(np.eye(3)[0]) @ y)


def test_errors():
    with pytest.raises(DegenerateDimensionError):
        decompose(TorsionTensor.zero(1))
    with pytest.raises(InvariantViolationError):
        TorsionTensor(np.ones((2, 2, 2)))
    with pytest.raises(DimensionMismatchError):
        TorsionTensor(np.zeros((2, 3, 3)))
    with pytest.raises(DimensionMismatchError):
        TorsionTensor.from_slices([KForm.zero(3, 2)])
