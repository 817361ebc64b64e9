"""Type II and type IV symmetric pairs, their invariant 3-forms, and the
maps that rebuild ``g`` from ``(h, lambda, tau)``.

Coordinates: a model's ``h_basis`` and ``m_basis`` are orthonormal column
bases inside ``g``.  Everything attached to a triple (``lambda``, ``tau``,
``phi``) is written in those bases.  ``psi`` is the matrix of the standard
isomorphism ``h -> m`` in the same coordinates, and ``psi_scale`` is
``|psi(X)| / |X|`` for the abstract map before normalization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .exterior import KForm, derivation_action, slices
from .lie import (COMPACT_SEMISIMPLE, MetricLieAlgebra, _rng, canonical_three_form,
                  direct_sum, is_compact_type, killing_form, simple_ideal_decomposition)

MODEL_TOL = 1e-10
PHI_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SymmetricPairModel:
    g: MetricLieAlgebra
    h_basis: np.ndarray
    m_basis: np.ndarray
    epsilon: int
    psi: np.ndarray
    psi_scale: float
    kind: str

    @property
    def m(self) -> int:
        return self.h_basis.shape[1]

    @property
    def h(self) -> MetricLieAlgebra:
        return self.g.restrict(self.h_basis)

    def isotropy(self) -> np.ndarray:
        """``out[a] = lambda(A_a)``: ``ad(A_a)`` restricted to ``m``."""
        return np.stack([self.m_basis.T @ self.g.ad(a) @ self.m_basis for a in self.h_basis.T])


@dataclass(frozen=True, eq=False)
class SymmetricTriple:
    h: MetricLieAlgebra
    lam: np.ndarray
    tau: KForm
    epsilon: int

    def residuals(self) -> dict:
        lam = self.lam
        comm = np.einsum("aij,bjk->abik", lam, lam)
        comm = comm - np.transpose(comm, (1, 0, 2, 3))
        rep = np.einsum("abc,cik->abik", self.h.structure, lam)
        inv = max((derivation_action(a, self.tau).norm() for a in lam), default=0.0)
        return {"representation": float(np.max(np.abs(comm - rep), initial=0.0)),
                "invariance": inv}


def _require_simple(h: MetricLieAlgebra) -> None:
    if is_compact_type(h) != COMPACT_SEMISIMPLE:
        raise PreconditionError(f"{h.name or 'algebra'} is not compact semisimple")
    if len(simple_ideal_decomposition(h, _rng(None)).ideals) != 1:
        raise PreconditionError(f"{h.name or 'algebra'} is not simple")


def complexification(h: MetricLieAlgebra) -> MetricLieAlgebra:
    """``h + i h`` on ``h (+) h``: ``[(A,B),(A',B')] = ([A,A']-[B,B'], [A,B']+[B,A'])``."""
    m = h.dim
    c = np.zeros((2 * m, 2 * m, 2 * m))
    s = h.structure
    c[:m, :m, :m] = s
    c[:m, m:, m:] = s
    c[m:, :m, m:] = s
    c[m:, m:, :m] = -s
    return MetricLieAlgebra(c, f"{h.name}(C)")


def build_type_II(h: MetricLieAlgebra) -> SymmetricPairModel:
    _require_simple(h)
    m = h.dim
    eye = np.eye(m)
    hb = np.vstack([eye, eye]) / np.sqrt(2.0)
    mb = np.vstack([eye, -eye]) / np.sqrt(2.0)
    return SymmetricPairModel(direct_sum(h, h), hb, mb, -1, np.eye(m), np.sqrt(2.0), "II")


def build_type_IV(h: MetricLieAlgebra) -> SymmetricPairModel:
    _require_simple(h)
    m = h.dim
    eye, zero = np.eye(m), np.zeros((m, m))
    return SymmetricPairModel(complexification(h), np.vstack([eye, zero]),
                              np.vstack([zero, eye]), 1, np.eye(m), 1.0, "IV")


def model_residuals(p: SymmetricPairModel) -> dict:
    """Inclusions ``[h,h] in h``, ``[m,m] in h``, ``[h,m] in m``, the epsilon
    identity, ``h perp m`` and ``B_g(h, m) = 0``."""
    g, hb, mb = p.g, p.h_basis, p.m_basis
    c = g.structure
    hh = np.einsum("ia,jb,ijk->abk", hb, hb, c, optimize=True)
    mm = np.einsum("ia,jb,ijk->abk", mb, mb, c, optimize=True)
    hm = np.einsum("ia,jb,ijk->abk", hb, mb, c, optimize=True)
    # <[X, Y], A> - eps <Y, [X, A]>
    xya = np.einsum("abk,kc->abc", mm, hb)
    yxa = np.einsum("acl,lb->abc", np.einsum("ia,jc,ijk->ack", mb, hb, c, optimize=True), mb)
    b = killing_form(g)
    return {
        "hh_in_h": float(np.max(np.abs(hh @ mb), initial=0.0)),
        "mm_in_h": float(np.max(np.abs(mm @ mb), initial=0.0)),
        "hm_in_m": float(np.max(np.abs(hm @ hb), initial=0.0)),
        "epsilon": float(np.max(np.abs(xya - p.epsilon * yxa), initial=0.0)),
        "orthogonal": float(np.max(np.abs(hb.T @ mb), initial=0.0)),
        "killing_hm": float(np.max(np.abs(hb.T @ b @ mb), initial=0.0)),
    }


def killing_on_m(p: SymmetricPairModel) -> tuple:
    """``(k, residual)`` with ``B_g|_m ~= k <.,.>``."""
    bm = p.m_basis.T @ killing_form(p.g) @ p.m_basis
    k = float(np.trace(bm)) / p.m
    return k, float(np.max(np.abs(bm - k * np.eye(p.m))))


def example_tau(p: SymmetricPairModel) -> KForm:
    """Canonical form of ``h`` pulled back to ``m`` through ``psi^-1``."""
    psi = np.asarray(p.psi, dtype=float)
    if np.linalg.cond(psi) > 1e12:
        raise PreconditionError("psi is singular")
    inv = np.linalg.inv(psi)
    omega = canonical_three_form(p.h).tensor
    t = np.einsum("ijk,ia,jb,kc->abc", omega, inv, inv, inv, optimize=True)
    return KForm.from_tensor(t)


def triple(p: SymmetricPairModel) -> SymmetricTriple:
    return SymmetricTriple(p.h, p.isotropy(), example_tau(p), p.epsilon)


def g_from_triple(t: SymmetricTriple) -> MetricLieAlgebra:
    """Bracket on ``h (+) m``; the ``m x m`` part is forced by the epsilon identity:
    ``<[X, Y], A_c> = -eps <lambda(A_c) X, Y>``."""
    m = t.h.dim
    c = np.zeros((2 * m, 2 * m, 2 * m))
    lam = t.lam
    c[:m, :m, :m] = t.h.structure
    hx = np.transpose(lam, (0, 2, 1))        # [A_a, e_x] = sum_y lam[a, y, x] e_y
    c[:m, m:, m:] = hx
    c[m:, :m, m:] = -np.transpose(hx, (1, 0, 2))
    c[m:, m:, :m] = -t.epsilon * np.transpose(lam, (2, 1, 0))
    return MetricLieAlgebra(c, "g")


@dataclass(frozen=True)
class PhiRecovery:
    phi: np.ndarray
    scale: float
    residuals: dict


def recover_phi(t: SymmetricTriple, tol: float = PHI_TOL) -> PhiRecovery:
    """Solve ``tau(phi(A)) = lambda(A)`` and normalize ``phi`` to an isometry."""
    m = t.h.dim
    tmat = slices(t.tau).reshape(m, -1).T if m else np.zeros((0, 0))
    sv = np.linalg.svd(tmat, compute_uv=False)
    if sv.size < m or sv[-1] <= 1e-9 * sv[0]:
        raise PreconditionError("tau is not injective as a map m -> Lambda^2 m")
    lam = t.lam.reshape(m, -1).T
    sol, *_ = np.linalg.lstsq(tmat, lam, rcond=None)
    contain = float(np.max(np.linalg.norm(tmat @ sol - lam, axis=0) /
                           np.maximum(np.linalg.norm(lam, axis=0), 1e-300)))
    if contain > tol:
        raise PreconditionError(
            f"lemma hypothesis fails: lambda(h) not inside tau(m) (residual {contain:.3e})")
    scale = float(np.sqrt(np.trace(sol.T @ sol) / m))
    phi = sol / scale
    res = phi_residuals(t, phi)
    res["containment"] = contain
    return PhiRecovery(phi, scale, res)


def phi_residuals(t: SymmetricTriple, phi) -> dict:
    g = g_from_triple(t)
    m = t.h.dim
    phi = np.asarray(phi, dtype=float)
    emb = np.zeros((2 * m, m))
    emb[m:] = phi
    hs = np.vstack([np.eye(m), np.zeros((m, m))])
    c = g.structure
    # [phi(A), B] vs phi([A, B]) and [phi(A), phi(B)] vs -eps [A, B]
    lhs1 = np.einsum("ia,jb,ijk->abk", emb, hs, c, optimize=True)
    rhs1 = np.einsum("abc,kc->abk", t.h.structure, emb)
    lhs2 = np.einsum("ia,jb,ijk->abk", emb, emb, c, optimize=True)
    rhs2 = -t.epsilon * np.einsum("abc,kc->abk", t.h.structure, hs)
    return {"id1": float(np.max(np.abs(lhs1 - rhs1), initial=0.0)),
            "ident": float(np.max(np.abs(lhs2 - rhs2), initial=0.0)),
            "isometry": float(np.max(np.abs(phi.T @ phi - np.eye(m)), initial=0.0))}


@dataclass(frozen=True)
class PsiMap:
    iso: np.ndarray
    defect: float
    domain: MetricLieAlgebra
    target: MetricLieAlgebra


def build_psi_maps(t: SymmetricTriple, phi, epsilon: int) -> PsiMap:
    """``Psi_-(A, B) = (A + B + phi(A - B)) / 2`` on ``h (+) h`` when ``epsilon = -1``;
    ``Psi_+(A + iB) = A + phi(B)`` on the complexification when ``epsilon = +1``."""
    m = t.h.dim
    phi = np.asarray(phi, dtype=float)
    eye = np.eye(m)
    target = g_from_triple(SymmetricTriple(t.h, t.lam, t.tau, epsilon))
    if epsilon == -1:
        domain = direct_sum(t.h, t.h)
        iso = 0.5 * np.block([[eye, eye], [phi, -phi]])
    elif epsilon == 1:
        domain = complexification(t.h)
        iso = np.block([[eye, np.zeros((m, m))], [np.zeros((m, m)), phi]])
    else:
        raise PreconditionError(f"epsilon must be -1 or +1, got {epsilon}")
    # Psi([u, v]) - [Psi u, Psi v] over basis pairs
    left = np.einsum("uvk,ak->uva", domain.structure, iso)
    right = np.einsum("iu,jv,ijk->uvk", iso, iso, target.structure, optimize=True)
    defect = float(np.max(np.linalg.norm(left - right, axis=2), initial=0.0))
    return PsiMap(iso, defect, domain, target)
