"""3-forms satisfying ``(tau_X)_* tau = 0`` and the Lie algebras they induce.

Defects are quadratic in ``tau``; every pass/fail decision compares
``defect / |tau|^2`` against the tolerance so that verdicts do not depend on
the overall scale of ``tau``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InternalConsistencyError, NotALieStructureError
from .exterior import (KForm, derivation_action, four_form_sum, kernel_complement,
                       kernel_of_threeform, slices)
from .lie import (MetricLieAlgebra, LieTypeLabel, cartan_rank, identify_type,
                  killing_form, simple_ideal_decomposition, _rng)

DEFECT_TOL = 1e-8
LEMMA_TOL = 1e-8

DIM3_VOLUME = "dim3-volume"
SIMPLE_ALGEBRA = "simple-algebra"


@dataclass(frozen=True)
class TauStructure:
    tau: KForm

    @property
    def dim(self) -> int:
        return self.tau.dim


def _as_form(s) -> KForm:
    return s.tau if isinstance(s, TauStructure) else s


def derivation_defect(tau: KForm) -> float:
    """``max_i |(tau_{e_i})_* tau|``."""
    tau = _as_form(tau)
    if tau.dim == 0:
        return 0.0
    return max(derivation_action(a, tau).norm() for a in slices(tau))


def commutator_defect(tau: KForm) -> float:
    """``max_{i,j} |[tau_i, tau_j] - tau_{tau_i e_j}|`` (2-form norm)."""
    tau = _as_form(tau)
    if tau.dim == 0:
        return 0.0
    s = slices(tau)
    comm = np.einsum("iab,jbc->ijac", s, s)
    comm = comm - np.transpose(comm, (1, 0, 2, 3))
    # tau_i e_j = s[i][:, j]; tau_{v} = sum_k v_k s[k]
    rhs = np.einsum("ikj,kab->ijab", s, s)
    diff = comm - rhs
    return float(np.max(np.sqrt(0.5 * np.sum(diff ** 2, axis=(2, 3)))))


def four_form_defect(tau: KForm) -> float:
    return four_form_sum(_as_form(tau)).norm()


def tau_jacobi_defect(s) -> float:
    return derivation_defect(_as_form(s))


def relative(defect: float, tau: KForm) -> float:
    nrm = _as_form(tau).norm()
    return 0.0 if nrm == 0.0 else defect / nrm ** 2


def jacobi_defects(s) -> dict:
    tau = _as_form(s)
    raw = {"derivation": derivation_defect(tau),
           "commutator": commutator_defect(tau),
           "four_form": four_form_defect(tau)}
    return {"raw": raw, "relative": {k: relative(v, tau) for k, v in raw.items()}}


def satisfies_tau_jacobi(s, tol: float = DEFECT_TOL) -> bool:
    tau = _as_form(s)
    return relative(derivation_defect(tau), tau) <= tol


def _require_jacobi(tau: KForm, tol: float) -> None:
    rel = relative(derivation_defect(tau), tau)
    if rel > tol:
        raise NotALieStructureError(
            f"tau-Jacobi defect {rel:.3e} (relative) exceeds {tol:.1e}", rel)


def lie_from_tau(s, tol: float = DEFECT_TOL, return_basis: bool = False):
    """The bracket ``[x, y] = tau_x y`` on ``ker(tau)^perp``.

    Structure constants are ``c_ij^k = tau(b_i, b_j, b_k)`` for the orthonormal
    basis ``b`` of the kernel complement (returned too if ``return_basis``).
    """
    tau = _as_form(s)
    _require_jacobi(tau, tol)
    basis = kernel_complement(tau)
    alg = MetricLieAlgebra(tau.restrict(basis).tensor if basis.shape[1] else
                           np.zeros((0, 0, 0)), "tau")
    return (alg, basis) if return_basis else alg


@dataclass(frozen=True)
class Brick:
    basis: np.ndarray
    dim: int
    rank: int
    label: LieTypeLabel
    scale: float
    case_tag: str


@dataclass(frozen=True)
class BrickReport:
    kernel_dim: int
    kernel_basis: np.ndarray
    bricks: list = field(default_factory=list)
    defects: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "pass" if all(v <= DEFECT_TOL for v in self.defects.values()) else "fail"


def _orientation_sign(ambient: KForm) -> float:
    # sign of the largest ambient coefficient; near-ties resolved by index order
    vals = ambient.values
    top = np.max(np.abs(vals))
    if top == 0.0:
        return 1.0
    first = int(np.flatnonzero(np.abs(vals) >= (1.0 - 1e-6) * top)[0])
    return float(np.sign(vals[first]))


def _brick_scale(local: KForm, ambient: KForm) -> float:
    """Signed scale of a brick's 3-form.

    dim 3: the coefficient against the volume form.  Otherwise ``sqrt(kappa)``
    where the induced algebra has Killing form ``-kappa * metric``; this is the
    factor relating ``tau`` to the structure 3-form of the Killing-normalized
    algebra.  The sign comes from the ambient frame (see ``_orientation_sign``).
    """
    sign = _orientation_sign(ambient)
    if local.dim == 3:
        return sign * abs(float(local.values[0]))
    alg = MetricLieAlgebra(local.tensor)
    kappa = -float(np.trace(killing_form(alg))) / local.dim
    return sign * float(np.sqrt(max(kappa, 0.0)))


def classify_bricks(s, tol: float = DEFECT_TOL, rng=None) -> BrickReport:
    tau = _as_form(s)
    rng = _rng(rng)
    _require_jacobi(tau, tol)
    n = tau.dim
    kernel = kernel_of_threeform(tau)
    alg, basis = lie_from_tau(tau, tol, return_basis=True)
    norm = tau.norm()
    defects = {"tau_jacobi": relative(derivation_defect(tau), tau),
               "four_form": relative(four_form_defect(tau), tau)}
    bricks = []
    remainder = tau
    if alg.dim:
        split = simple_ideal_decomposition(alg, rng)
        if split.center.shape[1]:
            raise InternalConsistencyError(
                "induced algebra has a center; rerun with a tighter rank cutoff")
        for ideal in split.ideals:
            amb_basis = basis @ ideal
            local = tau.restrict(amb_basis)
            ambient = local.push_forward(amb_basis)
            remainder = remainder - ambient
            sub = MetricLieAlgebra(local.tensor)
            d = amb_basis.shape[1]
            if d == 3:
                label, rank, tag = identify_type(sub, rng), 1, DIM3_VOLUME
            else:
                label = identify_type(sub, rng)
                rank, tag = label.rank, SIMPLE_ALGEBRA
            bricks.append(Brick(amb_basis, d, rank, label, _brick_scale(local, ambient), tag))
    cross = remainder.norm() / norm if norm else 0.0
    defects["cross_terms"] = cross
    if cross > tol:
        raise InternalConsistencyError(
            f"cross terms between bricks do not vanish ({cross:.3e}); "
            "rerun with a tighter rank cutoff")
    bricks.sort(key=lambda b: (-b.dim, -abs(b.scale), b.scale))
    return BrickReport(kernel.shape[1], kernel, bricks, defects)


# -- appendix lemmas ----------------------------------------------------------

@dataclass(frozen=True)
class LemmaCheck:
    holds: bool | None
    margin: float
    diagnostics: tuple = ()
    warnings: tuple = ()

    @property
    def verdict(self) -> str:
        if self.diagnostics:
            return "diagnostic"
        return "pass" if self.holds else "fail"


def invariance_defect(generators, tau: KForm) -> float:
    """``max_A |A_* tau| / (|A| |tau|)`` over the generators."""
    nrm = tau.norm()
    worst = 0.0
    for a in generators:
        a = np.asarray(a, dtype=float)
        size = np.linalg.norm(a) / np.sqrt(2.0)
        if size == 0.0 or nrm == 0.0:
            continue
        worst = max(worst, derivation_action(a, tau).norm() / (size * nrm))
    return worst


def span_residual(targets, spanning) -> float:
    """Max relative least-squares residual of each target against ``span(spanning)``."""
    targets = [np.asarray(t, dtype=float).ravel() for t in targets]
    worst = 0.0
    mat = np.array([np.asarray(s, dtype=float).ravel() for s in spanning]).T
    for t in targets:
        size = np.linalg.norm(t)
        if size == 0.0:
            continue
        if mat.size == 0:
            return 1.0
        coef, *_ = np.linalg.lstsq(mat, t, rcond=None)
        worst = max(worst, np.linalg.norm(mat @ coef - t) / size)
    return float(worst)


def alglemma_check(rho, s, tol: float = LEMMA_TOL) -> LemmaCheck:
    """Containment ``rho(h) in tau(V)`` for an invariant, kernel-free tau."""
    tau = _as_form(s)
    diagnostics = []
    if invariance_defect(rho, tau) > tol:
        diagnostics.append("invariance-failed")
    if kernel_of_threeform(tau).shape[1]:
        diagnostics.append("kernel-nontrivial")
    if relative(derivation_defect(tau), tau) > tol:
        diagnostics.append("jacobi-failed")
    if diagnostics:
        return LemmaCheck(None, float("nan"), tuple(diagnostics))
    margin = span_residual(rho, slices(tau))
    return LemmaCheck(margin <= tol, margin)


def commutant(generators, dim: int, tol: float = 1e-9) -> np.ndarray:
    """Basis (stacked matrices) of ``{M : [M, A] = 0 for all generators A}``."""
    if dim == 0:
        return np.zeros((0, 0, 0))
    gens = np.array([np.asarray(a, dtype=float) for a in generators]).reshape(-1, dim, dim)
    eye = np.eye(dim)
    cas = -np.einsum("iab,ibc->ac", gens, gens)
    # sum_i |[M, A_i]|^2 as a quadratic form on vec(M) (A_i skew)
    g = np.kron(eye, cas) + np.kron(cas, eye) - 2.0 * np.einsum(
        "iab,icd->acbd", gens, gens).reshape(dim * dim, dim * dim)
    w, v = np.linalg.eigh(0.5 * (g + g.T))
    top = np.max(np.abs(w))
    keep = np.abs(w) <= tol * top if top > 0.0 else np.ones(w.shape, dtype=bool)
    return v[:, keep].T.reshape(-1, dim, dim)


def commutant_dimension(generators, dim: int, tol: float = 1e-9) -> int:
    return int(commutant(generators, dim, tol).shape[0])


def is_irreducible(generators, dim: int, rng=None, tol: float = 1e-9) -> tuple:
    """``(irreducible, commutant dimension)``.

    By Schur the commutant of an irreducible orthogonal representation is
    R, C or H, so a generic element ``M`` satisfies ``M^T M = c I``; a
    reducible one has a commutant containing non-conformal elements.
    """
    basis = commutant(generators, dim, tol)
    k = basis.shape[0]
    if dim == 0 or k not in (1, 2, 4):
        return False, k
    coef = _rng(rng).normal(size=k)
    m = np.tensordot(coef, basis, axes=(0, 0))
    mtm = m.T @ m
    c = np.trace(mtm) / dim
    return bool(np.max(np.abs(mtm - c * np.eye(dim))) <= 1e-8 * c), k


def lemmalg_check(rho1, rho2, tau: KForm, tol: float = LEMMA_TOL) -> LemmaCheck:
    """Vanishing of ``tau(V1, V2, V2)`` for ``tau`` on ``V1 + V2`` (V1 first)."""
    tau = _as_form(tau)
    rho1 = [np.asarray(a, dtype=float) for a in rho1]
    rho2 = [np.asarray(a, dtype=float) for a in rho2]
    d1 = rho1[0].shape[0] if rho1 else 0
    d2 = rho2[0].shape[0] if rho2 else tau.dim - d1
    diagnostics, warnings = [], []
    if len(rho1) != len(rho2):
        diagnostics.append("generator-count-mismatch")
    if tau.dim != d1 + d2:
        diagnostics.append("dimension-mismatch")
    if diagnostics:
        return LemmaCheck(None, float("nan"), tuple(diagnostics))

    irreducible, comm = is_irreducible(rho1, d1)
    if not irreducible:
        diagnostics.append("not-irreducible")
    elif comm in (2, 4):
        warnings.append(f"commutant-dimension-{comm}")

    r1 = np.array([a.ravel() for a in rho1]).T.reshape(d1 * d1, -1)
    r2 = np.array([a.ravel() for a in rho2]).T.reshape(d2 * d2, len(rho2))
    if r2.size:
        _, sv, vt = np.linalg.svd(r2)
        rank = int(np.sum(sv > 1e-9 * sv[0])) if sv.size and sv[0] > 0 else 0
        kernel = vt[rank:].T
    else:
        kernel = np.eye(len(rho1))
    scale1 = np.linalg.norm(r1)
    if scale1 == 0.0 or kernel.shape[1] == 0 or np.linalg.norm(r1 @ kernel) <= 1e-9 * scale1:
        diagnostics.append("no-separating-element")

    blocks = []
    for a, b in zip(rho1, rho2):
        m = np.zeros((d1 + d2, d1 + d2))
        m[:d1, :d1], m[d1:, d1:] = a, b
        blocks.append(m)
    if invariance_defect(blocks, tau) > tol:
        diagnostics.append("invariance-failed")
    if diagnostics:
        return LemmaCheck(None, float("nan"), tuple(diagnostics), tuple(warnings))

    nrm = tau.norm()
    mixed = tau.tensor[:d1, d1:, d1:] if d1 and d2 else np.zeros(0)
    margin = float(np.max(np.abs(mixed), initial=0.0)) / nrm if nrm else 0.0
    return LemmaCheck(margin <= tol, margin, (), tuple(warnings))


def rank_of(alg: MetricLieAlgebra, rng=None) -> int:
    return cartan_rank(alg, rng)
