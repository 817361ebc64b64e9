"""Frame-level checks on ``M = N x R`` with ``g_M = e^{2t} g_N + dt^2``.

``N`` is a compact-type Lie group with bi-invariant metric, modelled by its
structure constants.  Frame on ``M``: ``f_0 = d/dt`` and ``f_i = e^{-t} E_i``
with ``E_i`` the invariant orthonormal frame of ``N``; index 0 is ``xi``.
All fields involved have coefficients ``const * e^{rate * t}`` in this frame,
so every identity reduces to finite algebra at each sampled ``t``.

Connection coefficients: ``gamma[a, b, c] = <nabla_{f_a} f_b, f_c>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exterior import (KForm, contract, derivation_action, four_form_sum, threeform_slice,
                       two_form_to_endo, wedge)
from .lie import MetricLieAlgebra, _require_compact, canonical_three_form
from .tau import derivation_defect, relative

FRAME_EXP = -1      # f_i = e^{FRAME_EXP t} E_i
NU_EXP = 3          # nu = e^{NU_EXP t} tau
PARALLEL_TOL = 1e-8
CONFORMAL_TOL = 1e-10
DEFAULT_T = tuple(np.linspace(-2.0, 2.0, 50))


@dataclass(frozen=True, eq=False)
class WarpedModel:
    base: MetricLieAlgebra
    tau_scale: float = 1.0
    t_samples: tuple = field(default=DEFAULT_T)
    exponent: int = NU_EXP

    def __post_init__(self):
        _require_compact(self.base)
        tau = self.tau
        if relative(derivation_defect(tau), tau) > 1e-10:
            raise ValueError("canonical 3-form of the base fails the tau-Jacobi condition")
        object.__setattr__(self, "t_samples", tuple(float(t) for t in self.t_samples))

    @property
    def n(self) -> int:
        return self.base.dim + 1

    @property
    def tau(self) -> KForm:
        """``tau_scale`` times the canonical form, in the frame ``E``."""
        return canonical_three_form(self.base) * self.tau_scale

    def embedding(self) -> np.ndarray:
        return np.eye(self.n)[:, 1:]

    def nu(self, t: float) -> KForm:
        """Frame coefficients of ``nu = e^{3t} tau`` at ``t``."""
        return self.tau.push_forward(self.embedding()) * np.exp(self.rate * t)

    @property
    def rate(self) -> int:
        return form_rate(3, self.exponent)

    def xi(self) -> np.ndarray:
        return np.eye(self.n)[0]


def form_rate(degree: int, exponent: int = NU_EXP) -> int:
    """Growth rate of the frame coefficients of ``e^{exponent t} sigma``."""
    # E^i = e^{FRAME_EXP t} f^i
    return exponent + degree * FRAME_EXP


def structure_functions(model: WarpedModel, t: float) -> np.ndarray:
    """``C[a, b, c]`` with ``[f_a, f_b] = sum_c C[a, b, c] f_c``."""
    n = model.n
    c = np.zeros((n, n, n))
    # [E_i, E_j] = c_ij^k E_k  ->  [f_i, f_j] = e^{FRAME_EXP t} c_ij^k f_k
    c[1:, 1:, 1:] = np.exp(FRAME_EXP * t) * model.base.structure
    # [d/dt, e^{FRAME_EXP t} E_i] = FRAME_EXP f_i
    for i in range(1, n):
        c[0, i, i] = FRAME_EXP
        c[i, 0, i] = -FRAME_EXP
    return c


def levi_civita(c: np.ndarray) -> np.ndarray:
    """Koszul formula in an orthonormal frame."""
    # C[a,b,c] - C[b,c,a] + C[c,a,b]
    return 0.5 * (c - np.transpose(c, (2, 0, 1)) + np.transpose(c, (1, 2, 0)))


@dataclass(frozen=True, eq=False)
class FrameConnection:
    gamma: np.ndarray
    t: float = 0.0

    def matrices(self) -> np.ndarray:
        """``out[a][c, b] = gamma[a, b, c]``, so ``nabla_{f_a} V = f_a(V) + out[a] @ V``."""
        return np.transpose(self.gamma, (0, 2, 1))

    def metric_residual(self) -> float:
        g = self.gamma
        return float(np.max(np.abs(g + np.transpose(g, (0, 2, 1))), initial=0.0))


@dataclass(frozen=True)
class BaseConnection:
    gamma: np.ndarray
    nabla_tau: float
    tau_jacobi: float


def base_connection(base: MetricLieAlgebra) -> BaseConnection:
    _require_compact(base)
    gamma = levi_civita(base.structure)
    conn = FrameConnection(gamma)
    tau = canonical_three_form(base)
    nabla = max((derivation_action(m, tau).norm() for m in conn.matrices()), default=0.0)
    return BaseConnection(gamma, nabla, derivation_defect(tau))


def warped_connection(model: WarpedModel, t: float) -> FrameConnection:
    return FrameConnection(levi_civita(structure_functions(model, t)), float(t))


def warped_residuals(conn: FrameConnection) -> dict:
    """(a) ``nabla_{f_i} xi = f_i``, (b) ``nabla_{f_0} xi = 0``, (c) each slice has
    second fundamental form ``-<nabla_{f_i} f_j, xi> = delta_ij``."""
    m = conn.matrices()
    n = m.shape[0]
    eye = np.eye(n)
    a = max((np.linalg.norm(m[i][:, 0] - eye[i]) for i in range(1, n)), default=0.0)
    b = float(np.linalg.norm(m[0][:, 0]))
    second = -m[1:, 0, 1:]
    c = float(np.max(np.abs(second - np.eye(n - 1)), initial=0.0))
    return {"a": float(a), "b": b, "c": c, "metric": conn.metric_residual()}


def torsion_endos(model: WarpedModel, t: float) -> np.ndarray:
    """``out[a] = f_a ^ xi + nu_{f_a}`` as skew endomorphisms."""
    n = model.n
    xi = KForm.from_vector(model.xi())
    nu = model.nu(t)
    eye = np.eye(n)
    return np.stack([two_form_to_endo(wedge(KForm.from_vector(eye[a]), xi)) +
                     threeform_slice(nu, eye[a]) for a in range(n)])


def _nabla_form(mats, a: int, sigma: KForm, rate: float) -> KForm:
    # coefficients vary only along f_0, at rate ``rate``
    out = derivation_action(mats[a], sigma)
    return out + sigma * rate if a == 0 else out


def check_connection_parallel(model: WarpedModel) -> dict:
    """Max over frame directions of ``|nabla xi|`` and ``|nabla nu|`` at each sample."""
    xi_res, nu_res = [], []
    rate = model.rate
    for t in model.t_samples:
        mats = warped_connection(model, t).matrices() + torsion_endos(model, t)
        nu = model.nu(t)
        xi_res.append(max(float(np.linalg.norm(m @ model.xi())) for m in mats))
        nu_res.append(max(_nabla_form(mats, a, nu, rate).norm() for a in range(model.n)))
    return {"t": list(model.t_samples), "xi": xi_res, "nu": nu_res,
            "max_xi": max(xi_res, default=0.0), "max_nu": max(nu_res, default=0.0)}


def frame_d(sigma: KForm, rate: float, c: np.ndarray) -> KForm:
    """Exterior derivative from structure functions:
    ``d sigma = sum_a f^a ^ f_a(sigma) + sum_c df^c ^ (f_c _| sigma)``,
    ``df^c(f_a, f_b) = -C[a, b, c]``."""
    n = sigma.dim
    eye = np.eye(n)
    out = wedge(KForm.from_vector(eye[0]), sigma * rate)
    if sigma.degree == 0:
        return out
    for k in range(n):
        dfk = KForm.from_tensor(-c[:, :, k])
        out = out + wedge(dfk, contract(eye[k], sigma))
    return out


def levi_civita_d(sigma: KForm, rate: float, conn: FrameConnection) -> KForm:
    """``d sigma = sum_a f^a ^ nabla_{f_a} sigma`` (torsion-free cross-check)."""
    mats = conn.matrices()
    eye = np.eye(sigma.dim)
    out = KForm.zero(sigma.dim, sigma.degree + 1)
    for a in range(sigma.dim):
        out = out + wedge(KForm.from_vector(eye[a]), _nabla_form(mats, a, sigma, rate))
    return out


def check_elemprop(model: WarpedModel) -> dict:
    """Per-sample residuals of ``nu_xi = 0``, ``d xi = 0``,
    ``sum nu_{f_a} ^ nu_{f_a} = 0``, ``d nu = 3 xi ^ nu``, ``L_xi nu = 3 nu``,
    ``nabla_X xi = X - eta(X) xi`` and the two-way check on ``d nu``."""
    keys = ("nu_xi", "d_xi", "four_form", "d_nu", "lie_xi", "formxi", "d_crosscheck")
    out = {k: [] for k in keys}
    rate = model.rate
    xi_vec = model.xi()
    eta = KForm.from_vector(xi_vec)
    eye = np.eye(model.n)
    for t in model.t_samples:
        c = structure_functions(model, t)
        conn = FrameConnection(levi_civita(c), t)
        nu = model.nu(t)
        nu_xi = contract(xi_vec, nu)
        dnu = frame_d(nu, rate, c)
        lie = frame_d(nu_xi, rate, c) + contract(xi_vec, dnu)
        mats = conn.matrices()
        out["nu_xi"].append(nu_xi.norm())
        out["d_xi"].append(frame_d(eta, 0.0, c).norm())
        out["four_form"].append(four_form_sum(nu).norm())
        out["d_nu"].append((dnu - wedge(eta, nu) * 3.0).norm())
        out["lie_xi"].append((lie - nu * 3.0).norm())
        out["formxi"].append(max(float(np.linalg.norm(mats[a] @ xi_vec - (eye[a] - eye[a][0] * xi_vec)))
                                 for a in range(model.n)))
        out["d_crosscheck"].append((dnu - levi_civita_d(nu, rate, conn)).norm())
    out["t"] = list(model.t_samples)
    out["max"] = {k: max(out[k], default=0.0) for k in keys}
    return out


def conformal_check(model: WarpedModel, t: float) -> dict:
    """``e^t xi`` for the metric ``e^{-2t} g_M = g_N + e^{-2t} dt^2``.

    ``direct``: Koszul in the rescaled frame ``e^t f_a``.  ``formula``: the
    conformal-change rule applied to the warped coefficients.
    """
    n = model.n
    phi = np.exp(t)
    c = structure_functions(model, t)
    eye = np.eye(n)
    # [e^t f_a, e^t f_b] = e^t (C_ab^c + d_a0 d_bc - d_b0 d_ac) e^t f_c
    shift = np.einsum("a,bc->abc", eye[0], eye) - np.einsum("b,ac->abc", eye[0], eye)
    tilde = levi_civita(phi * (c + shift))
    direct = float(np.max(np.abs(tilde[:, 0, :]), initial=0.0))
    # nabla~_X Y = nabla_X Y - eta(X) Y - eta(Y) X + g(X, Y) xi with Y = e^t xi
    mats = warped_connection(model, t).matrices()
    worst = 0.0
    for a in range(n):
        y = phi * eye[0]
        val = eye[a][0] * y + mats[a] @ y - eye[a][0] * y - y[0] * eye[a] + y[a] * eye[0]
        worst = max(worst, float(np.linalg.norm(val)))
    return {"direct": direct, "formula": worst}


def scale_sweep(base: MetricLieAlgebra, scales, t_samples=DEFAULT_T) -> list:
    """``max |nabla nu|`` for each candidate ``tau_scale``."""
    return [check_connection_parallel(WarpedModel(base, float(s), t_samples))["max_nu"]
            for s in scales]
