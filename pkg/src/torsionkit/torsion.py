"""O(n)-decomposition of torsion tensors ``T in R^n (x) Lambda^2 R^n``.

A torsion tensor is stored as an array ``T[i, a, b] = T(e_i)(e_a, e_b)``,
antisymmetric in the last two slots; slice ``i`` is the 2-form ``T(e_i)``,
equivalently the skew endomorphism ``T_{e_i}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import DegenerateDimensionError, DimensionMismatchError, InvariantViolationError
from .exterior import KForm, two_form_to_endo

DEFAULT_TYPE_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class TorsionTensor:
    array: np.ndarray

    def __post_init__(self):
        t = np.array(self.array, dtype=float)
        if t.ndim != 3 or not (t.shape[0] == t.shape[1] == t.shape[2]):
            raise DimensionMismatchError(f"torsion array must be (n, n, n), got {t.shape}")
        if np.max(np.abs(t + np.transpose(t, (0, 2, 1))), initial=0.0) > \
                1e-12 * max(1.0, np.max(np.abs(t), initial=0.0)):
            raise InvariantViolationError("torsion slices must be 2-forms")
        t.setflags(write=False)
        object.__setattr__(self, "array", t)

    @classmethod
    def from_slices(cls, forms) -> "TorsionTensor":
        forms = list(forms)
        n = len(forms)
        for f in forms:
            if f.degree != 2 or f.dim != n:
                raise DimensionMismatchError("need n 2-forms on an n-dimensional space")
        if n == 0:
            return cls(np.zeros((0, 0, 0)))
        return cls(np.stack([f.tensor for f in forms]))

    @classmethod
    def zero(cls, n: int) -> "TorsionTensor":
        return cls(np.zeros((n, n, n)))

    @property
    def dim(self) -> int:
        return self.array.shape[0]

    @property
    def slices(self) -> list:
        return [KForm.from_tensor(s) for s in self.array]

    def endo(self, x) -> np.ndarray:
        """``T_x`` as a skew endomorphism."""
        return np.tensordot(np.asarray(x, dtype=float), self.array, axes=(0, 0)).T

    def __call__(self, x, y, z) -> float:
        return float(np.einsum("iab,i,a,b->", self.array, x, y, z))

    def __add__(self, other):
        return TorsionTensor(self.array + other.array)

    def __sub__(self, other):
        return TorsionTensor(self.array - other.array)

    def __mul__(self, s):
        return TorsionTensor(float(s) * self.array)

    __rmul__ = __mul__

    def dot(self, other) -> float:
        # sum over slices of the Lambda^2 inner product
        return 0.5 * float(np.sum(self.array * other.array))

    def norm(self) -> float:
        return float(np.sqrt(max(self.dot(self), 0.0)))


@dataclass(frozen=True)
class TorsionDecomposition:
    vectorial: KForm
    twistorial: TorsionTensor
    skew: KForm
    residual_norm: float

    def components(self):
        return embed_vectorial(self.vectorial), self.twistorial, embed_skew(self.skew)

    def reconstruct(self) -> TorsionTensor:
        a, b, c = self.components()
        return a + b + c


def embed_vectorial(xi) -> TorsionTensor:
    """``xi -> sum_i e_i (x) (e_i ^ xi)``."""
    xi = xi.as_vector() if isinstance(xi, KForm) else np.asarray(xi, dtype=float)
    n = xi.shape[0]
    eye = np.eye(n)
    # (e_i ^ xi)[a, b] = delta_ia xi_b - delta_ib xi_a
    t = np.einsum("ia,b->iab", eye, xi) - np.einsum("ib,a->iab", eye, xi)
    return TorsionTensor(t)


def embed_skew(tau: KForm) -> TorsionTensor:
    """``tau -> sum_i e_i (x) (e_i _| tau)``."""
    return TorsionTensor(np.array(tau.tensor))


def torsion_two_form(t: TorsionTensor):
    """The map ``(x, y) -> T_x y - T_y x``."""
    def tilde(x, y):
        return t.endo(x) @ np.asarray(y, dtype=float) - t.endo(y) @ np.asarray(x, dtype=float)
    return tilde


def vectorial_part(t: TorsionTensor) -> np.ndarray:
    n = t.dim
    if n < 2:
        raise DegenerateDimensionError("torsion decomposition needs n >= 2")
    # sum_i e_i _| T(e_i), then undo the factor n - 1 of the inclusion
    return np.einsum("iib->b", t.array) / (n - 1)


def skew_part(t: TorsionTensor) -> KForm:
    a = t.array
    alt = (a + np.transpose(a, (1, 2, 0)) + np.transpose(a, (2, 0, 1))) / 3.0
    return KForm.from_tensor(alt)


def decompose(t: TorsionTensor) -> TorsionDecomposition:
    xi = vectorial_part(t)
    tau = skew_part(t)
    twist = t - embed_vectorial(xi) - embed_skew(tau)
    vec = KForm.from_vector(xi)
    recon = embed_vectorial(xi) + twist + embed_skew(tau)
    return TorsionDecomposition(vec, twist, tau, (recon - t).norm())


def dimensions(n: int) -> dict:
    """Dimensions of the three O(n)-summands of ``R^n (x) Lambda^2 R^n``."""
    total = n * n * (n - 1) // 2
    return {"T1": n, "T2": total - n - comb(n, 3), "T3": comb(n, 3)}


def component_norms(t: TorsionTensor) -> dict:
    d = decompose(t)
    a, b, c = d.components()
    return {"T1": a.norm(), "T2": b.norm(), "T3": c.norm()}


def classify_type(t: TorsionTensor, tol: float = DEFAULT_TYPE_TOL) -> dict:
    """Which of T1, T2, T3 are present, relative to ``tol * |T|``.

    Returns a dict with ``components`` (sorted list, empty for the zero
    tensor), ``label`` (e.g. ``"T1⊕T3"`` or ``"zero"``), and the flags
    ``twistor_free`` / ``twistor_like``.
    """
    total = t.norm()
    if total == 0.0:
        return {"components": [], "label": "zero", "twistor_free": False,
                "twistor_like": False, "norms": {"T1": 0.0, "T2": 0.0, "T3": 0.0}}
    norms = component_norms(t)
    present = [k for k in ("T1", "T2", "T3") if norms[k] > tol * total]
    return {
        "components": present,
        "label": "⊕".join(present) if present else "zero",
        "twistor_free": "T2" not in present,
        "twistor_like": present == ["T2"],
        "norms": norms,
    }


def type_label(info: dict) -> str:
    label = info["label"]
    if info["twistor_free"]:
        return f"{label} (twistor-free)"
    if info["twistor_like"]:
        return f"{label} (twistor-like)"
    return label


def endo_slices(t: TorsionTensor) -> np.ndarray:
    """``out[i] = T_{e_i}`` as skew matrices."""
    return np.stack([two_form_to_endo(s) for s in t.slices]) if t.dim else np.zeros((0, 0, 0))
