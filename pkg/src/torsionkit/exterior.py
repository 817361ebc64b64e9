"""Exterior algebra of a Euclidean space in a fixed orthonormal frame.

Forms are stored by their coefficients on the basis ``e_I = e_i1 ^ ... ^ e_ik``
with ``i1 < ... < ik`` (0-based), ordered lexicographically.  With this
normalization the coefficient vectors are orthonormal, so the inner product of
two forms is the dot product of their coefficient vectors.  The full
antisymmetric tensor ``t[i1, ..., ik] = form(e_i1, ..., e_ik)`` is built on
demand for the numerical kernels.

Skew-symmetric endomorphisms are plain ``(n, n)`` arrays acting on column
vectors.  The 2-form ``w`` corresponds to the endomorphism ``A`` with
``<A x, y> = w(x, y)``; in particular ``(x ^ y) z = <x, z> y - <y, z> x``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import comb
from typing import Mapping

import numpy as np

from .errors import DegreeError, DimensionMismatchError, InvariantViolationError

MAX_DIM = 32
TOL = 1e-9
TOL_SKEW = 1e-12
TOL_RANK = 1e-9


@lru_cache(maxsize=None)
def _combos(n: int, k: int) -> np.ndarray:
    idx = np.array(list(itertools.combinations(range(n), k)), dtype=np.intp)
    return idx.reshape(comb(n, k), k)


@lru_cache(maxsize=None)
def _index_of(n: int, k: int) -> dict:
    return {tuple(int(i) for i in row): pos for pos, row in enumerate(_combos(n, k))}


def permutation_sign(seq) -> int:
    """Sign of the permutation sorting ``seq`` (0 if it has repeats)."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    inversions = sum(1 for a, b in itertools.combinations(seq, 2) if a > b)
    return -1 if inversions % 2 else 1


@lru_cache(maxsize=None)
def _perms(k: int):
    return [(p, permutation_sign(p)) for p in itertools.permutations(range(k))]


@lru_cache(maxsize=None)
def _shuffles(k: int, l: int):
    """Transpose axes and signs for the (k, l)-shuffles."""
    out = []
    for first in itertools.combinations(range(k + l), k):
        rest = [p for p in range(k + l) if p not in first]
        order = list(first) + rest
        axes = [0] * (k + l)
        for src, pos in enumerate(order):
            axes[pos] = src
        out.append((tuple(axes), permutation_sign(order)))
    return out


def _check_dim(n: int) -> None:
    if not 0 <= n <= MAX_DIM:
        raise DimensionMismatchError(f"dimension {n} outside supported range 0..{MAX_DIM}")


@dataclass(frozen=True, eq=False)
class KForm:
    dim: int
    degree: int
    values: np.ndarray

    def __post_init__(self):
        _check_dim(self.dim)
        if self.degree < 0:
            raise DegreeError(f"negative degree {self.degree}")
        vals = np.array(self.values, dtype=float).reshape(-1)
        if vals.shape[0] != comb(self.dim, self.degree):
            raise DimensionMismatchError(
                f"expected {comb(self.dim, self.degree)} coefficients, got {vals.shape[0]}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, dim: int, degree: int) -> "KForm":
        return cls(dim, degree, np.zeros(comb(dim, degree)))

    @classmethod
    def from_coeffs(cls, dim: int, degree: int, coeffs: Mapping) -> "KForm":
        """Build from ``{(i1, ..., ik): value}`` with strictly increasing 0-based indices."""
        _check_dim(dim)
        index = _index_of(dim, degree)
        vals = np.zeros(len(index))
        for key, value in coeffs.items():
            key = tuple(int(i) for i in key)
            if key not in index:
                raise DegreeError(f"multi-index {key} is not strictly increasing in range "
                                  f"for degree {degree}, dim {dim}")
            vals[index[key]] = float(value)
        return cls(dim, degree, vals)

    @classmethod
    def from_tensor(cls, t) -> "KForm":
        """Read coefficients off an antisymmetric tensor (no antisymmetrization is done)."""
        t = np.asarray(t, dtype=float)
        k = t.ndim
        n = t.shape[0] if k else 0
        if k == 0:
            return cls(0, 0, t.reshape(1))
        idx = _combos(n, k)
        if idx.shape[0] == 0:
            return cls.zero(n, k)
        return cls(n, k, t[tuple(idx.T)])

    @classmethod
    def from_vector(cls, v) -> "KForm":
        v = np.asarray(v, dtype=float)
        return cls(v.shape[0], 1, v)

    @classmethod
    def basis(cls, dim: int, *indices: int) -> "KForm":
        """``e_i1 ^ ... ^ e_ik`` for arbitrary (unsorted) 0-based indices."""
        sign = permutation_sign(indices)
        form = cls.zero(dim, len(indices))
        if sign == 0:
            return form
        return cls.from_coeffs(dim, len(indices), {tuple(sorted(indices)): sign})

    # -- views ------------------------------------------------------------

    @property
    def coeffs(self) -> dict:
        idx = _combos(self.dim, self.degree)
        return {tuple(int(i) for i in idx[p]): float(self.values[p])
                for p in np.flatnonzero(self.values)}

    @cached_property
    def tensor(self) -> np.ndarray:
        k, n = self.degree, self.dim
        if k == 0:
            return np.array(self.values[0])
        t = np.zeros((n,) * k)
        idx = _combos(n, k)
        if idx.shape[0]:
            for perm, sign in _perms(k):
                t[tuple(idx[:, perm].T)] = sign * self.values
        t.setflags(write=False)
        return t

    def as_vector(self) -> np.ndarray:
        if self.degree != 1:
            raise DegreeError("only 1-forms convert to vectors")
        return np.array(self.values)

    def __call__(self, *vectors) -> float:
        if len(vectors) != self.degree:
            raise DegreeError(f"{self.degree}-form evaluated on {len(vectors)} vectors")
        out = self.tensor
        for v in vectors:
            out = np.tensordot(np.asarray(v, dtype=float), out, axes=(0, 0))
        return float(out)

    # -- linear structure -------------------------------------------------

    def _same(self, other: "KForm") -> None:
        if self.dim != other.dim:
            raise DimensionMismatchError(f"dimensions {self.dim} and {other.dim} differ")
        if self.degree != other.degree:
            raise DegreeError(f"degrees {self.degree} and {other.degree} differ")

    def __add__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        self._same(other)
        return KForm(self.dim, self.degree, self.values + other.values)

    def __sub__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        self._same(other)
        return KForm(self.dim, self.degree, self.values - other.values)

    def __neg__(self):
        return KForm(self.dim, self.degree, -self.values)

    def __mul__(self, scalar):
        if isinstance(scalar, KForm):
            return NotImplemented
        return KForm(self.dim, self.degree, float(scalar) * self.values)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return KForm(self.dim, self.degree, self.values / float(scalar))

    def dot(self, other: "KForm") -> float:
        self._same(other)
        return float(self.values @ other.values)

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def equals(self, other: "KForm") -> bool:
        """Exact (bitwise) coefficient equality."""
        return (self.dim, self.degree) == (other.dim, other.degree) and \
            np.array_equal(self.values, other.values)

    def allclose(self, other: "KForm", atol: float = 1e-12) -> bool:
        self._same(other)
        return bool(np.allclose(self.values, other.values, rtol=0.0, atol=atol))

    def restrict(self, basis) -> "KForm":
        """Pull back to the subspace spanned by the orthonormal columns of ``basis``."""
        basis = np.asarray(basis, dtype=float)
        t = self.tensor
        for _ in range(self.degree):
            t = np.tensordot(t, basis, axes=(0, 0))
        return KForm.from_tensor(t) if self.degree else KForm(basis.shape[1], 0, self.values)

    def push_forward(self, basis) -> "KForm":
        """Extend a form on ``span(basis)`` by zero on the orthogonal complement."""
        basis = np.asarray(basis, dtype=float)
        t = self.tensor
        for _ in range(self.degree):
            t = np.tensordot(t, basis, axes=(0, 1))
        if self.degree == 0:
            return KForm(basis.shape[0], 0, self.values)
        return KForm.from_tensor(t)

    def transform(self, q) -> "KForm":
        """Image under the orthogonal map ``q`` (coefficients of ``q_* form``)."""
        return self.push_forward(q)

    def __repr__(self):
        items = ", ".join(f"{k}: {v:.6g}" for k, v in self.coeffs.items())
        return f"KForm(dim={self.dim}, degree={self.degree}, {{{items}}})"


def volume_form(dim: int, indices=None) -> KForm:
    """Volume form of ``span{e_i : i in indices}`` (all of R^dim by default)."""
    indices = range(dim) if indices is None else indices
    return KForm.basis(dim, *indices)


def _alternate(outer: np.ndarray, k: int, l: int) -> np.ndarray:
    acc = np.zeros_like(outer)
    for axes, sign in _shuffles(k, l):
        acc += sign * np.transpose(outer, axes)
    return acc


def wedge(a: KForm, b: KForm) -> KForm:
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dimensions {a.dim} and {b.dim} differ")
    k, l, n = a.degree, b.degree, a.dim
    if k + l > n:
        return KForm.zero(n, k + l)
    if k == 0:
        return b * float(a.values[0])
    if l == 0:
        return a * float(b.values[0])
    outer = np.multiply.outer(a.tensor, b.tensor)
    return KForm.from_tensor(_alternate(outer, k, l))


def contract(x, a: KForm) -> KForm:
    """Interior product ``x _| a``."""
    x = np.asarray(x, dtype=float)
    if a.degree == 0:
        raise DegreeError("cannot contract a 0-form")
    if x.shape != (a.dim,):
        raise DimensionMismatchError(f"vector of shape {x.shape} on {a.dim}-dim space")
    return KForm.from_tensor(np.tensordot(x, a.tensor, axes=(0, 0))) if a.degree > 1 \
        else KForm(a.dim, 0, np.array([x @ a.values]))


def is_skew(a, tol: float = TOL_SKEW) -> bool:
    a = np.asarray(a, dtype=float)
    return bool(np.max(np.abs(a + a.T), initial=0.0) <= tol * max(1.0, np.max(np.abs(a), initial=0.0)))


def check_skew(a, tol: float = TOL_SKEW) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"endomorphism must be square, got {a.shape}")
    if not is_skew(a, tol):
        raise InvariantViolationError(
            f"matrix is not skew-symmetric: |A + A^T| = {np.max(np.abs(a + a.T)):.3e}")
    return a


def two_form_to_endo(w: KForm) -> np.ndarray:
    if w.degree != 2:
        raise DegreeError(f"expected a 2-form, got degree {w.degree}")
    return np.array(w.tensor.T)


def endo_to_two_form(a) -> KForm:
    a = check_skew(a)
    return KForm.from_tensor(0.5 * (a.T - a))


def derivation_action(a, sigma: KForm) -> KForm:
    """``A_* sigma = sum_i A e_i ^ (e_i _| sigma)``, the derivation extension of ``A``."""
    a = np.asarray(a, dtype=float)
    if a.shape != (sigma.dim, sigma.dim):
        raise DimensionMismatchError(f"endomorphism {a.shape} on {sigma.dim}-dim space")
    k = sigma.degree
    if k == 0:
        return KForm.zero(sigma.dim, 0)
    t = sigma.tensor
    acc = np.zeros(t.shape)
    for axis in range(k):
        acc += np.moveaxis(np.tensordot(a, t, axes=(1, axis)), 0, axis)
    return KForm.from_tensor(acc)


def threeform_slice(tau: KForm, x) -> np.ndarray:
    """The skew endomorphism ``tau_x`` with ``<tau_x y, z> = tau(x, y, z)``."""
    if tau.degree != 3:
        raise DegreeError(f"expected a 3-form, got degree {tau.degree}")
    return np.tensordot(np.asarray(x, dtype=float), tau.tensor, axes=(0, 0)).T


def slices(tau: KForm) -> np.ndarray:
    """All basis slices stacked: ``out[i] = tau_{e_i}``."""
    if tau.degree != 3:
        raise DegreeError(f"expected a 3-form, got degree {tau.degree}")
    return np.transpose(tau.tensor, (0, 2, 1))


def _slice_matrix(tau: KForm) -> np.ndarray:
    # column i holds the coefficients of e_i _| tau
    idx = _combos(tau.dim, 2)
    t = tau.tensor
    return t[:, idx[:, 0], idx[:, 1]].T


def _split_by_rank(m: np.ndarray, n: int, tol: float):
    if m.size == 0:
        return np.eye(n), np.zeros((n, 0))
    _, s, vt = np.linalg.svd(m)
    if s.size == 0 or s[0] == 0.0:
        return np.eye(n), np.zeros((n, 0))
    rank = int(np.sum(s > tol * s[0]))
    return vt[rank:].T, vt[:rank].T


def kernel_of_threeform(tau: KForm, tol: float = TOL_RANK) -> np.ndarray:
    """Orthonormal basis (columns) of ``{x : tau_x = 0}``."""
    if tau.degree != 3:
        raise DegreeError(f"expected a 3-form, got degree {tau.degree}")
    return _split_by_rank(_slice_matrix(tau), tau.dim, tol)[0]


def kernel_complement(tau: KForm, tol: float = TOL_RANK) -> np.ndarray:
    """Orthonormal basis (columns) of the orthogonal complement of the kernel."""
    if tau.degree != 3:
        raise DegreeError(f"expected a 3-form, got degree {tau.degree}")
    return _split_by_rank(_slice_matrix(tau), tau.dim, tol)[1]


def four_form_sum(tau: KForm) -> KForm:
    """``sum_i (e_i _| tau) ^ (e_i _| tau)``."""
    if tau.degree != 3:
        raise DegreeError(f"expected a 3-form, got degree {tau.degree}")
    n = tau.dim
    if n < 4:
        return KForm.zero(n, 4)
    t = tau.tensor
    outer = np.einsum("iab,icd->abcd", t, t)
    return KForm.from_tensor(_alternate(outer, 2, 2))
