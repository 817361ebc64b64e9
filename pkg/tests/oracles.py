"""Slow, loop-based reference implementations used to cross-check the library.

Nothing here imports the code under test except for plain containers; each
oracle works from the textbook definition.
"""

import itertools
import math

import numpy as np


def perm_sign(p):
    p = list(p)
    sign = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def full_tensor(n, k, coeffs):
    """Antisymmetric array from ``{increasing index tuple: value}``."""
    t = np.zeros((n,) * k)
    for idx, v in coeffs.items():
        for p in itertools.permutations(range(k)):
            t[tuple(idx[i] for i in p)] = perm_sign(p) * v
    return t


def wedge_tensor(a, b, k, l):
    """``(a ^ b)(v_1..v_{k+l}) = 1/(k! l!) sum_sigma sgn(sigma) a(..) b(..)``."""
    n = a.shape[0] if k else b.shape[0]
    out = np.zeros((n,) * (k + l))
    norm = math.factorial(k) * math.factorial(l)
    for idx in itertools.product(range(n), repeat=k + l):
        if len(set(idx)) < k + l:
            continue
        acc = 0.0
        for p in itertools.permutations(range(k + l)):
            j = [idx[i] for i in p]
            acc += perm_sign(p) * a[tuple(j[:k])] * b[tuple(j[k:])]
        out[idx] = acc / norm
    return out


def contraction(x, t):
    return np.tensordot(x, t, axes=(0, 0))


def derivation(a, t):
    """``sum_i (A e_i) ^ (e_i _| sigma)`` built literally with the wedge oracle."""
    n = a.shape[0]
    k = t.ndim
    out = np.zeros(t.shape)
    for i in range(n):
        col = a[:, i]
        out += wedge_tensor(col, contraction(np.eye(n)[i], t), 1, k - 1)
    return out


def ad_matrices(c):
    """``ad[i][k, j] = c_ij^k`` by loops."""
    n = c.shape[0]
    ad = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                ad[i][k, j] = c[i, j, k]
    return ad


def killing_trace(c):
    ad = ad_matrices(c)
    n = c.shape[0]
    return np.array([[np.trace(ad[i] @ ad[j]) for j in range(n)] for i in range(n)])


def torsion_embeddings(n):
    """Columns spanning the vectorial and skew summands of ``R^n (x) Lambda^2``,
    as flattened ``(n, n, n)`` arrays."""
    vec = []
    for k in range(n):
        t = np.zeros((n, n, n))
        for i in range(n):
            # e_i ^ e_k
            if i != k:
                t[i, i, k] += 1.0
                t[i, k, i] -= 1.0
        vec.append(t.ravel())
    skew = []
    for a, b, c in itertools.combinations(range(n), 3):
        t = full_tensor(n, 3, {(a, b, c): 1.0})
        skew.append(t.ravel())
    return np.array(vec).T, (np.array(skew).T if skew else np.zeros((n ** 3, 0)))


def project(columns, t):
    """Orthogonal projection of the flattened ``t`` onto ``span(columns)``."""
    if columns.shape[1] == 0:
        return np.zeros_like(t)
    coef, *_ = np.linalg.lstsq(columns, t, rcond=None)
    return columns @ coef


def torsion_projections(t):
    n = t.shape[0]
    vec, skew = torsion_embeddings(n)
    flat = t.ravel()
    p1 = project(vec, flat).reshape(t.shape)
    p3 = project(skew, flat).reshape(t.shape)
    return p1, t - p1 - p3, p3


def coordinate_christoffels(metric, coords):
    """``Gamma^k_ij`` of a sympy metric in coordinates."""
    import sympy as sp
    n = len(coords)
    inv = metric.inv()
    gam = [[[0] * n for _ in range(n)] for _ in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                gam[k][i][j] = sp.simplify(sum(
                    inv[k, l] * (sp.diff(metric[l, i], coords[j]) + sp.diff(metric[l, j], coords[i])
                                 - sp.diff(metric[i, j], coords[l])) for l in range(n)) / 2)
    return gam
