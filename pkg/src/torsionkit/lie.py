"""Metric Lie algebras given by structure constants in an orthonormal basis.

``structure[i, j, k] = c_ij^k`` with ``[e_i, e_j] = sum_k c_ij^k e_k``.  The
inner product is the identity in the working basis.  Randomized steps take an
explicit ``numpy.random.Generator``; ``None`` means a fresh generator seeded
with :data:`DEFAULT_SEED`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .errors import InvalidAlgebraError, UnsupportedSignatureError
from .exterior import KForm, permutation_sign

DEFAULT_SEED = 42
JACOBI_TOL = 1e-10
RANK_TOL = 1e-9
CLUSTER_TOL = 1e-6

COMPACT_SEMISIMPLE = "compact-semisimple"
COMPACT_WITH_CENTER = "compact-with-center"
NON_COMPACT = "non-compact"
INVALID = "invalid"


def _rng(rng):
    return np.random.default_rng(DEFAULT_SEED) if rng is None else rng


@dataclass(frozen=True, eq=False)
class MetricLieAlgebra:
    structure: np.ndarray
    name: str = ""

    def __post_init__(self):
        c = np.array(self.structure, dtype=float)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
            raise InvalidAlgebraError(f"structure constants must be (n, n, n), got {c.shape}")
        if np.max(np.abs(c + np.transpose(c, (1, 0, 2))), initial=0.0) > \
                1e-12 * max(1.0, np.max(np.abs(c), initial=0.0)):
            raise InvalidAlgebraError("structure constants must satisfy c_ij^k = -c_ji^k")
        c.setflags(write=False)
        object.__setattr__(self, "structure", c)

    @property
    def dim(self) -> int:
        return self.structure.shape[0]

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.structure), initial=0.0))

    def ad(self, x) -> np.ndarray:
        """Matrix of ``ad(x)`` acting on column vectors."""
        return np.einsum("i,ijk->kj", np.asarray(x, dtype=float), self.structure)

    def ad_basis(self) -> np.ndarray:
        """``out[i] = ad(e_i)``."""
        return np.transpose(self.structure, (0, 2, 1))

    def bracket(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", np.asarray(x, dtype=float),
                         np.asarray(y, dtype=float), self.structure)

    def restrict(self, basis, name: str = "") -> "MetricLieAlgebra":
        """Structure constants on ``span(basis)`` (orthonormal columns, assumed closed)."""
        q = np.asarray(basis, dtype=float)
        c = np.einsum("ia,jb,kc,ijk->abc", q, q, q, self.structure, optimize=True)
        c = 0.5 * (c - np.transpose(c, (1, 0, 2)))
        return MetricLieAlgebra(c, name or self.name)

    def transform(self, q) -> "MetricLieAlgebra":
        """Same algebra written in the orthonormal basis given by the columns of ``q``."""
        return self.restrict(q)

    def scaled(self, s: float) -> "MetricLieAlgebra":
        return MetricLieAlgebra(float(s) * self.structure, self.name)


@dataclass(frozen=True)
class IdealDecomposition:
    center: np.ndarray
    ideals: list = field(default_factory=list)

    @property
    def dims(self) -> list:
        return [b.shape[1] for b in self.ideals]


@dataclass(frozen=True)
class LieTypeLabel:
    dim: int
    rank: int
    candidates: tuple
    note: str = ""

    @property
    def label(self) -> str:
        if not self.candidates:
            return f"unidentified(dim={self.dim}, rank={self.rank})"
        return "/".join(self.candidates)


# -- built-in generators ---------------------------------------------------

def abelian(n: int) -> MetricLieAlgebra:
    return MetricLieAlgebra(np.zeros((n, n, n)), f"R{n}")


def _from_antisymmetric(n: int, entries, name: str) -> MetricLieAlgebra:
    c = np.zeros((n, n, n))
    for (i, j, k), v in entries.items():
        for p in permutations(range(3)):
            idx = (i, j, k)
            c[idx[p[0]], idx[p[1]], idx[p[2]]] = permutation_sign(p) * v
    return MetricLieAlgebra(c, name)


def su2() -> MetricLieAlgebra:
    """``c_ij^k = eps_ijk``."""
    return _from_antisymmetric(3, {(0, 1, 2): 1.0}, "su2")


def su3() -> MetricLieAlgebra:
    """Gell-Mann structure constants ``f_abc`` for the basis ``-i lambda_a / 2``."""
    h = 0.5
    r = np.sqrt(3.0) / 2.0
    f = {(1, 2, 3): 1.0, (1, 4, 7): h, (1, 5, 6): -h, (2, 4, 6): h, (2, 5, 7): h,
         (3, 4, 5): h, (3, 6, 7): -h, (4, 5, 8): r, (6, 7, 8): r}
    return _from_antisymmetric(8, {(i - 1, j - 1, k - 1): v for (i, j, k), v in f.items()}, "su3")


def so(n: int) -> MetricLieAlgebra:
    """so(n) in the basis ``E_ab = e_a e_b^T - e_b e_a^T`` (a < b), ``<A, B> = -tr(AB)/2``."""
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    mats = []
    for a, b in pairs:
        m = np.zeros((n, n))
        m[a, b], m[b, a] = 1.0, -1.0
        mats.append(m)
    mats = np.array(mats).reshape(len(pairs), n, n)
    comm = np.einsum("pab,qbc->pqac", mats, mats)
    comm = comm - np.transpose(comm, (1, 0, 2, 3))
    c = -0.5 * np.einsum("pqab,rba->pqr", comm, mats)
    return MetricLieAlgebra(c, f"so{n}")


def from_matrix_basis(mats, name: str = "") -> MetricLieAlgebra:
    """Structure constants of a matrix Lie algebra spanned by ``mats``.

    The span is orthonormalized for ``<A, B> = Re tr(A B^*)`` first, so the
    matrices need only be linearly independent and closed under commutators.
    """
    mats = np.asarray(mats)
    k = mats.shape[0]
    flat = mats.reshape(k, -1)
    gram = np.real(flat @ flat.conj().T)
    w, v = np.linalg.eigh(gram)
    basis = np.einsum("ka,kij->aij", v / np.sqrt(w), mats)
    comm = np.einsum("pab,qbc->pqac", basis, basis)
    comm = comm - np.transpose(comm, (1, 0, 2, 3))
    c = np.real(np.einsum("pqab,rab->pqr", comm, basis.conj()))
    return MetricLieAlgebra(0.5 * (c - np.transpose(c, (1, 0, 2))), name)


def su(n: int) -> MetricLieAlgebra:
    """su(n) in an orthonormal basis of traceless anti-Hermitian matrices."""
    mats = []
    for a in range(n):
        for b in range(a + 1, n):
            m = np.zeros((n, n), complex)
            m[a, b], m[b, a] = 1.0, -1.0
            mats.append(m)
            m = np.zeros((n, n), complex)
            m[a, b] = m[b, a] = 1j
            mats.append(m)
    for a in range(n - 1):
        m = np.zeros((n, n), complex)
        m[a, a], m[a + 1, a + 1] = 1j, -1j
        mats.append(m)
    return from_matrix_basis(mats, f"su{n}")


def sp(n: int) -> MetricLieAlgebra:
    """Compact sp(n): anti-Hermitian ``X`` in gl(2n, C) with ``X^T J + J X = 0``."""
    d = 2 * n
    j = np.zeros((d, d))
    j[:n, n:], j[n:, :n] = np.eye(n), -np.eye(n)
    # real coordinates of complex d x d matrices; impose both linear conditions
    dims = 2 * d * d
    rows = []
    for idx in range(dims):
        x = np.zeros(d * d, complex)
        x[idx % (d * d)] = 1.0 if idx < d * d else 1j
        x = x.reshape(d, d)
        cond = np.concatenate([(x + x.conj().T).ravel(), (x.T @ j + j @ x).ravel()])
        rows.append(np.concatenate([cond.real, cond.imag]))
    a = np.array(rows).T
    _, s, vt = np.linalg.svd(a)
    null = vt[int(np.sum(s > 1e-10 * s[0])):]
    mats = [(v[:d * d] + 1j * v[d * d:]).reshape(d, d) for v in null]
    return from_matrix_basis(mats, f"sp{n}")


def direct_sum(*algebras: MetricLieAlgebra) -> MetricLieAlgebra:
    n = sum(a.dim for a in algebras)
    c = np.zeros((n, n, n))
    off = 0
    for a in algebras:
        d = a.dim
        c[off:off + d, off:off + d, off:off + d] = a.structure
        off += d
    return MetricLieAlgebra(c, "+".join(a.name for a in algebras))


def random_orthogonal(n: int, rng=None) -> np.ndarray:
    rng = _rng(rng)
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    return q * np.sign(np.diag(r))


# -- invariants -------------------------------------------------------------

def jacobi_tensor(alg: MetricLieAlgebra) -> np.ndarray:
    c = alg.structure
    # [[e_i, e_j], e_k] = sum_m c_ij^m c_mk^l
    first = np.einsum("ijm,mkl->ijkl", c, c)
    return first + np.transpose(first, (2, 0, 1, 3)) + np.transpose(first, (1, 2, 0, 3))


def jacobi_defect(alg: MetricLieAlgebra) -> float:
    if alg.dim == 0:
        return 0.0
    return float(np.max(np.linalg.norm(jacobi_tensor(alg), axis=3)))


def is_lie(alg: MetricLieAlgebra, tol: float = JACOBI_TOL) -> bool:
    return jacobi_defect(alg) <= tol * max(1.0, alg.scale ** 2)


def killing_form(alg: MetricLieAlgebra) -> np.ndarray:
    c = alg.structure
    b = np.einsum("iab,jba->ij", c, c)
    return 0.5 * (b + b.T)


def invariance_defect(alg: MetricLieAlgebra) -> float:
    """Max of ``<[x, y], z> + <y, [x, z]>`` over basis triples."""
    c = alg.structure
    return float(np.max(np.abs(c + np.transpose(c, (0, 2, 1))), initial=0.0))


def center(alg: MetricLieAlgebra, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of ``{x : ad(x) = 0}``."""
    n = alg.dim
    m = alg.structure.reshape(n, n * n)
    if n == 0 or not np.any(m):
        return np.eye(n)
    u, s, _ = np.linalg.svd(m)
    rank = int(np.sum(s > tol * s[0]))
    return u[:, rank:]


def is_compact_type(alg: MetricLieAlgebra, tol: float = JACOBI_TOL) -> str:
    if not is_lie(alg, tol):
        return INVALID
    if invariance_defect(alg) > tol * max(1.0, alg.scale):
        return NON_COMPACT
    n = alg.dim
    if n == 0:
        return COMPACT_WITH_CENTER
    w = np.linalg.eigvalsh(killing_form(alg))
    top = max(np.max(np.abs(w)), 0.0)
    if top == 0.0:
        return COMPACT_WITH_CENTER
    if np.max(w) > RANK_TOL * top:
        return NON_COMPACT
    nullity = int(np.sum(w > -RANK_TOL * top))
    if nullity == 0:
        return COMPACT_SEMISIMPLE
    if nullity == center(alg).shape[1]:
        return COMPACT_WITH_CENTER
    return NON_COMPACT


def _require_compact(alg: MetricLieAlgebra) -> str:
    status = is_compact_type(alg)
    if status == INVALID:
        raise InvalidAlgebraError(f"Jacobi defect {jacobi_defect(alg):.3e} too large")
    if status == NON_COMPACT:
        raise UnsupportedSignatureError("algebra is not of compact type in the given metric")
    return status


def _symmetric_commutant(ads: np.ndarray, tol: float) -> np.ndarray:
    """Basis of symmetric matrices commuting with every ``ads[i]`` (rows: flattened)."""
    d = ads.shape[1]
    eye = np.eye(d)
    cas = -np.einsum("iab,ibc->ac", ads, ads)
    # Gram operator of M -> ([M, A_i])_i on row-major vec(M)
    g = np.kron(eye, cas) + np.kron(cas, eye) - 2.0 * np.einsum(
        "iab,icd->acbd", ads, ads).reshape(d * d, d * d)
    # orthonormal basis of symmetric matrices: E_pp and (E_pq + E_qp)/sqrt(2)
    p, q = np.triu_indices(d)
    diag = p == q
    rows, cols = p * d + q, q * d + p
    w_vec = np.where(diag, 0.5, np.sqrt(0.5))
    gs = (g[np.ix_(rows, rows)] + g[np.ix_(rows, cols)] + g[np.ix_(cols, rows)]
          + g[np.ix_(cols, cols)]) * np.outer(w_vec, w_vec)
    w, v = np.linalg.eigh(0.5 * (gs + gs.T))
    top = max(np.max(np.abs(w)), 1e-300)
    null = v[:, w <= tol * top]
    w_mat = np.where(diag, 1.0, np.sqrt(0.5))
    out = []
    for col in null.T:
        m = np.zeros((d, d))
        m[p, q] = col * w_mat
        m[q, p] = col * w_mat
        out.append(m)
    return np.array(out).reshape(len(out), d, d)


def _cluster(values: np.ndarray, tol: float) -> list:
    order = np.argsort(values)
    spread = max(np.ptp(values), np.max(np.abs(values)), 1e-300)
    groups = [[order[0]]]
    for a, b in zip(order[:-1], order[1:]):
        if values[b] - values[a] > tol * spread:
            groups.append([b])
        else:
            groups[-1].append(b)
    return groups


def simple_ideal_decomposition(alg: MetricLieAlgebra, rng=None,
                               verify: bool = True) -> IdealDecomposition:
    """Orthogonal splitting into the center and simple ideals."""
    _require_compact(alg)
    rng = _rng(rng)
    n = alg.dim
    if n == 0:
        return IdealDecomposition(np.zeros((0, 0)), [])
    w, v = np.linalg.eigh(killing_form(alg))
    top = np.max(np.abs(w))
    if top == 0.0:
        return IdealDecomposition(np.eye(n), [])
    zero = w > -RANK_TOL * top
    z_basis, derived = v[:, zero], v[:, ~zero]
    sub = alg.restrict(derived)
    comm = _symmetric_commutant(sub.ad_basis(), RANK_TOL)
    weights = rng.normal(size=comm.shape[0])
    generic = np.einsum("i,iab->ab", weights, comm)
    ew, ev = np.linalg.eigh(0.5 * (generic + generic.T))
    ideals = []
    for group in _cluster(ew, CLUSTER_TOL):
        basis, _ = np.linalg.qr(derived @ ev[:, group])
        ideals.append(basis)
    ideals.sort(key=lambda b: (-b.shape[1], tuple(np.round(np.abs(b).sum(axis=1), 6))))
    if verify:
        _verify_ideals(alg, ideals, rng)
    return IdealDecomposition(z_basis, ideals)


def _verify_ideals(alg, ideals, rng, tol: float = 1e-9) -> None:
    scale = max(1.0, alg.scale)
    for a, ba in enumerate(ideals):
        brk = np.einsum("ia,jb,ijk->abk", ba, ba, alg.structure, optimize=True)
        leak = brk - np.einsum("abk,kc,lc->abl", brk, ba, ba, optimize=True)
        if np.max(np.abs(leak), initial=0.0) > tol * scale:
            raise InvalidAlgebraError("ideal splitting failed: subspace not closed")
        for bb in ideals[a + 1:]:
            cross = np.einsum("ia,jb,ijk->abk", ba, bb, alg.structure, optimize=True)
            if np.max(np.abs(cross), initial=0.0) > tol * scale:
                raise InvalidAlgebraError("ideal splitting failed: cross brackets do not vanish")
        inner = simple_ideal_decomposition(alg.restrict(ba), rng, verify=False)
        if len(inner.ideals) != 1:
            raise InvalidAlgebraError("ideal splitting failed: summand is not simple")


def cartan_rank(alg: MetricLieAlgebra, rng=None, samples: int = 8,
                tol: float = RANK_TOL) -> int:
    """Min over random ``x`` of ``dim ker ad(x)``."""
    rng = _rng(rng)
    n = alg.dim
    if n == 0:
        return 0
    best = n
    for _ in range(samples):
        s = np.linalg.svd(alg.ad(rng.normal(size=n)), compute_uv=False)
        if s[0] == 0.0:
            continue
        best = min(best, int(np.sum(s <= tol * s[0])))
    return best


def _type_table(max_dim: int = 52) -> dict:
    table = {}

    def add(label, dim, rank):
        if dim <= max_dim:
            table.setdefault((dim, rank), []).append(label)

    for r in range(1, 8):
        add(f"A{r}", r * (r + 2), r)
    for r in range(2, 6):
        add(f"B{r}", r * (2 * r + 1), r)
    for r in range(3, 6):
        add(f"C{r}", r * (2 * r + 1), r)
    for r in range(4, 6):
        add(f"D{r}", r * (2 * r - 1), r)
    add("G2", 14, 2)
    add("F4", 52, 4)
    return {k: tuple(v) for k, v in table.items()}


TYPE_TABLE = _type_table()


def root_lengths(alg: MetricLieAlgebra, rng=None) -> np.ndarray | None:
    """Squared lengths of the positive roots, or ``None`` if the generic choices degenerate."""
    rng = _rng(rng)
    rank = cartan_rank(alg, rng)
    n = alg.dim
    for _ in range(8):
        x = rng.normal(size=n)
        _, s, vt = np.linalg.svd(alg.ad(x))
        if int(np.sum(s <= RANK_TOL * s[0])) == rank:
            break
    else:
        return None
    torus = vt[n - rank:].T
    h = torus @ rng.normal(size=rank)
    adh = alg.ad(h)
    w, v = np.linalg.eigh(adh.T @ adh)
    top = np.max(w)
    nonzero = w > RANK_TOL * top
    if int(np.sum(nonzero)) != n - rank or (n - rank) % 2:
        return None
    w, v = w[nonzero], v[:, nonzero]
    ads = [alg.ad(t) for t in torus.T]
    roots = []
    for p in range(0, len(w), 2):
        if abs(w[p] - w[p + 1]) > CLUSTER_TOL * top:
            return None
        if p + 2 < len(w) and abs(w[p + 2] - w[p + 1]) <= CLUSTER_TOL * top:
            return None
        plane = v[:, p:p + 2]
        roots.append([(plane.T @ a @ plane)[1, 0] for a in ads])
    return np.sum(np.array(roots) ** 2, axis=1)


def identify_type(alg: MetricLieAlgebra, rng=None) -> LieTypeLabel:
    rng = _rng(rng)
    n = alg.dim
    rank = cartan_rank(alg, rng)
    candidates = TYPE_TABLE.get((n, rank), ())
    if len(candidates) <= 1:
        return LieTypeLabel(n, rank, candidates, "" if candidates else "not in table")
    lengths = root_lengths(alg, rng)
    if lengths is None:
        return LieTypeLabel(n, rank, candidates, "root refinement inconclusive")
    groups = _cluster(lengths, 1e-3)
    if len(groups) != 2:
        return LieTypeLabel(n, rank, candidates, "root refinement inconclusive")
    short, long_ = sorted(groups, key=lambda g: lengths[g[0]])
    family = "B" if len(long_) > len(short) else "C"
    picked = tuple(c for c in candidates if c.startswith(family))
    return LieTypeLabel(n, rank, picked or candidates,
                        f"{len(long_)} long / {len(short)} short positive roots")


def canonical_three_form(alg: MetricLieAlgebra) -> KForm:
    """``omega(x, y, z) = B([x, y], z)`` with ``B`` the Killing form."""
    if not is_lie(alg):
        raise InvalidAlgebraError(f"Jacobi defect {jacobi_defect(alg):.3e} too large")
    if alg.dim < 3:
        return KForm.zero(alg.dim, 3)
    w = np.einsum("ijl,lk->ijk", alg.structure, killing_form(alg))
    alt = sum(permutation_sign(p) * np.transpose(w, p) for p in permutations(range(3))) / 6.0
    return KForm.from_tensor(alt)


def structure_form(alg: MetricLieAlgebra) -> KForm:
    """``<[x, y], z>``; a 3-form exactly when the metric is ad-invariant."""
    if alg.dim < 3:
        return KForm.zero(alg.dim, 3)
    c = alg.structure
    alt = sum(permutation_sign(p) * np.transpose(c, p) for p in permutations(range(3))) / 6.0
    return KForm.from_tensor(alt)
