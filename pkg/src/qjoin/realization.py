"""Numeric orthogonal symmetric matrices with the zero pattern of K_m v K_n.

The construction takes a compatible witness pair, puts each clique block in
eigen-coordinates, couples matching interior eigenspaces of the two sides
with scaled orthogonal blocks, and rotates back. Success is not guaranteed
for a single draw, so the coupling and the diagonalizers are resampled
until the cross block has no zero entries.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import block_diag

from .combinatorics import is_compatible, is_multiplicity_matrix_for
from .model import DenseSymMatrix, EigenvalueList, MultiplicityMatrix, SizeTuple, as_size_tuple

log = logging.getLogger(__name__)


class RealizationError(RuntimeError):
    """Retry budget exhausted; inconclusive, never evidence that q != 2."""


@dataclass(frozen=True)
class RealizationConfig:
    tol_residual: float = 1e-9
    tol_nonzero: float = 1e-8
    max_retries: int = 64
    seed: int = 0

    def __post_init__(self):
        if self.tol_residual <= 0 or self.tol_nonzero <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_retries < 1:
            raise ValueError("max_retries must be at least 1")

    def rng(self, *stream: int) -> np.random.Generator:
        """Generator for a given attempt; derived by counter, not by call order."""
        return np.random.default_rng([self.seed & 0xFFFFFFFFFFFFFFFF, *stream])


@dataclass(frozen=True, eq=False)
class RealizationResult:
    X: DenseSymMatrix
    A_G: np.ndarray
    A_H: np.ndarray
    C: np.ndarray
    lam: EigenvalueList
    retries_used: int
    residual: float


def haar_orthogonal(p: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed p x p orthogonal matrix (QR of a Gaussian, sign-fixed)."""
    if p == 0:
        return np.zeros((0, 0))
    Q, R = np.linalg.qr(rng.standard_normal((p, p)))
    d = np.sign(np.diag(R))
    d[d == 0] = 1.0
    return Q * d


def _nowhere_zero(x: np.ndarray, thresh: float) -> bool:
    return bool(x.size == 0 or np.abs(x).min() >= thresh)


def nowhere_zero_orthonormal_basis(B, cfg: RealizationConfig | None = None, rng=None) -> np.ndarray:
    """Orthonormal basis of span(B) with no (near-)zero entries.

    ``B`` holds orthonormal vectors as columns. A nowhere-zero vector is
    moved to the front (found by a combination of the inputs if necessary),
    then consecutive pairs are rotated, b' = sqrt(1-t^2) b + t c and
    c' = t b - sqrt(1-t^2) c, with t halved until both results clear
    ``tol_nonzero``.
    """
    cfg = cfg or RealizationConfig()
    B = np.array(B, dtype=np.float64)
    if B.ndim == 1:
        B = B[:, None]
    n, d = B.shape
    if d == 0:
        return B.copy()
    gram_err = np.abs(B.T @ B - np.eye(d)).max()
    if gram_err > max(cfg.tol_residual, 1e-9):
        raise ValueError(f"input vectors are not orthonormal (Gram error {gram_err:.2e})")
    thresh = cfg.tol_nonzero

    lead = next((j for j in range(d) if _nowhere_zero(B[:, j], thresh)), None)
    if lead is not None:
        order = [lead] + [j for j in range(d) if j != lead]
        return _rotate_pairs(B[:, order].copy(), thresh)
    # rotating the given vectors pairwise is often enough (e.g. e1, e2)
    try:
        direct = _rotate_pairs(B.copy(), thresh)
        if _nowhere_zero(direct, thresh):
            return direct
    except ValueError:
        pass
    rng = rng if rng is not None else cfg.rng(0x4E5A)
    coeffs = np.ones(d)
    for _ in range(cfg.max_retries):
        v = B @ coeffs
        v /= np.linalg.norm(v)
        if _nowhere_zero(v, thresh):
            break
        coeffs = rng.standard_normal(d)
    else:
        raise ValueError("no nowhere-zero vector found in the span")
    # complete v to an orthonormal basis of span(B) with v first
    Q, _ = np.linalg.qr(np.column_stack([v, B]))
    basis = Q[:, :d]
    basis[:, 0] = v
    return _rotate_pairs(basis, thresh)


def _rotate_pairs(basis: np.ndarray, thresh: float) -> np.ndarray:
    d = basis.shape[1]
    for j in range(1, d):
        b, c = basis[:, j - 1].copy(), basis[:, j].copy()
        t = 0.5
        for _ in range(60):
            s = np.sqrt(1.0 - t * t)
            nb, nc = s * b + t * c, t * b - s * c
            if _nowhere_zero(nb, thresh) and _nowhere_zero(nc, thresh):
                break
            t *= 0.5
        else:
            raise ValueError("could not rotate to a nowhere-zero pair")
        basis[:, j - 1], basis[:, j] = nb, nc
    return basis


def realize_clique_block(v, lam: EigenvalueList, cfg: RealizationConfig | None = None, rng=None):
    """A = U diag(lam with multiplicities v) U^T with all off-diagonal entries nonzero.

    Returns (A, U); the columns of U are eigenvectors ordered by eigenvalue
    index, and U has no zero entries.
    """
    cfg = cfg or RealizationConfig()
    v = [int(x) for x in v]
    if len(v) != len(lam):
        raise ValueError("multiplicity vector and eigenvalue list differ in length")
    if any(x < 0 for x in v):
        raise ValueError("negative multiplicity")
    size = sum(v)
    if size == 0:
        raise ValueError("empty multiplicity vector")
    if size >= 2 and sum(1 for x in v if x) < 2:
        raise ValueError(f"{tuple(v)} is not a multiplicity vector for K_{size}: needs two distinct eigenvalues")
    diag = np.repeat(np.array(lam.values), v)
    if size == 1:
        return diag.reshape(1, 1).copy(), np.ones((1, 1))
    rng = rng if rng is not None else cfg.rng(0)
    bounds = np.cumsum([0, *v])
    for _ in range(cfg.max_retries):
        U = haar_orthogonal(size, rng)
        if not _nowhere_zero(U, cfg.tol_nonzero):
            try:
                for a, b in zip(bounds[:-1], bounds[1:]):
                    if b > a:
                        U[:, a:b] = nowhere_zero_orthonormal_basis(U[:, a:b], cfg, rng)
            except ValueError:
                continue
        A = (U * diag) @ U.T
        A = 0.5 * (A + A.T)
        off = A[~np.eye(size, dtype=bool)]
        scale = max(np.abs(A).max(), 1.0)
        if _nowhere_zero(off, cfg.tol_nonzero * scale):
            return A, U
    raise RealizationError(
        f"no nowhere-zero diagonalizer for v={tuple(v)} after {cfg.max_retries} draws (seed {cfg.seed})"
    )


def _side(Vmat: MultiplicityMatrix, lam: EigenvalueList, cfg: RealizationConfig, rng):
    """Block-diagonal A and a diagonalizer S whose columns are globally sorted by eigenvalue."""
    blocks, bases, labels = [], [], []
    offset = 0
    for j in range(Vmat.cols):
        col = Vmat.column(j)
        A, U = realize_clique_block(col, lam, cfg, rng)
        blocks.append(A)
        bases.append(U)
        for s, c in enumerate(col):
            labels.extend((s, offset + t) for t in range(c))
            offset += c
    A = block_diag(*blocks)
    S = block_diag(*bases)
    # sort columns by eigenvalue index, stable in block order
    order = [pos for _, pos in sorted(labels, key=lambda x: (x[0], x[1]))]
    return A, S[:, order]


def _coupling(V: MultiplicityMatrix, W: MultiplicityMatrix, lam: EigenvalueList, Z: list[np.ndarray]) -> np.ndarray:
    rv, rw = V.row_sums(), W.row_sums()
    out = np.zeros((sum(rv), sum(rw)))
    i0, j0 = rv[0], rw[0]
    for s in range(1, V.rows - 1):
        p = rv[s]
        out[i0 : i0 + p, j0 : j0 + p] = np.sqrt(1.0 - lam[s] ** 2) * Z[s - 1]
        i0 += p
        j0 += p
    return out


def assemble_join(V, W, m, n, lam: EigenvalueList | None = None, cfg: RealizationConfig | None = None) -> RealizationResult:
    """Orthogonal symmetric X = [[A_G, C], [C^T, -A_H]] in S(K_m v K_n)."""
    cfg = cfg or RealizationConfig()
    m, n = as_size_tuple(m), as_size_tuple(n)
    if not is_compatible(V, W):
        raise ValueError("witness pair is not compatible")
    if not is_multiplicity_matrix_for(V, m) or not is_multiplicity_matrix_for(W, n):
        raise ValueError("witness columns do not match the component orders")
    lam = lam or EigenvalueList.default(V.rows)
    lam.check_realizable()
    if len(lam) != V.rows:
        raise ValueError(f"eigenvalue list has {len(lam)} entries, witness has {V.rows} rows")

    p = V.row_sums()[1:-1]
    adj = clique_join_pattern(m, n)
    for attempt in range(cfg.max_retries):
        rng = cfg.rng(attempt)
        A_G, S = _side(V, lam, cfg, rng)
        A_H, T = _side(W, lam, cfg, rng)
        if attempt == 0:
            Z = [np.eye(ps) for ps in p]
        else:
            Z = [haar_orthogonal(ps, rng) for ps in p]
        C = S @ _coupling(V, W, lam, Z) @ T.T
        if not _nowhere_zero(C, cfg.tol_nonzero * np.abs(C).max()):
            continue
        X = np.block([[A_G, C], [C.T, -A_H]])
        X = 0.5 * (X + X.T)
        # same relative threshold the verifier applies
        if np.any(np.abs(X[adj]) < cfg.tol_nonzero * np.abs(X).max()):
            log.debug("attempt %d has a near-zero required entry", attempt)
            continue
        residual = float(np.abs(X @ X - np.eye(X.shape[0])).max())
        if residual > cfg.tol_residual:
            log.debug("attempt %d residual %.2e above tolerance", attempt, residual)
            continue
        return RealizationResult(
            X=DenseSymMatrix(X),
            A_G=A_G,
            A_H=A_H,
            C=C,
            lam=lam,
            retries_used=attempt,
            residual=residual,
        )
    raise RealizationError(f"no nowhere-zero coupling for {m} | {n} in {cfg.max_retries} attempts (seed {cfg.seed})")


def clique_join_pattern(m, n) -> np.ndarray:
    """Boolean adjacency of K_m v K_n, components of m first."""
    m, n = as_size_tuple(m), as_size_tuple(n)
    labels = [i for i, mi in enumerate(m) for _ in range(mi)]
    labels += [len(m) + j for j, nj in enumerate(n) for _ in range(nj)]
    lab = np.array(labels)
    side = np.array([0] * m.total() + [1] * n.total())
    adj = (lab[:, None] == lab[None, :]) | (side[:, None] != side[None, :])
    np.fill_diagonal(adj, False)
    return adj


def join_pattern(adj_G, adj_H) -> np.ndarray:
    """Adjacency of G v H from the adjacencies of G and H."""
    G = np.asarray(adj_G, dtype=bool)
    H = np.asarray(adj_H, dtype=bool)
    out = np.ones((G.shape[0] + H.shape[0],) * 2, dtype=bool)
    out[: G.shape[0], : G.shape[0]] = G
    out[G.shape[0] :, G.shape[0] :] = H
    np.fill_diagonal(out, False)
    return out


@dataclass
class VerificationReport:
    size: int
    symmetry_defect: float
    residual: float
    orthogonal: bool
    pattern_ok: bool
    eigenvalues: list[float]
    spectrum_ok: bool
    i_plus: int
    violations: list[dict] = field(default_factory=list)
    tol_residual: float = 1e-9

    @property
    def symmetric(self) -> bool:
        return self.symmetry_defect <= self.tol_residual

    @property
    def passed(self) -> bool:
        return self.orthogonal and self.pattern_ok and self.spectrum_ok and self.symmetric

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "size": self.size,
            "symmetry_defect": self.symmetry_defect,
            "residual": self.residual,
            "orthogonal": self.orthogonal,
            "pattern_ok": self.pattern_ok,
            "spectrum_ok": self.spectrum_ok,
            "i_plus": self.i_plus,
            "eigenvalues": self.eigenvalues,
            "violations": self.violations,
        }


def verify_realization(X, m=None, n=None, cfg: RealizationConfig | None = None, pattern=None) -> VerificationReport:
    """Check symmetry, X^2 = I, the join zero pattern and a +-1 spectrum.

    The pattern comes from ``(m, n)`` as a join of clique unions, or from an
    explicit boolean adjacency ``pattern``. Entries count as nonzero when at
    least ``tol_nonzero`` times the largest entry of X; the diagonal is free.
    """
    cfg = cfg or RealizationConfig()
    arr = X.data if isinstance(X, DenseSymMatrix) else np.asarray(X, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("X must be square")
    size = arr.shape[0]
    if pattern is None:
        if m is None or n is None:
            raise ValueError("need either (m, n) or an explicit pattern")
        adj = clique_join_pattern(m, n)
    else:
        adj = np.asarray(pattern, dtype=bool)
    if adj.shape != arr.shape:
        raise ValueError(f"matrix is {size}x{size} but the graph has {adj.shape[0]} vertices")

    sym = float(np.abs(arr - arr.T).max())
    residual = float(np.abs(arr @ arr - np.eye(size)).max())
    thresh = cfg.tol_nonzero * float(np.abs(arr).max())
    violations = []
    big = np.abs(arr) >= thresh
    off = ~np.eye(size, dtype=bool)
    for i, j in zip(*np.nonzero(off & (big != adj))):
        if i < j:
            kind = "missing-edge" if adj[i, j] else "extra-edge"
            violations.append({"i": int(i), "j": int(j), "kind": kind, "value": float(arr[i, j])})
    eig = np.linalg.eigvalsh(0.5 * (arr + arr.T))
    near_plus = np.abs(eig - 1.0) <= cfg.tol_residual
    near_minus = np.abs(eig + 1.0) <= cfg.tol_residual
    spectrum_ok = bool((near_plus | near_minus).all() and near_plus.any() and near_minus.any())
    return VerificationReport(
        size=size,
        symmetry_defect=sym,
        residual=residual,
        orthogonal=residual <= cfg.tol_residual,
        pattern_ok=not violations,
        eigenvalues=[float(x) for x in eig],
        spectrum_ok=spectrum_ok,
        i_plus=int(near_plus.sum()),
        violations=violations,
        tol_residual=cfg.tol_residual,
    )


def realize(m, n, lam=None, cfg: RealizationConfig | None = None) -> RealizationResult:
    """Decide, build the witness and assemble; raises NotRealizable when q = 3."""
    from .decision import construct_witness

    V, W = construct_witness(m, n)
    if lam is not None and not isinstance(lam, EigenvalueList):
        lam = EigenvalueList([-1.0, *lam, 1.0])
    return assemble_join(V, W, m, n, lam, cfg)
