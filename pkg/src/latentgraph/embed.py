"""Embeddings: classical scaling, procrustes alignment with scaling, and
stress majorization (SMACOF) over partially observed dissimilarities.

The localization pipeline keeps hop estimates only up to a hop threshold and
lets SMACOF reconcile the remaining local distances, which removes the
global bias introduced by non-convex domains.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, eigh
from scipy.sparse.linalg import eigsh
from scipy.spatial.distance import pdist, squareform

from .hopdist import HopMatrix

__all__ = [
    "EmbeddingResult",
    "PartialDissimilarity",
    "ProcrustesResult",
    "classical_mds",
    "localize",
    "procrustes_align",
    "smacof",
]

# above this size the dense eigensolver loses to Lanczos on the top block
_DENSE_EIG_LIMIT = 1200


@dataclass(frozen=True, eq=False)
class EmbeddingResult:
    coords: np.ndarray
    eigenvalues: np.ndarray | None = None
    stress: float | None = None
    iterations: int = 0
    stress_trace: tuple[float, ...] = ()


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    # deterministic sign convention: largest-magnitude entry positive
    idx = np.abs(vecs).argmax(axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs


def classical_mds(d: np.ndarray, v: int) -> EmbeddingResult:
    """Classical scaling of a finite symmetric dissimilarity matrix.

    Double-centers the squared dissimilarities, takes the top ``v``
    eigenpairs, and scales eigenvectors by the square roots of the
    eigenvalues clamped at zero (hop matrices are not exactly Euclidean).
    Raises when the leading spectrum has no positive part.
    """
    d = np.asarray(d, dtype=np.float64)
    n = d.shape[0]
    if d.shape != (n, n):
        raise ValueError("dissimilarity matrix must be square")
    if not np.isfinite(d).all():
        raise ValueError("dissimilarities must be finite")
    if v < 1:
        raise ValueError("need v >= 1")
    d2 = d * d
    row = d2.mean(axis=1, keepdims=True)
    col = d2.mean(axis=0, keepdims=True)
    b = -0.5 * (d2 - row - col + d2.mean())
    b = 0.5 * (b + b.T)
    if n <= _DENSE_EIG_LIMIT or v >= n - 1:
        w, u = eigh(b)
        order = np.argsort(w)[::-1][:v]
        lam, u = w[order], u[:, order]
    else:
        v0 = np.full(n, 1.0 / np.sqrt(n))  # fixed start vector: deterministic
        w, u = eigsh(b, k=v, which="LA", v0=v0)
        order = np.argsort(w)[::-1]
        lam, u = w[order], u[:, order]
    if np.all(lam <= 0):
        raise ValueError("no positive spectrum: dissimilarities carry no Euclidean part")
    coords = _fix_signs(u) * np.sqrt(np.clip(lam, 0.0, None))
    coords = coords - coords.mean(axis=0)
    return EmbeddingResult(coords=coords, eigenvalues=lam)


@dataclass(frozen=True, eq=False)
class ProcrustesResult:
    aligned: np.ndarray
    scale: float
    rotation: np.ndarray
    rmse: float


def procrustes_align(source: np.ndarray, target: np.ndarray) -> ProcrustesResult:
    """Best match of ``source`` onto ``target`` over scale, orthogonal maps
    (reflections allowed; the latent model is identifiable only up to
    isometry) and translation.  Returns the transformed source and the root
    mean squared residual.
    """
    src = np.asarray(source, dtype=np.float64)
    tgt = np.asarray(target, dtype=np.float64)
    if src.shape != tgt.shape:
        raise ValueError("source and target must have equal shapes")
    n, v = src.shape
    if n < v + 1:
        raise ValueError("need at least v+1 points")
    sc = src - src.mean(axis=0)
    tc = tgt - tgt.mean(axis=0)
    norm2 = (sc ** 2).sum()
    if norm2 == 0:
        raise ValueError("source has zero spread")
    u, sv, vt = np.linalg.svd(sc.T @ tc)
    rotation = u @ vt  # polar factor of the cross-covariance
    scale = sv.sum() / norm2
    aligned = scale * (sc @ rotation) + tgt.mean(axis=0)
    rmse = float(np.sqrt(((scale * (sc @ rotation) - tc) ** 2).sum() / n))
    return ProcrustesResult(aligned=aligned, scale=float(scale), rotation=rotation, rmse=rmse)


@dataclass(frozen=True, eq=False)
class PartialDissimilarity:
    """Dissimilarities with a presence mask; the diagonal is always present
    and zero, present entries are symmetric."""

    values: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.float64)
        mask = np.ascontiguousarray(self.mask, dtype=bool)
        n = vals.shape[0]
        if vals.shape != (n, n) or mask.shape != (n, n):
            raise ValueError("values and mask must be square and equal shaped")
        if not np.array_equal(mask, mask.T):
            raise ValueError("mask must be symmetric")
        if not mask.diagonal().all():
            raise ValueError("diagonal must be present")
        if np.any(vals.diagonal() != 0):
            raise ValueError("diagonal must be zero")
        sym = np.where(mask, vals, 0.0)
        if not np.array_equal(sym, sym.T):
            raise ValueError("present entries must be symmetric")
        if np.any(sym < 0):
            raise ValueError("dissimilarities must be non-negative")
        vals.setflags(write=False)
        mask.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "mask", mask)

    @property
    def n(self) -> int:
        return self.values.shape[0]


def localize(hops: HopMatrix, max_hops: int, r: float) -> PartialDissimilarity:
    """Keep scaled hop distances up to ``max_hops``; mark the rest missing."""
    if max_hops < 1:
        raise ValueError("need max_hops >= 1")
    if r <= 0:
        raise ValueError("scale must be positive")
    mask = hops.hops <= max_hops
    values = np.where(mask, r * hops.hops.astype(np.float64), 0.0)
    return PartialDissimilarity(values=values, mask=mask)


def _mask_connected(mask: np.ndarray) -> bool:
    n = mask.shape[0]
    w = mask.copy()
    np.fill_diagonal(w, False)
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    frontier = np.array([0])
    while frontier.size:
        nxt = w[frontier].any(axis=0) & ~seen
        if not nxt.any():
            break
        seen |= nxt
        frontier = np.flatnonzero(nxt)
    return bool(seen.all())


def smacof(
    partial: PartialDissimilarity,
    init: np.ndarray,
    max_iter: int = 500,
    rel_tol: float = 1e-6,
) -> EmbeddingResult:
    """Metric stress majorization with binary weights on present entries.

    Iterates the Guttman transform; with the exact solve used here the
    stress sequence is non-increasing.  Stops at ``max_iter`` or when the
    relative stress decrease falls below ``rel_tol``.
    """
    n = partial.n
    x = np.array(init, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] != n:
        raise ValueError("init must be n-by-v")
    if not _mask_connected(partial.mask):
        raise ValueError("localization threshold too small: mask graph is disconnected")
    w = partial.mask & ~np.eye(n, dtype=bool)
    delta = partial.values
    iu = np.triu_indices(n, 1)
    sel = w[iu]
    full = bool(w[iu].all())
    if not full:
        # Guttman step solves V x = B(x) x; V = Laplacian of the mask graph,
        # made definite by the rank-one centering term (solution stays centered
        # because B(x) x is orthogonal to the ones vector)
        vmat = np.diag(w.sum(axis=1).astype(np.float64)) - w
        factor = cho_factor(vmat + 1.0 / n, lower=True)

    def stress_of(y: np.ndarray) -> float:
        dis = squareform(pdist(y))
        diff = (dis - delta)[iu][sel]
        return float((diff ** 2).sum())

    x = x - x.mean(axis=0)
    trace = [stress_of(x)]
    iterations = 0
    for it in range(1, max_iter + 1):
        dis = squareform(pdist(x))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dis > 0, delta / np.where(dis > 0, dis, 1.0), 0.0) * w
        bmat = -ratio
        np.fill_diagonal(bmat, ratio.sum(axis=1))
        if full:
            x = (bmat @ x) / n
        else:
            x = cho_solve(factor, bmat @ x)
        x = x - x.mean(axis=0)
        s = stress_of(x)
        trace.append(s)
        iterations = it
        prev = trace[-2]
        if prev <= 0 or (prev - s) / prev < rel_tol:
            break
    return EmbeddingResult(
        coords=x,
        eigenvalues=None,
        stress=trace[-1],
        iterations=iterations,
        stress_trace=tuple(trace),
    )
