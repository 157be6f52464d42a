"""Maximum variance unfolding of a connected graph.

Maximizes the total squared pairwise spread of an embedding subject to every
edge having length at most one, via an increasing-penalty first-order
method.  The penalty stages are scaled by the critical coefficient
``2 n / lambda_2`` (algebraic connectivity of the graph): below
``n / lambda_2`` the penalized objective is unbounded along a scaling ray,
so fixed schedules cannot work across graphs.  A final rescale snaps the
iterate to exact feasibility, which is what the hop-bound comparison needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh
from scipy.spatial.distance import pdist, squareform

from .embed import classical_mds
from .hopdist import HopMatrix, all_pairs_hops
from .linkgraph import Adjacency

__all__ = [
    "MvuBoundReport",
    "MvuSolution",
    "check_mvu_bound",
    "discrepancy_ratio",
    "solve_mvu",
]


@dataclass(frozen=True, eq=False)
class MvuSolution:
    """Feasible unfolding: centered coordinates, their induced metric, the
    spread objective (sum over unordered pairs of squared distances) and the
    residual edge-constraint violation (zero after the final rescale)."""

    coords: np.ndarray
    objective: float
    max_edge_violation: float
    gamma: np.ndarray
    trace: tuple = field(repr=False, default=())


def _spread(x: np.ndarray) -> float:
    # sum_{i<j} ||x_i - x_j||^2, exact for uncentered inputs too
    n = x.shape[0]
    return float(n * (x ** 2).sum() - (x.sum(axis=0) ** 2).sum())


def _edge_lengths(x: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.linalg.norm(x[a] - x[b], axis=1)


def _algebraic_connectivity(adj: Adjacency) -> float:
    w = adj.dense().astype(np.float64)
    lap = np.diag(w.sum(axis=1)) - w
    return float(np.sort(eigh(lap, eigvals_only=True))[1])


def solve_mvu(
    adj: Adjacency,
    rank: int,
    schedule: tuple[float, ...] = (1.0, 10.0, 100.0, 1000.0),
    seed: int = 0,
    steps_per_stage: int = 2000,
) -> MvuSolution:
    """Approximately solve the unfolding program in ``rank`` dimensions.

    Initializes from classical scaling of the hop matrix (shrunk to
    feasibility, plus a small seeded jitter to escape low-rank starts), then
    runs backtracking gradient ascent on the penalized objective for each
    penalty level ``2 n / lambda_2 * s`` along the schedule.  The ascent is
    monotone in the penalized objective at fixed penalty.  Requires a
    connected graph: otherwise the spread is unbounded.
    """
    if rank < 2:
        raise ValueError("need rank >= 2")
    n = adj.n
    hops = all_pairs_hops(adj)
    if not hops.is_connected():
        raise ValueError("graph is disconnected: unfolding objective is unbounded")
    edges = adj.edges()
    a, b = edges[:, 0], edges[:, 1]

    x = classical_mds(hops.to_float(), rank).coords
    rng = np.random.default_rng(seed)
    x = x + 1e-3 * np.sqrt((x ** 2).mean()) * rng.standard_normal(x.shape)
    x -= x.mean(axis=0)
    ml = _edge_lengths(x, a, b).max()
    if ml > 1.0:
        x /= ml

    mu_base = 2.0 * n / _algebraic_connectivity(adj)

    def penalized(xc: np.ndarray, mu: float) -> float:
        excess = np.maximum(_edge_lengths(xc, a, b) - 1.0, 0.0)
        return _spread(xc) - mu * float((excess ** 2).sum())

    trace = []
    step = 1e-2
    for stage, s in enumerate(schedule):
        mu = mu_base * s
        fcur = penalized(x, mu)
        for it in range(steps_per_stage):
            lengths = _edge_lengths(x, a, b)
            excess = np.maximum(lengths - 1.0, 0.0)
            coef = 2.0 * excess / np.where(lengths > 0, lengths, 1.0)
            pull = coef[:, None] * (x[a] - x[b])
            gpen = np.empty_like(x)
            for k in range(x.shape[1]):
                gpen[:, k] = np.bincount(a, weights=pull[:, k], minlength=n) - np.bincount(
                    b, weights=pull[:, k], minlength=n
                )
            grad = 2.0 * n * x - mu * gpen
            gnorm2 = float((grad ** 2).sum())
            if gnorm2 < 1e-18:
                break
            accepted = False
            for _ in range(60):
                xn = x + step * grad
                xn -= xn.mean(axis=0)
                fn = penalized(xn, mu)
                if fn >= fcur + 1e-4 * step * gnorm2:
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                break
            rel = (fn - fcur) / max(abs(fcur), 1e-300)
            x, fcur = xn, fn
            step *= 1.3
            trace.append(
                (
                    stage,
                    it,
                    _spread(x),
                    float(np.maximum(_edge_lengths(x, a, b) - 1.0, 0.0).max(initial=0.0)),
                    fcur,
                )
            )
            if rel < 1e-12:
                break

    # snap to exact feasibility; any feasible point satisfies the hop bound
    ml = _edge_lengths(x, a, b).max()
    if ml > 1.0:
        x = x / ml
        x -= x.mean(axis=0)
    gamma = squareform(pdist(x))
    violation = float(np.maximum(_edge_lengths(x, a, b) - 1.0, 0.0).max(initial=0.0))
    return MvuSolution(
        coords=x,
        objective=_spread(x),
        max_edge_violation=violation,
        gamma=gamma,
        trace=tuple(trace),
    )


@dataclass(frozen=True)
class MvuBoundReport:
    pairs: int
    violations: int
    max_excess: float
    tol_base: float


def check_mvu_bound(sol: MvuSolution, hops: HopMatrix, tol: float = 1e-9) -> MvuBoundReport:
    """Count pairs where the unfolded metric exceeds the hop distance.

    A feasible point can never exceed it (chain the edges of a shortest
    path); residual edge violations propagate multiplicatively, so the
    tolerance per pair is ``max_edge_violation * hops + tol``.
    """
    if sol.gamma.shape[0] != hops.n:
        raise ValueError("solution and hop matrix sizes differ")
    iu = np.triu_indices(hops.n, 1)
    h = hops.to_float()[iu]
    g = sol.gamma[iu]
    finite = np.isfinite(h)
    excess = g[finite] - h[finite]
    allowed = sol.max_edge_violation * h[finite] + tol
    return MvuBoundReport(
        pairs=int(finite.sum()),
        violations=int((excess > allowed).sum()),
        max_excess=float(excess.max()) if excess.size else 0.0,
        tol_base=tol,
    )


def discrepancy_ratio(sol: MvuSolution, truth: np.ndarray, r: float, eta: float) -> float:
    """Empirical constant of the squared-distance discrepancy bound.

    With ``dt = r * gamma``, returns ``sum |dt^2 - d^2| / (eta * sum d^2)``
    over unordered pairs.  ``eta`` must come from a bound report certifying
    ``(1-eta) d <= est <= (1+eta) d``; the universal constant it estimates
    has no known numeric value, so this is report-only.
    """
    if not 0 < eta < 1:
        raise ValueError("eta must lie in (0, 1)")
    n = sol.gamma.shape[0]
    if truth.shape != (n, n):
        raise ValueError("solution and truth sizes differ")
    iu = np.triu_indices(n, 1)
    dt = r * sol.gamma[iu]
    d = truth[iu]
    return float(np.abs(dt ** 2 - d ** 2).sum() / (eta * (d ** 2).sum()))
