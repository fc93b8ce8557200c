"""Random, indegree, HITS and PageRank rankings over the annotation graph.

The solvers work on plain edge arrays (``src``, ``dst``, ``w``) so they can
be checked against dense oracles on arbitrary small graphs; the ``rank_*``
functions wrap them for an :class:`~acisim.model.AnnotationGraph`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .candidates import ConfigError
from .model import KINDS, AnnotationGraph

RANDOM = "random"
INDEGREE = "indegree"
HITS = "hits"
PAGERANK = "pagerank"
ALGORITHMS = (RANDOM, INDEGREE, HITS, PAGERANK)

# scores equal to this many decimals are ties, broken by ascending id
TIE_DECIMALS = 12


@dataclass(frozen=True)
class SolverParams:
    damping: float = 0.85
    tolerance: float = 1e-8
    max_iterations: int = 100
    warm_start: bool = False

    def __post_init__(self):
        if not 0.0 < self.damping < 1.0:
            raise ConfigError("damping must lie in (0, 1)")
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be > 0")
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be >= 1")


def indegree_scores(n: int, dst: np.ndarray, w: np.ndarray) -> np.ndarray:
    return np.bincount(dst, weights=w, minlength=n)


def pagerank_scores(n, src, dst, w, active=None, damping=0.85, tolerance=1e-8,
                    max_iterations=100, start=None):
    """Damped PageRank by power iteration.

    Teleport is uniform over active nodes and dangling mass is spread the
    same way. Returns ``(scores, iterations, converged)``.
    """
    active = np.ones(n, dtype=bool) if active is None else active
    n_active = int(active.sum())
    if n_active == 0:
        return np.zeros(n), 0, True
    uniform = active / n_active
    out = np.bincount(src, weights=w, minlength=n)
    coef = w / out[src] if len(src) else w
    dangling = active & (out == 0)
    if start is None:
        x = uniform.copy()
    else:
        x = np.where(active, start, 0.0)
        total = x.sum()
        x = x / total if total > 0 else uniform.copy()
    converged = False
    it = 0
    while it < max_iterations:
        it += 1
        y = damping * np.bincount(dst, weights=coef * x[src], minlength=n)
        y += (damping * x[dangling].sum() + 1.0 - damping) * uniform
        delta = np.abs(y - x).sum()
        x = y
        if delta < tolerance:
            converged = True
            break
    return x / x.sum(), it, converged


def hits_scores(n, src, dst, w, tolerance=1e-8, max_iterations=100):
    """Weighted HITS over the whole graph, L2-normalised each half step.

    Returns ``(authority, hub, iterations, converged)``.
    """
    if len(src) == 0:
        return np.zeros(n), np.zeros(n), 0, True
    hub = np.ones(n) / np.sqrt(n)
    auth = np.zeros(n)
    converged = False
    it = 0
    while it < max_iterations:
        it += 1
        a = np.bincount(dst, weights=w * hub[src], minlength=n)
        a /= np.linalg.norm(a)
        h = np.bincount(src, weights=w * a[dst], minlength=n)
        h /= np.linalg.norm(h)
        delta = np.abs(a - auth).sum() + np.abs(h - hub).sum()
        auth, hub = a, h
        if delta < tolerance:
            converged = True
            break
    return auth, hub, it, converged


@dataclass(frozen=True)
class RankingSnapshot:
    """Immutable per-kind ordering of published entities.

    ``ranks[kind][id]`` is the 1-based rank, 0 when the entity is unranked.
    """

    algorithm: str
    version: int
    ids: dict
    scores: dict
    ranks: dict
    node_scores: Optional[np.ndarray] = None
    converged: bool = True
    iterations: int = 0

    def rank(self, kind: str, entity_id: int) -> Optional[int]:
        r = int(self.ranks[kind][entity_id])
        return r or None

    def top(self, kind: str, k: int) -> np.ndarray:
        return self.ids[kind][:k]

    def ordering(self, kind: str) -> list[int]:
        return self.ids[kind].tolist()


def _kind_ids(graph: AnnotationGraph, kind: str) -> np.ndarray:
    off = graph.offset(kind)
    return np.flatnonzero(graph.active[off:off + graph.size(kind)])


def _snapshot(graph, algorithm, version, node_scores, orders=None, **extra) -> RankingSnapshot:
    ids, scores, ranks = {}, {}, {}
    for kind in KINDS:
        kind_ids = _kind_ids(graph, kind)
        if orders is not None:
            ordered = orders[kind]
            s = np.zeros(len(ordered))
        else:
            s = node_scores[graph.offset(kind) + kind_ids]
            order = np.lexsort((kind_ids, -np.round(s, TIE_DECIMALS)))
            ordered, s = kind_ids[order], s[order]
        r = np.zeros(graph.size(kind), dtype=np.int64)
        r[ordered] = np.arange(1, len(ordered) + 1)
        ids[kind], scores[kind], ranks[kind] = ordered, s, r
    return RankingSnapshot(algorithm, version, ids, scores, ranks, node_scores, **extra)


def rank_random(graph: AnnotationGraph, rng: np.random.Generator, version: int = 0) -> RankingSnapshot:
    orders = {kind: rng.permutation(_kind_ids(graph, kind)) for kind in KINDS}
    return _snapshot(graph, RANDOM, version, None, orders)


def rank_indegree(graph: AnnotationGraph, version: int = 0) -> RankingSnapshot:
    return _snapshot(graph, INDEGREE, version, graph.indegree.astype(np.float64))


def rank_pagerank(graph: AnnotationGraph, params: SolverParams = SolverParams(), version: int = 0,
                  previous: Optional[RankingSnapshot] = None) -> RankingSnapshot:
    start = None
    if params.warm_start and previous is not None and previous.node_scores is not None:
        start = previous.node_scores
    src, dst, w = graph.arrays()
    x, it, ok = pagerank_scores(graph.n_nodes, src, dst, w, graph.active, params.damping,
                                params.tolerance, params.max_iterations, start)
    return _snapshot(graph, PAGERANK, version, x, converged=ok, iterations=it)


def rank_hits(graph: AnnotationGraph, params: SolverParams = SolverParams(),
              version: int = 0) -> RankingSnapshot:
    src, dst, w = graph.arrays()
    auth, _, it, ok = hits_scores(graph.n_nodes, src, dst, w, params.tolerance, params.max_iterations)
    return _snapshot(graph, HITS, version, auth, converged=ok, iterations=it)


class Ranker:
    """Produces snapshots for one algorithm.

    The random mechanism draws its permutation from a generator seeded by
    ``(seed, version)``, so a snapshot depends only on the graph and the
    version it was computed at.
    """

    def __init__(self, algorithm: str, params: SolverParams = SolverParams(), seed: int = 0):
        if algorithm not in ALGORITHMS:
            raise ConfigError(f"algorithm must be one of {', '.join(ALGORITHMS)}; got {algorithm!r}")
        self.algorithm = algorithm
        self.params = params
        self.seed = seed

    def compute(self, graph: AnnotationGraph, version: int = 0,
                previous: Optional[RankingSnapshot] = None) -> RankingSnapshot:
        if self.algorithm == RANDOM:
            return rank_random(graph, np.random.default_rng([self.seed, version]), version)
        if self.algorithm == INDEGREE:
            return rank_indegree(graph, version)
        if self.algorithm == HITS:
            return rank_hits(graph, self.params, version)
        return rank_pagerank(graph, self.params, version, previous)

    def update(self, snapshot: Optional[RankingSnapshot], graph: AnnotationGraph,
               version: int) -> RankingSnapshot:
        if snapshot is not None:
            if snapshot.version > version:
                raise ValueError("snapshot is newer than the requested version")
            if snapshot.version == version:
                return snapshot
        return self.compute(graph, version, snapshot)


def snapshot_rows(snapshot: RankingSnapshot):
    """``(kind, rank, id, score)`` rows for a snapshot dump."""
    for kind in KINDS:
        for r, (i, s) in enumerate(zip(snapshot.ids[kind], snapshot.scores[kind]), start=1):
            yield kind, r, int(i), float(s)
