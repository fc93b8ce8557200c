"""State measurements recorded during a run."""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from typing import Optional, Sequence

import numpy as np

from .model import CONCEPT, PUBLISH_CONCEPT, PUBLISH_INSTANCE, SEMANTIC_ANNOTATION, Store
from .ranking import RankingSnapshot


def reuse_entropy(counts: Sequence[int], unannotated: int = 0) -> Optional[float]:
    """Entropy (nats) of concept usage, corrected for unannotated instances.

    ``counts`` holds the annotation count of every published concept. When
    there are unannotated instances a virtual concept joins the set and each
    such instance is spread evenly over the enlarged set. Returns ``None``
    when there is no mass at all.
    """
    counts = np.asarray(counts, dtype=np.float64)
    m = unannotated
    n_sets = len(counts) + (1 if m > 0 else 0)
    total = counts.sum() + m
    if n_sets == 0 or total <= 0:
        return None
    share = m / n_sets
    masses = counts + share
    if m > 0:
        masses = np.append(masses, share)
    p = masses[masses > 0] / total
    h = float(-(p * np.log(p)).sum())
    return max(h, 0.0)


def top_quality(snapshot: RankingSnapshot, store: Store, k: int) -> Optional[float]:
    """Mean quality of the ``k`` highest-ranked published concepts."""
    if k < 1:
        raise ValueError("k must be >= 1")
    top = snapshot.top(CONCEPT, k)
    if len(top) == 0:
        return None
    return float(np.mean([store.concepts[c].quality for c in top]))


def execution_rate(attempts: int, successes: int) -> Optional[float]:
    if successes > attempts:
        raise ValueError("successes cannot exceed attempts")
    if attempts == 0:
        return None
    return successes / attempts


@dataclass
class Counters:
    pc_attempts: int = 0
    pc_successes: int = 0
    pi_attempts: int = 0
    pi_successes: int = 0
    sa_attempts: int = 0
    sa_successes: int = 0

    _PREFIX = {PUBLISH_CONCEPT: "pc", PUBLISH_INSTANCE: "pi", SEMANTIC_ANNOTATION: "sa"}

    def attempt(self, activity: str) -> None:
        name = f"{self._PREFIX[activity]}_attempts"
        setattr(self, name, getattr(self, name) + 1)

    def success(self, activity: str) -> None:
        name = f"{self._PREFIX[activity]}_successes"
        setattr(self, name, getattr(self, name) + 1)

    def rate(self, activity: str) -> Optional[float]:
        p = self._PREFIX[activity]
        return execution_rate(getattr(self, f"{p}_attempts"), getattr(self, f"{p}_successes"))

    @property
    def attempts(self) -> int:
        return self.pc_attempts + self.pi_attempts + self.sa_attempts

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(getattr(self, f.name) for f in fields(self))


@dataclass(frozen=True)
class TraceRecord:
    sa_index: int
    iteration: int
    entropy: Optional[float]
    top1_quality: Optional[float]
    top10_quality: Optional[float]
    pc_attempts: int
    pc_successes: int
    pi_attempts: int
    pi_successes: int
    sa_attempts: int
    sa_successes: int

    def as_row(self) -> dict:
        return asdict(self)


TRACE_HEADER = [f.name for f in fields(TraceRecord)]


def record(store: Store, snapshot: RankingSnapshot, counters: Counters, iteration: int) -> TraceRecord:
    return TraceRecord(
        sa_index=counters.sa_successes,
        iteration=iteration,
        entropy=reuse_entropy(store.published_counts(), store.unannotated_instances),
        top1_quality=top_quality(snapshot, store, 1),
        top10_quality=top_quality(snapshot, store, 10),
        **asdict(counters),
    )
