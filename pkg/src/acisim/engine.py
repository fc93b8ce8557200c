"""The simulation loop: pick an actor and an activity, estimate, execute, re-rank, record.

Random draws per iteration happen in a fixed order: actor, activity type,
then target selection. Cost and reward estimation draws nothing.
"""
from __future__ import annotations

import csv
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import drivers
from .candidates import ConfigError, PoolConfig, draw_activity_type, generate_pools
from .drivers import DriverParams, EffortLevels
from .metrics import TRACE_HEADER, Counters, TraceRecord, record, reuse_entropy, top_quality
from .model import (
    CONCEPT,
    INSTANCE,
    PUBLISH_CONCEPT,
    PUBLISH_INSTANCE,
    SEMANTIC_ANNOTATION,
    Store,
)
from .ranking import RANDOM, PAGERANK, Ranker, RankingSnapshot, SolverParams

log = logging.getLogger(__name__)

GENERATOR = "numpy.random.PCG64"
STOP_REACHED = "StopReached"
CAP_EXCEEDED = "CapExceeded"
EVENT_HEADER = ["iter", "event_kind", "actor", "concept", "instance", "success"]


@dataclass(frozen=True)
class SimulationConfig:
    n_actors: int = 100
    n_concepts: int = 1000
    n_instances: int = 1000
    cap: int = 20_000
    stop: int = 1000
    efforts: EffortLevels = EffortLevels()
    params: DriverParams = DriverParams()
    solver: SolverParams = SolverParams()
    algorithm: str = PAGERANK
    seed: int = 0
    cadence: int = 1
    strict_gate: bool = False

    def __post_init__(self):
        if self.stop < 1:
            raise ConfigError("stop must be >= 1")
        if self.cap < self.stop:
            raise ConfigError("cap must be >= stop")
        if self.cadence < 1:
            raise ConfigError("cadence must be >= 1")
        # raises on bad sizes or algorithm
        self.pool_config()
        Ranker(self.algorithm, self.solver, self.seed)

    def pool_config(self) -> PoolConfig:
        return PoolConfig(self.n_actors, self.n_concepts, self.n_instances, self.cap)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SimulationOutcome:
    termination: str
    iterations: int
    counters: Counters
    trace: list[TraceRecord]
    summary: dict
    events: list[tuple] = field(default_factory=list)


class SelectionError(Exception):
    """No valid target exists for the chosen activity."""


def select_publication_target(pool: list[int], rng: np.random.Generator) -> int:
    if not pool:
        raise SelectionError("candidate pool exhausted")
    return pool[int(rng.integers(len(pool)))]


def select_annotation_pair(actor: int, store: Store, snapshot: RankingSnapshot,
                           rng: np.random.Generator, own_concepts: list[int],
                           own_unannotated: set[int]) -> tuple[int, int]:
    """Concept from own concepts plus the top ten; instance from own unannotated ones first."""
    published = store.published_concepts
    if not published or not store.published_instances:
        raise SelectionError("need a published concept and instance")
    if snapshot.algorithm == RANDOM:
        picks = rng.choice(len(published), size=min(10, len(published)), replace=False)
        shown = [published[k] for k in picks]
    else:
        shown = snapshot.top(CONCEPT, 10).tolist()
    choices = sorted(set(own_concepts).union(shown))
    concept = choices[int(rng.integers(len(choices)))]
    if own_unannotated:
        mine = sorted(own_unannotated)
        instance = mine[int(rng.integers(len(mine)))]
    else:
        pool = store.published_instances
        instance = pool[int(rng.integers(len(pool)))]
    return concept, instance


class Simulation:
    def __init__(self, config: SimulationConfig):
        self.config = config
        pool_seq, run_seq = np.random.SeedSequence(config.seed).spawn(2)
        self.pools = generate_pools(config.pool_config(), np.random.default_rng(pool_seq))
        self.rng = np.random.default_rng(run_seq)
        self.store = Store(self.pools.actors, self.pools.concepts, self.pools.instances)
        self.ranker = Ranker(config.algorithm, config.solver, config.seed)
        self.snapshot = self.ranker.compute(self.store.graph, 0)
        self.counters = Counters()
        self.trace: list[TraceRecord] = []
        self.events: list[tuple] = []
        self.iteration = 0
        self.unpublished = {CONCEPT: list(range(config.n_concepts)),
                            INSTANCE: list(range(config.n_instances))}
        self.own_concepts: list[list[int]] = [[] for _ in range(config.n_actors)]
        self.own_unannotated: list[set[int]] = [set() for _ in range(config.n_actors)]
        self._since_rank = 0

    @property
    def version(self) -> int:
        return len(self.store.events)

    def _gate(self, reward: float, cost: float) -> bool:
        return drivers.executes(reward, cost, self.config.strict_gate)

    def _top_concept(self) -> Optional[int]:
        top = self.snapshot.top(CONCEPT, 1)
        return int(top[0]) if len(top) else None

    def _publish_concept(self, actor: int):
        cid = select_publication_target(self.unpublished[CONCEPT], self.rng)
        c, a, cfg = self.store.concepts[cid], self.store.actors[actor], self.config
        cost = drivers.cost_publish_concept(c.size, c.quality, a.expertise, a.published_concepts,
                                            cfg.params, cfg.efforts)
        top = self._top_concept()
        tcq = None if top is None else self.store.concepts[top].quality
        tcp = drivers.tcp_driver(len(self.store.published_concepts),
                                 len(self.store.published_instances),
                                 len(self.store.concept_instances.get(top, ())))
        reward = drivers.reward_publish_concept(c.quality, tcq, tcp, cfg.params)
        if not self._gate(reward, cost):
            return False, cid, None
        self.store.publish_concept(cid, actor)
        self.unpublished[CONCEPT].remove(cid)
        self.own_concepts[actor].append(cid)
        return True, cid, None

    def _publish_instance(self, actor: int):
        iid = select_publication_target(self.unpublished[INSTANCE], self.rng)
        i, a = self.store.instances[iid], self.store.actors[actor]
        cost = drivers.cost_publish_instance(a.published_instances, self.config.efforts)
        reward = drivers.reward_publish_instance(i.quality)
        if not self._gate(reward, cost):
            return False, None, iid
        self.store.publish_instance(iid, actor)
        self.unpublished[INSTANCE].remove(iid)
        self.own_unannotated[actor].add(iid)
        return True, None, iid

    def _annotate(self, actor: int):
        store, snap = self.store, self.snapshot
        cid, iid = select_annotation_pair(actor, store, snap, self.rng,
                                          self.own_concepts[actor], self.own_unannotated[actor])
        if (actor, cid, iid) in store.annotations:
            return False, cid, iid
        c, i, a = store.concepts[cid], store.instances[iid], store.actors[actor]
        c_rank, i_rank = snap.rank(CONCEPT, cid), snap.rank(INSTANCE, iid)
        cc = drivers.choice_cost(c_rank, c.author == actor)
        ci = drivers.choice_cost(i_rank, i.author == actor)
        cost = drivers.cost_semantic_annotation(a.annotations_made, cc, ci, self.config.efforts)
        reward = drivers.reward_semantic_annotation(drivers.visibility(c_rank),
                                                    drivers.visibility(i_rank), c.quality, i.quality)
        if not self._gate(reward, cost):
            return False, cid, iid
        store.add_annotation(actor, cid, iid)
        self.own_unannotated[i.author].discard(iid)
        return True, cid, iid

    def step(self) -> bool:
        """Run one iteration; returns whether the activity executed."""
        if self.iteration >= self.config.cap:
            raise RuntimeError("iteration cap exceeded")
        self.iteration += 1
        actor = int(self.rng.integers(self.config.n_actors))
        activity = draw_activity_type(self.rng)
        self.counters.attempt(activity)
        handler = {PUBLISH_CONCEPT: self._publish_concept,
                   PUBLISH_INSTANCE: self._publish_instance,
                   SEMANTIC_ANNOTATION: self._annotate}[activity]
        try:
            ok, cid, iid = handler(actor)
        except SelectionError:
            ok, cid, iid = False, None, None
        self.events.append((self.iteration, activity, actor, cid, iid, int(ok)))
        if not ok:
            return False
        self.counters.success(activity)
        self._since_rank += 1
        if self._since_rank >= self.config.cadence:
            self.snapshot = self.ranker.update(self.snapshot, self.store.graph, self.version)
            self._since_rank = 0
        if activity == SEMANTIC_ANNOTATION:
            self.trace.append(record(self.store, self.snapshot, self.counters, self.iteration))
        return True

    def run(self) -> SimulationOutcome:
        cfg = self.config
        while self.counters.sa_successes < cfg.stop and self.iteration < cfg.cap:
            self.step()
        termination = STOP_REACHED if self.counters.sa_successes >= cfg.stop else CAP_EXCEEDED
        if termination == CAP_EXCEEDED:
            log.warning("seed %d (%s): cap of %d iterations reached with %d annotations",
                        cfg.seed, cfg.algorithm, cfg.cap, self.counters.sa_successes)
        return SimulationOutcome(termination, self.iteration, self.counters, self.trace,
                                 self.summary(termination), self.events)

    def summary(self, termination: str) -> dict:
        store, snap, counters = self.store, self.snapshot, self.counters
        return {
            "termination": termination,
            "iterations": self.iteration,
            "generator": GENERATOR,
            "seed": self.config.seed,
            "algorithm": self.config.algorithm,
            "config": self.config.to_dict(),
            "counters": asdict(counters),
            "execution_rates": {
                "publish_concept": counters.rate(PUBLISH_CONCEPT),
                "publish_instance": counters.rate(PUBLISH_INSTANCE),
                "semantic_annotation": counters.rate(SEMANTIC_ANNOTATION),
            },
            "final": {
                "entropy": reuse_entropy(store.published_counts(), store.unannotated_instances),
                "top1_quality": top_quality(snap, store, 1),
                "top10_quality": top_quality(snap, store, 10),
                "published_concepts": len(store.published_concepts),
                "published_instances": len(store.published_instances),
                "annotations": len(store.annotations),
                "unannotated_instances": store.unannotated_instances,
                "ranking_converged": snap.converged,
            },
        }


def run(config: SimulationConfig) -> SimulationOutcome:
    return Simulation(config).run()


def _cell(value) -> str:
    return "" if value is None else str(value)


def write_trace_csv(path, trace: list[TraceRecord]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        for rec in trace:
            writer.writerow([_cell(v) for v in rec.as_row().values()])


def read_trace_csv(path) -> list[dict]:
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def write_event_log(path, events: list[tuple]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(EVENT_HEADER)
        for row in events:
            writer.writerow([_cell(v) for v in row])


def write_summary_json(path, summary: dict) -> None:
    Path(path).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
