"""Entities, the annotation store, and the derived annotation graph.

Node layout of the graph is fixed by the candidate pool sizes: actors occupy
``[0, n_actors)``, concepts the next ``n_concepts`` slots and instances the
rest. Unpublished concepts and instances are inactive nodes with no edges.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

ACTOR = "actor"
CONCEPT = "concept"
INSTANCE = "instance"
KINDS = (ACTOR, CONCEPT, INSTANCE)

PUBLISH_CONCEPT = "publish_concept"
PUBLISH_INSTANCE = "publish_instance"
SEMANTIC_ANNOTATION = "semantic_annotation"


class ModelError(ValueError):
    """Raised when an operation would violate a store invariant."""


@dataclass
class Actor:
    id: int
    expertise: float
    published_concepts: int = 0
    published_instances: int = 0
    annotations_made: int = 0


@dataclass
class Concept:
    id: int
    quality: float
    size: float
    author: Optional[int] = None

    @property
    def published(self) -> bool:
        return self.author is not None


@dataclass
class Instance:
    id: int
    quality: float
    author: Optional[int] = None
    annotation_count: int = 0

    @property
    def published(self) -> bool:
        return self.author is not None


@dataclass(frozen=True)
class Event:
    """A successful store mutation. Unused fields are ``None``."""

    kind: str
    actor: int
    concept: Optional[int] = None
    instance: Optional[int] = None


@dataclass
class AnnotationStats:
    concept_counts: dict[int, int]
    annotated: dict[int, bool]
    total: int
    unannotated_instances: int


class _Growable:
    def __init__(self, dtype, capacity: int = 256):
        self.data = np.zeros(capacity, dtype=dtype)
        self.size = 0

    def append(self, value) -> int:
        if self.size == len(self.data):
            self.data = np.concatenate([self.data, np.zeros_like(self.data)])
        self.data[self.size] = value
        self.size += 1
        return self.size - 1

    def view(self) -> np.ndarray:
        return self.data[: self.size]


class AnnotationGraph:
    """Weighted directed tripartite graph over published entities.

    Actors point at what they publish and at the concepts and instances
    they annotate with; instances point at the concepts annotating them.
    In-degree is maintained incrementally alongside the edge list.
    """

    def __init__(self, n_actors: int, n_concepts: int, n_instances: int):
        self.n_actors = n_actors
        self.n_concepts = n_concepts
        self.n_instances = n_instances
        self.n_nodes = n_actors + n_concepts + n_instances
        self.active = np.zeros(self.n_nodes, dtype=bool)
        self.active[:n_actors] = True
        self.indegree = np.zeros(self.n_nodes, dtype=np.int64)
        self._index: dict[tuple[int, int], int] = {}
        self._src = _Growable(np.int64)
        self._dst = _Growable(np.int64)
        self._w = _Growable(np.float64)

    def offset(self, kind: str) -> int:
        if kind == ACTOR:
            return 0
        if kind == CONCEPT:
            return self.n_actors
        if kind == INSTANCE:
            return self.n_actors + self.n_concepts
        raise ModelError(f"unknown entity kind {kind!r}")

    def size(self, kind: str) -> int:
        return {ACTOR: self.n_actors, CONCEPT: self.n_concepts, INSTANCE: self.n_instances}[kind]

    def node(self, kind: str, entity_id: int) -> int:
        return self.offset(kind) + entity_id

    def activate(self, kind: str, entity_id: int) -> None:
        self.active[self.node(kind, entity_id)] = True

    def add_weight(self, src: int, dst: int, delta: int = 1) -> None:
        key = (src, dst)
        idx = self._index.get(key)
        if idx is None:
            self._index[key] = self._src.append(src)
            self._dst.append(dst)
            self._w.append(delta)
        else:
            self._w.data[idx] += delta
        self.indegree[dst] += delta

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Edge sources, targets and weights, in insertion order."""
        return self._src.view(), self._dst.view(), self._w.view()

    def edges(self) -> dict[tuple[int, int], int]:
        w = self._w.view()
        return {key: int(w[idx]) for key, idx in self._index.items()}

    @property
    def n_edges(self) -> int:
        return self._src.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AnnotationGraph):
            return NotImplemented
        return (
            (self.n_actors, self.n_concepts, self.n_instances)
            == (other.n_actors, other.n_concepts, other.n_instances)
            and np.array_equal(self.active, other.active)
            and self.edges() == other.edges()
            and np.array_equal(self.indegree, other.indegree)
        )

    @classmethod
    def from_events(
        cls, n_actors: int, n_concepts: int, n_instances: int, events: Iterable[Event]
    ) -> "AnnotationGraph":
        """Rebuild the graph from a publication/annotation log."""
        g = cls(n_actors, n_concepts, n_instances)
        for ev in events:
            a = g.node(ACTOR, ev.actor)
            if ev.kind == PUBLISH_CONCEPT:
                g.activate(CONCEPT, ev.concept)
                g.add_weight(a, g.node(CONCEPT, ev.concept))
            elif ev.kind == PUBLISH_INSTANCE:
                g.activate(INSTANCE, ev.instance)
                g.add_weight(a, g.node(INSTANCE, ev.instance))
            elif ev.kind == SEMANTIC_ANNOTATION:
                c = g.node(CONCEPT, ev.concept)
                i = g.node(INSTANCE, ev.instance)
                g.add_weight(a, c)
                g.add_weight(a, i)
                g.add_weight(i, c)
            else:
                raise ModelError(f"unknown event kind {ev.kind!r}")
        return g


class Store:
    """Single-writer store of entities, publications and annotations."""

    def __init__(self, actors: list[Actor], concepts: list[Concept], instances: list[Instance]):
        self.actors = actors
        self.concepts = concepts
        self.instances = instances
        self.annotations: set[tuple[int, int, int]] = set()
        self.events: list[Event] = []
        self.published_concepts: list[int] = []
        self.published_instances: list[int] = []
        # |A_c|, counted over stored triples
        self.concept_usage = np.zeros(len(concepts), dtype=np.int64)
        self.concept_instances: dict[int, set[int]] = {}
        self.unannotated_instances = 0
        self.graph = AnnotationGraph(len(actors), len(concepts), len(instances))

    def _check_actor(self, actor: int) -> Actor:
        if not 0 <= actor < len(self.actors):
            raise ModelError(f"unknown actor {actor}")
        return self.actors[actor]

    def publish(self, kind: str, entity_id: int, author: int) -> None:
        a = self._check_actor(author)
        if kind == CONCEPT:
            entity = self.concepts[entity_id]
        elif kind == INSTANCE:
            entity = self.instances[entity_id]
        else:
            raise ModelError(f"cannot publish a {kind!r}")
        if entity.published:
            raise ModelError(f"{kind} {entity_id} is already published")
        entity.author = author
        g = self.graph
        g.activate(kind, entity_id)
        g.add_weight(g.node(ACTOR, author), g.node(kind, entity_id))
        if kind == CONCEPT:
            a.published_concepts += 1
            self.published_concepts.append(entity_id)
            self.events.append(Event(PUBLISH_CONCEPT, author, concept=entity_id))
        else:
            a.published_instances += 1
            self.published_instances.append(entity_id)
            self.unannotated_instances += 1
            self.events.append(Event(PUBLISH_INSTANCE, author, instance=entity_id))

    def publish_concept(self, concept: int, author: int) -> None:
        self.publish(CONCEPT, concept, author)

    def publish_instance(self, instance: int, author: int) -> None:
        self.publish(INSTANCE, instance, author)

    def add_annotation(self, actor: int, concept: int, instance: int) -> bool:
        """Insert the triple; returns False (and changes nothing) on a duplicate."""
        a = self._check_actor(actor)
        c = self.concepts[concept]
        i = self.instances[instance]
        if not c.published or not i.published:
            raise ModelError("annotations require a published concept and instance")
        triple = (actor, concept, instance)
        if triple in self.annotations:
            return False
        self.annotations.add(triple)
        a.annotations_made += 1
        if i.annotation_count == 0:
            self.unannotated_instances -= 1
        i.annotation_count += 1
        self.concept_usage[concept] += 1
        self.concept_instances.setdefault(concept, set()).add(instance)
        g = self.graph
        an, cn, inn = g.node(ACTOR, actor), g.node(CONCEPT, concept), g.node(INSTANCE, instance)
        g.add_weight(an, cn)
        g.add_weight(an, inn)
        # every new triple is a new distinct annotator of (instance, concept)
        g.add_weight(inn, cn)
        self.events.append(Event(SEMANTIC_ANNOTATION, actor, concept, instance))
        return True

    def annotation_stats(self) -> AnnotationStats:
        return AnnotationStats(
            concept_counts={c: int(self.concept_usage[c]) for c in self.published_concepts},
            annotated={i: self.instances[i].annotation_count > 0 for i in self.published_instances},
            total=len(self.annotations),
            unannotated_instances=self.unannotated_instances,
        )

    def published_counts(self) -> np.ndarray:
        """|A_c| for every published concept, in publication order."""
        return self.concept_usage[self.published_concepts]
