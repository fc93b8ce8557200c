"""Candidate generation run once before the simulation loop."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    Actor,
    Concept,
    Instance,
    PUBLISH_CONCEPT,
    PUBLISH_INSTANCE,
    SEMANTIC_ANNOTATION,
)

ACTIVITY_TYPES = (PUBLISH_CONCEPT, PUBLISH_INSTANCE, SEMANTIC_ANNOTATION)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class DistributionSpec:
    kind: str = "clamped-normal"
    mean: float = 0.5
    std: float = 0.5

    def __post_init__(self):
        if self.kind not in ("clamped-normal", "uniform"):
            raise ConfigError(f"distribution kind must be clamped-normal or uniform, got {self.kind!r}")
        if self.kind == "clamped-normal" and not self.std > 0:
            raise ConfigError("std must be > 0 for clamped-normal")

    def sample(self, rng: np.random.Generator, size=None):
        if self.kind == "uniform":
            return rng.uniform(0.0, 1.0, size)
        return sample_clamped_normal(self, rng, size)


CLAMPED_NORMAL = DistributionSpec()
UNIFORM = DistributionSpec("uniform")


def clamp_unit(x):
    return np.clip(x, 0.0, 1.0)


def sample_clamped_normal(spec: DistributionSpec, rng: np.random.Generator, size=None):
    """Normal draw with values outside [0, 1] pushed onto the nearest bound."""
    if spec.kind != "clamped-normal":
        raise ConfigError("sample_clamped_normal needs a clamped-normal spec")
    return clamp_unit(rng.normal(spec.mean, spec.std, size))


@dataclass(frozen=True)
class PoolConfig:
    n_actors: int = 100
    n_concepts: int = 1000
    n_instances: int = 1000
    activity_cap: int = 20_000
    expertise: DistributionSpec = CLAMPED_NORMAL
    concept_quality: DistributionSpec = CLAMPED_NORMAL
    concept_size: DistributionSpec = UNIFORM
    instance_quality: DistributionSpec = CLAMPED_NORMAL

    def __post_init__(self):
        for name in ("n_actors", "n_concepts", "n_instances", "activity_cap"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be a positive integer")


@dataclass
class CandidatePools:
    actors: list[Actor]
    concepts: list[Concept]
    instances: list[Instance]
    activity_cap: int

    def rows(self):
        """Flat ``(kind, id, attr1, attr2)`` rows for a pool dump."""
        for a in self.actors:
            yield ("actor", a.id, a.expertise, "")
        for c in self.concepts:
            yield ("concept", c.id, c.quality, c.size)
        for i in self.instances:
            yield ("instance", i.id, i.quality, "")


def generate_pools(config: PoolConfig, rng: np.random.Generator) -> CandidatePools:
    expertise = config.expertise.sample(rng, config.n_actors)
    cq = config.concept_quality.sample(rng, config.n_concepts)
    cs = config.concept_size.sample(rng, config.n_concepts)
    iq = config.instance_quality.sample(rng, config.n_instances)
    return CandidatePools(
        actors=[Actor(k, float(x)) for k, x in enumerate(expertise)],
        concepts=[Concept(k, float(q), float(s)) for k, (q, s) in enumerate(zip(cq, cs))],
        instances=[Instance(k, float(q)) for k, q in enumerate(iq)],
        activity_cap=config.activity_cap,
    )


def draw_activity_type(rng: np.random.Generator) -> str:
    return ACTIVITY_TYPES[int(rng.integers(3))]
