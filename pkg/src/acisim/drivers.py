"""Cost and reward estimates for publishing concepts, publishing instances
and semantic annotation.

All functions are pure; rank arguments are 1-based and ``None`` means the
entity is absent from the ranking.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .candidates import ConfigError


@dataclass(frozen=True)
class EffortLevels:
    ue_pc: float = 1.0
    ue_pi: float = 1.0
    ue_sa: float = 1.0

    def __post_init__(self):
        for name in ("ue_pc", "ue_pi", "ue_sa"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be > 0")


@dataclass(frozen=True)
class DriverParams:
    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ConfigError("alpha and beta must be > 0")


@dataclass(frozen=True)
class CostRewardEstimate:
    cost: float
    reward: float

    def executes(self, strict: bool = True) -> bool:
        return executes(self.reward, self.cost, strict)


def executes(reward: float, cost: float, strict: bool = True) -> bool:
    """The execution gate. With ``strict`` a tie does not execute."""
    return reward > cost if strict else reward >= cost


def expertise_decay(n: int) -> float:
    """Per-activity expertise driver keyed to how often the actor did it."""
    if n < 0:
        raise ValueError("activity count must be non-negative")
    if n == 0:
        return 1.0
    if n == 1:
        return 0.75
    return 1.0 / n


def cost_publish_concept(size: float, quality: float, expertise: float, published_concepts: int,
                         params: DriverParams = DriverParams(),
                         efforts: EffortLevels = EffortLevels()) -> float:
    cds = (quality + expertise + expertise_decay(published_concepts)) / 3 * efforts.ue_pc
    return size ** params.alpha * cds


def tcp_driver(n_published_concepts: int, n_published_instances: int,
               top_concept_instances: int) -> float:
    """Top-concept popularity: 1 minus the share of instances the top concept annotates.

    A young system (fewer than 10 concepts or instances) always reads 1.0.
    """
    if n_published_concepts < 10 or n_published_instances < 10:
        return 1.0
    return 1.0 - top_concept_instances / n_published_instances


def reward_publish_concept(quality: float, top_quality: Optional[float], tcp: float,
                           params: DriverParams = DriverParams()) -> float:
    tcq = 1.0 if top_quality is None else top_quality
    return quality ** params.beta * (tcq + tcp) / 2


def cost_publish_instance(published_instances: int, efforts: EffortLevels = EffortLevels()) -> float:
    return expertise_decay(published_instances) * efforts.ue_pi


def reward_publish_instance(quality: float) -> float:
    return quality


def choice_cost(rank: Optional[int], own: bool) -> float:
    """Cost of picking a concept (or instance): 0 for one's own, 0.1 per block of ten ranks."""
    if own:
        return 0.0
    if rank is None or rank > 100:
        return 1.0
    return math.ceil(rank / 10) / 10


def cost_semantic_annotation(annotations_made: int, cc: float, ci: float,
                             efforts: EffortLevels = EffortLevels()) -> float:
    return (expertise_decay(annotations_made) + cc + ci) / 3 * efforts.ue_sa


def visibility(rank: Optional[int]) -> float:
    """1.0 for the top entity, 0.75 inside the top ten, then 10/rank.

    The tail is capped at 0.75 so ranks 11-13 never beat the top ten.
    """
    if rank is None:
        return 0.0
    if rank < 1:
        raise ValueError("ranks are 1-based")
    if rank == 1:
        return 1.0
    if rank <= 10:
        return 0.75
    return min(0.75, 10.0 / rank)


def reward_semantic_annotation(cv: float, iv: float, cq: float, iq: float) -> float:
    return (cv + iv + cq + iq) / 4
