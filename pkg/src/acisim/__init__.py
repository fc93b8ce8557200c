"""Seeded simulation of concept reuse in actor-concept-instance networks."""
from .engine import Simulation, SimulationConfig, SimulationOutcome, run
from .metrics import reuse_entropy
from .ranking import Ranker, SolverParams

__all__ = ["Simulation", "SimulationConfig", "SimulationOutcome", "run", "reuse_entropy",
           "Ranker", "SolverParams"]
