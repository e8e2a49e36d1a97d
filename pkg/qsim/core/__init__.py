"""Core simulator components."""

from qsim.core.cost import estimate
from qsim.core.engine import Simulator, simulate_amplitude, simulate_batch
from qsim.core.model import GraphicalModel, build_model
from qsim.core.oracle import evolve
from qsim.core.ordering import EliminationOrder, restricted_order_pipeline

__all__ = [
    "Simulator",
    "simulate_amplitude",
    "simulate_batch",
    "GraphicalModel",
    "build_model",
    "EliminationOrder",
    "restricted_order_pipeline",
    "estimate",
    "evolve",
]
