"""The simulator - ties model building, ordering and contraction together."""

import logging
from collections.abc import Iterable, Mapping

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from qsim.config import Settings, get_settings
from qsim.core.contraction import form_buckets, merge_free_tensors, process_buckets
from qsim.core.cost import StepCounter, estimate
from qsim.core.model import GraphicalModel, bits_to_fixed, build_model, factor_scopes
from qsim.core.ordering import EliminationOrder, restricted_order_pipeline
from qsim.core.tensor import DenseTensor
from qsim.models import Circuit, CostReport

log = logging.getLogger(__name__)


class Plan(BaseModel):
    """Contraction plan of one model: order, its treewidth and where to stop."""
    model_config = ConfigDict(frozen=True)

    order: EliminationOrder
    treewidth: int
    stop_index: int


class Simulator:
    """
    Amplitude simulator driven by Settings.

    For every request:
    1. Build the graphical model with the batch qubits left open
    2. Find an order with the open variables ranked last
    3. Form buckets and eliminate up to |V| - |C|
    4. Merge the leftover tensors into the batch tensor
    """

    def __init__(self, settings: Settings | None = None):
        self.settings = settings or get_settings()

    def plan(self, model: GraphicalModel) -> Plan:
        order, treewidth = restricted_order_pipeline(
            model.graph,
            model.free_vars,
            heuristic=self.settings.heuristic,
            exhaustive_limit=self.settings.exhaustive_limit,
        )
        plan = Plan(order=order, treewidth=treewidth, stop_index=len(order) - len(model.free_vars))
        log.info(
            f"Plan: {len(order)} variables, treewidth {treewidth}, stop at {plan.stop_index}"
        )
        return plan

    def contract(self, model: GraphicalModel, counter: StepCounter | None = None) -> DenseTensor:
        plan = self.plan(model)
        buckets = form_buckets(model, plan.order)
        leftovers, accumulator = process_buckets(buckets, plan.order, plan.stop_index, counter)
        return merge_free_tensors(leftovers, model.free_vars, accumulator)

    def simulate_amplitude(self, circuit: Circuit, bitstring: str | Iterable[int]) -> complex:
        """<x|U|0> for one output bitstring (qubit 0 leftmost)."""
        model = build_model(circuit, (), bits_to_fixed(bitstring, circuit.n_qubits))
        return self.contract(model).item()

    def simulate_batch(
        self,
        circuit: Circuit,
        batch_qubits: Iterable[int],
        fixed_bits: Mapping[int, int] | None = None,
    ) -> DenseTensor:
        """
        All amplitudes over the batch qubits at once.

        The result is indexed by the batch qubits in increasing order, so the
        lowest batch qubit is the most significant bit of the flat index.
        """
        model = build_model(circuit, batch_qubits, fixed_bits)
        return self.contract(model)

    def simulate_full_state(self, circuit: Circuit) -> np.ndarray:
        return self.simulate_batch(circuit, range(circuit.n_qubits)).flat()

    def estimate_cost(
        self,
        circuit: Circuit,
        batch_qubits: Iterable[int] = (),
        fixed_bits: Mapping[int, int] | None = None,
    ) -> tuple[Plan, CostReport]:
        if fixed_bits is None:
            batch = set(batch_qubits)
            fixed_bits = {q: 0 for q in range(circuit.n_qubits) if q not in batch}
        model = build_model(circuit, batch_qubits, fixed_bits)
        plan = self.plan(model)
        report = estimate(model.graph, plan.order, model.free_vars, factor_scopes(model))
        return plan, report

    def measured_cost(
        self,
        circuit: Circuit,
        batch_qubits: Iterable[int] = (),
        fixed_bits: Mapping[int, int] | None = None,
    ) -> tuple[DenseTensor, CostReport]:
        """Run the contraction and return what it actually did, step by step."""
        model = build_model(circuit, batch_qubits, fixed_bits)
        counter = StepCounter()
        result = self.contract(model, counter)
        return result, counter.report()


def simulate_amplitude(
    circuit: Circuit, bitstring: str | Iterable[int], settings: Settings | None = None
) -> complex:
    return Simulator(settings).simulate_amplitude(circuit, bitstring)


def simulate_batch(
    circuit: Circuit,
    batch_qubits: Iterable[int],
    fixed_bits: Mapping[int, int] | None = None,
    settings: Settings | None = None,
) -> DenseTensor:
    return Simulator(settings).simulate_batch(circuit, batch_qubits, fixed_bits)


def batch_frame(
    n_qubits: int,
    batch_qubits: Iterable[int],
    fixed_bits: Mapping[int, int],
    result: DenseTensor,
) -> pd.DataFrame:
    """One row per batch entry: full output bitstring, real/imaginary part, probability."""
    batch = sorted(set(batch_qubits))
    values = result.flat()
    rows = []
    for index, value in enumerate(values):
        bits = dict(fixed_bits)
        for pos, q in enumerate(batch):
            bits[q] = (index >> (len(batch) - 1 - pos)) & 1
        rows.append(
            {
                "bitstring": "".join(str(bits[q]) for q in range(n_qubits)),
                "re": value.real,
                "im": value.imag,
                "prob": abs(value) ** 2,
            }
        )
    return pd.DataFrame(rows, columns=["bitstring", "re", "im", "prob"])
