"""Core data models for circuits and cost reports."""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class GateKind(str, Enum):
    """The universal gate set. Values are the circuit-file gate names."""
    H = "h"
    T = "t"
    X_HALF = "x_1_2"
    Y_HALF = "y_1_2"
    CZ = "cz"

    @property
    def n_qubits(self) -> int:
        return 2 if self is GateKind.CZ else 1

    @property
    def is_diagonal(self) -> bool:
        """Diagonal gates never change the basis of the qubits they act on."""
        return self in (GateKind.T, GateKind.CZ)


class GateApplication(BaseModel):
    """A gate acting on one or two qubits at a clock cycle (1-based)."""
    model_config = ConfigDict(frozen=True)

    kind: GateKind
    qubits: tuple[int, ...]
    cycle: int = Field(ge=1)

    @model_validator(mode="after")
    def check_qubits(self) -> "GateApplication":
        if len(self.qubits) != self.kind.n_qubits:
            raise ValueError(
                f"gate {self.kind.value} takes {self.kind.n_qubits} qubit(s), "
                f"got {len(self.qubits)}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"repeated qubit in {self.kind.value} {list(self.qubits)}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"negative qubit index in {list(self.qubits)}")
        return self


class Circuit(BaseModel):
    """An ordered list of gate applications over n qubits."""
    model_config = ConfigDict(frozen=True)

    n_qubits: int = Field(ge=1)
    gates: tuple[GateApplication, ...] = ()

    @field_validator("gates")
    @classmethod
    def sort_by_cycle(cls, v: tuple[GateApplication, ...]) -> tuple[GateApplication, ...]:
        return tuple(sorted(v, key=lambda g: g.cycle))

    @model_validator(mode="after")
    def check_layout(self) -> "Circuit":
        busy: set[tuple[int, int]] = set()
        for gate in self.gates:
            for q in gate.qubits:
                if q >= self.n_qubits:
                    raise ValueError(f"qubit {q} out of range for {self.n_qubits} qubits")
                if (gate.cycle, q) in busy:
                    raise ValueError(f"qubit {q} used twice in cycle {gate.cycle}")
                busy.add((gate.cycle, q))
        return self

    @property
    def depth(self) -> int:
        return max((g.cycle for g in self.gates), default=0)

    def count_non_diagonal(self) -> int:
        return sum(1 for g in self.gates if not g.kind.is_diagonal)


class CostStep(BaseModel):
    """Symbolic cost of eliminating one variable."""
    rank: int
    clique_size: int
    multiplications: int
    additions: int
    flops: int
    output_elems: int
    memory_elems: int  # storage: inputs + output
    traffic_elems: int  # intermediates read + output written


class CostReport(BaseModel):
    """Flop and memory estimate of a (partial) bucket elimination."""
    total_flops: int = 0
    peak_memory_elems: int = 0
    total_memory_elems: int = 0
    total_traffic_elems: int = 0
    treewidth: int = 0
    per_step: list[CostStep] = Field(default_factory=list)

    @property
    def dominant_step(self) -> CostStep | None:
        return max(self.per_step, key=lambda s: s.flops, default=None)


class TradeoffRow(BaseModel):
    """Batch size vs cost, one row per |C|."""
    c_size: int
    treewidth: int
    total_flops: int
    peak_memory: int
    flops_per_memory: float
    single_amplitude_flops: int
    naive_batch_flops: int  # 2^|C| single-amplitude runs


class SweepRow(BaseModel):
    """One row of the report sweep CSV."""
    circuit: str
    k: int
    d: int
    seed: int
    C_size: int  # noqa: N815 - CSV column name
    treewidth: int
    flops: int
    peak_mem: int
    flops_per_mem: float
