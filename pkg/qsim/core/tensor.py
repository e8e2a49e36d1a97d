"""Dense complex tensors over binary index variables."""

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

L = 2  # dimension of every index variable (qubits)


class ContractionError(ValueError):
    """A contraction was requested over mismatching tensors."""


class DenseTensor(BaseModel):
    """
    Complex array indexed by a list of variables, each of dimension 2.

    `data` has shape (2,) * len(vars), i.e. row-major over `vars`. A tensor
    without variables is a scalar.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    vars: tuple[int, ...]
    data: np.ndarray

    @field_validator("data", mode="before")
    @classmethod
    def as_complex(cls, v):
        return np.asarray(v, dtype=complex)

    @model_validator(mode="after")
    def check_shape(self) -> "DenseTensor":
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"repeated variable in {list(self.vars)}")
        if self.data.size != L ** len(self.vars):
            raise ValueError(
                f"data has {self.data.size} entries, expected {L ** len(self.vars)}"
            )
        if self.data.shape != (L,) * len(self.vars):
            object.__setattr__(self, "data", self.data.reshape((L,) * len(self.vars)))
        return self

    @property
    def is_scalar(self) -> bool:
        return not self.vars

    @property
    def size(self) -> int:
        return L ** len(self.vars)

    def flat(self) -> np.ndarray:
        """Entries in row-major order over `vars`."""
        return self.data.reshape(-1)

    def item(self) -> complex:
        if not self.is_scalar:
            raise ContractionError(f"tensor over {list(self.vars)} is not a scalar")
        return complex(self.data)

    def transpose_to(self, order: tuple[int, ...]) -> "DenseTensor":
        """Same tensor with its axes permuted into `order`."""
        if sorted(order) != sorted(self.vars):
            raise ContractionError(f"cannot reorder {list(self.vars)} as {list(order)}")
        axes = [self.vars.index(v) for v in order]
        return DenseTensor(vars=tuple(order), data=np.transpose(self.data, axes))

    def __repr__(self) -> str:
        return f"DenseTensor(vars={list(self.vars)})"


def _einsum(
    tensors: list[DenseTensor], out_vars: tuple[int, ...]
) -> np.ndarray:
    """One fused einsum over all operands; labels are remapped to small ints."""
    labels: dict[int, int] = {}
    for t in tensors:
        for v in t.vars:
            labels.setdefault(v, len(labels))
    for v in out_vars:
        labels.setdefault(v, len(labels))
    if len(labels) > 52:
        raise ContractionError(f"{len(labels)} distinct variables exceed the einsum limit")

    operands = []
    for t in tensors:
        operands.append(t.data)
        operands.append([labels[v] for v in t.vars])
    operands.append([labels[v] for v in out_vars])
    return np.einsum(*operands, optimize=False)


def contract_over(tensors: list[DenseTensor], v: int) -> DenseTensor:
    """
    Sum the product of all tensors over variable v.

    Output variables are the union of the inputs' variables without v, in
    order of first appearance. Each entry is sum_v prod_t t[...].
    """
    if not tensors:
        raise ContractionError(f"nothing to contract over {v}")
    for t in tensors:
        if v not in t.vars:
            raise ContractionError(f"tensor over {list(t.vars)} is not indexed by {v}")

    out_vars: list[int] = []
    for t in tensors:
        for w in t.vars:
            if w != v and w not in out_vars:
                out_vars.append(w)

    data = _einsum(tensors, tuple(out_vars))
    return DenseTensor(vars=tuple(out_vars), data=data)


def multiply_pointwise(
    tensors: list[DenseTensor], out_vars: tuple[int, ...], scale: complex = 1.0
) -> DenseTensor:
    """Outer / pointwise product aligned on shared variables, no summation."""
    missing = [v for v in out_vars if not any(v in t.vars for t in tensors)]
    # variables no tensor depends on broadcast as all-ones
    operands = list(tensors) + [
        DenseTensor(vars=(v,), data=np.ones(L, dtype=complex)) for v in missing
    ]
    if not operands:
        return DenseTensor(vars=(), data=np.asarray(scale, dtype=complex))
    data = _einsum(operands, out_vars) * scale
    return DenseTensor(vars=out_vars, data=data)
