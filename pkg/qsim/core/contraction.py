"""Bucket elimination, full or stopped before the free variables."""

import logging
from collections.abc import Iterable

from qsim.core.cost import StepCounter
from qsim.core.model import GraphicalModel
from qsim.core.ordering import EliminationOrder
from qsim.core.tensor import ContractionError, DenseTensor, contract_over, multiply_pointwise

log = logging.getLogger(__name__)


class BucketSet:
    """
    Tensors grouped by rank: a tensor sits in the bucket of its lowest-ranked variable.

    Buckets are numbered 1..|V|; a processed bucket is emptied and closed.
    """

    def __init__(self, order: EliminationOrder):
        self.order = order
        self._buckets: dict[int, list[DenseTensor]] = {r: [] for r in range(1, len(order) + 1)}
        self._processed = 0

    def __len__(self) -> int:
        return len(self._buckets)

    def __getitem__(self, rank: int) -> list[DenseTensor]:
        return list(self._buckets[rank])

    def rank_of(self, tensor: DenseTensor) -> int:
        missing = [v for v in tensor.vars if v not in self.order]
        if missing:
            raise ContractionError(f"variables {missing} have no rank in the order")
        return min(self.order.rank(v) for v in tensor.vars)

    def add(self, tensor: DenseTensor) -> int:
        """Place a non-scalar tensor and return its bucket rank."""
        if tensor.is_scalar:
            raise ContractionError("scalars do not belong in a bucket")
        rank = self.rank_of(tensor)
        if rank <= self._processed:
            raise ContractionError(
                f"internal error: tensor over {list(tensor.vars)} placed in processed bucket {rank}"
            )
        self._buckets[rank].append(tensor)
        return rank

    def take(self, rank: int) -> list[DenseTensor]:
        """Remove and return bucket `rank`; buckets must be taken in rank order."""
        if rank != self._processed + 1:
            raise ContractionError(f"bucket {rank} taken out of order")
        self._processed = rank
        bucket, self._buckets[rank] = self._buckets[rank], []
        return bucket

    def tensor_count(self) -> int:
        return sum(len(b) for b in self._buckets.values())

    def remaining(self) -> list[DenseTensor]:
        return [t for r in sorted(self._buckets) for t in self._buckets[r]]


def bucket_tensors(tensors: Iterable[DenseTensor], order: EliminationOrder) -> BucketSet:
    buckets = BucketSet(order)
    for tensor in tensors:
        buckets.add(tensor)
    return buckets


def form_buckets(model: GraphicalModel, order: EliminationOrder) -> BucketSet:
    return bucket_tensors((f.tensor for f in model.factors), order)


def process_buckets(
    buckets: BucketSet,
    order: EliminationOrder,
    stop_index: int,
    counter: StepCounter | None = None,
) -> tuple[list[DenseTensor], complex]:
    """
    Eliminate the variables of ranks 1..stop_index.

    Each bucket is contracted over its variable in one fused einsum. Scalar
    results multiply into the accumulator, other results move to the bucket of
    their lowest-ranked variable. Returns the tensors left in buckets above
    stop_index (a partial contraction of the network) and the accumulator.
    """
    if buckets.order != order:
        raise ContractionError("bucket set was formed for a different order")
    if not 0 <= stop_index <= len(order):
        raise ContractionError(f"stop index {stop_index} outside [0, {len(order)}]")

    accumulator = complex(1.0)
    produced: set[int] = set()
    for rank in range(1, stop_index + 1):
        bucket = buckets.take(rank)
        if not bucket:
            continue
        v = order.vertex_at(rank)
        result = contract_over(bucket, v)

        if counter is not None:
            counter.record(
                rank=rank,
                clique_size=len(result.vars) + 1,
                input_elems=sum(t.size for t in bucket),
                consumed_elems=sum(t.size for t in bucket if id(t) in produced),
                output_elems=result.size,
                keep_output=not result.is_scalar,
            )
        produced.difference_update(id(t) for t in bucket)

        if result.is_scalar:
            accumulator *= result.item()
            log.debug(f"bucket {rank} (var {v}): {len(bucket)} tensors -> scalar")
        else:
            target = buckets.add(result)
            produced.add(id(result))
            log.debug(
                f"bucket {rank} (var {v}): {len(bucket)} tensors -> "
                f"order {len(result.vars)} into bucket {target}"
            )

    return buckets.remaining(), accumulator


def merge_free_tensors(
    leftovers: list[DenseTensor], free_vars: Iterable[int], accumulator: complex = 1.0
) -> DenseTensor:
    """Pointwise product of the leftovers over the free variables, without summation."""
    free = tuple(free_vars)
    for tensor in leftovers:
        extra = [v for v in tensor.vars if v not in free]
        if extra:
            raise ContractionError(f"leftover tensor holds non-free variables {extra}")
    return multiply_pointwise(leftovers, free, accumulator)
