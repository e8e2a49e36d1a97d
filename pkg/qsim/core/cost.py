"""Symbolic flop and memory accounting for bucket elimination."""

import logging
from collections.abc import Iterable, Sequence
from fractions import Fraction

import networkx as nx
import pandas as pd

from qsim.config import Heuristic
from qsim.core.model import build_model, factor_scopes
from qsim.core.ordering import EXHAUSTIVE_LIMIT, EliminationOrder, restricted_order_pipeline
from qsim.core.tensor import L
from qsim.models import Circuit, CostReport, CostStep, TradeoffRow

log = logging.getLogger(__name__)


class CostError(ValueError):
    """The order cannot be costed (free variables not last, foreign vertices)."""


class StepCounter:
    """
    Accumulates per-step costs of an elimination.

    Convention for eliminating one variable with clique size s:
    - L^s multiplications and L^s additions (one fused loop over the clique)
    - L^(s-1) output elements
    - storage = sum of input sizes + output size
    - memory traffic = intermediates read + output written; factors of the
      model hold at most two variables each and are not counted as traffic
    Peak memory counts intermediates only: the inputs of the circuit are
    streamed, an intermediate is live from its creation until it is consumed,
    and scalar results fold into the accumulator without being stored.
    """

    def __init__(self):
        self.steps: list[CostStep] = []
        self.peak_memory = 0
        self._live = 0

    def record(
        self,
        rank: int,
        clique_size: int,
        input_elems: int,
        consumed_elems: int,
        output_elems: int,
        keep_output: bool,
    ) -> CostStep:
        ops = L ** clique_size
        step = CostStep(
            rank=rank,
            clique_size=clique_size,
            multiplications=ops,
            additions=ops,
            flops=2 * ops,
            output_elems=output_elems,
            memory_elems=input_elems + output_elems,
            traffic_elems=consumed_elems + output_elems,
        )
        self.steps.append(step)

        self.peak_memory = max(self.peak_memory, self._live + output_elems)
        self._live -= consumed_elems
        if keep_output:
            self._live += output_elems
        return step

    def report(self) -> CostReport:
        return CostReport(
            total_flops=sum(s.flops for s in self.steps),
            peak_memory_elems=self.peak_memory,
            total_memory_elems=sum(s.memory_elems for s in self.steps),
            total_traffic_elems=sum(s.traffic_elems for s in self.steps),
            treewidth=max((s.clique_size for s in self.steps), default=1) - 1,
            per_step=list(self.steps),
        )


def default_scopes(graph: nx.Graph) -> list[tuple[int, ...]]:
    """One scope per edge plus one per isolated vertex."""
    scopes = [tuple(sorted((u, v))) for u, v in graph.edges if u != v]
    scopes += [(v,) for v in sorted(graph.nodes) if not any(w != v for w in graph[v])]
    return scopes


def estimate(
    graph: nx.Graph,
    order: EliminationOrder,
    free_vars: Iterable[int] = (),
    scopes: Sequence[Sequence[int]] | None = None,
) -> CostReport:
    """
    Dry-run bucket elimination on variable sets instead of tensors.

    Runs up to rank |V| - |free_vars|; the free variables must hold the last
    ranks. Gives the same numbers as an instrumented contraction of a model
    whose factors have exactly these scopes.
    """
    if len(order) != graph.number_of_nodes() or set(order.vertices) != set(graph.nodes):
        raise CostError("order does not cover the graph's vertices")
    free = set(free_vars)
    stop = len(order) - len(free)
    if set(order.vertices[stop:]) != free:
        raise CostError(f"free variables {sorted(free)} are not the last in the order")

    if scopes is None:
        scopes = default_scopes(graph)

    buckets: dict[int, list[tuple[frozenset[int], bool]]] = {}
    for scope in scopes:
        scope = frozenset(scope)
        if not scope:
            continue
        if not scope <= set(graph.nodes):
            raise CostError(f"scope {sorted(scope)} mentions vertices outside the graph")
        rank = min(order.rank(v) for v in scope)
        buckets.setdefault(rank, []).append((scope, False))

    counter = StepCounter()
    for i in range(1, stop + 1):
        bucket = buckets.pop(i, [])
        if not bucket:
            continue
        v = order.vertex_at(i)
        union = frozenset().union(*(s for s, _ in bucket))
        out = union - {v}
        counter.record(
            rank=i,
            clique_size=len(union),
            input_elems=sum(L ** len(s) for s, _ in bucket),
            consumed_elems=sum(L ** len(s) for s, intermediate in bucket if intermediate),
            output_elems=L ** len(out),
            keep_output=bool(out),
        )
        if out:
            target = min(order.rank(w) for w in out)
            buckets.setdefault(target, []).append((out, True))

    report = counter.report()
    log.debug(
        f"Estimated {len(report.per_step)} steps: {report.total_flops} flops, "
        f"peak {report.peak_memory_elems} elements"
    )
    return report


def flops_per_memory(report: CostReport) -> tuple[list[Fraction], Fraction]:
    """
    Per-step and aggregate flops per element of memory traffic.

    Every intermediate is written once and read at most once, so the aggregate
    lies in [L, 2L] and no step exceeds 2L.
    """
    if not report.per_step:
        return [], Fraction(2 * L)
    per_step = [Fraction(s.flops, s.traffic_elems) for s in report.per_step]
    return per_step, Fraction(report.total_flops, report.total_traffic_elems)


def batch_tradeoff_table(
    circuit: Circuit,
    c_sizes: Iterable[int],
    heuristic: Heuristic = Heuristic.MIN_FILL,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
) -> list[TradeoffRow]:
    """
    Cost of batches over the first |C| qubits (all other outputs fixed to 0).

    Every row carries the single-amplitude cost and 2^|C| times it, the cost
    of computing the same batch one amplitude at a time.
    """

    def cost_of(c_size: int) -> tuple[int, CostReport]:
        if not 0 <= c_size <= circuit.n_qubits:
            raise CostError(f"batch size {c_size} outside [0, {circuit.n_qubits}]")
        batch = range(c_size)
        fixed = {q: 0 for q in range(c_size, circuit.n_qubits)}
        model = build_model(circuit, batch, fixed)
        order, treewidth = restricted_order_pipeline(
            model.graph, model.free_vars, heuristic, exhaustive_limit
        )
        return treewidth, estimate(model.graph, order, model.free_vars, factor_scopes(model))

    _, single = cost_of(0)
    rows = []
    for c_size in c_sizes:
        treewidth, report = cost_of(c_size)
        _, ratio = flops_per_memory(report)
        rows.append(
            TradeoffRow(
                c_size=c_size,
                treewidth=treewidth,
                total_flops=report.total_flops,
                peak_memory=report.peak_memory_elems,
                flops_per_memory=float(ratio),
                single_amplitude_flops=single.total_flops,
                naive_batch_flops=2 ** c_size * single.total_flops,
            )
        )
        log.info(f"|C|={c_size}: treewidth {treewidth}, {report.total_flops} flops")
    return rows


def tradeoff_frame(rows: list[TradeoffRow]) -> pd.DataFrame:
    return pd.DataFrame([row.model_dump() for row in rows], columns=list(TradeoffRow.model_fields))
