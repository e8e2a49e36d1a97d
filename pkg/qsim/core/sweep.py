"""Cost sweeps over random grid circuits, evaluated concurrently."""

import asyncio
import logging
from collections.abc import Sequence

import pandas as pd

from qsim.config import Settings
from qsim.core.cost import batch_tradeoff_table
from qsim.data.circuits import generate_random_circuit
from qsim.models import SweepRow

log = logging.getLogger(__name__)


def circuit_name(k: int, d: int, seed: int) -> str:
    return f"grid{k}x{k}_d{d}_s{seed}"


def sweep_cell(
    k: int, d: int, seed: int, c_sizes: Sequence[int], settings: Settings
) -> list[SweepRow]:
    """All batch sizes of one (grid, depth, seed) circuit."""
    circuit = generate_random_circuit(k, d, seed)
    table = batch_tradeoff_table(
        circuit, c_sizes, heuristic=settings.heuristic, exhaustive_limit=settings.exhaustive_limit
    )
    return [
        SweepRow(
            circuit=circuit_name(k, d, seed),
            k=k,
            d=d,
            seed=seed,
            C_size=row.c_size,
            treewidth=row.treewidth,
            flops=row.total_flops,
            peak_mem=row.peak_memory,
            flops_per_mem=row.flops_per_memory,
        )
        for row in table
    ]


async def run_sweep(
    grids: Sequence[int],
    depths: Sequence[int],
    seeds: Sequence[int],
    c_sizes: Sequence[int],
    settings: Settings,
) -> list[SweepRow]:
    """
    Evaluate every cell of grids x depths x seeds on worker threads.

    At most `settings.report_workers` cells run at a time. Rows come back
    sorted by (k, d, seed, C_size) whatever order the cells finish in.
    """
    semaphore = asyncio.Semaphore(settings.report_workers)

    async def run_cell(k: int, d: int, seed: int) -> list[SweepRow]:
        async with semaphore:
            log.info(f"Sweeping {circuit_name(k, d, seed)}")
            return await asyncio.to_thread(sweep_cell, k, d, seed, c_sizes, settings)

    cells = [(k, d, seed) for k in grids for d in depths for seed in seeds]
    results = await asyncio.gather(*(run_cell(*cell) for cell in cells))

    rows = [row for cell_rows in results for row in cell_rows]
    rows.sort(key=lambda r: (r.k, r.d, r.seed, r.C_size))
    return rows


def sweep_frame(rows: list[SweepRow]) -> pd.DataFrame:
    return pd.DataFrame([row.model_dump() for row in rows], columns=list(SweepRow.model_fields))
