"""Command-line interface for qsim."""

import asyncio
import logging
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path

import pandas as pd
import typer
from pydantic import BaseModel, ValidationError, model_validator
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from qsim.config import Heuristic, Settings, get_settings
from qsim.core.cost import flops_per_memory
from qsim.core.engine import Simulator, batch_frame
from qsim.core.model import build_model, write_edge_list
from qsim.core.oracle import amplitude_of, evolve
from qsim.core.sweep import run_sweep, sweep_frame
from qsim.data.circuits import generate_random_circuit, load_circuit, render_circuit
from qsim.models import Circuit

app = typer.Typer(
    name="qsim",
    help="Batch amplitude simulation of quantum circuits by partial bucket elimination.",
    no_args_is_help=True,
)
console = Console()
err_console = Console(stderr=True)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MISMATCH = 2
EXIT_USAGE = 64

# typer may vendor its own click; take usage errors from the same hierarchy it raises
_UsageError = next(c for c in typer.BadParameter.__mro__ if c.__name__ == "UsageError")


class RunConfig(BaseModel):
    """Everything a subcommand needs to know about its circuit and outputs."""

    circuit: Path | None = None
    grid: int | None = None
    depth: int | None = None
    seed: int = 0
    batch: tuple[int, ...] = ()
    bits: str | None = None
    heuristic: Heuristic = Heuristic.MIN_FILL
    output: Path | None = None
    oracle: bool = False

    @model_validator(mode="after")
    def check_config(self) -> "RunConfig":
        generated = self.grid is not None or self.depth is not None
        if self.circuit is not None and generated:
            raise ValueError("give either --circuit or --grid/--depth, not both")
        if self.circuit is None and (self.grid is None or self.depth is None):
            raise ValueError("need --circuit, or both --grid and --depth")
        if len(set(self.batch)) != len(self.batch):
            raise ValueError(f"repeated qubit in batch {list(self.batch)}")
        if self.bits is not None and set(self.bits) - {"0", "1"}:
            raise ValueError(f"--bits must contain only 0 and 1, got {self.bits!r}")
        return self

    def load_circuit(self) -> Circuit:
        if self.circuit is not None:
            return load_circuit(self.circuit)
        return generate_random_circuit(self.grid, self.depth, self.seed)

    def partition(self, n_qubits: int) -> tuple[list[int], dict[int, int]]:
        """
        Split the qubits into batch and fixed outputs.

        `bits` may cover all qubits (batch positions are ignored) or just the
        fixed ones in qubit order; without `bits` every fixed output is 0.
        """
        batch = sorted(self.batch)
        for q in batch:
            if not 0 <= q < n_qubits:
                raise typer.BadParameter(f"qubit {q} out of range [0, {n_qubits})")
        rest = [q for q in range(n_qubits) if q not in batch]
        if self.bits is None:
            return batch, dict.fromkeys(rest, 0)
        if len(self.bits) == n_qubits:
            return batch, {q: int(self.bits[q]) for q in rest}
        if len(self.bits) == len(rest):
            return batch, {q: int(b) for q, b in zip(rest, self.bits)}
        raise typer.BadParameter(
            f"--bits has {len(self.bits)} bits; expected {n_qubits} or {len(rest)}",
            param_hint="--bits",
        )


def setup_logging(level: str) -> None:
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def _run_config(**fields) -> RunConfig:
    try:
        return RunConfig(**fields)
    except ValidationError as e:
        raise typer.BadParameter("; ".join(err["msg"] for err in e.errors())) from e


def _settings(heuristic: Heuristic | None) -> Settings:
    settings = get_settings()
    if heuristic is not None:
        settings = settings.model_copy(update={"heuristic": heuristic})
    return settings


def _parse_int_list(text: str, option: str) -> list[int]:
    """'0,2,5' or '4..8' (inclusive range) -> list of ints."""
    values: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if ".." in part:
                lo, hi = part.split("..", 1)
                values.extend(range(int(lo), int(hi) + 1))
            else:
                values.append(int(part))
    except ValueError:
        raise typer.BadParameter(f"expected integers like '0,1' or '4..8', got {text!r}",
                                 param_hint=option) from None
    return values


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        typer.echo(text, nl=False)
    else:
        output.write_text(text, encoding="utf-8", newline="\n")
        err_console.print(f"[green]Wrote {output}[/]")


def _csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, lineterminator="\n")


def _amplitude_line(value: complex) -> str:
    # probability to 15 digits so |1/sqrt(2)|^2 prints as 0.5
    prob = float(f"{abs(value) ** 2:.15g}")
    return f"{value.real!r} {value.imag!r} {prob!r}"


@contextmanager
def _domain_errors() -> Iterator[None]:
    try:
        yield
    except ValueError as e:
        err_console.print(f"[red]Error: {e}[/]")
        raise typer.Exit(EXIT_ERROR) from e


CIRCUIT_OPT = typer.Option(None, "--circuit", "-f", help="Circuit file")
GRID_OPT = typer.Option(None, "--grid", "-k", help="Generate a k x k grid circuit")
DEPTH_OPT = typer.Option(None, "--depth", "-d", help="Depth of the generated circuit")
SEED_OPT = typer.Option(None, "--seed", "-s", help="Generator seed (default: QSIM_SEED)")
HEURISTIC_OPT = typer.Option(None, "--heuristic", help="Ordering heuristic for large graphs")
OUTPUT_OPT = typer.Option(None, "--output", "-o", help="Write to a file instead of stdout")


@app.callback()
def main_options(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log at DEBUG level"),
):
    """Simulate amplitudes, estimate costs and sweep random grid circuits."""
    setup_logging("DEBUG" if verbose else get_settings().log_level)


@app.command()
def simulate(
    bits: str = typer.Option(..., "--bits", "-b", help="Output bitstring, qubit 0 first"),
    circuit: Path = CIRCUIT_OPT,
    grid: int = GRID_OPT,
    depth: int = DEPTH_OPT,
    seed: int = SEED_OPT,
    heuristic: Heuristic = HEURISTIC_OPT,
    oracle: bool = typer.Option(False, "--oracle", help="Cross-check with the state vector"),
):
    """
    Print one amplitude as `re im prob`.

    Examples:
        qsim simulate --circuit bell.txt --bits 11
        qsim simulate -k 3 -d 8 --bits 000000000 --oracle
    """
    settings = _settings(heuristic)
    cfg = _run_config(
        circuit=circuit, grid=grid, depth=depth, seed=settings.seed if seed is None else seed,
        bits=bits, heuristic=settings.heuristic, oracle=oracle,
    )
    with _domain_errors():
        circ = cfg.load_circuit()
        if len(bits) != circ.n_qubits:
            raise typer.BadParameter(
                f"{len(bits)} bits for {circ.n_qubits} qubits", param_hint="--bits"
            )
        amplitude = Simulator(settings).simulate_amplitude(circ, bits)
        typer.echo(_amplitude_line(amplitude))

        if cfg.oracle:
            reference = amplitude_of(evolve(circ, settings.oracle_max_qubits), bits)
            delta = abs(amplitude - reference)
            typer.echo(f"oracle {_amplitude_line(reference)}")
            typer.echo(f"delta {delta!r}")
            if delta > settings.oracle_tolerance:
                err_console.print(f"[red]Oracle mismatch: {delta:.3e}[/]")
                raise typer.Exit(EXIT_MISMATCH)


@app.command()
def batch(
    qubits: str = typer.Option(..., "--qubits", "-q", help="Batch qubits, e.g. 0,1,2"),
    bits: str = typer.Option(None, "--bits", "-b", help="Fixed output bits (default: zeros)"),
    circuit: Path = CIRCUIT_OPT,
    grid: int = GRID_OPT,
    depth: int = DEPTH_OPT,
    seed: int = SEED_OPT,
    heuristic: Heuristic = HEURISTIC_OPT,
    output: Path = OUTPUT_OPT,
    oracle: bool = typer.Option(False, "--oracle", help="Cross-check with the state vector"),
):
    """
    All 2^c amplitudes over the batch qubits as CSV (bitstring,re,im,prob).

    Examples:
        qsim batch -k 2 -d 6 -q 0,1
        qsim batch --circuit c.txt -q 0,3 --bits 01 -o batch.csv
    """
    settings = _settings(heuristic)
    batch_qubits = _parse_int_list(qubits, "--qubits")
    if not batch_qubits:
        raise typer.BadParameter("at least one batch qubit is required", param_hint="--qubits")
    cfg = _run_config(
        circuit=circuit, grid=grid, depth=depth, seed=settings.seed if seed is None else seed,
        batch=tuple(batch_qubits), bits=bits, heuristic=settings.heuristic, output=output,
        oracle=oracle,
    )
    with _domain_errors():
        circ = cfg.load_circuit()
        batch_list, fixed = cfg.partition(circ.n_qubits)
        result = Simulator(settings).simulate_batch(circ, batch_list, fixed)
        frame = batch_frame(circ.n_qubits, batch_list, fixed, result)

        mismatch = 0.0
        if cfg.oracle:
            state = evolve(circ, settings.oracle_max_qubits)
            reference = [amplitude_of(state, b) for b in frame["bitstring"]]
            values = frame["re"] + 1j * frame["im"]
            mismatch = max(abs(v - r) for v, r in zip(values, reference))
            err_console.print(f"oracle max delta {mismatch:.3e}")

        _emit(_csv(frame), cfg.output)
        if mismatch > settings.oracle_tolerance:
            err_console.print(f"[red]Oracle mismatch: {mismatch:.3e}[/]")
            raise typer.Exit(EXIT_MISMATCH)


@app.command()
def cost(
    qubits: str = typer.Option("", "--qubits", "-q", help="Batch qubits (default: none)"),
    circuit: Path = CIRCUIT_OPT,
    grid: int = GRID_OPT,
    depth: int = DEPTH_OPT,
    seed: int = SEED_OPT,
    heuristic: Heuristic = HEURISTIC_OPT,
):
    """Estimate treewidth, flops and memory without contracting anything."""
    settings = _settings(heuristic)
    cfg = _run_config(
        circuit=circuit, grid=grid, depth=depth, seed=settings.seed if seed is None else seed,
        batch=tuple(_parse_int_list(qubits, "--qubits")), heuristic=settings.heuristic,
    )
    with _domain_errors():
        circ = cfg.load_circuit()
        batch_list, fixed = cfg.partition(circ.n_qubits)
        plan, report = Simulator(settings).estimate_cost(circ, batch_list, fixed)
        _, ratio = flops_per_memory(report)

    table = Table(title="Cost estimate")
    table.add_column("Metric", style="cyan")
    table.add_column("Value", justify="right")

    table.add_row("Qubits", str(circ.n_qubits))
    table.add_row("Depth", str(circ.depth))
    table.add_row("Variables", str(len(plan.order)))
    table.add_row("Batch size", f"{len(batch_list)} ({2 ** len(batch_list)} amplitudes)")
    table.add_row("Treewidth", str(plan.treewidth))
    table.add_row("Total flops", f"{report.total_flops:,}")
    table.add_row("Peak memory", f"{report.peak_memory_elems:,} elements")
    table.add_row("Storage touched", f"{report.total_memory_elems:,} elements")
    table.add_row("Memory traffic", f"{report.total_traffic_elems:,} elements")
    table.add_row("Flops / memory", f"{float(ratio):.3f}")
    dominant = report.dominant_step
    if dominant is not None:
        table.add_row("Dominant step", f"rank {dominant.rank}, clique {dominant.clique_size}")

    console.print(table)


@app.command()
def order(
    restrict: str = typer.Option("", "--restrict", "-r", help="Qubits whose outputs go last"),
    circuit: Path = CIRCUIT_OPT,
    grid: int = GRID_OPT,
    depth: int = DEPTH_OPT,
    seed: int = SEED_OPT,
    heuristic: Heuristic = HEURISTIC_OPT,
):
    """Print the elimination order and its treewidth."""
    settings = _settings(heuristic)
    cfg = _run_config(
        circuit=circuit, grid=grid, depth=depth, seed=settings.seed if seed is None else seed,
        batch=tuple(_parse_int_list(restrict, "--restrict")), heuristic=settings.heuristic,
    )
    with _domain_errors():
        circ = cfg.load_circuit()
        batch_list, fixed = cfg.partition(circ.n_qubits)
        plan = Simulator(settings).plan(build_model(circ, batch_list, fixed))

    typer.echo(plan.order.to_text())
    typer.echo(f"treewidth {plan.treewidth}")


@app.command()
def generate(
    grid: int = typer.Option(..., "--grid", "-k", help="Grid side"),
    depth: int = typer.Option(..., "--depth", "-d", help="Number of cycles"),
    seed: int = SEED_OPT,
    output: Path = OUTPUT_OPT,
):
    """Generate a random grid circuit in the text format."""
    settings = get_settings()
    with _domain_errors():
        circ = generate_random_circuit(grid, depth, settings.seed if seed is None else seed)
        _emit(render_circuit(circ), output)


@app.command()
def report(
    grids: str = typer.Option("2,3", "--grids", help="Grid sides, e.g. 2,3 or 2..4"),
    depths: str = typer.Option("4..8", "--depths", help="Depths, e.g. 4..8"),
    seeds: str = typer.Option(None, "--seeds", help="Seeds (default: QSIM_SEED)"),
    c_sizes: str = typer.Option("0", "--c-sizes", help="Batch sizes, e.g. 0..3"),
    heuristic: Heuristic = HEURISTIC_OPT,
    output: Path = OUTPUT_OPT,
):
    """
    Cost sweep over random grid circuits as CSV.

    Columns: circuit,k,d,seed,C_size,treewidth,flops,peak_mem,flops_per_mem

    Examples:
        qsim report --grids 2,3 --depths 4..8 --seeds 0,1
        qsim report --grids 4 --depths 10 --c-sizes 0..4 -o tradeoff.csv
    """
    settings = _settings(heuristic)
    seed_list = [settings.seed] if seeds is None else _parse_int_list(seeds, "--seeds")
    grid_list = _parse_int_list(grids, "--grids")
    depth_list = _parse_int_list(depths, "--depths")
    size_list = _parse_int_list(c_sizes, "--c-sizes")

    with _domain_errors():
        rows = asyncio.run(run_sweep(grid_list, depth_list, seed_list, size_list, settings))
        _emit(_csv(sweep_frame(rows)), output)


@app.command("export-graph")
def export_graph(
    qubits: str = typer.Option("", "--qubits", "-q", help="Batch qubits left open"),
    circuit: Path = CIRCUIT_OPT,
    grid: int = GRID_OPT,
    depth: int = DEPTH_OPT,
    seed: int = SEED_OPT,
    output: Path = OUTPUT_OPT,
):
    """Write the circuit's graphical model as a DIMACS-style edge list."""
    settings = get_settings()
    cfg = _run_config(
        circuit=circuit, grid=grid, depth=depth, seed=settings.seed if seed is None else seed,
        batch=tuple(_parse_int_list(qubits, "--qubits")),
    )
    with _domain_errors():
        circ = cfg.load_circuit()
        batch_list, fixed = cfg.partition(circ.n_qubits)
        model = build_model(circ, batch_list, fixed)
        _emit(write_edge_list(model.graph), cfg.output)


@app.command()
def config():
    """Show current configuration."""
    settings = get_settings()

    table = Table(title="Configuration")
    table.add_column("Setting", style="cyan")
    table.add_column("Value")

    table.add_row("Seed", str(settings.seed))
    table.add_row("Heuristic", settings.heuristic.value)
    table.add_row("Exhaustive limit", f"{settings.exhaustive_limit} vertices")
    table.add_row("Oracle max qubits", str(settings.oracle_max_qubits))
    table.add_row("Oracle tolerance", f"{settings.oracle_tolerance:g}")
    table.add_row("Report workers", str(settings.report_workers))
    table.add_row("Log level", settings.log_level)

    console.print(table)


def main(argv: list[str] | None = None) -> int:
    """Run the CLI and return its exit code (0 ok, 1 error, 2 oracle mismatch, 64 usage)."""
    try:
        result = app(args=argv, prog_name="qsim", standalone_mode=False)
    except typer.Exit as e:
        return e.exit_code
    except _UsageError as e:
        err_console.print(f"[red]Usage error: {e.format_message()}[/]")
        return EXIT_USAGE
    except typer.Abort:
        return EXIT_ERROR
    except ValueError as e:
        err_console.print(f"[red]Error: {e}[/]")
        return EXIT_ERROR
    return result if isinstance(result, int) else EXIT_OK


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
