#!/usr/bin/env python
"""Low-rank sum-of-squares CLI - experiments, certificates and paths.

This Typer-based CLI exposes the toolkit to operators:
- Seeded experiment runs with CSV/JSON result tables
- Certificate verification for candidate spurious points
- The built-in gallery of spurious instances
- Sum-of-squares feasibility by the restricted path, or an explicit path f - v * g
- Coordinate ring inspection

Usage:
    uv run sos --help
    uv run sos run --variety scroll.json --k 3,4,5 --trials 20 --out results.csv
    uv run sos certify --variety veronese.json --instance candidate.json
    uv run sos gallery scroll22
    uv run sos path --variety scroll.json --k 3 --seed 7 --u 0.05
    uv run sos path --variety scroll.json --k 3 --f f.json --g g.json --v-lower 0 --v-upper 1
    uv run sos ring --variety cubic.json
"""

import json
import math
from pathlib import Path
from typing import Any

import numpy as np
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from services.algebra.src import (
    CoordinateRing,
    build_ring,
    default_k_values,
    random_cubic,
    random_linear_tuple,
)
from services.gallery.src import GALLERY, GalleryInstance, scroll_spurious, verify_instance, veronese_quartic_spurious
from services.harness.src import ExperimentConfig, OutputFormat, draw_target, emit_results, run_experiment
from services.path.src import PathConfig, restricted_path, sos_feasibility_via_path
from services.shared.config import LogLevel, configure_logging, get_settings
from services.shared.errors import SosError
from services.shared.models import PlaneCubicSpec, VarietySpec, parse_variety_spec
from services.solver.src import SolverConfig, minimize
from services.sosmap.src import ObjectiveContext
from services.stationarity.src import Verdict, verify_spurious_certificate

app = typer.Typer(
    help="Low-rank sum-of-squares toolkit - experiments, certificates and restricted paths",
    add_completion=False,
)
console = Console()


@app.callback()
def main(
    log_level: LogLevel | None = typer.Option(None, "--log-level", help="Log level (default: SOS_LOG or INFO)"),
) -> None:
    """Configure logging before any command runs."""
    configure_logging(log_level or get_settings().log)


def _fail(message: str) -> typer.Exit:
    console.print(f"[bold red]✗ {message}[/bold red]")
    return typer.Exit(1)


def _load_variety(path: Path) -> VarietySpec:
    try:
        return parse_variety_spec(path.read_text())
    except OSError as e:
        raise _fail(f"Cannot read variety file {path}: {e}") from e


def _load_json(path: Path) -> Any:
    try:
        return json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise _fail(f"Cannot read JSON file {path}: {e}") from e


def _parse_k_values(k: str, spec: VarietySpec, ring: CoordinateRing) -> list[int]:
    if k.strip().lower() == "auto":
        return default_k_values(spec, ring.dim2)
    try:
        return [int(part) for part in k.split(",") if part.strip()]
    except ValueError as e:
        raise _fail(f"--k must be 'auto' or a comma-separated list of integers, got {k!r}") from e


def _parse_max_evals(max_evals: str) -> int | None:
    if max_evals.strip().lower() == "auto":
        return None
    try:
        return int(max_evals)
    except ValueError as e:
        raise _fail(f"--max-evals must be 'auto' or an integer, got {max_evals!r}") from e


def _solver_config(eps: float | None, time_limit: float | None, max_evals: str) -> SolverConfig:
    return SolverConfig.from_settings(
        success_eps=eps, time_limit=time_limit, max_evals=_parse_max_evals(max_evals)
    )


def _write_or_print(payload: str, out: Path | None) -> None:
    if out is None:
        console.print_json(payload)
        return
    out.write_text(payload)
    console.print(f"[green]✓ Wrote {out}[/green]")


@app.command()
def run(
    variety: Path = typer.Option(..., "--variety", "-v", help="Variety spec JSON file"),
    k: str = typer.Option("auto", "--k", help="Comma-separated numbers of squares, or 'auto'"),
    trials: int = typer.Option(20, "--trials", "-t", help="Trials per k"),
    seed: int = typer.Option(42, "--seed", "-s", help="Root seed"),
    eps: float | None = typer.Option(None, "--eps", help="Success distance threshold"),
    time_limit: float | None = typer.Option(None, "--time-limit", help="Seconds per solve (0 = none)"),
    max_evals: str = typer.Option("auto", "--max-evals", help="Evaluation cap, 'auto' = 20 * dim1, 0 = none"),
    out: Path | None = typer.Option(None, "--out", "-o", help="Result file (.csv or .json)"),
    workers: int | None = typer.Option(None, "--workers", "-w", help="Concurrent solves (default: SOS_WORKERS)"),
) -> None:
    """Run the experiment protocol and print the result table.

    Examples:
        uv run sos run --variety scroll.json --k 3,4,5 --trials 20 --out results.csv
        uv run sos run --variety veronese.json --k auto --eps 1e-4 --time-limit 0 --max-evals 0
    """
    console.print(Panel.fit("[bold cyan]Low-rank SOS - Experiment[/bold cyan]", border_style="cyan"))
    try:
        spec = _load_variety(variety)
        ring = build_ring(spec)
        cfg = ExperimentConfig.build(
            variety=spec,
            k_values=_parse_k_values(k, spec, ring),
            trials=trials,
            seed=seed,
            solver=_solver_config(eps, time_limit, max_evals),
            output_path=str(out) if out else None,
            workers=workers or get_settings().workers,
        )
        results = run_experiment(cfg)
        if out is not None:
            fmt = OutputFormat.JSON if out.suffix.lower() == ".json" else OutputFormat.CSV
            emit_results(results, fmt, out)
    except SosError as e:
        raise _fail(str(e)) from e
    except OSError as e:
        raise _fail(f"Cannot write results: {e}") from e

    table = Table(title=f"Results for {spec.label}", show_header=True, header_style="bold magenta")
    table.add_column("k", style="cyan", justify="right")
    table.add_column("Trials", justify="right")
    table.add_column("Successful", style="green", justify="right")
    table.add_column("Unfinished", style="yellow", justify="right")
    table.add_column("Spurious", style="red", justify="right")
    table.add_column("Mean time (s)", justify="right")
    table.add_column("Median time (s)", justify="right")
    for row in results.rows:
        table.add_row(
            str(row.k),
            str(row.trials),
            str(row.successful),
            str(row.unfinished),
            str(row.spurious),
            "-" if row.mean_time_s is None else f"{row.mean_time_s:.3f}",
            "-" if row.median_time_s is None else f"{row.median_time_s:.3f}",
        )
    console.print(table)
    if out is not None:
        console.print(f"\n[bold green]✓ Results written to {out}[/bold green]\n")


@app.command()
def certify(
    variety: Path = typer.Option(..., "--variety", "-v", help="Variety spec JSON file"),
    instance: Path = typer.Option(..., "--instance", "-i", help="JSON with 'l', 'g' and 'w' coordinate vectors"),
    tol: float = typer.Option(1e-8, "--tol", help="Shared tolerance of the checks"),
    out: Path | None = typer.Option(None, "--out", "-o", help="Write the report here instead of stdout"),
) -> None:
    """Verify a certificate (g, w) for a candidate spurious tuple l.

    Examples:
        uv run sos certify --variety scroll22.json --instance candidate.json --tol 1e-8
    """
    data = _load_json(instance)
    missing = [key for key in ("l", "g", "w") if key not in data]
    if missing:
        raise _fail(f"Instance file is missing {', '.join(missing)}")
    try:
        ring = build_ring(_load_variety(variety))
        report = verify_spurious_certificate(ring, np.array(data["l"]), np.array(data["g"]), np.array(data["w"]), tol)
    except SosError as e:
        raise _fail(str(e)) from e
    _write_or_print(report.model_dump_json(indent=2), out)
    if report.verdict != Verdict.CERTIFIED_SPURIOUS:
        console.print(f"[yellow]⚠ Verdict: {report.verdict.value} (failed check {report.failed_check})[/yellow]")


@app.command()
def gallery(
    name: str = typer.Argument(..., help=f"Instance name: {', '.join(GALLERY)}"),
    heights: str | None = typer.Option(None, "--heights", help="Scroll heights for scroll-spurious, e.g. 2,3"),
    m: int | None = typer.Option(None, "--m", help="Projective dimension for veronese-quartic"),
    tol: float = typer.Option(1e-8, "--tol", help="Verification tolerance"),
    out: Path | None = typer.Option(None, "--out", "-o", help="Write the JSON here instead of stdout"),
) -> None:
    """Emit a gallery instance and its verification report as JSON.

    Examples:
        uv run sos gallery veronese-surface
        uv run sos gallery scroll-spurious --heights 2,3,4
    """
    if name not in GALLERY:
        raise _fail(f"Unknown gallery instance {name!r}; choose from {', '.join(GALLERY)}")
    try:
        built: GalleryInstance
        if name == "scroll-spurious" and heights:
            built = scroll_spurious([int(h) for h in heights.split(",")])
        elif name == "veronese-quartic" and m is not None:
            built = veronese_quartic_spurious(m)
        else:
            built = GALLERY[name]()
        report = verify_instance(built, tol)
    except ValueError as e:
        raise _fail(str(e)) from e
    payload = {"instance": built.model_dump(mode="json"), "report": report.model_dump(mode="json")}
    _write_or_print(json.dumps(payload, indent=2), out)


@app.command()
def path(
    variety: Path = typer.Option(..., "--variety", "-v", help="Variety spec JSON file"),
    k: int = typer.Option(..., "--k", help="Number of squares"),
    target: Path | None = typer.Option(None, "--target", help="JSON list with the R2 coordinates of f-bar"),
    f_file: Path | None = typer.Option(None, "--f", help="JSON list with the base form f (explicit path)"),
    g_file: Path | None = typer.Option(None, "--g", help="JSON list with the direction form g (explicit path)"),
    v_lower: float = typer.Option(0.0, "--v-lower", help="Starting value of v (explicit path)"),
    v_upper: float = typer.Option(math.inf, "--v-upper", help="Largest value of v (explicit path, default +inf)"),
    start: Path | None = typer.Option(None, "--start", help="JSON k x dim1 start tuple for the explicit path"),
    seed: int = typer.Option(0, "--seed", "-s", help="Seed for the start tuple and a random target"),
    u: float = typer.Option(0.05, "--u", help="Target displacement per step"),
    eps: float | None = typer.Option(None, "--eps", help="Success distance threshold"),
    time_limit: float | None = typer.Option(None, "--time-limit", help="Seconds per solve (0 = none)"),
    max_evals: str = typer.Option("0", "--max-evals", help="Evaluation cap per solve, 'auto' or 0 = none"),
    max_steps: int = typer.Option(10_000, "--max-steps", help="Cap on the number of solves"),
    out: Path | None = typer.Option(None, "--out", "-o", help="Write per-step JSON records here"),
) -> None:
    """Follow a restricted path of targets with warm-started solves.

    By default this decides whether f-bar is a sum of k squares along
    v in [0, 1]. Without --target, f-bar is the unit-norm sum of squares of
    a seeded random tuple with dim1 rows.

    With --f and --g the path follows f - v * g from --v-lower towards
    --v-upper, moving the target by u per step. The start tuple comes from
    --start, or from a solve of f - v_lower * g at a seeded random tuple.

    Examples:
        uv run sos path --variety scroll.json --k 3 --seed 7
        uv run sos path --variety scroll.json --k 3 --target fbar.json --u 0.02 --out steps.json
        uv run sos path --variety scroll.json --k 3 --f f.json --g g.json --v-upper 2.5
    """
    explicit = f_file is not None or g_file is not None
    if explicit and (f_file is None or g_file is None):
        raise _fail("--f and --g must be given together")
    if explicit and target is not None:
        raise _fail("--target cannot be combined with --f/--g")

    try:
        spec = _load_variety(variety)
        ring = build_ring(spec)
        solver_cfg = _solver_config(eps, time_limit, max_evals)
        l0 = random_linear_tuple(ring, k, seed)
        l0 = l0 / np.linalg.norm(l0)
        if explicit:
            f = np.array(_load_json(f_file), dtype=float)
            g = np.array(_load_json(g_file), dtype=float)
            g_norm = float(np.linalg.norm(g))
            if g_norm == 0.0:
                raise _fail("--g must be a nonzero form")
            if start is not None:
                l0 = np.array(_load_json(start), dtype=float)
            else:
                start_ctx = ObjectiveContext(ring=ring, target=f - v_lower * g, k=k)
                l0 = minimize(start_ctx, l0, solver_cfg).final_tuple
            cfg = PathConfig(
                step_u=u / g_norm, v_lower=v_lower, v_upper=v_upper, solver=solver_cfg, max_steps=max_steps
            )
            result = restricted_path(ring, f, g, k, l0, cfg)
        else:
            f_bar = np.array(_load_json(target), dtype=float) if target else draw_target(ring, seed, 0)
            result = sos_feasibility_via_path(ring, f_bar, k, l0, u=u, solver_cfg=solver_cfg, max_steps=max_steps)
    except (SosError, ValidationError) as e:
        raise _fail(str(e)) from e

    if out is not None:
        records = [
            {
                "step": i + 1,
                "v": v,
                "status": record.status.value,
                "final_distance": record.final_distance,
                "evals": record.evals,
                "iterations": record.iterations,
                "wall_time": record.wall_time,
                "error": record.error,
            }
            for i, (v, record) in enumerate(zip(result.v_values, result.steps, strict=True))
        ]
        summary = result.model_dump(mode="json", exclude={"steps", "v_values"})
        out.write_text(json.dumps({"result": summary, "steps": records}, indent=2))

    lines = [f"v_final: {result.v_final:.6g}", f"final distance: {result.final_distance:.3e}"]
    lines += [f"steps: {len(result.steps)}", f"stop reason: {result.stop_reason}"]
    if result.certified is not None:
        lines.insert(0, f"certified: {result.certified}")
    style = "green" if result.certified or result.stop_reason == "v_upper" else "yellow"
    console.print(Panel.fit("\n".join(lines), title=f"Restricted path on {spec.label}, k={k}", border_style=style))


@app.command()
def ring(
    variety: Path | None = typer.Option(None, "--variety", "-v", help="Variety spec JSON file"),
    plane_cubic_random: int | None = typer.Option(
        None, "--plane-cubic-random", help="Seed for a random plane cubic instead of a file"
    ),
    d: int = typer.Option(3, "--d", help="Embedding degree for --plane-cubic-random"),
    show_basis: bool = typer.Option(True, "--basis/--no-basis", help="List the monomial bases"),
) -> None:
    """Print the dimensions and monomial bases of a coordinate ring.

    Examples:
        uv run sos ring --variety scroll.json
        uv run sos ring --plane-cubic-random 3 --d 10 --no-basis
    """
    try:
        if plane_cubic_random is not None:
            spec: VarietySpec = PlaneCubicSpec(cubic=random_cubic(plane_cubic_random), d=d)
        elif variety is not None:
            spec = _load_variety(variety)
        else:
            raise _fail("Pass --variety or --plane-cubic-random")
        built = build_ring(spec)
    except SosError as e:
        raise _fail(str(e)) from e

    console.print(
        Panel.fit(
            f"[bold]{spec.label}[/bold]\ndim R1 = {built.dim1}\ndim R2 = {built.dim2}\n"
            f"default k = {default_k_values(spec, built.dim2)}",
            border_style="cyan",
        )
    )
    if isinstance(spec, PlaneCubicSpec):
        console.print(f"cubic coefficients: {spec.cubic}")
    if show_basis:
        for title, labels in (("R1 basis", built.basis1_labels()), ("R2 basis", built.basis2_labels())):
            table = Table(title=title, show_header=True, header_style="bold magenta")
            table.add_column("#", style="cyan", justify="right")
            table.add_column("Monomial", style="green")
            for i, label in enumerate(labels):
                table.add_row(str(i), label)
            console.print(table)


if __name__ == "__main__":
    app()
