#!/usr/bin/env python3
"""
Simulation commands: Monte Carlo studies of single scenarios and reproduction
of the published tables.
"""

from enum import Enum
from pathlib import Path
from typing import Annotated, Optional

import typer

from ..config import settings
from ..errors import UsageError
from ..models import Scale, ScenarioConfig
from ..report import bias_records, format_records, power_records, rows_to_csv, rows_to_json
from ..scenarios import BIAS_SIZES, DESK_SIZES, get_scenario, load_scenario_file
from ..simulation import reproduce_table, run_bias_study, run_power_study, scale_settings
from ..utils import print_with_underline
from ..validators import validate_size_triples
from .common import handle_errors


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class Study(str, Enum):
    POWER = "power"
    BIAS = "bias"


def choose_scale(desk: bool, full: bool) -> Optional[Scale]:
    if desk and full:
        raise typer.BadParameter("--desk and --full are mutually exclusive")
    if desk:
        return Scale.DESK
    if full:
        return Scale.FULL
    return None


def resolve_scenarios(scenario: str) -> list[ScenarioConfig]:
    """A built-in id, or every scenario block of a scenario file."""
    path = Path(scenario)
    if path.is_file():
        return load_scenario_file(path)
    return [get_scenario(scenario)]


def save_records(records: list[dict], name: str, output: Optional[OutputFormat]) -> None:
    if output is None:
        return
    path = settings.results_dir / f"{name.replace('/', '_')}.{output.value}"
    if output is OutputFormat.CSV:
        rows_to_csv(records, path)
    else:
        rows_to_json(records, path)
    print(f"✅ Wrote {len(records)} rows to {path}")


def simulate_command(
    scenario: Annotated[str, typer.Option("--scenario", "-s", help="Built-in scenario id or scenario file")],
    study: Annotated[Study, typer.Option("--study", help="Power/Type-I study or OVL bias study")] = Study.POWER,
    desk: Annotated[bool, typer.Option("--desk", help="Settings' DESK replications and B, three sizes")] = False,
    full: Annotated[bool, typer.Option("--full", help="Settings' FULL replications and B, all sizes")] = False,
    reps: Annotated[Optional[int], typer.Option("--reps", min=0, help="Monte Carlo replications")] = None,
    resamples: Annotated[Optional[int], typer.Option("--B", "-B", min=2, help="Bootstrap resamples")] = None,
    sizes: Annotated[Optional[str], typer.Option("--sizes", help='Size triples, e.g. "(20,20,20),(50,50,50)"')] = None,
    seed: Annotated[Optional[int], typer.Option("--seed", min=0, help="Random seed")] = None,
    workers: Annotated[Optional[int], typer.Option("--workers", min=1, help="Worker processes")] = None,
    output: Annotated[
        Optional[OutputFormat], typer.Option("--out", help="Also write rows to the results directory")
    ] = None,
):
    """Run a Monte Carlo study for one scenario (or every scenario of a file)."""
    scale = choose_scale(desk, full)
    triples = validate_size_triples(sizes) if sizes else None

    with handle_errors():
        for config in resolve_scenarios(scenario):
            if seed is not None:
                config = config.model_copy(update={"seed": seed})
            run_reps, run_B = scale_settings(scale) if scale else (config.reps, config.boot.B)
            run_reps = run_reps if reps is None else reps
            run_B = run_B if resamples is None else resamples

            if study is Study.POWER:
                run_sizes = triples or (DESK_SIZES if scale is Scale.DESK else config.sizes)
                print_with_underline(f"📊 Power study: {config.id} ({run_reps} replications, B={run_B})")
                rows = run_power_study(config, reps=run_reps, B=run_B, sizes=run_sizes, workers=workers)
                records = power_records(rows, f"power/{config.id}", config)
            else:
                if triples and any(len(set(t)) != 1 for t in triples):
                    raise UsageError("the bias study uses equal class sizes, e.g. (20,20,20)")
                ns = [t[0] for t in triples] if triples else BIAS_SIZES
                print_with_underline(f"📊 Bias study: {config.id} ({run_reps} replications, B={run_B})")
                rows = run_bias_study([config], reps=run_reps, B=run_B, sizes=ns, workers=workers)
                records = bias_records(rows, f"bias/{config.id}")

            print(format_records(records))
            if any(record.get("flagged") for record in records):
                print("⚠️  More than 1% of replications failed in a flagged row")
            save_records(records, f"{study.value}/{config.id}", output)
            print()


def reproduce_table_command(
    table_id: Annotated[str, typer.Argument(help="bias/tt1 or power/<scenario id>")],
    desk: Annotated[bool, typer.Option("--desk", help="Reduced scale (default)")] = False,
    full: Annotated[bool, typer.Option("--full", help="Published scale")] = False,
    seed: Annotated[Optional[int], typer.Option("--seed", min=0, help="Random seed")] = None,
    workers: Annotated[Optional[int], typer.Option("--workers", min=1, help="Worker processes")] = None,
    output: Annotated[
        Optional[OutputFormat], typer.Option("--out", help="Also write rows to the results directory")
    ] = None,
):
    """Rerun a published table and show computed values beside the published ones."""
    scale = choose_scale(desk, full) or Scale.DESK
    with handle_errors():
        reproduction = reproduce_table(table_id, scale, workers=workers, seed=seed)

    print_with_underline(f"📊 {reproduction.table_id} ({reproduction.scale.value})")
    print(reproduction.text)
    save_records(reproduction.records, reproduction.table_id, output)
