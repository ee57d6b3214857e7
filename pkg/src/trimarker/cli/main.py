#!/usr/bin/env python3
"""
Main CLI entry point for trimarker.

This module provides the marker analysis commands and wires in the simulation
and configuration commands.
"""

import math
from pathlib import Path
from typing import Annotated, Optional

import typer

from ..config import settings
from ..distributions import format_spec, mean, parse_spec, theoretical_ovl, theoretical_vus, variance
from ..inference import interpret_ovl
from ..markers import DEFAULT_METHODS, analyze_marker, load_csv, normality_report, orient
from ..report import density_grid, emit_report, format_report
from ..scenarios import builtin_scenarios, load_scenario_file
from ..utils import configure_logging, print_with_underline
from ..validators import (
    validate_class_order,
    validate_distribution,
    validate_methods,
    validate_ovl_value,
    validate_probability,
)
from .common import bootstrap_config, handle_errors, write_output
from .config import app as config_app
from .simulate import reproduce_table_command, simulate_command

app = typer.Typer(
    name="trimarker",
    help="Three-class biomarker accuracy: OVL and VUS estimation, bootstrap inference and simulation studies",
    no_args_is_help=True,
)

app.add_typer(config_app, name="config", help="Configuration management commands")
app.command("simulate")(simulate_command)
app.command("reproduce-table")(reproduce_table_command)


@app.callback()
def main(
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Log at DEBUG level to stderr")] = False,
):
    """Three-class biomarker accuracy."""
    configure_logging("DEBUG" if verbose else settings.log_level)


# Options shared by the marker commands
InputOption = Annotated[
    Path, typer.Option("--input", "-i", exists=True, dir_okay=False, help="CSV file with a header row")
]
ValueOption = Annotated[str, typer.Option("--value", help="Column holding the marker values")]
ClassOption = Annotated[str, typer.Option("--class", help="Column holding the class labels")]
OrderOption = Annotated[
    str,
    typer.Option(
        "--order", callback=validate_class_order, help="Class labels from lowest to highest, e.g. D-,D0,D+"
    ),
]
MethodsOption = Annotated[
    str,
    typer.Option(
        "--methods", callback=validate_methods, help="Comma-separated: auto, normal, boxcox, kernel, empirical"
    ),
]
ResamplesOption = Annotated[Optional[int], typer.Option("--B", "-B", min=2, help="Bootstrap resamples")]
SeedOption = Annotated[Optional[int], typer.Option("--seed", min=0, help="Random seed (default TRIMARKER_SEED)")]
ThresholdOption = Annotated[
    Optional[float], typer.Option("--normality-threshold", help="Shapiro-Wilk p-value that selects the normal fit")
]
JsonOption = Annotated[bool, typer.Option("--json/--table", help="JSON report instead of the aligned text table")]
OutOption = Annotated[Optional[Path], typer.Option("--out", "-o", help="Write to this file instead of stdout")]


def _probability(value: Optional[float], name: str) -> Optional[float]:
    return None if value is None else validate_probability(value, name)


@app.command()
def estimate(
    input_file: InputOption,
    value: ValueOption,
    class_column: ClassOption,
    order: OrderOption,
    methods: MethodsOption = ",".join(DEFAULT_METHODS),
    resamples: ResamplesOption = None,
    level: Annotated[Optional[float], typer.Option("--level", help="Confidence level")] = None,
    seed: SeedOption = None,
    normality_threshold: ThresholdOption = None,
    as_json: JsonOption = False,
    out: OutOption = None,
):
    """Estimate OVL and VUS of one marker with percentile bootstrap intervals."""
    level = _probability(level, "--level")
    normality_threshold = _probability(normality_threshold, "--normality-threshold")
    with handle_errors():
        dataset = load_csv(input_file, value, class_column, order)
        report = analyze_marker(
            dataset, methods, bootstrap_config(resamples, level, seed=seed), normality_threshold=normality_threshold
        )
    write_output(emit_report(report) if as_json else format_report(report), out)


@app.command()
def test(
    input_file: InputOption,
    value: ValueOption,
    class_column: ClassOption,
    order: OrderOption,
    methods: MethodsOption = ",".join(DEFAULT_METHODS),
    alpha: Annotated[Optional[float], typer.Option("--alpha", help="Significance level")] = None,
    resamples: ResamplesOption = None,
    seed: SeedOption = None,
    normality_threshold: ThresholdOption = None,
    as_json: JsonOption = False,
    out: OutOption = None,
):
    """Test whether a marker is informative (pooled-null bootstrap) and report the estimates."""
    alpha = _probability(alpha, "--alpha")
    normality_threshold = _probability(normality_threshold, "--normality-threshold")
    with handle_errors():
        dataset = load_csv(input_file, value, class_column, order)
        report = analyze_marker(
            dataset,
            methods,
            bootstrap_config(resamples, alpha=alpha, seed=seed),
            normality_threshold=normality_threshold,
            with_tests=True,
        )
    write_output(emit_report(report) if as_json else format_report(report), out)


@app.command()
def normality(
    input_file: InputOption,
    value: ValueOption,
    class_column: ClassOption,
    order: OrderOption,
    threshold: Annotated[Optional[float], typer.Option("--threshold", help="p-value threshold")] = None,
):
    """Shapiro-Wilk W and p-value of each class."""
    threshold = _probability(threshold, "--threshold")
    with handle_errors():
        dataset = orient(load_csv(input_file, value, class_column, order))
        report = normality_report(dataset, threshold)

    print_with_underline(f"📊 Shapiro-Wilk screening of {dataset.marker_name}")
    for entry in report.classes:
        print(f"  {entry.label:<12} n={entry.n:<5} W={entry.w:.4f}  p={entry.p_value:.4f}")
    if report.overall_normal:
        print(f"✅ No class rejects normality at {report.threshold:g}; the normal fit will be used")
    else:
        print(f"⚠️  At least one class rejects normality at {report.threshold:g}; the Box-Cox fit will be used")


@app.command()
def grid(
    input_file: InputOption,
    value: ValueOption,
    class_column: ClassOption,
    order: OrderOption,
    points: Annotated[int, typer.Option("--points", min=2, help="Grid points per class")] = 200,
    out: OutOption = None,
):
    """Kernel and normal density curves of each class as CSV, for plotting."""
    with handle_errors():
        dataset = orient(load_csv(input_file, value, class_column, order))
        frame = density_grid(dataset, points)
    write_output(frame.to_csv(index=False), out)


@app.command()
def interpret(
    value: Annotated[float, typer.Argument(callback=validate_ovl_value, help="OVL value in [0, 1]")],
):
    """Name the differentiation band of an OVL value."""
    print(f"OVL {value:g}: {interpret_ovl(value).value}")


def moments_text(spec) -> str:
    return f"mean={mean(spec):.4g} sd={math.sqrt(variance(spec)):.4g}"


@app.command()
def theory(
    f1: Annotated[str, typer.Argument(callback=validate_distribution, help="Lowest class, e.g. normal(0,1)")],
    f2: Annotated[str, typer.Argument(callback=validate_distribution, help="Middle class")],
    f3: Annotated[str, typer.Argument(callback=validate_distribution, help="Highest class, e.g. gamma(5,2/3)")],
):
    """Theoretical OVL and VUS of three class distributions."""
    specs = [parse_spec(text) for text in (f1, f2, f3)]
    with handle_errors():
        ovl = theoretical_ovl(*specs)
        vus = theoretical_vus(*specs)

    print_with_underline("📐 Theoretical accuracy")
    for label, spec in zip(("F1", "F2", "F3"), specs):
        print(f"  {label} {format_spec(spec)}: {moments_text(spec)}")
    print(f"OVL={ovl:.4f} ({interpret_ovl(ovl).value})  VUS={vus:.4f}")


@app.command()
def scenarios(
    file: Annotated[
        Optional[Path], typer.Option("--file", "-f", exists=True, dir_okay=False, help="List a scenario file instead")
    ] = None,
):
    """List the built-in simulation scenarios with their theoretical OVL and VUS."""
    with handle_errors():
        registry = {s.id: s for s in load_scenario_file(file)} if file else builtin_scenarios()

    print_with_underline(f"📋 {len(registry)} scenarios")
    for scenario in registry.values():
        ovl = f"{scenario.theoretical_ovl:.4f}" if scenario.theoretical_ovl is not None else "-"
        vus = f"{scenario.theoretical_vus:.4f}" if scenario.theoretical_vus is not None else "-"
        print(f"\n{scenario.id}: {scenario.title}")
        print(f"  {' | '.join(format_spec(spec) for spec in scenario.specs)}")
        print(f"  OVL={ovl}  VUS={vus}")
        print(f"  {' | '.join(moments_text(spec) for spec in scenario.specs)}")


if __name__ == "__main__":
    app()
