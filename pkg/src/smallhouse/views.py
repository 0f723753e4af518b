"""Define the representations of the data."""

import json
from collections import defaultdict
from typing import Any, Dict, Iterator, List, Mapping, Optional

import click
from rich import box
from rich.console import Console
from rich.table import Table

from .model.exhaust import CandidateRecord, ExhaustReport, Verdict
from .services import CheckResult


def print_json(data: Any) -> None:
    """Print the data as a single JSON document on stdout."""
    click.echo(json.dumps(data, sort_keys=False))


def print_mapping(title: str, data: Mapping[str, Any]) -> None:
    """Print the attributes of a result as a two column table.

    Args:
        title: name of the result.
        data: attribute name -> value.
    """
    table = Table(box=box.MINIMAL_HEAVY_HEAD)
    table.add_column("Attribute", justify="left", style="green")
    table.add_column(title, justify="left")
    for attribute, value in data.items():
        if value is None:
            value = ""
        elif isinstance(value, (list, tuple)):
            value = ", ".join(str(element) for element in value)
        table.add_row(_snake_to_upper(attribute), str(value))

    Console().print(table)


def print_result(title: str, data: Mapping[str, Any], json_output: bool) -> None:
    """Print a result as JSON or as a table."""
    if json_output:
        print_json(dict(data))
    else:
        print_mapping(title, data)


def _snake_to_upper(string: str) -> str:
    """Convert a string from snake case to upper case words."""
    return " ".join([word.capitalize() for word in string.split("_")])


# ---------- Exhaustive search ----------


def record_line(record: CandidateRecord) -> Dict[str, Any]:
    """Build the JSON Lines entry of a candidate record."""
    return {
        "np": record.weight,
        "tuple": list(record.exponents),
        "float_castle": record.float_castle,
        "verdict": record.verdict_label,
        "hash": None if record.key is None else list(record.key.coefficients),
    }


def summary_line(report: ExhaustReport) -> Dict[str, Any]:
    """Build the trailing summary entry of an exhaustive search.

    The wall time is left out so the same job always gives the same output.
    """
    return {
        "summary": {
            "level": report.job.level,
            "weight": report.job.weight,
            "float_threshold": report.job.float_threshold,
            "exact_threshold": str(report.job.exact_threshold),
            "counts": {
                verdict.value: report.counts.get(verdict, 0) for verdict in Verdict
            },
            "counts_by_weight": {
                str(weight): count
                for weight, count in sorted(report.counts_by_weight.items())
            },
            "certified_error": float(report.certified_error),
            "error_budget": float(report.error_budget),
        }
    }


def exhaust_lines(report: ExhaustReport) -> Iterator[str]:
    """Yield the JSON Lines serialization of the report."""
    for record in report.records:
        yield json.dumps(record_line(record))
    yield json.dumps(summary_line(report))


def write_exhaust(report: ExhaustReport, path: Optional[str] = None) -> None:
    """Write the JSON Lines report to a file, or to stdout when there is no path."""
    if path is None:
        for line in exhaust_lines(report):
            click.echo(line)
        return
    with open(path, "w", encoding="utf-8") as file_descriptor:
        for line in exhaust_lines(report):
            file_descriptor.write(f"{line}\n")


def print_exhaust_summary(report: ExhaustReport) -> None:
    """Print the verdict counts of an exhaustive search."""
    title = f"N={report.job.level}, n={report.job.weight}"
    if report.job.name is not None:
        title = f"{report.job.name} ({title})"
    table = Table(box=box.MINIMAL_HEAVY_HEAD, title=title)
    table.add_column("Verdict", justify="left", style="green")
    table.add_column("Count", justify="right", style="cyan")
    for verdict in Verdict:
        table.add_row(verdict.value, str(report.counts.get(verdict, 0)))
    table.add_row("Error budget", f"{float(report.error_budget):.3e}")
    table.add_row("Wall time", f"{report.wall_time:.1f}s")

    Console(stderr=True).print(table)


# ---------- Table verification ----------


def check_lines(results: List[CheckResult]) -> List[Dict[str, Any]]:
    """Build the JSON report of the table checks."""
    return [result.dict() for result in results]


def print_checks(results: List[CheckResult]) -> None:
    """Print the failed checks and the number of passed checks per table."""
    passed: Dict[str, int] = defaultdict(int)
    failed: Dict[str, int] = defaultdict(int)
    failures = Table(box=box.MINIMAL_HEAVY_HEAD, title="Failed checks")
    failures.add_column("Table", justify="center", style="green")
    failures.add_column("Row", justify="left", style="magenta")
    failures.add_column("Check", justify="left", style="cyan")
    failures.add_column("Detail", justify="left")
    for result in results:
        if result.passed:
            passed[result.table] += 1
        else:
            failed[result.table] += 1
            failures.add_row(result.table, result.row, result.check, result.detail)

    summary = Table(box=box.MINIMAL_HEAVY_HEAD)
    summary.add_column("Table", justify="center", style="green")
    summary.add_column("Passed", justify="right", style="cyan")
    summary.add_column("Failed", justify="right", style="red")
    for table in dict.fromkeys(result.table for result in results):
        summary.add_row(table, str(passed[table]), str(failed[table]))

    console = Console()
    console.print(summary)
    if failures.row_count:
        console.print(failures)
