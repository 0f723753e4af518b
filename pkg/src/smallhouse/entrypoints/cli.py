"""Command line interface definition."""

import logging
import sys
from fractions import Fraction
from typing import Any, Callable, List, NoReturn, Optional, Tuple

import click
from click.core import Context

from .. import services, views
from ..exceptions import SmallhouseError
from ..model.combinatorics import (
    Lemma,
    check_property,
    hadamard_bound,
    primes_to_enumerate,
)
from ..model.cyclotomic import CyclotomicInt, from_sparse, parse_sparse
from ..model.exhaust import ExhaustJob
from ..model.measures import (
    cassels_form,
    cassels_height,
    castle_enclosure,
    equivalence_hash,
    minimal_weight,
    reduce_to_minimal_level,
)
from ..model.splitting import splitting_profile, uk_box
from ..version import version_info
from . import load_config, load_fixtures, load_logger

log = logging.getLogger(__name__)


@click.group()
@click.version_option(version="", message=version_info())
@click.option(
    "-c",
    "--config_path",
    default="~/.local/share/smallhouse/config.yaml",
    help="configuration file path",
    envvar="SMALLHOUSE_CONFIG_PATH",
)
@click.option("-v", "--verbose", is_flag=True)
@click.option("--json", "json_output", is_flag=True, help="print machine output")
@click.pass_context
def cli(ctx: Context, config_path: str, verbose: bool, json_output: bool) -> None:
    """Measure the size of cyclotomic integers."""
    ctx.ensure_object(dict)
    load_logger(verbose)
    ctx.obj["config"] = load_config(config_path)
    if not verbose:
        logging.getLogger().setLevel(ctx.obj["config"].log_level.value.upper())
    ctx.obj["json"] = json_output


def _abort(error: Exception) -> NoReturn:
    log.error(str(error))
    sys.exit(1)


def element_options(function: Callable[..., Any]) -> Callable[..., Any]:
    """Add the options that describe a cyclotomic integer."""
    function = click.option(
        "--elt",
        required=True,
        help="sparse element, exponent:coefficient pairs split by commas",
    )(function)
    return click.option(
        "--level", required=True, type=click.IntRange(min=1), help="N of zeta_N"
    )(function)


def _parse_element(level: int, elt: str) -> CyclotomicInt:
    try:
        terms = parse_sparse(elt)
    except ValueError as error:
        raise click.BadParameter(str(error), param_hint="--elt") from error
    return from_sparse(level, terms)


@cli.command()
@click.pass_context
@element_options
def height(ctx: Context, level: int, elt: str) -> None:
    """Print the Cassels height, the mean of the squared absolute values."""
    element = _parse_element(level, elt)
    value = cassels_height(element)
    views.print_result(
        "Cassels height",
        {
            "element": str(element),
            "height": str(value),
            "approximation": float(value),
        },
        ctx.obj["json"],
    )


@cli.command()
@click.pass_context
@element_options
@click.option("--bits", type=click.IntRange(min=1), help="enclosure width 2^-bits")
def castle(ctx: Context, level: int, elt: str, bits: Optional[int]) -> None:
    """Print a certified enclosure of the largest squared absolute value."""
    element = _parse_element(level, elt)
    if bits is None:
        bits = ctx.obj["config"].enclosure_bits
    enclosure = castle_enclosure(element, Fraction(1, 2**bits))
    views.print_result(
        "Castle",
        {
            "element": str(element),
            "lo": str(enclosure.lo),
            "hi": str(enclosure.hi),
            "approximation": enclosure.midpoint,
            "precision_bits": enclosure.precision_bits,
        },
        ctx.obj["json"],
    )


@cli.command()
@click.pass_context
@element_options
def minlevel(ctx: Context, level: int, elt: str) -> None:
    """Print the least level of the element up to a root of unity."""
    element = _parse_element(level, elt)
    reduced, root = reduce_to_minimal_level(element)
    views.print_result(
        "Minimal level",
        {
            "minimal_level": reduced.level,
            "root": str(root),
            "reduced": str(reduced),
            "terms": [list(term) for term in reduced.sparse()],
        },
        ctx.obj["json"],
    )


@cli.command(name="hash")
@click.pass_context
@element_options
def hash_(ctx: Context, level: int, elt: str) -> None:
    """Print the key shared by the elements equivalent to this one."""
    key = equivalence_hash(_parse_element(level, elt))
    views.print_result(
        "Equivalence hash",
        {
            "hash": list(key.coefficients),
            "polynomial": str(key),
            "degree": key.degree,
        },
        ctx.obj["json"],
    )


@cli.command()
@click.pass_context
@element_options
@click.option(
    "--max-weight", type=click.IntRange(min=0), help="give up above this weight"
)
def weight(ctx: Context, level: int, elt: str, max_weight: Optional[int]) -> None:
    """Print the least number of roots of unity adding up to the element."""
    if max_weight is None:
        max_weight = ctx.obj["config"].weight_bound
    found = minimal_weight(_parse_element(level, elt), max_weight=max_weight)
    views.print_result(
        "Minimal weight",
        {
            "weight": found.weight,
            "witness": [str(root) for root in found.witness],
            "bound": found.bound,
            "exceeded": found.exceeded,
        },
        ctx.obj["json"],
    )


@cli.command(name="cassels-test")
@click.pass_context
@element_options
def cassels_test(ctx: Context, level: int, elt: str) -> None:
    """Check if the element belongs to one of the Cassels families."""
    form = cassels_form(_parse_element(level, elt))
    views.print_result(
        "Cassels test",
        {"cassels": form is not None, "form": None if form is None else form.value},
        ctx.obj["json"],
    )


def _parse_pair(pair: str) -> Tuple[int, int]:
    try:
        level, weight_ = (int(part) for part in pair.split(","))
    except ValueError as error:
        raise click.BadParameter(
            f"'{pair}' is not of the form N,n", param_hint="--pair"
        ) from error
    return level, weight_


# R0913: too many arguments, but they are the command line options.
@cli.command()
@click.pass_context
@click.option("--pair", help="level and weight of the search, as N,n")
@click.option("--preset", help="name of a published search")
@click.option("--float-threshold", type=float, help="binary64 castle filter")
@click.option("--exact-threshold", help="castle bound decided exactly, e.g. 5.01")
@click.option("--jobs", type=click.IntRange(min=1), help="worker processes")
@click.option("--out", type=click.Path(dir_okay=False), help="JSON Lines output file")
@click.option("--extended", is_flag=True, help="allow the long published searches")
def exhaust(  # noqa: R0913
    ctx: Context,
    pair: Optional[str],
    preset: Optional[str],
    float_threshold: Optional[float],
    exact_threshold: Optional[str],
    jobs: Optional[int],
    out: Optional[str],
    extended: bool,
) -> None:
    """Search the short sums of roots of unity with castle below the threshold."""
    config = ctx.obj["config"]
    if (pair is None) == (preset is None):
        raise click.UsageError("Use exactly one of --pair and --preset")
    try:
        fixtures = load_fixtures(config)
        if preset is not None:
            job = fixtures.preset(preset)
            if job.extended and not extended:
                raise SmallhouseError(f"The preset {preset} needs the --extended flag")
            values = job.dict()
        else:
            level, weight_ = _parse_pair(pair)  # type: ignore
            values = {
                "level": level,
                "weight": weight_,
                "float_threshold": config.float_threshold,
                "exact_threshold": config.exact_threshold_value,
            }
        if float_threshold is not None:
            values["float_threshold"] = float_threshold
        if exact_threshold is not None:
            values["exact_threshold"] = Fraction(exact_threshold)
        job = ExhaustJob(**values)
        report = services.run_job(
            job, services.table_one_keys(fixtures), jobs or config.jobs
        )
    except (KeyError, SmallhouseError, ValueError) as error:
        _abort(error)

    views.write_exhaust(report, out)
    views.print_exhaust_summary(report)


@cli.command()
@click.pass_context
@click.option(
    "--lemma", type=click.Choice([lemma.value for lemma in Lemma]), required=True
)
@click.option("--p", "prime", type=click.IntRange(min=2), required=True)
@click.option("--x", "size", type=click.IntRange(min=1), required=True)
@click.option("--witness", is_flag=True, help="show the first counterexample")
@click.option("--unnormalized", is_flag=True, help="don't fix 0 and 1 in the subsets")
@click.option("--jobs", type=click.IntRange(min=1), help="worker processes")
def diffset(  # noqa: R0913
    ctx: Context,
    lemma: str,
    prime: int,
    size: int,
    witness: bool,
    unnormalized: bool,
    jobs: Optional[int],
) -> None:
    """Check a difference set property on every subset of a given size."""
    verdict = check_property(
        Lemma(lemma),
        prime,
        size,
        normalized=not unnormalized,
        jobs=jobs or ctx.obj["config"].jobs,
    )
    data = {
        "lemma": verdict.lemma.value,
        "p": verdict.prime,
        "x": verdict.size,
        "holds": verdict.holds,
        "checked": verdict.checked,
    }
    if witness:
        data["witness"] = verdict.witness
    if verdict.lemma == Lemma.SINGLETON:
        data["hadamard_bound"] = hadamard_bound(size)
        data["primes_to_enumerate"] = primes_to_enumerate(size)
    views.print_result("Difference sets", data, ctx.obj["json"])


@cli.command()
@click.pass_context
@click.option("--level", type=click.IntRange(min=1), required=True)
@click.option("--prime", type=int, required=True)
@click.option("--castle-exponent", type=int, help="m of the castle c = p^m")
@click.option("--self-conjugate", is_flag=True)
def splitting(
    ctx: Context,
    level: int,
    prime: int,
    castle_exponent: Optional[int],
    self_conjugate: bool,
) -> None:
    """Print how a prime splits in Q(zeta_N) and the box of valuations."""
    try:
        profile = splitting_profile(level, prime)
        data = profile.dict()
        if castle_exponent is not None:
            box = uk_box(profile, castle_exponent, self_conjugate)
            data["box_dims"] = box.dims
            data["box_range"] = list(box.per_axis_range)
            data["box_size"] = box.size
    except (SmallhouseError, ValueError) as error:
        _abort(error)
    views.print_result("Splitting", data, ctx.obj["json"])


@cli.command(name="verify-tables")
@click.pass_context
@click.option(
    "--table",
    "tables",
    type=click.Choice([*services.TABLES, "all"]),
    multiple=True,
    help="table to verify, all of them by default",
)
@click.option(
    "--family-bound", type=click.IntRange(min=1), help="largest N of the families"
)
def verify_tables(
    ctx: Context, tables: List[str], family_bound: Optional[int]
) -> None:
    """Reproduce the published tables, exiting with 1 if some check fails."""
    config = ctx.obj["config"]
    try:
        results = services.verify_tables(
            load_fixtures(config),
            list(tables),
            family_bound or config.family_bound,
        )
    except (SmallhouseError, ValueError) as error:
        _abort(error)

    if ctx.obj["json"]:
        views.print_json(views.check_lines(results))
    else:
        views.print_checks(results)
    if not all(result.passed for result in results):
        sys.exit(1)


@cli.command(hidden=True)
def null() -> None:
    """Do nothing.

    Used for the tests until we have a better solution.
    """


if __name__ == "__main__":  # pragma: no cover
    cli()  # pylint: disable=E1120
