"""Define all the orchestration functionality required by the program to work.

Classes and functions that connect the cyclotomic models with the fixture adapters
to reproduce the published tables and to run the exhaustive searches.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from functools import partial
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

from pydantic import BaseModel  # noqa: E0611
from rich.console import Console
from rich.progress import track

from .exceptions import SmallhouseError
from .model.arithmetic import lcm, phi
from .model.cyclotomic import CyclotomicInt
from .model.exhaust import (
    CandidateRecord,
    CertifiedTrigTable,
    ExhaustJob,
    ExhaustReport,
    Shard,
    build_report,
    build_trig_table,
    scan_shard,
    shards,
)
from .model.fixtures import (
    ExceptionalEntry,
    ExpectedCastle,
    MatchingEntry,
    SplittingEntry,
    TableFixtures,
)
from .model.measures import (
    EquivalenceKey,
    FamilyForm,
    FormTag,
    cassels_form,
    cassels_height,
    castle_equals,
    equivalence_hash,
    family_element,
    minimal_level,
    minimal_weight,
)
from .model.splitting import order_table, splitting_profile, uk_box

log = logging.getLogger(__name__)

# Progress bars go to stderr so the JSON output stays parseable.
progress_console = Console(stderr=True)

CheckOutcome = Tuple[bool, str]

TABLES = ("1", "2", "3", "4", "families")
# Largest weight the exhaustive weight search is trusted with.
MAX_CERTIFIED_WEIGHT = 4


class CheckResult(BaseModel):
    """Define the outcome of a single verification.

    Args:
        table: table the check belongs to.
        row: row identifier inside the table.
        check: what was checked.
        passed: whether the published value was reproduced.
        detail: computed value or error message.
    """

    table: str
    row: str
    check: str
    passed: bool
    detail: str = ""


def _run_check(
    table: str, row: str, check: str, test: Callable[[], CheckOutcome]
) -> CheckResult:
    """Run a check, turning the errors into failures."""
    try:
        passed, detail = test()
    except (SmallhouseError, ValueError) as error:
        passed, detail = False, f"error: {error}"
    if not passed:
        log.warning(f"Table {table}, {row}: {check} failed ({detail})")
    return CheckResult(table=table, row=row, check=check, passed=passed, detail=detail)


# ---------- Table 1 ----------


def _castle_check(element: CyclotomicInt, castle: ExpectedCastle) -> CheckOutcome:
    return castle_equals(element, castle.value()), str(castle)


def _height_check(element: CyclotomicInt, expected: Any) -> CheckOutcome:
    height = cassels_height(element)
    return height == expected, str(height)


def _level_check(element: CyclotomicInt, expected: int) -> CheckOutcome:
    level, _ = minimal_level(element)
    return level == expected, str(level)


def _not_cassels_check(element: CyclotomicInt) -> CheckOutcome:
    form = cassels_form(element)
    return form is None, "none" if form is None else form.value


def _integrity_check(entry: ExceptionalEntry) -> CheckOutcome:
    denominator = entry.height.denominator
    return phi(entry.level) % denominator == 0, f"denominator {denominator}"


def table_one_keys(fixtures: TableFixtures) -> Dict[EquivalenceKey, int]:
    """Map the equivalence hash of every exceptional class to its 1-based position."""
    return {
        equivalence_hash(entry.element.to_element()): index
        for index, entry in enumerate(fixtures.exceptional, start=1)
    }


def verify_table1(fixtures: TableFixtures) -> List[CheckResult]:
    """Check the castle, height, minimal level and form of every exceptional class.

    The Cassels heights, castles and minimal levels must match the published ones,
    no entry can belong to a Cassels family, and no two entries can be equivalent.
    Whether the entries are presented with minimal weight is not checked.
    """
    results: List[CheckResult] = []
    owners: Dict[EquivalenceKey, str] = {}
    duplicates: List[str] = []
    for index, entry in enumerate(
        track(
            fixtures.exceptional,
            description="Verifying table 1",
            console=progress_console,
            transient=True,
        ),
        start=1,
    ):
        row = f"{index}: level {entry.level}"
        element = entry.element.to_element()
        results.extend(
            [
                _run_check("1", row, "fixture", partial(_integrity_check, entry)),
                _run_check(
                    "1", row, "castle", partial(_castle_check, element, entry.castle)
                ),
                _run_check(
                    "1", row, "height", partial(_height_check, element, entry.height)
                ),
                _run_check(
                    "1", row, "level", partial(_level_check, element, entry.level)
                ),
                _run_check("1", row, "form", partial(_not_cassels_check, element)),
            ]
        )
        key = equivalence_hash(element)
        if key in owners:
            duplicates.append(f"{row} ~ {owners[key]}")
        owners.setdefault(key, row)

    results.append(
        CheckResult(
            table="1",
            row="all",
            check="distinct hashes",
            passed=not duplicates,
            detail="; ".join(duplicates) or f"{len(owners)} classes",
        )
    )
    return results


# ---------- Table 2 ----------


def _weight_check(element: CyclotomicInt, expected: int) -> CheckOutcome:
    found = minimal_weight(element, max_weight=expected)
    return found.weight == expected, str(found.weight)


def verify_table2(fixtures: TableFixtures) -> List[CheckResult]:
    """Check the Cassels heights of the short sums, and their weights up to 4."""
    results: List[CheckResult] = []
    for entry in fixtures.weight_bounds:
        for position, sparse in enumerate(entry.elements, start=1):
            row = f"n={entry.weight} #{position}"
            element = sparse.to_element()
            results.append(
                _run_check(
                    "2", row, "height", partial(_height_check, element, entry.height)
                )
            )
            if entry.weight <= MAX_CERTIFIED_WEIGHT:
                results.append(
                    _run_check(
                        "2",
                        row,
                        "weight",
                        partial(_weight_check, element, entry.weight),
                    )
                )
    return results


# ---------- Table 3 ----------


def _hash_check(element: CyclotomicInt, expected: EquivalenceKey) -> CheckOutcome:
    key = equivalence_hash(element)
    return key == expected, str(key)


def _family_check(entry: MatchingEntry) -> CheckOutcome:
    form: FamilyForm = entry.family  # type: ignore
    built = family_element(form)
    return built == entry.element.to_element(), str(built)


def verify_table3(fixtures: TableFixtures) -> List[CheckResult]:
    """Check the equivalence hashes of the classes with castle below 4."""
    results: List[CheckResult] = []
    for index, entry in enumerate(fixtures.matching, start=1):
        row = f"{index}: {entry.robinson_item}"
        results.append(
            _run_check(
                "3",
                row,
                "hash",
                partial(_hash_check, entry.element.to_element(), entry.key),
            )
        )
        if entry.partner is not None:
            results.append(
                _run_check(
                    "3",
                    row,
                    "partner hash",
                    partial(_hash_check, entry.partner.to_element(), entry.key),
                )
            )
        if entry.family is not None:
            results.append(
                _run_check("3", row, "family", partial(_family_check, entry))
            )
    return results


# ---------- Table 4 ----------


def _splitting_check(entry: SplittingEntry) -> CheckOutcome:
    profile = splitting_profile(entry.level, entry.prime)
    box = uk_box(profile, entry.exponent_m, entry.self_conjugate)
    passed = (
        entry.prime**entry.exponent_m == entry.castle
        and box.dims == entry.t_size
        and box.per_axis_range == tuple(entry.per_axis_range)
    )
    return passed, f"#T={box.dims}, U={box.per_axis_range}"


def _order_check(prime: int, expected: Mapping[int, Optional[int]]) -> CheckOutcome:
    computed = order_table([prime], list(expected))[prime]
    return computed == dict(expected), str(computed)


def verify_table4(fixtures: TableFixtures) -> List[CheckResult]:
    """Check the #T_K and U_K of the castle 4 and 5 cases, and the order table."""
    results = [
        _run_check(
            "4",
            f"c={entry.castle} N={entry.level}",
            "splitting",
            partial(_splitting_check, entry),
        )
        for entry in fixtures.splitting
    ]
    results.extend(
        _run_check(
            "4",
            f"orders of {entry.prime}",
            "orders",
            partial(_order_check, entry.prime, entry.orders),
        )
        for entry in fixtures.orders
    )
    return results


# ---------- Cassels families ----------


def expected_family_level(tag: FormTag, level: int) -> int:
    """Return the minimal level of the family member built with zeta_level.

    With N' = N / 2 when N = 2 (mod 4) and N' = N otherwise, the levels are N' for
    1 + zeta (1 when N = 3), N' for 1 + zeta - zeta^-1 (1 when N is 3 or 6, 4 when
    N = 12) and lcm(5, N') for the golden pair (1 when N = 1).
    """
    reduced = level // 2 if level % 4 == 2 else level
    if tag == FormTag.SUM_OF_TWO:
        return 1 if level == 3 else reduced
    if tag == FormTag.ONE_PLUS_ZETA_MINUS_INVERSE:
        if level in (3, 6):
            return 1
        return 4 if level == 12 else reduced
    return 1 if level == 1 else lcm(5, reduced)


def _family_level_check(form: FamilyForm) -> CheckOutcome:
    level, _ = minimal_level(family_element(form))
    return level == expected_family_level(form.tag, form.parameter), str(level)


def verify_family_levels(bound: int = 200) -> List[CheckResult]:
    """Check the minimal levels of the Cassels families for every N <= bound."""
    forms = [
        FamilyForm(tag=tag, parameter=level)
        for level in range(1, bound + 1)
        for tag in FormTag
    ]
    return [
        _run_check(
            "families",
            f"{form.tag.value} N={form.parameter}",
            "level",
            partial(_family_level_check, form),
        )
        for form in track(
            forms,
            description="Verifying the family levels",
            console=progress_console,
            transient=True,
        )
    ]


def verify_tables(
    fixtures: TableFixtures, tables: Optional[List[str]] = None, family_bound: int = 200
) -> List[CheckResult]:
    """Run the verification pipelines of the selected tables in table order.

    Args:
        fixtures: published tables.
        tables: tables to verify, all of them by default.
        family_bound: largest N of the Cassels families check.

    Raises:
        ValueError: if an unknown table is requested.
    """
    selected = list(TABLES) if not tables or "all" in tables else tables
    unknown = set(selected) - set(TABLES)
    if unknown:
        raise ValueError(f"Unknown tables: {', '.join(sorted(unknown))}")
    pipelines: Dict[str, Callable[[], List[CheckResult]]] = {
        "1": partial(verify_table1, fixtures),
        "2": partial(verify_table2, fixtures),
        "3": partial(verify_table3, fixtures),
        "4": partial(verify_table4, fixtures),
        "families": partial(verify_family_levels, family_bound),
    }
    results: List[CheckResult] = []
    for table in TABLES:
        if table in selected:
            log.info(f"Verifying table {table}")
            results.extend(pipelines[table]())
    return results


# ---------- Exhaustive search ----------

_worker_state: Dict[str, Any] = {}


def _install_worker(
    table: CertifiedTrigTable, known: Mapping[EquivalenceKey, int]
) -> None:
    """Keep the read only data of the job in the worker process."""
    _worker_state["table"] = table
    _worker_state["known"] = known


def _scan_in_worker(job: ExhaustJob, shard: Shard) -> List[CandidateRecord]:
    return scan_shard(job, shard, _worker_state["table"], _worker_state["known"])


def run_job(
    job: ExhaustJob, known: Mapping[EquivalenceKey, int], jobs: int = 1
) -> ExhaustReport:
    """Run an exhaustive search, optionally split across worker processes.

    The report is the same whatever the number of workers.

    Args:
        job: search to run.
        known: equivalence hash -> position of the exceptional classes.
        jobs: number of worker processes.

    Raises:
        TrigCertificationError: if the binary64 table can't be certified.
    """
    start = time.perf_counter()
    table = build_trig_table(job.root_order)
    work = list(shards(job))
    log.info(
        f"Searching the sums of up to {job.weight} roots of unity of order "
        f"{job.root_order} in {len(work)} shards"
    )
    records: List[CandidateRecord] = []
    if jobs > 1:
        with ProcessPoolExecutor(
            max_workers=jobs, initializer=_install_worker, initargs=(table, known)
        ) as executor:
            futures = [executor.submit(_scan_in_worker, job, shard) for shard in work]
            for future in track(
                as_completed(futures),
                total=len(futures),
                description="Scanning shards",
                console=progress_console,
                transient=True,
            ):
                records.extend(future.result())
    else:
        for shard in track(
            work,
            description="Scanning shards",
            console=progress_console,
            transient=True,
        ):
            records.extend(scan_shard(job, shard, table, known))

    report = build_report(job, records, table, time.perf_counter() - start)
    log.info(
        f"Found {len(report.records)} candidates, {report.new_count} new, "
        f"in {report.wall_time:.1f}s"
    )
    return report
