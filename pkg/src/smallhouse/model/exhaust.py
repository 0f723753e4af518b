"""Certified exhaustive search of short sums of roots of unity with small castle.

A job enumerates the sums zeta^j_1 + ... + zeta^j_n' of 3 <= n' <= n roots of unity
of order N' = lcm(2, N), reduced by the symmetries of the problem. A binary64
evaluation of the castle filters the tuples, and the survivors are decided and
classified exactly.
"""

import logging
import math
from enum import Enum
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, permutations
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, PositiveInt, root_validator  # noqa: E0611

from ..exceptions import InvalidLevelError, TrigCertificationError
from .arithmetic import Rational, lcm, proper_divisors
from .cyclotomic import CyclotomicInt, from_sparse
from .enclosure import cosine_table, interval_bounds, sine_table
from .measures import (
    EquivalenceKey,
    FormTag,
    cassels_form,
    castle_compare,
    equivalence_hash,
)

log = logging.getLogger(__name__)

Exponents = Tuple[int, ...]

TRIG_ORACLE_BITS = 128
TRIG_TOLERANCE = Fraction(1, 10**14)
UNIT_ROUNDOFF = Fraction(1, 2**53)
CHUNK_SIZE = 4096


class ExhaustJob(BaseModel):
    """Define an exhaustive search over the sums of at most n roots of unity.

    Args:
        level: N, the level the minimal level of the sums divides.
        weight: n, the largest number of roots of unity in a sum.
        float_threshold: binary64 castles above it are discarded.
        exact_threshold: castles are decided exactly against it.
        name: preset name, if the job comes from one.
        extended: if the job is too long for a routine run.
    """

    level: PositiveInt
    weight: PositiveInt
    float_threshold: float = 5.1
    exact_threshold: Rational = Fraction(501, 100)
    name: Optional[str] = None
    extended: bool = False

    @root_validator(skip_on_failure=True)
    @classmethod
    def check_thresholds(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        """Make sure the float filter doesn't cut below the exact threshold."""
        if values["float_threshold"] <= values["exact_threshold"]:
            raise ValueError(
                f"The float threshold {values['float_threshold']} must be above "
                f"the exact threshold {values['exact_threshold']}"
            )
        return values

    @property
    def root_order(self) -> int:
        """Return N' = lcm(2, N), the order of the roots of unity being summed."""
        return lcm(2, self.level)


class CertifiedTrigTable(BaseModel):
    """Define binary64 values of cos and sin of 2 pi j / N' with a proven error.

    Args:
        root_order: N'.
        cos: binary64 cos(2 pi j / N') for 0 <= j < N'.
        sin: binary64 sin(2 pi j / N') for 0 <= j < N'.
        certified_error: bound of the distance of every entry to its true value.
    """

    root_order: PositiveInt
    cos: Tuple[float, ...]
    sin: Tuple[float, ...]
    certified_error: Rational


class Verdict(str, Enum):
    """Classify a tuple that went through the float filter."""

    FORM1 = "Form1"
    FORM2 = "Form2"
    FORM3 = "Form3"
    TABLE_ONE = "TableOne"
    REJECTED_EXACT = "RejectedExact"
    NEW = "New"


FORM_VERDICTS = {
    FormTag.SUM_OF_TWO: Verdict.FORM1,
    FormTag.ONE_PLUS_ZETA_MINUS_INVERSE: Verdict.FORM2,
    FormTag.GOLDEN_PAIR: Verdict.FORM3,
}


class CandidateRecord(BaseModel):
    """Define the outcome of a tuple that went through the float filter.

    Args:
        weight: n', the number of roots of unity.
        exponents: (j_1, ..., j_n').
        float_castle: binary64 castle.
        verdict: exact classification.
        table_index: position of the matching exceptional class for TableOne.
        key: equivalence hash, computed for every verified tuple.
    """

    weight: PositiveInt
    exponents: Exponents
    float_castle: float
    verdict: Verdict
    table_index: Optional[int] = None
    key: Optional[EquivalenceKey] = None

    @property
    def verdict_label(self) -> str:
        """Return the verdict with the table index when there is one."""
        if self.verdict == Verdict.TABLE_ONE:
            return f"{self.verdict.value}({self.table_index})"
        return self.verdict.value


class Shard(BaseModel):
    """Define the unit of parallel work, the tuples with prefix (0, d, j_3)."""

    weight: PositiveInt
    divisor: PositiveInt
    third: int

    class Config:
        """Configure the pydantic model."""

        frozen = True


class ExhaustReport(BaseModel):
    """Gather the outcome of a job.

    Args:
        job: the search that was run.
        records: candidate records sorted by (n', exponents).
        counts: number of records per verdict.
        counts_by_weight: number of records per n'.
        certified_error: error of the trigonometric table.
        error_budget: bound of the error of every binary64 castle.
        wall_time: seconds it took.
    """

    job: ExhaustJob
    records: List[CandidateRecord]
    counts: Dict[Verdict, int]
    counts_by_weight: Dict[int, int]
    certified_error: Rational
    error_budget: Rational
    wall_time: float = 0.0

    @property
    def new_count(self) -> int:
        """Return the number of sums that match no known class."""
        return self.counts.get(Verdict.NEW, 0)


# ---------- Trigonometric table ----------


def _entry_error(value: float, oracle: object) -> Fraction:
    low, high = interval_bounds(oracle)
    exact = Fraction(value)
    return max(abs(exact - low), abs(exact - high))


def build_trig_table(root_order: int) -> CertifiedTrigTable:
    """Compute the binary64 table of cos and sin of 2 pi j / N'.

    Every entry is compared with an interval evaluation at 128 bits.

    Raises:
        InvalidLevelError: if N' is not a positive even number.
        TrigCertificationError: if some entry is off by more than 10^-14.
    """
    if root_order < 2 or root_order % 2:
        raise InvalidLevelError(f"N' must be a positive even number, got {root_order}")
    cosines = tuple(math.cos(2 * math.pi * j / root_order) for j in range(root_order))
    sines = tuple(math.sin(2 * math.pi * j / root_order) for j in range(root_order))
    cos_oracle = cosine_table(root_order, TRIG_ORACLE_BITS)
    sin_oracle = sine_table(root_order, TRIG_ORACLE_BITS)

    error = Fraction(0)
    for j in range(root_order):
        error = max(
            error,
            _entry_error(cosines[j], cos_oracle[j]),
            _entry_error(sines[j], sin_oracle[j]),
        )
    if error > TRIG_TOLERANCE:
        raise TrigCertificationError(
            f"The binary64 table of order {root_order} is off by {float(error):.3e}"
        )
    log.debug(f"Certified the trig table of order {root_order} to {float(error):.3e}")
    return CertifiedTrigTable(
        root_order=root_order, cos=cosines, sin=sines, certified_error=error
    )


def error_budget(weight: int, certified_error: Fraction) -> Fraction:
    """Bound the error of a binary64 castle of a sum of n' roots of unity.

    Each of the sums of cosines and sines is off by at most
    delta = n' (eps + n' u), whatever the summation order. Squaring and adding
    values of size at most n' adds 2 (2 n' delta + delta^2) plus the rounding of
    the last three operations.
    """
    delta = weight * (certified_error + weight * UNIT_ROUNDOFF)
    rounding = 8 * weight * weight * UNIT_ROUNDOFF
    return 2 * (2 * weight * delta + delta * delta) + rounding


# ---------- Enumeration ----------


def _units(root_order: int) -> List[int]:
    return [k for k in range(1, root_order) if math.gcd(k, root_order) == 1] or [1]


def _allowed_values(root_order: int, divisor: int) -> List[int]:
    """Return the exponents j with gcd(j, N') >= d."""
    return [j for j in range(root_order) if math.gcd(j, root_order) >= divisor]


def shards(job: ExhaustJob) -> Iterator[Shard]:
    """Split the job by (n', d, j_3) in enumeration order."""
    root_order = job.root_order
    for weight in range(3, job.weight + 1):
        for divisor in proper_divisors(root_order):
            for third in _allowed_values(root_order, divisor):
                yield Shard(weight=weight, divisor=divisor, third=third)


def shard_tuples(job: ExhaustJob, shard: Shard) -> Iterator[Exponents]:
    """Yield the sorted tuples of a shard that pass the ordering constraints."""
    root_order = job.root_order
    values = [
        j for j in _allowed_values(root_order, shard.divisor) if j >= shard.third
    ]
    for rest in combinations_with_replacement(values, shard.weight - 3):
        last = rest[-1] if rest else shard.third
        # Reflection j -> d - j, keep N' - j_last > j_3 - d.
        if root_order - last <= shard.third - shard.divisor:
            continue
        yield (0, shard.divisor, shard.third, *rest)


def _is_nonzero_multiple(difference: int, step: int) -> bool:
    return difference != 0 and difference % step == 0


def _has_chain(exponents: Exponents, step: int, length: int) -> bool:
    """Check for indices i_1 < ... < i_length with consecutive differences in step Z."""
    for indices in combinations(range(len(exponents)), length):
        if all(
            _is_nonzero_multiple(exponents[second] - exponents[first], step)
            for first, second in zip(indices, indices[1:])
        ):
            return True
    return False


def _covered_by_second_form(exponents: Exponents, root_order: int) -> bool:
    half = root_order // 2
    return any(
        (k1 + k2 - 2 * k3 - half) % root_order == 0
        for k1, k2, k3 in permutations(exponents)
    )


def _covered_by_third_form(exponents: Exponents, root_order: int) -> bool:
    fifth = root_order // 5
    for k1, k2, k3, k4 in permutations(exponents):
        first, second = k1 - k2, k3 - k4
        if (
            first % fifth == 0
            and second % fifth == 0
            and (first + second) % root_order != 0
            and (first - second) % root_order != 0
        ):
            return True
    return False


def is_excluded(exponents: Exponents, job: ExhaustJob) -> bool:
    """Check the constraints that rule out shorter sums and the Cassels forms."""
    root_order = job.root_order
    if len(set(exponents)) == 1:
        return True
    forbidden = {root_order // 2}
    if root_order % 3 == 0:
        forbidden |= {root_order // 3, 2 * root_order // 3}
    for first, second in combinations(exponents, 2):
        if (second - first) % root_order in forbidden:
            return True
    if root_order % 5 == 0 and _has_chain(exponents, root_order // 5, 3):
        return True
    if root_order % 7 == 0 and _has_chain(exponents, root_order // 7, 4):
        return True
    if len(exponents) == 3 and _covered_by_second_form(exponents, root_order):
        return True
    return (
        len(exponents) == 4
        and job.level % 5 == 0
        and _covered_by_third_form(exponents, root_order)
    )


def admissible_tuples(job: ExhaustJob) -> Iterator[Exponents]:
    """Yield the symmetry reduced tuples of the job in enumeration order."""
    for shard in shards(job):
        for exponents in shard_tuples(job, shard):
            if not is_excluded(exponents, job):
                yield exponents


# ---------- Float filter ----------


def float_castle(
    exponents: Sequence[int], table: CertifiedTrigTable, threshold: float = math.inf
) -> float:
    """Evaluate the castle of the sum of roots of unity in binary64.

    The maximum runs over the units k of N'. The loop stops as soon as a value
    exceeds the threshold, returning that value.
    """
    root_order = table.root_order
    best = -math.inf
    for k in _units(root_order):
        cosine = 0.0
        sine = 0.0
        for exponent in exponents:
            index = (k * exponent) % root_order
            cosine += table.cos[index]
            sine += table.sin[index]
        value = cosine * cosine + sine * sine
        best = max(best, value)
        if best > threshold:
            break
    return best


def float_castles(batch: Sequence[Exponents], table: CertifiedTrigTable) -> List[float]:
    """Evaluate the binary64 castles of a batch of tuples of the same length.

    The roots are added one column at a time in tuple order, so every value is
    the one float_castle computes.
    """
    if not batch:
        return []
    root_order = table.root_order
    units = np.array(_units(root_order), dtype=np.int64)
    exponents = np.array(batch, dtype=np.int64)
    indices = (exponents[:, :, None] * units[None, None, :]) % root_order
    cos_table = np.asarray(table.cos, dtype=np.float64)
    sin_table = np.asarray(table.sin, dtype=np.float64)
    cosine = np.zeros((len(batch), len(units)), dtype=np.float64)
    sine = np.zeros((len(batch), len(units)), dtype=np.float64)
    for column in range(exponents.shape[1]):
        cosine += cos_table[indices[:, column, :]]
        sine += sin_table[indices[:, column, :]]
    return (cosine * cosine + sine * sine).max(axis=1).tolist()


# ---------- Exact verification ----------


def candidate_element(exponents: Sequence[int], root_order: int) -> CyclotomicInt:
    """Build the sum of the roots of unity zeta_N'^j."""
    return from_sparse(root_order, [(exponent, 1) for exponent in exponents])


def verify_candidate(
    exponents: Exponents,
    job: ExhaustJob,
    known: Mapping[EquivalenceKey, int],
    float_value: Optional[float] = None,
    cache: Optional[Dict[EquivalenceKey, Tuple[Verdict, Optional[int]]]] = None,
) -> CandidateRecord:
    """Decide the castle of a tuple exactly and classify it.

    Args:
        exponents: tuple that went through the float filter.
        job: search it belongs to.
        known: equivalence hash -> position of the exceptional classes.
        float_value: binary64 castle if it's already computed.
        cache: verdicts of the classes already classified.
    """
    root_order = job.root_order
    if float_value is None:
        float_value = float_castle(exponents, build_trig_table(root_order))
    element = candidate_element(exponents, root_order)
    key = equivalence_hash(element)
    if cache is not None and key in cache:
        verdict, index = cache[key]
    else:
        verdict, index = _classify(element, key, job, known)
        if cache is not None:
            cache[key] = (verdict, index)
    return CandidateRecord(
        weight=len(exponents),
        exponents=exponents,
        float_castle=float_value,
        verdict=verdict,
        table_index=index,
        key=key,
    )


def _classify(
    element: CyclotomicInt,
    key: EquivalenceKey,
    job: ExhaustJob,
    known: Mapping[EquivalenceKey, int],
) -> Tuple[Verdict, Optional[int]]:
    if castle_compare(element, job.exact_threshold) >= 0:
        return Verdict.REJECTED_EXACT, None
    form = cassels_form(element, key)
    if form is not None:
        return FORM_VERDICTS[form], None
    if key in known:
        return Verdict.TABLE_ONE, known[key]
    log.warning(f"{element} has a small castle and matches no known class")
    return Verdict.NEW, None


def scan_shard(
    job: ExhaustJob,
    shard: Shard,
    table: CertifiedTrigTable,
    known: Mapping[EquivalenceKey, int],
) -> List[CandidateRecord]:
    """Run the float filter over a shard and verify the survivors."""
    records: List[CandidateRecord] = []
    cache: Dict[EquivalenceKey, Tuple[Verdict, Optional[int]]] = {}
    batch: List[Exponents] = []

    def flush() -> None:
        for exponents, value in zip(batch, float_castles(batch, table)):
            if value <= job.float_threshold and not is_excluded(exponents, job):
                records.append(
                    verify_candidate(exponents, job, known, value, cache=cache)
                )
        batch.clear()

    for exponents in shard_tuples(job, shard):
        batch.append(exponents)
        if len(batch) >= CHUNK_SIZE:
            flush()
    flush()
    log.debug(f"Shard {shard.weight}/{shard.divisor}/{shard.third}: {len(records)}")
    return records


def sort_records(records: List[CandidateRecord]) -> List[CandidateRecord]:
    """Sort the records by (n', exponents)."""
    return sorted(records, key=lambda record: (record.weight, record.exponents))


def build_report(
    job: ExhaustJob,
    records: List[CandidateRecord],
    table: CertifiedTrigTable,
    wall_time: float = 0.0,
) -> ExhaustReport:
    """Sort the records and count them."""
    records = sort_records(records)
    counts: Dict[Verdict, int] = {}
    counts_by_weight: Dict[int, int] = {}
    for record in records:
        counts[record.verdict] = counts.get(record.verdict, 0) + 1
        counts_by_weight[record.weight] = counts_by_weight.get(record.weight, 0) + 1
    return ExhaustReport(
        job=job,
        records=records,
        counts=counts,
        counts_by_weight=counts_by_weight,
        certified_error=table.certified_error,
        error_budget=error_budget(max(job.weight, 3), table.certified_error),
        wall_time=wall_time,
    )
