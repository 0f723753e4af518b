"""Test the exhaustive search of short sums of roots of unity."""

from fractions import Fraction
from typing import Dict

import pytest
from pydantic import ValidationError

from smallhouse.exceptions import InvalidLevelError
from smallhouse.model.exhaust import (
    CandidateRecord,
    ExhaustJob,
    Shard,
    Verdict,
    admissible_tuples,
    build_report,
    build_trig_table,
    error_budget,
    float_castle,
    float_castles,
    is_excluded,
    scan_shard,
    shard_tuples,
    shards,
    verify_candidate,
)
from smallhouse.model.fixtures import TableFixtures
from smallhouse.model.measures import EquivalenceKey
from tests.factories import ExhaustJobFactory


@pytest.fixture(name="twenty_four_index")
def twenty_four_index_(fixtures: TableFixtures) -> int:
    """Return the position of 1 + zeta_24 + zeta_24^7 in the exceptional table."""
    return next(
        index
        for index, entry in enumerate(fixtures.exceptional, start=1)
        if entry.level == 24 and entry.element.terms == [(0, 1), (1, 1), (7, 1)]
    )


class TestExhaustJob:
    """Test the job definition."""

    @pytest.mark.parametrize(("level", "result"), [(31, 62), (12, 12), (35, 70)])
    def test_root_order(self, level: int, result: int) -> None:
        """Test N' = lcm(2, N)."""
        job = ExhaustJob(level=level, weight=3)

        assert job.root_order == result

    def test_default_thresholds(self) -> None:
        """Test the float filter leaves room above the exact threshold."""
        job = ExhaustJobFactory.build()

        assert job.exact_threshold == Fraction(501, 100)
        assert job.float_threshold > job.exact_threshold

    def test_float_threshold_must_be_above_the_exact_one(self) -> None:
        """Test the float filter can't discard castles below the exact threshold."""
        with pytest.raises(ValidationError, match="must be above"):
            ExhaustJob(level=7, weight=3, float_threshold=5.0)


class TestTrigTable:
    """Test the certified binary64 tables."""

    def test_quarter_turns(self) -> None:
        """Test the table of order 4 is exact where the values are."""
        result = build_trig_table(4)

        assert result.cos[0] == 1.0
        assert result.sin[0] == 0.0
        assert result.sin[1] == 1.0
        assert abs(result.cos[1]) < 1e-15
        assert result.certified_error <= Fraction(1, 10**14)

    def test_certified_error_of_a_published_order(self) -> None:
        """Test the table of order 62 is within 10^-14 of the true values."""
        result = build_trig_table(62)

        assert len(result.cos) == 62
        assert result.certified_error <= Fraction(1, 10**14)

    @pytest.mark.parametrize("root_order", [0, 5])
    def test_needs_an_even_order(self, root_order: int) -> None:
        """Test N' must be a positive even number."""
        with pytest.raises(InvalidLevelError):
            build_trig_table(root_order)

    def test_error_budget(self) -> None:
        """Test the error bound stays far below the threshold margin."""
        result = error_budget(8, Fraction(1, 10**14))

        assert Fraction(0) < result < Fraction(1, 10**10)
        assert error_budget(4, Fraction(1, 10**14)) < result


class TestEnumeration:
    """Test the symmetry reduced enumeration of tuples."""

    def test_shards_start_with_the_shortest_sums(self) -> None:
        """Test the first shard is (n' = 3, d = 1, j_3 = 0)."""
        job = ExhaustJob(level=31, weight=6)

        result = next(shards(job))

        assert result == Shard(weight=3, divisor=1, third=0)

    def test_shard_tuples_of_three_roots(self) -> None:
        """Test a shard of sums of three roots has a single tuple."""
        job = ExhaustJob(level=31, weight=6)

        result = list(shard_tuples(job, Shard(weight=3, divisor=1, third=3)))

        assert result == [(0, 1, 3)]
        assert not is_excluded((0, 1, 3), job)

    @pytest.mark.parametrize(
        ("shard", "exponents"),
        [
            pytest.param(Shard(weight=3, divisor=2, third=32), (0, 2, 32), id="three"),
            pytest.param(Shard(weight=4, divisor=1, third=2), (0, 1, 2, 61), id="tail"),
            pytest.param(Shard(weight=4, divisor=1, third=3), (0, 1, 3, 60), id="mid"),
        ],
    )
    def test_shard_tuples_skip_the_reflection_boundary(
        self, shard: Shard, exponents: tuple
    ) -> None:
        """
        Given: a tuple with N' - j_last equal to j_3 - d
        When: listing the tuples of its shard
        Then: it's left to its reflection j -> d - j
        """
        job = ExhaustJob(level=31, weight=4)

        result = list(shard_tuples(job, shard))

        assert exponents not in result

    @pytest.mark.parametrize("level", [31, 35])
    def test_shard_tuples_keep_one_side_of_the_reflection(self, level: int) -> None:
        """Test every tuple has N' - j_last strictly above j_3 - d."""
        job = ExhaustJob(level=level, weight=4)

        result = [
            exponents for shard in shards(job) for exponents in shard_tuples(job, shard)
        ]

        assert result
        assert all(
            job.root_order - exponents[-1] > exponents[2] - exponents[1]
            for exponents in result
        )

    def test_shard_tuples_are_sorted_after_the_prefix(self) -> None:
        """Test the free exponents are nondecreasing and respect the prefix."""
        job = ExhaustJob(level=7, weight=5)

        result = list(shard_tuples(job, Shard(weight=5, divisor=2, third=4)))

        assert result
        for exponents in result:
            assert exponents[:3] == (0, 2, 4)
            assert list(exponents[3:]) == sorted(exponents[3:])
            assert all(exponent >= 4 for exponent in exponents[3:])

    @pytest.mark.parametrize(
        ("exponents", "level", "result"),
        [
            pytest.param((0, 0, 0), 7, True, id="a single root repeated"),
            pytest.param((0, 1, 32), 31, True, id="opposite roots"),
            pytest.param((0, 4, 8), 12, True, id="roots of order three"),
            pytest.param((0, 1, 3), 31, False, id="exceptional"),
            pytest.param((0, 1, 7), 24, False, id="level 24"),
            pytest.param((0, 14, 28), 35, True, id="chain of fifth roots"),
        ],
    )
    def test_is_excluded(self, exponents: tuple, level: int, result: bool) -> None:
        """Test the tuples that are shorter sums or Cassels forms in disguise."""
        job = ExhaustJob(level=level, weight=len(exponents))

        result_ = is_excluded(exponents, job)

        assert result_ == result

    def test_admissible_tuples_are_not_excluded(self) -> None:
        """Test the enumeration only yields admissible tuples."""
        job = ExhaustJob(level=7, weight=4)

        result = list(admissible_tuples(job))

        assert result
        assert not any(is_excluded(exponents, job) for exponents in result)
        assert {len(exponents) for exponents in result} == {3, 4}


class TestFloatFilter:
    """Test the binary64 castles."""

    def test_float_castle_of_one_plus_i(self) -> None:
        """Test the castle of 1 + i is 2."""
        result = float_castle((0, 1), build_trig_table(4))

        assert result == pytest.approx(2.0)

    def test_float_castle_near_the_threshold(self) -> None:
        """Test 1 + zeta_70 + zeta_70^10 + zeta_70^29 lands just above 5.01."""
        result = float_castle((0, 1, 10, 29), build_trig_table(70))

        assert result == pytest.approx(5.01766, abs=1e-4)

    def test_float_castle_stops_above_the_threshold(self) -> None:
        """Test the early exit returns a value above the threshold."""
        result = float_castle((0, 0, 0), build_trig_table(6), threshold=1.0)

        assert result > 1.0

    def test_batch_matches_the_scalar_evaluation(self) -> None:
        """Test the vectorized castles equal the scalar ones."""
        table = build_trig_table(14)
        batch = [(0, 2, 6), (0, 1, 3), (0, 1, 2, 5)]

        result = float_castles(batch[:2], table) + float_castles(batch[2:], table)

        assert result == [float_castle(exponents, table) for exponents in batch]
        assert float_castles([], table) == []


class TestVerification:
    """Test the exact classification of the float survivors."""

    def test_exceptional_sum(
        self, known: Dict[EquivalenceKey, int], twenty_four_index: int
    ) -> None:
        """
        Given: the tuple of 1 + zeta_24 + zeta_24^7
        When: verifying it
        Then: it's matched with its exceptional class
        """
        job = ExhaustJob(level=24, weight=3)

        result = verify_candidate((0, 1, 7), job, known)

        assert result.verdict == Verdict.TABLE_ONE
        assert result.table_index == twenty_four_index
        assert result.verdict_label == f"TableOne({twenty_four_index})"
        assert result.key is not None
        assert result.float_castle == pytest.approx(4.4142135, abs=1e-6)

    def test_castle_above_the_exact_threshold(
        self, known: Dict[EquivalenceKey, int]
    ) -> None:
        """Test a float survivor with castle above 5.01 is rejected."""
        job = ExhaustJob(level=35, weight=4)

        result = verify_candidate((0, 1, 10, 29), job, known)

        assert result.verdict == Verdict.REJECTED_EXACT
        assert result.key is not None
        assert result.verdict_label == "RejectedExact"

    def test_sum_of_two_roots(self, known: Dict[EquivalenceKey, int]) -> None:
        """Test 1 + zeta_10 + zeta_10^5 collapses to a single root."""
        job = ExhaustJob(level=5, weight=3)

        result = verify_candidate((0, 1, 5), job, known)

        assert result.verdict == Verdict.FORM1

    def test_cache_reuses_the_verdicts(self, known: Dict[EquivalenceKey, int]) -> None:
        """Test equivalent tuples are classified once."""
        job = ExhaustJob(level=24, weight=3)
        cache: Dict = {}

        first = verify_candidate((0, 1, 7), job, known, cache=cache)
        result = verify_candidate((0, 6, 7), job, known, cache=cache)

        assert len(cache) == 1
        assert result.verdict == first.verdict
        assert result.key == first.key


class TestReport:
    """Test the outcome of a search."""

    def test_scan_shard_of_the_gaussian_period(
        self, fixtures: TableFixtures, known: Dict[EquivalenceKey, int]
    ) -> None:
        """
        Given: the shard of level 7 holding 1 + zeta_7 + zeta_7^3
        When: scanning it
        Then: the sum is matched with the last exceptional class
        """
        job = ExhaustJob(level=7, weight=3)
        table = build_trig_table(job.root_order)

        result = scan_shard(job, Shard(weight=3, divisor=2, third=6), table, known)

        assert [record.exponents for record in result] == [(0, 2, 6)]
        assert result[0].verdict == Verdict.TABLE_ONE
        assert result[0].table_index == len(fixtures.exceptional)

    def test_build_report_sorts_and_counts(self) -> None:
        """Test the records are sorted by (n', exponents) and counted."""
        job = ExhaustJob(level=7, weight=4)
        table = build_trig_table(job.root_order)
        records = [
            CandidateRecord(
                weight=4, exponents=(0, 1, 2, 3), float_castle=1.0, verdict="New"
            ),
            CandidateRecord(
                weight=3, exponents=(0, 2, 6), float_castle=2.0, verdict="Form1"
            ),
            CandidateRecord(
                weight=3, exponents=(0, 1, 6), float_castle=3.0, verdict="Form1"
            ),
        ]

        result = build_report(job, records, table)

        assert [record.exponents for record in result.records] == [
            (0, 1, 6),
            (0, 2, 6),
            (0, 1, 2, 3),
        ]
        assert result.counts == {Verdict.FORM1: 2, Verdict.NEW: 1}
        assert result.counts_by_weight == {3: 2, 4: 1}
        assert result.new_count == 1
        assert result.error_budget == error_budget(4, table.certified_error)
