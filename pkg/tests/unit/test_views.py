"""Test the representation of the results."""

import json
from fractions import Fraction
from pathlib import Path

import pytest
from _pytest.capture import CaptureFixture

from smallhouse.model.exhaust import (
    CandidateRecord,
    ExhaustJob,
    ExhaustReport,
    Verdict,
)
from smallhouse.model.measures import EquivalenceKey
from smallhouse.services import CheckResult
from smallhouse.views import (
    check_lines,
    exhaust_lines,
    print_checks,
    print_result,
    record_line,
    summary_line,
    write_exhaust,
)


@pytest.fixture(name="report")
def report_() -> ExhaustReport:
    """Build a report of two candidates."""
    return ExhaustReport(
        job=ExhaustJob(level=7, weight=3),
        records=[
            CandidateRecord(
                weight=3,
                exponents=(0, 2, 6),
                float_castle=2.0000000000000004,
                verdict=Verdict.TABLE_ONE,
                table_index=33,
                key=EquivalenceKey(coefficients=(1, -1, 2)),
            ),
            CandidateRecord(
                weight=3,
                exponents=(0, 2, 8),
                float_castle=5.049,
                verdict=Verdict.REJECTED_EXACT,
            ),
        ],
        counts={Verdict.TABLE_ONE: 1, Verdict.REJECTED_EXACT: 1},
        counts_by_weight={3: 2},
        certified_error=Fraction(1, 10**16),
        error_budget=Fraction(1, 10**14),
        wall_time=1.5,
    )


def test_record_line(report: ExhaustReport) -> None:
    """Test the JSON Lines entry of a record."""
    result = record_line(report.records[0])

    assert result == {
        "np": 3,
        "tuple": [0, 2, 6],
        "float_castle": 2.0000000000000004,
        "verdict": "TableOne(33)",
        "hash": [1, -1, 2],
    }


def test_record_line_without_hash(report: ExhaustReport) -> None:
    """Test the exactly rejected records have no hash."""
    result = record_line(report.records[1])

    assert result["verdict"] == "RejectedExact"
    assert result["hash"] is None


def test_summary_line_leaves_out_the_wall_time(report: ExhaustReport) -> None:
    """
    Given: a report that took some time
    When: building its summary entry
    Then: every verdict is counted and there's no time information
    """
    result = summary_line(report)["summary"]

    assert "wall_time" not in result
    assert result["exact_threshold"] == "501/100"
    assert result["counts"] == {
        "Form1": 0,
        "Form2": 0,
        "Form3": 0,
        "TableOne": 1,
        "RejectedExact": 1,
        "New": 0,
    }
    assert result["counts_by_weight"] == {"3": 2}


def test_exhaust_lines(report: ExhaustReport) -> None:
    """Test there's one line per record and a trailing summary."""
    result = [json.loads(line) for line in exhaust_lines(report)]

    assert len(result) == 3
    assert result[0]["tuple"] == [0, 2, 6]
    assert "summary" in result[-1]


def test_write_exhaust_to_file(report: ExhaustReport, tmp_path: Path) -> None:
    """Test the JSON Lines report is written to the file."""
    path = tmp_path / "out.jsonl"

    write_exhaust(report, str(path))  # act

    assert path.read_text(encoding="utf-8").splitlines() == list(
        exhaust_lines(report)
    )


def test_write_exhaust_to_stdout(
    report: ExhaustReport, capsys: CaptureFixture[str]
) -> None:
    """Test the JSON Lines report goes to stdout without a path."""
    write_exhaust(report)  # act

    out, _ = capsys.readouterr()
    assert out.splitlines() == list(exhaust_lines(report))


def test_print_result_as_json(capsys: CaptureFixture[str]) -> None:
    """Test the machine output is a single JSON document."""
    print_result("Cassels height", {"height": "3/2", "approximation": 1.5}, True)

    out, _ = capsys.readouterr()
    assert json.loads(out) == {"height": "3/2", "approximation": 1.5}


def test_print_result_as_table(capsys: CaptureFixture[str]) -> None:
    """Test the human output is a table of the attributes."""
    print_result("Minimal weight", {"weight": 3, "witness": ["a", "b"]}, False)

    out, _ = capsys.readouterr()
    assert "Minimal weight" in out
    assert "Weight" in out
    assert "a, b" in out


class TestChecks:
    """Test the representation of the table checks."""

    def test_check_lines(self) -> None:
        """Test the checks are serialized as dictionaries."""
        result = check_lines(
            [CheckResult(table="4", row="orders of 2", check="orders", passed=True)]
        )

        assert result == [
            {
                "table": "4",
                "row": "orders of 2",
                "check": "orders",
                "passed": True,
                "detail": "",
            }
        ]

    def test_print_checks_with_failures(self, capsys: CaptureFixture[str]) -> None:
        """Test the failed checks are listed after the summary."""
        results = [
            CheckResult(table="1", row="1: level 7", check="castle", passed=True),
            CheckResult(
                table="1", row="1: level 7", check="height", passed=False, detail="2"
            ),
        ]

        print_checks(results)  # act

        out, _ = capsys.readouterr()
        assert "Failed checks" in out
        assert "height" in out

    def test_print_checks_without_failures(self, capsys: CaptureFixture[str]) -> None:
        """Test the failures table is skipped when every check passes."""
        print_checks(
            [CheckResult(table="4", row="orders of 2", check="orders", passed=True)]
        )

        out, _ = capsys.readouterr()
        assert "Failed checks" not in out
        assert "Passed" in out
