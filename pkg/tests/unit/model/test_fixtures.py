"""Test the models of the published tables."""

from fractions import Fraction

import pytest
from pydantic import ValidationError

from smallhouse.model.cyclotomic import from_sparse
from smallhouse.model.fixtures import (
    CastleTag,
    ExceptionalEntry,
    ExpectedCastle,
    SparseElement,
    TableFixtures,
)


class TestExpectedCastle:
    """Test the symbolic castles."""

    def test_one_plus_four_cosine_squared(self) -> None:
        """Test 1 + 4 cos^2(pi / 3) = 2."""
        castle = ExpectedCastle(tag=CastleTag.ONE_PLUS_FOUR_COS2, parameter=3)

        assert castle.value() == 2
        assert str(castle) == "1 + 4cos^2(pi/3)"

    def test_four_cosine_squared(self) -> None:
        """Test 4 cos^2(pi / 8) is read as 2 + zeta_8 + zeta_8^-1."""
        castle = ExpectedCastle(tag="4cos2", parameter=8)

        assert castle.value() == from_sparse(8, [(0, 2), (1, 1), (7, 1)])
        assert str(castle) == "4cos^2(pi/8)"

    def test_surd(self) -> None:
        """Test the surd castles are built from the Gauss sums."""
        castle = ExpectedCastle(tag="surd", parameter=13, sign=-1)

        assert castle.value() + ExpectedCastle(tag="surd", parameter=13).value() == 5
        assert str(castle) == "(5 - sqrt(13))/2"


class TestSparseElement:
    """Test the elements of the tables."""

    def test_to_element(self) -> None:
        """Test the terms are read as exponent, coefficient pairs."""
        element = SparseElement(level=7, terms=[(0, 1), (1, 1), (3, 1)])

        result = element.to_element()

        assert result == from_sparse(7, [(0, 1), (1, 1), (3, 1)])

    def test_exponents_must_be_reduced(self) -> None:
        """Test the exponents are in [0, level)."""
        with pytest.raises(ValidationError, match="not reduced modulo 7"):
            SparseElement(level=7, terms=[(7, 1)])


def test_exceptional_entry_checks_the_level() -> None:
    """Test the element must be presented at the stated minimal level."""
    with pytest.raises(ValidationError, match="expected 24"):
        ExceptionalEntry(
            castle={"tag": "1+4cos2", "parameter": 8},
            height="3",
            level=24,
            element={"level": 12, "terms": [(0, 1)]},
        )


class TestTableFixtures:
    """Test the packaged tables."""

    def test_heights_are_exact(self, fixtures: TableFixtures) -> None:
        """Test the heights are loaded as fractions."""
        result = {entry.height for entry in fixtures.exceptional}

        assert Fraction(5, 2) in result
        assert all(isinstance(height, Fraction) for height in result)

    def test_preset(self, fixtures: TableFixtures) -> None:
        """Test the presets are named after their key."""
        result = fixtures.preset("l31w6")

        assert result.name == "l31w6"
        assert result.level == 31
        assert result.weight == 6
        assert not result.extended
        assert fixtures.preset("l60060w4").extended

    def test_unknown_preset(self, fixtures: TableFixtures) -> None:
        """Test a helpful error is raised for unknown presets."""
        with pytest.raises(KeyError, match="Unknown preset nope"):
            fixtures.preset("nope")
