"""Define the published tables the verification pipelines check against."""

from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, PositiveInt, root_validator  # noqa: E0611

from .arithmetic import Rational
from .cyclotomic import CyclotomicInt, from_sparse
from .exhaust import ExhaustJob
from .measures import EquivalenceKey, FamilyForm, surd_castle


class CastleTag(str, Enum):
    """Name the shapes of the exactly known castles."""

    ONE_PLUS_FOUR_COS2 = "1+4cos2"
    FOUR_COS2 = "4cos2"
    SURD = "surd"


class ExpectedCastle(BaseModel):
    """Define a castle symbolically.

    Args:
        tag: 1 + 4 cos^2(pi / m), 4 cos^2(pi / m) or (5 + sign * sqrt(d)) / 2.
        parameter: m or d.
        sign: sign of the square root of the surd castles.
    """

    tag: CastleTag
    parameter: PositiveInt
    sign: int = 1

    def value(self) -> CyclotomicInt:
        """Return the castle as a real element, read at zeta_m = e^(2 pi i/m)."""
        level = self.parameter
        if self.tag == CastleTag.SURD:
            return surd_castle(level, self.sign)
        constant = 3 if self.tag == CastleTag.ONE_PLUS_FOUR_COS2 else 2
        return from_sparse(level, [(0, constant), (1, 1), (-1 % level, 1)])

    def __str__(self) -> str:
        """Represent the castle symbolically."""
        if self.tag == CastleTag.SURD:
            sign = "+" if self.sign > 0 else "-"
            return f"(5 {sign} sqrt({self.parameter}))/2"
        prefix = "1 + " if self.tag == CastleTag.ONE_PLUS_FOUR_COS2 else ""
        return f"{prefix}4cos^2(pi/{self.parameter})"


class SparseElement(BaseModel):
    """Define a cyclotomic integer by its (exponent, coefficient) terms.

    Every exponent must already be reduced modulo the level.
    """

    level: PositiveInt
    terms: List[Tuple[int, int]]

    @root_validator(skip_on_failure=True)
    @classmethod
    def check_reduced_exponents(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        """Make sure no exponent falls outside [0, level)."""
        for exponent, _ in values["terms"]:
            if not 0 <= exponent < values["level"]:
                raise ValueError(
                    f"Exponent {exponent} is not reduced modulo {values['level']}"
                )
        return values

    def to_element(self) -> CyclotomicInt:
        """Build the cyclotomic integer."""
        return from_sparse(self.level, self.terms)


class ExceptionalEntry(BaseModel):
    """Define a representative of an exceptional equivalence class.

    Args:
        castle: exact castle.
        height: Cassels height.
        level: minimal level.
        element: representative presented at its minimal level.
    """

    castle: ExpectedCastle
    height: Rational
    level: PositiveInt
    element: SparseElement

    @root_validator(skip_on_failure=True)
    @classmethod
    def check_level(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        """Make sure the element is presented at the stated level."""
        if values["element"].level != values["level"]:
            raise ValueError(
                f"Element at level {values['element'].level}, "
                f"expected {values['level']}"
            )
        return values


class WeightBoundEntry(BaseModel):
    """Define elements of weight at least n with a small Cassels height."""

    weight: PositiveInt
    height: Rational
    elements: List[SparseElement]


class MatchingEntry(BaseModel):
    """Define a class of castle below 4 matched with a known presentation.

    Args:
        element: cyclotomic integer.
        expected_hash: coefficients of its equivalence hash.
        robinson_item: the matching presentation as printed.
        partner: cyclotomic presentation of the matching value, if there's one.
        family: Cassels family the element was built from, if any.
    """

    element: SparseElement
    expected_hash: List[int]
    robinson_item: str
    partner: Optional[SparseElement] = None
    family: Optional[FamilyForm] = None

    @property
    def key(self) -> EquivalenceKey:
        """Return the expected hash as an equivalence key."""
        return EquivalenceKey(coefficients=tuple(self.expected_hash))


class SplittingEntry(BaseModel):
    """Define a row of the prime decomposition cases of castles 4 and 5.

    Args:
        castle: c = p^m.
        level: N.
        prime: p.
        exponent_m: m.
        self_conjugate: whether the elements are self-conjugate up to units.
        t_size: expected #T_K.
        per_axis_range: expected U_K bounds, (0, 0) when T_K is empty.
    """

    castle: PositiveInt
    level: PositiveInt
    prime: PositiveInt
    exponent_m: PositiveInt
    self_conjugate: bool
    t_size: int
    per_axis_range: Tuple[int, int]


class OrderEntry(BaseModel):
    """Define the multiplicative orders of a prime, None where it's not a unit."""

    prime: PositiveInt
    orders: Dict[int, Optional[int]]


class TableFixtures(BaseModel):
    """Gather every published table."""

    schema_version: int = 1
    exceptional: List[ExceptionalEntry]
    weight_bounds: List[WeightBoundEntry]
    matching: List[MatchingEntry]
    splitting: List[SplittingEntry]
    orders: List[OrderEntry]
    presets: Dict[str, ExhaustJob]

    def preset(self, name: str) -> ExhaustJob:
        """Return the named exhaust preset.

        Raises:
            KeyError: if there is no preset with that name.
        """
        try:
            job = self.presets[name]
        except KeyError as error:
            raise KeyError(
                f"Unknown preset {name}, choose one of {', '.join(self.presets)}"
            ) from error
        return job.copy(update={"name": name})
