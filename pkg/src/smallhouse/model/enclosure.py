"""Certified real enclosures built on mpmath interval arithmetic.

Every enclosure is produced by an evaluator that, given a working precision in bits,
returns rational bounds of the value. Asking for a narrower enclosure doubles the
precision until the requested width is reached.
"""

import logging
import math
from contextlib import contextmanager
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Iterator, List, Optional, Tuple

from mpmath import iv
from mpmath.libmp import to_rational
from pydantic import BaseModel, PrivateAttr, root_validator  # noqa: E0611

from .cyclotomic import CyclotomicInt

log = logging.getLogger(__name__)

Bounds = Tuple[Fraction, Fraction]
Evaluator = Callable[[int], Bounds]

INITIAL_PRECISION = 64
MAX_PRECISION = 1 << 16


@contextmanager
def interval_precision(bits: int) -> Iterator[None]:
    """Set the working precision of the mpmath interval context."""
    previous = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = previous


def interval_bounds(value: Any) -> Bounds:
    """Return the exact rational endpoints of an mpmath interval."""
    low, high = value._mpi_  # noqa: W0212
    return Fraction(*to_rational(low)), Fraction(*to_rational(high))


@lru_cache(maxsize=128)
def cosine_table(level: int, bits: int) -> Tuple[Any, ...]:
    """Return interval enclosures of cos(2 pi j / level) for 0 <= j < level."""
    with interval_precision(bits):
        return tuple(iv.cos(iv.pi * (2 * j) / level) for j in range(level))


@lru_cache(maxsize=16)
def sine_table(level: int, bits: int) -> Tuple[Any, ...]:
    """Return interval enclosures of sin(2 pi j / level) for 0 <= j < level."""
    with interval_precision(bits):
        return tuple(iv.sin(iv.pi * (2 * j) / level) for j in range(level))


class RealEnclosure(BaseModel):
    """Define a certified interval [lo, hi] around a real algebraic value.

    Args:
        lo: lower rational bound.
        hi: upper rational bound.
        precision_bits: working precision that produced the bounds.
    """

    lo: Fraction
    hi: Fraction
    precision_bits: int
    _evaluator: Optional[Evaluator] = PrivateAttr(default=None)

    class Config:
        """Configure the pydantic model."""

        arbitrary_types_allowed = True

    @root_validator(skip_on_failure=True)
    @classmethod
    def check_bounds_order(cls, values: Any) -> Any:
        """Make sure lo <= hi."""
        if values["lo"] > values["hi"]:
            raise ValueError(f"Empty enclosure [{values['lo']}, {values['hi']}]")
        return values

    @classmethod
    def from_evaluator(
        cls, evaluator: Evaluator, width: Fraction, precision: int = INITIAL_PRECISION
    ) -> "RealEnclosure":
        """Evaluate at doubling precision until the enclosure is narrow enough."""
        while True:
            lo, hi = evaluator(precision)
            if hi - lo <= width or precision >= MAX_PRECISION:
                break
            precision *= 2
            log.debug(f"Raising the working precision to {precision} bits")
        enclosure = cls(lo=lo, hi=hi, precision_bits=precision)
        enclosure._evaluator = evaluator  # noqa: W0212
        return enclosure

    @property
    def width(self) -> Fraction:
        """Return hi - lo."""
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        """Return an approximation of the enclosed value for display."""
        return float((self.lo + self.hi) / 2)

    def contains(self, value: Fraction) -> bool:
        """Check if the value lies inside the enclosure."""
        return self.lo <= value <= self.hi

    def refine(self, bits: int) -> "RealEnclosure":
        """Return an enclosure of the same value of width at most 2**-bits.

        Raises:
            ValueError: if the enclosure was built without an evaluator.
        """
        if self._evaluator is None:
            raise ValueError("This enclosure can't be refined")
        if self.width <= Fraction(1, 2**bits):
            return self
        return RealEnclosure.from_evaluator(
            self._evaluator, Fraction(1, 2**bits), precision=self.precision_bits * 2
        )


def real_embedding(element: CyclotomicInt, k: int) -> Evaluator:
    """Build the evaluator of the real part of sigma_k(element).

    For a self-conjugate element the value is real and equals
    sum(c_i cos(2 pi i k / N)).
    """
    level = element.level
    terms = element.sparse()

    def evaluator(precision: int) -> Bounds:
        table = cosine_table(level, precision)
        with interval_precision(precision):
            total = iv.mpf(0)
            for exponent, coefficient in terms:
                total += coefficient * table[(exponent * k) % level]
        return interval_bounds(total)

    return evaluator


def embedding_representatives(level: int) -> List[int]:
    """Return one unit k per pair {k, -k} modulo level."""
    return [k for k in range(level) if k <= level - k and math.gcd(k, level) == 1]


def max_embedding(element: CyclotomicInt) -> Evaluator:
    """Build the evaluator of max_k sigma_k(element) for a self-conjugate element."""
    evaluators = [
        real_embedding(element, k) for k in embedding_representatives(element.level)
    ]

    def evaluator(precision: int) -> Bounds:
        bounds = [evaluate(precision) for evaluate in evaluators]
        return max(low for low, _ in bounds), max(high for _, high in bounds)

    return evaluator
