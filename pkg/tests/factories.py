"""Define the factories of the program models."""

import random
from fractions import Fraction
from typing import Any, Dict, Tuple

from pydantic_factories import ModelFactory, PostGenerated, Use

from smallhouse.model.arithmetic import phi
from smallhouse.model.cyclotomic import CyclotomicInt
from smallhouse.model.exhaust import ExhaustJob

SMALL_LEVELS = [3, 4, 5, 7, 8, 9, 12, 15, 16, 18, 20, 21, 24, 27, 36, 45]


def _coefficients(name: str, values: Dict[str, Any]) -> Tuple[int, ...]:
    """Draw small coefficients for the generated level."""
    return tuple(random.randint(-2, 2) for _ in range(phi(values["level"])))


class CyclotomicIntFactory(ModelFactory[Any]):
    """Define the factory for the model CyclotomicInt."""

    __model__ = CyclotomicInt

    level = Use(random.choice, SMALL_LEVELS)
    coeffs = PostGenerated(_coefficients)


class ExhaustJobFactory(ModelFactory[Any]):
    """Define the factory for the model ExhaustJob."""

    __model__ = ExhaustJob

    level = Use(random.choice, [5, 7, 9, 12])
    weight = 3
    float_threshold = 5.1
    exact_threshold = Fraction(501, 100)
    name = None
    extended = False
