"""Elementary number theory shared by the cyclotomic models.

The heavy lifting (factorization, totients, multiplicative orders) is delegated to
sympy, this module only caches the results and adapts them to plain integers.
"""

import math
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Iterator, List, Tuple

from sympy import divisors, factorint, isprime, totient
from sympy.ntheory import n_order

from ..exceptions import InvalidLevelError, NotCoprimeError


@lru_cache(maxsize=None)
def phi(number: int) -> int:
    """Return Euler's totient of number."""
    if number < 1:
        raise InvalidLevelError(f"The totient is not defined for {number}")
    return int(totient(number))


@lru_cache(maxsize=None)
def factorization(number: int) -> Tuple[Tuple[int, int], ...]:
    """Return the (prime, exponent) pairs of number sorted by prime."""
    return tuple(sorted((int(p), int(e)) for p, e in factorint(number).items()))


def mobius(number: int) -> int:
    """Return the Möbius function of number."""
    factors = factorization(number)
    if any(exponent > 1 for _, exponent in factors):
        return 0
    return -1 if len(factors) % 2 else 1


def prime_factors(number: int) -> List[int]:
    """Return the distinct primes dividing number in increasing order."""
    return [prime for prime, _ in factorization(number)]


def valuation(number: int, prime: int) -> int:
    """Return the exponent of prime in number."""
    exponent = 0
    while number % prime == 0:
        number //= prime
        exponent += 1
    return exponent


def lcm(*numbers: int) -> int:
    """Return the least common multiple of the numbers."""
    return math.lcm(*numbers)


def proper_divisors(number: int) -> List[int]:
    """Return the divisors of number smaller than number, ascending."""
    return [int(divisor) for divisor in divisors(number)][:-1]


def is_prime(number: int) -> bool:
    """Check if number is a rational prime."""
    return bool(isprime(number))


def root_trace(exponent: int, level: int) -> int:
    """Return the trace from Q(zeta_level) to Q of zeta_level**exponent.

    With g = gcd(exponent, level) the root has order level / g, so its trace is
    mu(level / g) * phi(level) / phi(level / g).
    """
    order = level // math.gcd(exponent, level)
    return mobius(order) * phi(level) // phi(order)


def multiplicative_order(base: int, modulus: int) -> int:
    """Return the least t >= 1 with base**t = 1 (mod modulus).

    Raises:
        NotCoprimeError: if base is not a unit modulo modulus.
    """
    if modulus < 1:
        raise InvalidLevelError(f"The modulus must be positive, got {modulus}")
    if math.gcd(base, modulus) != 1:
        raise NotCoprimeError(f"{base} is not a unit modulo {modulus}")
    if modulus == 1:
        return 1
    return int(n_order(base % modulus, modulus))


class Rational(Fraction):
    """Exact rational number field for the pydantic models.

    Accepts fractions, integers and strings like "5.01" or "41/8". Floats are
    rejected as they can't carry an exact value.
    """

    @classmethod
    def __get_validators__(cls) -> Iterator[Callable[[Any], Fraction]]:
        """Yield the pydantic validators of the type."""
        yield cls.validate

    @classmethod
    def validate(cls, value: Any) -> Fraction:
        """Convert the value to an exact fraction."""
        if isinstance(value, bool) or isinstance(value, float):
            raise TypeError(f"{value!r} is not an exact rational number")
        if isinstance(value, (Fraction, int, str)):
            return Fraction(value)
        raise TypeError(f"Can't read {value!r} as a rational number")
