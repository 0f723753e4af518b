"""Exact arithmetic in the rings of integers Z[zeta_N].

Elements are stored in the power basis {zeta_N^i : 0 <= i < phi(N)} after reduction
modulo the N-th cyclotomic polynomial, with arbitrary precision integer coefficients.
Every level gets a table with the reduced form of each power zeta_N^j, 0 <= j < N,
and the trace of each of those powers, so that products, Galois maps and traces are
plain linear combinations of table rows.
"""

import logging
import math
import operator
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, PositiveInt, root_validator  # noqa: E0611
from sympy import Symbol, cyclotomic_poly

from ..exceptions import InvalidLevelError, NotCoprimeError
from .arithmetic import is_prime, lcm, phi, root_trace, valuation

log = logging.getLogger(__name__)

Coefficients = Tuple[int, ...]
SparseTerms = List[Tuple[int, int]]
Operand = Union["CyclotomicInt", int]

_SPARSE_TERM = re.compile(r"^\s*(-?\d+)\s*:\s*([+-]?\d+)\s*$")


@dataclass(frozen=True)
class LevelTables:
    """Precomputed data of Q(zeta_N) shared by all the elements of a level.

    Args:
        level: N.
        degree: phi(N), the length of the coefficient vectors.
        powers: reduced coefficients of zeta_N^j for 0 <= j < N.
        traces: trace of zeta_N^j for 0 <= j < N.
        units: residues k in [0, N) coprime to N.
    """

    level: int
    degree: int
    powers: Tuple[Coefficients, ...]
    traces: Tuple[int, ...]
    units: Tuple[int, ...]

    @property
    def root_order(self) -> int:
        """Return the order of the group of roots of unity of Q(zeta_N)."""
        return lcm(2, self.level)


@lru_cache(maxsize=32)
def level_tables(level: int) -> LevelTables:
    """Build, once per level, the tables used by the arithmetic of Z[zeta_level]."""
    if level < 1:
        raise InvalidLevelError(f"The level must be a positive integer, got {level}")
    degree = phi(level)
    modulus = [
        int(coefficient)
        for coefficient in reversed(
            cyclotomic_poly(level, Symbol("x"), polys=True).all_coeffs()
        )
    ]

    powers: List[Coefficients] = [tuple(1 if i == 0 else 0 for i in range(degree))]
    for _ in range(1, level):
        previous = powers[-1]
        overflow = previous[-1]
        shifted = [0, *previous[:-1]]
        if overflow:
            for index in range(degree):
                shifted[index] -= overflow * modulus[index]
        powers.append(tuple(shifted))

    log.debug(f"Built the arithmetic tables of level {level}")
    return LevelTables(
        level=level,
        degree=degree,
        powers=tuple(powers),
        traces=tuple(root_trace(exponent, level) for exponent in range(level)),
        units=tuple(k for k in range(level) if math.gcd(k, level) == 1),
    )


def _combine(tables: LevelTables, terms: Iterable[Tuple[int, int]]) -> Coefficients:
    """Return the reduced coefficients of sum(c * zeta^e) for the (e, c) terms."""
    accumulator = [0] * tables.degree
    for exponent, coefficient in terms:
        if not coefficient:
            continue
        row = tables.powers[exponent % tables.level]
        for index, value in enumerate(row):
            if value:
                accumulator[index] += coefficient * value
    return tuple(accumulator)


class CyclotomicInt(BaseModel):
    """Define an element of Z[zeta_N].

    Equality unifies levels, so 1 + zeta_3 equals its embedding at level 15. The
    hash is built from the normalized trace, which doesn't depend on the level.

    Args:
        level: N, the level the element is presented at.
        coeffs: power basis coefficients, exactly phi(N) of them.
    """

    level: PositiveInt
    coeffs: Tuple[int, ...]

    class Config:
        """Configure the pydantic model."""

        frozen = True

    @root_validator(skip_on_failure=True)
    @classmethod
    def check_coefficients_length(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        """Make sure there are exactly phi(level) coefficients."""
        expected = phi(values["level"])
        if len(values["coeffs"]) != expected:
            raise ValueError(
                f"A level {values['level']} element needs {expected} coefficients, "
                f"got {len(values['coeffs'])}"
            )
        return values

    @classmethod
    def zero(cls, level: int = 1) -> "CyclotomicInt":
        """Return the zero element of the level."""
        return _build(level, (0,) * phi(level))

    @classmethod
    def one(cls, level: int = 1) -> "CyclotomicInt":
        """Return the unit element of the level."""
        return from_sparse(level, [(0, 1)])

    @classmethod
    def root(cls, level: int, exponent: int = 1) -> "CyclotomicInt":
        """Return zeta_level**exponent."""
        return from_sparse(level, [(exponent, 1)])

    @property
    def is_zero(self) -> bool:
        """Check if the element is zero."""
        return not any(self.coeffs)

    @property
    def tables(self) -> LevelTables:
        """Return the arithmetic tables of the element level."""
        return level_tables(self.level)

    def sparse(self) -> SparseTerms:
        """Return the nonzero (exponent, coefficient) pairs of the canonical form."""
        return [
            (exponent, coefficient)
            for exponent, coefficient in enumerate(self.coeffs)
            if coefficient
        ]

    def to_level(self, level: int) -> "CyclotomicInt":
        """Present the element at a multiple of its level.

        Raises:
            InvalidLevelError: if level is not a multiple of the element level.
        """
        if level == self.level:
            return self
        if level < 1 or level % self.level:
            raise InvalidLevelError(
                f"Can't embed a level {self.level} element at level {level}"
            )
        scale = level // self.level
        return _build(
            level,
            _combine(
                level_tables(level),
                (
                    (exponent * scale, coefficient)
                    for exponent, coefficient in self.sparse()
                ),
            ),
        )

    def __add__(self, other: Operand) -> "CyclotomicInt":
        """Add two elements."""
        left, right = _unify(self, _coerce(other))
        return _build(left.level, tuple(map(operator.add, left.coeffs, right.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "CyclotomicInt":
        """Negate the element."""
        return _build(self.level, tuple(-value for value in self.coeffs))

    def __sub__(self, other: Operand) -> "CyclotomicInt":
        """Subtract two elements."""
        return self + (-_coerce(other))

    def __rsub__(self, other: Operand) -> "CyclotomicInt":
        """Subtract the element from an integer."""
        return _coerce(other) + (-self)

    def __mul__(self, other: Operand) -> "CyclotomicInt":
        """Multiply two elements."""
        return multiply(self, _coerce(other))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "CyclotomicInt":
        """Raise the element to a nonnegative integer power."""
        if exponent < 0:
            raise ValueError("Only nonnegative powers stay in the ring")
        result = CyclotomicInt.one(self.level)
        base = self
        while exponent:
            if exponent & 1:
                result = multiply(result, base)
            base = multiply(base, base)
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        """Compare two elements after unifying their levels."""
        if isinstance(other, int):
            other = CyclotomicInt.one() * other
        if not isinstance(other, CyclotomicInt):
            return NotImplemented
        left, right = _unify(self, other)
        return left.coeffs == right.coeffs

    def __hash__(self) -> int:
        """Hash the level independent normalized trace."""
        return hash(Fraction(trace(self), phi(self.level)))

    def __str__(self) -> str:
        """Represent the element as a polynomial in z = zeta_N."""
        terms = []
        for exponent, coefficient in self.sparse():
            sign = "-" if coefficient < 0 else "+"
            magnitude = abs(coefficient)
            if exponent == 0:
                body = str(magnitude)
            else:
                power = "z" if exponent == 1 else f"z^{exponent}"
                body = power if magnitude == 1 else f"{magnitude}*{power}"
            terms.append(f"{sign} {body}")
        text = " ".join(terms) if terms else "0"
        if text.startswith("+ "):
            text = text[2:]
        elif text.startswith("- "):
            text = f"-{text[2:]}"
        return f"{text} (z = zeta_{self.level})"


def _build(level: int, coeffs: Sequence[int]) -> CyclotomicInt:
    """Create an element from already reduced coefficients skipping validation."""
    return CyclotomicInt.construct(level=level, coeffs=tuple(coeffs))


def _coerce(value: Operand) -> CyclotomicInt:
    if isinstance(value, CyclotomicInt):
        return value
    if isinstance(value, int):
        return _build(1, (value,))
    raise TypeError(f"Can't operate a cyclotomic integer with {type(value)}")


def _unify(
    left: CyclotomicInt, right: CyclotomicInt
) -> Tuple[CyclotomicInt, CyclotomicInt]:
    """Present both elements at the lcm of their levels."""
    if left.level == right.level:
        return left, right
    level = lcm(left.level, right.level)
    return left.to_level(level), right.to_level(level)


def from_sparse(level: int, terms: Iterable[Tuple[int, int]]) -> CyclotomicInt:
    """Build sum(c * zeta_level**e) for the (e, c) terms in canonical form.

    Raises:
        InvalidLevelError: if the level is not a positive integer.
    """
    if level < 1:
        raise InvalidLevelError(f"The level must be a positive integer, got {level}")
    return _build(level, _combine(level_tables(level), terms))


def parse_sparse(text: str) -> SparseTerms:
    """Parse the `e1:c1,e2:c2,...` element notation.

    An empty text is the zero element.

    Raises:
        ValueError: if some term is not an exponent:coefficient pair.
    """
    terms: SparseTerms = []
    for chunk in filter(None, (part.strip() for part in text.split(","))):
        match = _SPARSE_TERM.match(chunk)
        if match is None:
            raise ValueError(
                f"Can't parse the term '{chunk}', use exponent:coefficient"
            )
        terms.append((int(match.group(1)), int(match.group(2))))
    return terms


def multiply(left: CyclotomicInt, right: CyclotomicInt) -> CyclotomicInt:
    """Return the exact product of two elements."""
    left, right = _unify(left, right)
    tables = left.tables
    degree = tables.degree
    product = [0] * (2 * degree - 1)
    right_terms = right.sparse()
    for i, first in left.sparse():
        for j, second in right_terms:
            product[i + j] += first * second
    reduced = list(product[:degree])
    high = _combine(tables, ((e, c) for e, c in enumerate(product) if e >= degree))
    return _build(left.level, tuple(map(operator.add, reduced, high)))


def galois_apply(element: CyclotomicInt, k: int) -> CyclotomicInt:
    """Apply the automorphism sigma_k: zeta_N -> zeta_N**k.

    Raises:
        NotCoprimeError: if k is not a unit modulo the level.
    """
    level = element.level
    if math.gcd(k, level) != 1:
        raise NotCoprimeError(f"sigma_{k} is not an automorphism of Q(zeta_{level})")
    return _build(
        level,
        _combine(
            element.tables,
            ((exponent * k, coefficient) for exponent, coefficient in element.sparse()),
        ),
    )


def conjugate(element: CyclotomicInt) -> CyclotomicInt:
    """Return the complex conjugate of the element."""
    return galois_apply(element, -1)


def trace(element: CyclotomicInt) -> int:
    """Return the trace from Q(zeta_N) to Q at the presentation level."""
    traces = element.tables.traces
    return sum(
        coefficient * traces[exponent] for exponent, coefficient in element.sparse()
    )


def rotate(element: CyclotomicInt, exponent: int) -> CyclotomicInt:
    """Multiply the element by zeta_N**exponent."""
    return _build(
        element.level,
        _combine(
            element.tables,
            (
                (index + exponent, coefficient)
                for index, coefficient in element.sparse()
            ),
        ),
    )


def root_power(level: int, exponent: int) -> Tuple[int, int]:
    """Express zeta_M**exponent, M = lcm(2, level), as sign * zeta_level**power.

    For odd levels zeta_2N = -zeta_N**((N + 1) / 2).

    Returns:
        The (sign, power) pair.
    """
    if level % 2 == 0:
        return 1, exponent % level
    sign = -1 if exponent % 2 else 1
    return sign, (exponent * (level + 1) // 2) % level


@lru_cache(maxsize=256)
def root_vectors(level: int) -> Tuple[Coefficients, ...]:
    """Return the coefficients of zeta_M**j for j in [0, M), M = lcm(2, level)."""
    tables = level_tables(level)
    vectors = []
    for exponent in range(tables.root_order):
        sign, power = root_power(level, exponent)
        vectors.append(tuple(sign * value for value in tables.powers[power]))
    return tuple(vectors)


class RootOfUnity(BaseModel):
    """Define the root of unity zeta_order**exponent.

    The pair is gcd reduced, so every root has a single representation and the
    trivial root is (1, 0).
    """

    order: PositiveInt
    exponent: int

    class Config:
        """Configure the pydantic model."""

        frozen = True

    @root_validator(skip_on_failure=True)
    @classmethod
    def reduce_fraction(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        """Reduce exponent / order to lowest terms."""
        order = values["order"]
        exponent = values["exponent"] % order
        divisor = math.gcd(exponent, order)
        if exponent == 0:
            values["order"], values["exponent"] = 1, 0
        else:
            values["order"], values["exponent"] = order // divisor, exponent // divisor
        return values

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        """Multiply two roots of unity."""
        order = lcm(self.order, other.order)
        return RootOfUnity(
            order=order,
            exponent=self.exponent * (order // self.order)
            + other.exponent * (order // other.order),
        )

    def inverse(self) -> "RootOfUnity":
        """Return the inverse root."""
        return RootOfUnity(order=self.order, exponent=-self.exponent)

    def power(self, exponent: int) -> "RootOfUnity":
        """Return the root raised to an integer power."""
        return RootOfUnity(order=self.order, exponent=self.exponent * exponent)

    def to_element(self, level: Optional[int] = None) -> CyclotomicInt:
        """Present the root as an element of Z[zeta_level].

        By default the level is the order of the root.

        Raises:
            InvalidLevelError: if the root doesn't live in Q(zeta_level).
        """
        if level is None:
            level = self.order
        root_order = lcm(2, level)
        if root_order % self.order:
            raise InvalidLevelError(f"{self} doesn't belong to Q(zeta_{level})")
        vector = root_vectors(level)[self.exponent * (root_order // self.order)]
        return _build(level, vector)

    def __str__(self) -> str:
        """Represent the root."""
        return f"zeta_{self.order}^{self.exponent}"


def roots_of_unity(level: int) -> List[RootOfUnity]:
    """Enumerate the lcm(2, level) roots of unity of Q(zeta_level) by exponent."""
    order = lcm(2, level)
    return [RootOfUnity(order=order, exponent=exponent) for exponent in range(order)]


class PDecomposition(BaseModel):
    """Define a presentation alpha = sum_i eta_i zeta_{p^n}^i, eta_i in Q(zeta_{N/p}).

    Args:
        prime: p.
        exponent_n: the p-adic valuation n of the level N.
        parts: the eta_0, ..., eta_{p-1}, presented at level N / p.
        normalized: whether the most frequent part value was shifted to zero, which
            is only meaningful when n = 1.
    """

    prime: PositiveInt
    exponent_n: PositiveInt
    parts: List[CyclotomicInt]
    normalized: bool = False

    @property
    def support(self) -> List[int]:
        """Return the indices S of the nonzero parts."""
        return [index for index, part in enumerate(self.parts) if not part.is_zero]

    @property
    def nonzero_count(self) -> int:
        """Return X, the number of nonzero parts."""
        return len(self.support)

    @property
    def level(self) -> int:
        """Return the level N of the decomposed element."""
        return self.parts[0].level * self.prime

    def reconstruct(self) -> CyclotomicInt:
        """Return sum_i eta_i zeta_{p^n}^i at level N."""
        level = self.level
        step = level // self.prime**self.exponent_n
        result = CyclotomicInt.zero(level)
        for index, part in enumerate(self.parts):
            if not part.is_zero:
                result = result + rotate(part.to_level(level), index * step)
        return result


def raw_parts(element: CyclotomicInt, prime: int) -> List[CyclotomicInt]:
    """Split the canonical form of the element along the powers of zeta_{p^n}.

    Writing N = p^n m with p not dividing m, each exponent e is decomposed as
    e = m i + p q with 0 <= i < p, so zeta_N^e = zeta_{p^n}^i zeta_{N/p}^q.
    """
    level = element.level
    power = prime ** valuation(level, prime)
    cofactor = level // power
    inverse = pow(cofactor, -1, prime)
    lower = level // prime
    terms: List[SparseTerms] = [[] for _ in range(prime)]
    for exponent, coefficient in element.sparse():
        index = (exponent * inverse) % prime
        shifted = ((exponent - cofactor * index) // prime) % lower
        terms[index].append((shifted, coefficient))
    return [from_sparse(lower, part_terms) for part_terms in terms]


def p_decompose(element: CyclotomicInt, prime: int) -> PDecomposition:
    """Return the p-decomposition of the element at its presentation level.

    When p divides N exactly once the decomposition is only unique up to adding a
    common value to every part, and the most frequent part value is shifted to zero.
    Ties are broken by subtracting the value with the lexicographically smallest
    coefficients.

    Raises:
        InvalidLevelError: if prime is not a prime dividing the level.
    """
    if not is_prime(prime) or element.level % prime:
        raise InvalidLevelError(f"{prime} is not a prime dividing {element.level}")
    exponent_n = valuation(element.level, prime)
    parts = raw_parts(element, prime)
    if exponent_n > 1:
        return PDecomposition(prime=prime, exponent_n=exponent_n, parts=parts)

    multiplicity = Counter(part.coeffs for part in parts)
    highest = max(multiplicity.values())
    shift = min(coeffs for coeffs, count in multiplicity.items() if count == highest)
    lower = element.level // prime
    offset = _build(lower, shift)
    return PDecomposition(
        prime=prime,
        exponent_n=1,
        parts=[part - offset for part in parts],
        normalized=True,
    )


def descend(element: CyclotomicInt, prime: int) -> Optional[CyclotomicInt]:
    """Present the element at level N / p if it belongs to Q(zeta_{N/p}).

    Returns:
        The element at level N / p, or None if it doesn't live in the subfield.
    """
    parts = raw_parts(element, prime)
    if valuation(element.level, prime) > 1:
        if all(part.is_zero for part in parts[1:]):
            return parts[0]
        return None
    if all(part.coeffs == parts[1].coeffs for part in parts[2:]):
        return parts[0] - parts[1]
    return None
