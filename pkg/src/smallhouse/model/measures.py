"""Measure and classify cyclotomic integers.

Implements the Cassels height, the castle (the squared house) with certified and
exact comparisons, the minimal level reduction, the perfect equivalence hash, the
minimal weight search and the test that recognizes the Cassels families.
"""

import logging
import math
import operator
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, PositiveInt  # noqa: E0611
from sympy import jacobi_symbol

from ..exceptions import NotTotallyRealError, SmallhouseError
from .arithmetic import lcm, mobius, phi, prime_factors, valuation
from .cyclotomic import (
    CyclotomicInt,
    RootOfUnity,
    conjugate,
    descend,
    from_sparse,
    galois_apply,
    multiply,
    raw_parts,
    root_power,
    root_vectors,
    rotate,
    trace,
)
from .enclosure import (
    INITIAL_PRECISION,
    MAX_PRECISION,
    Evaluator,
    RealEnclosure,
    embedding_representatives,
    max_embedding,
    real_embedding,
)

log = logging.getLogger(__name__)

DEFAULT_WIDTH = Fraction(1, 2**60)
SEPARATION_BOUND = Fraction(5) + Fraction(1, 25)


class EquivalenceKey(BaseModel):
    """Define the canonical minimal polynomial of an equivalence class.

    Args:
        coefficients: monic integer coefficients, highest degree first.
    """

    coefficients: Tuple[int, ...]

    class Config:
        """Configure the pydantic model."""

        frozen = True

    @property
    def degree(self) -> int:
        """Return the degree of the polynomial."""
        return len(self.coefficients) - 1

    def __str__(self) -> str:
        """Represent the polynomial in the variable x."""
        terms = []
        for position, coefficient in enumerate(self.coefficients):
            power = self.degree - position
            if coefficient == 0:
                continue
            magnitude = abs(coefficient)
            if power == 0:
                body = str(magnitude)
            else:
                variable = "x" if power == 1 else f"x^{power}"
                body = variable if magnitude == 1 else f"{magnitude}{variable}"
            terms.append(("- " if coefficient < 0 else "+ ") + body)
        text = " ".join(terms)
        return text[2:] if text.startswith("+ ") else f"-{text[2:]}"


class FormTag(str, Enum):
    """Name the Cassels families."""

    SUM_OF_TWO = "SumOfTwo"
    ONE_PLUS_ZETA_MINUS_INVERSE = "OnePlusZetaMinusInverse"
    GOLDEN_PAIR = "GoldenPair"


class FamilyForm(BaseModel):
    """Define a member of a Cassels family instantiated at zeta_parameter**exponent."""

    tag: FormTag
    parameter: PositiveInt
    exponent: int = 1

    class Config:
        """Configure the pydantic model."""

        frozen = True


class MinimalWeight(BaseModel):
    """Define the outcome of the minimal weight search.

    Args:
        weight: least number of roots of unity adding up to the element, None if
            the search reached the bound before finding one.
        witness: roots of unity whose sum is the element.
        bound: largest weight that was allowed.
    """

    weight: Optional[int]
    witness: List[RootOfUnity] = []
    bound: Optional[int] = None

    @property
    def exceeded(self) -> bool:
        """Check if the search gave up at the bound."""
        return self.weight is None


# ---------- Heights and castles ----------


def modulus_square(element: CyclotomicInt) -> CyclotomicInt:
    """Return the totally real element a * conj(a)."""
    return multiply(element, conjugate(element))


def cassels_height(element: CyclotomicInt) -> Fraction:
    """Return the mean of |sigma(a)|^2 over the embeddings, Tr(a conj(a)) / phi(N)."""
    return Fraction(trace(modulus_square(element)), phi(element.level))


def castle_enclosure(
    element: CyclotomicInt, width: Fraction = DEFAULT_WIDTH
) -> RealEnclosure:
    """Enclose the castle max_k |sigma_k(a)|^2 in an interval of the given width.

    Raises:
        ValueError: if the width is not positive.
    """
    if width <= 0:
        raise ValueError(f"The enclosure width must be positive, got {width}")
    return RealEnclosure.from_evaluator(max_embedding(modulus_square(element)), width)


def _sign_against(
    evaluator: Evaluator,
    threshold: Fraction,
    is_equal: Optional[Callable[[], bool]] = None,
) -> int:
    """Return the sign of value - threshold for the real value of the evaluator.

    When the enclosure keeps straddling the threshold, is_equal decides exact
    equality once. Without it the value is known to differ from the threshold.
    """
    precision = INITIAL_PRECISION
    equality_checked = is_equal is None
    while precision <= MAX_PRECISION:
        lo, hi = evaluator(precision)
        if lo > threshold:
            return 1
        if hi < threshold:
            return -1
        if not equality_checked:
            if is_equal():  # type: ignore
                return 0
            equality_checked = True
        precision *= 2
    raise SmallhouseError(f"Couldn't separate a value from {threshold}")


def castle_compare(element: CyclotomicInt, threshold: Union[int, Fraction]) -> int:
    """Compare the castle of the element with a rational threshold exactly.

    Returns:
        1 if the castle is bigger than the threshold, 0 if it's equal, -1 otherwise.
    """
    threshold = Fraction(threshold)
    square = modulus_square(element)
    equal = False
    for k in embedding_representatives(square.level):
        is_equal = None
        # Algebraic integers can only equal integer thresholds.
        if threshold.denominator == 1:
            is_equal = _exact_equality(square, k, int(threshold))
        sign = _sign_against(real_embedding(square, k), threshold, is_equal)
        if sign > 0:
            return 1
        equal = equal or sign == 0
    return 0 if equal else -1


def _exact_equality(square: CyclotomicInt, k: int, value: int) -> Callable[[], bool]:
    return lambda: galois_apply(square, k) == value


def castle_equals(element: CyclotomicInt, target: CyclotomicInt) -> bool:
    """Check if the castle of the element is exactly the real number target.

    The target is read through the identity embedding, so 3 + zeta_8 + zeta_8^-1
    stands for 1 + 4 cos^2(pi / 8).

    Raises:
        NotTotallyRealError: if the target is not fixed by complex conjugation.
    """
    if conjugate(target) != target:
        raise NotTotallyRealError(f"The target {target} is not totally real")
    square = modulus_square(element)
    level = lcm(square.level, target.level)
    square, target = square.to_level(level), target.to_level(level)
    differences = [
        galois_apply(square, k) - target for k in embedding_representatives(level)
    ]
    if not any(difference.is_zero for difference in differences):
        return False
    return all(
        _sign_against(real_embedding(difference, 1), Fraction(0)) < 0
        for difference in differences
        if not difference.is_zero
    )


def separation_threshold(level: int) -> Fraction:
    """Return (10 + 2/25)^-phi(level).

    Two elements of Q(zeta_level) with castles at most 5 + 1/25 whose castles are
    closer than this have equal castles.
    """
    return Fraction(25, 252) ** phi(level)


def castles_equal(first: CyclotomicInt, second: CyclotomicInt) -> bool:
    """Check if two cyclotomic integers have the same castle."""
    level = lcm(first.level, second.level)
    threshold = separation_threshold(level)
    width = threshold / 4
    first_castle = castle_enclosure(first, width)
    second_castle = castle_enclosure(second, width)
    if first_castle.lo > second_castle.hi or second_castle.lo > first_castle.hi:
        return False
    # The enclosures may stop short of the width at the precision cap.
    narrow = first_castle.width <= width and second_castle.width <= width
    if narrow and max(first_castle.hi, second_castle.hi) <= SEPARATION_BOUND:
        return True

    log.debug("Can't separate the castles by their enclosures, comparing them exactly")
    second_square = modulus_square(second).to_level(level)
    for k in embedding_representatives(level):
        candidate = galois_apply(second_square, k)
        if castle_equals(second, candidate):
            return castle_equals(first, candidate)
    return False


# ---------- Minimal level ----------


def _descend_once(
    element: CyclotomicInt,
) -> Optional[Tuple[CyclotomicInt, RootOfUnity]]:
    """Find a zeta_{p^n}^-i that moves the element one level down."""
    level = element.level
    for prime in prime_factors(level):
        power = prime ** valuation(level, prime)
        step = level // power
        for index in range(prime):
            lower = descend(rotate(element, -index * step), prime)
            if lower is not None:
                return lower, RootOfUnity(order=power, exponent=-index)
    return None


def reduce_to_minimal_level(
    element: CyclotomicInt,
) -> Tuple[CyclotomicInt, RootOfUnity]:
    """Rewrite the element at its minimal level.

    Returns:
        The element a * zeta presented at the minimal level, and the root zeta.
    """
    witness = RootOfUnity(order=1, exponent=0)
    if element.is_zero:
        return CyclotomicInt.zero(), witness
    current = element
    while True:
        step = _descend_once(current)
        if step is None:
            return current, witness
        current, root = step
        witness = witness * root


def minimal_level(element: CyclotomicInt) -> Tuple[int, RootOfUnity]:
    """Return the minimal level N0 and a root zeta with a * zeta in Q(zeta_N0)."""
    reduced, witness = reduce_to_minimal_level(element)
    return reduced.level, witness


# ---------- Equivalence hash ----------


def times_root(element: CyclotomicInt, exponent: int) -> CyclotomicInt:
    """Return element * zeta_M**exponent with M = lcm(2, N)."""
    sign, power = root_power(element.level, exponent)
    rotated = rotate(element, power)
    return rotated if sign > 0 else -rotated


def _shifted_trace(power: CyclotomicInt, sign: int, shift: int) -> int:
    """Return the trace of power * sign * zeta_N**shift."""
    traces = power.tables.traces
    level = power.level
    return sign * sum(
        coefficient * traces[(exponent + shift) % level]
        for exponent, coefficient in power.sparse()
    )


def _newton(power_sums: List[Fraction]) -> Tuple[int, ...]:
    """Turn the power sums p_1..p_d into the monic polynomial coefficients."""
    elementary = [Fraction(1)]
    for order in range(1, len(power_sums) + 1):
        total = sum(
            (-1) ** (index - 1) * elementary[order - index] * power_sums[index - 1]
            for index in range(1, order + 1)
        )
        elementary.append(total / order)
    coefficients = []
    for order, value in enumerate(elementary):
        signed = value if order % 2 == 0 else -value
        if signed.denominator != 1:
            raise SmallhouseError("The minimal polynomial has non integer coefficients")
        coefficients.append(int(signed))
    return tuple(coefficients)


def equivalence_hash(element: CyclotomicInt) -> EquivalenceKey:
    """Return the perfect hash of the equivalence class of the element.

    The element is rewritten at its minimal level N0, then the minimal polynomials
    of all its multiples by roots of unity of Q(zeta_N0) are compared by degree and
    then lexicographically, and the smallest one is returned.
    """
    reduced, _ = reduce_to_minimal_level(element)
    if reduced.is_zero:
        return EquivalenceKey(coefficients=(1, 0))
    level = reduced.level
    root_order = lcm(2, level)
    degree = phi(level)

    multiples: Dict[Tuple[int, ...], int] = {}
    for exponent in range(root_order):
        multiples.setdefault(times_root(reduced, exponent).coeffs, exponent)
    shifts = {
        k: multiples.get(galois_apply(reduced, k % level).coeffs)
        for k in range(root_order)
        if math.gcd(k, root_order) == 1
    }

    def stabilizer_size(exponent: int) -> int:
        return sum(
            1
            for k, shift in shifts.items()
            if shift is not None and (shift + k * exponent - exponent) % root_order == 0
        )

    sizes = {exponent: stabilizer_size(exponent) for exponent in range(root_order)}
    largest = max(sizes.values())
    candidates = [exponent for exponent, size in sizes.items() if size == largest]
    minimal_degree = degree // largest

    powers = [reduced]
    for _ in range(1, minimal_degree):
        powers.append(multiply(powers[-1], reduced))

    keys = []
    for exponent in candidates:
        power_sums = []
        for order, power in enumerate(powers, start=1):
            sign, shift = root_power(level, exponent * order)
            power_sums.append(
                Fraction(_shifted_trace(power, sign, shift), largest)
            )
        keys.append(_newton(power_sums))
    return EquivalenceKey(coefficients=min(keys))


# ---------- Minimal weight ----------


def _height_lower_bound(element: CyclotomicInt) -> int:
    """Return the least n with n^2 >= M(a), a lower bound of the weight."""
    height = cassels_height(element)
    weight = math.isqrt(height.numerator // height.denominator)
    while weight * weight < height:
        weight += 1
    return weight


def _search_sum(
    target: Tuple[int, ...], vectors: Tuple[Tuple[int, ...], ...], weight: int
) -> Optional[List[int]]:
    """Find a nondecreasing multiset of weight indices whose vectors add to target."""
    if weight == 0:
        return [] if not any(target) else None
    lookup: Dict[Tuple[int, ...], int] = {}
    for index, vector in enumerate(vectors):
        lookup.setdefault(vector, index)

    def extend(
        residual: Tuple[int, ...], start: int, remaining: int
    ) -> Optional[List[int]]:
        if remaining == 1:
            index = lookup.get(residual)
            return [index] if index is not None and index >= start else None
        for index in range(start, len(vectors)):
            found = extend(
                tuple(map(operator.sub, residual, vectors[index])), index, remaining - 1
            )
            if found is not None:
                return [index, *found]
        return None

    return extend(target, 0, weight)


def minimal_weight(
    element: CyclotomicInt,
    max_weight: Optional[int] = None,
    split_prime_powers: bool = True,
) -> MinimalWeight:
    """Find the least number of roots of unity adding up to the element.

    The element is first rewritten at its minimal level. When p^2 divides that
    level the weight is the sum of the weights of the parts of its
    p-decomposition. Otherwise the multisets of roots of unity are enumerated by
    increasing size, starting at the bound given by the Cassels height.
    """
    reduced, reduction = reduce_to_minimal_level(element)
    back = reduction.inverse()
    if reduced.is_zero:
        return MinimalWeight(weight=0, witness=[], bound=max_weight)

    level = reduced.level
    if split_prime_powers:
        for prime in prime_factors(level):
            exponent_n = valuation(level, prime)
            if exponent_n < 2:
                continue
            total = 0
            witness: List[RootOfUnity] = []
            for index, part in enumerate(raw_parts(reduced, prime)):
                budget = None if max_weight is None else max_weight - total
                found = minimal_weight(part, budget, split_prime_powers)
                if found.exceeded:
                    return MinimalWeight(weight=None, witness=[], bound=max_weight)
                total += found.weight  # type: ignore
                shift = RootOfUnity(order=prime**exponent_n, exponent=index)
                witness.extend(root * shift * back for root in found.witness)
            return MinimalWeight(weight=total, witness=witness, bound=max_weight)

    vectors = root_vectors(level)
    root_order = len(vectors)
    weight = _height_lower_bound(reduced)
    while max_weight is None or weight <= max_weight:
        indices = _search_sum(reduced.coeffs, vectors, weight)
        if indices is not None:
            log.debug(f"Found a sum of {weight} roots of unity at level {level}")
            return MinimalWeight(
                weight=weight,
                witness=[
                    RootOfUnity(order=root_order, exponent=index) * back
                    for index in indices
                ],
                bound=max_weight,
            )
        weight += 1
    return MinimalWeight(weight=None, witness=[], bound=max_weight)


# ---------- Cassels families ----------


def n_prime(level: int) -> int:
    """Return the denominator of 1/2 - 2/level in lowest terms."""
    if level < 1:
        raise ValueError(f"N'(N) needs a positive integer, got {level}")
    if level % 2:
        return 2 * level
    if level % 4 == 2:
        return level
    if level % 8 == 4:
        return level // 4
    return level // 2


def golden_pair(root: CyclotomicInt) -> CyclotomicInt:
    """Return (zeta_5 + zeta_5^4) + (zeta_5^2 + zeta_5^3) * root."""
    outer = from_sparse(5, [(1, 1), (4, 1)])
    inner = from_sparse(5, [(2, 1), (3, 1)])
    return outer + inner * root


def cassels_form(
    element: CyclotomicInt, key: Optional[EquivalenceKey] = None
) -> Optional[FormTag]:
    """Return the Cassels family of the element, or None if it belongs to none.

    Args:
        element: cyclotomic integer to classify.
        key: equivalence hash of the element if it's already known.
    """
    if not minimal_weight(element, max_weight=2).exceeded:
        return FormTag.SUM_OF_TWO

    reduced, _ = reduce_to_minimal_level(element)
    level = reduced.level
    root_order = lcm(2, level)
    target = (3 - modulus_square(reduced)).coeffs
    vectors = root_vectors(level)
    exponent = next(
        (
            t
            for t in range(root_order)
            if tuple(map(operator.add, vectors[t], vectors[-t % root_order])) == target
        ),
        None,
    )
    if exponent is None:
        return None
    if key is None:
        key = equivalence_hash(reduced)

    if exponent % 2 == 0:
        root = RootOfUnity(order=root_order, exponent=exponent // 2).to_element(level)
        candidate = 1 + root - conjugate(root)
        if equivalence_hash(candidate) == key:
            return FormTag.ONE_PLUS_ZETA_MINUS_INVERSE
    if level % 5 == 0:
        root = RootOfUnity(order=root_order, exponent=exponent).to_element(level)
        if equivalence_hash(golden_pair(root)) == key:
            return FormTag.GOLDEN_PAIR
    return None


def cassels_form_test(element: CyclotomicInt) -> bool:
    """Check if the element belongs to one of the Cassels families."""
    return cassels_form(element) is not None


def family_element(form: FamilyForm) -> CyclotomicInt:
    """Build the element of the Cassels family at zeta = zeta_parameter**exponent."""
    root = CyclotomicInt.root(form.parameter, form.exponent)
    if form.tag == FormTag.SUM_OF_TWO:
        return 1 + root
    if form.tag == FormTag.ONE_PLUS_ZETA_MINUS_INVERSE:
        return 1 + root - conjugate(root)
    return golden_pair(root)


def _cosine_sum(level: int, constant: int, sign: int = 1) -> CyclotomicInt:
    """Return constant + sign * (zeta_level + zeta_level^-1)."""
    return from_sparse(level, [(0, constant), (1, sign), (-1 % level, sign)])


def family_values(form: FamilyForm) -> Tuple[CyclotomicInt, CyclotomicInt]:
    """Return the exact |a|^2 and castle of the family member with zeta = zeta_N.

    Returns:
        The totally real elements |a|^2 and castle, the latter read through the
        identity embedding.
    """
    level = form.parameter
    if form.tag == FormTag.SUM_OF_TWO:
        value = _cosine_sum(level, 2)
        return value, value
    if form.tag == FormTag.ONE_PLUS_ZETA_MINUS_INVERSE:
        square = from_sparse(level, [(0, 3), (2, -1), (-2 % level, -1)])
        return square, _cosine_sum(n_prime(level), 3)
    return _cosine_sum(level, 3, -1), _cosine_sum(n_prime(2 * level), 3)


def height_family_formula(level: int) -> Fraction:
    """Return 3 + 2 mu(N) / phi(N), the height of a castle 1 + 4 cos^2(pi / N)."""
    return 3 + Fraction(2 * mobius(level), phi(level))


def surd_castle(discriminant: int, sign: int = 1) -> CyclotomicInt:
    """Return (5 + sign * sqrt(d)) / 2 as an element of Z[zeta_d].

    The square root comes from the quadratic Gauss sum, which equals sqrt(d) for a
    squarefree d = 1 (mod 4).

    Raises:
        ValueError: if d is not a squarefree integer congruent to 1 modulo 4.
    """
    if discriminant < 5 or discriminant % 4 != 1 or mobius(discriminant) == 0:
        raise ValueError(f"{discriminant} is not a squarefree d = 1 (mod 4)")
    residues = [
        (exponent, 1)
        for exponent in range(1, discriminant)
        if math.gcd(exponent, discriminant) == 1
        and jacobi_symbol(exponent, discriminant) == 1
    ]
    value = (5 - mobius(discriminant)) // 2 + from_sparse(discriminant, residues)
    return value if sign > 0 else 5 - value
