"""Count the primes above p in Q(zeta_N) and the boxes of valuations they span.

Only counts and the structure of the conjugation orbits are computed, the prime
ideals themselves are never built.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, PositiveInt  # noqa: E0611

from ..exceptions import InvalidLevelError
from .arithmetic import (
    factorization,
    is_prime,
    lcm,
    multiplicative_order,
    phi,
    valuation,
)

log = logging.getLogger(__name__)


class SplittingProfile(BaseModel):
    """Define how the rational prime p decomposes in Q(zeta_N).

    Args:
        level: N.
        prime: p.
        ramification_index: e = phi(p^v), v the p-adic valuation of N.
        residue_order: f, the lcm of the orders of p modulo the prime powers of the
            prime to p part N' of N.
        residue_order_direct: the order of p modulo N'.
        num_primes: g = phi(N') / f.
        conjugation_split: if the primes above p pair up under complex conjugation.
        t_size: g / 2 when they pair up, 0 otherwise.
    """

    level: PositiveInt
    prime: PositiveInt
    ramification_index: PositiveInt
    residue_order: PositiveInt
    residue_order_direct: PositiveInt
    num_primes: PositiveInt
    conjugation_split: bool
    t_size: int

    @property
    def prime_to_p_part(self) -> int:
        """Return N', the largest divisor of N coprime to p."""
        return self.level // self.prime ** valuation(self.level, self.prime)


class UkBox(BaseModel):
    """Define the box of valuation vectors a candidate element can occupy.

    Args:
        dims: number of axes, the size of T_K.
        per_axis_range: inclusive integer interval of every axis.
    """

    dims: int
    per_axis_range: Tuple[int, int]

    @property
    def size(self) -> int:
        """Return the number of points of the box."""
        low, high = self.per_axis_range
        return (high - low + 1) ** self.dims

    @property
    def values(self) -> List[int]:
        """Return the values of a single axis, or [0] for the empty product."""
        if self.dims == 0:
            return [0]
        low, high = self.per_axis_range
        return list(range(low, high + 1))


def _generates_minus_one(prime: int, modulus: int) -> bool:
    """Check if -1 belongs to the subgroup of (Z/modulus)^* generated by prime."""
    target = (modulus - 1) % modulus
    value = 1
    for _ in range(multiplicative_order(prime, modulus)):
        value = (value * prime) % modulus
        if value == target:
            return True
    return False


def splitting_profile(level: int, prime: int) -> SplittingProfile:
    """Compute the splitting data of the rational prime in Q(zeta_level).

    Raises:
        InvalidLevelError: if the level is not positive or prime is not a prime.
    """
    if level < 1:
        raise InvalidLevelError(f"The level must be a positive integer, got {level}")
    if not is_prime(prime):
        raise InvalidLevelError(f"{prime} is not a prime")

    power = prime ** valuation(level, prime)
    rest = level // power
    residue_order = lcm(
        1,
        *(
            multiplicative_order(prime, factor**exponent)
            for factor, exponent in factorization(rest)
        ),
    )
    num_primes = phi(rest) // residue_order
    split = rest > 2 and not _generates_minus_one(prime, rest)
    profile = SplittingProfile(
        level=level,
        prime=prime,
        ramification_index=phi(power),
        residue_order=residue_order,
        residue_order_direct=multiplicative_order(prime, rest),
        num_primes=num_primes,
        conjugation_split=split,
        t_size=num_primes // 2 if split else 0,
    )
    log.debug(
        f"{prime} in Q(zeta_{level}): e={profile.ramification_index}, "
        f"f={residue_order}, g={num_primes}, #T={profile.t_size}"
    )
    return profile


def uk_box(profile: SplittingProfile, exponent_m: int, self_conjugate: bool) -> UkBox:
    """Return the box U_K for a castle c = p^m.

    The axes run over [0, e m] when the element is coprime to its conjugate, and over
    [-e m / 2, e m / 2] when it's self-conjugate.

    Raises:
        ValueError: if m < 1, or if e m is odd for a self-conjugate element.
    """
    if exponent_m < 1:
        raise ValueError(f"The castle exponent must be positive, got {exponent_m}")
    span = profile.ramification_index * exponent_m
    if self_conjugate:
        if span % 2:
            raise ValueError(f"A self-conjugate element needs an even e*m, got {span}")
        bounds = (-span // 2, span // 2)
    else:
        bounds = (0, span)
    if profile.t_size == 0:
        bounds = (0, 0)
    return UkBox(dims=profile.t_size, per_axis_range=bounds)


def order_table(
    primes: Sequence[int], moduli: Sequence[int]
) -> Dict[int, Dict[int, Optional[int]]]:
    """Tabulate the multiplicative orders of the primes modulo the moduli.

    Entries where the prime is not a unit modulo the modulus are None.
    """
    table: Dict[int, Dict[int, Optional[int]]] = {}
    for prime in primes:
        table[prime] = {
            modulus: None
            if modulus % prime == 0
            else multiplicative_order(prime, modulus)
            for modulus in moduli
        }
    return table
