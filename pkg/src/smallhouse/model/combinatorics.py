"""Enumerate subsets of Z/pZ and Z/p^2Z checking their difference set properties.

Three properties are verified by exhaustion:

* singleton: some k has exactly one pair (i, j) in S^2 with i - j = k.
* mod p^2: for subsets of Z/p^2Z with distinct residues modulo p, some
    k1 = k2 != 0 (mod p) has no pair with difference k1 and one pair with
    difference k2.
* graph: when the differences of S cover every nonzero k, the graph on S joining
    the pairs whose difference is unique is connected and not bipartite.

All three are invariant under the affine maps x -> a x + b with a a unit, so by
default only the subsets containing 0 and 1 are enumerated.
"""

import logging
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from itertools import combinations
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from pydantic import BaseModel, PositiveInt  # noqa: E0611
from sympy import primerange

log = logging.getLogger(__name__)

Subset = Tuple[int, ...]
Witness = Optional[List[int]]

# Smallest prime p0 from which the singleton property is known for a size X.
SINGLETON_P0 = {1: 2, 2: 3, 3: 5, 4: 11, 5: 13, 6: 19}


class Lemma(str, Enum):
    """Name the difference set properties."""

    SINGLETON = "singleton"
    MODP2 = "modp2"
    GRAPH = "graph"


class DifferenceProfile(BaseModel):
    """Define the difference counts of a residue subset.

    Args:
        modulus: p or p^2.
        subset: sorted residues.
        counts: k -> #{(i, j) in S^2 : i - j = k} for every residue k.
    """

    modulus: PositiveInt
    subset: List[int]
    counts: Dict[int, int]


class PropertyVerdict(BaseModel):
    """Define the outcome of an exhaustive check.

    Args:
        lemma: checked property.
        prime: p.
        size: X, the size of the subsets.
        holds: whether every enumerated subset satisfies the property.
        witness: first subset that breaks the property, if any.
        checked: number of subsets enumerated.
    """

    lemma: Lemma
    prime: PositiveInt
    size: PositiveInt
    holds: bool
    witness: Witness = None
    checked: int = 0


def difference_counts(subset: Sequence[int], modulus: int) -> List[int]:
    """Return the list of difference counts indexed by k."""
    counts = [0] * modulus
    for first in subset:
        for second in subset:
            counts[(first - second) % modulus] += 1
    return counts


def difference_profile(subset: Sequence[int], modulus: int) -> DifferenceProfile:
    """Build the difference profile of a subset of Z/modulus."""
    residues = sorted({value % modulus for value in subset})
    counts = difference_counts(residues, modulus)
    return DifferenceProfile(
        modulus=modulus, subset=residues, counts=dict(enumerate(counts))
    )


def has_singleton_difference(subset: Sequence[int], prime: int) -> bool:
    """Check if some difference of the subset of Z/pZ is attained exactly once."""
    return 1 in difference_counts(subset, prime)


def mod_p2_witness(subset: Sequence[int], prime: int) -> Optional[Tuple[int, int]]:
    """Find k1 = k2 != 0 (mod p) with no k1 differences and a single k2 one.

    Returns:
        The first (k1, k2) pair found, or None.
    """
    modulus = prime * prime
    counts = difference_counts(subset, modulus)
    for residue in range(1, prime):
        lifts = range(residue, modulus, prime)
        empty = [k for k in lifts if counts[k] == 0]
        single = [k for k in lifts if counts[k] == 1]
        if empty and single:
            return empty[0], single[0]
    return None


def unique_difference_graph(
    subset: Sequence[int], prime: int
) -> Dict[int, List[int]]:
    """Return the adjacency of the graph joining the pairs with a unique difference."""
    residues = sorted({value % prime for value in subset})
    counts = difference_counts(residues, prime)
    adjacency: Dict[int, List[int]] = {vertex: [] for vertex in residues}
    for first, second in combinations(residues, 2):
        if counts[(first - second) % prime] == 1:
            adjacency[first].append(second)
            adjacency[second].append(first)
    return adjacency


def is_connected_and_not_bipartite(adjacency: Dict[int, List[int]]) -> bool:
    """Check the graph with a breadth first two coloring."""
    if not adjacency:
        return False
    start = next(iter(adjacency))
    color = {start: 0}
    queue = deque([start])
    odd_cycle = False
    while queue:
        vertex = queue.popleft()
        for neighbour in adjacency[vertex]:
            if neighbour not in color:
                color[neighbour] = 1 - color[vertex]
                queue.append(neighbour)
            elif color[neighbour] == color[vertex]:
                odd_cycle = True
    return odd_cycle and len(color) == len(adjacency)


def covers_nonzero_differences(subset: Sequence[int], prime: int) -> bool:
    """Check if every nonzero residue is a difference of the subset."""
    return all(difference_counts(subset, prime)[1:])


# ---------- Predicates on a single subset ----------


def _singleton_ok(subset: Subset, prime: int) -> bool:
    return has_singleton_difference(subset, prime)


def _mod_p2_ok(subset: Subset, prime: int) -> bool:
    return mod_p2_witness(subset, prime) is not None


def _graph_ok(subset: Subset, prime: int) -> bool:
    if not covers_nonzero_differences(subset, prime):
        return True
    return is_connected_and_not_bipartite(unique_difference_graph(subset, prime))


PREDICATES: Dict[Lemma, Callable[[Subset, int], bool]] = {
    Lemma.SINGLETON: _singleton_ok,
    Lemma.MODP2: _mod_p2_ok,
    Lemma.GRAPH: _graph_ok,
}


# ---------- Enumeration ----------


def _free_values(lemma: Lemma, prime: int) -> List[int]:
    """Return the residues that can complete a subset besides the fixed ones."""
    if lemma == Lemma.MODP2:
        return list(range(prime * prime))
    return list(range(prime))


def _admissible(lemma: Lemma, subset: Subset, prime: int) -> bool:
    if lemma != Lemma.MODP2:
        return True
    return len({value % prime for value in subset}) == len(subset)


def subsets(
    lemma: Lemma, prime: int, size: int, normalized: bool = True
) -> Iterator[Subset]:
    """Enumerate the subsets the property has to be checked on.

    Normalized enumeration only yields subsets containing 0 and 1.
    """
    values = _free_values(lemma, prime)
    if normalized and size >= 2 and prime > 1:
        rest = [value for value in values if value > 1]
        candidates: Iterator[Subset] = (
            (0, 1, *extra) for extra in combinations(rest, size - 2)
        )
    else:
        candidates = combinations(values, size)
    for subset in candidates:
        if _admissible(lemma, subset, prime):
            yield subset


def _shard(
    lemma: Lemma, prime: int, size: int, first: int
) -> Tuple[int, Witness]:
    """Check the normalized subsets whose smallest free element is first."""
    predicate = PREDICATES[lemma]
    values = [value for value in _free_values(lemma, prime) if value > first]
    checked = 0
    for extra in combinations(values, size - 3):
        subset = (0, 1, first, *extra)
        if not _admissible(lemma, subset, prime):
            continue
        checked += 1
        if not predicate(subset, prime):
            return checked, list(subset)
    return checked, None


def check_property(
    lemma: Lemma,
    prime: int,
    size: int,
    normalized: bool = True,
    jobs: int = 1,
) -> PropertyVerdict:
    """Check the property on every subset of the given size.

    Args:
        lemma: property to check.
        prime: p.
        size: X.
        normalized: only enumerate the subsets containing 0 and 1.
        jobs: worker processes, the work is split by the first free element.

    Returns:
        The verdict with the first counterexample found in enumeration order.
    """
    modulus = prime * prime if lemma == Lemma.MODP2 else prime
    if size > modulus:
        return PropertyVerdict(lemma=lemma, prime=prime, size=size, holds=True)

    if jobs > 1 and normalized and size >= 3:
        firsts = [value for value in _free_values(lemma, prime) if value > 1]
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            results = list(
                executor.map(
                    _shard,
                    [lemma] * len(firsts),
                    [prime] * len(firsts),
                    [size] * len(firsts),
                    firsts,
                )
            )
        checked = sum(count for count, _ in results)
        witness = next((found for _, found in results if found is not None), None)
    else:
        predicate = PREDICATES[lemma]
        checked = 0
        witness = None
        for subset in subsets(lemma, prime, size, normalized):
            checked += 1
            if not predicate(subset, prime):
                witness = list(subset)
                break

    log.debug(f"Checked {checked} subsets for the {lemma.value} property at p={prime}")
    return PropertyVerdict(
        lemma=lemma,
        prime=prime,
        size=size,
        holds=witness is None,
        witness=witness,
        checked=checked,
    )


def singleton_difference_holds(
    prime: int, size: int, normalized: bool = True, jobs: int = 1
) -> PropertyVerdict:
    """Check that every X-subset of Z/pZ has a difference attained exactly once."""
    return check_property(Lemma.SINGLETON, prime, size, normalized, jobs)


def mod_p2_property_holds(
    prime: int, size: int, normalized: bool = True, jobs: int = 1
) -> PropertyVerdict:
    """Check the empty and singleton lifted differences property in Z/p^2Z."""
    return check_property(Lemma.MODP2, prime, size, normalized, jobs)


def graph_property_holds(
    prime: int, size: int, normalized: bool = True, jobs: int = 1
) -> PropertyVerdict:
    """Check that the unique difference graphs are connected and not bipartite."""
    return check_property(Lemma.GRAPH, prime, size, normalized, jobs)


def hadamard_bound(size: int) -> float:
    """Return 6^((X - 1) / 2), above which the singleton property always holds."""
    if size < 1:
        raise ValueError(f"The subset size must be positive, got {size}")
    return float(6 ** ((size - 1) / 2))


def primes_to_enumerate(size: int) -> List[int]:
    """Return the primes p0 <= p <= 6^((X - 1) / 2) left to the enumeration."""
    start = SINGLETON_P0.get(size, 2)
    bound = hadamard_bound(size)
    return [int(prime) for prime in primerange(start, int(bound) + 1)]
