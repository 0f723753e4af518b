"""Test the difference set properties of small residue subsets."""

import random
from typing import List

import pytest

from smallhouse.model.combinatorics import (
    PREDICATES,
    Lemma,
    check_property,
    covers_nonzero_differences,
    difference_profile,
    graph_property_holds,
    hadamard_bound,
    has_singleton_difference,
    is_connected_and_not_bipartite,
    mod_p2_property_holds,
    mod_p2_witness,
    primes_to_enumerate,
    singleton_difference_holds,
    subsets,
    unique_difference_graph,
)


class TestDifferenceProfile:
    """Test the counts of the differences of a subset."""

    def test_counts_are_symmetric(self) -> None:
        """
        Given: a random subset of Z/31
        When: counting its differences
        Then: k and -k are attained the same number of times
        """
        subset = random.sample(range(31), 6)

        result = difference_profile(subset, 31)

        assert result.subset == sorted(subset)
        assert result.counts[0] == 6
        assert sum(result.counts.values()) == 36
        assert all(result.counts[k] == result.counts[-k % 31] for k in range(31))

    def test_perfect_difference_set(self) -> None:
        """Test {0, 1, 3} attains every nonzero residue of Z/7 once."""
        result = difference_profile([0, 1, 3], 7)

        assert [result.counts[k] for k in range(1, 7)] == [1] * 6
        assert covers_nonzero_differences([0, 1, 3], 7)
        assert has_singleton_difference([0, 1, 3], 7)


class TestGraph:
    """Test the graph of the pairs with a unique difference."""

    def test_triangle(self) -> None:
        """Test {0, 1, 3} in Z/7 gives a triangle."""
        adjacency = unique_difference_graph([0, 1, 3], 7)

        result = is_connected_and_not_bipartite(adjacency)

        assert adjacency == {0: [1, 3], 1: [0, 3], 3: [0, 1]}
        assert result

    def test_bipartite_graph(self) -> None:
        """Test an even cycle is bipartite."""
        cycle = {0: [1, 3], 1: [0, 2], 2: [1, 3], 3: [2, 0]}

        result = is_connected_and_not_bipartite(cycle)

        assert not result

    def test_disconnected_graph(self) -> None:
        """Test a triangle plus an isolated vertex is not connected."""
        graph = {0: [1, 2], 1: [0, 2], 2: [0, 1], 5: []}

        result = is_connected_and_not_bipartite(graph)

        assert not result


def test_mod_p2_witness() -> None:
    """
    Given: {0, 1, 5} in Z/9, with distinct residues modulo 3
    When: looking for the lifts of 1 (mod 3)
    Then: 7 is never a difference and 1 is attained once
    """
    result = mod_p2_witness([0, 1, 5], 3)

    assert result == (7, 1)


class TestCheckProperty:
    """Test the exhaustive checks."""

    @pytest.mark.parametrize(
        ("prime", "size", "holds", "witness"),
        [
            pytest.param(5, 3, True, None, id="p=5, X=3"),
            pytest.param(11, 4, True, None, id="p=11, X=4"),
            pytest.param(3, 3, False, [0, 1, 2], id="whole Z/3"),
            pytest.param(7, 4, False, [0, 1, 2, 4], id="complement of a Singer set"),
        ],
    )
    def test_singleton(
        self, prime: int, size: int, holds: bool, witness: List[int]
    ) -> None:
        """Test the singleton difference property for small primes."""
        result = singleton_difference_holds(prime, size)

        assert result.holds == holds
        assert result.witness == witness
        assert result.checked > 0

    @pytest.mark.parametrize(("prime", "size"), [(3, 3), (5, 4)])
    def test_mod_p2(self, prime: int, size: int) -> None:
        """Test the lifted differences property holds."""
        result = mod_p2_property_holds(prime, size)

        assert result.holds
        assert result.lemma == Lemma.MODP2

    @pytest.mark.parametrize(("prime", "size"), [(7, 3), (13, 4), (11, 4)])
    def test_graph(self, prime: int, size: int) -> None:
        """Test the unique difference graphs are connected and not bipartite."""
        result = graph_property_holds(prime, size)

        assert result.holds

    def test_unnormalized_enumeration(self) -> None:
        """Test every subset is checked when the affine symmetry isn't used."""
        result = singleton_difference_holds(5, 3, normalized=False)

        assert result.holds
        assert result.checked == 10

    def test_subsets_larger_than_the_group(self) -> None:
        """Test there's nothing to check when X exceeds the modulus."""
        result = check_property(Lemma.SINGLETON, 3, 4)

        assert result.holds
        assert result.checked == 0

    def test_mod_p2_subsets_have_distinct_residues(self) -> None:
        """Test the Z/p^2 enumeration skips subsets with repeated residues mod p."""
        result = list(subsets(Lemma.MODP2, 3, 3))

        assert result == [(0, 1, 2), (0, 1, 5), (0, 1, 8)]

    @pytest.mark.parametrize("lemma", [Lemma.SINGLETON, Lemma.GRAPH])
    def test_predicates_are_affine_invariant(self, lemma: Lemma) -> None:
        """
        Given: random subsets of Z/13 and random affine maps x -> a x + b
        When: evaluating the property on the subset and on its image
        Then: the outcome is the same
        """
        predicate = PREDICATES[lemma]
        for _ in range(20):
            subset = tuple(random.sample(range(13), 4))
            scale, shift = random.randint(1, 12), random.randint(0, 12)
            image = tuple((scale * value + shift) % 13 for value in subset)

            result = predicate(image, 13)

            assert result == predicate(subset, 13)


class TestHadamardBound:
    """Test the limits of the enumeration."""

    def test_hadamard_bound(self) -> None:
        """Test 6^((X - 1) / 2) for some sizes."""
        assert hadamard_bound(1) == 1.0
        assert hadamard_bound(4) == pytest.approx(6**1.5)

    def test_hadamard_bound_needs_a_positive_size(self) -> None:
        """Test the size must be positive."""
        with pytest.raises(ValueError):
            hadamard_bound(0)

    @pytest.mark.parametrize(("size", "result"), [(3, [5]), (4, [11, 13])])
    def test_primes_to_enumerate(self, size: int, result: List[int]) -> None:
        """Test the primes between p0 and the bound."""
        result_ = primes_to_enumerate(size)

        assert result_ == result
