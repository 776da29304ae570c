"""Permutations, pairings, and the flip-normalization algorithm."""

import pytest

from wilsonnet import (
    Pairing,
    Permutation,
    cycles,
    enumerate_pairings,
    normalize_pairing,
    pairing_from_permutation,
    reversed_pair_count,
)
from wilsonnet.diagrams import all_permutations


def test_permutation_validation():
    with pytest.raises(ValueError):
        Permutation([1, 1, 2])
    with pytest.raises(ValueError):
        Permutation([0, 1])


def test_composition_applies_right_factor_first():
    s = Permutation([2, 1, 3])
    t = Permutation([2, 3, 1])
    st = s * t
    for x in (1, 2, 3):
        assert st(x) == s(t(x))


def test_inverse_round_trip():
    sigma = Permutation([3, 1, 4, 2])
    assert sigma * sigma.inverse() == Permutation.identity(4)
    assert sigma.inverse() * sigma == Permutation.identity(4)


def test_cycles_identity():
    assert cycles(Permutation.identity(3)) == [(1,), (2,), (3,)]


def test_cycles_three_cycle():
    assert cycles(Permutation([2, 3, 1])) == [(1, 2, 3)]


def test_cycles_four_cycle():
    # images: 1->3, 3->4, 4->2, 2->1
    sigma = Permutation([3, 1, 4, 2])
    assert cycles(sigma) == [(1, 3, 4, 2)]


def test_cycles_cover_and_rebuild():
    for sigma in all_permutations(4):
        cycs = cycles(sigma)
        assert sorted(a for c in cycs for a in c) == [1, 2, 3, 4]
        assert Permutation.from_cycles(4, *cycs) == sigma


def test_pairing_validation():
    with pytest.raises(ValueError):
        Pairing([1, 2])  # fixed points
    with pytest.raises(ValueError):
        Pairing([2, 1, 3])  # odd size


def test_pairing_from_permutation_identity():
    tau = pairing_from_permutation(Permutation.identity(2))
    assert tau.pairs() == ((1, 3), (2, 4))


def test_pairing_from_permutation_transposition():
    tau = pairing_from_permutation(Permutation([2, 1]))
    assert tau.pairs() == ((1, 4), (2, 3))


@pytest.mark.parametrize("p,count", [(1, 1), (2, 3), (3, 15), (4, 105)])
def test_enumerate_pairings_counts(p, count):
    seen = list(enumerate_pairings(p))
    assert len(seen) == count
    assert len(set(seen)) == count


def test_enumerate_pairings_bound():
    with pytest.raises(ValueError):
        next(enumerate_pairings(9))


def test_normalize_already_normalized():
    tau = Pairing.from_pairs([(1, 4), (2, 5), (3, 6)])
    norm = normalize_pairing(tau)
    assert norm.flips == frozenset()
    assert norm.sigma == Permutation.identity(3)


def test_normalize_single_pair():
    norm = normalize_pairing(Pairing.from_pairs([(1, 2)]))
    assert norm.flips == frozenset()
    assert norm.sigma == Permutation.identity(1)


def test_normalize_box_diagram():
    # the 4-column diagram pairing {1,3},{2,8},{4,7},{5,6}
    tau = Pairing.from_pairs([(1, 3), (2, 8), (4, 7), (5, 6)])
    norm = normalize_pairing(tau)
    assert norm.flips == frozenset({2, 3, 4})
    assert cycles(norm.sigma) == [(1, 3, 4, 2)]
    assert reversed_pair_count(tau, norm.flips) == 3


@pytest.mark.parametrize("p", [1, 2, 3, 4])
def test_round_trip_permutation_pairings(p):
    for sigma in all_permutations(p):
        norm = normalize_pairing(pairing_from_permutation(sigma))
        assert norm.flips == frozenset()
        assert norm.sigma == sigma


@pytest.mark.parametrize("p", [1, 2, 3, 4])
def test_normalize_defining_invariant_exhaustive(p):
    """Conjugating by the computed flips must yield the pairing i <-> sigma(i)+p."""
    for tau in enumerate_pairings(p):
        norm = normalize_pairing(tau)
        rewired = tau.conjugate_by_flips(norm.flips)
        assert rewired == pairing_from_permutation(norm.sigma)


def test_conjugate_by_flips_is_involutive():
    tau = Pairing.from_pairs([(1, 3), (2, 8), (4, 7), (5, 6)])
    flips = frozenset({2, 4})
    assert tau.conjugate_by_flips(flips).conjugate_by_flips(flips) == tau


def test_normalize_deterministic():
    tau = Pairing.from_pairs([(1, 3), (2, 8), (4, 7), (5, 6)])
    a = normalize_pairing(tau)
    b = normalize_pairing(tau)
    assert a.flips == b.flips and a.sigma == b.sigma
