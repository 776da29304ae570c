"""Permutations, pair partitions, and flip normalization of pairing diagrams.

Points are 1-based throughout this module ({1..d} for permutations,
{1..2p} for pairings); JSON serialization shifts to 0-based indices.

A pairing diagram on {1..2p} can be drawn with points 1..p on the top edge
of a box and p+i below i.  Flip normalization finds a set of columns i whose
top/bottom points can be switched so that every line of the diagram joins a
top point to a bottom point; the rewired diagram is then the graph of a
permutation.  :func:`normalize_pairing` computes the switched columns (the
"flips") and that permutation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

#: Largest p accepted by :func:`enumerate_pairings`; (2p-1)!! grows fast.
MAX_ENUMERATED_HALF = 8


class Permutation:
    """A bijection of {1..d}, stored as the tuple of images of 1, 2, ..., d."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{images} is not a bijection of 1..{len(images)}")
        object.__setattr__(self, "images", images)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @staticmethod
    def identity(d):
        return Permutation(range(1, d + 1))

    @staticmethod
    def from_cycles(d, *cycle_list):
        """Build a permutation of {1..d} from disjoint cycles, e.g. (1, 3, 2)."""
        images = list(range(1, d + 1))
        seen = set()
        for cyc in cycle_list:
            for a, b in zip(cyc, cyc[1:] + type(cyc)((cyc[0],))):
                if a in seen:
                    raise ValueError("cycles are not disjoint")
                seen.add(a)
                images[a - 1] = b
        return Permutation(images)

    @property
    def size(self):
        return len(self.images)

    def __call__(self, i):
        return self.images[i - 1]

    def __mul__(self, other):
        """Composition: (s * t)(x) == s(t(x))."""
        if self.size != other.size:
            raise ValueError("size mismatch")
        return Permutation(self.images[j - 1] for j in other.images)

    def inverse(self):
        inv = [0] * self.size
        for i, img in enumerate(self.images, start=1):
            inv[img - 1] = i
        return Permutation(inv)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({list(self.images)})"


def cycles(sigma):
    """Disjoint cycles of a permutation, fixed points included as 1-cycles.

    Canonical form: each cycle starts at its minimum and follows the
    permutation (so (1, 3, 4, 2) means 1 -> 3 -> 4 -> 2 -> 1); cycles are
    sorted by their minima.
    """
    seen = set()
    out = []
    for start in range(1, sigma.size + 1):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        x = sigma(start)
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = sigma(x)
        out.append(tuple(cyc))
    return out


def all_permutations(d):
    """All of S_d in lexicographic order of image tuples."""
    for images in itertools.permutations(range(1, d + 1)):
        yield Permutation(images)


class Pairing:
    """A fixed-point-free involution of {1..2p}: a partition into pairs."""

    __slots__ = ("partner",)

    def __init__(self, partner):
        partner = tuple(int(x) for x in partner)
        size = len(partner)
        if size % 2 != 0:
            raise ValueError("a pairing needs an even number of points")
        for i, j in enumerate(partner, start=1):
            if not 1 <= j <= size or j == i or partner[j - 1] != i:
                raise ValueError(f"{partner} is not a fixed-point-free involution")
        object.__setattr__(self, "partner", partner)

    def __setattr__(self, name, value):
        raise AttributeError("Pairing is immutable")

    @staticmethod
    def from_pairs(pairs, size=None):
        pairs = [tuple(pr) for pr in pairs]
        if size is None:
            size = 2 * len(pairs)
        partner = [0] * size
        for k, l in pairs:
            if partner[k - 1] or partner[l - 1]:
                raise ValueError("a point occurs in two pairs")
            partner[k - 1] = l
            partner[l - 1] = k
        return Pairing(partner)

    @property
    def size(self):
        return len(self.partner)

    @property
    def half(self):
        return len(self.partner) // 2

    def __call__(self, i):
        return self.partner[i - 1]

    def pairs(self):
        """The pairs (k, l) with k < l, sorted by k."""
        return tuple((i, j) for i, j in enumerate(self.partner, start=1) if i < j)

    def conjugate_by_flips(self, flips):
        """Relabel points by the transpositions (i, p+i) for every i in ``flips``."""
        p = self.half

        def swap(x):
            if x in flips:
                return x + p
            if x > p and x - p in flips:
                return x - p
            return x

        partner = [0] * self.size
        for k, l in self.pairs():
            a, b = swap(k), swap(l)
            partner[a - 1] = b
            partner[b - 1] = a
        return Pairing(partner)

    def __eq__(self, other):
        return isinstance(other, Pairing) and self.partner == other.partner

    def __hash__(self):
        return hash(self.partner)

    def __repr__(self):
        return f"Pairing.from_pairs({list(self.pairs())})"


@dataclass(frozen=True)
class FlipNormalization:
    """Result of normalizing a pairing: switched columns and the permutation.

    Conjugating the pairing by the transpositions (i, p+i) over ``flips``
    yields the pairing that joins i with sigma(i)+p for every i.
    """

    flips: frozenset
    sigma: Permutation


def pairing_from_permutation(sigma):
    """The pairing of {1..2p} joining i with sigma(i)+p."""
    p = sigma.size
    return Pairing.from_pairs([(i, sigma(i) + p) for i in range(1, p + 1)], size=2 * p)


def normalize_pairing(tau):
    """Compute the flip normalization of a pairing of {1..2p}.

    Orbits of the map x -> theta(tau(x)), with theta the product of all
    column transpositions (i, p+i), are traced starting from the smallest
    point of {1..p} not yet covered.  Projecting each orbit to {1..p}
    (sending both i and p+i to i) yields the cycles of sigma, in traversal
    order; the flips are the columns whose bottom point p+i was traversed.

    Deterministic: the minimum-seed rule makes the output canonical.
    """
    p = tau.half

    def theta(x):
        return x + p if x <= p else x - p

    covered = set()
    traversed = set()
    cycle_list = []
    while len(covered) < p:
        seed = min(i for i in range(1, p + 1) if i not in covered)
        orbit = [seed]
        x = theta(tau(seed))
        while x != seed:
            orbit.append(x)
            x = theta(tau(x))
        projected = tuple(y if y <= p else y - p for y in orbit)
        if len(set(projected)) != len(projected) or covered & set(projected):
            raise ValueError("pairing orbits do not project to disjoint cycles")
        cycle_list.append(projected)
        covered.update(projected)
        traversed.update(orbit)
    images = [0] * p
    for cyc in cycle_list:
        for idx, a in enumerate(cyc):
            images[a - 1] = cyc[(idx + 1) % len(cyc)]
    flips = frozenset(i for i in range(1, p + 1) if i + p in traversed)
    return FlipNormalization(flips=flips, sigma=Permutation(images))


def reversed_pair_count(tau, flips):
    """Pairs of ``tau`` whose endpoint order reverses under the column swaps.

    Relabeling the points by the transpositions (i, p+i) over ``flips`` maps
    each pair (k, l) with k < l to (k', l'); this counts the pairs with
    k' > l'.  Order is invisible to a symmetric form, but each reversed pair
    flips the sign of a skew form's value, so this count drives the sign
    bookkeeping of the symplectic compiler and of the exact rewiring
    identity.
    """
    p = tau.half

    def relabel(x):
        if x in flips:
            return x + p
        if x > p and x - p in flips:
            return x - p
        return x

    return sum(1 for k, l in tau.pairs() if relabel(k) > relabel(l))


def enumerate_pairings(p):
    """Yield all (2p-1)!! pairings of {1..2p} exactly once, in a fixed order.

    The smallest unpaired point is joined with every larger unpaired point
    in increasing order, recursively; p is capped at MAX_ENUMERATED_HALF.
    """
    if p > MAX_ENUMERATED_HALF:
        raise ValueError(f"p={p} exceeds the enumeration bound {MAX_ENUMERATED_HALF}")

    def rec(points):
        if not points:
            yield []
            return
        first = points[0]
        rest = points[1:]
        for i, other in enumerate(rest):
            for tail in rec(rest[:i] + rest[i + 1:]):
                yield [(first, other)] + tail

    for pairs in rec(tuple(range(1, 2 * p + 1))):
        yield Pairing.from_pairs(pairs, size=2 * p)
