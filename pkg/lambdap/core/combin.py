"""
Subsets of the ordered basis {1..N} as bitmasks (bit i-1 <-> element i).
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, List, Tuple

from lambdap.core.config import MAX_DIMENSION
from lambdap.core.errors import DimensionError
from lambdap.core.ring import ONE, P, LaurentPoly

SubsetMask = int

EMPTY: SubsetMask = 0


# =====================================================
# MASK HELPERS
# =====================================================

def mask_of(elements: Iterable[int]) -> SubsetMask:
    mask = 0
    for element in elements:
        if element < 1 or element > MAX_DIMENSION:
            raise DimensionError(f"basis element {element} outside 1..{MAX_DIMENSION}")
        mask |= 1 << (element - 1)
    return mask


def elements_of(mask: SubsetMask) -> List[int]:
    result = []
    position = 1
    while mask:
        if mask & 1:
            result.append(position)
        mask >>= 1
        position += 1
    return result


def size(mask: SubsetMask) -> int:
    return bin(mask).count("1")


def singletons(mask: SubsetMask) -> List[SubsetMask]:
    return [1 << (element - 1) for element in elements_of(mask)]


def submasks(mask: SubsetMask) -> List[SubsetMask]:
    """All subsets of `mask`, increasing bitmask order."""
    result = []
    sub = 0
    while True:
        result.append(sub)
        if sub == mask:
            break
        sub = (sub - mask) & mask
    return result


def subset_json(mask: SubsetMask) -> List[int]:
    return elements_of(mask)


# =====================================================
# BASIS ORDER
# =====================================================

@dataclass(frozen=True)
class BasisOrder:
    """Ordered basis {1..n} of V."""

    n: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_DIMENSION:
            raise DimensionError(f"dimension must be in 1..{MAX_DIMENSION}, got {self.n}")

    @property
    def full(self) -> SubsetMask:
        return (1 << self.n) - 1

    @property
    def size(self) -> int:
        return 1 << self.n

    def subsets(self) -> List[SubsetMask]:
        return list(range(self.size))

    def subsets_of_degree(self, k: int) -> List[SubsetMask]:
        return k_subsets(self.full, k)

    def singletons(self) -> List[SubsetMask]:
        return [1 << i for i in range(self.n)]

    def flat_order(self) -> List[SubsetMask]:
        """Subsets by degree, then lexicographically by elements (f_0..f_{2^N-1})."""
        return flat_order(self.n)

    def flat_index(self, mask: SubsetMask) -> int:
        return flat_index_table(self.n)[mask]


@lru_cache(maxsize=None)
def flat_order(n: int) -> Tuple[SubsetMask, ...]:
    masks = range(1 << n)
    return tuple(sorted(masks, key=lambda m: (size(m), elements_of(m))))


@lru_cache(maxsize=None)
def flat_index_table(n: int) -> dict:
    return {mask: index for index, mask in enumerate(flat_order(n))}


# =====================================================
# THETA / SUBSETS / ALPHA
# =====================================================

def _below(element: int) -> SubsetMask:
    # elements strictly smaller than `element`
    return (1 << (element - 1)) - 1


def theta(a: SubsetMask, b: SubsetMask) -> int:
    """Number of pairs (x in a, y in b) with x > y."""
    total = 0
    position = 1
    while a:
        if a & 1:
            total += size(b & _below(position))
        a >>= 1
        position += 1
    return total


def k_subsets(mask: SubsetMask, k: int) -> List[SubsetMask]:
    """All k-element subsets of `mask`, increasing bitmask order."""
    if k < 0:
        raise DimensionError(f"k must be non-negative, got {k}")
    bits = singletons(mask)
    if k > len(bits):
        return []
    return sorted(sum(combo) for combo in combinations(bits, k))


def alpha(g: SubsetMask, h: SubsetMask) -> LaurentPoly:
    """prod over a in g of (p^(theta(a,h) - theta(a,g)) - 1)."""
    result = ONE
    for single in singletons(g):
        factor = P ** (theta(single, h) - theta(single, g)) - ONE
        if factor.is_zero():
            return LaurentPoly()
        result = result * factor
    return result


def alpha_nonvanishing(g: SubsetMask, h: SubsetMask) -> bool:
    """
    For disjoint g, h: alpha(g, h) != 0 iff the i-th smallest element of g
    exceeds the i-th smallest element of h, for every i <= |g|.
    """
    g_sorted = elements_of(g)
    h_sorted = elements_of(h)
    if len(h_sorted) < len(g_sorted):
        return False
    return all(x > y for x, y in zip(g_sorted, h_sorted))
