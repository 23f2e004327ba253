"""Permutation, derangement and counting primitives.

Player indices are 1-based everywhere in this module; a permutation of the
player set {1..m} is stored as a dense image sequence.  All counts are exact
arbitrary-precision integers.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterator, Sequence


class Permutation:
    """A permutation of {1..m} stored as its image sequence.

    ``images[k]`` is the image of ``k + 1``; the call operator uses 1-based
    arguments, so ``p(i) == p.images[i - 1]``.
    """

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(images)
        m = len(images)
        if sorted(images) != list(range(1, m + 1)):
            raise ValueError(f"not a bijection of {{1..{m}}}: {images!r}")
        self.images = images

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(range(1, m + 1))

    def __call__(self, i: int) -> int:
        if not 1 <= i <= len(self.images):
            raise IndexError(f"index {i} outside 1..{len(self.images)}")
        return self.images[i - 1]

    def __len__(self) -> int:
        return len(self.images)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"

    def fixed_points(self) -> tuple[int, ...]:
        return tuple(i for i, img in enumerate(self.images, start=1) if img == i)

    def is_derangement(self) -> bool:
        return not self.fixed_points()

    def is_identity(self) -> bool:
        return all(img == i for i, img in enumerate(self.images, start=1))

    def inverse(self) -> "Permutation":
        images = [0] * len(self.images)
        for i, img in enumerate(self.images, start=1):
            images[img - 1] = i
        return Permutation(images)

    def compose(self, other: "Permutation") -> "Permutation":
        """Return ``self after other``: (self.compose(other))(i) == self(other(i))."""
        if len(other) != len(self):
            raise ValueError("size mismatch")
        return Permutation(self(other(i)) for i in range(1, len(self) + 1))


def subfactorial(n: int) -> int:
    """Number of derangements of an n-element set, via !n = n*!(n-1) + (-1)^n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    value = 1
    for k in range(1, n + 1):
        value = k * value + (-1) ** k
    return value


def subfactorial_pair_recursion(n: int) -> int:
    """Subfactorial via !n = (n-1)(!(n-1) + !(n-2)); cross-check route."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return 1
    prev2, prev1 = 1, 0
    for k in range(2, n + 1):
        prev2, prev1 = prev1, (k - 1) * (prev1 + prev2)
    return prev1


def subfactorial_alternating_sum(n: int) -> int:
    """Subfactorial via the inclusion-exclusion closed form sum (-1)^j n!/j!."""
    if n < 0:
        raise ValueError("n must be non-negative")
    fact_n = math.factorial(n)
    return sum((-1) ** j * fact_n // math.factorial(j) for j in range(n + 1))


def candidate_count(m: int) -> int:
    """Total number of equilibrium candidates of a product game: sum of m!/l!."""
    if m < 1:
        raise ValueError("m must be positive")
    fact_m = math.factorial(m)
    return sum(fact_m // math.factorial(l) for l in range(m + 1))


def candidates_on_face_class(m: int, l: int) -> int:
    """Number of candidates with exactly l boundary coordinates: C(m,l)*2^l*!(m-l)."""
    if not 0 <= l <= m:
        raise ValueError(f"l must be in 0..{m}")
    return math.comb(m, l) * 2**l * subfactorial(m - l)


def candidate_count_by_faces(m: int) -> int:
    """Candidate total summed face class by face class; cross-check route."""
    if m < 1:
        raise ValueError("m must be positive")
    return sum(candidates_on_face_class(m, l) for l in range(m + 1))


def maximal_equilibrium_count(m: int) -> int:
    """Equilibrium count of a maximal product game: (candidate_count(m) + !m) / 2."""
    total = candidate_count(m) + subfactorial(m)
    assert total % 2 == 0, "candidate count plus derangement count must be even"
    return total // 2


def enumerate_permutations(m: int) -> Iterator[Permutation]:
    """All permutations of {1..m} in lexicographic order of image sequences."""
    if m < 0:
        raise ValueError("m must be non-negative")
    for images in itertools.permutations(range(1, m + 1)):
        yield Permutation(images)


def enumerate_derangements(m: int) -> Iterator[Permutation]:
    """All fixed-point-free permutations of {1..m}, lexicographic order."""
    for images in itertools.permutations(range(1, m + 1)):
        if all(img != i for i, img in enumerate(images, start=1)):
            yield Permutation(images)


def chi(a, b) -> int:
    """Order indicator: 1 if a >= b, else 0."""
    return 1 if a >= b else 0


def _send_to_end(m: int, i: int) -> Permutation:
    # fixes 1..i-1, sends i to m, shifts i+1..m down by one
    images = list(range(1, i)) + [m] + list(range(i, m))
    return Permutation(images)


def _block_rotation(m: int, i: int) -> Permutation:
    # fixes m, rotates 1..m-1 so that 1..i-1 land on m-i+1..m-1
    images = [m - i + j for j in range(1, i)] + [j - i + 1 for j in range(i, m)] + [m]
    return Permutation(images)


def block_swap_permutation(m: int, i: int) -> Permutation:
    """The permutation fixing i that swaps the blocks below and above i.

    It is order-preserving on {1..i-1} and on {i+1..m} separately and maps the
    upper block below the lower block: for j1 < j2 both different from i, the
    images are out of order exactly when j1 < i < j2.  These permutations make
    up the characteristic tuple of the maximal product game.
    """
    if not 1 <= i <= m:
        raise ValueError(f"i must be in 1..{m}")
    a = _send_to_end(m, i)
    b = _block_rotation(m, i)
    return a.inverse().compose(b).compose(a)


def block_swap_images_closed_form(m: int, i: int) -> Permutation:
    """Closed-form image sequence of block_swap_permutation; cross-check route."""
    if not 1 <= i <= m:
        raise ValueError(f"i must be in 1..{m}")
    images = []
    for j in range(1, m + 1):
        if j < i:
            images.append(m - i + j + chi(m - i + j, i))
        elif j == i:
            images.append(i)
        else:
            images.append(j - i + chi(j - i, i))
    return Permutation(images)
