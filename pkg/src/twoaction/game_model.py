"""Two-action games as payoff tensors, and the product-game construction.

A game with m players and two actions per player stores, for each player, a
table of 2^m utilities in lexicographic order of the pure profiles
(j_1, ..., j_m), player 1 most significant.  Mixed profiles are points of
[0,1]^m: coordinate i is the probability that player i plays action 1.

Games come in two arithmetic modes.  "exact" games carry Fractions and feed
the combinatorial classification, whose sign decisions must be exact; "float"
games feed the numeric solver and perturbation experiments.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .combinatorics import Permutation, block_swap_permutation

EXACT = "exact"
FLOAT = "float"


@dataclass(frozen=True)
class MixedProfile:
    """A point of [0,1]^m with an arithmetic-mode tag."""

    gamma: tuple
    mode: str = EXACT

    def __post_init__(self):
        if self.mode not in (EXACT, FLOAT):
            raise ValueError(f"unknown mode {self.mode!r}")
        for g in self.gamma:
            if not 0 <= g <= 1:
                raise ValueError(f"coordinate {g} outside [0,1]")

    def __len__(self) -> int:
        return len(self.gamma)

    def zero_set(self) -> tuple[int, ...]:
        """Players with coordinate exactly 0 (1-based)."""
        return tuple(i for i, g in enumerate(self.gamma, start=1) if g == 0)

    def one_set(self) -> tuple[int, ...]:
        """Players with coordinate exactly 1 (1-based)."""
        return tuple(i for i, g in enumerate(self.gamma, start=1) if g == 1)

    def boundary_set(self) -> tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.gamma, start=1) if g in (0, 1))


def _coerce_gamma(gamma) -> tuple:
    if isinstance(gamma, MixedProfile):
        return gamma.gamma
    return tuple(gamma)


def profile_index(bits: Sequence[int]) -> int:
    """Lexicographic index of a pure profile, player 1 most significant."""
    idx = 0
    for b in bits:
        idx = (idx << 1) | b
    return idx


def profile_bits(idx: int, m: int) -> tuple[int, ...]:
    return tuple((idx >> (m - k)) & 1 for k in range(1, m + 1))


class TwoActionGame:
    """m players, two actions each, one utility table of 2^m entries per player."""

    def __init__(self, m: int, utilities: Sequence[Sequence], mode: str = EXACT):
        if m < 1:
            raise ValueError("m must be positive")
        if mode not in (EXACT, FLOAT):
            raise ValueError(f"unknown mode {mode!r}")
        utilities = [list(table) for table in utilities]
        if len(utilities) != m or any(len(t) != 2**m for t in utilities):
            raise ValueError(f"need {m} tables of {2 ** m} entries each")
        cast = Fraction if mode == EXACT else float
        self.m = m
        self.mode = mode
        self.utilities = [[cast(u) for u in table] for table in utilities]

    def utility(self, i: int, bits: Sequence[int]):
        """Utility of player i at the pure profile given by its action bits."""
        return self.utilities[i - 1][profile_index(bits)]

    def payoff(self, i: int, gamma) -> "Fraction | float":
        """Expected utility of player i at a mixed profile (multilinear extension)."""
        gamma = _coerce_gamma(gamma)
        if len(gamma) != self.m:
            raise ValueError(f"profile has {len(gamma)} coordinates, need {self.m}")
        table = self.utilities[i - 1]
        total = 0
        for idx, u in enumerate(table):
            weight = 1
            for k in range(1, self.m + 1):
                g = gamma[k - 1]
                weight *= g if (idx >> (self.m - k)) & 1 else 1 - g
                if weight == 0:
                    break
            if weight != 0:
                total += weight * u
        return total

    def lam(self, i: int, gamma_minus_i) -> "Fraction | float":
        """Payoff difference of player i between action 1 and action 0.

        ``gamma_minus_i`` holds the m-1 coordinates of the other players in
        increasing player order.
        """
        gamma_minus_i = _coerce_gamma(gamma_minus_i)
        if len(gamma_minus_i) != self.m - 1:
            raise ValueError(
                f"opponent profile has {len(gamma_minus_i)} coordinates, need {self.m - 1}"
            )
        others = [k for k in range(1, self.m + 1) if k != i]
        table = self.utilities[i - 1]
        total = 0
        for sub in range(2 ** (self.m - 1)):
            weight = 1
            bits = [0] * self.m
            for pos, k in enumerate(others):
                b = (sub >> (self.m - 2 - pos)) & 1
                bits[k - 1] = b
                g = gamma_minus_i[pos]
                weight *= g if b else 1 - g
            if weight == 0:
                continue
            bits[i - 1] = 1
            hi = table[profile_index(bits)]
            bits[i - 1] = 0
            lo = table[profile_index(bits)]
            total += weight * (hi - lo)
        return total

    def lam_at_profile(self, i: int, gamma) -> "Fraction | float":
        """lam with the full m-coordinate profile supplied (coordinate i ignored)."""
        gamma = _coerce_gamma(gamma)
        return self.lam(i, tuple(g for k, g in enumerate(gamma, start=1) if k != i))

    def as_float(self) -> "TwoActionGame":
        if self.mode == FLOAT:
            return self
        return TwoActionGame(self.m, self.utilities, mode=FLOAT)

    def tensor(self, i: int) -> np.ndarray:
        """Utility table of player i as a float array of shape (2,)*m."""
        return np.asarray(self.utilities[i - 1], dtype=float).reshape((2,) * self.m)

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        if self.mode == EXACT:
            tables = [[_fraction_str(u) for u in t] for t in self.utilities]
        else:
            tables = [list(t) for t in self.utilities]
        return {"m": self.m, "mode": self.mode, "utilities": tables}

    @classmethod
    def from_dict(cls, data: Mapping) -> "TwoActionGame":
        mode = data["mode"]
        if mode == EXACT:
            tables = [[Fraction(u) for u in t] for t in data["utilities"]]
        else:
            tables = data["utilities"]
        return cls(data["m"], tables, mode=mode)


def _fraction_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


@dataclass(frozen=True)
class CharacteristicTuple:
    """Sign vector and per-coordinate threshold orderings of a product game."""

    v: tuple[int, ...]
    sigma: tuple[Permutation, ...]

    def __post_init__(self):
        m = len(self.v)
        if len(self.sigma) != m:
            raise ValueError("v and sigma must have the same length")
        if any(b not in (0, 1) for b in self.v):
            raise ValueError("v must be a 0/1 vector")
        for j, s in enumerate(self.sigma, start=1):
            if len(s) != m:
                raise ValueError(f"sigma[{j}] acts on the wrong set")
            if s(j) != j:
                raise ValueError(f"sigma[{j}] must fix {j}, got image {s(j)}")

    @property
    def m(self) -> int:
        return len(self.v)


class CoefficientMatrix:
    """Thresholds a[i, j] in (0,1) for all ordered pairs i != j of players.

    For each j, the values a[i, j] over i != j are pairwise distinct; sorting
    them in descending order recovers the j-th associated permutation.
    """

    def __init__(self, m: int, values: Mapping[tuple[int, int], Fraction]):
        self.m = m
        self.values: dict[tuple[int, int], Fraction] = {}
        for i in range(1, m + 1):
            for j in range(1, m + 1):
                if i == j:
                    continue
                try:
                    a = Fraction(values[(i, j)])
                except KeyError:
                    raise ValueError(f"missing coefficient for pair ({i},{j})") from None
                if not 0 < a < 1:
                    raise ValueError(f"coefficient a[{i},{j}] = {a} outside (0,1)")
                self.values[(i, j)] = a
        for j in range(1, m + 1):
            column = [self.values[(i, j)] for i in range(1, m + 1) if i != j]
            if len(set(column)) != len(column):
                raise ValueError(f"coefficients a[.,{j}] are not pairwise distinct")

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        return self.values[key]

    def column_permutation(self, j: int) -> Permutation:
        """Recover the j-th associated permutation by descending sort of a[.,j]."""
        others = sorted(
            (i for i in range(1, self.m + 1) if i != j),
            key=lambda i: self.values[(i, j)],
            reverse=True,
        )
        positions = [p for p in range(1, self.m + 1) if p != j]
        images = [0] * self.m
        images[j - 1] = j
        for i, p in zip(others, positions):
            images[i - 1] = p
        return Permutation(images)

    def to_dict(self) -> dict:
        return {f"{i},{j}": _fraction_str(a) for (i, j), a in sorted(self.values.items())}

    @classmethod
    def from_dict(cls, m: int, data: Mapping[str, str]) -> "CoefficientMatrix":
        values = {}
        for key, text in data.items():
            i, j = (int(part) for part in key.split(","))
            values[(i, j)] = Fraction(text)
        return cls(m, values)


def default_coefficients(ctuple: CharacteristicTuple) -> CoefficientMatrix:
    """Equally spaced thresholds a[i,j] = (m+1 - sigma^j(i)) / (m+1).

    Any choice realizing the orderings would do; this one keeps every
    denominator at m+1.
    """
    m = ctuple.m
    values = {}
    for j in range(1, m + 1):
        s = ctuple.sigma[j - 1]
        for i in range(1, m + 1):
            if i != j:
                values[(i, j)] = Fraction(m + 1 - s(i), m + 1)
    return CoefficientMatrix(m, values)


class ProductTwoActionGame:
    """A two-action game whose payoff differences factor into linear terms.

    For player i the payoff difference is
    (-1)^v_i * prod over j != i of (gamma_j - a[i,j]).
    """

    def __init__(self, ctuple: CharacteristicTuple, coeffs: CoefficientMatrix):
        if coeffs.m != ctuple.m:
            raise ValueError("coefficient matrix size does not match tuple")
        for j in range(1, ctuple.m + 1):
            recovered = coeffs.column_permutation(j)
            if recovered != ctuple.sigma[j - 1]:
                raise ValueError(
                    f"coefficients a[.,{j}] realize {recovered!r}, "
                    f"not the requested {ctuple.sigma[j - 1]!r}"
                )
        self.ctuple = ctuple
        self.coeffs = coeffs
        self.tensor = self._materialize()

    @property
    def m(self) -> int:
        return self.ctuple.m

    def _materialize(self) -> TwoActionGame:
        # U^i is 0 when player i plays action 0, and the factored payoff
        # difference evaluated at the pure profile when they play action 1.
        m = self.m
        sign = [(-1) ** b for b in self.ctuple.v]
        tables = []
        for i in range(1, m + 1):
            table = []
            for idx in range(2**m):
                bits = profile_bits(idx, m)
                if bits[i - 1] == 0:
                    table.append(Fraction(0))
                    continue
                value = Fraction(sign[i - 1])
                for j in range(1, m + 1):
                    if j != i:
                        value *= bits[j - 1] - self.coeffs[(i, j)]
                table.append(value)
            tables.append(table)
        return TwoActionGame(m, tables, mode=EXACT)

    def lam_factored(self, i: int, gamma) -> Fraction:
        """Exact payoff difference of player i from the factored form."""
        gamma = _coerce_gamma(gamma)
        value = Fraction((-1) ** self.ctuple.v[i - 1])
        for j in range(1, self.m + 1):
            if j != i:
                value *= Fraction(gamma[j - 1]) - self.coeffs[(i, j)]
        return value

    def to_dict(self) -> dict:
        data = self.tensor.to_dict()
        data["product"] = {
            "v": list(self.ctuple.v),
            "sigma": [list(s.images) for s in self.ctuple.sigma],
            "a": self.coeffs.to_dict(),
        }
        return data

    @classmethod
    def from_dict(cls, data: Mapping) -> "ProductTwoActionGame":
        product = data["product"]
        ctuple = CharacteristicTuple(
            v=tuple(product["v"]),
            sigma=tuple(Permutation(images) for images in product["sigma"]),
        )
        coeffs = CoefficientMatrix.from_dict(data["m"], product["a"])
        game = cls(ctuple, coeffs)
        # Sanity: the stored tensor must match the rebuilt one.
        stored = TwoActionGame.from_dict(data)
        if stored.mode == EXACT and stored.utilities != game.tensor.utilities:
            raise ValueError("stored tensor disagrees with the product block")
        return game


def build_product_game(
    ctuple: CharacteristicTuple, coeffs: CoefficientMatrix | None = None
) -> ProductTwoActionGame:
    """Materialize the product game for a characteristic tuple."""
    if coeffs is None:
        coeffs = default_coefficients(ctuple)
    return ProductTwoActionGame(ctuple, coeffs)


def maximal_game(m: int) -> ProductTwoActionGame:
    """The product game achieving the maximal equilibrium count.

    Characteristic tuple: all-zero sign vector, with the block-swap
    permutations as the associated orderings.
    """
    ctuple = CharacteristicTuple(
        v=(0,) * m,
        sigma=tuple(block_swap_permutation(m, i) for i in range(1, m + 1)),
    )
    return build_product_game(ctuple)


def perturb(game: TwoActionGame | ProductTwoActionGame, epsilon: float, seed: int) -> TwoActionGame:
    """Add independent uniform [-epsilon, epsilon] noise to every utility entry.

    Deterministic for a given seed; the result is a float-mode game.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if isinstance(game, ProductTwoActionGame):
        game = game.tensor
    base = game.as_float()
    rng = np.random.default_rng(seed)
    tables = [
        [u + d for u, d in zip(table, rng.uniform(-epsilon, epsilon, size=len(table)))]
        for table in base.utilities
    ]
    return TwoActionGame(base.m, tables, mode=FLOAT)


def save_game(game: TwoActionGame | ProductTwoActionGame, path) -> None:
    with open(path, "w") as fh:
        json.dump(game.to_dict(), fh, indent=1)
        fh.write("\n")


def load_game(path) -> TwoActionGame | ProductTwoActionGame:
    """Load a game file; returns a product game when the product block is present."""
    with open(path) as fh:
        data = json.load(fh)
    if "product" in data and data.get("mode") == EXACT:
        return ProductTwoActionGame.from_dict(data)
    return TwoActionGame.from_dict(data)
