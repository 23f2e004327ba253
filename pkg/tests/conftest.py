import random

import pytest

from twoaction.combinatorics import Permutation
from twoaction.game_model import (
    CharacteristicTuple,
    ProductTwoActionGame,
    build_product_game,
)


def _random_characteristic_tuple(m: int, rng: random.Random) -> CharacteristicTuple:
    v = tuple(rng.randint(0, 1) for _ in range(m))
    sigma = []
    for j in range(1, m + 1):
        others = [x for x in range(1, m + 1) if x != j]
        shuffled = others[:]
        rng.shuffle(shuffled)
        images = [0] * m
        images[j - 1] = j
        for pos, x in zip(others, shuffled):
            images[pos - 1] = x
        sigma.append(Permutation(images))
    return CharacteristicTuple(v, tuple(sigma))


@pytest.fixture
def random_characteristic_tuple():
    """Factory: a uniformly random characteristic tuple for a given rng."""
    return _random_characteristic_tuple


@pytest.fixture
def random_product_game():
    def make(m: int, rng: random.Random) -> ProductTwoActionGame:
        return build_product_game(_random_characteristic_tuple(m, rng))

    return make
