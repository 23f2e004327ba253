import json
import random
from fractions import Fraction

import pytest

from twoaction.combinatorics import Permutation, block_swap_permutation
from twoaction.game_model import (
    EXACT,
    FLOAT,
    CharacteristicTuple,
    CoefficientMatrix,
    MixedProfile,
    ProductTwoActionGame,
    TwoActionGame,
    build_product_game,
    default_coefficients,
    load_game,
    maximal_game,
    perturb,
    profile_bits,
    profile_index,
    save_game,
)

F = Fraction


class TestProfiles:
    def test_index_is_lexicographic_player1_most_significant(self):
        assert profile_index([0, 0, 0]) == 0
        assert profile_index([0, 0, 1]) == 1
        assert profile_index([1, 0, 0]) == 4
        assert profile_bits(5, 3) == (1, 0, 1)

    def test_index_bits_roundtrip(self):
        for idx in range(16):
            assert profile_index(profile_bits(idx, 4)) == idx

    def test_mixed_profile_boundary_sets(self):
        p = MixedProfile((F(0), F(1, 2), F(1)))
        assert p.zero_set() == (1,)
        assert p.one_set() == (3,)
        assert p.boundary_set() == (1, 3)

    def test_mixed_profile_rejects_outside_unit_cube(self):
        with pytest.raises(ValueError):
            MixedProfile((F(3, 2),))


class TestTwoActionGame:
    def _matching_pennies(self):
        # player 1 wants to match, player 2 wants to mismatch
        return TwoActionGame(2, [[1, -1, -1, 1], [-1, 1, 1, -1]])

    def test_utility_lookup(self):
        g = self._matching_pennies()
        assert g.utility(1, [0, 0]) == 1
        assert g.utility(1, [0, 1]) == -1
        assert g.utility(2, [1, 0]) == 1

    def test_payoff_at_vertex_equals_utility(self):
        g = self._matching_pennies()
        for bits in [(0, 0), (0, 1), (1, 0), (1, 1)]:
            for i in (1, 2):
                assert g.payoff(i, [F(b) for b in bits]) == g.utility(i, bits)

    def test_payoff_is_multilinear(self):
        # affine in each coordinate: value at midpoint = mean of endpoints
        rng = random.Random(5)
        g = TwoActionGame(
            3, [[F(rng.randint(-9, 9)) for _ in range(8)] for _ in range(3)]
        )
        base = [F(1, 3), F(2, 5), F(1, 7)]
        for i in (1, 2, 3):
            for axis in range(3):
                lo = list(base)
                hi = list(base)
                lo[axis] = F(0)
                hi[axis] = F(1)
                mid = list(base)
                mid[axis] = F(1, 2)
                assert g.payoff(i, mid) == (g.payoff(i, lo) + g.payoff(i, hi)) / 2

    def test_lam_is_payoff_difference(self):
        rng = random.Random(11)
        g = TwoActionGame(
            3, [[F(rng.randint(-9, 9)) for _ in range(8)] for _ in range(3)]
        )
        gamma = [F(2, 7), F(3, 4), F(1, 5)]
        for i in (1, 2, 3):
            hi = list(gamma)
            lo = list(gamma)
            hi[i - 1] = F(1)
            lo[i - 1] = F(0)
            assert g.lam_at_profile(i, gamma) == g.payoff(i, hi) - g.payoff(i, lo)
            others = [g_ for k, g_ in enumerate(gamma, 1) if k != i]
            assert g.lam(i, others) == g.lam_at_profile(i, gamma)

    def test_matching_pennies_lam(self):
        g = self._matching_pennies()
        assert g.lam(1, [F(1, 2)]) == 0  # indifferent at the mixed equilibrium
        assert g.lam(1, [F(1)]) == 2  # match: prefer action 1
        assert g.lam(2, [F(1)]) == -2  # mismatch: prefer action 0

    def test_tensor_shape_and_values(self):
        g = self._matching_pennies()
        t = g.tensor(1)
        assert t.shape == (2, 2)
        assert t[1, 0] == -1.0 and t[1, 1] == 1.0

    def test_mode_validation(self):
        with pytest.raises(ValueError):
            TwoActionGame(2, [[0] * 4, [0] * 4], mode="complex")
        with pytest.raises(ValueError):
            TwoActionGame(2, [[0] * 3, [0] * 4])

    def test_as_float(self):
        g = self._matching_pennies().as_float()
        assert g.mode == FLOAT
        assert isinstance(g.utilities[0][0], float)


class TestCharacteristicTuple:
    def test_requires_self_fixed(self):
        with pytest.raises(ValueError):
            CharacteristicTuple(v=(0, 0), sigma=(Permutation([2, 1]),) * 2)

    def test_rejects_non_bits(self):
        sigma = (Permutation.identity(2),) * 2
        with pytest.raises(ValueError):
            CharacteristicTuple(v=(0, 2), sigma=sigma)

    def test_valid(self):
        sigma = tuple(block_swap_permutation(3, i) for i in (1, 2, 3))
        t = CharacteristicTuple(v=(0, 1, 0), sigma=sigma)
        assert t.m == 3


class TestCoefficients:
    def test_column_permutation_recovered_by_descending_sort(self):
        # column 1: a[2,1]=1/2 > a[3,1]=1/4, so 2 maps to the first free
        # position and 3 to the second
        values = {
            (2, 1): F(1, 2),
            (3, 1): F(1, 4),
            (1, 2): F(1, 4),
            (3, 2): F(3, 4),
            (1, 3): F(3, 4),
            (2, 3): F(1, 2),
        }
        c = CoefficientMatrix(3, values)
        assert c.column_permutation(1) == Permutation([1, 2, 3])
        assert c.column_permutation(2) == Permutation([3, 2, 1])
        assert c.column_permutation(3) == Permutation([1, 2, 3])

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            CoefficientMatrix(2, {(1, 2): F(1), (2, 1): F(1, 2)})

    def test_rejects_repeated_column_values(self):
        values = {
            (2, 1): F(1, 2),
            (3, 1): F(1, 2),
            (1, 2): F(1, 4),
            (3, 2): F(3, 4),
            (1, 3): F(3, 4),
            (2, 3): F(1, 2),
        }
        with pytest.raises(ValueError):
            CoefficientMatrix(3, values)

    def test_default_coefficients_realize_sigma(self):
        sigma = tuple(block_swap_permutation(4, i) for i in range(1, 5))
        t = CharacteristicTuple(v=(0,) * 4, sigma=sigma)
        c = default_coefficients(t)
        for j in range(1, 5):
            assert c.column_permutation(j) == sigma[j - 1]
        # equally spaced with denominator m+1
        assert all(a.denominator in (1, 5) for a in c.values.values())

    def test_maximal_m3_coefficients(self):
        g = maximal_game(3)
        c = g.coeffs
        assert (c[(2, 1)], c[(3, 1)]) == (F(1, 2), F(1, 4))
        assert (c[(1, 2)], c[(3, 2)]) == (F(1, 4), F(3, 4))
        assert (c[(1, 3)], c[(2, 3)]) == (F(3, 4), F(1, 2))


class TestProductGame:
    def test_factored_equals_tensor_lam(self, random_product_game):
        rng = random.Random(3)
        for _ in range(5):
            m = rng.randint(1, 4)
            game = random_product_game(m, rng)
            gamma = [F(rng.randint(1, 9), 10) for _ in range(m)]
            for i in range(1, m + 1):
                assert game.lam_factored(i, gamma) == game.tensor.lam_at_profile(
                    i, gamma
                )

    def test_sign_vector_flips_lam(self):
        sigma = tuple(block_swap_permutation(3, i) for i in (1, 2, 3))
        flipped = build_product_game(CharacteristicTuple((1, 0, 0), sigma))
        plain = build_product_game(CharacteristicTuple((0, 0, 0), sigma))
        gamma = [F(1, 3)] * 3
        assert flipped.lam_factored(1, gamma) == -plain.lam_factored(1, gamma)

    def test_action0_payoff_is_zero(self):
        game = maximal_game(3)
        for i in (1, 2, 3):
            for idx in range(8):
                bits = profile_bits(idx, 3)
                if bits[i - 1] == 0:
                    assert game.tensor.utility(i, bits) == 0

    def test_vertex_lam_matches_factored_form(self):
        game = maximal_game(3)
        for idx in range(8):
            bits = profile_bits(idx, 3)
            gamma = [F(b) for b in bits]
            for i in (1, 2, 3):
                expected = F(1)
                for j in (1, 2, 3):
                    if j != i:
                        expected *= bits[j - 1] - game.coeffs[(i, j)]
                assert game.tensor.lam_at_profile(i, gamma) == expected

    def test_rejects_mismatched_coefficients(self):
        sigma = tuple(block_swap_permutation(3, i) for i in (1, 2, 3))
        t = CharacteristicTuple((0, 0, 0), sigma)
        # identity orderings instead of the requested block-swap ones
        wrong = default_coefficients(
            CharacteristicTuple((0, 0, 0), (Permutation.identity(3),) * 3)
        )
        with pytest.raises(ValueError):
            ProductTwoActionGame(t, wrong)


class TestPerturbAndSerialization:
    def test_perturb_deterministic_and_bounded(self):
        game = maximal_game(3)
        a = perturb(game, 1e-3, seed=42)
        b = perturb(game, 1e-3, seed=42)
        c = perturb(game, 1e-3, seed=43)
        assert a.utilities == b.utilities
        assert a.utilities != c.utilities
        base = game.tensor.as_float()
        for t_new, t_old in zip(a.utilities, base.utilities):
            assert all(abs(x - y) <= 1e-3 for x, y in zip(t_new, t_old))

    def test_perturb_rejects_nonpositive_epsilon(self):
        with pytest.raises(ValueError):
            perturb(maximal_game(2), 0.0, seed=0)

    def test_roundtrip_product_game(self, tmp_path):
        game = maximal_game(3)
        path = tmp_path / "game.json"
        save_game(game, path)
        loaded = load_game(path)
        assert isinstance(loaded, ProductTwoActionGame)
        assert loaded.ctuple == game.ctuple
        assert loaded.tensor.utilities == game.tensor.utilities

    def test_roundtrip_float_game(self, tmp_path):
        game = perturb(maximal_game(2), 1e-2, seed=1)
        path = tmp_path / "game.json"
        save_game(game, path)
        loaded = load_game(path)
        assert isinstance(loaded, TwoActionGame)
        assert loaded.mode == FLOAT
        assert loaded.utilities == game.utilities

    def test_exact_fractions_survive_json(self, tmp_path):
        game = maximal_game(3)
        path = tmp_path / "game.json"
        save_game(game, path)
        data = json.loads(path.read_text())
        assert data["mode"] == EXACT
        # exact rationals are stored as strings, never floats
        assert all(
            isinstance(u, str) for table in data["utilities"] for u in table
        )

    def test_tampered_tensor_rejected(self, tmp_path):
        game = maximal_game(2)
        path = tmp_path / "game.json"
        save_game(game, path)
        data = json.loads(path.read_text())
        data["utilities"][0][-1] = "9/1"
        path.write_text(json.dumps(data))
        with pytest.raises(ValueError):
            load_game(path)
