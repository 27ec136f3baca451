import unittest
from itertools import combinations_with_replacement

from hypothesis import given, settings
from hypothesis import strategies as st

from tests._test_path import SRC  # noqa: F401

from fmtbench.core.catalog import chain, path, pure_set
from fmtbench.core.errors import ContractError, InputError, PreconditionError, ResourceError
from fmtbench.core.structures import StructureMap, induced_substructure, make_structure
from fmtbench.logic.semantics import evaluate
from fmtbench.products.product import lexicographic_product
from fmtbench.symmetry.games import (
    characteristic_formula,
    ef_game,
    k_elementary_map,
    k_elementary_substructure,
    mutually_k_embeddable,
    rank_type,
)

ORDER_CORPUS = [chain(1), chain(2), chain(3), pure_set(2), pure_set(3)] + [
    make_structure({"lt": 2}, ["0", "1"], {"lt": [("0", "1"), ("1", "0")]}),
    make_structure({"lt": 2}, ["0", "1", "2"], {"lt": [("0", "0")]}),
]


class TestEFGame(unittest.TestCase):
    def test_chains(self):
        short = ef_game(chain(2), chain(3), 2)
        self.assertFalse(short.passed)
        self.assertEqual(short.label, "spoiler")
        self.assertTrue(short.witness["trace"])
        long = ef_game(chain(3), chain(4), 2)
        self.assertTrue(long.passed)
        self.assertEqual(long.label, "duplicator")

    def test_zero_rounds(self):
        self.assertTrue(ef_game(chain(1), chain(4), 0).passed)

    def test_pebbles(self):
        self.assertFalse(ef_game(chain(3), chain(3), 1, ["0"], ["1"]).passed)
        self.assertTrue(ef_game(chain(3), chain(3), 2, ["1"], ["1"]).passed)
        clash = ef_game(chain(3), chain(3), 0, ["0", "1"], ["1", "0"])
        self.assertFalse(clash.passed)
        self.assertEqual(clash.witness["trace"], [])

    def test_errors(self):
        with self.assertRaises(ResourceError):
            ef_game(chain(2), chain(2), 5)
        with self.assertRaises(InputError):
            ef_game(chain(2), path(2), 1)
        with self.assertRaises(ContractError):
            ef_game(chain(2), chain(2), 1, ["0"], [])
        with self.assertRaises(InputError):
            ef_game(chain(2), chain(2), 1, ["9"], ["0"])

    def test_agrees_with_types_and_hintikka_formulas(self):
        for A, B in combinations_with_replacement(ORDER_CORPUS, 2):
            for k in range(3):
                same = rank_type(A, k) == rank_type(B, k)
                with self.subTest(A=A, B=B, k=k):
                    self.assertEqual(ef_game(A, B, k).passed, same)
                    self.assertEqual(evaluate(B, characteristic_formula(A, k), {}), same)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 3), st.integers(0, 3))
    def test_pebbled_chains(self, n, m, i, j):
        i, j = min(i, n - 1), min(j, m - 1)
        A, B = chain(n), chain(m)
        game = ef_game(A, B, 2, [str(i)], [str(j)])
        self.assertEqual(game.passed, rank_type(A, 2, [str(i)]) == rank_type(B, 2, [str(j)]))
        chi = characteristic_formula(A, 2, [str(i)], ["x"])
        self.assertEqual(evaluate(B, chi, {"x": str(j)}), game.passed)

    def test_products_of_equivalent_factors_are_equivalent(self):
        bases = [(pure_set(2), pure_set(3)), (pure_set(3), pure_set(2)), (chain(2), chain(2)), (chain(3), chain(3))]
        fibers = [(pure_set(2), pure_set(3)), (chain(1), chain(1)), (chain(3), chain(3))]
        for M1, M2 in bases:
            for N1, N2 in fibers:
                with self.subTest(M=(len(M1), len(M2)), N=(len(N1), len(N2))):
                    self.assertTrue(ef_game(M1, M2, 2).passed)
                    self.assertTrue(ef_game(N1, N2, 2).passed)
                    P1, P2 = lexicographic_product(M1, N1), lexicographic_product(M2, N2)
                    self.assertTrue(ef_game(P1, P2, 2).passed)

    def test_inequivalent_bases_stay_apart(self):
        P1 = lexicographic_product(chain(2), chain(1))
        P2 = lexicographic_product(chain(3), chain(1))
        self.assertFalse(ef_game(P1, P2, 2).passed)


class TestElementarity(unittest.TestCase):
    def test_pure_sets(self):
        big = pure_set(6)
        sub = induced_substructure(big, ["0", "1", "2", "3"])
        self.assertTrue(k_elementary_substructure(sub, big, 2, 2).passed)
        small = induced_substructure(pure_set(4), ["0", "1"])
        verdict = k_elementary_substructure(small, pure_set(4), 2, 2)
        self.assertFalse(verdict.passed)
        self.assertEqual(verdict.witness["tuple"], ["0"])

    def test_chain_gap(self):
        sub = induced_substructure(chain(3), ["0", "2"])
        self.assertTrue(k_elementary_substructure(sub, chain(3), 1, 1).passed)
        self.assertFalse(k_elementary_substructure(sub, chain(3), 2, 1).passed)

    def test_not_induced(self):
        with self.assertRaises(PreconditionError):
            k_elementary_substructure(pure_set(2), chain(3), 1, 1)

    def test_maps(self):
        M = chain(3)
        identity = StructureMap.from_dict(M, M, {e: e for e in M.universe}, kind="k-elementary", k=2)
        self.assertTrue(k_elementary_map(identity, 2, 1).passed)
        into = StructureMap.from_dict(chain(2), chain(3), {"0": "0", "1": "1"}, kind="embedding")
        self.assertFalse(k_elementary_map(into, 1, 1).passed)


class TestMutualEmbeddability(unittest.TestCase):
    def test_chains(self):
        verdict = mutually_k_embeddable(chain(3), chain(4), 1, 1)
        self.assertTrue(verdict.passed)
        self.assertEqual(verdict.label, "mutually k-embeddable")

    def test_pure_sets(self):
        verdict = mutually_k_embeddable(pure_set(1), pure_set(2), 1, 1)
        self.assertFalse(verdict.passed)
        self.assertEqual(verdict.witness, {"side": "left", "tuple": ["0"]})
        self.assertTrue(mutually_k_embeddable(pure_set(1), pure_set(2), 1, 0).passed)

    def test_signatures_must_match(self):
        with self.assertRaises(InputError):
            mutually_k_embeddable(chain(2), path(2), 1, 1)

    def test_structure_with_itself(self):
        for require_embeddings in (False, True):
            with self.subTest(require_embeddings=require_embeddings):
                verdict = mutually_k_embeddable(chain(3), chain(3), 2, 2, require_embeddings=require_embeddings)
                self.assertTrue(verdict.passed)
        strict = mutually_k_embeddable(chain(3), chain(3), 2, 2, require_embeddings=True)
        identity = {"0": "0", "1": "1", "2": "2"}
        self.assertEqual(strict.witness, {"left_to_right": identity, "right_to_left": identity})

    def test_pure_sets_of_two_and_three(self):
        verdict = mutually_k_embeddable(pure_set(2), pure_set(3), 1, 1)
        self.assertTrue(verdict.passed)
        self.assertTrue(verdict.metrics["embedding_left_to_right"])
        self.assertFalse(verdict.metrics["embedding_right_to_left"])
        # three points never embed in two
        strict = mutually_k_embeddable(pure_set(2), pure_set(3), 1, 1, require_embeddings=True)
        self.assertFalse(strict.passed)
        self.assertEqual(strict.witness, {"side": "right", "embedding": None})

    def test_chains_of_two_and_three_at_rank_two(self):
        verdict = mutually_k_embeddable(chain(2), chain(3), 2, 2)
        self.assertFalse(verdict.passed)
        self.assertEqual(verdict.witness, {"side": "left", "tuple": []})
        strict = mutually_k_embeddable(chain(2), chain(3), 2, 2, require_embeddings=True)
        self.assertFalse(strict.passed)
        self.assertEqual(strict.witness["side"], "left")
        self.assertFalse(strict.metrics["embedding_left_to_right"])


if __name__ == "__main__":
    unittest.main()
