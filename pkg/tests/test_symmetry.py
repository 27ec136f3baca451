import unittest
from dataclasses import replace

from tests._test_path import SRC  # noqa: F401

from fmtbench.core.catalog import chain, cycle, path, pure_set
from fmtbench.core.errors import ContractError, PreconditionError, ResourceError
from fmtbench.core.models import WorkbenchParams
from fmtbench.core.structures import check_isomorphism, induced_substructure, make_structure
from fmtbench.products.product import decompose_element, generalized_product, lexicographic_product
from fmtbench.symmetry.automorphisms import (
    automorphisms,
    check_automorphism_group,
    is_k_homogeneous,
    is_symmetrically_embedded,
    is_transitive,
    is_ultrahomogeneous,
    orbits,
    transitivity_verdict,
)
from fmtbench.symmetry.lifts import fiber_isomorphism_from_automorphism, lift_automorphism


class TestAutomorphisms(unittest.TestCase):
    def test_counts(self):
        for M, expected in ((chain(4), 1), (pure_set(3), 6), (cycle(3), 3), (path(3), 2)):
            with self.subTest(M=M.universe, expected=expected):
                aut = automorphisms(M)
                self.assertEqual(len(aut), expected)
                self.assertTrue(check_automorphism_group(aut))
                self.assertIn(tuple(M.universe), aut.elements)

    def test_orbits(self):
        self.assertEqual(orbits(path(3)).blocks, (("a", "c"), ("b",)))
        self.assertEqual(len(orbits(pure_set(3))), 1)
        self.assertEqual(len(orbits(chain(3))), 3)
        self.assertEqual(orbits(path(3)).orbit_index("c"), 0)

    def test_transitivity(self):
        self.assertTrue(is_transitive(cycle(4)))
        verdict = transitivity_verdict(path(3))
        self.assertFalse(verdict.passed)
        self.assertEqual(verdict.witness["elements"], ["a", "b"])
        self.assertEqual(verdict.metrics["orbits"], 2)

    def test_cap(self):
        with self.assertRaises(ResourceError) as ctx:
            automorphisms(pure_set(11))
        self.assertEqual(ctx.exception.cap, "automorphism_cap")
        self.assertEqual(len(automorphisms(chain(11), replace(WorkbenchParams(), automorphism_cap=11))), 1)


class TestSymmetricEmbedding(unittest.TestCase):
    def test_rigid_substructure(self):
        sub = induced_substructure(chain(4), ["0", "1"])
        self.assertTrue(is_symmetrically_embedded(sub, chain(4)).passed)

    def test_ends_of_an_undirected_path(self):
        sub = induced_substructure(path(3), ["a", "c"])
        self.assertTrue(is_symmetrically_embedded(sub, path(3)).passed)

    def test_ends_of_a_directed_path(self):
        M = path(3, directed=True)
        verdict = is_symmetrically_embedded(induced_substructure(M, ["a", "c"]), M)
        self.assertFalse(verdict.passed)
        self.assertEqual(verdict.witness["automorphism"], {"a": "c", "c": "a"})

    def test_requires_an_induced_substructure(self):
        fake = make_structure({"E": 2}, ["a", "b"], {})
        with self.assertRaises(PreconditionError):
            is_symmetrically_embedded(fake, path(3))


class TestHomogeneity(unittest.TestCase):
    def test_pure_set_is_ultrahomogeneous(self):
        verdict = is_ultrahomogeneous(pure_set(3), 3)
        self.assertTrue(verdict.passed)
        self.assertGreater(verdict.metrics["maps_checked"], 0)

    def test_path_is_not(self):
        verdict = is_ultrahomogeneous(path(3), 2)
        self.assertFalse(verdict.passed)
        self.assertIn("map", verdict.witness)

    def test_k_homogeneous(self):
        self.assertTrue(is_k_homogeneous(pure_set(3), 1, 2).passed)
        self.assertTrue(is_k_homogeneous(path(3), 2, 1).passed)


class TestLifts(unittest.TestCase):
    def setUp(self):
        self.P = lexicographic_product(cycle(3), path(3))

    def test_every_base_automorphism_lifts(self):
        for sigma in automorphisms(self.P.base).as_dicts():
            lifted = lift_automorphism(self.P, sigma)
            self.assertTrue(check_isomorphism(lifted))
            for e, image in lifted.mapping:
                a, b = decompose_element(self.P, e)
                self.assertEqual(decompose_element(self.P, image), (sigma[a], b))

    def test_lifts_move_every_class_to_every_class(self):
        reached = set()
        for sigma in automorphisms(self.P.base).as_dicts():
            lifted = lift_automorphism(self.P, sigma).as_dict()
            for e in self.P.universe:
                reached.add((decompose_element(self.P, e)[0], decompose_element(self.P, lifted[e])[0]))
        self.assertEqual(reached, {(a, b) for a in self.P.base.universe for b in self.P.base.universe})

    def test_fiber_isomorphisms_from_product_automorphisms(self):
        aut = automorphisms(self.P)
        self.assertEqual(len(aut), 24)
        for tau in aut.as_dicts():
            for e in self.P.universe:
                f = fiber_isomorphism_from_automorphism(self.P, tau, e)
                self.assertTrue(check_isomorphism(f))
                self.assertEqual(f.source, path(3))

    def test_unlike_fibers_are_never_swapped(self):
        P = generalized_product(pure_set(2), {"0": chain(1), "1": chain(2)})
        for tau in automorphisms(P).as_dicts():
            self.assertEqual(tau["(0|0)"], "(0|0)")
        self.assertEqual(len(orbits(P)), 3)

    def test_errors(self):
        with self.assertRaises(ContractError):
            lift_automorphism(self.P, {"0": "0", "1": "2", "2": "1"})
        P = generalized_product(pure_set(2), {"0": chain(1), "1": chain(2)})
        with self.assertRaises(ContractError):
            lift_automorphism(P, {"0": "1", "1": "0"})
        with self.assertRaises(ContractError):
            fiber_isomorphism_from_automorphism(lexicographic_product(cycle(3), path(2), with_s=False), {}, "(0|a)")


if __name__ == "__main__":
    unittest.main()
