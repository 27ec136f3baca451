import unittest

from hypothesis import given, settings
from hypothesis import strategies as st

from tests._test_path import SRC  # noqa: F401

from fmtbench.core.catalog import GRAPH, chain, complete_graph, cycle, paper_ab, path, pure_set
from fmtbench.core.errors import ContractError, InputError
from fmtbench.core.reducts import definitional_reduct
from fmtbench.core.structures import (
    Signature,
    StructureMap,
    are_isomorphic,
    check_embedding,
    check_isomorphism,
    compose_maps,
    find_embeddings,
    induced_substructure,
    language_reduct,
    make_structure,
    relabel,
)
from fmtbench.logic.parser import parse
from fmtbench.products.product import decompose_element, lexicographic_product


class TestStructures(unittest.TestCase):
    def test_signature_rules(self):
        self.assertTrue(Signature.of({"s": 2, "lt": 2}).has_s)
        with self.assertRaises(InputError):
            Signature.of({"s": 3})
        with self.assertRaises(InputError):
            Signature.of({"=": 2})
        with self.assertRaises(InputError):
            Signature.of({"U": 0})

    def test_bad_relations_rejected(self):
        with self.assertRaises(InputError):
            make_structure({"lt": 2}, ["0", "1"], {"lt": [("0", "2")]})
        with self.assertRaises(InputError):
            make_structure({"lt": 2}, ["0", "1"], {"lt": [("0",)]})
        with self.assertRaises(InputError):
            make_structure({"lt": 2}, ["0", "0"], {})
        with self.assertRaises(InputError):
            make_structure({"lt": 2}, [], {})

    def test_induced_substructure(self):
        sub = induced_substructure(chain(3), {"0", "2"})
        self.assertEqual(sub.universe, ("0", "2"))
        self.assertEqual(sub.rel("lt"), frozenset({("0", "2")}))
        self.assertEqual(induced_substructure(chain(3), chain(3).universe), chain(3))
        self.assertEqual(induced_substructure(path(3), {"a", "c"}).rel("E"), frozenset())
        with self.assertRaises(InputError):
            induced_substructure(chain(3), {"7"})

    def test_check_isomorphism(self):
        C = chain(3)
        identity = StructureMap.from_dict(C, C, {e: e for e in C.universe})
        self.assertTrue(check_isomorphism(identity))
        reverse = StructureMap.from_dict(C, C, {"0": "2", "1": "1", "2": "0"})
        self.assertFalse(check_isomorphism(reverse))

    def test_two_by_two_chain_product_is_a_four_chain(self):
        P = lexicographic_product(chain(2), chain(2), with_s=False)
        rank = {}
        for e in P.universe:
            a, b = decompose_element(P, e)
            rank[e] = str(2 * int(a) + int(b))
        self.assertTrue(check_isomorphism(StructureMap.from_dict(P.structure, chain(4), rank, kind="isomorphism")))

    def test_maps_must_be_injective_and_total(self):
        C = chain(2)
        with self.assertRaises(ContractError):
            StructureMap.from_dict(C, C, {"0": "1", "1": "1"})
        with self.assertRaises(ContractError):
            StructureMap.from_dict(C, C, {"0": "1"})

    def test_find_embeddings_counts(self):
        self.assertEqual(len(find_embeddings(pure_set(2), pure_set(3))), 6)
        self.assertEqual(len(find_embeddings(chain(2), chain(3))), 3)
        self.assertEqual(find_embeddings(chain(3), pure_set(3)), [])
        self.assertEqual(len(find_embeddings(pure_set(2), pure_set(3), limit=2)), 2)
        for f in find_embeddings(chain(2), chain(3)):
            self.assertTrue(check_embedding(f))

    def test_relabel_gives_isomorphic_copy(self):
        C = chain(3)
        copy = relabel(C, {"0": "a", "1": "b", "2": "c"})
        self.assertEqual(copy.rel("lt"), frozenset({("a", "b"), ("a", "c"), ("b", "c")}))
        self.assertTrue(are_isomorphic(C, copy))
        self.assertFalse(are_isomorphic(C, pure_set(3)))


MAP_CORPUS = [chain(3), path(4), cycle(4), complete_graph(3), paper_ab(2), pure_set(3)]


def _renaming(M, order, stem):
    return {e: f"{stem}{order[i]}" for i, e in enumerate(M.universe)}


class TestStructureMaps(unittest.TestCase):
    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_composed_isomorphisms_are_isomorphisms(self, data):
        M = data.draw(st.sampled_from(MAP_CORPUS))
        n = len(M)
        p1 = _renaming(M, data.draw(st.permutations(list(range(n)))), "u")
        M1 = relabel(M, p1)
        p2 = _renaming(M1, data.draw(st.permutations(list(range(n)))), "w")
        M2 = relabel(M1, p2)
        f = StructureMap.from_dict(M, M1, p1, kind="isomorphism")
        g = StructureMap.from_dict(M1, M2, p2, kind="isomorphism")
        self.assertTrue(check_isomorphism(f))
        self.assertTrue(check_isomorphism(g))
        h = compose_maps(f, g)
        self.assertTrue(check_isomorphism(h))
        self.assertEqual(h.as_dict(), {e: p2[p1[e]] for e in M.universe})

    def test_composing_with_a_non_isomorphism(self):
        C = chain(3)
        copy = relabel(C, {"0": "a", "1": "b", "2": "c"})
        f = StructureMap.from_dict(C, copy, {"0": "a", "1": "b", "2": "c"}, kind="isomorphism")
        flip = StructureMap.from_dict(copy, C, {"a": "2", "b": "1", "c": "0"})
        self.assertFalse(check_isomorphism(compose_maps(f, flip)))

    def test_maps_must_meet_in_the_middle(self):
        C = chain(3)
        f = StructureMap.from_dict(C, relabel(C, {"0": "a", "1": "b", "2": "c"}), {"0": "a", "1": "b", "2": "c"})
        with self.assertRaises(ContractError):
            compose_maps(f, f)

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_induced_substructure_is_idempotent(self, data):
        M = data.draw(st.sampled_from(MAP_CORPUS))
        outer = data.draw(st.sets(st.sampled_from(M.universe), min_size=1))
        inner = data.draw(st.sets(st.sampled_from(sorted(outer)), min_size=1))
        S = induced_substructure(M, outer)
        self.assertEqual(induced_substructure(S, outer), S)
        self.assertEqual(induced_substructure(S, inner), induced_substructure(M, inner))


class TestLanguageReduct(unittest.TestCase):
    def test_dropping_s_from_a_product(self):
        P = lexicographic_product(chain(2), chain(2))
        R = language_reduct(P.structure, ["lt"])
        self.assertEqual(R.signature.as_dict(), {"lt": 2})
        self.assertEqual(R.universe, P.universe)
        self.assertEqual(R.rel("lt"), P.structure.rel("lt"))

    def test_keeping_the_unary_part(self):
        R = language_reduct(paper_ab(2), ["A", "B"])
        self.assertNotIn("R", R.signature)
        self.assertEqual(R.rel("A"), frozenset({("p",)}))
        self.assertEqual(R.rel("B"), frozenset({("q1",), ("q2",)}))

    def test_unknown_symbol(self):
        with self.assertRaises(InputError):
            language_reduct(chain(3), ["gt"])


class TestDefinitionalReduct(unittest.TestCase):
    def test_reversed_chain(self):
        R = definitional_reduct(chain(3), {"gt": (("x", "y"), parse("lt(y,x)"))})
        self.assertEqual(R.rel("gt"), frozenset({("1", "0"), ("2", "0"), ("2", "1")}))

    def test_identity_reduct_is_isomorphic(self):
        M = paper_ab(2)
        defs = {f"{name}_copy": parse(f"{name}({','.join(['x', 'y'][:arity])})") for name, arity in M.signature.symbols}
        R = definitional_reduct(M, defs)
        for name, _ in M.signature.symbols:
            self.assertEqual(R.rel(f"{name}_copy"), M.rel(name))

    def test_degree_two_vertices(self):
        R = definitional_reduct(path(3), {"deg2": parse("E y. E z. (E(x,y) & E(x,z) & !y=z)")})
        self.assertEqual(R.rel("deg2"), frozenset({("b",)}))
        self.assertEqual(R.signature.as_dict(), {"deg2": 1})

    def test_bad_definitions(self):
        with self.assertRaises(InputError):
            definitional_reduct(chain(3), {"bad": (("x",), parse("lt(x,y)"))})
        with self.assertRaises(InputError):
            definitional_reduct(chain(3), {"bad": parse("E x. lt(x,x)")})
        with self.assertRaises(InputError):
            definitional_reduct(make_structure(GRAPH, ["0"], {}), {"bad": parse("lt(x,y)")})


if __name__ == "__main__":
    unittest.main()
