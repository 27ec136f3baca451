import unittest

from sympy.functions.combinatorial.numbers import bell

from tests._test_path import SRC  # noqa: F401

from fmtbench.core.catalog import pure_set
from fmtbench.core.errors import InputError
from fmtbench.logic.diagrams import (
    SDiagram,
    enumerate_equality_diagrams,
    enumerate_s_diagrams,
    is_admissible,
    resolve_s_literals,
    tilde,
)
from fmtbench.logic.formula import TRUE
from fmtbench.logic.parser import parse
from fmtbench.products.product import encode_pair, lexicographic_product

VARS = ("v1", "v2", "v3", "v4")


def _brute_partitions(items):
    # independent enumerator: each item joins an earlier block or opens a new one
    if not items:
        return [[]]
    out = []
    for rest in _brute_partitions(items[1:]):
        out.append([[items[0]]] + rest)
        for i in range(len(rest)):
            out.append(rest[:i] + [[items[0]] + rest[i]] + rest[i + 1:])
    return out


def _canon(blocks):
    return frozenset(frozenset(b) for b in blocks)


class TestDiagrams(unittest.TestCase):
    def test_bell_numbers(self):
        for n, expected in zip(range(1, 5), (1, 2, 5, 15)):
            with self.subTest(n=n):
                self.assertEqual(int(bell(n)), expected)
                self.assertEqual(len(enumerate_equality_diagrams(VARS[:n])), expected)
                self.assertEqual(len(enumerate_s_diagrams(VARS[:n])), expected)

    def test_partitions_match_brute_force(self):
        for n in range(1, 5):
            ours = {_canon(d.blocks) for d in enumerate_s_diagrams(VARS[:n])}
            theirs = {_canon(p) for p in _brute_partitions(list(VARS[:n]))}
            self.assertEqual(ours, theirs)

    def test_render_s_diagram(self):
        d = SDiagram(("v1", "v2", "w"), (("v1", "v2"), ("w",)))
        self.assertEqual(str(d.render()), "s(v1,v2) & !s(v1,w) & !s(v2,w)")
        self.assertEqual(str(d.as_equality().render()), "v1=v2 & !v1=w & !v2=w")

    def test_restrict_and_representatives(self):
        d = SDiagram(("v1", "v2", "w"), (("v1", "w"), ("v2",)))
        self.assertEqual(d.representative("w"), "v1")
        r = d.restrict(["v2", "w"])
        self.assertEqual(r.blocks, (("w",), ("v2",)))
        with self.assertRaises(InputError):
            d.block_of("z")

    def test_duplicate_variables_rejected(self):
        with self.assertRaises(InputError):
            enumerate_s_diagrams(["x", "x"])

    def test_tilde(self):
        self.assertEqual(str(tilde(parse("x=y & R(x,y)"))), "s(x,y) & R(x,y)")
        self.assertEqual(tilde(parse("R(x,y)")), parse("R(x,y)"))
        self.assertEqual(str(tilde(parse("E w. w=x"))), "E w. s(w,x)")

    def test_resolve_s_literals(self):
        d = SDiagram(("x", "y"), (("x", "y"),))
        self.assertEqual(resolve_s_literals(parse("s(x,y)"), d), TRUE)
        apart = SDiagram(("x", "y"), (("x",), ("y",)))
        self.assertEqual(resolve_s_literals(parse("s(x,y) | x=y | R(x,y)"), apart), parse("R(x,y)"))


class TestAdmissible(unittest.TestCase):
    def setUp(self):
        R = pure_set(2, {"R": 2})
        self.P = lexicographic_product(R, R)

    def test_same_fiber_is_not_admissible(self):
        a = {"v1": encode_pair("0", "0"), "v2": encode_pair("0", "1")}
        self.assertFalse(is_admissible(parse("R(v1,v2)"), self.P, a))

    def test_different_fibers_are_admissible(self):
        a = {"v1": encode_pair("0", "0"), "v2": encode_pair("1", "0")}
        self.assertTrue(is_admissible(parse("R(v1,v2)"), self.P, a))

    def test_equalities_only_is_vacuous(self):
        a = {"v1": encode_pair("0", "0"), "v2": encode_pair("0", "0")}
        self.assertTrue(is_admissible(parse("v1=v2 & s(v1,v2)"), self.P, a))


if __name__ == "__main__":
    unittest.main()
