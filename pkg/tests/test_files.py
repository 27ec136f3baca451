import json
import tempfile
import unittest
from pathlib import Path

from tests._test_path import SRC  # noqa: F401

from fmtbench.app.files import (
    dump_coloring,
    dump_structure,
    load_any,
    load_coloring,
    load_product,
    load_structure,
    product_from_dict,
    product_to_dict,
    structure_from_dict,
    structure_to_dict,
    write_json,
)
from fmtbench.core.catalog import chain, paper_ab, pure_set
from fmtbench.core.errors import InputError
from fmtbench.products.product import ProductStructure, generalized_product, lexicographic_product


class TestDocuments(unittest.TestCase):
    def test_structure_document(self):
        doc = structure_to_dict(chain(3))
        self.assertEqual(doc["signature"], {"lt": 2})
        self.assertEqual(doc["relations"]["lt"], [["0", "1"], ["0", "2"], ["1", "2"]])
        self.assertEqual(structure_from_dict(doc), chain(3))
        self.assertEqual(structure_from_dict(structure_to_dict(paper_ab(2))), paper_ab(2))

    def test_product_document(self):
        P = generalized_product(pure_set(2), {"0": chain(1), "1": chain(2)})
        doc = product_to_dict(P)
        self.assertEqual(set(doc["product"]), {"base", "fibers", "with_s"})
        self.assertEqual(product_from_dict(doc), P)

    def test_relations_default_to_empty(self):
        M = structure_from_dict({"signature": {"E": 2}, "universe": ["a", "b"]})
        self.assertEqual(M.rel("E"), frozenset())

    def test_malformed_structures(self):
        bad = [
            [1, 2],
            {"signature": {"E": 2}},
            {"signature": {"E": 2}, "universe": ["a"], "extra": 1},
            {"signature": {"E": "two"}, "universe": ["a"]},
            {"signature": {"E": 2}, "universe": ["a"], "relations": {"E": [["a", "z"]]}},
        ]
        for doc in bad:
            with self.subTest(doc=doc):
                with self.assertRaises(InputError):
                    structure_from_dict(doc)

    def test_tampered_product(self):
        doc = product_to_dict(lexicographic_product(pure_set(2), chain(2)))
        doc["relations"]["lt"] = doc["relations"]["lt"][1:]
        with self.assertRaises(InputError):
            product_from_dict(doc)
        with self.assertRaises(InputError):
            product_from_dict(structure_to_dict(chain(2)))


class TestFiles(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def test_structure_and_product_files(self):
        P = lexicographic_product(pure_set(2), chain(2))
        dump_structure(self.dir / "chain.json", chain(3))
        dump_structure(self.dir / "prod.json", P)
        self.assertEqual(load_structure(self.dir / "chain.json"), chain(3))
        self.assertEqual(load_product(self.dir / "prod.json"), P)
        self.assertEqual(load_structure(self.dir / "prod.json"), P.structure)
        self.assertIsInstance(load_any(self.dir / "prod.json"), ProductStructure)
        self.assertEqual(load_any(self.dir / "chain.json"), chain(3))

    def test_write_json_creates_directories(self):
        target = self.dir / "nested" / "deeper" / "doc.json"
        write_json(target, {"b": 1, "a": [1, 2]})
        self.assertEqual(json.loads(target.read_text(encoding="utf-8")), {"a": [1, 2], "b": 1})

    def test_read_errors(self):
        broken = self.dir / "broken.json"
        broken.write_text("{not json", encoding="utf-8")
        with self.assertRaises(InputError):
            load_structure(broken)
        with self.assertRaises(InputError):
            load_structure(self.dir / "missing.json")

    def test_colorings(self):
        dump_coloring(self.dir / "c.json", {"0": "red", "1": "blue"})
        self.assertEqual(load_coloring(self.dir / "c.json"), {"0": "red", "1": "blue"})
        write_json(self.dir / "bad.json", {"colours": {"0": "red"}})
        with self.assertRaises(InputError):
            load_coloring(self.dir / "bad.json")


if __name__ == "__main__":
    unittest.main()
