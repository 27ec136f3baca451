import unittest
from dataclasses import replace

from tests._test_path import SRC  # noqa: F401

from fmtbench.core.catalog import chain, pure_set
from fmtbench.core.structures import Structure
from fmtbench.products.product import encode_pair, generalized_product, lexicographic_product
from fmtbench.validation import validator as v


def _find(report, rule_id: str):
    try:
        return report.rule(rule_id)
    except KeyError:
        raise AssertionError(f"Rule not found: {rule_id}")


def _without(P, name: str, t: tuple):
    S = P.structure
    rels = dict(S.relations)
    rels[name] = S.rel(name) - {t}
    return replace(P, structure=Structure(S.signature, S.universe, rels))


class TestValidator(unittest.TestCase):
    def test_constructed_products_pass_every_rule(self):
        for P in (
            lexicographic_product(pure_set(2), chain(2)),
            lexicographic_product(chain(2), chain(2), with_s=False),
            generalized_product(pure_set(2), {"0": chain(1), "1": chain(2)}),
        ):
            report = v.validate_product(P)
            self.assertTrue(report.passed)
            self.assertTrue(_find(report, "Universe").passed)
            self.assertTrue(_find(report, "Fiber relations").passed)
            self.assertTrue(_find(report, "Base relations").passed)

    def test_s_rule_only_on_expanded_products(self):
        with_s = v.validate_product(lexicographic_product(pure_set(2), chain(2)))
        without_s = v.validate_product(lexicographic_product(pure_set(2), chain(2), with_s=False))
        self.assertEqual(len(with_s.results), 4)
        self.assertTrue(_find(with_s, "s classes").passed)
        self.assertEqual(len(without_s.results), 3)

    def test_missing_fiber_tuple_is_reported(self):
        P = lexicographic_product(pure_set(2), chain(2))
        bad = _without(P, "lt", (encode_pair("0", "0"), encode_pair("0", "1")))
        report = v.validate_product(bad)
        self.assertFalse(report.passed)
        self.assertFalse(_find(report, "Fiber relations").passed)
        self.assertTrue(_find(report, "Base relations").passed)
        self.assertEqual(report.failed_rules, ["Fiber relations"])
        self.assertEqual(_find(report, "Fiber relations").metrics["count"], 1)

    def test_missing_base_tuple_is_reported(self):
        P = lexicographic_product(chain(2), chain(2))
        bad = _without(P, "lt", (encode_pair("0", "1"), encode_pair("1", "0")))
        report = v.validate_product(bad)
        self.assertFalse(_find(report, "Base relations").passed)
        self.assertEqual(_find(report, "Base relations").metrics["violations"], [["lt", ["(0|1)", "(1|0)"]]])

    def test_sizes_are_reported(self):
        report = v.validate_product(generalized_product(pure_set(2), {"0": chain(1), "1": chain(2)}, with_s=False))
        self.assertEqual((report.size, report.fibers, report.with_s), (3, 2, False))

    def test_text_report(self):
        P = lexicographic_product(pure_set(2), chain(2))
        text = v.format_report_text(v.validate_product(P))
        self.assertIn("fmtbench Report", text)
        self.assertIn("Overall: PASS", text)
        self.assertIn("s classes", text)


if __name__ == "__main__":
    unittest.main()
