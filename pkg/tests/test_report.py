import json
import unittest
from dataclasses import FrozenInstanceError

from tests._test_path import SRC  # noqa: F401

from fmtbench.core.catalog import chain
from fmtbench.logic.parser import parse
from fmtbench.validation.report import RuleResult, ValidationReport, Verdict
from fmtbench.validation.validator import dumps_report, format_report_text, to_jsonable


class TestReport(unittest.TestCase):
    def test_rule_result_frozen(self):
        r = RuleResult(rule_id="Universe", passed=True, message="ok", metrics={"size": 4})
        with self.assertRaises(FrozenInstanceError):
            r.passed = False  # type: ignore[misc]

    def test_report_construction(self):
        results = [
            RuleResult(rule_id="A", passed=True, message="ok"),
            RuleResult(rule_id="B", passed=False, message="nope"),
        ]
        rep = ValidationReport(passed=False, results=results, size=4, fibers=2)
        self.assertFalse(rep.passed)
        self.assertEqual(rep.failed_rules, ["B"])
        self.assertEqual(rep.rule("A").message, "ok")
        self.assertEqual(rep.results[0].metrics, {})
        with self.assertRaises(KeyError):
            rep.rule("C")

    def test_rules_from_violations(self):
        ok = RuleResult.from_violations("s classes", [], "fine", "{count} bad")
        self.assertTrue(ok.passed)
        self.assertEqual(ok.metrics, {"violations": []})
        bad = RuleResult.from_violations("s classes", ([i, i] for i in range(7)), "fine", "{count} bad", shown=2)
        self.assertFalse(bad.passed)
        self.assertEqual(bad.message, "7 bad")
        self.assertEqual(bad.metrics, {"violations": [[0, 0], [1, 1]], "count": 7})

    def test_verdict_defaults(self):
        v = Verdict(True, "duplicator", "survives")
        self.assertIsNone(v.witness)
        self.assertIsNone(v.metrics)
        self.assertEqual(v.results, [])

    def test_jsonable_formulas_structures_and_sets(self):
        v = Verdict(
            False,
            "mismatch",
            "differ",
            witness={"formula": parse("E x. lt(x,y)"), "elements": frozenset({"b", "a"})},
            metrics={"structure": chain(2)},
        )
        doc = to_jsonable(v)
        self.assertEqual(doc["witness"]["formula"], "E x. lt(x,y)")
        self.assertEqual(doc["witness"]["elements"], ["a", "b"])
        self.assertEqual(doc["metrics"]["structure"]["relations"], {"lt": [["0", "1"]]})
        self.assertEqual(json.loads(dumps_report(v))["label"], "mismatch")

    def test_text_rendering(self):
        v = Verdict(
            False,
            "not a member",
            "a tuple carries two colours",
            witness={"rule": "Disjointness"},
            results=[RuleResult("Symmetry", True, "ok"), RuleResult("Disjointness", False, "clash")],
        )
        text = format_report_text(v)
        self.assertIn("fmtbench Report", text)
        self.assertIn("Overall: FAIL", text)
        self.assertIn("not a member", text)
        self.assertIn("Disjointness", text)


if __name__ == "__main__":
    unittest.main()
