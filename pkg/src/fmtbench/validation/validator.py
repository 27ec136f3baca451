from __future__ import annotations

import json
from dataclasses import fields, is_dataclass
from itertools import product as cartesian
from typing import Any, List

import numpy as np

from ..core.structures import S_SYMBOL, Structure
from ..logic.formula import Formula
from ..products.product import ProductStructure, encode_pair
from .report import RuleResult, ValidationReport, Verdict


def validate_product(P: ProductStructure) -> ValidationReport:
    """
    Re-check a product against its defining clauses, tuple by tuple.

    Independent of the constructor: every candidate tuple of the universe is
    classified from its decomposition alone.
    """
    M = P.base
    fibers = P.fiber_map
    results: List[RuleResult] = []

    expected = {encode_pair(a, b) for a in M.universe for b in fibers[a].universe}
    got = set(P.universe)
    results.append(
        RuleResult(
            "Universe",
            expected == got,
            f"{len(got)} elements (expected {len(expected)}).",
            {"size": len(got), "expected": len(expected), "missing": sorted(expected - got), "extra": sorted(got - expected)},
        )
    )

    fiber_bad: list = []
    base_bad: list = []
    for name, arity in M.signature.symbols:
        rel = P.structure.rel(name)
        for t in cartesian(P.universe, repeat=arity):
            parts = [P.pairs[e] for e in t]
            firsts = [a for a, _ in parts]
            if len(set(firsts)) == 1:
                if (t in rel) != (tuple(b for _, b in parts) in fibers[firsts[0]].rel(name)):
                    fiber_bad.append([name, list(t)])
            elif (t in rel) != (tuple(firsts) in M.rel(name)):
                base_bad.append([name, list(t)])
    results.append(
        RuleResult.from_violations(
            "Fiber relations", fiber_bad, "Tuples inside one fiber follow the fiber.", "{count} tuples disagree with their fiber."
        )
    )
    results.append(
        RuleResult.from_violations(
            "Base relations", base_bad, "Tuples across fibers follow the base.", "{count} tuples disagree with the base."
        )
    )

    if P.with_s:
        s = P.structure.rel(S_SYMBOL)
        misclassified = (
            [x, y] for x, y in cartesian(P.universe, repeat=2) if ((x, y) in s) != (P.pairs[x][0] == P.pairs[y][0])
        )
        results.append(
            RuleResult.from_violations(
                "s classes", misclassified, "s relates exactly the elements of one fiber.", "{count} pairs misclassified by s."
            )
        )

    return ValidationReport(
        passed=all(r.passed for r in results),
        results=results,
        size=len(P.universe),
        fibers=len(M.universe),
        with_s=P.with_s,
    )


def to_jsonable(obj: Any) -> Any:
    """Plain JSON data for reports: formulas print, sets sort, structures dump."""
    if isinstance(obj, Formula):
        return str(obj)
    if isinstance(obj, ProductStructure):
        from ..app.files import product_to_dict

        return product_to_dict(obj)
    if isinstance(obj, Structure):
        from ..app.files import structure_to_dict

        return structure_to_dict(obj)
    if is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj) if f.init}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return sorted((to_jsonable(v) for v in obj), key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def dumps_report(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), ensure_ascii=False, indent=2, sort_keys=True)


def format_report_text(report: ValidationReport | Verdict, title: str = "fmtbench Report") -> str:
    lines: List[str] = []
    lines.append(title)
    lines.append("-" * 32)
    lines.append(f"Overall: {'PASS' if report.passed else 'FAIL'}")
    if isinstance(report, Verdict):
        lines.append(f"{report.label}: {report.message}")
        for key, value in sorted((report.metrics or {}).items()):
            lines.append(f"  {key}: {json.dumps(to_jsonable(value), ensure_ascii=False)}")
        if report.witness is not None:
            lines.append(f"  witness: {json.dumps(to_jsonable(report.witness), ensure_ascii=False, sort_keys=True)}")
    else:
        lines.append(f"{report.size} elements over {report.fibers} fibers" + (", s-expanded" if report.with_s else ""))
    lines.append("")
    for r in report.results:
        mark = "✅" if r.passed else "❌"
        lines.append(f"{mark} {r.rule_id}: {r.message}")
    return "\n".join(lines)
