from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable


@dataclass(frozen=True)
class RuleResult:
    """
    One named rule of a check.

    `metrics` carries what backs the outcome: counts, a violating tuple, or
    the first few violations of a product clause.
    """
    rule_id: str
    passed: bool
    message: str
    metrics: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_violations(cls, rule_id: str, violations: Iterable[Any], ok: str, failed: str, shown: int = 5) -> "RuleResult":
        """`failed` may use {count}; only the first `shown` violations are kept."""
        found = list(violations)
        if not found:
            return cls(rule_id, True, ok, {"violations": []})
        return cls(rule_id, False, failed.format(count=len(found)), {"violations": found[:shown], "count": len(found)})


@dataclass(frozen=True)
class Verdict:
    """
    Outcome of a check or search.

    `witness` carries the data backing the outcome (a violating tuple, a
    non-extendable automorphism, a spoiler line, a monochromatic subset);
    `results` holds per-rule outcomes when the check is rule based.
    """
    passed: bool
    label: str
    message: str
    witness: Any = None
    metrics: dict[str, Any] | None = None
    results: list[RuleResult] = field(default_factory=list)


@dataclass(frozen=True)
class ValidationReport:
    """Rule-by-rule re-check of a product against its defining clauses."""
    passed: bool
    results: list[RuleResult]
    size: int = 0
    fibers: int = 0
    with_s: bool = True

    @property
    def failed_rules(self) -> list[str]:
        return [r.rule_id for r in self.results if not r.passed]

    def rule(self, rule_id: str) -> RuleResult:
        for r in self.results:
            if r.rule_id == rule_id:
                return r
        raise KeyError(rule_id)
