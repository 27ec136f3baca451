"""
One-variable quantifier elimination failures.

A quantifier-free formula in one variable x only sees the atomic type of x,
so phi(x) has a quantifier-free equivalent exactly when it is constant on
every atomic 1-type class.
"""
from __future__ import annotations

import numpy as np

from ..logic.formula import Equal, Formula, Not
from ..logic.normal_forms import simplify
from ..logic.semantics import atomic_literals, extension, require_one_free_variable
from ..products.product import ProductStructure
from ..validation.report import Verdict
from .oracle import minimal_cover


def qe_failure_witness(P, phi: Formula) -> Verdict:
    """
    passed=True with the matching quantifier-free formula, or passed=False
    with two elements that phi separates and no quantifier-free one-variable
    formula does.
    """
    M = P.structure if isinstance(P, ProductStructure) else P
    x = require_one_free_variable(phi)
    literals = atomic_literals([x], M.signature.symbols)
    values = extension(M, phi, [x])
    table = np.stack([extension(M, lit, [x]) for lit in literals], axis=1) if literals else np.zeros((len(M), 0), dtype=bool)
    metrics = {"elements": len(M), "types": len({row.tobytes() for row in table})}

    seen: dict[bytes, int] = {}
    for i, row in enumerate(table):
        key = row.tobytes()
        j = seen.setdefault(key, i)
        if bool(values[j]) != bool(values[i]):
            a, b = (M.universe[j], M.universe[i]) if values[j] else (M.universe[i], M.universe[j])
            return Verdict(
                False,
                "no quantifier-free equivalent",
                f"{phi} holds at {a} but not at {b}, which share their atomic type",
                witness={"elements": [a, b], "type": [str(lit if row[k] else Not(lit)) for k, lit in enumerate(literals)]},
                metrics=metrics,
            )

    found = minimal_cover(table, values, literals, limit=len(table))
    found = simplify(found)
    if not found.free_variables:
        found = Equal(x, x) if found.value else Not(Equal(x, x))
    return Verdict(True, "quantifier-free equivalent", f"{phi} is equivalent to {found}", witness={"formula": str(found)}, metrics=metrics)
