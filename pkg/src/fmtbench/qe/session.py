from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from ..core.models import WorkbenchParams
from ..core.structures import Structure
from ..logic.formula import Formula
from ..logic.semantics import extension
from ..products.product import ProductStructure, generalized_product
from ..validation.report import Verdict
from .elimination import EliminationStats, eliminate_all, require_transitive_base
from .morley import MorleyEntry, unfold_morley
from .oracle import QEOracle, brute_force_qe_oracle

logger = logging.getLogger(__name__)

BASE, FIBER = "base", "fiber"


@dataclass(frozen=True)
class EliminationReport:
    formula: str
    output: str
    morley_symbols: list[dict[str, Any]]
    verdict: Optional[Verdict]
    metrics: dict[str, int]


@dataclass
class EliminationSession:
    """
    Mutable state for eliminating quantifiers over one product.

    The session owns both oracles and therefore every symbol they add; it must
    not be shared between threads. `reset()` drops all added symbols.
    """
    product: ProductStructure
    params: WorkbenchParams = field(default_factory=WorkbenchParams)

    oracle_M: QEOracle = field(init=False)
    oracle_N: QEOracle = field(init=False)
    stats: EliminationStats = field(init=False, default_factory=EliminationStats)
    _fibers: list[Structure] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._fibers = list(dict.fromkeys(N for _, N in self.product.fibers))
        self.reset()

    def reset(self) -> None:
        """Forget every added symbol and zero the counters."""
        self.oracle_M = brute_force_qe_oracle([self.product.base], self.params, prefix="M_phi")
        self.oracle_N = brute_force_qe_oracle(self._fibers, self.params, prefix="N_phi")
        self.stats.reset()

    @property
    def oracle_calls(self) -> int:
        return self.oracle_M.calls + self.oracle_N.calls

    def added(self, side: str) -> list[MorleyEntry]:
        return list((self.oracle_M if side == BASE else self.oracle_N).context.added)

    def eliminate(self, phi: Formula) -> Formula:
        return eliminate_all(self.product, phi, self.oracle_M, self.oracle_N, self.params, self.stats)

    def morleyized_product(self) -> ProductStructure:
        return morleyized_product(self)

    def unfold(self, phi: Formula, side: str) -> Formula:
        """Rewrite Morley atoms of `side` into base-signature formulas; the other side's atoms are empty there."""
        own, other = (self.oracle_M, self.oracle_N) if side == BASE else (self.oracle_N, self.oracle_M)
        defined = {e.symbol: e for e in own.context.added}
        return unfold_morley(phi, defined, foreign=[e.symbol for e in other.context.added])

    def verify(self, phi: Formula, psi: Formula) -> Verdict:
        return verify_elimination(self, phi, psi)

    def report(self, phi: Formula, verify: bool = False) -> EliminationReport:
        psi = self.eliminate(phi)
        verdict = self.verify(phi, psi) if verify else None
        symbols = [
            {"symbol": e.symbol, "side": side, "arity": e.arity, "variables": list(e.variables), "formula": str(e.formula)}
            for side in (BASE, FIBER)
            for e in self.added(side)
        ]
        metrics = {
            "diagrams_expanded": self.stats.diagrams_expanded,
            "clauses": self.stats.clauses,
            "eliminations": self.stats.eliminations,
            "oracle_calls": self.oracle_calls,
        }
        return EliminationReport(str(phi), str(psi), symbols, verdict, metrics)


def morleyized_product(session: EliminationSession) -> ProductStructure:
    """The product of the expanded base and expanded fibers."""
    P = session.product
    base = session.oracle_M.structures[0]
    expanded = dict(zip(session._fibers, session.oracle_N.structures))
    return generalized_product(base, {a: expanded[N] for a, N in P.fibers}, with_s=True)


def verify_elimination(session: EliminationSession, phi: Formula, psi: Formula) -> Verdict:
    """Compare phi on the product with psi on the Morleyized product, for every assignment."""
    P = session.product
    require_transitive_base(P, session.params)
    Q = morleyized_product(session)
    variables = tuple(sorted(phi.free_variables | psi.free_variables))
    left = extension(P.structure, phi, variables)
    right = extension(Q.structure, psi, variables)
    metrics = {"assignments": int(left.size)}
    if not psi.is_quantifier_free:
        return Verdict(False, "not quantifier-free", f"output {psi} still has quantifiers", metrics=metrics)
    if np.array_equal(left, right):
        return Verdict(True, "verified", "input and output agree on every assignment", metrics=metrics)
    idx = tuple(int(i) for i in np.argwhere(left != right)[0]) if variables else ()
    counterexample = {v: P.universe[i] for v, i in zip(variables, idx)}
    logger.debug("elimination mismatch at %s", counterexample)
    return Verdict(
        False,
        "mismatch",
        "input and output differ on an assignment",
        witness={"assignment": counterexample, "input": bool(left[idx]), "output": bool(right[idx])},
        metrics=metrics,
    )
