"""
Brute-force quantifier elimination for a finite family of structures.

Given a primitive existential formula, the oracle computes its extension in
every scope structure. When some quantifier-free formula over the original
signature has that extension everywhere, a short one is returned; otherwise a
fresh relation symbol is added to all scope structures and its atom returned.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..core.errors import ContractError, PreconditionError
from ..core.models import WorkbenchParams, resolve_params
from ..core.structures import Structure
from ..logic.formula import FALSE, TRUE, And, Atom, Equal, Exists, Formula, Not, Or, conj, disj, is_literal
from ..logic.semantics import atomic_literals, extension
from .morley import MorleyContext

logger = logging.getLogger(__name__)


def primitive_parts(phi: Formula) -> tuple[str, list[Formula]]:
    """(w, literals) of a formula E w. l1 & ... & lk."""
    if not isinstance(phi, Exists):
        raise ContractError(f"not an existential formula: {phi}")
    body = phi.body
    items = list(body.items) if isinstance(body, And) else [body]
    if not all(is_literal(item) for item in items):
        raise ContractError(f"body of {phi} is not a conjunction of literals")
    return phi.var, items


def _table(structures: Sequence[Structure], literals: Sequence[Formula], variables: tuple[str, ...]) -> np.ndarray:
    """Rows are tuples of all scope structures, columns candidate literals."""
    blocks = []
    for S in structures:
        cols = [extension(S, lit, variables).reshape(-1) for lit in literals]
        blocks.append(np.stack(cols, axis=1) if cols else np.zeros((len(S.universe) ** len(variables), 0), dtype=bool))
    return np.concatenate(blocks, axis=0)


def minimal_cover(types: np.ndarray, values: np.ndarray, literals: Sequence[Formula], limit: int) -> Optional[Formula]:
    """
    A disjunction of literal conjunctions that is true on exactly the rows
    marked in `values`, or None if the rows do not determine `values` or the
    answer needs more than `limit` disjuncts.

    `types` is a boolean table (rows x literals). Each true row's conjunction
    is shrunk greedily while it still excludes every false row; the negated
    form is tried too and the shorter answer wins.
    """
    classes: dict[bytes, bool] = {}
    rows: dict[bytes, np.ndarray] = {}
    for row, value in zip(types, values):
        key = row.tobytes()
        if classes.setdefault(key, bool(value)) != bool(value):
            return None
        rows[key] = row
    positive = [rows[k] for k, v in classes.items() if v]
    negative = [rows[k] for k, v in classes.items() if not v]
    if not negative:
        return TRUE
    if not positive:
        return FALSE

    best: Optional[Formula] = None
    for inside, outside, negate in ((positive, negative, False), (negative, positive, True)):
        terms = _cover_terms(inside, outside, len(literals), limit)
        if terms is None:
            continue
        body = disj(conj(literals[i] if sign else Not(literals[i]) for i, sign in term) for term in terms)
        candidate = Not(body) if negate else body
        if best is None or len(terms) < _width(best):
            best = candidate
    return best


def _width(f: Formula) -> int:
    if isinstance(f, Not):
        f = f.body
    return len(f.items) if isinstance(f, Or) else 1


def _cover_terms(inside: list[np.ndarray], outside: list[np.ndarray], width: int, limit: int):
    out = np.array(outside)
    terms: dict[tuple[tuple[int, bool], ...], None] = {}
    for row in inside:
        keep = list(range(width))
        for j in range(width):
            trial = [i for i in keep if i != j]
            if trial:
                clash = np.all(out[:, trial] == row[trial], axis=1).any()
            else:
                clash = True
            if not clash:
                keep = trial
        terms.setdefault(tuple((i, bool(row[i])) for i in keep))
        if len(terms) > limit:
            return None
    return list(terms)


@dataclass
class QEOracle:
    """
    Quantifier elimination on a family of scope structures.

    The scope is held by a MorleyContext; symbols the oracle adds are recorded
    there and interpreted in every scope structure at once. Answers are
    memoized by extension.
    """
    context: MorleyContext
    params: WorkbenchParams = field(default_factory=WorkbenchParams)
    calls: int = 0
    _memo: dict = field(default_factory=dict, repr=False)

    @property
    def structures(self) -> list[Structure]:
        return self.context.structures

    @property
    def extension_log(self) -> list[tuple[str, Formula]]:
        return [(e.symbol, e.formula) for e in self.context.added]

    def pad(self, symbol: str, arity: int) -> None:
        self.context.pad(symbol, arity)

    def eliminate(self, phi: Formula) -> Formula:
        primitive_parts(phi)
        self.calls += 1
        variables = tuple(sorted(phi.free_variables))
        exts = [extension(S, phi, variables) for S in self.structures]
        if not variables:
            values = {bool(e) for e in exts}
            if len(values) > 1:
                raise PreconditionError(f"scope structures disagree on the sentence {phi}", witness=str(phi))
            return TRUE if values.pop() else FALSE
        key = (variables, tuple(e.tobytes() for e in exts))
        if key in self._memo:
            return self._memo[key]
        answer = self._quantifier_free(variables, exts)
        if answer is None:
            symbol = self.context.fresh_symbol()
            self.context.add(symbol, phi, variables, [_tuples(S, e) for S, e in zip(self.structures, exts)])
            logger.debug("added %s/%d for %s", symbol, len(variables), phi)
            answer = Atom(symbol, variables)
        self._memo[key] = answer
        return answer

    def _quantifier_free(self, variables: tuple[str, ...], exts: list[np.ndarray]) -> Optional[Formula]:
        literals = atomic_literals(variables, self.context.base_signature.symbols)
        rows = sum(e.size for e in exts)
        if rows * max(len(literals), 1) > self.params.oracle_candidate_cap:
            return None
        types = _table(self.structures, literals, variables)
        values = np.concatenate([e.reshape(-1) for e in exts])
        found = minimal_cover(types, values, literals, self.params.oracle_max_disjuncts)
        if found is not None and not found.free_variables and len(variables) > 0:
            # keep the free variables visible so the answer has the input's arity
            x = variables[0]
            found = Equal(x, x) if found == TRUE else Not(Equal(x, x))
        return found


def _tuples(S: Structure, ext: np.ndarray) -> list[tuple[str, ...]]:
    return [tuple(S.universe[i] for i in idx) for idx in np.argwhere(ext)]


def brute_force_qe_oracle(
    structures: Sequence[Structure],
    params: Optional[WorkbenchParams] = None,
    prefix: str = "R_phi",
) -> QEOracle:
    structures = list(structures)
    if not structures:
        raise ContractError("an oracle needs at least one scope structure")
    signature = structures[0].signature
    if any(S.signature != signature for S in structures):
        raise ContractError("scope structures must share a signature")
    return QEOracle(MorleyContext(signature, structures, prefix=prefix), resolve_params(params))
