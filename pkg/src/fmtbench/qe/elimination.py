"""
Quantifier elimination over s-expanded products.

One existential over a conjunction of literals is eliminated by fixing the
s-diagram of its variables. Under a fixed diagram every literal is either a
base literal (its variables meet two s-classes) or a fiber literal (all its
variables sit in the class of the quantified variable); the two parts are sent
to the base oracle and the fiber oracle separately and the answers are glued
back together.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from ..core.errors import ContractError, PreconditionError
from ..core.models import WorkbenchParams, resolve_params
from ..core.structures import S_SYMBOL, Signature, Structure
from ..logic.diagrams import EqualityDiagram, SDiagram, enumerate_s_diagrams, resolve_s_literals, tilde
from ..logic.formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Equal,
    Exists,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    Truth,
    check_signature,
    conj,
    disj,
    literal_parts,
    variables_in,
)
from ..logic.normal_forms import dnf_clauses, rename_bound, simplify, simplify_clause, substitute
from ..products.product import ProductStructure
from ..symmetry.automorphisms import transitivity_verdict
from .oracle import QEOracle, primitive_parts

logger = logging.getLogger(__name__)


@dataclass
class EliminationStats:
    diagrams_expanded: int = 0
    clauses: int = 0
    eliminations: int = 0

    def reset(self) -> None:
        self.diagrams_expanded = 0
        self.clauses = 0
        self.eliminations = 0


def split_I1_I2(
    conjuncts: Sequence[Formula],
    diagram: SDiagram,
    w: str,
) -> tuple[list[Formula], list[Formula], list[str], list[str]]:
    """
    Literals whose variables all lie in the s-class of w go to I2, the rest to
    I1. Returns (I1, I2, v1, v2) with v2 the variables of I2 other than w.
    """
    block = set(diagram.block_of(w))
    I1: list[Formula] = []
    I2: list[Formula] = []
    for lit in conjuncts:
        (I2 if lit.free_variables <= block else I1).append(lit)
    v2 = [v for v in variables_in(I2) if v != w]
    v1 = [v for v in diagram.variables if v != w and v not in v2]
    return I1, I2, v1, v2


def transport_base_formula(phi1: Formula, variables: Sequence[str], base: Structure, diagram: EqualityDiagram) -> Formula:
    """
    Move a quantifier-free base formula to the product.

    Every variable is replaced by its block representative; atoms whose
    arguments collapse to one block are decided on a single base element
    (the base is transitive), equalities between representatives are false,
    and the equality diagram is conjoined as an s-diagram.
    """
    if not phi1.is_quantifier_free:
        raise ContractError("only quantifier-free base formulas are transported")
    rep = {v: diagram.representative(v) for v in variables}
    u0 = base.universe[0]

    def walk(g: Formula) -> Formula:
        if isinstance(g, Truth):
            return g
        if isinstance(g, Atom):
            if len(set(g.args)) == 1:
                return Truth(base.holds(g.symbol, (u0,) * len(g.args)))
            return g
        if isinstance(g, Equal):
            return Truth(g.left == g.right)
        if isinstance(g, Not):
            return Not(walk(g.body))
        if isinstance(g, (And, Or)):
            return type(g)(tuple(walk(h) for h in g.items))
        if isinstance(g, Implies):
            return Implies(walk(g.left), walk(g.right))
        raise ContractError(f"unknown formula node {type(g).__name__}")

    body = walk(substitute(phi1, rep))
    return simplify(conj([tilde(diagram.render()), body]))


def _sync(oracle_M: QEOracle, oracle_N: QEOracle) -> None:
    """Symbols added on one side are interpreted as empty on the other."""
    for src, dst in ((oracle_M, oracle_N), (oracle_N, oracle_M)):
        for entry in src.context.added:
            dst.pad(entry.symbol, entry.arity)


def _s_consistent(literals: Sequence[Formula], diagram: SDiagram) -> bool:
    for lit in literals:
        atom, positive = literal_parts(lit)
        if isinstance(atom, Atom) and atom.symbol == S_SYMBOL:
            if diagram.same_block(*atom.args) != positive:
                return False
    return True


def _require_s_product(P: ProductStructure) -> None:
    if not P.with_s:
        raise ContractError("quantifier elimination runs on s-expanded products")


@lru_cache(maxsize=64)
def _transitivity(M: Structure, params: WorkbenchParams):
    return transitivity_verdict(M, params)


def require_transitive_base(P: ProductStructure, params: Optional[WorkbenchParams] = None) -> None:
    verdict = _transitivity(P.base, resolve_params(params))
    if not verdict.passed:
        a, b = verdict.witness["elements"]
        raise PreconditionError(f"base is not transitive: {a} and {b} are not automorphic", witness=(a, b))


def current_signature(P: ProductStructure, oracle_M: QEOracle, oracle_N: QEOracle) -> Signature:
    sig = P.signature
    for oracle in (oracle_M, oracle_N):
        for entry in oracle.context.added:
            if entry.symbol not in sig:
                sig = sig.with_symbol(entry.symbol, entry.arity)
    return sig


def eliminate_exists_over_product(
    P: ProductStructure,
    phi: Formula,
    oracle_M: QEOracle,
    oracle_N: QEOracle,
    params: Optional[WorkbenchParams] = None,
    stats: Optional[EliminationStats] = None,
) -> Formula:
    """Quantifier-free equivalent of E w. (l1 & ... & lk) on the product."""
    _require_s_product(P)
    require_transitive_base(P, params)
    w, items = primitive_parts(phi)
    stats = stats if stats is not None else EliminationStats()
    stats.eliminations += 1
    clause = simplify_clause(items)
    if clause is None:
        return FALSE
    outside = [lit for lit in clause if w not in lit.free_variables]
    inside = [lit for lit in clause if w in lit.free_variables]
    if not inside:
        return simplify(conj(outside))

    variables = [v for v in variables_in(inside) if v != w]
    results: list[Formula] = []
    for D in enumerate_s_diagrams(variables + [w]):
        if not _s_consistent(inside, D):
            continue
        stats.diagrams_expanded += 1
        resolved = simplify_clause(resolve_s_literals(lit, D) for lit in inside)
        if resolved is None:
            continue
        I1, I2, v1, v2 = split_I1_I2(resolved, D, w)
        eq = D.as_equality()
        phi1 = oracle_M.eliminate(Exists(w, conj(eq.literals() + I1)))
        _sync(oracle_M, oracle_N)
        phi2 = oracle_N.eliminate(Exists(w, conj(I2))) if I2 else TRUE
        _sync(oracle_M, oracle_N)
        if phi1 == FALSE or phi2 == FALSE:
            continue
        outer = D.restrict(variables)
        phi1 = transport_base_formula(phi1, variables, oracle_M.structures[0], outer.as_equality())
        results.append(conj([outer.render(), phi1, phi2]))
        logger.debug("diagram %s: I1=%d I2=%d v1=%s v2=%s", [list(b) for b in D.blocks], len(I1), len(I2), v1, v2)
    return simplify(conj(outside + [disj(results)]))


def eliminate_all(
    P: ProductStructure,
    phi: Formula,
    oracle_M: QEOracle,
    oracle_N: QEOracle,
    params: Optional[WorkbenchParams] = None,
    stats: Optional[EliminationStats] = None,
) -> Formula:
    """
    Quantifier-free equivalent of any formula over the product's signature.

    Quantifiers are removed innermost first; a universal is read as a negated
    existential. The product's base must be transitive.
    """
    _require_s_product(P)
    params = resolve_params(params)
    stats = stats if stats is not None else EliminationStats()
    check_signature(phi, current_signature(P, oracle_M, oracle_N))
    require_transitive_base(P, params)

    def exists(w: str, qf: Formula) -> Formula:
        qf = simplify(qf)
        if w not in qf.free_variables:
            return qf
        out: list[Formula] = []
        for D in enumerate_s_diagrams(sorted(qf.free_variables)):
            part = resolve_s_literals(qf, D)
            for clause in dnf_clauses(part, params):
                stats.clauses += 1
                body = conj(list(D.literals()) + list(clause))
                out.append(eliminate_exists_over_product(P, Exists(w, body), oracle_M, oracle_N, params, stats))
        return simplify(disj(out))

    def walk(g: Formula) -> Formula:
        if isinstance(g, (Truth, Atom, Equal)):
            return g
        if isinstance(g, Not):
            return Not(walk(g.body))
        if isinstance(g, (And, Or)):
            return type(g)(tuple(walk(h) for h in g.items))
        if isinstance(g, Implies):
            return Or((Not(walk(g.left)), walk(g.right)))
        if isinstance(g, Exists):
            return exists(g.var, walk(g.body))
        if isinstance(g, Forall):
            return Not(exists(g.var, Not(walk(g.body))))
        raise ContractError(f"unknown formula node {type(g).__name__}")

    result = simplify(walk(rename_bound(phi)))
    logger.debug("eliminated %s -> %s", phi, result)
    return result
