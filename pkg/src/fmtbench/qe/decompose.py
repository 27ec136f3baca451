from __future__ import annotations

import logging
from typing import Optional

from ..core.errors import ContractError
from ..core.models import WorkbenchParams, resolve_params
from ..logic.diagrams import enumerate_s_diagrams, resolve_s_literals
from ..logic.formula import Formula, conj
from ..logic.normal_forms import dnf_clauses, simplify
from ..logic.semantics import extension
from ..products.product import ProductStructure
from .session import BASE, FIBER, EliminationSession

logger = logging.getLogger(__name__)


def decompose_product_formula(
    P: ProductStructure,
    phi: Formula,
    params: Optional[WorkbenchParams] = None,
    session: Optional[EliminationSession] = None,
) -> list[tuple[Formula, Formula]]:
    """
    Pairs (phi1, phi2) of base-signature formulas with

        P |= phi((a1|b1), ..., (ak|bk))  iff  some pair has M |= phi1(a) and N |= phi2(b)

    over the free variables of phi in sorted order. Pairs with an empty side
    are dropped.
    """
    params = resolve_params(params)
    if not P.is_constant_fiber:
        raise ContractError("decomposition needs a constant-fiber product")
    session = session if session is not None else EliminationSession(P, params)
    psi = session.eliminate(phi)
    variables = sorted(phi.free_variables)
    M, N = P.base, P.fibers[0][1]

    pairs: dict[tuple[Formula, Formula], None] = {}
    for D in enumerate_s_diagrams(variables):
        part = resolve_s_literals(psi, D)
        for clause in dnf_clauses(part, params):
            fiber_side = [lit for lit in clause if len({D.representative(v) for v in lit.free_variables}) <= 1]
            base_side = D.as_equality().literals() + [lit for lit in clause if lit not in fiber_side]
            phi1 = simplify(session.unfold(conj(base_side), BASE))
            phi2 = simplify(session.unfold(conj(fiber_side), FIBER))
            if not extension(M, phi1, variables).any() or not extension(N, phi2, variables).any():
                continue
            pairs.setdefault((phi1, phi2))
    logger.debug("%s decomposes into %d pairs", phi, len(pairs))
    return list(pairs)
