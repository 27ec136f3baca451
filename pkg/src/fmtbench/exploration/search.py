"""
Exhaustive searches for monochromatic copies.

Candidates are subsets of one colour class, enumerated in lexicographic
(universe) order; the first copy passing every filter is returned, otherwise
an exhaustion certificate counting the subsets examined.
"""
from __future__ import annotations

import logging
from itertools import combinations
from typing import Optional

from ..core.errors import ContractError, InputError, ResourceError
from ..core.models import WorkbenchParams, resolve_params
from ..core.structures import StructureMap, are_isomorphic, as_structure, check_isomorphism, find_isomorphism, induced_substructure
from ..products.product import ProductStructure, compose_element, encode_pair, lexicographic_product
from ..symmetry.automorphisms import is_symmetrically_embedded
from ..symmetry.games import k_elementary_substructure
from ..validation.report import RuleResult, Verdict
from .coloring import Coloring

logger = logging.getLogger(__name__)


def find_monochromatic_copy(
    M,
    c: Coloring,
    target,
    require_symmetric: bool = False,
    require_k_elementary: Optional[int] = None,
    params: Optional[WorkbenchParams] = None,
) -> Verdict:
    M, target = as_structure(M), as_structure(target)
    params = resolve_params(params)
    if len(M) > params.search_cap:
        raise ResourceError("search_cap", params.search_cap, f"universe has {len(M)} elements")
    if target.signature != M.signature:
        raise InputError("target must share the structure's signature")
    if c.structure != M:
        raise ContractError("colouring belongs to another structure")

    examined: dict[str, int] = {}
    for color in c.palette:
        examined[color] = 0
        for subset in combinations(c.class_of(color), len(target)):
            examined[color] += 1
            sub = induced_substructure(M, subset)
            if not are_isomorphic(sub, target):
                continue
            if require_symmetric and not is_symmetrically_embedded(sub, M, params).passed:
                continue
            if require_k_elementary is not None and not k_elementary_substructure(sub, M, require_k_elementary, params.tuples, params).passed:
                continue
            return Verdict(
                True,
                "monochromatic copy",
                f"{color} copy found (at truncation |M|={len(M)})",
                witness={"color": color, "elements": list(subset)},
                metrics={"examined": sum(examined.values())},
            )
    logger.debug("search exhausted: %s", examined)
    return Verdict(
        False,
        "exhausted",
        f"no monochromatic copy in any colour (at truncation |M|={len(M)})",
        witness={"examined": examined},
        metrics={"examined": sum(examined.values())},
    )


def product_of_monochromatic_pieces(
    P: ProductStructure,
    c: Coloring,
    fiber_target,
    base_target,
    params: Optional[WorkbenchParams] = None,
) -> Verdict:
    """
    Assemble a monochromatic copy of base_target[fiber_target] from a
    monochromatic fiber_target copy in every fiber and a copy of base_target
    monochromatic for the induced base colouring.
    """
    params = resolve_params(params)
    fiber_target, base_target = as_structure(fiber_target), as_structure(base_target)
    if not P.is_constant_fiber:
        raise ContractError("assembly needs a constant-fiber product")

    pieces: dict[str, tuple[str, list[str]]] = {}
    for a, N in P.fibers:
        local = c.restrict(N, {b: compose_element(P, a, b) for b in N.universe})
        found = find_monochromatic_copy(N, local, fiber_target, params=params)
        if not found.passed:
            return Verdict(False, "no assembly", f"fiber {a} has no monochromatic copy", witness={"stage": "fiber", "base_element": a, "search": found.witness})
        pieces[a] = (found.witness["color"], found.witness["elements"])

    induced = Coloring(P.base, {a: pieces[a][0] for a in P.base.universe}, c.palette)
    base_found = find_monochromatic_copy(P.base, induced, base_target, params=params)
    if not base_found.passed:
        return Verdict(False, "no assembly", "the induced base colouring has no monochromatic copy", witness={"stage": "base", "search": base_found.witness})
    color = base_found.witness["color"]
    base_part = base_found.witness["elements"]

    f = find_isomorphism(induced_substructure(P.base, base_part), base_target)
    target = lexicographic_product(base_target, fiber_target, with_s=P.with_s)
    mapping: dict[str, str] = {}
    for a in base_part:
        g = find_isomorphism(induced_substructure(P.fiber(a), pieces[a][1]), fiber_target)
        for b in pieces[a][1]:
            mapping[compose_element(P, a, b)] = encode_pair(f(a), g(b))
    assembled = induced_substructure(P.structure, mapping)
    F = StructureMap.from_dict(assembled, target.structure, mapping, kind="isomorphism")
    verified = check_isomorphism(F)
    return Verdict(
        verified,
        "assembled" if verified else "assembly not isomorphic",
        f"{color} copy of the product target assembled from {len(base_part)} fibers",
        witness={"color": color, "elements": list(assembled.universe), "map": mapping},
        metrics={"size": len(assembled)},
        results=[RuleResult("F-map", verified, "F is an isomorphism onto the target product" if verified else "F is not an isomorphism")],
    )


def assemble_elementary_copy(
    P: ProductStructure,
    c: Coloring,
    fiber_target,
    base_target,
    k: int,
    t: int,
    params: Optional[WorkbenchParams] = None,
) -> Verdict:
    """The assembled monochromatic copy, then its k-elementarity inside P."""
    assembly = product_of_monochromatic_pieces(P, c, fiber_target, base_target, params)
    if not assembly.passed:
        return assembly
    sub = induced_substructure(P.structure, assembly.witness["elements"])
    elementary = k_elementary_substructure(sub, P.structure, k, t, params)
    results = assembly.results + [RuleResult("k-elementary", elementary.passed, elementary.message, metrics=elementary.metrics or {})]
    return Verdict(
        elementary.passed,
        "elementary copy" if elementary.passed else "copy not k-elementary",
        f"rank {k}, tuples <= {t}",
        witness={**assembly.witness, "spoiler": elementary.witness},
        metrics=assembly.metrics,
        results=results,
    )
