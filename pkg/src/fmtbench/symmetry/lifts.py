from __future__ import annotations

from typing import Mapping, Union

from ..core.errors import ContractError
from ..core.structures import StructureMap, check_isomorphism
from ..products.product import ProductStructure, compose_element, decompose_element


def _as_map(P: ProductStructure, sigma: Union[StructureMap, Mapping[str, str]], structure) -> StructureMap:
    if isinstance(sigma, StructureMap):
        return sigma
    return StructureMap.from_dict(structure, structure, dict(sigma), kind="isomorphism")


def lift_automorphism(P: ProductStructure, sigma: Union[StructureMap, Mapping[str, str]]) -> StructureMap:
    """(a|b) -> (sigma(a)|b), an automorphism of the constant-fiber product."""
    if not P.is_constant_fiber:
        raise ContractError("automorphism lifts need a constant-fiber product")
    base_map = _as_map(P, sigma, P.base)
    if base_map.source != P.base or base_map.target != P.base or not check_isomorphism(base_map):
        raise ContractError("sigma is not an automorphism of the base")
    d = base_map.as_dict()
    mapping = {}
    for e in P.universe:
        a, b = decompose_element(P, e)
        mapping[e] = compose_element(P, d[a], b)
    lifted = StructureMap.from_dict(P.structure, P.structure, mapping, kind="isomorphism")
    if not check_isomorphism(lifted):
        raise AssertionError("lifted map is not an automorphism of the product")
    return lifted


def fiber_isomorphism_from_automorphism(
    P: ProductStructure,
    tau: Union[StructureMap, Mapping[str, str]],
    e: str,
) -> StructureMap:
    """
    The isomorphism N_a1 -> N_a2 that tau induces on the s-class of e.

    tau must be an automorphism of the s-expanded product; it maps the fiber
    of e onto a single fiber.
    """
    if not P.with_s:
        raise ContractError("fiber isomorphisms are read off s-expanded products")
    tau_map = _as_map(P, tau, P.structure)
    if tau_map.source != P.structure or not check_isomorphism(tau_map):
        raise ContractError("tau is not an automorphism of the product")
    t = tau_map.as_dict()
    a1, _ = decompose_element(P, e)
    a2, _ = decompose_element(P, t[e])
    mapping = {}
    for b in P.fiber(a1).universe:
        image_a, image_b = decompose_element(P, t[compose_element(P, a1, b)])
        if image_a != a2:
            raise AssertionError("automorphism splits an s-class across fibers")
        mapping[b] = image_b
    f = StructureMap.from_dict(P.fiber(a1), P.fiber(a2), mapping, kind="isomorphism")
    if not f.is_bijective() or not check_isomorphism(f):
        raise AssertionError("induced fiber map is not an isomorphism")
    return f
