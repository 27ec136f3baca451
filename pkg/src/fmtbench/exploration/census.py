from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Optional

import networkx as nx

from ..core.models import WorkbenchParams
from ..core.structures import are_isomorphic
from ..products.product import ProductStructure, decompose_element, s_classes
from ..symmetry.automorphisms import orbits

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OrbitCensus:
    """
    Orbits of a product and the fiber isomorphism classes they touch.

    fiber_classes[i] lists the base elements whose fibers fall in class i;
    each orbit entry counts its elements per fiber class.
    """
    orbits: list[dict]
    fiber_classes: list[list[str]]
    transitive: bool
    s_classes: Optional[int]
    components: int


def _fiber_classes(P: ProductStructure) -> list[list[str]]:
    classes: list[list[str]] = []
    for a, N in P.fibers:
        for cls in classes:
            if are_isomorphic(P.fiber(cls[0]), N):
                cls.append(a)
                break
        else:
            classes.append([a])
    return classes


def orbit_census(P: ProductStructure, params: Optional[WorkbenchParams] = None) -> OrbitCensus:
    parts = orbits(P.structure, params)
    classes = _fiber_classes(P)
    class_of = {a: i for i, cls in enumerate(classes) for a in cls}
    entries = []
    for block in parts.blocks:
        touched = Counter(class_of[decompose_element(P, e)[0]] for e in block)
        if P.with_s and len(touched) > 1:
            raise AssertionError(f"orbit {list(block)} meets non-isomorphic fibers")
        entries.append({"elements": list(block), "fiber_classes": dict(sorted(touched.items()))})

    # graph view of the binary part of the signature
    g = nx.Graph()
    g.add_nodes_from(P.universe)
    for name, arity in P.base.signature.symbols:
        if arity == 2:
            g.add_edges_from((x, y) for x, y in P.structure.rel(name) if x != y)
    components = nx.number_connected_components(g)

    logger.debug("%d orbits over %d fiber classes", len(entries), len(classes))
    return OrbitCensus(
        orbits=entries,
        fiber_classes=classes,
        transitive=len(entries) == 1,
        s_classes=len(s_classes(P)) if P.with_s else None,
        components=components,
    )
