from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Optional

from networkx.utils import UnionFind
from sympy.combinatorics import Permutation, PermutationGroup

from ..core.errors import PreconditionError, ResourceError
from ..core.models import WorkbenchParams, resolve_params
from ..core.structures import Structure, StructureMap, as_structure, induced_substructure, iter_embeddings
from ..logic.semantics import check_partial_isomorphism
from ..validation.report import Verdict
from .games import ef_game

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AutomorphismSet:
    """
    Automorphisms of `structure`; each member is the tuple of images of the
    universe in universe order.
    """
    structure: Structure
    elements: tuple[tuple[str, ...], ...]

    def __len__(self) -> int:
        return len(self.elements)

    def maps(self) -> list[StructureMap]:
        M = self.structure
        return [StructureMap(M, M, tuple(zip(M.universe, images)), kind="isomorphism") for images in self.elements]

    def as_dicts(self) -> list[dict[str, str]]:
        return [dict(zip(self.structure.universe, images)) for images in self.elements]


@dataclass(frozen=True)
class OrbitPartition:
    structure: Structure
    blocks: tuple[tuple[str, ...], ...]

    def __len__(self) -> int:
        return len(self.blocks)

    def orbit_of(self, element: str) -> tuple[str, ...]:
        for block in self.blocks:
            if element in block:
                return block
        raise KeyError(element)

    def orbit_index(self, element: str) -> int:
        for i, block in enumerate(self.blocks):
            if element in block:
                return i
        raise KeyError(element)


def _require_cap(M: Structure, params: WorkbenchParams) -> None:
    if len(M) > params.automorphism_cap:
        raise ResourceError("automorphism_cap", params.automorphism_cap, f"universe has {len(M)} elements")


@lru_cache(maxsize=128)
def _enumerate(M: Structure) -> tuple[tuple[str, ...], ...]:
    return tuple(tuple(m[e] for e in M.universe) for m in iter_embeddings(M, M))


def automorphisms(M, params: Optional[WorkbenchParams] = None) -> AutomorphismSet:
    M = as_structure(M)
    params = resolve_params(params)
    _require_cap(M, params)
    aut = AutomorphismSet(M, _enumerate(M))
    logger.debug("%d automorphisms on %d elements", len(aut), len(M))
    if not check_automorphism_group(aut):
        raise AssertionError("enumerated automorphisms do not form a group")
    return aut


def check_automorphism_group(aut: AutomorphismSet) -> bool:
    """Identity present, and the set equals the group it generates."""
    M = aut.structure
    if not aut.elements:
        return False
    identity = tuple(M.universe)
    if identity not in aut.elements:
        return False
    perms = [Permutation([M.index[x] for x in images]) for images in aut.elements]
    group = PermutationGroup(perms)
    return group.order() == len(set(aut.elements))


def orbits(M, params: Optional[WorkbenchParams] = None) -> OrbitPartition:
    M = as_structure(M)
    aut = automorphisms(M, params)
    uf = UnionFind(M.universe)
    for images in aut.elements:
        for x, y in zip(M.universe, images):
            uf.union(x, y)
    order = M.index
    blocks = [tuple(sorted(b, key=order.__getitem__)) for b in uf.to_sets()]
    return OrbitPartition(M, tuple(sorted(blocks, key=lambda b: order[b[0]])))


def is_transitive(M, params: Optional[WorkbenchParams] = None) -> bool:
    return len(orbits(M, params)) == 1


def transitivity_verdict(M, params: Optional[WorkbenchParams] = None) -> Verdict:
    M = as_structure(M)
    parts = orbits(M, params)
    if len(parts) == 1:
        return Verdict(True, "transitive", "all elements lie in one orbit", metrics={"orbits": 1})
    a, b = parts.blocks[0][0], parts.blocks[1][0]
    return Verdict(
        False,
        "not transitive",
        f"no automorphism maps {a} to {b}",
        witness={"elements": [a, b]},
        metrics={"orbits": len(parts)},
    )


def extends_to_automorphism(M: Structure, partial: dict[str, str]) -> Optional[dict[str, str]]:
    for full in iter_embeddings(M, M, fixed=partial):
        return full
    return None


def is_symmetrically_embedded(N_sub, M, params: Optional[WorkbenchParams] = None) -> Verdict:
    N_sub, M = as_structure(N_sub), as_structure(M)
    if not set(N_sub.universe) <= set(M.universe) or induced_substructure(M, N_sub.universe) != N_sub:
        raise PreconditionError("not an induced substructure of the ambient structure")
    aut = automorphisms(N_sub, params)
    for sigma in aut.as_dicts():
        if extends_to_automorphism(M, sigma) is None:
            return Verdict(
                False,
                "not symmetrically embedded",
                "an automorphism of the substructure does not extend",
                witness={"automorphism": sigma},
                metrics={"automorphisms": len(aut)},
            )
    return Verdict(True, "symmetrically embedded", "every automorphism extends", metrics={"automorphisms": len(aut)})


def _partial_maps(M: Structure, max_size: int):
    for size in range(1, min(max_size, len(M)) + 1):
        for domain in combinations(M.universe, size):
            for image in permutations(M.universe, size):
                yield dict(zip(domain, image))


def _homogeneity(M: Structure, max_size: int, accept, label: str, params: WorkbenchParams) -> Verdict:
    checked = 0
    for partial in _partial_maps(M, max_size):
        if not accept(partial):
            continue
        checked += 1
        if extends_to_automorphism(M, partial) is None:
            return Verdict(False, f"not {label}", "a partial map does not extend", witness={"map": partial}, metrics={"maps_checked": checked, "max_size": max_size})
    return Verdict(True, label, f"every admissible partial map on at most {max_size} points extends", metrics={"maps_checked": checked, "max_size": max_size})


def is_ultrahomogeneous(M, max_size: int, params: Optional[WorkbenchParams] = None) -> Verdict:
    M = as_structure(M)
    params = resolve_params(params)

    def partial_iso(partial: dict[str, str]) -> bool:
        sub = induced_substructure(M, partial)
        img = induced_substructure(M, partial.values())
        return check_partial_isomorphism(StructureMap.from_dict(sub, img, partial))

    return _homogeneity(M, max_size, partial_iso, "ultrahomogeneous", params)


def is_k_homogeneous(M, k: int, max_size: int, params: Optional[WorkbenchParams] = None) -> Verdict:
    """Every k-elementary partial map on at most `max_size` points extends."""
    M = as_structure(M)
    params = resolve_params(params)

    def k_elementary(partial: dict[str, str]) -> bool:
        return ef_game(M, M, k, tuple(partial), tuple(partial.values()), params).passed

    return _homogeneity(M, max_size, k_elementary, f"{k}-homogeneous", params)
