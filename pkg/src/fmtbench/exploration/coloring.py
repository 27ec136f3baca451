from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from ..core.errors import ContractError, InputError
from ..core.models import WorkbenchParams, resolve_params
from ..core.structures import Structure, as_structure
from ..logic.formula import Formula
from ..logic.semantics import extension, require_one_free_variable
from ..products.product import ProductStructure, decompose_element
from ..symmetry.automorphisms import orbits


@dataclass(frozen=True)
class Coloring:
    """A total colouring of a structure's universe by a finite palette."""
    structure: Structure
    colors: Mapping[str, str]
    palette: tuple[str, ...] = ("red", "blue")
    _classes: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        missing = [e for e in self.structure.universe if e not in self.colors]
        if missing:
            raise InputError(f"colouring is not total: no colour for {missing}")
        extra = sorted(set(self.colors) - set(self.structure.universe))
        if extra:
            raise InputError(f"colouring mentions unknown elements {extra}")
        unknown = sorted({c for c in self.colors.values() if c not in self.palette})
        if unknown:
            raise InputError(f"colours {unknown} are not in the palette {list(self.palette)}")
        classes = {c: tuple(e for e in self.structure.universe if self.colors[e] == c) for c in self.palette}
        object.__setattr__(self, "colors", dict(self.colors))
        object.__setattr__(self, "_classes", classes)

    def color(self, element: str) -> str:
        return self.colors[element]

    def class_of(self, color: str) -> tuple[str, ...]:
        return self._classes[color]

    def restrict(self, structure: Structure, rename: Optional[Mapping[str, str]] = None) -> "Coloring":
        """The colouring seen on another structure; `rename` maps its elements to ours."""
        rename = rename or {e: e for e in structure.universe}
        return Coloring(structure, {e: self.colors[rename[e]] for e in structure.universe}, self.palette)


def make_coloring(M, colors: Mapping[str, str], params: Optional[WorkbenchParams] = None) -> Coloring:
    params = resolve_params(params)
    palette = list(params.palette)
    for c in colors.values():
        if c not in palette:
            palette.append(c)
    return Coloring(as_structure(M), dict(colors), tuple(palette))


def monochromatic(M, color: str, params: Optional[WorkbenchParams] = None) -> Coloring:
    M = as_structure(M)
    return make_coloring(M, {e: color for e in M.universe}, params)


def color_by_formula(M, phi: Formula, params: Optional[WorkbenchParams] = None) -> Coloring:
    """Second palette colour (blue) where phi holds, first (red) elsewhere."""
    M = as_structure(M)
    params = resolve_params(params)
    x = require_one_free_variable(phi)
    holds = extension(M, phi, [x])
    red, blue = params.palette[0], params.palette[1]
    return Coloring(M, {e: blue if holds[i] else red for i, e in enumerate(M.universe)}, params.palette)


def staircase_coloring(
    P: ProductStructure,
    fiber_rank: Optional[Mapping[str, int]] = None,
    base_enum: Optional[Sequence[str]] = None,
    params: Optional[WorkbenchParams] = None,
) -> Coloring:
    """
    (x_i|b) is red when fiber_rank(b) <= i, blue otherwise.

    x_i is the i-th base element of `base_enum` (default: universe order);
    the default rank is the index of b's orbit in the fiber, which is the
    position for a chain.
    """
    params = resolve_params(params)
    if not P.with_s or not P.is_constant_fiber:
        raise ContractError("staircase colourings live on constant-fiber s-expanded products")
    N = P.fibers[0][1]
    if fiber_rank is None:
        parts = orbits(N, params)
        fiber_rank = {b: parts.orbit_index(b) for b in N.universe}
    missing = [b for b in N.universe if b not in fiber_rank]
    if missing:
        raise InputError(f"fiber rank is not total: no rank for {missing}")
    if any(int(r) < 0 for r in fiber_rank.values()):
        raise InputError("fiber ranks must be non-negative")
    order = list(base_enum) if base_enum is not None else list(P.base.universe)
    if sorted(order) != sorted(P.base.universe):
        raise InputError("base enumeration must list every base element once")
    position = {a: i for i, a in enumerate(order)}
    red, blue = params.palette[0], params.palette[1]
    colors = {}
    for e in P.universe:
        a, b = decompose_element(P, e)
        colors[e] = red if fiber_rank[b] <= position[a] else blue
    return Coloring(P.structure, colors, params.palette)
