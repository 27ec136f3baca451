"""
Lexicographic and generalized products of relational structures.

Product elements are strings "(a|b)"; "\\" and "|" inside a and b are
escaped with a backslash so the first unescaped "|" splits the pair.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Iterable, Mapping, Optional, Sequence

import networkx as nx

from ..core.errors import ContractError, InputError
from ..core.structures import S_SYMBOL, Structure, StructureMap

logger = logging.getLogger(__name__)


def _escape(raw: str) -> str:
    return raw.replace("\\", "\\\\").replace("|", "\\|")


def _unescape(text: str) -> str:
    out = []
    it = iter(text)
    for ch in it:
        out.append(next(it, "") if ch == "\\" else ch)
    return "".join(out)


def encode_pair(a: str, b: str) -> str:
    return f"({_escape(a)}|{_escape(b)})"


def decode_pair(element: str) -> tuple[str, str]:
    if not (element.startswith("(") and element.endswith(")")):
        raise ContractError(f"{element!r} is not a pair identifier")
    body = element[1:-1]
    i = 0
    while i < len(body):
        if body[i] == "\\":
            i += 2
            continue
        if body[i] == "|":
            return _unescape(body[:i]), _unescape(body[i + 1:])
        i += 1
    raise ContractError(f"{element!r} is not a pair identifier")


@dataclass(frozen=True)
class ProductStructure:
    """
    A product M[N_a]_{a in M}, optionally expanded by s.

    `structure` is an ordinary Structure, so every other module works on it
    unchanged; `base` and `fibers` keep the decomposition one level deep.
    """
    structure: Structure
    base: Structure
    fibers: tuple[tuple[str, Structure], ...]
    with_s: bool
    pairs: Mapping[str, tuple[str, str]] = field(init=False, repr=False, compare=False)
    elements: Mapping[tuple[str, str], str] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        pairs: dict[str, tuple[str, str]] = {}
        for a, N in self.fibers:
            for b in N.universe:
                pairs[encode_pair(a, b)] = (a, b)
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "elements", {ab: e for e, ab in pairs.items()})

    def __hash__(self) -> int:
        return hash((self.structure, self.with_s))

    @property
    def universe(self) -> tuple[str, ...]:
        return self.structure.universe

    @property
    def signature(self):
        return self.structure.signature

    def __len__(self) -> int:
        return len(self.structure)

    def fiber(self, a: str) -> Structure:
        for key, N in self.fibers:
            if key == a:
                return N
        raise InputError(f"{a!r} is not a base element")

    @property
    def fiber_map(self) -> dict[str, Structure]:
        return dict(self.fibers)

    @property
    def is_constant_fiber(self) -> bool:
        first = self.fibers[0][1]
        return all(N == first for _, N in self.fibers)

    def fiber_elements(self, a: str) -> tuple[str, ...]:
        return tuple(encode_pair(a, b) for b in self.fiber(a).universe)


def _check_factor(X: Structure, role: str) -> None:
    if X.signature.has_s:
        raise InputError(f"{role} already uses the reserved symbol 's'")


def generalized_product(M: Structure, fibers: Mapping[str, Structure], with_s: bool = True) -> ProductStructure:
    _check_factor(M, "base")
    missing = [a for a in M.universe if a not in fibers]
    if missing:
        raise InputError(f"no fiber given for base element(s) {missing}")
    extra = sorted(set(fibers) - set(M.universe))
    if extra:
        raise InputError(f"fibers given for unknown base element(s) {extra}")
    for a in M.universe:
        _check_factor(fibers[a], f"fiber {a!r}")
        if fibers[a].signature != M.signature:
            raise InputError(f"fiber {a!r} has signature {fibers[a].signature.as_dict()}, base has {M.signature.as_dict()}")

    universe = [encode_pair(a, b) for a in M.universe for b in fibers[a].universe]
    relations: dict[str, set[tuple[str, ...]]] = {}
    for name, arity in M.signature.symbols:
        tuples: set[tuple[str, ...]] = set()
        for a in M.universe:
            for t in fibers[a].rel(name):
                tuples.add(tuple(encode_pair(a, b) for b in t))
        for t in M.rel(name):
            if len(set(t)) < 2:
                continue
            for bs in cartesian(*(fibers[a].universe for a in t)):
                tuples.add(tuple(encode_pair(a, b) for a, b in zip(t, bs)))
        relations[name] = tuples
    signature = M.signature
    if with_s:
        signature = signature.with_s()
        relations[S_SYMBOL] = {
            (encode_pair(a, b1), encode_pair(a, b2))
            for a in M.universe
            for b1 in fibers[a].universe
            for b2 in fibers[a].universe
        }
    structure = Structure(signature, tuple(universe), {k: frozenset(v) for k, v in relations.items()})
    logger.debug("built product with %d elements over %d base elements", len(universe), len(M))
    return ProductStructure(structure, M, tuple((a, fibers[a]) for a in M.universe), with_s)


def lexicographic_product(M: Structure, N: Structure, with_s: bool = True) -> ProductStructure:
    return generalized_product(M, {a: N for a in M.universe}, with_s)


def decompose_element(P: ProductStructure, e: str) -> tuple[str, str]:
    try:
        return P.pairs[e]
    except KeyError:
        raise ContractError(f"{e!r} is not an element of this product") from None


def compose_element(P: ProductStructure, a: str, b: str) -> str:
    try:
        return P.elements[(a, b)]
    except KeyError:
        raise ContractError(f"({a!r}, {b!r}) is not a pair of this product") from None


def fiber_embedding(P: ProductStructure, a: str) -> StructureMap:
    """e_a : N_a -> P, b -> (a|b)."""
    N = P.fiber(a)
    return StructureMap(N, P.structure, tuple((b, encode_pair(a, b)) for b in N.universe), kind="embedding")


def s_classes(P: ProductStructure) -> list[tuple[str, ...]]:
    """Equivalence classes of s, in universe order."""
    if not P.with_s:
        raise ContractError("product has no s relation")
    g = nx.Graph()
    g.add_nodes_from(P.universe)
    g.add_edges_from(P.structure.rel(S_SYMBOL))
    order = P.structure.index
    classes = [tuple(sorted(c, key=order.__getitem__)) for c in nx.connected_components(g)]
    return sorted(classes, key=lambda c: order[c[0]])


def two_fiber_product(
    M: Structure,
    marked: Iterable[str],
    N0: Structure,
    N1: Structure,
    with_s: bool = True,
) -> ProductStructure:
    """N_a = N1 on `marked`, N0 elsewhere."""
    marked = set(marked)
    M.require(sorted(marked))
    return generalized_product(M, {a: (N1 if a in marked else N0) for a in M.universe}, with_s)


def descending_chain_products(
    M: Structure,
    chain: Sequence[Iterable[str]],
    N0: Structure,
    N1: Structure,
    with_s: bool = True,
) -> list[ProductStructure]:
    """One two-fiber product per member of a descending chain of subsets of M."""
    members = [set(c) for c in chain]
    for bigger, smaller in zip(members, members[1:]):
        if not smaller <= bigger:
            raise InputError("chain members must be descending")
    return [two_fiber_product(M, c, N0, N1, with_s) for c in members]


def product_from_parts(
    base: Structure,
    fibers: Mapping[str, Structure],
    with_s: bool,
    expected: Optional[Structure] = None,
) -> ProductStructure:
    P = generalized_product(base, fibers, with_s)
    if expected is not None and expected != P.structure:
        raise InputError("product file does not match its base and fibers")
    return P
