from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as cartesian
from typing import Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

from .errors import ContractError, InputError

S_SYMBOL = "s"

MAP_KINDS = ("partial-isomorphism", "embedding", "isomorphism", "k-elementary")


@dataclass(frozen=True)
class Signature:
    """
    Relation symbols with their arities, kept sorted by name.

    The binary symbol "s" is reserved for product expansions; `has_s` mirrors
    whether it is present.
    """
    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        names = [name for name, _ in self.symbols]
        if len(set(names)) != len(names):
            raise InputError(f"duplicate relation symbol in {names}")
        for name, arity in self.symbols:
            if not name or name == "=":
                raise InputError(f"invalid relation symbol name {name!r}")
            if int(arity) < 1:
                raise InputError(f"symbol {name!r} has arity {arity}; arities must be >= 1")
            if name == S_SYMBOL and arity != 2:
                raise InputError("the symbol 's' is reserved and must be binary")
        object.__setattr__(self, "symbols", tuple(sorted((n, int(a)) for n, a in self.symbols)))

    @classmethod
    def of(cls, symbols: Mapping[str, int]) -> "Signature":
        return cls(tuple(symbols.items()))

    @property
    def has_s(self) -> bool:
        return S_SYMBOL in self.names

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.symbols)

    def arity(self, name: str) -> int:
        for n, a in self.symbols:
            if n == name:
                return a
        raise InputError(f"unknown relation symbol {name!r}")

    def __contains__(self, name: object) -> bool:
        return name in self.names

    def as_dict(self) -> dict[str, int]:
        return dict(self.symbols)

    def with_symbol(self, name: str, arity: int) -> "Signature":
        if name in self:
            raise InputError(f"symbol {name!r} already present")
        return Signature(self.symbols + ((name, arity),))

    def with_s(self) -> "Signature":
        return self if self.has_s else self.with_symbol(S_SYMBOL, 2)

    def without_s(self) -> "Signature":
        return Signature(tuple(item for item in self.symbols if item[0] != S_SYMBOL))

    def restrict(self, names: Iterable[str]) -> "Signature":
        wanted = set(names)
        for name in wanted:
            self.arity(name)
        return Signature(tuple(item for item in self.symbols if item[0] in wanted))


@dataclass(frozen=True)
class Structure:
    """
    A finite relational structure.

    The universe is an ordered tuple of opaque string identifiers; that order
    drives every deterministic enumeration. Relations are stored per symbol as
    frozensets of element tuples.
    """
    signature: Signature
    universe: tuple[str, ...]
    relations: Mapping[str, frozenset[tuple[str, ...]]]
    index: Mapping[str, int] = field(init=False, repr=False, compare=False)
    _arrays: dict = field(init=False, repr=False, compare=False, default_factory=dict)

    def __post_init__(self) -> None:
        universe = tuple(str(e) for e in self.universe)
        if not universe:
            raise InputError("structures must have a nonempty universe")
        if len(set(universe)) != len(universe):
            raise InputError("universe contains duplicate element identifiers")
        index = {e: i for i, e in enumerate(universe)}
        rels: dict[str, frozenset[tuple[str, ...]]] = {}
        for name in self.relations:
            if name not in self.signature:
                raise InputError(f"relation {name!r} is not in the signature")
        for name, arity in self.signature.symbols:
            tuples = set()
            for t in self.relations.get(name, ()):
                t = tuple(str(x) for x in t)
                if len(t) != arity:
                    raise InputError(f"tuple {t} of {name!r} has length {len(t)}, expected {arity}")
                for x in t:
                    if x not in index:
                        raise InputError(f"unknown element {x!r} in relation {name!r}")
                tuples.add(t)
            rels[name] = frozenset(tuples)
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "index", index)

    def __hash__(self) -> int:
        return hash((self.signature, self.universe, tuple(sorted(self.relations.items(), key=lambda kv: kv[0]))))

    def __len__(self) -> int:
        return len(self.universe)

    def __contains__(self, element: object) -> bool:
        return element in self.index

    def rel(self, name: str) -> frozenset[tuple[str, ...]]:
        if name not in self.relations:
            raise InputError(f"unknown relation symbol {name!r}")
        return self.relations[name]

    def holds(self, name: str, t: Sequence[str]) -> bool:
        return tuple(t) in self.rel(name)

    def relation_array(self, name: str) -> np.ndarray:
        """Boolean tensor of shape (n,)*arity, cached per symbol."""
        cached = self._arrays.get(name)
        if cached is None:
            arity = self.signature.arity(name)
            cached = np.zeros((len(self.universe),) * arity, dtype=bool)
            for t in self.relations[name]:
                cached[tuple(self.index[x] for x in t)] = True
            cached.setflags(write=False)
            self._arrays[name] = cached
        return cached

    def require(self, elements: Iterable[str]) -> None:
        for e in elements:
            if e not in self.index:
                raise InputError(f"unknown element {e!r}")

    def expand(self, name: str, arity: int, tuples: Iterable[Sequence[str]]) -> "Structure":
        """A copy over the signature extended by `name`, interpreted by `tuples`."""
        rels = dict(self.relations)
        rels[name] = frozenset(tuple(t) for t in tuples)
        return Structure(self.signature.with_symbol(name, arity), self.universe, rels)


def make_structure(
    symbols: Mapping[str, int],
    universe: Iterable[object],
    relations: Mapping[str, Iterable[Sequence[object]]] | None = None,
) -> Structure:
    rels = {name: frozenset(tuple(str(x) for x in t) for t in ts) for name, ts in (relations or {}).items()}
    return Structure(Signature.of(symbols), tuple(str(e) for e in universe), rels)


def as_structure(obj) -> Structure:
    """Accept a Structure or anything carrying one (products)."""
    inner = getattr(obj, "structure", None)
    return inner if isinstance(inner, Structure) else obj


@dataclass(frozen=True)
class StructureMap:
    """
    An injective total map between universes.

    `kind` records what the map is meant to be; it is never trusted, every
    kind has a checking operation.
    """
    source: Structure
    target: Structure
    mapping: tuple[tuple[str, str], ...]
    kind: str = "partial-isomorphism"
    k: Optional[int] = None

    def __post_init__(self) -> None:
        pairs = dict(self.mapping)
        if len(pairs) != len(self.mapping):
            raise ContractError("map assigns one element twice")
        if set(pairs) != set(self.source.universe):
            raise ContractError("map must be total on the source universe")
        for x, y in pairs.items():
            if y not in self.target.index:
                raise ContractError(f"image {y!r} of {x!r} is not in the target")
        if len(set(pairs.values())) != len(pairs):
            raise ContractError("map is not injective")
        if self.kind not in MAP_KINDS:
            raise ContractError(f"unknown map kind {self.kind!r}")
        ordered = tuple((x, pairs[x]) for x in self.source.universe)
        object.__setattr__(self, "mapping", ordered)

    @classmethod
    def from_dict(cls, source: Structure, target: Structure, mapping: Mapping[str, str], kind: str = "partial-isomorphism", k: Optional[int] = None) -> "StructureMap":
        return cls(source, target, tuple(mapping.items()), kind, k)

    def as_dict(self) -> dict[str, str]:
        return dict(self.mapping)

    def __call__(self, element: str) -> str:
        return self.as_dict()[element]

    def apply(self, t: Sequence[str]) -> tuple[str, ...]:
        d = self.as_dict()
        return tuple(d[x] for x in t)

    def is_bijective(self) -> bool:
        return len(self.mapping) == len(self.target.universe)


def induced_substructure(M: Structure, subset: Iterable[str]) -> Structure:
    wanted = set(subset)
    M.require(sorted(wanted))
    universe = tuple(e for e in M.universe if e in wanted)
    rels = {name: frozenset(t for t in ts if all(x in wanted for x in t)) for name, ts in M.relations.items()}
    return Structure(M.signature, universe, rels)


def language_reduct(M: Structure, symbols: Iterable[str]) -> Structure:
    sig = M.signature.restrict(symbols)
    return Structure(sig, M.universe, {name: M.relations[name] for name in sig.names})


def relabel(M: Structure, mapping: Mapping[str, str]) -> Structure:
    """Isomorphic copy of M with elements renamed through `mapping`."""
    M.require(mapping)
    if set(mapping) != set(M.universe):
        raise InputError("relabel mapping must cover the universe")
    if len(set(mapping.values())) != len(mapping):
        raise InputError("relabel mapping must be injective")
    rels = {name: frozenset(tuple(mapping[x] for x in t) for t in ts) for name, ts in M.relations.items()}
    return Structure(M.signature, tuple(mapping[e] for e in M.universe), rels)


def compose_maps(f: StructureMap, g: StructureMap) -> StructureMap:
    """g after f."""
    if f.target.universe != g.source.universe:
        raise ContractError("maps are not composable")
    gd = g.as_dict()
    return StructureMap(f.source, g.target, tuple((x, gd[y]) for x, y in f.mapping), kind=f.kind)


def _preserves(f: StructureMap, names: Iterable[str]) -> bool:
    d = f.as_dict()
    image = set(d.values())
    for name in names:
        src = f.source.rel(name)
        mapped = {tuple(d[x] for x in t) for t in src}
        restricted = {t for t in f.target.rel(name) if all(x in image for x in t)}
        if mapped != restricted:
            return False
    return True


def check_isomorphism(f: StructureMap) -> bool:
    if not f.is_bijective():
        raise ContractError("isomorphism check needs a bijective map")
    if f.source.signature != f.target.signature:
        return False
    return _preserves(f, f.source.signature.names)


def check_embedding(f: StructureMap) -> bool:
    """Embedding check over the source's signature; the target may carry extra symbols."""
    for name, arity in f.source.signature.symbols:
        if name not in f.target.signature or f.target.signature.arity(name) != arity:
            return False
    return _preserves(f, f.source.signature.names)


@lru_cache(maxsize=None)
def _new_tuples(position: int, arity: int) -> tuple[tuple[int, ...], ...]:
    # index tuples over 0..position that mention `position`
    return tuple(t for t in cartesian(range(position + 1), repeat=arity) if position in t)


def iter_embeddings(
    N: Structure,
    M: Structure,
    fixed: Optional[Mapping[str, str]] = None,
    symbols: Optional[Sequence[str]] = None,
) -> Iterator[dict[str, str]]:
    """
    Backtracking over N's universe order; candidates in M's universe order.

    Each new assignment is checked against every atomic tuple it completes,
    so every yielded map is an embedding over `symbols` (default: N's signature).
    """
    names = list(symbols) if symbols is not None else list(N.signature.names)
    fixed = dict(fixed or {})
    N.require(fixed)
    M.require(fixed.values())
    arrays = [(N.relation_array(r), M.relation_array(r), N.signature.arity(r)) for r in names]
    n = len(N.universe)
    image: list[int] = []
    used: set[int] = set()

    def consistent(pos: int) -> bool:
        for rn, rm, arity in arrays:
            for t in _new_tuples(pos, arity):
                if rn[t] != rm[tuple(image[i] for i in t)]:
                    return False
        return True

    def extend(pos: int) -> Iterator[dict[str, str]]:
        if pos == n:
            yield {N.universe[i]: M.universe[j] for i, j in enumerate(image)}
            return
        forced = fixed.get(N.universe[pos])
        candidates = [M.index[forced]] if forced is not None else range(len(M.universe))
        for j in candidates:
            if j in used:
                continue
            image.append(j)
            used.add(j)
            if consistent(pos):
                yield from extend(pos + 1)
            image.pop()
            used.discard(j)

    if len(set(fixed.values())) != len(fixed):
        return
    yield from extend(0)


def find_embeddings(N: Structure, M: Structure, limit: Optional[int] = None) -> list[StructureMap]:
    if N.signature != M.signature:
        raise InputError("find_embeddings needs equal signatures")
    found: list[StructureMap] = []
    for mapping in iter_embeddings(N, M):
        found.append(StructureMap.from_dict(N, M, mapping, kind="embedding"))
        if limit is not None and len(found) >= limit:
            break
    return found


def find_isomorphism(A: Structure, B: Structure) -> Optional[StructureMap]:
    if A.signature != B.signature or len(A) != len(B):
        return None
    for mapping in iter_embeddings(A, B):
        return StructureMap.from_dict(A, B, mapping, kind="isomorphism")
    return None


def are_isomorphic(A: Structure, B: Structure) -> bool:
    return find_isomorphism(A, B) is not None
