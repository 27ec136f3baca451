"""
Finite stages of coloured n-hypergraph classes.

Class C: symmetric, irreflexive, pairwise disjoint relations R_1..R_c of
arity n (an n-set carries at most one colour). Class D adds completeness:
every n-set carries exactly one colour.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations, permutations
from itertools import product as cartesian
from typing import Optional, Sequence

import numpy as np

from ..core.errors import InputError, PreconditionError, ResourceError
from ..core.models import WorkbenchParams, resolve_params
from ..core.structures import Signature, Structure, are_isomorphic, as_structure, find_embeddings, induced_substructure
from ..symmetry.games import k_elementary_substructure
from ..validation.report import RuleResult, Verdict

logger = logging.getLogger(__name__)

EXTENSION_VARIANTS = ("A", "A'")


@dataclass(frozen=True)
class HypergraphSpec:
    arity: int
    colors: int
    size: int
    complete: bool = False
    seed: int = 0

    def __post_init__(self) -> None:
        if self.arity < 2:
            raise InputError("hyperedges need arity >= 2")
        if self.colors < 1:
            raise InputError("at least one colour is needed")
        if self.size < 1:
            raise InputError("size must be positive")

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(f"R_{i}" for i in range(1, self.colors + 1))

    @property
    def signature(self) -> Signature:
        return Signature.of({name: self.arity for name in self.symbols})


def _assemble(spec: HypergraphSpec, color_of) -> Structure:
    universe = tuple(str(i) for i in range(spec.size))
    relations: dict[str, set[tuple[str, ...]]] = {name: set() for name in spec.symbols}
    for edge in combinations(range(spec.size), spec.arity):
        color = color_of(edge)
        if color is None:
            continue
        name = spec.symbols[color]
        for perm in permutations(edge):
            relations[name].add(tuple(universe[i] for i in perm))
    return Structure(spec.signature, universe, {k: frozenset(v) for k, v in relations.items()})


def gen_colored_hypergraph(spec: HypergraphSpec) -> Structure:
    """A seeded random member of class D (complete) or class C."""
    rng = np.random.default_rng(spec.seed)
    choices = spec.colors if spec.complete else spec.colors + 1

    def color_of(edge):
        value = int(rng.integers(choices))
        if spec.complete:
            return value
        return None if value == spec.colors else value

    return _assemble(spec, color_of)


def build_stage(spec: HypergraphSpec) -> Structure:
    """
    Deterministic stage: an n-set colours by the sum of its indices, mod c
    for class D and mod c+1 (0 meaning uncoloured) for class C.
    """
    def color_of(edge):
        total = sum(edge)
        if spec.complete:
            return total % spec.colors
        value = total % (spec.colors + 1)
        return None if value == 0 else value - 1

    return _assemble(spec, color_of)


def _first(rule_id: str, message: str, tuples) -> RuleResult:
    for t in tuples:
        return RuleResult(rule_id, False, message, metrics={"tuple": list(t)})
    return RuleResult(rule_id, True, "ok")


def check_class_axioms(M, spec: HypergraphSpec) -> Verdict:
    M = as_structure(M)
    if M.signature != spec.signature:
        raise InputError(f"expected signature {spec.signature.as_dict()}, got {M.signature.as_dict()}")

    def asymmetric():
        for name in spec.symbols:
            rel = M.rel(name)
            for t in sorted(rel):
                for perm in permutations(t):
                    if perm not in rel:
                        yield perm

    def loops():
        for name in spec.symbols:
            for t in sorted(M.rel(name)):
                if len(set(t)) < len(t):
                    yield t

    def overlaps():
        for a, b in combinations(spec.symbols, 2):
            for t in sorted(M.rel(a) & M.rel(b)):
                yield t

    def uncoloured():
        for edge in combinations(M.universe, spec.arity):
            if not any(edge in M.rel(name) for name in spec.symbols):
                yield edge

    results = [
        _first("Symmetry", "a permutation of a coloured tuple is missing", asymmetric()),
        _first("Irreflexivity", "a coloured tuple repeats an element", loops()),
        _first("Disjointness", "a tuple carries two colours", overlaps()),
    ]
    if spec.complete:
        results.append(_first("Completeness", "an n-set carries no colour", uncoloured()))
    failed = next((r for r in results if not r.passed), None)
    if failed is None:
        return Verdict(True, "member", "all class axioms hold", results=results)
    return Verdict(
        False,
        "not a member",
        failed.message,
        witness={"rule": failed.rule_id, "tuple": failed.metrics["tuple"]},
        results=results,
    )


def _edge_color(M: Structure, spec: HypergraphSpec, edge: tuple[str, ...]) -> Optional[str]:
    for name in spec.symbols:
        if edge in M.rel(name):
            return name
    return None


def check_extension_property(
    M,
    spec: HypergraphSpec,
    x_size: int,
    variant: str = "A",
    palette: Optional[Sequence[Optional[str]]] = None,
    params: Optional[WorkbenchParams] = None,
) -> Verdict:
    """
    For every X with |X| <= x_size and every demand on the (n-1)-subsets of X
    there is a vertex v outside X realizing it.

    A demand maps each (n-1)-subset Y to a colour (or None, only for variant
    "A") that the n-set Y + {v} must carry. `palette` restricts demand values.
    """
    M = as_structure(M)
    params = resolve_params(params)
    if variant not in EXTENSION_VARIANTS:
        raise InputError(f"unknown extension variant {variant!r}; expected one of {EXTENSION_VARIANTS}")
    if x_size > len(M):
        raise InputError(f"x_size {x_size} exceeds the universe size {len(M)}")
    values: list[Optional[str]] = list(spec.symbols) + ([None] if variant == "A" else [])
    if palette is not None:
        unknown = [p for p in palette if p not in values]
        if unknown:
            raise InputError(f"demand values {unknown} are not allowed for variant {variant}")
        values = list(palette)

    examined = 0
    order = M.index
    for size in range(1, x_size + 1):
        for X in combinations(M.universe, size):
            faces = list(combinations(X, spec.arity - 1))
            realized = set()
            for v in M.universe:
                if v in X:
                    continue
                realized.add(tuple(
                    _edge_color(M, spec, tuple(sorted(Y + (v,), key=order.__getitem__))) for Y in faces
                ))
            for demand in cartesian(values, repeat=len(faces)):
                examined += 1
                if examined > params.extension_cap:
                    raise ResourceError("extension_cap", params.extension_cap, f"at |X|={size}")
                if demand not in realized:
                    logger.debug("unmet demand over %s", X)
                    return Verdict(
                        False,
                        f"({variant}) fails",
                        f"no vertex outside {list(X)} meets the demand",
                        witness={"X": list(X), "demand": {",".join(Y): d for Y, d in zip(faces, demand)}},
                        metrics={"x_size": x_size, "demands_examined": examined},
                    )
    return Verdict(
        True,
        f"({variant}) holds",
        f"every demand over sets of size <= {x_size} is met (at truncation |M|={len(M)})",
        metrics={"x_size": x_size, "demands_examined": examined},
    )


def check_elementary_pair(M0, M1, k: int, t: int, params: Optional[WorkbenchParams] = None) -> Verdict:
    """
    M0 is a k-elementary substructure of M1 whose age is strictly smaller at
    the sizes up to |M0|: some induced substructure of M1 embeds nowhere in M0.
    """
    M0, M1 = as_structure(M0), as_structure(M1)
    if not set(M0.universe) <= set(M1.universe) or induced_substructure(M1, M0.universe) != M0:
        raise PreconditionError("not an induced substructure of the ambient structure")
    elementary = k_elementary_substructure(M0, M1, k, t, params)
    results = [RuleResult("k-elementary", elementary.passed, elementary.message, metrics=elementary.metrics or {})]

    age_witness = None
    for size in range(1, len(M0) + 1):
        for subset in combinations(M1.universe, size):
            if not find_embeddings(induced_substructure(M1, subset), M0, limit=1):
                age_witness = list(subset)
                break
        if age_witness is not None:
            break
    if age_witness is None:
        results.append(RuleResult("Age", False, "every small substructure of the larger structure embeds in the smaller"))
    else:
        results.append(RuleResult("Age", True, "found a substructure outside the smaller age", metrics={"subset": age_witness}))
    distinct = not are_isomorphic(M0, M1)
    results.append(RuleResult("Non-isomorphic", distinct, "structures differ" if distinct else "structures are isomorphic"))

    passed = all(r.passed for r in results)
    return Verdict(
        passed,
        "elementary pair" if passed else "not an elementary pair",
        f"rank {k}, tuples <= {t}, ages compared up to size {len(M0)}",
        witness={"age": age_witness, "spoiler": elementary.witness},
        metrics={"rank": k, "tuples": t},
        results=results,
    )
