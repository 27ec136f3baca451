"""
Named small structures used across the workbench and its tests.

Chains, pure sets and cycles use "0".."n-1"; paths use "a", "b", "c", ...;
paper_ab uses "p" and "q1".."qb".
"""
from __future__ import annotations

from itertools import combinations, permutations
from string import ascii_lowercase
from typing import Mapping, Optional

from .errors import InputError
from .structures import Signature, Structure, make_structure

ORDER = {"lt": 2}
GRAPH = {"E": 2}


def _ids(n: int) -> list[str]:
    if n < 1:
        raise InputError("structures need at least one element")
    return [str(i) for i in range(n)]


def chain(n: int) -> Structure:
    ids = _ids(n)
    return make_structure(ORDER, ids, {"lt": [(x, y) for x, y in combinations(ids, 2)]})


def pure_set(n: int, symbols: Optional[Mapping[str, int]] = None) -> Structure:
    return make_structure(symbols or ORDER, _ids(n), {})


def empty_structure(n: int, signature: Signature | Mapping[str, int]) -> Structure:
    sig = signature if isinstance(signature, Signature) else Signature.of(signature)
    return Structure(sig, tuple(_ids(n)), {})


def _letters(n: int) -> list[str]:
    if n < 1:
        raise InputError("structures need at least one element")
    if n <= len(ascii_lowercase):
        return list(ascii_lowercase[:n])
    return [f"v{i}" for i in range(n)]


def path(n: int, directed: bool = False) -> Structure:
    ids = _letters(n)
    edges = list(zip(ids, ids[1:]))
    if not directed:
        edges += [(y, x) for x, y in edges]
    return make_structure(GRAPH, ids, {"E": edges})


def cycle(n: int, directed: bool = True) -> Structure:
    ids = _ids(n)
    edges = [(ids[i], ids[(i + 1) % n]) for i in range(n)] if n > 1 else []
    if not directed:
        edges += [(y, x) for x, y in edges]
    return make_structure(GRAPH, ids, {"E": edges})


def complete_graph(n: int) -> Structure:
    ids = _ids(n)
    return make_structure(GRAPH, ids, {"E": list(permutations(ids, 2))})


PAPER_AB_SIGNATURE = {"R": 2, "A": 1, "B": 1}


def paper_ab(b: int = 3) -> Structure:
    """One A-point p, b B-points q1..qb, and R = A x B."""
    qs = [f"q{i}" for i in range(1, b + 1)]
    if not qs:
        raise InputError("paper_ab needs at least one B-point")
    return make_structure(
        PAPER_AB_SIGNATURE,
        ["p", *qs],
        {"A": [("p",)], "B": [(q,) for q in qs], "R": [("p", q) for q in qs]},
    )
