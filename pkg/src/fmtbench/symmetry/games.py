"""
Rank-bounded elementary equivalence.

`ef_game` searches the Ehrenfeucht-Fraisse game tree with a call-local memo.
`rank_type` and `characteristic_formula` compute the same relation from the
formula side (Hintikka types), which makes them an independent oracle for
the game.
"""
from __future__ import annotations

import logging
from functools import lru_cache
from itertools import combinations, permutations
from itertools import product as cartesian
from typing import Optional, Sequence

from ..core.errors import ContractError, InputError, PreconditionError, ResourceError
from ..core.models import WorkbenchParams, resolve_params
from ..core.structures import Structure, StructureMap, as_structure, induced_substructure, iter_embeddings
from ..logic.formula import Atom, Equal, Exists, Forall, Formula, Not, conj, disj
from ..validation.report import Verdict

logger = logging.getLogger(__name__)

Pair = tuple[int, int]


@lru_cache(maxsize=None)
def _index_tuples(size: int, arity: int, last: int) -> list[tuple[int, ...]]:
    return [t for t in cartesian(range(size), repeat=arity) if last in t]


def ef_game(
    M,
    N,
    k: int,
    pebbles_M: Sequence[str] = (),
    pebbles_N: Sequence[str] = (),
    params: Optional[WorkbenchParams] = None,
) -> Verdict:
    """
    Play the k-round game on (M, pebbles_M) and (N, pebbles_N).

    passed is True when Duplicator wins; a Spoiler win carries one winning
    line of play as the witness.
    """
    M, N = as_structure(M), as_structure(N)
    params = resolve_params(params)
    if M.signature != N.signature:
        raise InputError("EF games need structures over one signature")
    if len(pebbles_M) != len(pebbles_N):
        raise ContractError("pebble tuples differ in length")
    if k < 0:
        raise ContractError("rounds must be non-negative")
    if k > params.ef_round_cap:
        raise ResourceError("ef_round_cap", params.ef_round_cap, f"{k} rounds requested")
    M.require(pebbles_M)
    N.require(pebbles_N)

    rels = [(M.relation_array(name), N.relation_array(name), arity) for name, arity in M.signature.symbols]

    def extends(pos: tuple[Pair, ...], pair: Pair) -> bool:
        if pair in pos:
            return True
        for x, y in pos:
            if (x == pair[0]) != (y == pair[1]):
                return False
        full = pos + (pair,)
        last = len(full) - 1
        for rm, rn, arity in rels:
            for t in _index_tuples(len(full), arity, last):
                if rm[tuple(full[i][0] for i in t)] != rn[tuple(full[i][1] for i in t)]:
                    return False
        return True

    def canon(pos: tuple[Pair, ...]) -> tuple[Pair, ...]:
        return tuple(sorted(set(pos)))

    n_m, n_n = len(M.universe), len(N.universe)

    def responses(pos, side: int, x: int):
        others = range(n_n) if side == 0 else range(n_m)
        for y in others:
            pair = (x, y) if side == 0 else (y, x)
            if extends(pos, pair):
                yield pair

    @lru_cache(maxsize=None)
    def duplicator_wins(pos: tuple[Pair, ...], rounds: int) -> bool:
        if rounds == 0:
            return True
        for side, size in ((0, n_m), (1, n_n)):
            for x in range(size):
                if not any(duplicator_wins(canon(pos + (p,)), rounds - 1) for p in responses(pos, side, x)):
                    return False
        return True

    start: tuple[Pair, ...] = ()
    consistent = True
    for a, b in zip(pebbles_M, pebbles_N):
        pair = (M.index[a], N.index[b])
        if not extends(start, pair):
            consistent = False
            break
        start = canon(start + (pair,))

    metrics = {"rounds": k, "pebbles": len(pebbles_M)}
    if not consistent:
        return Verdict(False, "spoiler", "the pebbled tuples already differ in atomic type", witness={"trace": []}, metrics=metrics)
    if duplicator_wins(start, k):
        return Verdict(True, "duplicator", f"Duplicator survives {k} rounds", metrics=metrics)

    trace = []
    pos, rounds = start, k
    names = (M.universe, N.universe)
    while rounds > 0:
        move = None
        for side, size in ((0, n_m), (1, n_n)):
            for x in range(size):
                if not any(duplicator_wins(canon(pos + (p,)), rounds - 1) for p in responses(pos, side, x)):
                    move = (side, x)
                    break
            if move:
                break
        side, x = move
        step = {"round": k - rounds + 1, "side": "left" if side == 0 else "right", "element": names[side][x]}
        reply = next(iter(responses(pos, side, x)), None)
        if reply is None:
            step["response"] = None
            trace.append(step)
            break
        step["response"] = names[1 - side][reply[1 - side]]
        trace.append(step)
        pos, rounds = canon(pos + (reply,)), rounds - 1
    logger.debug("spoiler wins in %d rounds: %s", k, trace)
    return Verdict(False, "spoiler", f"Spoiler wins within {k} rounds", witness={"trace": trace}, metrics=metrics)


def _atomic_key(M: Structure, tup: tuple[str, ...]) -> tuple:
    idx = [M.index[x] for x in tup]
    eq = tuple(idx[i] == idx[j] for i in range(len(idx)) for j in range(i + 1, len(idx)))
    rel = tuple(
        bool(M.relation_array(name)[tuple(idx[i] for i in t)])
        for name, arity in M.signature.symbols
        for t in cartesian(range(len(idx)), repeat=arity)
    ) if idx else ()
    return eq, rel


def rank_type(M, k: int, tup: Sequence[str] = ()) -> tuple:
    """
    The rank-k type of `tup` as a nested hashable value.

    Two pebbled structures are k-equivalent exactly when these values agree.
    """
    M = as_structure(M)
    M.require(tup)

    @lru_cache(maxsize=None)
    def tp(t: tuple[str, ...], r: int) -> tuple:
        base = _atomic_key(M, t)
        if r == 0:
            return base, frozenset()
        return base, frozenset(tp(t + (b,), r - 1) for b in M.universe)

    return tp(tuple(tup), k)


def characteristic_formula(M, k: int, tup: Sequence[str] = (), variables: Optional[Sequence[str]] = None) -> Formula:
    """
    The Hintikka formula of rank k describing `tup` in M.

    N |= phi(b) holds exactly when (N, b) and (M, tup) are k-equivalent.
    """
    M = as_structure(M)
    tup = tuple(tup)
    vs = tuple(variables) if variables is not None else tuple(f"x{i}" for i in range(len(tup)))
    if len(vs) != len(tup):
        raise ContractError("variables and tuple differ in length")
    M.require(tup)

    @lru_cache(maxsize=None)
    def chi(t: tuple[str, ...], names: tuple[str, ...], r: int) -> Formula:
        lits: list[Formula] = []
        for i, x in enumerate(names):
            for j in range(i + 1, len(names)):
                eq = Equal(x, names[j])
                lits.append(eq if t[i] == t[j] else Not(eq))
        for name, arity in M.signature.symbols:
            for positions in cartesian(range(len(names)), repeat=arity):
                atom = Atom(name, tuple(names[p] for p in positions))
                lits.append(atom if M.holds(name, tuple(t[p] for p in positions)) else Not(atom))
        if r == 0:
            return conj(lits)
        fresh = f"_h{len(names)}"
        branches: dict[tuple, Formula] = {}
        for b in M.universe:
            key = rank_type(M, r - 1, t + (b,))
            if key not in branches:
                branches[key] = chi(t + (b,), names + (fresh,), r - 1)
        parts = lits + [Exists(fresh, g) for g in branches.values()]
        parts.append(Forall(fresh, disj(branches.values())))
        return conj(parts)

    return chi(tup, vs, k)


def _require_induced(N_sub: Structure, M: Structure) -> None:
    if not set(N_sub.universe) <= set(M.universe) or induced_substructure(M, N_sub.universe) != N_sub:
        raise PreconditionError("not an induced substructure of the ambient structure")


def k_elementary_substructure(N_sub, M, k: int, max_tuple: int, params: Optional[WorkbenchParams] = None) -> Verdict:
    N_sub, M = as_structure(N_sub), as_structure(M)
    _require_induced(N_sub, M)
    checked = 0
    for t in range(max_tuple + 1):
        for tup in combinations(N_sub.universe, t):
            checked += 1
            game = ef_game(N_sub, M, k, tup, tup, params)
            if not game.passed:
                return Verdict(
                    False,
                    "not k-elementary",
                    f"parameters {list(tup)} are distinguished at rank {k}",
                    witness={"tuple": list(tup), "spoiler": game.witness},
                    metrics={"rank": k, "max_tuple": max_tuple, "tuples_checked": checked},
                )
    return Verdict(
        True,
        "k-elementary",
        f"no formula of rank <= {k} with <= {max_tuple} parameters tells the substructure apart",
        metrics={"rank": k, "max_tuple": max_tuple, "tuples_checked": checked},
    )


def k_elementary_map(f: StructureMap, k: int, max_tuple: int, params: Optional[WorkbenchParams] = None) -> Verdict:
    checked = 0
    for t in range(max_tuple + 1):
        for tup in combinations(f.source.universe, t):
            checked += 1
            game = ef_game(f.source, f.target, k, tup, f.apply(tup), params)
            if not game.passed:
                return Verdict(False, "not k-elementary", f"{list(tup)} and its image differ at rank {k}", witness={"tuple": list(tup), "spoiler": game.witness}, metrics={"rank": k, "max_tuple": max_tuple, "tuples_checked": checked})
    return Verdict(True, "k-elementary", "every checked tuple keeps its rank-k type", metrics={"rank": k, "max_tuple": max_tuple, "tuples_checked": checked})


def _unrealized(A: Structure, B: Structure, k: int, max_tuple: int, params) -> Optional[tuple[str, ...]]:
    """First tuple of A (length <= max_tuple) with no k-equivalent partner in B."""
    for t in range(max_tuple + 1):
        for tup in combinations(A.universe, t):
            if not any(ef_game(A, B, k, tup, cand, params).passed for cand in permutations(B.universe, t)):
                return tup
    return None


def _elementary_embedding(A: Structure, B: Structure, k: int, max_tuple: int, params) -> Optional[dict[str, str]]:
    """First embedding A -> B whose image is k-elementary in B and which keeps rank-k types."""
    for mapping in iter_embeddings(A, B):
        f = StructureMap.from_dict(A, B, mapping, kind="k-elementary", k=k)
        if not k_elementary_map(f, k, max_tuple, params).passed:
            continue
        image = induced_substructure(B, mapping.values())
        if k_elementary_substructure(image, B, k, max_tuple, params).passed:
            return mapping
    return None


def mutually_k_embeddable(
    A,
    B,
    k: int,
    max_tuple: int,
    params: Optional[WorkbenchParams] = None,
    require_embeddings: bool = False,
) -> Verdict:
    """
    Rank-bounded mutual embeddability.

    By default A and B are (k, t)-mutually embeddable when every tuple of at
    most t elements on either side has a partner tuple on the other side with
    the same rank-k type. Every partial map on at most t points can then be
    chosen k-elementary. This does not need a whole embedding: PureSet(2) and
    PureSet(3) agree at k=1, t=1 although PureSet(3) embeds nowhere in
    PureSet(2). Whole embeddings are still searched and reported in the metrics.

    With require_embeddings=True the verdict is the embedding reading instead:
    there must be an embedding A -> B and an embedding B -> A, each keeping
    rank-k types of tuples up to t and each with a k-elementary image. The
    witness then holds the two maps, or names the direction that has none.
    """
    A, B = as_structure(A), as_structure(B)
    if A.signature != B.signature:
        raise InputError("structures must share a signature")
    forward_map = _elementary_embedding(A, B, k, max_tuple, params)
    backward_map = _elementary_embedding(B, A, k, max_tuple, params)
    metrics = {
        "rank": k,
        "max_tuple": max_tuple,
        "embedding_left_to_right": forward_map is not None,
        "embedding_right_to_left": backward_map is not None,
    }
    if require_embeddings:
        if forward_map is not None and backward_map is not None:
            return Verdict(
                True,
                "mutually k-embeddable",
                "k-elementary embeddings exist in both directions",
                witness={"left_to_right": forward_map, "right_to_left": backward_map},
                metrics=metrics,
            )
        side = "left" if forward_map is None else "right"
        return Verdict(
            False,
            "not mutually k-embeddable",
            f"no rank-{k} elementary embedding out of the {side} structure",
            witness={"side": side, "embedding": None},
            metrics=metrics,
        )

    forward = _unrealized(A, B, k, max_tuple, params)
    backward = _unrealized(B, A, k, max_tuple, params)
    if forward is None and backward is None:
        return Verdict(True, "mutually k-embeddable", "every bounded tuple type is realized on both sides", metrics=metrics)
    side, tup = ("left", forward) if forward is not None else ("right", backward)
    return Verdict(
        False,
        "not mutually k-embeddable",
        f"a {len(tup)}-tuple of the {side} structure has no rank-{k} partner",
        witness={"side": side, "tuple": list(tup)},
        metrics=metrics,
    )
