from __future__ import annotations

from typing import Optional, Sequence, Union

import numpy as np

from ..core.structures import Signature
from .formula import And, Atom, Equal, Exists, Forall, Formula, Implies, Not, Or

_KINDS = ("atom", "not", "and", "or", "implies", "exists", "forall")
_WEIGHTS = np.array([0.34, 0.14, 0.18, 0.14, 0.05, 0.08, 0.07])


def random_formula(
    signature: Signature,
    variables: Sequence[str],
    rank: int,
    seed: Union[int, np.random.Generator, None] = 0,
    max_depth: int = 4,
) -> Formula:
    """
    A seeded random formula over `signature`.

    Quantified variables are drawn from the same pool as free ones, so the
    result never mentions a variable outside `variables` and its quantifier
    rank is at most `rank`.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    pool = list(variables)
    symbols = list(signature.symbols)

    def literal() -> Formula:
        if not symbols or rng.random() < 0.2:
            x, y = rng.choice(pool, size=2)
            return Equal(str(x), str(y))
        name, arity = symbols[rng.integers(len(symbols))]
        return Atom(name, tuple(str(v) for v in rng.choice(pool, size=arity)))

    def gen(depth: int, rank_left: int) -> Formula:
        if depth >= max_depth:
            return literal()
        weights = _WEIGHTS.copy()
        if rank_left == 0:
            weights[5:] = 0.0
        kind = _KINDS[rng.choice(len(_KINDS), p=weights / weights.sum())]
        if kind == "atom":
            return literal()
        if kind == "not":
            return Not(gen(depth + 1, rank_left))
        if kind in ("and", "or"):
            width = int(rng.integers(2, 4))
            parts = tuple(gen(depth + 1, rank_left) for _ in range(width))
            return And(parts) if kind == "and" else Or(parts)
        if kind == "implies":
            return Implies(gen(depth + 1, rank_left), gen(depth + 1, rank_left))
        var = str(rng.choice(pool))
        body = gen(depth + 1, rank_left - 1)
        return Exists(var, body) if kind == "exists" else Forall(var, body)

    return gen(0, rank)


def random_formulas(
    signature: Signature,
    variables: Sequence[str],
    rank: int,
    count: int,
    seed: Optional[int] = 0,
) -> list[Formula]:
    rng = np.random.default_rng(seed)
    return [random_formula(signature, variables, rank, rng) for _ in range(count)]
