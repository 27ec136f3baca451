from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class WorkbenchParams:
    """
    Limits and defaults shared by every operation.

    dnf_clause_cap:
        Abort a disjunctive normal form expansion beyond this many clauses.
    oracle_candidate_cap:
        Largest (tuples x literals) table a brute-force oracle builds before it
        stops looking for a quantifier-free answer and adds a Morley symbol.
    oracle_max_disjuncts:
        Largest disjunction an oracle returns as a quantifier-free answer.
    automorphism_cap:
        Largest universe whose automorphism group is enumerated.
    ef_round_cap:
        Most rounds an Ehrenfeucht-Fraisse game may be played for.
    search_cap:
        Largest universe searched for monochromatic copies.
    extension_cap:
        Most (X, demand) pairs an extension-property check may examine.
    rank, tuples:
        Default quantifier rank and parameter-tuple length of k-elementarity checks.
    seed:
        Default seed of random generators.
    palette:
        Colour names, first colour first.
    """
    dnf_clause_cap: int = 10_000
    oracle_candidate_cap: int = 100_000
    oracle_max_disjuncts: int = 8
    automorphism_cap: int = 10
    ef_round_cap: int = 4
    search_cap: int = 12
    extension_cap: int = 200_000
    rank: int = 2
    tuples: int = 2
    seed: int = 0
    palette: tuple[str, ...] = ("red", "blue")


def resolve_params(params: WorkbenchParams | None) -> WorkbenchParams:
    return params if params is not None else WorkbenchParams()
