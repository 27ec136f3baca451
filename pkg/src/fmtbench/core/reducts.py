from __future__ import annotations

from typing import Mapping, Sequence, Union

from ..logic.formula import Formula, check_signature
from ..logic.semantics import satisfying_tuples
from .errors import InputError
from .structures import Signature, Structure

Definition = Union[Formula, tuple[Sequence[str], Formula]]


def _split(name: str, definition: Definition) -> tuple[tuple[str, ...], Formula]:
    if isinstance(definition, Formula):
        return tuple(sorted(definition.free_variables)), definition
    variables, formula = definition
    variables = tuple(variables)
    if set(variables) != set(formula.free_variables) or len(set(variables)) != len(variables):
        raise InputError(
            f"definition of {name!r} declares variables {list(variables)} "
            f"but its free variables are {sorted(formula.free_variables)}"
        )
    return variables, formula


def definitional_reduct(M: Structure, defs: Mapping[str, Definition]) -> Structure:
    """
    The structure on M's universe whose symbols are the defined ones.

    A definition is a formula (variables in sorted order) or a pair
    (variables, formula).
    """
    symbols: dict[str, int] = {}
    relations = {}
    for name, definition in defs.items():
        variables, formula = _split(name, definition)
        if not variables:
            raise InputError(f"definition of {name!r} has no free variables")
        check_signature(formula, M.signature)
        symbols[name] = len(variables)
        relations[name] = frozenset(satisfying_tuples(M, formula, variables))
    return Structure(Signature.of(symbols), M.universe, relations)
