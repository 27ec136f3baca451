"""
Morleyization: new relation symbols naming definable relations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count
from typing import Iterable, Mapping, Sequence, Union

from ..core.errors import InputError
from ..core.structures import Signature, Structure, as_structure
from ..logic.formula import FALSE, And, Atom, Equal, Exists, Forall, Formula, Implies, Not, Or, Truth, check_signature
from ..logic.normal_forms import simplify, substitute
from ..logic.semantics import satisfying_tuples


@dataclass(frozen=True)
class MorleyEntry:
    symbol: str
    formula: Formula
    variables: tuple[str, ...]

    @property
    def arity(self) -> int:
        return len(self.variables)


@dataclass
class MorleyContext:
    """
    The symbols added to a family of structures, in order.

    `structures` are the expanded structures; each added symbol is interpreted
    by the extension of its formula in the structures before expansion.
    """
    base_signature: Signature
    structures: list[Structure]
    added: list[MorleyEntry] = field(default_factory=list)
    prefix: str = "R_phi"
    _counter: count = field(default_factory=lambda: count(1), repr=False)

    @property
    def signature(self) -> Signature:
        return self.structures[0].signature

    def fresh_symbol(self, taken: Iterable[str] = ()) -> str:
        blocked = set(self.signature.names) | set(taken)
        while True:
            name = f"{self.prefix}_{next(self._counter)}"
            if name not in blocked:
                return name

    def definition(self, symbol: str) -> MorleyEntry:
        for entry in self.added:
            if entry.symbol == symbol:
                return entry
        raise KeyError(symbol)

    def add(self, symbol: str, formula: Formula, variables: Sequence[str], extensions: Sequence[Iterable[tuple[str, ...]]]) -> MorleyEntry:
        entry = MorleyEntry(symbol, formula, tuple(variables))
        self.structures = [S.expand(symbol, entry.arity, ext) for S, ext in zip(self.structures, extensions)]
        self.added.append(entry)
        return entry

    def pad(self, symbol: str, arity: int) -> None:
        """Interpret a symbol added elsewhere as empty here."""
        if symbol not in self.signature:
            self.structures = [S.expand(symbol, arity, ()) for S in self.structures]


FormulaSpec = Union[Formula, tuple[Sequence[str], Formula]]


def morleyize(M: Structure, formulas: Sequence[FormulaSpec], prefix: str = "R_phi") -> tuple[Structure, MorleyContext]:
    """
    Expand M by one symbol per formula.

    A formula alone uses its free variables in sorted order; a pair
    (variables, formula) fixes the argument order.
    """
    M = as_structure(M)
    ctx = MorleyContext(M.signature, [M], prefix=prefix)
    for spec in formulas:
        if isinstance(spec, Formula):
            variables, formula = tuple(sorted(spec.free_variables)), spec
        else:
            variables, formula = tuple(spec[0]), spec[1]
        if set(variables) != set(formula.free_variables):
            raise InputError(f"variables {list(variables)} do not match the free variables of {formula}")
        if not variables:
            raise InputError(f"sentence {formula} has no Morley symbol; evaluate it instead")
        check_signature(formula, M.signature)
        ctx.add(ctx.fresh_symbol(), formula, variables, [satisfying_tuples(M, formula, variables)])
    return ctx.structures[0], ctx


def unfold_morley(phi: Formula, defined: Mapping[str, MorleyEntry], foreign: Iterable[str] = ()) -> Formula:
    """
    Rewrite Morley atoms into their defining formulas.

    Atoms of `foreign` symbols (added for the other factor, empty on this one)
    become false.
    """
    foreign = set(foreign)

    def walk(g: Formula) -> Formula:
        if isinstance(g, Atom):
            if g.symbol in foreign:
                return FALSE
            entry = defined.get(g.symbol)
            if entry is None:
                return g
            body = walk(entry.formula)
            return substitute(body, dict(zip(entry.variables, g.args)))
        if isinstance(g, (Truth, Equal)):
            return g
        if isinstance(g, Not):
            return Not(walk(g.body))
        if isinstance(g, (And, Or)):
            return type(g)(tuple(walk(h) for h in g.items))
        if isinstance(g, Implies):
            return Implies(walk(g.left), walk(g.right))
        if isinstance(g, (Exists, Forall)):
            return type(g)(g.var, walk(g.body))
        raise InputError(f"unknown formula node {type(g).__name__}")

    return simplify(walk(phi))
