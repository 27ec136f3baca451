"""
First-order formula AST and its printer.

Nodes are frozen dataclasses. `str(f)` gives the ASCII concrete syntax read
back by `fmtbench.logic.parser.parse`; parse(str(f)) == f structurally.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from ..core.errors import ContractError, InputError
from ..core.structures import S_SYMBOL, Signature


class Formula:
    @cached_property
    def free_variables(self) -> frozenset[str]:
        return self._free()

    @cached_property
    def quantifier_rank(self) -> int:
        return self._rank()

    @property
    def is_quantifier_free(self) -> bool:
        return self.quantifier_rank == 0

    def _free(self) -> frozenset[str]:
        raise NotImplementedError

    def _rank(self) -> int:
        raise NotImplementedError

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, eq=True)
class Truth(Formula):
    value: bool

    def _free(self):
        return frozenset()

    def _rank(self):
        return 0


@dataclass(frozen=True)
class Atom(Formula):
    symbol: str
    args: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise ContractError(f"atom {self.symbol!r} needs at least one argument")

    def _free(self):
        return frozenset(self.args)

    def _rank(self):
        return 0


@dataclass(frozen=True)
class Equal(Formula):
    left: str
    right: str

    def _free(self):
        return frozenset((self.left, self.right))

    def _rank(self):
        return 0


@dataclass(frozen=True)
class Not(Formula):
    body: Formula

    def _free(self):
        return self.body.free_variables

    def _rank(self):
        return self.body.quantifier_rank

    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class _Junction(Formula):
    items: tuple[Formula, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "items", tuple(self.items))
        if len(self.items) < 2:
            raise ContractError(f"{type(self).__name__} needs at least two operands")

    def _free(self):
        return frozenset().union(*(f.free_variables for f in self.items))

    def _rank(self):
        return max(f.quantifier_rank for f in self.items)

    def children(self):
        return self.items


@dataclass(frozen=True)
class And(_Junction):
    pass


@dataclass(frozen=True)
class Or(_Junction):
    pass


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula

    def _free(self):
        return self.left.free_variables | self.right.free_variables

    def _rank(self):
        return max(self.left.quantifier_rank, self.right.quantifier_rank)

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class _Quantified(Formula):
    var: str
    body: Formula

    def _free(self):
        return self.body.free_variables - {self.var}

    def _rank(self):
        return self.body.quantifier_rank + 1

    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class Exists(_Quantified):
    pass


@dataclass(frozen=True)
class Forall(_Quantified):
    pass


TRUE = Truth(True)
FALSE = Truth(False)


def conj(items: Iterable[Formula]) -> Formula:
    parts = list(items)
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return And(tuple(parts))


def disj(items: Iterable[Formula]) -> Formula:
    parts = list(items)
    if not parts:
        return FALSE
    if len(parts) == 1:
        return parts[0]
    return Or(tuple(parts))


def neg(f: Formula) -> Formula:
    if isinstance(f, Truth):
        return Truth(not f.value)
    if isinstance(f, Not):
        return f.body
    return Not(f)


def s_atom(x: str, y: str) -> Atom:
    return Atom(S_SYMBOL, (x, y))


def is_literal(f: Formula) -> bool:
    if isinstance(f, Not):
        f = f.body
    return isinstance(f, (Atom, Equal, Truth))


def literal_parts(f: Formula) -> tuple[Formula, bool]:
    """(atomic formula, polarity) of a literal."""
    if isinstance(f, Not):
        if not isinstance(f.body, (Atom, Equal, Truth)):
            raise ContractError(f"not a literal: {f}")
        return f.body, False
    if not isinstance(f, (Atom, Equal, Truth)):
        raise ContractError(f"not a literal: {f}")
    return f, True


def atoms(f: Formula) -> list[Atom]:
    out: list[Atom] = []

    def walk(g: Formula) -> None:
        if isinstance(g, Atom):
            out.append(g)
        for c in g.children():
            walk(c)

    walk(f)
    return out


def bound_variables(f: Formula) -> set[str]:
    out: set[str] = set()

    def walk(g: Formula) -> None:
        if isinstance(g, _Quantified):
            out.add(g.var)
        for c in g.children():
            walk(c)

    walk(f)
    return out


def all_variables(f: Formula) -> set[str]:
    return set(f.free_variables) | bound_variables(f)


def check_signature(f: Formula, signature: Signature) -> None:
    """Raise InputError when f mentions unknown symbols or wrong arities."""
    for atom in atoms(f):
        if atom.symbol == S_SYMBOL and not signature.has_s:
            raise InputError("symbol 's' is only available on s-expanded products")
        if atom.symbol not in signature:
            raise InputError(f"unknown relation symbol {atom.symbol!r}")
        arity = signature.arity(atom.symbol)
        if len(atom.args) != arity:
            raise InputError(f"arity mismatch: {atom.symbol} takes {arity} arguments, got {len(atom.args)}")


# printing

def _wrap(f: Formula, wrap_if: tuple[type, ...]) -> str:
    text = to_text(f)
    return f"({text})" if isinstance(f, wrap_if) else text


_QUANTIFIED = (Exists, Forall)


def to_text(f: Formula) -> str:
    if isinstance(f, Truth):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        return f"{f.symbol}({','.join(f.args)})"
    if isinstance(f, Equal):
        return f"{f.left}={f.right}"
    if isinstance(f, Not):
        return "!" + _wrap(f.body, (And, Or, Implies) + _QUANTIFIED)
    if isinstance(f, And):
        return " & ".join(_wrap(g, (And, Or, Implies) + _QUANTIFIED) for g in f.items)
    if isinstance(f, Or):
        return " | ".join(_wrap(g, (Or, Implies) + _QUANTIFIED) for g in f.items)
    if isinstance(f, Implies):
        left = _wrap(f.left, (Implies,) + _QUANTIFIED)
        right = _wrap(f.right, _QUANTIFIED)
        return f"{left} -> {right}"
    if isinstance(f, Exists):
        return f"E {f.var}. {to_text(f.body)}"
    if isinstance(f, Forall):
        return f"A {f.var}. {to_text(f.body)}"
    raise ContractError(f"unknown formula node {type(f).__name__}")


def variables_in(items: Sequence[Formula]) -> list[str]:
    """Variables of `items` in first-occurrence order."""
    seen: dict[str, None] = {}

    def walk(g: Formula) -> None:
        if isinstance(g, Atom):
            for a in g.args:
                seen.setdefault(a)
        elif isinstance(g, Equal):
            seen.setdefault(g.left)
            seen.setdefault(g.right)
        elif isinstance(g, _Quantified):
            seen.setdefault(g.var)
        for c in g.children():
            walk(c)

    for item in items:
        walk(item)
    return list(seen)
