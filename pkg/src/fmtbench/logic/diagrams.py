"""
Complete equality diagrams, complete s-diagrams, the tilde transform and
admissible assignments.

A diagram is a set partition of a variable tuple. Rendering lists one literal
per unordered pair of variables, in variable order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from more_itertools import set_partitions

from ..core.errors import InputError
from ..core.structures import S_SYMBOL
from ..products.product import decompose_element
from .formula import And, Atom, Equal, Exists, Forall, Formula, Implies, Not, Or, Truth, atoms, conj, s_atom
from .normal_forms import simplify


@dataclass(frozen=True)
class _Partition:
    variables: tuple[str, ...]
    blocks: tuple[tuple[str, ...], ...]

    def block_of(self, v: str) -> tuple[str, ...]:
        for block in self.blocks:
            if v in block:
                return block
        raise InputError(f"variable {v!r} is not covered by the diagram")

    def same_block(self, x: str, y: str) -> bool:
        return x == y or y in self.block_of(x)

    def representative(self, v: str) -> str:
        return self.block_of(v)[0]

    def restrict(self, variables: Sequence[str]) -> "_Partition":
        keep = [v for v in self.variables if v in set(variables)]
        blocks = tuple(b for b in (tuple(v for v in block if v in keep) for block in self.blocks) if b)
        return type(self)(tuple(keep), blocks)

    def _literal(self, x: str, y: str) -> Formula:
        raise NotImplementedError

    def literals(self) -> list[Formula]:
        vs = self.variables
        out: list[Formula] = []
        for i, x in enumerate(vs):
            for y in vs[i + 1:]:
                lit = self._literal(x, y)
                out.append(lit if self.same_block(x, y) else Not(lit))
        return out

    def render(self) -> Formula:
        return conj(self.literals())


class EqualityDiagram(_Partition):
    def _literal(self, x, y):
        return Equal(x, y)

    def as_s_diagram(self) -> "SDiagram":
        return SDiagram(self.variables, self.blocks)


class SDiagram(_Partition):
    def _literal(self, x, y):
        return s_atom(x, y)

    def as_equality(self) -> EqualityDiagram:
        return EqualityDiagram(self.variables, self.blocks)


def _partitions(variables: Sequence[str]) -> list[tuple[tuple[str, ...], ...]]:
    vs = tuple(variables)
    if not vs:
        return [()]
    if len(set(vs)) != len(vs):
        raise InputError(f"duplicate variable in {vs}")
    pos = {v: i for i, v in enumerate(vs)}
    out = []
    for parts in set_partitions(vs):
        blocks = sorted((tuple(sorted(b, key=pos.__getitem__)) for b in parts), key=lambda b: pos[b[0]])
        out.append(tuple(blocks))
    return out


def enumerate_equality_diagrams(variables: Sequence[str]) -> list[EqualityDiagram]:
    return [EqualityDiagram(tuple(variables), blocks) for blocks in _partitions(variables)]


def enumerate_s_diagrams(variables: Sequence[str]) -> list[SDiagram]:
    return [SDiagram(tuple(variables), blocks) for blocks in _partitions(variables)]


def tilde(f: Formula) -> Formula:
    """Replace every equality x=y by s(x,y), everywhere in f."""
    if isinstance(f, Equal):
        return s_atom(f.left, f.right)
    if isinstance(f, (Truth, Atom)):
        return f
    if isinstance(f, Not):
        return Not(tilde(f.body))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(tilde(g) for g in f.items))
    if isinstance(f, Implies):
        return Implies(tilde(f.left), tilde(f.right))
    if isinstance(f, (Exists, Forall)):
        return type(f)(f.var, tilde(f.body))
    raise InputError(f"unknown formula node {type(f).__name__}")


def is_admissible(f: Formula, product, assignment: Mapping[str, str]) -> bool:
    """
    Every relational atom of f gets elements from at least two fibers.

    `product` is a ProductStructure; s-atoms are not relational atoms of the
    factor language and are ignored.
    """
    for atom in atoms(f):
        if atom.symbol == S_SYMBOL:
            continue
        firsts = {decompose_element(product, assignment[x])[0] for x in atom.args}
        if len(firsts) < 2:
            return False
    return True


def resolve_s_literals(f: Formula, diagram: SDiagram) -> Formula:
    """
    Replace s-atoms (and cross-block equalities) over the diagram's variables
    by the truth values the diagram forces.
    """
    covered = set(diagram.variables)

    def walk(g: Formula) -> Formula:
        if isinstance(g, Atom) and g.symbol == S_SYMBOL and set(g.args) <= covered:
            return Truth(diagram.same_block(*g.args))
        if isinstance(g, Equal) and {g.left, g.right} <= covered and not diagram.same_block(g.left, g.right):
            return Truth(False)
        if isinstance(g, (Truth, Atom, Equal)):
            return g
        if isinstance(g, Not):
            return Not(walk(g.body))
        if isinstance(g, (And, Or)):
            return type(g)(tuple(walk(h) for h in g.items))
        if isinstance(g, Implies):
            return Implies(walk(g.left), walk(g.right))
        if isinstance(g, (Exists, Forall)):
            return type(g)(g.var, walk(g.body)) if g.var not in covered else g
        raise InputError(f"unknown formula node {type(g).__name__}")

    return simplify(walk(f))

