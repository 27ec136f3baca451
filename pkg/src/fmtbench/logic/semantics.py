"""
Tarskian truth over finite structures.

`evaluate` walks the AST for one assignment. `extension` computes the whole
satisfaction tensor over universe^len(variables) with numpy, one axis per
variable; both agree on every assignment.
"""
from __future__ import annotations

from itertools import product as cartesian
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from ..core.errors import ContractError, InputError
from ..core.structures import Structure, StructureMap, as_structure
from .formula import And, Atom, Equal, Exists, Forall, Formula, Implies, Not, Or, Truth, check_signature

Literal = tuple[Formula, bool]


def evaluate(M: Structure, f: Formula, assignment: Mapping[str, str]) -> bool:
    M = as_structure(M)
    missing = f.free_variables - set(assignment)
    if missing:
        raise ContractError(f"unbound free variables: {sorted(missing)}")
    check_signature(f, M.signature)
    M.require(assignment[v] for v in f.free_variables)
    return _eval(M, f, dict(assignment))


def _eval(M: Structure, f: Formula, a: dict[str, str]) -> bool:
    if isinstance(f, Truth):
        return f.value
    if isinstance(f, Atom):
        return tuple(a[x] for x in f.args) in M.relations[f.symbol]
    if isinstance(f, Equal):
        return a[f.left] == a[f.right]
    if isinstance(f, Not):
        return not _eval(M, f.body, a)
    if isinstance(f, And):
        return all(_eval(M, g, a) for g in f.items)
    if isinstance(f, Or):
        return any(_eval(M, g, a) for g in f.items)
    if isinstance(f, Implies):
        return (not _eval(M, f.left, a)) or _eval(M, f.right, a)
    if isinstance(f, (Exists, Forall)):
        saved = a.get(f.var)
        try:
            for e in M.universe:
                a[f.var] = e
                value = _eval(M, f.body, a)
                if isinstance(f, Exists) and value:
                    return True
                if isinstance(f, Forall) and not value:
                    return False
            return isinstance(f, Forall)
        finally:
            if saved is None:
                a.pop(f.var, None)
            else:
                a[f.var] = saved
    raise ContractError(f"unknown formula node {type(f).__name__}")


# bulk evaluation

def _align(arr: np.ndarray, have: tuple[str, ...], want: tuple[str, ...], n: int) -> np.ndarray:
    """Reorder/broadcast a tensor indexed by `have` into one indexed by `want`."""
    perm = [have.index(v) for v in want if v in have]
    arr = np.transpose(arr, perm) if perm else arr
    shape = [n if v in have else 1 for v in want]
    arr = arr.reshape(shape)
    return np.broadcast_to(arr, (n,) * len(want))


def _combine(parts: list[tuple[np.ndarray, tuple[str, ...]]], op, n: int) -> tuple[np.ndarray, tuple[str, ...]]:
    vs: list[str] = []
    for _, have in parts:
        for v in have:
            if v not in vs:
                vs.append(v)
    want = tuple(vs)
    out = None
    for arr, have in parts:
        aligned = _align(arr, have, want, n)
        out = aligned.copy() if out is None else op(out, aligned)
    return out, want


def _tensor(M: Structure, f: Formula) -> tuple[np.ndarray, tuple[str, ...]]:
    n = len(M.universe)
    if isinstance(f, Truth):
        return np.array(f.value), ()
    if isinstance(f, Atom):
        vs = tuple(dict.fromkeys(f.args))
        rel = M.relation_array(f.symbol)
        grids = np.indices((n,) * len(vs))
        return rel[tuple(grids[vs.index(x)] for x in f.args)], vs
    if isinstance(f, Equal):
        if f.left == f.right:
            return np.ones(n, dtype=bool), (f.left,)
        return np.eye(n, dtype=bool), (f.left, f.right)
    if isinstance(f, Not):
        arr, vs = _tensor(M, f.body)
        return ~arr, vs
    if isinstance(f, And):
        return _combine([_tensor(M, g) for g in f.items], np.logical_and, n)
    if isinstance(f, Or):
        return _combine([_tensor(M, g) for g in f.items], np.logical_or, n)
    if isinstance(f, Implies):
        left, lv = _tensor(M, f.left)
        return _combine([(~left, lv), _tensor(M, f.right)], np.logical_or, n)
    if isinstance(f, (Exists, Forall)):
        arr, vs = _tensor(M, f.body)
        if f.var not in vs:
            return arr, vs
        axis = vs.index(f.var)
        reduced = arr.any(axis=axis) if isinstance(f, Exists) else arr.all(axis=axis)
        return reduced, vs[:axis] + vs[axis + 1:]
    raise ContractError(f"unknown formula node {type(f).__name__}")


def extension(M: Structure, f: Formula, variables: Sequence[str]) -> np.ndarray:
    """Boolean array of shape (n,)*len(variables): entry [i1..ik] is M |= f(u_i1..u_ik)."""
    M = as_structure(M)
    variables = tuple(variables)
    if len(set(variables)) != len(variables):
        raise ContractError(f"repeated variable in {variables}")
    missing = f.free_variables - set(variables)
    if missing:
        raise ContractError(f"unbound free variables: {sorted(missing)}")
    check_signature(f, M.signature)
    arr, vs = _tensor(M, f)
    return np.ascontiguousarray(_align(np.asarray(arr), vs, variables, len(M.universe)))


def satisfying_tuples(M: Structure, f: Formula, variables: Sequence[str]) -> list[tuple[str, ...]]:
    M = as_structure(M)
    arr = extension(M, f, variables)
    if arr.ndim == 0:
        return [()] if bool(arr) else []
    return [tuple(M.universe[i] for i in idx) for idx in np.argwhere(arr)]


def equivalent_on(M: Structure, f: Formula, g: Formula, variables: Optional[Sequence[str]] = None) -> bool:
    vs = tuple(variables) if variables is not None else tuple(sorted(f.free_variables | g.free_variables))
    return bool(np.array_equal(extension(M, f, vs), extension(M, g, vs)))


# atomic types

def atomic_literals(variables: Sequence[str], signature_symbols: Iterable[tuple[str, int]]) -> list[Formula]:
    """All atomic formulas over `variables`: equalities first, then relation atoms."""
    vs = list(variables)
    out: list[Formula] = [Equal(x, y) for i, x in enumerate(vs) for y in vs[i + 1:]]
    for name, arity in signature_symbols:
        for args in cartesian(vs, repeat=arity):
            out.append(Atom(name, tuple(args)))
    return out


def atomic_type(
    M: Structure,
    elements: Sequence[str],
    variables: Optional[Sequence[str]] = None,
    symbols: Optional[Iterable[str]] = None,
) -> frozenset[Literal]:
    """The signed atomic formulas over `variables` true of `elements` in M."""
    M = as_structure(M)
    vs = tuple(variables) if variables is not None else tuple(f"x{i}" for i in range(len(elements)))
    if len(vs) != len(elements):
        raise ContractError("variables and elements differ in length")
    M.require(elements)
    names = set(symbols) if symbols is not None else set(M.signature.names)
    sig = [(n, a) for n, a in M.signature.symbols if n in names]
    a = dict(zip(vs, elements))
    return frozenset((lit, _eval(M, lit, a)) for lit in atomic_literals(vs, sig))


def check_partial_isomorphism(f: StructureMap) -> bool:
    """
    Every quantifier-free formula is preserved by f.

    It suffices to compare atomic types of all tuples up to the largest arity
    (equality is preserved by injectivity).
    """
    src, tgt = f.source, f.target
    if any(name not in tgt.signature for name in src.signature.names):
        return False
    width = max([a for _, a in src.signature.symbols] + [2])
    d = f.as_dict()
    for t in cartesian(src.universe, repeat=width):
        image = tuple(d[x] for x in t)
        if atomic_type(src, t) != atomic_type(tgt, image, symbols=src.signature.names):
            return False
    return True


def require_one_free_variable(f: Formula) -> str:
    if len(f.free_variables) != 1:
        raise InputError(f"expected exactly one free variable, got {sorted(f.free_variables)}")
    return next(iter(f.free_variables))
