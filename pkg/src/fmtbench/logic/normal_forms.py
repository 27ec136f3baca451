from __future__ import annotations

from itertools import count
from typing import Iterable, Mapping, Optional

from ..core.errors import ContractError, ResourceError
from ..core.models import WorkbenchParams, resolve_params
from .formula import (
    TRUE,
    And,
    Atom,
    Equal,
    Exists,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    Truth,
    _Quantified,
    all_variables,
    conj,
    disj,
    literal_parts,
    neg,
)

Clause = tuple[Formula, ...]


def to_nnf(f: Formula) -> Formula:
    """Negation normal form; Implies is compiled away."""
    return _nnf(f, positive=True)


def _nnf(f: Formula, positive: bool) -> Formula:
    if isinstance(f, Truth):
        return f if positive else Truth(not f.value)
    if isinstance(f, (Atom, Equal)):
        return f if positive else Not(f)
    if isinstance(f, Not):
        return _nnf(f.body, not positive)
    if isinstance(f, Implies):
        return _nnf(Or((Not(f.left), f.right)), positive)
    if isinstance(f, (And, Or)):
        parts = tuple(_nnf(g, positive) for g in f.items)
        keep_and = isinstance(f, And) == positive
        return And(parts) if keep_and else Or(parts)
    if isinstance(f, (Exists, Forall)):
        body = _nnf(f.body, positive)
        keep = isinstance(f, Exists) == positive
        return Exists(f.var, body) if keep else Forall(f.var, body)
    raise ContractError(f"unknown formula node {type(f).__name__}")


def substitute(f: Formula, mapping: Mapping[str, str]) -> Formula:
    """Rename free variables; bound variables that would capture are renamed first."""
    if not mapping:
        return f
    targets = set(mapping.values())
    taken = all_variables(f) | targets | set(mapping)
    fresh = _fresh_names(taken)
    return _subst(f, dict(mapping), targets, fresh)


def _subst(f: Formula, m: dict[str, str], targets: set[str], fresh) -> Formula:
    if isinstance(f, Truth):
        return f
    if isinstance(f, Atom):
        return Atom(f.symbol, tuple(m.get(x, x) for x in f.args))
    if isinstance(f, Equal):
        return Equal(m.get(f.left, f.left), m.get(f.right, f.right))
    if isinstance(f, Not):
        return Not(_subst(f.body, m, targets, fresh))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_subst(g, m, targets, fresh) for g in f.items))
    if isinstance(f, Implies):
        return Implies(_subst(f.left, m, targets, fresh), _subst(f.right, m, targets, fresh))
    if isinstance(f, _Quantified):
        inner = {k: v for k, v in m.items() if k != f.var}
        var = f.var
        if var in targets and inner:
            var = next(fresh)
            inner[f.var] = var
        return type(f)(var, _subst(f.body, inner, targets, fresh))
    raise ContractError(f"unknown formula node {type(f).__name__}")


def _fresh_names(taken: set[str], stem: str = "_w"):
    for i in count(1):
        name = f"{stem}{i}"
        if name not in taken:
            taken.add(name)
            yield name


def rename_bound(f: Formula) -> Formula:
    """Give every quantifier its own fresh variable _w1, _w2, ... (outermost first)."""
    fresh = _fresh_names(set(all_variables(f)))

    def walk(g: Formula, m: dict[str, str]) -> Formula:
        if isinstance(g, Truth):
            return g
        if isinstance(g, Atom):
            return Atom(g.symbol, tuple(m.get(x, x) for x in g.args))
        if isinstance(g, Equal):
            return Equal(m.get(g.left, g.left), m.get(g.right, g.right))
        if isinstance(g, Not):
            return Not(walk(g.body, m))
        if isinstance(g, (And, Or)):
            return type(g)(tuple(walk(h, m) for h in g.items))
        if isinstance(g, Implies):
            return Implies(walk(g.left, m), walk(g.right, m))
        if isinstance(g, _Quantified):
            var = next(fresh)
            return type(g)(var, walk(g.body, {**m, g.var: var}))
        raise ContractError(f"unknown formula node {type(g).__name__}")

    return walk(f, {})


def to_prenex(f: Formula) -> Formula:
    """Prenex form of the NNF of f (bound variables renamed apart)."""
    prefix: list[tuple[type, str]] = []

    def pull(g: Formula) -> Formula:
        if isinstance(g, _Quantified):
            prefix.append((type(g), g.var))
            return pull(g.body)
        if isinstance(g, (And, Or)):
            return type(g)(tuple(pull(h) for h in g.items))
        return g

    matrix = pull(to_nnf(rename_bound(f)))
    for kind, var in reversed(prefix):
        matrix = kind(var, matrix)
    return matrix


def innermost_exists(f: Formula) -> Optional[Exists]:
    """The first existential subformula (left to right) whose body is quantifier-free."""
    if isinstance(f, Exists) and f.body.is_quantifier_free:
        return f
    for child in f.children():
        found = innermost_exists(child)
        if found is not None:
            return found
    return None


def to_prenex_innermost(f: Formula) -> tuple[Formula, Optional[Exists]]:
    g = to_prenex(f)
    return g, innermost_exists(g)


# quantifier-free simplification and DNF

def _literal_key(lit: Formula) -> tuple[Formula, bool]:
    atom, positive = literal_parts(lit)
    if isinstance(atom, Equal) and atom.left > atom.right:
        atom = Equal(atom.right, atom.left)
    return atom, positive


def simplify_clause(literals: Iterable[Formula]) -> Optional[Clause]:
    """
    Drop true literals and duplicates; None when the clause is contradictory.

    Only literal truth is used: Truth constants, x=x and complementary pairs.
    """
    seen: dict[tuple[Formula, bool], Formula] = {}
    for lit in literals:
        atom, positive = _literal_key(lit)
        if isinstance(atom, Truth):
            if atom.value != positive:
                return None
            continue
        if isinstance(atom, Equal) and atom.left == atom.right:
            if not positive:
                return None
            continue
        if (atom, not positive) in seen:
            return None
        seen.setdefault((atom, positive), lit)
    return tuple(seen.values())


def dnf_clauses(f: Formula, params: Optional[WorkbenchParams] = None) -> list[Clause]:
    """Clauses of the DNF of a quantifier-free formula; [] is false, [()] is true."""
    params = resolve_params(params)
    if not f.is_quantifier_free:
        raise ContractError("DNF needs a quantifier-free formula")
    cap = params.dnf_clause_cap

    def walk(g: Formula) -> list[Clause]:
        if isinstance(g, Truth):
            return [()] if g.value else []
        if isinstance(g, (Atom, Equal)) or (isinstance(g, Not) and isinstance(g.body, (Atom, Equal, Truth))):
            clause = simplify_clause([g])
            return [] if clause is None else [clause]
        if isinstance(g, Or):
            out: list[Clause] = []
            for h in g.items:
                out.extend(walk(h))
            return _dedupe(out, cap)
        if isinstance(g, And):
            acc: list[Clause] = [()]
            for h in g.items:
                part = walk(h)
                nxt: list[Clause] = []
                for left in acc:
                    for right in part:
                        merged = simplify_clause(left + right)
                        if merged is not None:
                            nxt.append(merged)
                acc = _dedupe(nxt, cap)
                if not acc:
                    break
            return acc
        raise ContractError(f"formula not in negation normal form: {g}")

    return walk(to_nnf(f))


def _dedupe(clauses: list[Clause], cap: int) -> list[Clause]:
    out: dict[frozenset, Clause] = {}
    for c in clauses:
        out.setdefault(frozenset(_literal_key(l) for l in c), c)
    if len(out) > cap:
        raise ResourceError("dnf_clause_cap", cap, f"{len(out)} clauses")
    return list(out.values())


def to_dnf(f: Formula, params: Optional[WorkbenchParams] = None) -> Formula:
    return disj(conj(c) for c in dnf_clauses(f, params))


def simplify(f: Formula) -> Formula:
    """Prune literally true/false parts and flatten nested conjunctions/disjunctions."""
    if isinstance(f, Equal) and f.left == f.right:
        return TRUE
    if isinstance(f, (Truth, Atom, Equal)):
        return f
    if isinstance(f, Not):
        return neg(simplify(f.body))
    if isinstance(f, Implies):
        return simplify(Or((Not(f.left), f.right)))
    if isinstance(f, (And, Or)):
        is_and = isinstance(f, And)
        parts: list[Formula] = []
        for g in f.items:
            g = simplify(g)
            if isinstance(g, Truth):
                if g.value != is_and:
                    return g
                continue
            parts.extend(g.items if type(g) is type(f) else (g,))
        unique = list(dict.fromkeys(parts))
        return conj(unique) if is_and else disj(unique)
    if isinstance(f, _Quantified):
        body = simplify(f.body)
        if isinstance(body, Truth) or f.var not in body.free_variables:
            return body
        return type(f)(f.var, body)
    raise ContractError(f"unknown formula node {type(f).__name__}")


def normal_forms(f: Formula, params: Optional[WorkbenchParams] = None) -> dict[str, Formula]:
    """The three normal forms of f (DNF only when f is quantifier-free)."""
    out = {"nnf": to_nnf(f), "prenex": to_prenex(f)}
    if f.is_quantifier_free:
        out["dnf"] = to_dnf(f, params)
    return out

