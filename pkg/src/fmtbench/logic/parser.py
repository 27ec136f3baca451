from __future__ import annotations

import re
from functools import lru_cache
from typing import Optional

from lark import Lark, Transformer
from lark.exceptions import UnexpectedEOF, UnexpectedInput

from ..core.errors import InputError
from ..core.structures import Signature
from .formula import FALSE, TRUE, And, Atom, Equal, Exists, Forall, Formula, Implies, Not, Or, check_signature

# Precedence: ! > & > | > ->; a quantifier's scope runs as far right as possible.
FORMULA_GRAMMAR = r"""
    ?start: implication

    ?implication: disjunction
                | disjunction "->" implication      -> implies

    ?disjunction: conjunction
                | conjunction ("|" conjunction)+     -> or_

    ?conjunction: unary
                | unary ("&" unary)+                 -> and_

    ?unary: "!" unary                                -> not_
          | QUANT implication                        -> quantified
          | primary

    ?primary: NAME "(" NAME ("," NAME)* ")"          -> atom
            | NAME "=" NAME                          -> equal
            | "true"                                 -> true
            | "false"                                -> false
            | "(" implication ")"

    QUANT.2: /[EA][ \t\r\n]+[A-Za-z_][A-Za-z0-9_]*[ \t\r\n]*\./
    NAME: /[A-Za-z_][A-Za-z0-9_]*/

    %import common.WS
    %ignore WS
"""

_QUANT_RE = re.compile(r"([EA])\s+([A-Za-z_][A-Za-z0-9_]*)\s*\.")


class FormulaTransformer(Transformer):
    def implies(self, args):
        return Implies(args[0], args[1])

    def or_(self, args):
        return Or(tuple(args))

    def and_(self, args):
        return And(tuple(args))

    def not_(self, args):
        return Not(args[0])

    def quantified(self, args):
        token, body = args
        kind, var = _QUANT_RE.fullmatch(str(token)).groups()
        return Exists(var, body) if kind == "E" else Forall(var, body)

    def atom(self, args):
        name, *params = args
        return Atom(str(name), tuple(str(p) for p in params))

    def equal(self, args):
        return Equal(str(args[0]), str(args[1]))

    def true(self, _args):
        return TRUE

    def false(self, _args):
        return FALSE


@lru_cache(maxsize=1)
def formula_parser() -> Lark:
    return Lark(FORMULA_GRAMMAR, start="start", parser="lalr")


def parse(text: str, signature: Optional[Signature] = None) -> Formula:
    """
    Parse the ASCII formula syntax.

    With a signature, relation symbols and arities are checked against it and
    "s" is only accepted when the signature carries it.
    """
    try:
        tree = formula_parser().parse(text)
    except UnexpectedEOF as e:
        raise InputError(f"syntax error: unexpected end of input in {text!r}") from e
    except UnexpectedInput as e:
        raise InputError(f"syntax error at line {e.line}, column {e.column}: {e.get_context(text).strip()}") from e
    f = FormulaTransformer().transform(tree)
    if signature is not None:
        check_signature(f, signature)
    return f
