"""
Command-line front end.

Usage:
  python fmt.py eval --structure chain3.json --formula "E x. lt(x,y)" --assign y=0
  python fmt.py qe --product prod.json --formula "E w. (E(v,w) & !s(v,w))" --verify
  python fmt.py autos --structure chain4.json --text

Reports are JSON on stdout (or --out); --text renders verdicts as a table.
Exit codes: 0 ok, 1 negative verdict, 2 bad input, 3 a cap was exceeded.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from typing import Any, Callable, Optional

from ..core.errors import ResourceError, WorkbenchError
from ..core.models import WorkbenchParams
from ..core.structures import as_structure
from ..exploration.census import orbit_census
from ..exploration.coloring import color_by_formula, make_coloring, staircase_coloring
from ..exploration.hypergraphs import (
    EXTENSION_VARIANTS,
    HypergraphSpec,
    build_stage,
    check_class_axioms,
    check_extension_property,
    gen_colored_hypergraph,
)
from ..exploration.search import assemble_elementary_copy, find_monochromatic_copy, product_of_monochromatic_pieces
from ..logic.normal_forms import normal_forms
from ..logic.parser import parse
from ..logic.semantics import evaluate
from ..products.product import ProductStructure, generalized_product, lexicographic_product
from ..qe.decompose import decompose_product_formula
from ..qe.morley import morleyize
from ..qe.session import EliminationSession
from ..qe.witness import qe_failure_witness
from ..symmetry.automorphisms import (
    automorphisms,
    is_k_homogeneous,
    is_symmetrically_embedded,
    is_ultrahomogeneous,
    orbits,
    transitivity_verdict,
)
from ..symmetry.games import ef_game, k_elementary_substructure, mutually_k_embeddable
from ..validation.report import ValidationReport, Verdict
from ..validation.validator import dumps_report, format_report_text, validate_product
from .files import (
    coloring_to_dict,
    load_any,
    load_coloring,
    load_product,
    load_structure,
    product_to_dict,
    structure_to_dict,
)

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3

# which cap --cap overrides, per subcommand
_CAP_FIELD = {
    "qe": "oracle_candidate_cap",
    "decompose": "oracle_candidate_cap",
    "autos": "automorphism_cap",
    "orbits": "automorphism_cap",
    "transitive": "automorphism_cap",
    "symcheck": "automorphism_cap",
    "ultrahom": "automorphism_cap",
    "census": "automorphism_cap",
    "staircase": "automorphism_cap",
    "efgame": "ef_round_cap",
    "kelem": "ef_round_cap",
    "mutual": "ef_round_cap",
    "extension-check": "extension_cap",
    "find-copy": "search_cap",
    "assemble": "search_cap",
}

Result = tuple[Any, Optional[bool]]


def _params(args: argparse.Namespace) -> WorkbenchParams:
    params = WorkbenchParams()
    changes: dict[str, Any] = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.rank is not None:
        changes["rank"] = args.rank
    if args.tuples is not None:
        changes["tuples"] = args.tuples
    if args.cap is not None:
        changes[_CAP_FIELD.get(args.command, "dnf_clause_cap")] = args.cap
    return replace(params, **changes)


def _assignment(pairs: list[str]) -> dict[str, str]:
    out = {}
    for item in pairs or []:
        var, sep, value = item.partition("=")
        if not sep or not var:
            raise argparse.ArgumentTypeError(f"expected VAR=ELEMENT, got {item!r}")
        out[var.strip()] = value.strip()
    return out


def _csv(text: Optional[str]) -> tuple[str, ...]:
    return tuple(x for x in (text or "").split(",") if x)


# handlers: (args, params) -> (payload, verdict flag or None)

def _cmd_eval(args, params) -> Result:
    M = load_structure(args.structure)
    phi = parse(args.formula, M.signature)
    return {"formula": str(phi), "value": evaluate(M, phi, _assignment(args.assign))}, None


def _cmd_parse(args, params) -> Result:
    signature = load_structure(args.structure).signature if args.structure else None
    phi = parse(args.formula, signature)
    out = {
        "formula": str(phi),
        "free_variables": sorted(phi.free_variables),
        "quantifier_rank": phi.quantifier_rank,
    }
    out.update({name: str(f) for name, f in normal_forms(phi, params).items()})
    return out, None


def _validated(P: ProductStructure, args) -> Result:
    """The product document, or with --text its rule-by-rule validation."""
    report = validate_product(P)
    if not report.passed:
        logger.warning("product fails %s", report.failed_rules)
    if args.text:
        return report, report.passed
    return product_to_dict(P), report.passed


def _cmd_product(args, params) -> Result:
    P = lexicographic_product(load_structure(args.base), load_structure(args.fiber), with_s=not args.no_s)
    return _validated(P, args)


def _cmd_genproduct(args, params) -> Result:
    base = load_structure(args.base)
    fibers = {a: load_structure(path) for a, path in _assignment(args.fibers).items()}
    return _validated(generalized_product(base, fibers, with_s=not args.no_s), args)


def _cmd_qe(args, params) -> Result:
    P = load_product(args.product)
    phi = parse(args.formula, P.signature)
    report = EliminationSession(P, params).report(phi, verify=args.verify)
    return report, (report.verdict.passed if report.verdict is not None else None)


def _cmd_qe_witness(args, params) -> Result:
    P = load_any(args.product)
    verdict = qe_failure_witness(P, parse(args.formula, as_structure(P).signature))
    return verdict, verdict.passed


def _cmd_decompose(args, params) -> Result:
    P = load_product(args.product)
    pairs = decompose_product_formula(P, parse(args.formula, P.signature), params)
    return {"formula": args.formula, "pairs": [{"base": str(a), "fiber": str(b)} for a, b in pairs]}, None


def _cmd_morleyize(args, params) -> Result:
    M = load_structure(args.structure)
    expanded, ctx = morleyize(M, [parse(text, M.signature) for text in args.formula])
    added = [{"symbol": e.symbol, "variables": list(e.variables), "formula": str(e.formula)} for e in ctx.added]
    return {"structure": structure_to_dict(expanded), "added": added}, None


def _cmd_autos(args, params) -> Result:
    aut = automorphisms(load_structure(args.structure), params)
    return {"count": len(aut), "automorphisms": aut.as_dicts()}, None


def _cmd_orbits(args, params) -> Result:
    parts = orbits(load_structure(args.structure), params)
    return {"count": len(parts), "orbits": [list(b) for b in parts.blocks]}, None


def _cmd_transitive(args, params) -> Result:
    verdict = transitivity_verdict(load_structure(args.structure), params)
    return verdict, verdict.passed


def _cmd_symcheck(args, params) -> Result:
    verdict = is_symmetrically_embedded(load_structure(args.sub), load_structure(args.structure), params)
    return verdict, verdict.passed


def _cmd_ultrahom(args, params) -> Result:
    M = load_structure(args.structure)
    if args.elementary:
        verdict = is_k_homogeneous(M, params.rank, args.max_size, params)
    else:
        verdict = is_ultrahomogeneous(M, args.max_size, params)
    return verdict, verdict.passed


def _cmd_efgame(args, params) -> Result:
    rounds = args.rounds if args.rounds is not None else params.rank
    verdict = ef_game(
        load_structure(args.left),
        load_structure(args.right),
        rounds,
        _csv(args.pebbles_left),
        _csv(args.pebbles_right),
        params,
    )
    return verdict, verdict.passed


def _cmd_kelem(args, params) -> Result:
    verdict = k_elementary_substructure(load_structure(args.sub), load_structure(args.structure), params.rank, params.tuples, params)
    return verdict, verdict.passed


def _cmd_mutual(args, params) -> Result:
    verdict = mutually_k_embeddable(
        load_structure(args.left), load_structure(args.right), params.rank, params.tuples, params, require_embeddings=args.embeddings
    )
    return verdict, verdict.passed


def _cmd_gen_hypergraph(args, params) -> Result:
    spec = HypergraphSpec(args.arity, args.colors, args.size, args.complete, params.seed)
    M = build_stage(spec) if args.stage else gen_colored_hypergraph(spec)
    return structure_to_dict(M), None


def _cmd_class_check(args, params) -> Result:
    M = load_structure(args.structure)
    verdict = check_class_axioms(M, HypergraphSpec(args.arity, args.colors, len(M), args.complete, params.seed))
    return verdict, verdict.passed


def _cmd_extension_check(args, params) -> Result:
    M = load_structure(args.structure)
    spec = HypergraphSpec(args.arity, args.colors, len(M), args.complete, params.seed)
    verdict = check_extension_property(M, spec, args.x_size, args.variant, params=params)
    return verdict, verdict.passed


def _cmd_color(args, params) -> Result:
    M = load_structure(args.structure)
    return coloring_to_dict(color_by_formula(M, parse(args.formula, M.signature), params).colors), None


def _cmd_staircase(args, params) -> Result:
    P = load_product(args.product)
    order = _csv(args.base_order) or None
    return coloring_to_dict(staircase_coloring(P, base_enum=order, params=params).colors), None


def _cmd_find_copy(args, params) -> Result:
    M = load_structure(args.structure)
    c = make_coloring(M, load_coloring(args.coloring), params)
    verdict = find_monochromatic_copy(
        M,
        c,
        load_structure(args.target),
        require_symmetric=args.symmetric,
        require_k_elementary=params.rank if args.elementary else None,
        params=params,
    )
    return verdict, verdict.passed


def _cmd_assemble(args, params) -> Result:
    P = load_product(args.product)
    c = make_coloring(P, load_coloring(args.coloring), params)
    fiber_target, base_target = load_structure(args.fiber_target), load_structure(args.base_target)
    if args.elementary:
        verdict = assemble_elementary_copy(P, c, fiber_target, base_target, params.rank, params.tuples, params)
    else:
        verdict = product_of_monochromatic_pieces(P, c, fiber_target, base_target, params)
    return verdict, verdict.passed


def _cmd_census(args, params) -> Result:
    return orbit_census(load_product(args.product), params), None


COMMANDS: dict[str, Callable[[argparse.Namespace, WorkbenchParams], Result]] = {
    "eval": _cmd_eval,
    "parse": _cmd_parse,
    "product": _cmd_product,
    "genproduct": _cmd_genproduct,
    "qe": _cmd_qe,
    "qe-witness": _cmd_qe_witness,
    "decompose": _cmd_decompose,
    "morleyize": _cmd_morleyize,
    "autos": _cmd_autos,
    "orbits": _cmd_orbits,
    "transitive": _cmd_transitive,
    "symcheck": _cmd_symcheck,
    "ultrahom": _cmd_ultrahom,
    "efgame": _cmd_efgame,
    "kelem": _cmd_kelem,
    "mutual": _cmd_mutual,
    "gen-hypergraph": _cmd_gen_hypergraph,
    "class-check": _cmd_class_check,
    "extension-check": _cmd_extension_check,
    "color": _cmd_color,
    "staircase": _cmd_staircase,
    "find-copy": _cmd_find_copy,
    "assemble": _cmd_assemble,
    "census": _cmd_census,
}


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=None, help="Seed for random generators (default: 0)")
    p.add_argument("--cap", type=int, default=None, help="Override the cap relevant to this command")
    p.add_argument("--rank", type=int, default=None, help="Quantifier rank k (default: 2)")
    p.add_argument("--tuples", type=int, default=None, help="Parameter tuple length t (default: 2)")
    p.add_argument("--out", "-o", default=None, help="Write the report to this path instead of stdout")
    p.add_argument("--text", action="store_true", help="Human-readable report instead of JSON")
    p.add_argument("--verbose", "-v", action="store_true", help="DEBUG logging on stderr")
    return p


def _build_arg_parser() -> argparse.ArgumentParser:
    common = _common()
    p = argparse.ArgumentParser(prog="fmt", description="Finite model theory workbench: products, quantifier elimination, symmetry.")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text)

    c = cmd("eval", "Evaluate a formula under an assignment")
    c.add_argument("--structure", required=True)
    c.add_argument("--formula", required=True)
    c.add_argument("--assign", action="append", default=[], help="VAR=ELEMENT (repeatable)")

    c = cmd("parse", "Parse a formula and print its normal forms")
    c.add_argument("--formula", required=True)
    c.add_argument("--structure", default=None, help="Check the formula against this structure's signature")

    c = cmd("product", "Lexicographic product M[N]")
    c.add_argument("--base", required=True)
    c.add_argument("--fiber", required=True)
    c.add_argument("--no-s", action="store_true", help="Do not expand by s")

    c = cmd("genproduct", "Generalized product M[N_a]")
    c.add_argument("--base", required=True)
    c.add_argument("--fibers", action="append", default=[], help="BASE_ELEMENT=PATH (one per base element)")
    c.add_argument("--no-s", action="store_true", help="Do not expand by s")

    c = cmd("qe", "Eliminate quantifiers over an s-expanded product")
    c.add_argument("--product", required=True)
    c.add_argument("--formula", required=True)
    c.add_argument("--verify", action="store_true", help="Compare input and output on every assignment")

    c = cmd("qe-witness", "Search a quantifier-free equivalent of a one-variable formula")
    c.add_argument("--product", required=True)
    c.add_argument("--formula", required=True)

    c = cmd("decompose", "Split a product formula into base and fiber formulas")
    c.add_argument("--product", required=True)
    c.add_argument("--formula", required=True)

    c = cmd("morleyize", "Name definable relations by fresh symbols")
    c.add_argument("--structure", required=True)
    c.add_argument("--formula", action="append", required=True, help="Formula with free variables (repeatable)")

    for name, help_text in (("autos", "Automorphism group"), ("orbits", "Orbit partition"), ("transitive", "Transitivity check")):
        c = cmd(name, help_text)
        c.add_argument("--structure", required=True)

    c = cmd("symcheck", "Is a substructure symmetrically embedded")
    c.add_argument("--sub", required=True)
    c.add_argument("--structure", required=True)

    c = cmd("ultrahom", "Ultrahomogeneity (or k-homogeneity) up to a size")
    c.add_argument("--structure", required=True)
    c.add_argument("--max-size", type=int, default=2)
    c.add_argument("--elementary", action="store_true", help="Extend rank-k elementary maps instead of partial isomorphisms")

    c = cmd("efgame", "Ehrenfeucht-Fraisse game")
    c.add_argument("--left", required=True)
    c.add_argument("--right", required=True)
    c.add_argument("--rounds", type=int, default=None)
    c.add_argument("--pebbles-left", default=None, help="Comma-separated elements")
    c.add_argument("--pebbles-right", default=None, help="Comma-separated elements")

    c = cmd("kelem", "Is a substructure k-elementary")
    c.add_argument("--sub", required=True)
    c.add_argument("--structure", required=True)

    c = cmd("mutual", "Rank-bounded mutual embeddability")
    c.add_argument("--left", required=True)
    c.add_argument("--right", required=True)
    c.add_argument("--embeddings", action="store_true", help="Require k-elementary embeddings in both directions")

    c = cmd("gen-hypergraph", "Generate a coloured hypergraph stage")
    c.add_argument("--arity", type=int, default=2)
    c.add_argument("--colors", type=int, default=2)
    c.add_argument("--size", type=int, required=True)
    c.add_argument("--complete", action="store_true", help="Class D: every n-set is coloured")
    c.add_argument("--stage", action="store_true", help="Deterministic stage instead of a random one")

    for name, help_text in (("class-check", "Class C/D axioms"), ("extension-check", "Extension property (A)/(A')")):
        c = cmd(name, help_text)
        c.add_argument("--structure", required=True)
        c.add_argument("--arity", type=int, default=2)
        c.add_argument("--colors", type=int, default=2)
        c.add_argument("--complete", action="store_true")
    # extension-check only
    c.add_argument("--x-size", type=int, default=1)
    c.add_argument("--variant", choices=EXTENSION_VARIANTS, default="A")

    c = cmd("color", "Colour by a one-variable formula")
    c.add_argument("--structure", required=True)
    c.add_argument("--formula", required=True)

    c = cmd("staircase", "Staircase colouring of a constant-fiber product")
    c.add_argument("--product", required=True)
    c.add_argument("--base-order", default=None, help="Comma-separated base enumeration")

    c = cmd("find-copy", "Search a monochromatic copy")
    c.add_argument("--structure", required=True)
    c.add_argument("--coloring", required=True)
    c.add_argument("--target", required=True)
    c.add_argument("--symmetric", action="store_true")
    c.add_argument("--elementary", action="store_true", help="Require a rank-k elementary copy")

    c = cmd("assemble", "Assemble a monochromatic product copy from fiber pieces")
    c.add_argument("--product", required=True)
    c.add_argument("--coloring", required=True)
    c.add_argument("--fiber-target", required=True)
    c.add_argument("--base-target", required=True)
    c.add_argument("--elementary", action="store_true", help="Also check rank-k elementarity")

    c = cmd("census", "Orbit census of a product")
    c.add_argument("--product", required=True)
    return p


def _render(payload: Any, text: bool) -> str:
    if text and isinstance(payload, ValidationReport):
        return format_report_text(payload, title="Product validation")
    if text and isinstance(payload, Verdict):
        return format_report_text(payload)
    return dumps_report(payload)


def main(argv: Optional[list[str]] = None) -> int:
    try:
        args = _build_arg_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        params = _params(args)
        payload, passed = COMMANDS[args.command](args, params)
    except ResourceError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (WorkbenchError, argparse.ArgumentTypeError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_INPUT

    rendered = _render(payload, args.text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(rendered + "\n")
        print(f"Saved: {args.out}")
    else:
        print(rendered)
    return EXIT_NEGATIVE if passed is False else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
