"""Command-line front end.

Exit status: 0 success, 1 verification failure, 2 input error, 3 budget or
genericity failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

from . import __version__
from .engine import (DEFAULT_RETRIES, MODES, degree_bound, eliminate_with_bound,
                     verify_certificate)
from .errors import (BoundViolationError, BudgetError, ElimError, GenericityError, NotMember,
                     ParseError, PreconditionError, StructuralError)
from .groebner import DEFAULT_BUDGET, Budget
from .ideal import check_noether_position, dimension
from .parsing import parse_field, parse_system
from .perron import perron_relation
from .serialize import (SCHEMA_VERSION, certificate_to_dict, dimension_to_dict, dumps,
                        field_name, loads_certificate, perron_to_dict)

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3

log = logging.getLogger("elimcert")


def _field_arg(text: str):
    try:
        return parse_field(text)
    except (ParseError, PreconditionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", nargs="?", default=None,
                        help="system file (one polynomial per line); '-' reads stdin")
    common.add_argument("-e", "--expr", help="inline system, polynomials separated by ';'")
    common.add_argument("--field", type=_field_arg, default=None, help="q or fp:<prime>")
    common.add_argument("--nvars", type=int, default=None,
                        help="number of variables (default: largest index used)")
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET.max_terms, metavar="TERMS",
                        help="cap on stored basis terms per Groebner computation")
    common.add_argument("-v", "--verbose", action="store_true", help="log resampling decisions")

    p = argparse.ArgumentParser(prog="elimcert",
                                description="Elimination with certified degree bounds.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("dim", parents=[common], help="dimension of the zero set")

    el = sub.add_parser("eliminate", parents=[common], help="eliminant with certificate")
    el.add_argument("--seed", type=int, default=0, help="seed for every random choice (default 0)")
    el.add_argument("--mode", choices=MODES, default="generic",
                    help="generic: state the result after a random change of coordinates; "
                         "original: state it for the input generators")
    el.add_argument("--retries", type=int, default=DEFAULT_RETRIES,
                    help="redraws allowed when a genericity check fails")
    el.add_argument("--allow-empty-variety", action="store_true",
                    help="certify a nonzero constant when V(I) is empty")
    el.add_argument("--bound-only", action="store_true", help="report q and the bound only")
    el.add_argument("--parametric", action="store_true",
                    help="original mode: search over k(t) and deform back")
    el.add_argument("--timings", action="store_true", help="include wall-clock timings")

    sub.add_parser("certify-check", parents=[common], help="verify a certificate JSON file")

    pr = sub.add_parser("perron", parents=[common], help="relation among n+1 polynomials")
    pr.add_argument("--method", choices=("linear", "groebner"), default="linear",
                    help="undetermined coefficients (default) or a graph-ideal Groebner basis")

    sub.add_parser("noether", parents=[common], help="is the zero set in Noether position")
    return p


def _read_text(args) -> str:
    if args.expr is not None:
        if args.input is not None:
            raise PreconditionError("give either an input file or --expr, not both")
        return args.expr.replace(";", "\n")
    if args.input is None or args.input == "-":
        return sys.stdin.read()
    with open(args.input, encoding="utf-8") as fh:
        return fh.read()


def _load_system(args):
    system = parse_system(_read_text(args), field=args.field, nvars=args.nvars)
    if not system.polys:
        raise PreconditionError("the input contains no polynomials")
    return system


def _emit(args, doc: dict, lines: Sequence[str]):
    if args.json:
        print(dumps(doc))
    else:
        print("\n".join(lines))


def _cmd_dim(args, budget) -> int:
    system = _load_system(args)
    rep = dimension(system.polys, budget=budget)
    doc = dimension_to_dict(rep, system.nvars)
    lines = [f"n = {system.nvars}", f"q = {rep.q}",
             "witness = " + (", ".join(f"x{i}" for i in rep.witness) or "(empty)")]
    _emit(args, doc, lines)
    return EXIT_OK


def _cert_lines(doc) -> list[str]:
    lines = [f"field = {doc['field']}", f"n = {doc['n']}", f"s = {doc['s']}", f"q = {doc['q']}",
             f"mode = {doc['mode']}", f"seed = {doc['seed']}",
             f"degrees = {doc['degrees']}", f"bound = {doc['bound']}",
             f"degPhi = {doc['degPhi']}", f"maxProductDegree = {doc['maxProductDegree']}",
             f"phi = {doc['phi']}"]
    for j, c in enumerate(doc["cofactors"], start=1):
        lines.append(f"g{j} = {c}")
    lines.append(f"verified = {str(doc['verified']).lower()}")
    for it in doc["items"]:
        lines.append(f"  [{'ok' if it['passed'] else 'FAIL'}] {it['name']}: {it['detail']}")
    return lines


def _cmd_eliminate(args, budget) -> int:
    system = _load_system(args)
    gens = system.polys
    if any(g.is_zero() for g in gens):
        raise PreconditionError("zero generators are not allowed")
    if args.bound_only:
        rep = dimension(gens, budget=budget)
        if rep.q < 0 and not args.allow_empty_variety:
            raise PreconditionError("V(I) is empty; pass --allow-empty-variety")
        degs = sorted((g.degree() for g in gens), reverse=True)
        b = degree_bound(degs, system.nvars, rep.q)
        doc = {"schemaVersion": SCHEMA_VERSION, "kind": "bound", "field": field_name(system.field),
               "n": system.nvars, "s": len(gens), "q": rep.q, "degrees": [g.degree() for g in gens],
               "bound": b}
        _emit(args, doc, [f"n = {system.nvars}", f"s = {len(gens)}", f"q = {rep.q}",
                          f"degrees = {doc['degrees']}", f"bound = {b}"])
        return EXIT_OK
    cert = eliminate_with_bound(gens, seed=args.seed, mode=args.mode, retries=args.retries,
                                budget=budget, allow_empty=args.allow_empty_variety,
                                parametric=args.parametric)
    verdict = verify_certificate(cert)
    doc = certificate_to_dict(cert, verdict, timings=args.timings)
    lines = _cert_lines(doc)
    if args.timings:
        lines.append("timingsMs = " + ", ".join(f"{k}: {v}" for k, v in cert.timings_ms.items()))
    _emit(args, doc, lines)
    return EXIT_OK if verdict.ok else EXIT_VERIFY


def _cmd_certify_check(args, budget) -> int:
    cert = loads_certificate(_read_text(args))
    verdict = verify_certificate(cert)
    doc = {"schemaVersion": SCHEMA_VERSION, "kind": "verdict", "verified": verdict.ok,
           "failed": verdict.failures(),
           "items": [{"name": it.name, "passed": it.passed, "detail": it.detail}
                     for it in verdict.items]}
    lines = [f"verified = {str(verdict.ok).lower()}"]
    lines += [f"  [{'ok' if it.passed else 'FAIL'}] {it.name}: {it.detail}" for it in verdict.items]
    _emit(args, doc, lines)
    return EXIT_OK if verdict.ok else EXIT_VERIFY


def _cmd_perron(args, budget) -> int:
    system = _load_system(args)
    rel = perron_relation(system.polys, method=args.method, budget=budget)
    doc = perron_to_dict(rel)
    _emit(args, doc, [f"W = {doc['W']}", f"weights = {doc['weights']}",
                      f"weightedDegree = {doc['weightedDegree']}", f"bound = {doc['bound']}",
                      f"verified = {str(doc['verified']).lower()}"])
    return EXIT_OK if doc["verified"] else EXIT_VERIFY


def _cmd_noether(args, budget) -> int:
    system = _load_system(args)
    rep = dimension(system.polys, budget=budget)
    ok = check_noether_position(system.polys, rep.q, budget=budget, report=rep)
    doc = {"schemaVersion": SCHEMA_VERSION, "kind": "noether", "n": system.nvars, "q": rep.q,
           "noetherPosition": ok}
    _emit(args, doc, [f"q = {rep.q}", f"noetherPosition = {str(ok).lower()}"])
    return EXIT_OK


COMMANDS = {"dim": _cmd_dim, "eliminate": _cmd_eliminate, "certify-check": _cmd_certify_check,
            "perron": _cmd_perron, "noether": _cmd_noether}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    budget = Budget(max_pairs=DEFAULT_BUDGET.max_pairs, max_terms=args.budget)
    try:
        return COMMANDS[args.command](args, budget)
    except (ParseError, PreconditionError, StructuralError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (BudgetError, GenericityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except BoundViolationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (NotMember, ElimError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
