"""Command line interface.

Commands: check, canonicalize, gamma-check, pullback, product-check,
morphism-check.  Exit codes are part of the machine contract:

  0   success (check: valid extension with at least one witness)
  1   the analysed property fails (no witness / condition failure /
      obstruction found)
  2   validation failure (extension or morphism laws broken)
  64  file, parse, or usage errors

Plain output is line oriented and stable across runs and worker counts;
--json emits a versioned document instead.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from . import canonical as can
from . import extension as ext
from . import gammabuild as gb
from .algebra import DEFAULT_BUDGET, FnTable, is_homomorphism
from .errors import (
    ConditionsFailed,
    FileFormatError,
    IotaNotInY,
    ToolkitError,
)
from .serialize import (
    _load_json,
    canonical_to_obj,
    dump_json,
    extension_to_obj,
    gamma_from_obj,
    hom_from_obj,
    load_extension,
    load_morphism,
    algebra_from_obj,
    theta_from_obj,
    to_text,
)
from .terms import ThetaSpec, format_term, parse_term

JSON_SCHEMA = "wsext.report/1"

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INVALID = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    """argparse maps usage errors to exit code 2; we reserve 2 for
    validation failures, so remap them to 64."""

    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--theta", metavar="FILE", help="witness term file")
    p.add_argument("--theta-vars", metavar="CSV",
                   help="inline variable list, e.g. x1,x2,y (overrides --theta)")
    p.add_argument("--theta-term", metavar="SEXPR",
                   help="inline term text, e.g. '(+ x1 (+ y x2))'")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="search node budget (default %(default)s)")
    p.add_argument("--workers", type=int, default=1,
                   help="worker threads for element-wise computations")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def _resolve_theta(args, signature) -> ThetaSpec:
    """Inline --theta-vars/--theta-term wins over --theta FILE."""
    if args.theta_vars or args.theta_term:
        if not (args.theta_vars and args.theta_term):
            raise FileFormatError("--theta-vars and --theta-term must be given together")
        vars_ = [v.strip() for v in args.theta_vars.split(",") if v.strip()]
        term = parse_term(args.theta_term, signature, vars_)
        return ThetaSpec(tuple(vars_), term)
    if args.theta:
        return theta_from_obj(args.theta, signature, base_dir=Path.cwd())
    raise FileFormatError("a witness term is required (--theta or --theta-vars/--theta-term)")


def _emit(lines: list[str]) -> None:
    sys.stdout.write("\n".join(lines) + "\n")


def _emit_json(payload: dict) -> None:
    sys.stdout.write(to_text(payload))


# -- check -----------------------------------------------------------------------

def cmd_check(args) -> int:
    e, file_witness, _ = load_extension(args.extension)
    theta = _resolve_theta(args, e.A.signature)
    rep = ext.validate_split_extension(e)
    n = theta.n
    ambient = e.X.size ** n * e.B.size

    payload = {
        "schema": JSON_SCHEMA,
        "command": "check",
        "valid": rep.ok,
        "validation": rep.to_json(),
        "theta": {"vars": list(theta.vars), "term": format_term(theta.term)},
        "n": n,
        "sizes": {
            "X": e.X.size, "A": e.A.size, "B": e.B.size,
            "X_times_B": e.X.size * e.B.size,
            "ambient": ambient,
        },
    }
    lines = [
        f"extension: {args.extension}",
        f"theta: {format_term(theta.term)} over ({', '.join(theta.vars)})",
        f"validation: {'PASS' if rep.ok else 'FAIL'}",
    ]
    if not rep.ok:
        lines.extend("  " + ln for ln in rep.render().splitlines())
        payload["witness_count"] = 0
        payload["witnesses"] = []
        if args.json:
            _emit_json(payload)
        else:
            _emit(lines)
        return EXIT_INVALID

    normalize = not args.no_normalize
    count = ext.count_witnesses(e, theta, normalize=normalize,
                                budget=args.budget, workers=args.workers)
    witnesses = ext.find_witnesses(e, theta, normalize=normalize,
                                   limit=args.limit, budget=args.budget,
                                   workers=args.workers)
    schreier = ext.is_schreier(e, theta, workers=args.workers)
    payload.update({
        "normalized": normalize,
        "limit": args.limit,
        "witness_count": count,
        "witnesses": [[list(q.values) for q in w.q] for w in witnesses],
        "schreier": schreier,
        "file_witness_present": file_witness is not None,
    })
    lines += [
        f"|X| = {e.X.size}, |A| = {e.A.size}, |B| = {e.B.size}",
        f"|X x B| = {e.X.size * e.B.size}",
        f"|X^n x B| = {ambient} (n = {n})",
        f"schreier: {'true' if schreier else 'false'}",
        f"witnesses: {count}{' (normalized)' if normalize else ''}"
        f" (showing up to {args.limit})",
    ]
    for i, w in enumerate(witnesses):
        qs = "; ".join(f"q{j + 1} = {list(q.values)}" for j, q in enumerate(w.q))
        lines.append(f"witness[{i}]: {qs}")
    if args.json:
        _emit_json(payload)
    else:
        _emit(lines)
    return EXIT_OK if count > 0 else EXIT_NEGATIVE


# -- canonicalize -----------------------------------------------------------------

def cmd_canonicalize(args) -> int:
    e, file_witness, axioms = load_extension(args.extension)
    theta = _resolve_theta(args, e.A.signature)
    rep = ext.validate_split_extension(e)
    if not rep.ok:
        _emit(["validation: FAIL"] + ["  " + ln for ln in rep.render().splitlines()])
        return EXIT_INVALID

    usable_file_witness = (file_witness is not None
                           and file_witness.n == theta.n)
    if args.witness_index is None and usable_file_witness:
        witness = file_witness
    else:
        index = args.witness_index or 0
        found = ext.find_witnesses(e, theta, limit=index + 1,
                                   budget=args.budget, workers=args.workers)
        if len(found) <= index:
            _emit([f"no witness at index {index} "
                   f"(found {len(found)})"])
            return EXIT_NEGATIVE
        witness = found[index]

    c = can.build_canonical(e, theta, witness)
    verification = can.verify_isomorphism(e, c, witness)
    doc = canonical_to_obj(c, axioms=axioms, verification=verification)
    if args.out:
        dump_json(doc, args.out)

    core = [en for en in verification.entries if en.name != "section_transport"]
    core_ok = all(en.ok for en in core)
    if args.json:
        _emit_json({
            "schema": JSON_SCHEMA,
            "command": "canonicalize",
            "carrier_size": len(c.Y),
            "Y": [list(t) for t in c.Y],
            "verification": verification.to_json(),
            "out": args.out,
        })
    else:
        lines = [
            f"canonical carrier: {len(c.Y)} tuples",
            *(f"  Y[{i}] = {list(t)}" for i, t in enumerate(c.Y)),
            "verification:",
            *("  " + ln for ln in verification.render().splitlines()),
        ]
        if args.out:
            lines.append(f"wrote {args.out}")
        _emit(lines)
    # the section entry records whether this witness gives the zero-tuple
    # section; the isomorphism itself is the core contract
    return EXIT_OK if core_ok else EXIT_INVALID


# -- gamma-check --------------------------------------------------------------------

def cmd_gamma_check(args) -> int:
    g = gamma_from_obj(_load_json(Path(args.gamma)), Path(args.gamma).parent)
    rep = gb.check_conditions(g, budget=args.budget)
    payload = {
        "schema": JSON_SCHEMA,
        "command": "gamma-check",
        "conditions": rep.to_json(),
        "carrier_size": len(gb.compute_Y(g)),
    }
    lines = ["conditions:"] + ["  " + ln for ln in rep.render().splitlines()]
    code = EXIT_OK if rep.ok else EXIT_NEGATIVE
    if rep.ok and args.rebuild:
        try:
            e2, w2 = gb.build_extension_from_gamma(g, budget=args.budget)
        except IotaNotInY as exc:
            payload["rebuild"] = {"ok": False, "error": str(exc)}
            lines.append(f"rebuild: FAIL [{exc}]")
            code = EXIT_NEGATIVE
        else:
            dump_json(extension_to_obj(e2, witness=w2, axioms=g.axioms), args.rebuild)
            payload["rebuild"] = {"ok": True, "out": args.rebuild}
            lines.append(f"rebuild: wrote {args.rebuild}")
    if args.json:
        _emit_json(payload)
    else:
        _emit(lines)
    return code


# -- pullback ------------------------------------------------------------------------

def cmd_pullback(args) -> int:
    e, file_witness, axioms = load_extension(args.extension)
    theta = _resolve_theta(args, e.A.signature)
    B_prime, f_values = hom_from_obj(_load_json(Path(args.hom)), Path(args.hom).parent)
    f = FnTable(B_prime.size, e.B.size, tuple(f_values))
    res = is_homomorphism(f, B_prime, e.B)
    if not res:
        _emit([f"f is not a homomorphism: {res.counterexample}"])
        return EXIT_INVALID

    if file_witness is not None and file_witness.n == theta.n:
        witness = file_witness
    else:
        found = ext.find_witnesses(e, theta, limit=1, budget=args.budget,
                                   workers=args.workers)
        if not found:
            _emit(["no witness for the source extension"])
            return EXIT_NEGATIVE
        witness = found[0]

    e2, w2 = ext.pullback_extension(e, theta, B_prime, f, witness)
    doc = extension_to_obj(e2, witness=w2, axioms=axioms)
    if args.out:
        dump_json(doc, args.out)
    if args.json:
        _emit_json({
            "schema": JSON_SCHEMA,
            "command": "pullback",
            "middle_size": e2.A.size,
            "witness": [list(q.values) for q in w2.q],
            "out": args.out,
        })
    else:
        lines = [
            f"pullback middle algebra: {e2.A.size} elements",
            *(f"q{j + 1}' = {list(q.values)}" for j, q in enumerate(w2.q)),
        ]
        if args.out:
            lines.append(f"wrote {args.out}")
        _emit(lines)
    return EXIT_OK


# -- product-check ----------------------------------------------------------------------

def cmd_product_check(args) -> int:
    X = algebra_from_obj(_load_json(Path(args.algebra)), Path(args.algebra).parent)
    theta = _resolve_theta(args, X.signature)
    res = ext.product_extension_check(X, theta)
    if args.json:
        _emit_json({
            "schema": JSON_SCHEMA,
            "command": "product-check",
            "ok": res.ok,
            "q": None if res.q is None else [list(q.values) for q in res.q],
            "obstruction": res.obstruction,
        })
    elif res.ok:
        _emit(["product extensions admit witnesses"]
              + [f"q{j + 1} = {list(q.values)}" for j, q in enumerate(res.q)])
    else:
        _emit([f"obstruction: element {res.obstruction} is not "
               "reachable as theta(ys, 0)"])
    return EXIT_OK if res.ok else EXIT_NEGATIVE


# -- morphism-check ----------------------------------------------------------------------

def cmd_morphism_check(args) -> int:
    m = load_morphism(args.morphism)
    val = ext.validate_morphism(m)
    payload = {
        "schema": JSON_SCHEMA,
        "command": "morphism-check",
        "valid": val.ok,
        "validation": val.to_json(),
    }
    lines = ["morphism validation:"] + ["  " + ln for ln in val.render().splitlines()]
    if not val.ok:
        if args.json:
            _emit_json(payload)
        else:
            _emit(lines)
        return EXIT_INVALID
    surj = ext.check_morphism_surjectivity(m)
    payload["surjectivity"] = surj.to_json()
    lines += ["surjectivity:"] + ["  " + ln for ln in surj.render().splitlines()]
    if args.json:
        _emit_json(payload)
    else:
        _emit(lines)
    return EXIT_OK if surj.ok else EXIT_NEGATIVE


# -- entry point ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="wsext", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate an extension and search witnesses")
    p.add_argument("extension")
    p.add_argument("--no-normalize", action="store_true",
                   help="do not pin q_i(0) = 0 during the search")
    p.add_argument("--limit", type=int, default=10,
                   help="witnesses to materialize (default %(default)s)")
    _add_common(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("canonicalize", help="write the canonical tuple form")
    p.add_argument("extension")
    p.add_argument("-o", "--out", help="output file")
    p.add_argument("--witness-index", type=int, default=None,
                   help="use the i-th enumerated witness instead of the file's")
    _add_common(p)
    p.set_defaults(fn=cmd_canonicalize)

    p = sub.add_parser("gamma-check", help="validate action data (four conditions)")
    p.add_argument("gamma")
    p.add_argument("--rebuild", metavar="OUT",
                   help="also rebuild the extension and write it here")
    _add_common(p)
    p.set_defaults(fn=cmd_gamma_check)

    p = sub.add_parser("pullback", help="pull an extension back along a homomorphism")
    p.add_argument("extension")
    p.add_argument("hom", help="JSON file with B_prime and the value array f")
    p.add_argument("-o", "--out", help="output extension file")
    _add_common(p)
    p.set_defaults(fn=cmd_pullback)

    p = sub.add_parser("product-check",
                       help="test the product-extension condition on an algebra")
    p.add_argument("algebra")
    _add_common(p)
    p.set_defaults(fn=cmd_product_check)

    p = sub.add_parser("morphism-check", help="validate a morphism of extensions")
    p.add_argument("morphism")
    _add_common(p)
    p.set_defaults(fn=cmd_morphism_check)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (FileFormatError, ConditionsFailed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, FileFormatError) else EXIT_NEGATIVE
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
