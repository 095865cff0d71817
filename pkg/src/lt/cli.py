"""Command-line front end.

Verdicts are printed as JSON with a stable key order so identical runs
are byte-identical; timing is only included when --timing is given.
Exit codes: 0 = positive logical result, 1 = negative logical result
(countermodel, counterexample or proof violation), 2 = usage or parse
error, 3 = budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .algebra import Algebra, Denotation
from .entailment import (
    DEFAULT_CAP,
    Countermodel,
    default_max_n,
    find_countermodel,
    labelled_entails,
)
from .errors import BudgetExceededError, LTError, ParseError
from .proofcheck import check, load_assumptions, load_derivation
from .ptplus import PTDenotation, format_team, f_map, pt_entails, pt_eval, verify_f_representation
from .semantics import Homomorphism, evaluate
from .syntax import (
    format_formula,
    parse_entailment_query,
    parse_formula,
    parse_labelled_query,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2
EXIT_BUDGET = 3


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _elapsed_field(obj: dict, started: float, timing: bool) -> dict:
    if timing:
        obj["elapsed_ms"] = round((time.monotonic() - started) * 1000, 3)
    return obj


def _parse_assignment(algebra: Algebra, specs: list[str]) -> Homomorphism:
    assignment: dict[int, Denotation] = {}
    for spec in specs:
        spec = spec.strip()
        if not spec:
            continue
        name, _, value = spec.partition("=")
        name = name.strip()
        if not name.startswith("P") or not name[1:].isdigit():
            raise LTError(f"bad assignment target {name!r}; use P<digits>=[bits,...]")
        value = value.strip()
        if not (value.startswith("[") and value.endswith("]")):
            raise LTError(f"bad assignment value {value!r}; use e.g. [01,10] or []")
        inner = value[1:-1].strip()
        parts = [p.strip().strip('"') for p in inner.split(",")] if inner else []
        try:
            d = Denotation.from_strings(algebra, parts)
        except ValueError as exc:
            raise LTError(str(exc)) from None
        assignment[int(name[1:])] = d
    return Homomorphism(algebra, assignment)


def _countermodel_obj(cm: Countermodel) -> dict:
    return cm.to_json_obj()


# -- subcommand handlers


def _cmd_parse(args) -> int:
    formula = parse_formula(args.expr)
    print(repr(formula))
    return EXIT_OK


def _cmd_expand(args) -> int:
    from .syntax import expand

    print(format_formula(expand(parse_formula(args.expr))))
    return EXIT_OK


def _cmd_eval(args) -> int:
    algebra = Algebra(args.n)
    hom = _parse_assignment(algebra, args.assign or [])
    formula = parse_formula(args.expr)
    denotation = evaluate(hom, formula, native_derived=args.native)
    _emit({"algebra_n": algebra.n, "denotation": denotation.to_strings()})
    return EXIT_OK


def _read_premises_file(path: str):
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(parse_formula(line))
    return tuple(out)


def _cmd_entail(args) -> int:
    started = time.monotonic()
    if args.premises_file:
        premises = _read_premises_file(args.premises_file)
        conclusion = parse_formula(args.query)
    else:
        premises, conclusion = parse_entailment_query(args.query)
    max_n = args.max_n if args.max_n is not None else default_max_n()
    report = find_countermodel(
        premises,
        conclusion,
        max_n=max_n,
        class_restriction=args.class_restriction,
        cap=args.cap,
        jobs=args.jobs,
    )
    verdict: dict = {
        "status": "countermodel" if report.status == "countermodel" else (
            "entailed_up_to_n" if report.status == "exhausted" else "budget_exceeded"
        ),
        "n": report.completed_n if report.countermodel is None else report.countermodel.algebra.n,
        "max_n": max_n,
        "class": args.class_restriction,
        "cap": args.cap,
        "jobs": args.jobs,
    }
    if report.countermodel is not None:
        verdict["countermodel"] = _countermodel_obj(report.countermodel)
        verdict["witness"] = verdict["countermodel"]["witness"]
    if report.note:
        verdict["note"] = report.note
    _emit(_elapsed_field(verdict, started, args.timing))
    if report.status == "countermodel":
        return EXIT_NEGATIVE
    if report.status == "budget_exceeded":
        return EXIT_BUDGET
    return EXIT_OK


def _cmd_lentail(args) -> int:
    started = time.monotonic()
    gamma, conclusion = parse_labelled_query(args.query)
    max_n = args.max_n if args.max_n is not None else default_max_n()
    verdict: dict = {
        "status": "entailed_up_to_n",
        "n": -1,
        "max_n": max_n,
        "cap": args.cap,
        "jobs": args.jobs,
    }
    code = EXIT_OK
    for n in range(max_n + 1):
        try:
            entailed, cm = labelled_entails(n, gamma, conclusion, cap=args.cap, jobs=args.jobs)
        except BudgetExceededError as exc:
            verdict["status"] = "budget_exceeded"
            verdict["note"] = str(exc)
            code = EXIT_BUDGET
            break
        if not entailed:
            assert cm is not None
            verdict["status"] = "countermodel"
            verdict["n"] = n
            verdict["countermodel"] = _countermodel_obj(cm)
            verdict["witness"] = verdict["countermodel"]["witness"]
            code = EXIT_NEGATIVE
            break
        verdict["n"] = n
    _emit(_elapsed_field(verdict, started, args.timing))
    return code


def _cmd_check_proof(args) -> int:
    derivation = load_derivation(args.file)
    gamma = load_assumptions(args.assumptions) if args.assumptions else []
    result = check(derivation, gamma)
    if result.ok:
        _emit({"status": "ok"})
        return EXIT_OK
    _emit(
        {
            "status": "violation",
            "path": list(result.path or ()),
            "reason": result.reason,
            "message": result.message,
        }
    )
    return EXIT_NEGATIVE


def _cmd_pt_eval(args) -> int:
    denotation: PTDenotation = pt_eval(parse_formula(args.expr), args.k)
    _emit({"k": args.k, "denotation": denotation.to_lists()})
    return EXIT_OK


def _cmd_pt_entail(args) -> int:
    premises, conclusion = parse_entailment_query(args.query)
    entailed, counter_team = pt_entails(premises, conclusion, args.k)
    verdict: dict = {"status": "entailed" if entailed else "countermodel", "k": args.k}
    if not entailed:
        verdict["counter_team"] = format_team(counter_team, args.k)
    _emit(verdict)
    return EXIT_OK if entailed else EXIT_NEGATIVE


def _load_hom_file(path: str) -> Homomorphism:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    algebra = Algebra(int(obj["n"]))
    assignment = {}
    for name, bits in obj.get("assignment", {}).items():
        if not name.startswith("P") or not name[1:].isdigit():
            raise LTError(f"bad variable name {name!r} in homomorphism file")
        assignment[int(name[1:])] = Denotation.from_strings(algebra, list(bits))
    return Homomorphism(algebra, assignment)


def _cmd_bridge_verify_f(args) -> int:
    hom = _load_hom_file(args.hfile)
    ok = verify_f_representation(hom, args.k, depth=args.depth)
    fmap = f_map(hom, args.k)
    _emit(
        {
            "status": "ok" if ok else "mismatch",
            "n": hom.algebra.n,
            "k": args.k,
            "depth": args.depth,
            "atom_valuations": {
                hom.algebra.format_element(1 << s): format(
                    fmap.valuation_of(s), f"0{args.k}b"
                ) if args.k else ""
                for s in range(hom.algebra.n)
            },
        }
    )
    return EXIT_OK if ok else EXIT_NEGATIVE


def _cmd_classes_principal_check(args) -> int:
    algebra = Algebra(args.n)
    try:
        texts = json.loads(args.denotation)
    except json.JSONDecodeError as exc:
        raise LTError(f"denotation must be JSON like [\"01\",\"10\"]: {exc}") from None
    d = Denotation.from_strings(algebra, [str(t) for t in texts])
    principal = d.is_principal_ideal()
    obj = {
        "n": args.n,
        "denotation": d.to_strings(),
        "is_principal_ideal": principal,
    }
    if principal:
        obj["max_element"] = algebra.format_element(d.join_of())
    _emit(obj)
    return EXIT_OK if principal else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="lt", description="Workbench for the logic of teams."
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a formula and dump its tree")
    p.add_argument("expr")
    p.set_defaults(handler=_cmd_parse)

    p = sub.add_parser("expand", help="expand derived connectives to core syntax")
    p.add_argument("expr")
    p.set_defaults(handler=_cmd_expand)

    p = sub.add_parser("eval", help="evaluate a formula under an assignment")
    p.add_argument("--n", type=int, required=True, help="number of algebra atoms")
    p.add_argument(
        "--assign",
        action="append",
        default=[],
        help="variable assignment, e.g. P0=[01,10]; repeatable; '' for none",
    )
    p.add_argument("--native", action="store_true", help="evaluate derived connectives natively")
    p.add_argument("expr")
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("entail", help="countermodel search for 'premises |- conclusion'")
    p.add_argument("--max-n", type=int, dest="max_n", default=None)
    p.add_argument(
        "--class",
        dest="class_restriction",
        choices=["all", "principal_variables"],
        default="all",
    )
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true")
    p.add_argument("--premises-file", dest="premises_file", default=None)
    p.add_argument("query", help="'phi1, phi2 |- psi', or just psi with --premises-file")
    p.set_defaults(handler=_cmd_entail)

    p = sub.add_parser("lentail", help="labelled countermodel search")
    p.add_argument("--max-n", type=int, dest="max_n", default=None)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true")
    p.add_argument("query", help="'a1:phi1, a2:phi2 |- b:psi'")
    p.set_defaults(handler=_cmd_lentail)

    p = sub.add_parser("check-proof", help="check a derivation file")
    p.add_argument("file")
    p.add_argument("--assumptions", default=None, help="file with one labelled formula per line")
    p.set_defaults(handler=_cmd_check_proof)

    pt = sub.add_parser("pt", help="valuational team semantics")
    ptsub = pt.add_subparsers(dest="pt_command", required=True)
    p = ptsub.add_parser("eval", help="evaluate a PT+ formula over teams")
    p.add_argument("--k", type=int, required=True, help="number of variables")
    p.add_argument("expr")
    p.set_defaults(handler=_cmd_pt_eval)
    p = ptsub.add_parser("entail", help="PT+ entailment check")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("query")
    p.set_defaults(handler=_cmd_pt_entail)

    bridge = sub.add_parser("bridge", help="bridges between the two semantics")
    bsub = bridge.add_subparsers(dest="bridge_command", required=True)
    p = bsub.add_parser(
        "verify-f", help="check the representation map for a homomorphism file"
    )
    p.add_argument("hfile", help="JSON {n, assignment: {P0: [bits,...], ...}}")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--depth", type=int, default=3)
    p.set_defaults(handler=_cmd_bridge_verify_f)

    classes = sub.add_parser("classes", help="homomorphism class tools")
    csub = classes.add_subparsers(dest="classes_command", required=True)
    p = csub.add_parser("principal-check", help="is a denotation a principal ideal?")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("denotation", help='JSON list of element bit-strings, e.g. ["00","01"]')
    p.set_defaults(handler=_cmd_classes_principal_check)

    return top


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else EXIT_OK
    try:
        return args.handler(args)
    except ParseError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_ERROR
    except BudgetExceededError as exc:
        _emit({"status": "budget_exceeded", "note": str(exc)})
        return EXIT_BUDGET
    except (LTError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def entrypoint() -> None:
    sys.exit(main())
