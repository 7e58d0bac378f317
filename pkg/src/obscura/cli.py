"""
Command-line front end.

Every command writes one JSON report per line on stdout (or a text line with
``--format text``) and a short summary on stderr.  Exit codes: 0 when every
report passes, 1 on FAIL / REFUSED / NOT_FOUND, 2 on usage or spec errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from obscura import factor_systems as fs
from obscura.deformed_algebra import (
    DoubleAlgebra,
    GradedAlgebra,
    Mode,
    WeylAlgebra,
    nonassociativity_report,
    star_sort,
)
from obscura.errors import ObscuraError, RefusedError
from obscura.grading import DEFAULT_MAX_GROUP_SIZE, enumerate_automorphisms, format_grade
from obscura.lie_bracket import AMBIENTS, PREFACTORS, BracketContext, check_jacobi, check_skew
from obscura.membership import check_obscure_axioms
from obscura.monomials import NaryApp, leaves
from obscura.nary_algebra import TERNARY_ORDER, NaryMode, all_words, check_total_commutativity, normalize_nary
from obscura.report import PASS, REFUSED, Report
from obscura.spec_loader import (
    evaluate,
    load_spec_file,
    parse_expression,
    parse_grade,
    parse_grade_key,
    parse_scalar,
    resolve_spec_path,
)


class UsageError(ObscuraError):
    pass


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=None, help="report format (default json)")
    common.add_argument("--max-group-size", type=int, default=DEFAULT_MAX_GROUP_SIZE)
    common.add_argument("--budget", type=int, default=fs.DEFAULT_BUDGET, help="tuple enumeration budget")
    common.add_argument("--timing", action="store_true", help="include elapsed time in reports")

    p = argparse.ArgumentParser(prog="obscura", description="Exact checks for graded, membership deformed algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="verify a law on a spec")
    checks = check.add_subparsers(dest="law", required=True)
    for name in ("cocycle", "epsilon", "deformed-cocycle", "total-commutativity"):
        c = checks.add_parser(name, parents=[common])
        c.add_argument("spec")
    c = checks.add_parser("obscure-axioms", parents=[common])
    c.add_argument("spec")
    c.add_argument("--max-length", type=int, default=2)
    for name in ("jacobi", "skew"):
        c = checks.add_parser(name, parents=[common])
        c.add_argument("spec")
        c.add_argument("--ambient", choices=AMBIENTS, default="normalized")
        c.add_argument("--prefactor", choices=PREFACTORS, default="leading")

    w = sub.add_parser("witness", help="search for witnesses")
    ws = w.add_subparsers(dest="kind", required=True)
    c = ws.add_parser("nonassoc", parents=[common])
    c.add_argument("spec")

    blurbs = {"normalize": "rewrite an expression to normal form", "weyl-reduce": "reduce a Weyl word to y-before-x order"}
    for name, blurb in blurbs.items():
        c = sub.add_parser(name, parents=[common], help=blurb)
        c.add_argument("expr")
        c.add_argument("--spec", default=None, help="spec file (default $OBSCURA_SPEC)")

    c = sub.add_parser("epsilon", parents=[common], help="evaluate eps(g, h)")
    c.add_argument("g")
    c.add_argument("h")
    c.add_argument("--spec", default=None)

    c = sub.add_parser("nary-vector", parents=[common], help="commutation factor vector at a grade tuple")
    c.add_argument("grades", help='e.g. "(1),(0),(1)"')
    c.add_argument("--spec", default=None)

    c = sub.add_parser("equiv", parents=[common], help="search for a lambda relating two factor systems")
    c.add_argument("spec_a")
    c.add_argument("spec_b")
    c.add_argument("--pool", default="1,-1,2,-2,1/2,-1/2", help="comma separated candidate lambda values")

    c = sub.add_parser("pullback", parents=[common], help="pull the factor system back along an automorphism")
    c.add_argument("index", type=int)
    c.add_argument("--spec", default=None)
    return p


# -- commands ---------------------------------------------------------------------------

def _spec(args, attr="spec"):
    value = getattr(args, attr, None)
    return load_spec_file(resolve_spec_path(value) if attr == "spec" else value)


def _need(value, what):
    if value is None:
        raise UsageError(f"the spec does not define {what}")
    return value


def cmd_check(args):
    spec = _spec(args)
    law = args.law
    if law == "cocycle":
        out = []
        if spec.pi is not None:
            out.append(fs.check_cocycle_binary(spec.pi, args.max_group_size))
        if spec.pi_nary is not None:
            out.append(fs.check_cocycle_nary(spec.pi_nary, args.budget))
        if not out:
            raise UsageError("the spec defines no factor system (factors.pi or factors.pi_nary)")
        return spec, out
    if law == "epsilon":
        return spec, [fs.check_epsilon_axioms(_need(spec.epsilon, "an epsilon"), args.max_group_size)]
    if law == "deformed-cocycle":
        eps = _need(spec.epsilon, "an epsilon")
        return spec, [fs.check_deformed_cocycle(eps, spec.membership, spec.grades, spec.symbols)]
    if law == "obscure-axioms":
        G = spec.group
        grades = spec.grades

        def grade_of(m):
            return G.sum([grades[s] for s in leaves(m)])

        kind = "tree" if spec.mode is Mode.NONASSOC_STAR else "word"
        report = check_obscure_axioms(spec.membership, spec.symbols, args.max_length, kind, grade_of)
        if spec.mode is Mode.WEYL:
            report.notes.append("longer Weyl words take their membership from the compound rule (assumption)")
        return spec, [report]
    if law in ("jacobi", "skew"):
        eps = _need(spec.epsilon, "an epsilon")
        try:
            ctx = BracketContext.build(
                spec.generators, eps, spec.membership, spec.field_order, ambient=args.ambient, prefactor=args.prefactor
            )
        except RefusedError as exc:
            r = exc.report
            r.law = "jac" if law == "jacobi" else "leb"
            r.status = REFUSED
            r.notes.append(str(exc))
            return spec, [r]
        return spec, [check_jacobi(ctx) if law == "jacobi" else check_skew(ctx)]
    if law == "total-commutativity":
        mode, kw = _nary_mode(spec)
        words = all_words(spec.symbols, spec.arity)
        return spec, [check_total_commutativity(words, spec.membership, mode, order=spec.field_order, **kw)]
    raise UsageError(f"unknown check {law!r}")  # pragma: no cover


def _nary_mode(spec):
    if spec.pi_nary is not None:
        return NaryMode.DOUBLE, {"pi": spec.pi_nary, "grades": spec.grades}
    return NaryMode.MEMBERSHIP_ONLY, {}


def cmd_witness(args):
    spec = _spec(args)
    report = nonassociativity_report(spec.membership, spec.symbols)
    if report.ok:
        report.details["witness"] = "NONE"
    return spec, [report]


def _result_report(law, source, result) -> Report:
    r = Report(law=law)
    r.details["input"] = source
    r.details["result"] = result
    return r


def cmd_normalize(args):
    spec = _spec(args)
    ast = parse_expression(args.expr, spec)
    mode = spec.mode
    if mode is Mode.ASSOC_GRADED:
        eps = _need(spec.epsilon, "an epsilon")
        gate = fs.check_epsilon_axioms(eps, args.max_group_size)
        if not gate.ok:
            gate.status = REFUSED
            gate.notes.append("normalization refused: epsilon fails its axioms")
            return spec, [gate]
        elem = GradedAlgebra(spec.generators, eps, spec.field_order).normalize(evaluate(ast, spec))
    elif mode is Mode.ASSOC_DOUBLE:
        eps = _need(spec.epsilon, "an epsilon")
        try:
            alg = DoubleAlgebra(spec.generators, eps, spec.membership, spec.field_order)
        except RefusedError as exc:
            exc.report.notes.append(str(exc))
            return spec, [exc.report]
        elem = alg.normalize(evaluate(ast, spec, BracketContext(alg)))
    elif mode is Mode.WEYL:
        elem = _weyl(spec).normalize(evaluate(ast, spec))
    elif mode is Mode.NARY:
        nmode, kw = _nary_mode(spec)
        elem = evaluate(ast, spec)
        terms = []
        for m, c in elem.terms.items():
            if isinstance(m, NaryApp) and m.is_flat():
                w, f = normalize_nary(m, spec.rank, spec.membership, nmode, order=spec.field_order, **kw)
                terms.append((w, c * f))
            else:
                terms.append((m, c))
        elem = type(elem)(terms, spec.field_order, mode)
    else:
        elem = star_sort(evaluate(ast, spec), spec.rank, spec.membership)
    return spec, [_result_report("normalize", args.expr, elem.format())]


def _weyl(spec) -> WeylAlgebra:
    x, y = spec.weyl_generators
    mu = spec.membership
    return WeylAlgebra(x, y, mu.of(x), mu.of(y), spec.weyl_c, spec.field_order)


def cmd_weyl_reduce(args):
    spec = _spec(args)
    if spec.mode is not Mode.WEYL:
        raise UsageError("weyl-reduce needs a spec in weyl mode")
    elem = _weyl(spec).normalize(evaluate(parse_expression(args.expr, spec), spec))
    return spec, [_result_report("mxy", args.expr, elem.format())]


def cmd_epsilon(args):
    spec = _spec(args)
    eps = _need(spec.epsilon, "an epsilon")
    g, h = parse_grade(args.g, spec.group), parse_grade(args.h, spec.group)
    r = Report(law="eps")
    r.details["g"], r.details["h"] = format_grade(g), format_grade(h)
    r.details["value"] = str(eps(g, h))
    return spec, [r]


def cmd_nary_vector(args):
    spec = _spec(args)
    pi = _need(spec.pi_nary, "an n-ary factor system (factors.pi_nary)")
    grades = parse_grade_key(args.grades, spec.group, pi.arity)
    vec = fs.commutation_vector_from_pi(pi)
    r = Report(law="ep0")
    r.details["grades"] = [format_grade(g) for g in grades]
    r.details["components"] = {fs.perm_name(s): str(vec(s, *grades)) for s in vec.components}
    if pi.arity == 3:
        r.details["order"] = [fs.perm_name(s) for s in TERNARY_ORDER]
    r.details["symmetry"] = str(fs.classify_symmetry(vec))
    return spec, [r]


def cmd_equiv(args):
    spec_a, spec_b = _spec(args, "spec_a"), _spec(args, "spec_b")
    pool = [parse_scalar(v.strip(), spec_a.field_order) for v in args.pool.split(",") if v.strip()]
    pa, pb = spec_a.pi, spec_b.pi
    if pa is None or pb is None:
        pa, pb = spec_a.pi_nary, spec_b.pi_nary
    if pa is None or pb is None:
        raise UsageError("both specs need a factor system of the same arity")
    return spec_a, [fs.find_equivalence(pa, pb, pool, args.budget)]


def cmd_pullback(args):
    spec = _spec(args)
    pi = spec.pi if spec.pi is not None else _need(spec.pi_nary, "a factor system")
    autos = enumerate_automorphisms(spec.group, args.max_group_size, args.budget)
    if not 0 <= args.index < len(autos):
        raise UsageError(f"automorphism index must be in 0..{len(autos) - 1}")
    phi = autos[args.index]
    pulled = fs.pullback(pi, [phi])
    if pulled.arity == 2:
        r = fs.check_cocycle_binary(pulled, args.max_group_size)
    else:
        r = fs.check_cocycle_nary(pulled, args.budget)
    r.law = "ps"
    r.details["automorphism"] = [format_grade(g) for g in phi.images]
    r.details["automorphisms"] = len(autos)
    r.details["table"] = {",".join(map(format_grade, k)): str(v) for k, v in pulled.table.items()}
    return spec, [r]


COMMANDS = {
    "check": cmd_check,
    "witness": cmd_witness,
    "normalize": cmd_normalize,
    "weyl-reduce": cmd_weyl_reduce,
    "epsilon": cmd_epsilon,
    "nary-vector": cmd_nary_vector,
    "equiv": cmd_equiv,
    "pullback": cmd_pullback,
}


def _command_name(args) -> str:
    extra = getattr(args, "law", None) or getattr(args, "kind", None)
    return f"{args.command} {extra}" if extra else args.command


def _detail_lines(report):
    out = []
    for key in sorted(report.details):
        value = report.details[key]
        if isinstance(value, dict):
            value = ", ".join(f"{k}={v}" for k, v in value.items())
        elif isinstance(value, (list, tuple)):
            value = ", ".join(map(str, value))
        out.append(f"  {key}: {value}")
    out.extend(f"  note: {n}" for n in report.notes)
    return out


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    name = _command_name(args)
    start = time.perf_counter()
    try:
        spec, reports = COMMANDS[args.command](args)
    except ObscuraError as exc:
        print(f"obscura {name}: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"obscura {name}: error: {exc}", file=sys.stderr)
        return 2
    elapsed = time.perf_counter() - start

    fmt = args.format
    if fmt is None:
        fmt = "text" if args.command in ("normalize", "weyl-reduce") else "json"
    lines = []
    for r in reports:
        if fmt == "json":
            doc = {"command": name, "spec_digest": spec.digest, **r.to_dict()}
            if args.timing:
                doc["timing_seconds"] = round(elapsed, 6)
            lines.append(json.dumps(doc, sort_keys=True))
        elif "result" in r.details and r.status == PASS:
            lines.append(r.details["result"])
        else:
            lines.append(str(r))
            lines.extend(_detail_lines(r))
    for line in lines:
        print(line)

    failed = [r for r in reports if r.status != PASS]
    status = "PASS" if not failed else ", ".join(sorted({r.status for r in failed}))
    took = f", {elapsed:.3f}s" if getattr(args, "timing", False) else ""
    print(f"obscura {name}: {status} ({len(reports)} report(s){took})", file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
