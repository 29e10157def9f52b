"""Command-line front end; every decision prints a replayable report.

Exit codes: 0 for a positive verdict, 1 for a negative one, 2 when a
budget-bounded search was inconclusive, 64 for usage errors.  With
``--json`` the report is a JSON document whose content is byte-stable for
fixed inputs and version (the timing field is informational only); any
report written to a file can be checked later with ``--verify``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from elemtrans import __version__
from elemtrans.coordinate import (
    conjecture_g_search,
    elementary_reduce_gradient,
    is_coordinate,
    unimodular_gradient,
)
from elemtrans.freegroup import (
    automorphic_conjugacy,
    cyclic_reduce,
    is_free_automorphism,
    is_primitive,
    nielsen_reduce,
    parse_tuple,
    parse_word,
    same_subgroup,
    subgroup_membership,
    whitehead_minimize,
)
from elemtrans.freegroup.words import WordParseError, format_word
from elemtrans.groebner import buchberger, contains_one, s_polynomial
from elemtrans.poly import (
    PolyParseError,
    Polynomial,
    format_map,
    format_poly,
    is_jacobian_unit,
    jacobian,
    jacobian_det,
    parse_map,
    parse_poly,
)
from elemtrans.retract import (
    RetractWitness,
    find_fixed_polynomials,
    jc_harness,
    normal_form_retraction,
    retract_witness_search,
    stable_image_diagnostics,
    verify_retraction,
)
from elemtrans.tame import (
    decompose_automorphism,
    invert_automorphism,
    is_univariate_generating_pair,
    random_tame_automorphism,
)

EXIT_YES = 0
EXIT_NO = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _univariate(text: str) -> Polynomial:
    return parse_poly(text, nvars=1)


# ---------------------------------------------------------------------------
# command handlers: each returns (exit_code, payload)

def _cmd_fg_reduce(args):
    w = parse_word(args.word, args.rank)
    cyc = cyclic_reduce(w)
    return EXIT_YES, {
        "verdict": "reduced",
        "reduced": format_word(w),
        "cyclically_reduced": str(cyc),
        "length": len(w),
        "cyclic_length": len(cyc),
    }


def _cmd_fg_nielsen(args):
    Y = parse_tuple(args.tuple, args.rank)
    reduced, trace = nielsen_reduce(Y)
    return EXIT_YES, {
        "verdict": "reduced",
        "complexity_before": Y.total_length(),
        "complexity_after": reduced.total_length(),
        "reduced": [str(w) for w in reduced.words],
        "trace": trace.to_json_dict(),
    }


def _cmd_fg_member(args):
    Y = parse_tuple(args.tuple, args.rank)
    w = parse_word(args.word, Y.rank)
    verdict = subgroup_membership(Y, w)
    payload = verdict.to_json_dict()
    payload.update(
        complexity_before=len(w), complexity_after=len(w), trace=[]
    )
    return (EXIT_YES if verdict.member else EXIT_NO), payload


def _cmd_fg_same_subgroup(args):
    Y = parse_tuple(args.tuple, args.rank)
    Z = parse_tuple(args.other, Y.rank)
    same = same_subgroup(Y, Z)
    return (EXIT_YES if same else EXIT_NO), {
        "verdict": "same_subgroup" if same else "different_subgroups",
        "complexity_before": Y.total_length(),
        "complexity_after": Z.total_length(),
        "trace": [],
    }


def _cmd_fg_auto(args):
    Y = parse_tuple(args.tuple, args.rank)
    verdict = is_free_automorphism(Y)
    payload = verdict.to_json_dict()
    payload.update(
        complexity_before=Y.total_length(),
        complexity_after=verdict.reduced.total_length(),
    )
    return (EXIT_YES if verdict.is_automorphism else EXIT_NO), payload


def _cmd_fg_primitive(args):
    w = parse_word(args.word, args.rank)
    verdict = is_primitive(w)
    payload = verdict.to_json_dict()
    payload.update(
        complexity_before=len(cyclic_reduce(w)),
        complexity_after=len(verdict.minimized),
    )
    return (EXIT_YES if verdict.primitive else EXIT_NO), payload


def _cmd_fg_whitehead(args):
    w = cyclic_reduce(parse_word(args.word, args.rank))
    minimized, trace = whitehead_minimize(w)
    return EXIT_YES, {
        "verdict": "minimized",
        "complexity_before": len(w),
        "complexity_after": len(minimized),
        "minimized": str(minimized),
        "trace": trace.to_json_dict(),
    }


def _cmd_fg_conjugacy(args):
    u = parse_word(args.word, args.rank)
    v = parse_word(args.other, u.rank)
    verdict = automorphic_conjugacy(u, v, budget=args.budget)
    payload = verdict.to_json_dict()
    payload.update(
        complexity_before=len(cyclic_reduce(u)),
        complexity_after=len(verdict.minimized_u),
    )
    code = {
        "equivalent": EXIT_YES,
        "not_equivalent": EXIT_NO,
        "budget_exceeded": EXIT_INCONCLUSIVE,
    }[verdict.verdict]
    return code, payload


def _cmd_poly_parse(args):
    p = parse_poly(args.poly, nvars=args.rank)
    payload = {
        "verdict": "parsed",
        "canonical": format_poly(p),
        "degree": p.degree(),
        "terms": len(p.terms),
    }
    if not p.is_zero():
        c, m = p.leading_term()
        payload["leading_term"] = {"coeff": str(c), "monomial": list(m)}
    return EXIT_YES, payload


def _cmd_poly_jacobian(args):
    phi = parse_map(args.map, nvars=2)
    det = jacobian_det(phi)
    unit = is_jacobian_unit(phi)
    mat = jacobian(phi)
    return (EXIT_YES if unit else EXIT_NO), {
        "verdict": "unit_jacobian" if unit else "non_unit_jacobian",
        "matrix": [[format_poly(e) for e in row] for row in mat],
        "determinant": format_poly(det),
    }


def _read_basis(text: str, nvars: int) -> list[Polynomial]:
    import os

    if os.path.exists(text):
        with open(text) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
        return [parse_poly(ln, nvars) for ln in lines]
    return [parse_poly(part, nvars) for part in text.split(",")]


def _cmd_gb_basis(args):
    gens = _read_basis(args.basis, args.rank)
    basis = buchberger(gens)
    return EXIT_YES, {
        "verdict": "groebner_basis",
        "basis": [format_poly(g) for g in basis],
    }


def _cmd_gb_contains_one(args):
    gens = _read_basis(args.basis, args.rank)
    yes = contains_one(gens)
    return (EXIT_YES if yes else EXIT_NO), {
        "verdict": "contains_one" if yes else "proper_ideal",
    }


def _cmd_gb_spoly(args):
    p = parse_poly(args.p, args.rank)
    q = parse_poly(args.q, args.rank)
    s, record = s_polynomial(p, q)
    return EXIT_YES, {
        "verdict": "s_polynomial",
        "s_polynomial": format_poly(s),
        "record": record.to_json_dict(),
    }


def _cmd_tame_decompose(args):
    g1 = parse_poly(args.g1)
    g2 = parse_poly(args.g2)
    verdict = decompose_automorphism(g1, g2)
    return (EXIT_YES if verdict.is_automorphism else EXIT_NO), verdict.to_json_dict()


def _cmd_tame_invert(args):
    g1 = parse_poly(args.g1)
    g2 = parse_poly(args.g2)
    verdict = decompose_automorphism(g1, g2)
    if not verdict.is_automorphism:
        payload = verdict.to_json_dict()
        return EXIT_NO, payload
    inv = invert_automorphism(verdict.decomposition)
    payload = verdict.to_json_dict()
    payload["inverse"] = format_map(inv)
    return EXIT_YES, payload


def _cmd_tame_univar_pair(args):
    u = _univariate(args.u)
    v = _univariate(args.v)
    verdict = is_univariate_generating_pair(u, v)
    return (EXIT_YES if verdict.generating else EXIT_NO), verdict.to_json_dict()


def _cmd_tame_random(args):
    phi, dec = random_tame_automorphism(
        args.seed, args.k, degree_bound=args.deg or 3
    )
    return EXIT_YES, {
        "verdict": "generated",
        "map": format_map(phi),
        "decomposition": dec.to_json_dict(),
    }


def _cmd_coord_check(args):
    p = parse_poly(args.poly)
    verdict = is_coordinate(p)
    return (EXIT_YES if verdict.coordinate else EXIT_NO), verdict.to_json_dict()


def _cmd_coord_complete(args):
    p = parse_poly(args.poly)
    verdict = is_coordinate(p)
    if not verdict.coordinate:
        return EXIT_NO, verdict.to_json_dict()
    return EXIT_YES, {
        "verdict": "completed",
        "q": str(verdict.certificate.q),
    }


def _cmd_coord_reduce(args):
    p = parse_poly(args.poly)
    verdict = is_coordinate(p)
    if not verdict.coordinate:
        return EXIT_NO, verdict.to_json_dict()
    return EXIT_YES, {
        "verdict": "reduced_to_x",
        "auto_sequence": [f.to_json_dict() for f in verdict.certificate.auto_sequence],
    }


def _cmd_coord_conjg(args):
    p = parse_poly(args.poly)
    verdict = conjecture_g_search(p, budget=args.budget)
    return (EXIT_YES if verdict.found else EXIT_INCONCLUSIVE), verdict.to_json_dict()


def _cmd_coord_unimodular(args):
    p = parse_poly(args.poly)
    yes = unimodular_gradient(p)
    return (EXIT_YES if yes else EXIT_NO), {
        "verdict": "unimodular_gradient" if yes else "gradient_not_unimodular",
    }


def _cmd_retract_verify(args):
    phi = parse_map(args.map)
    verdict = verify_retraction(phi)
    return (EXIT_YES if verdict.is_retraction else EXIT_NO), verdict.to_json_dict()


def _cmd_retract_normal_form(args):
    q = parse_poly(args.q)
    r = normal_form_retraction(q)
    return EXIT_YES, r.to_json_dict()


def _cmd_retract_witness(args):
    p = parse_poly(args.poly)
    out = retract_witness_search(p, degree_bound=args.deg, budget=args.budget)
    if isinstance(out, RetractWitness):
        return EXIT_YES, out.to_json_dict()
    return EXIT_INCONCLUSIVE, out.to_json_dict()


def _cmd_retract_fixed(args):
    phi = parse_map(args.map)
    basis = find_fixed_polynomials(phi, args.deg if args.deg is not None else 3)
    return EXIT_YES, {
        "verdict": "fixed_subspace",
        "dimension": len(basis),
        "basis": [format_poly(p) for p in basis],
    }


def _cmd_retract_jc(args):
    phi = parse_map(args.map)
    report = jc_harness(phi, degree_bound=args.deg)
    return (EXIT_NO if report.inconsistency else EXIT_YES), report.to_json_dict()


def _cmd_retract_stable(args):
    phi = parse_map(args.map)
    report = stable_image_diagnostics(phi, args.k, degree_bound=args.deg or 3)
    return EXIT_YES, report.to_json_dict()


# ---------------------------------------------------------------------------
# built-in example suite (known answers for the worked objects)

def _selftest_cases():
    ref = "x + x^2*y"

    def deglex_order():
        lt_sq = parse_poly("x^2 + x*y").leading_term()
        lt_cube = parse_poly("y^3 + x^2").leading_term()
        return lt_sq[1] == (2, 0) and lt_cube[1] == (0, 3)

    def deriv_x():
        return parse_poly(ref).partial_derivative(1) == parse_poly("1 + 2*x*y")

    def deriv_y():
        return parse_poly(ref).partial_derivative(2) == parse_poly("x^2")

    def parse_canonical():
        return parse_poly(ref).terms == {(1, 0): 1, (2, 1): 1}

    def unimodular_ref():
        return unimodular_gradient(parse_poly(ref))

    def gradient_stuck_ref():
        return not elementary_reduce_gradient(parse_poly(ref)).reached

    def coordinate_ref():
        v = is_coordinate(parse_poly(ref))
        return not v.coordinate and v.reason == "reduction_stuck"

    def retraction_ref():
        v = verify_retraction(parse_map("x + y*x^2, 0"))
        return v.is_retraction and v.retraction.generator == parse_poly(ref)

    def normal_form_ref():
        r = normal_form_retraction(parse_poly("x^2"))
        return r.phi == parse_map("x + x^2*y, 0")

    def witness_ref():
        out = retract_witness_search(parse_poly(ref), degree_bound=2)
        return isinstance(out, RetractWitness) and out.a == parse_poly("x")

    def cli_coord_check_ref():
        code, payload = _cmd_coord_check(argparse.Namespace(poly=ref))
        return code == EXIT_NO and payload["verdict"] == "not_coordinate"

    return [
        ("deglex-order", deglex_order),
        ("derivative-in-x", deriv_x),
        ("derivative-in-y", deriv_y),
        ("parse-reference-polynomial", parse_canonical),
        ("unimodular-gradient-reference", unimodular_ref),
        ("gradient-reduction-stuck-reference", gradient_stuck_ref),
        ("coordinate-rejection-reference", coordinate_ref),
        ("retraction-reference", retraction_ref),
        ("normal-form-retraction-reference", normal_form_ref),
        ("retract-witness-reference", witness_ref),
        ("cli-coordinate-check-reference", cli_coord_check_ref),
    ]


def _cmd_selftest(args):
    cases = _selftest_cases()
    if args.list:
        return EXIT_YES, {
            "verdict": "listed",
            "cases": [name for name, _ in cases],
        }
    results = []
    failed = 0
    for name, fn in cases:
        try:
            ok = bool(fn())
        except Exception as exc:  # a crash is a failure, not an abort
            ok = False
            print(f"FAIL {name}: {exc}", file=sys.stderr)
        results.append({"case": name, "status": "pass" if ok else "fail"})
        if not ok:
            failed += 1
    code = EXIT_YES if failed == 0 else EXIT_NO
    return code, {
        "verdict": "selftest_pass" if failed == 0 else "selftest_fail",
        "failed": failed,
        "total": len(cases),
        "results": results,
    }


# ---------------------------------------------------------------------------
# wiring

def _build_parser() -> _Parser:
    top = _Parser(prog="elemtrans", description=__doc__)
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="group", required=True)

    def add(group_sub, name, handler, positionals, *, rank=False, budget=None,
            deg=False, seed=False, extra=None):
        p = group_sub.add_parser(name)
        for pos, help_text in positionals:
            p.add_argument(pos, help=help_text)
        if rank:
            p.add_argument("--rank", type=int, default=None,
                           help="free-group rank / variable count")
        if budget is not None:
            p.add_argument("--budget", type=int, default=budget,
                           help="search budget (states)")
        if deg:
            p.add_argument("--deg", type=int, default=None, help="degree bound")
        if seed:
            p.add_argument("--seed", type=int, default=0, help="random seed")
        if extra:
            extra(p)
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        p.add_argument("--verify", metavar="CERT",
                       help="verify a previously emitted report file")
        p.set_defaults(handler=handler)
        return p

    fg = sub.add_parser("fg").add_subparsers(dest="command", required=True)
    add(fg, "reduce", _cmd_fg_reduce, [("word", "word to reduce")], rank=True)
    add(fg, "nielsen", _cmd_fg_nielsen, [("tuple", "comma-separated words")],
        rank=True)
    add(fg, "member", _cmd_fg_member,
        [("tuple", "generators"), ("word", "candidate member")], rank=True)
    add(fg, "same-subgroup", _cmd_fg_same_subgroup,
        [("tuple", "first tuple"), ("other", "second tuple")], rank=True)
    add(fg, "auto", _cmd_fg_auto, [("tuple", "generator images")], rank=True)
    add(fg, "primitive", _cmd_fg_primitive, [("word", "word to test")], rank=True)
    add(fg, "whitehead", _cmd_fg_whitehead, [("word", "word to minimize")],
        rank=True)
    add(fg, "conjugacy", _cmd_fg_conjugacy,
        [("word", "first word"), ("other", "second word")], rank=True,
        budget=20000)

    poly = sub.add_parser("poly").add_subparsers(dest="command", required=True)
    p_parse = add(poly, "parse", _cmd_poly_parse, [("poly", "polynomial text")])
    p_parse.add_argument("--rank", type=int, default=2, help="variable count")
    add(poly, "jacobian", _cmd_poly_jacobian, [("map", "two images, comma-separated")])

    gb = sub.add_parser("gb").add_subparsers(dest="command", required=True)
    gb_rank = lambda p: p.add_argument("--rank", type=int, default=2,
                                       help="variable count")
    add(gb, "basis", _cmd_gb_basis, [("basis", "file or inline polynomials")],
        extra=gb_rank)
    add(gb, "contains-one", _cmd_gb_contains_one,
        [("basis", "file or inline polynomials")], extra=gb_rank)
    add(gb, "spoly", _cmd_gb_spoly, [("p", "first"), ("q", "second")],
        extra=gb_rank)

    tame = sub.add_parser("tame").add_subparsers(dest="command", required=True)
    add(tame, "decompose", _cmd_tame_decompose,
        [("g1", "image of x"), ("g2", "image of y")])
    add(tame, "invert", _cmd_tame_invert,
        [("g1", "image of x"), ("g2", "image of y")])
    add(tame, "univar-pair", _cmd_tame_univar_pair,
        [("u", "first polynomial in t"), ("v", "second polynomial in t")])
    t_rand = add(tame, "random", _cmd_tame_random, [], deg=True, seed=True)
    t_rand.add_argument("--k", type=int, default=4, help="number of factors")

    coord = sub.add_parser("coord").add_subparsers(dest="command", required=True)
    add(coord, "check", _cmd_coord_check, [("poly", "polynomial to test")])
    add(coord, "complete", _cmd_coord_complete, [("poly", "coordinate polynomial")])
    add(coord, "reduce", _cmd_coord_reduce, [("poly", "coordinate polynomial")])
    add(coord, "conjg", _cmd_coord_conjg, [("poly", "unimodular-gradient input")],
        budget=5000)
    add(coord, "unimodular", _cmd_coord_unimodular, [("poly", "polynomial")])

    retract = sub.add_parser("retract").add_subparsers(dest="command", required=True)
    add(retract, "verify", _cmd_retract_verify, [("map", "endomorphism images")])
    add(retract, "normal-form", _cmd_retract_normal_form,
        [("q", "the q of x + y*q")])
    add(retract, "witness", _cmd_retract_witness,
        [("poly", "retract generator candidate")], deg=True, budget=200)
    add(retract, "fixed", _cmd_retract_fixed, [("map", "endomorphism images")],
        deg=True)
    add(retract, "jc", _cmd_retract_jc, [("map", "endomorphism images")], deg=True)
    s_par = add(retract, "stable", _cmd_retract_stable,
                [("map", "endomorphism images")], deg=True)
    s_par.add_argument("--k", type=int, default=3, help="iterates to inspect")

    st = sub.add_parser("selftest")
    st.add_argument("--list", action="store_true", help="list case ids")
    st.add_argument("--json", action="store_true")
    st.set_defaults(handler=_cmd_selftest, group="selftest", command=None)
    return top


def _echo_input(args) -> dict:
    skip = {"handler", "group", "command", "json", "verify"}
    return {
        k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None
    }


def _render_human(payload: dict, stream) -> None:
    def emit(prefix, value):
        if isinstance(value, dict):
            for k, v in value.items():
                emit(f"{prefix}{k}.", v) if isinstance(v, (dict, list)) else print(
                    f"{prefix}{k}: {v}", file=stream
                )
        elif isinstance(value, list):
            print(f"{prefix[:-1]}: {json.dumps(value)}", file=stream)
        else:
            print(f"{prefix[:-1]}: {value}", file=stream)

    for key, value in payload.items():
        emit(f"{key}.", value) if isinstance(value, (dict, list)) else print(
            f"{key}: {value}", file=stream
        )


def _strip_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timing_ms"}


def run(argv: list[str]) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        code, payload = args.handler(args)
    except (WordParseError, PolyParseError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = {
        "tool": "elemtrans",
        "version": __version__,
        "command": " ".join(
            x for x in (args.group, getattr(args, "command", None)) if x
        ),
        "input": _echo_input(args),
        "report": payload,
        "timing_ms": round((time.perf_counter() - started) * 1000, 3),
    }
    if getattr(args, "verify", None):
        with open(args.verify) as fh:
            recorded = json.load(fh)
        ok = _strip_timing(recorded) == _strip_timing(report)
        print("certificate verified" if ok else "certificate MISMATCH")
        return EXIT_YES if ok else EXIT_NO
    if getattr(args, "json", False):
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        _render_human(payload, sys.stdout)
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
