"""Command-line interface.

Every subcommand prints a human-readable report by default and a stable JSON
document with --json; both carry the same numeric content.  Exit codes:
0 success, 1 verification failure, 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import combinatorics, verify
from .exactarith import factorial, format_rational, parse_rational
from .montecarlo import mc_ball_moment
from .morphism import (
    ManifoldDescriptor,
    blowup_flags,
    blowup_weinstein,
    cpn_q,
    cpn_weinstein,
    product_cpn_lattice,
    product_value,
)
from .symbolic import PiGradedValue

SCHEMA = "weincalc/1"


def _envelope(command: str, params: dict, body: dict, flags: list[str], status: str) -> dict:
    doc = {"schema": SCHEMA, "command": command, "params": params}
    doc.update(body)
    doc["flags"] = flags
    doc["status"] = status
    return doc


def _emit(doc: dict, as_json: bool, human_lines: list[str]) -> None:
    if as_json:
        print(json.dumps(doc))
    else:
        for line in human_lines:
            print(line)


def _cmd_cpn(args) -> int:
    cv = cpn_weinstein(args.n, args.k)
    q = cpn_q(args.n, args.k)
    order = cv.order()
    nontrivial = not cv.is_trivial()
    doc = _envelope(
        "cpn",
        {"n": args.n, "k": args.k},
        {
            "q": format_rational(q),
            "value": cv.value.to_json(),
            "multiple_of_pi_k_over_k_factorial": format_rational(q),
            "lattice": cv.lattice.to_json(),
            "order": order.to_json(),
            "nontrivial": nontrivial,
        },
        [],
        "ok",
    )
    lines = [
        f"CP^{args.n}, degree 2k-1 = {2 * args.k - 1}",
        f"  value     = {cv.value}  (that is, {format_rational(q)} * pi^{args.k}/{args.k}!)",
        f"  lattice   = {cv.lattice}",
        f"  q         = {format_rational(q)}",
        f"  order     = {order}",
        f"  verdict   = {'nontrivial' if nontrivial else 'trivial'}",
    ]
    _emit(doc, args.json, lines)
    return 0


def _cmd_blowup(args) -> int:
    cv = blowup_weinstein(args.n, args.k)
    order = cv.order()
    flags = blowup_flags(args.n, args.k, order)
    f = cv.value.components[args.k]
    multiple = f * factorial(args.k)
    body = {
        "value": cv.value.to_json(),
        "weight_function": str(f),
        "multiple_of_pi_k_over_k_factorial": str(multiple),
        "lattice": cv.lattice.to_json(),
        "order": order.to_json(),
    }
    lines = [
        f"Blow-up of CP^{args.n}, degree 2k-1 = {2 * args.k - 1}  (x stands for rho^2)",
        f"  value     = ({f}) * pi^{args.k}",
        f"  lattice   = {cv.lattice}",
        f"  order     = {order}",
    ]
    if flags:
        lines.append(
            f"  flag      = {flags[0]}: computed order is finite at k = n; the"
            f" infinite-order statement for lifted classes does not hold here"
        )
    if args.rho is not None:
        rho = parse_rational(args.rho)
        if not 0 < rho < 1:
            raise ValueError(f"rho must lie in (0, 1), got {rho}")
        x0 = rho * rho
        coeff = f.evaluate(x0)
        numeric = float(coeff) * math.pi**args.k
        body["at_rho"] = {
            "rho": format_rational(rho),
            "x": format_rational(x0),
            "pi_k_coefficient": format_rational(coeff),
            "value_float": numeric,
        }
        lines.append(
            f"  at rho={format_rational(rho)}: value = {format_rational(coeff)} * pi^{args.k}"
            f" = {numeric!r}"
        )
    doc = _envelope("blowup", {"n": args.n, "k": args.k, "rho": args.rho}, body, flags, "ok")
    _emit(doc, args.json, lines)
    return 0


def _cmd_moment(args) -> int:
    r0 = parse_rational(args.r0)
    coeff, pi_exp = combinatorics.ball_moment_exact(args.n, args.l, args.k, r0)
    base_coeff, _ = combinatorics.ball_moment_exact(args.n, args.l, args.k, Fraction(1))
    numeric = float(coeff) * math.pi**pi_exp
    body = {
        "coefficient": format_rational(coeff),
        "pi_exp": pi_exp,
        "r0_exp": 2 * (args.n + args.k),
        "coefficient_at_r0_1": format_rational(base_coeff),
        "value_float": numeric,
    }
    lines = [
        f"integral over B^{2 * args.n}({format_rational(r0)}) of"
        f" (|z_1|^2+...+|z_{args.l}|^2)^{args.k}",
        f"  exact     = {format_rational(coeff)} * pi^{pi_exp}"
        f"   (r0 enters as r0^{2 * (args.n + args.k)})",
        f"  numeric   = {numeric!r}",
    ]
    status = "ok"
    if args.mc:
        est = mc_ball_moment(args.n, args.l, args.k, float(r0), args.samples, args.seed)
        sigma = est.sigma_distance(numeric)
        mc_block = est.to_json()
        mc_block["sigma_distance"] = sigma
        body["mc"] = mc_block
        if not sigma < verify.SIGMA_BAND:
            status = "fail"
        lines.append(
            f"  mc        = {est.mean!r} +- {est.std_error!r}"
            f"  ({est.samples} samples, seed {est.seed}, {sigma:.2f} sigma)"
        )
    doc = _envelope(
        "moment",
        {"n": args.n, "l": args.l, "k": args.k, "r0": args.r0},
        body,
        [],
        status,
    )
    _emit(doc, args.json, lines)
    return 0 if status == "ok" else 1


def _cmd_identity(args) -> int:
    rows = combinatorics.verify_diagonal_identity(args.k_max)
    all_ok = all(ok for *_, ok in rows)
    body = {
        "rows": [
            {"k": k, "bruteforce": str(b), "closed": str(c), "ok": ok}
            for k, b, c, ok in rows
        ],
        "all_ok": all_ok,
    }
    lines = [f"{'k':>3}  {'bruteforce':>16}  {'closed':>16}  result"]
    for k, b, c, ok in rows:
        lines.append(f"{k:>3}  {b:>16}  {c:>16}  {'pass' if ok else 'FAIL'}")
    doc = _envelope("identity", {"k_max": args.k_max}, body, [], "ok" if all_ok else "fail")
    _emit(doc, args.json, lines)
    return 0 if all_ok else 1


def _cmd_product(args) -> int:
    try:
        with open(args.manifold, encoding="utf-8") as fh:
            descriptor_doc = json.load(fh)
    except OSError as exc:
        raise ValueError(f"cannot read manifold descriptor: {exc}")
    except json.JSONDecodeError as exc:
        raise ValueError(f"manifold descriptor is not valid JSON: {exc}")
    descriptor = ManifoldDescriptor.from_json(descriptor_doc)

    degree = 2 * args.k - 1
    if degree not in descriptor.trivial_odd_homotopy:
        raise ValueError(
            f"descriptor does not assert trivial homotopy in degree {degree} "
            f"(trivial_odd_homotopy: {sorted(descriptor.trivial_odd_homotopy)})"
        )
    b_value = PiGradedValue.zero()
    if args.class_name is not None:
        named = descriptor.classes.get(args.class_name)
        if named is None:
            raise ValueError(
                f"descriptor has no class named {args.class_name!r} "
                f"(available: {sorted(descriptor.classes)})"
            )
        if named.degree != degree:
            raise ValueError(
                f"class {args.class_name!r} lives in degree {named.degree}, "
                f"but k={args.k} needs degree {degree}"
            )
        b_value = named.value

    cv = cpn_weinstein(args.n, args.k)
    full = product_cpn_lattice(args.n, args.k, descriptor)
    product = product_value(
        cv.value, cv.lattice, b_value, descriptor.period_lattice(args.k), full
    )
    order = product.order()
    nontrivial = not product.is_trivial()
    doc = _envelope(
        "product",
        {"n": args.n, "k": args.k, "manifold": args.manifold, "class": args.class_name},
        {
            "value": product.value.to_json(),
            "lattice": product.lattice.to_json(),
            "order": order.to_json(),
            "nontrivial": nontrivial,
        },
        [],
        "ok",
    )
    lines = [
        f"CP^{args.n} x M (descriptor {args.manifold}), degree {degree}",
        f"  value     = {product.value}",
        f"  lattice   = {product.lattice}",
        f"  order     = {order}",
        f"  verdict   = {'nontrivial' if nontrivial else 'trivial'}",
    ]
    _emit(doc, args.json, lines)
    return 0


def _check_summary(details: dict) -> str:
    sigmas = [
        row["sigma"]
        for key in ("monte_carlo", "rows")
        for row in details.get(key, [])
        if isinstance(row, dict) and "sigma" in row
    ]
    parts = []
    if "rows" in details and not sigmas:
        parts.append(f"{len(details['rows'])} cases")
    if "pairs" in details:
        parts.append(f"{details['pairs']} pairs")
    if "instances" in details:
        parts.append(f"{details['instances']} instances, bound {details['bound']}")
    if "samples" in details:
        parts.append(f"{details['samples']} samples")
    if sigmas:
        parts.append(f"max {max(sigmas):.2f} sigma over {len(sigmas)} estimates")
    if "mismatches" in details and details["mismatches"]:
        parts.append(f"{len(details['mismatches'])} mismatches")
    return ", ".join(parts)


def _cmd_verify(args) -> int:
    results = verify.run_all(quick=args.quick)
    all_ok = all(r.passed for r in results)
    doc = _envelope(
        "verify",
        {"quick": args.quick},
        {"checks": [r.to_json() for r in results]},
        [],
        "ok" if all_ok else "fail",
    )
    lines = []
    for r in results:
        summary = _check_summary(r.details)
        lines.append(
            f"{'PASS' if r.passed else 'FAIL'}  {r.name:22s} {summary}".rstrip()
        )
    lines.append(
        f"{'all checks passed' if all_ok else 'VERIFICATION FAILED'}"
        f" ({sum(r.passed for r in results)}/{len(results)})"
    )
    _emit(doc, args.json, lines)
    return 0 if all_ok else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weinstein-calc",
        description="Exact Weinstein-morphism calculator with Monte Carlo cross-checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cpn", help="morphism value on CP^n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_cpn)

    p = sub.add_parser("blowup", help="morphism value on the blow-up of CP^n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--rho", type=str, default=None, help="weight in (0,1), as p/q or decimal")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_blowup)

    p = sub.add_parser("moment", help="exact ball moment integral, optionally MC-checked")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r0", type=str, default="1", help="radius, as p/q or decimal")
    p.add_argument("--mc", action="store_true")
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=verify.BASE_SEED)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_moment)

    p = sub.add_parser("identity", help="diagonal moment-sum identity table")
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_identity)

    p = sub.add_parser("product", help="morphism value on CP^n x M from a descriptor")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--manifold", type=str, required=True, help="descriptor JSON file")
    p.add_argument("--class", dest="class_name", type=str, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_product)

    p = sub.add_parser("verify", help="run the self-verification suite")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:  # includes DescriptorError
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
