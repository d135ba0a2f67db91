"""Single entry point exposing the library as subcommands.

Exit codes: 0 success / all checked properties hold; 1 a checked
mathematical property is false for the input (including a failed theorem
hypothesis); 2 usage errors; 3 construction, resource, or internal errors.

All output is deterministic: identical inputs give byte-identical output.
`--machine` switches to key=value lines.  FFS_THREADS caps the worker count;
execution is currently sequential, which trivially respects any cap.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import bounds
from .errors import (ConstructionError, ContractError, FFSetsError,
                     FieldMismatchError, HypothesisError)
from .field import Field, field_from_q, parse_field_spec
from .polyring import Poly, poly_from_text, poly_to_text, upoly_from_text
from .rankbound import PointSet, certify, difference_matrix, matrix_to_text, rank_gf
from .search import AvoidanceInstance, greedy_avoiding, max_avoiding_exhaustive, verify_avoiding
from .transform import (FunctionTable, analyze, analyze_dense,
                        analyze_direct_dense, kernel_orthogonality, synthesize)
from .witness import build_witness, check_coprimality, composed_map, kth_power_map


def thread_cap() -> int:
    """Worker-count cap from FFS_THREADS (default: machine parallelism)."""
    raw = os.environ.get("FFS_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        cap = int(raw)
    except ValueError:
        raise ContractError(f"FFS_THREADS={raw!r} is not an integer") from None
    if cap < 1:
        raise ContractError("FFS_THREADS must be >= 1")
    return cap


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return str(value)


def _emit(pairs: list[tuple[str, object]], machine: bool) -> None:
    if machine:
        for key, value in pairs:
            print(f"{key}={_fmt(value)}")
    else:
        width = max(len(k) for k, _ in pairs)
        for key, value in pairs:
            print(f"  {key.ljust(width)}  {_fmt(value)}")


def _field_for(args) -> Field:
    """Field from --field-spec (file problems exit 3) or -q (usage errors)."""
    spec_path = getattr(args, "field_spec", None)
    if spec_path:
        with open(spec_path, "r", encoding="utf-8") as handle:
            return parse_field_spec(handle.read().strip())
    q = getattr(args, "q", None)
    if q is None:
        raise ContractError("need -q or --field-spec")
    try:
        return field_from_q(q)
    except ConstructionError as exc:
        raise ContractError(str(exc)) from exc


def _load_upoly(field: Field, path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return upoly_from_text(field, handle.read())


# ---------------------------------------------------------------------------
# Subcommands.
# ---------------------------------------------------------------------------

def cmd_bound(args) -> int:
    fld = _field_for(args)
    if args.n < 1:
        raise ContractError("n must be >= 1")
    pairs: list[tuple[str, object]]
    if args.f_file:
        f_poly = _load_upoly(fld, args.f_file)
        k = int(f_poly.degree)
        phi = composed_map(fld, args.n, f_poly)
        root_count, ok = check_coprimality(fld, f_poly)
        rep = bounds.bound_report(fld.q, args.n, k, m=phi.m, d=phi.degree)
        extra = [("root_count", root_count), ("hypothesis_ok", ok)]
    else:
        if args.k is None or args.k < 2:
            raise ContractError("need -k >= 2 (or --f-file)")
        rep = bounds.bound_report(fld.q, args.n, args.k)
        extra = []
    pairs = [
        ("q", rep.q), ("n", rep.n), ("k", rep.k if rep.k is not None else "-"),
        ("digit_sum", rep.D if rep.D is not None else "-"),
        ("c", rep.c), ("c_prime", rep.c_prime),
        ("threshold_thm1", rep.threshold_thm1),
        ("threshold_thm2", rep.threshold_thm2),
        ("m", rep.m), ("d", rep.d),
        ("hoeffding", rep.hoeffding),
        ("tail", rep.tail),
        ("exact_count", rep.exact_count),
        ("vacuous", rep.vacuous),
    ] + extra
    if not args.machine:
        print("bound report")
    _emit(pairs, args.machine)
    return 0


def _map_for(args, fld: Field):
    if args.f_file:
        return composed_map(fld, args.n, _load_upoly(fld, args.f_file))
    if args.k is None:
        raise ContractError("need -k or --f-file")
    return kth_power_map(fld, args.n, args.k)


def cmd_witness(args) -> int:
    fld = _field_for(args)
    if args.n < 1:
        raise ContractError("n must be >= 1")
    phi = _map_for(args, fld)
    if args.emit_map:
        with open(args.emit_map, "w", encoding="utf-8") as handle:
            handle.write(phi.to_text())
    report = build_witness(phi)
    pairs = [
        ("q", fld.q), ("n", phi.n), ("m", phi.m), ("d", phi.degree),
        ("fiber_count_at_zero", report.fiber_count_at_zero),
        ("deg_p", report.degree),
        ("degree_bound_rhs", report.degree_bound_rhs),
        ("degree_ok", report.degree_ok),
        ("support_ok", "skipped" if report.support_ok is None else report.support_ok),
        ("nonzero_at_zero", report.nonzero_at_zero),
        ("image_size", "-" if report.image is None else int(report.image.size)),
    ]
    if not args.machine:
        print("witness report")
    _emit(pairs, args.machine)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(f"# witness polynomial, q={fld.q} n={phi.n}\n")
            handle.write(poly_to_text(report.polynomial()))
    if not report.all_ok:
        print("verified-false: " + ", ".join(report.failing_properties()),
              file=sys.stderr)
        return 1
    return 0


def cmd_transform(args) -> int:
    fld = _field_for(args)
    if args.mode in ("analyze", "roundtrip"):
        with open(args.input, "r", encoding="utf-8") as handle:
            table = FunctionTable.from_text(fld, handle.read())
        coeffs = analyze_dense(fld, table.arity, table.values)
        if args.oracle:
            direct = analyze_direct_dense(fld, table.arity, table.values)
            if not np.array_equal(coeffs, direct):
                print("verified-false: axis and direct transforms disagree",
                      file=sys.stderr)
                return 1
        poly = analyze(table)
        if args.mode == "roundtrip":
            back = synthesize(poly)
            ok = back == table
            _emit([("roundtrip_ok", ok), ("terms", len(poly.terms)),
                   ("degree", poly.degree if poly.terms else "-inf")], args.machine)
            return 0 if ok else 1
        text = f"# q={fld.q} n={table.arity}\n" + poly_to_text(poly)
    else:  # synthesize
        if args.n is None:
            raise ContractError("synthesize needs -n (the polynomial arity)")
        with open(args.input, "r", encoding="utf-8") as handle:
            poly = poly_from_text(fld, args.n, handle.read())
        table = synthesize(poly)
        text = table.to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_rank(args) -> int:
    fld = _field_for(args)
    with open(args.set, "r", encoding="utf-8") as handle:
        points = PointSet.from_text(fld, handle.read())
    with open(args.poly, "r", encoding="utf-8") as handle:
        poly = poly_from_text(fld, points.arity, handle.read())
    cert = certify(poly, points)
    if args.dump_matrix:
        with open(args.dump_matrix, "w", encoding="utf-8") as handle:
            handle.write(matrix_to_text(fld, cert.matrix.entries))
    deg = poly.degree
    pairs = [
        ("set_size", len(points)),
        ("deg_p", deg if poly.terms else "-inf"),
        ("rank", cert.rank),
        ("s_size", cert.s_size),
        ("clp_bound", 2 * cert.s_size),
        ("rank_equals_size", cert.rank == len(points)),
        ("exact_count_crosscheck",
         bounds.monomial_count_at_most(fld.q, points.arity, Fraction(int(deg), 2))
         if poly.terms else 0),
    ]
    if not args.machine:
        print("rank certificate")
    _emit(pairs, args.machine)
    return 0


def cmd_search(args) -> int:
    fld = _field_for(args)
    if args.n < 1:
        raise ContractError("n must be >= 1")
    phi = _map_for(args, fld)
    inst = AvoidanceInstance.from_map(phi)
    if args.mode == "exhaustive":
        result = max_avoiding_exhaustive(inst, budget=args.budget)
    else:
        result = greedy_avoiding(inst, seed=args.seed)
    ok = verify_avoiding(result.best_set, inst)

    pairs = [
        ("q", fld.q), ("n", phi.n), ("m", phi.m), ("d", phi.degree),
        ("mode", args.mode),
        ("image_size", inst.image_size),
        ("image_symmetric", inst.image_is_symmetric),
        ("forbidden_size", inst.symmetric_forbidden_size),
        ("best_size", result.best_size),
        ("optimal", result.optimal),
        ("nodes_explored", result.nodes_explored),
        ("avoiding_ok", ok),
        ("threads", thread_cap()),
    ]

    rep = bounds.bound_report(fld.q, phi.n, None, m=phi.m, d=max(phi.degree, 1))
    pairs += [("hoeffding", rep.hoeffding), ("vacuous", rep.vacuous)]
    bound_ok = rep.vacuous or result.best_size <= rep.hoeffding
    pairs.append(("bound_ok", bound_ok))

    rank_ok = None
    try:
        report = build_witness(phi)
        rank = rank_gf(difference_matrix(report.polynomial(), result.best_set).entries, fld)
        rank_ok = rank == result.best_size
        pairs += [("hypothesis_ok", True), ("rank", rank), ("rank_ok", rank_ok)]
    except HypothesisError:
        pairs += [("hypothesis_ok", False)]
    if not args.machine:
        print("search result")
    _emit(pairs, args.machine)
    if args.emit_set:
        with open(args.emit_set, "w", encoding="utf-8") as handle:
            handle.write(result.best_set.to_text())
    if not ok or not bound_ok or rank_ok is False:
        print("verified-false: search result failed a check", file=sys.stderr)
        return 1
    return 0


def _selftest_fields(quick: bool) -> list[Field]:
    qs = [2, 3, 4, 5, 7, 8, 9] if quick else [2, 3, 4, 5, 7, 8, 9, 16, 25, 27]
    return [field_from_q(q) for q in qs]


def cmd_selftest(args) -> int:
    failures = []
    fields = _selftest_fields(args.quick)
    if args.field_spec:
        with open(args.field_spec, "r", encoding="utf-8") as handle:
            fields.append(parse_field_spec(handle.read().strip()))
    checks: list[tuple[str, bool]] = []

    # Field axioms on small triples, Frobenius on everything.
    ax_ok = True
    for fld in fields:
        sample = range(fld.q) if fld.q <= 9 else range(0, fld.q, max(1, fld.q // 7))
        for a in sample:
            if fld.pow(a, fld.q) != a:
                ax_ok = False
            for b in sample:
                if fld.add(a, b) != fld.add(b, a) or fld.mul(a, b) != fld.mul(b, a):
                    ax_ok = False
                for c in sample:
                    if fld.mul(a, fld.add(b, c)) != fld.add(fld.mul(a, b), fld.mul(a, c)):
                        ax_ok = False
    checks.append(("field_axioms", ax_ok))

    # Kernel orthogonality.
    kern_ok = all(
        np.array_equal(kernel_orthogonality(fld), np.eye(fld.q, dtype=fld.dtype))
        for fld in fields)
    checks.append(("kernel_orthogonality", kern_ok))

    # Transform round trips, axis path against the direct oracle.
    rng = np.random.default_rng(20240917)
    rt_ok = True
    shapes = [(2, 3), (3, 2), (4, 2), (5, 2)] if args.quick else \
        [(2, 3), (2, 6), (3, 2), (3, 4), (4, 2), (4, 3), (5, 2), (5, 3)]
    reps = 3 if args.quick else 10
    for q, n in shapes:
        fld = field_from_q(q)
        for _ in range(reps):
            table = FunctionTable.random(fld, n, rng)
            coeffs = analyze_dense(fld, n, table.values)
            if not np.array_equal(coeffs, analyze_direct_dense(fld, n, table.values)):
                rt_ok = False
            if synthesize(analyze(table)) != table:
                rt_ok = False
    checks.append(("transform_roundtrip", rt_ok))

    # Tail dominance.
    dom_ok = True
    n_cap = 12 if args.quick else 40
    for q in (2, 3, 5):
        for n in range(1, n_cap + 1):
            for d in (1, 2, 3, 4):
                for m in range(1, n + 1):
                    t = Fraction(q - 1) * (Fraction(n) - Fraction(m, d)) / 2
                    tail = bounds.exact_tail(q, n, t)
                    if float(tail) > math.exp(-m * m / (2.0 * n * d * d)) * (1 + 1e-12):
                        dom_ok = False
    checks.append(("tail_dominance", dom_ok))

    # Witness spot checks.
    wit_ok = True
    for q, n, k in [(2, 4, 3), (3, 3, 2)]:
        rep = build_witness(kth_power_map(field_from_q(q), n, k))
        wit_ok = wit_ok and rep.all_ok
    from .polyring import UPoly
    f2 = field_from_q(2)
    count, ok = check_coprimality(f2, UPoly(f2, [0, 1, 1]))
    wit_ok = wit_ok and count == 2 and not ok
    checks.append(("witness_properties", wit_ok))

    for name, ok in checks:
        if not ok:
            failures.append(name)
        _emit([(name, ok)], args.machine)
    if failures:
        print("verified-false: " + ", ".join(failures), file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# Parser and dispatch.
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ffsets",
        description="Desk-scale verifier for difference-avoiding sets over F_q^n")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_n=True, with_k=True):
        p.add_argument("-q", type=int, help="field size (prime power)")
        p.add_argument("--field-spec", help="path to a field-spec file")
        if with_n:
            p.add_argument("-n", type=int, required=False, help="ambient dimension")
        if with_k:
            p.add_argument("-k", type=int, help="power exponent")
            p.add_argument("--f-file", help="univariate polynomial file for general images")
        p.add_argument("--machine", action="store_true", help="key=value output")

    p = sub.add_parser("bound", help="closed-form bound report")
    common(p)
    p.set_defaults(fn=cmd_bound)

    p = sub.add_parser("witness", help="build and verify a witness polynomial")
    common(p)
    p.add_argument("--out", help="write the witness polynomial here")
    p.add_argument("--emit-map", help="write the polynomial map here")
    p.set_defaults(fn=cmd_witness)

    p = sub.add_parser("transform", help="analyze or synthesize function tables")
    common(p, with_k=False)
    p.add_argument("--mode", choices=["analyze", "synthesize", "roundtrip"],
                   required=True)
    p.add_argument("--oracle", action="store_true",
                   help="cross-check against the direct double sum")
    p.add_argument("input", help="input file (table or polynomial)")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(fn=cmd_transform)

    p = sub.add_parser("rank", help="difference-matrix rank and certificate")
    common(p, with_n=False, with_k=False)
    p.add_argument("--poly", required=True, help="polynomial file")
    p.add_argument("--set", required=True, help="point-set file")
    p.add_argument("--dump-matrix", help="write the difference matrix here")
    p.set_defaults(fn=cmd_rank)

    p = sub.add_parser("search", help="find large avoiding sets")
    common(p)
    p.add_argument("--mode", choices=["exhaustive", "greedy"], default="exhaustive")
    p.add_argument("--budget", type=int, default=100_000_000, help="node budget")
    p.add_argument("--seed", type=int, help="greedy shuffle seed")
    p.add_argument("--emit-set", help="write the best set here")
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("selftest", help="run the built-in verification suites")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--field-spec", help="additional field-spec file to include")
    p.add_argument("--machine", action="store_true")
    p.set_defaults(fn=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except HypothesisError as exc:
        print(f"verified-false: {exc}", file=sys.stderr)
        return 1
    except (ContractError, FieldMismatchError, OSError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except FFSetsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
