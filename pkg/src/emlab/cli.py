"""Command-line front end: ``emlab <group> <command> [options]``.

Every command prints one certificate (JSON, or one CSV row with columns
``op,verdict,verified,output,evidence,error``). Exit status: 0 verdict
true/computed, 1 false/counterexample/shortfall, 2 usage, 3 budget/resource.
Set, coloring and table arguments accept inline JSON or ``@path``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import density, largeness, limitmin, suite, witness
from .certificate import Certificate, jsonable
from .colorings import (
    PairColoring,
    encode_family,
    indicator,
    is_fallow,
    is_transitive,
    zero_homogeneous_quadruples,
)
from .errors import (
    EmlabError,
    InsufficientLargeness,
    ResourceLimit,
    Shortfall,
    VerificationFailed,
)
from .finset import FinSet, finset_from_json
from .ordinal import parse_ordinal

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
CSV_COLUMNS = ("op", "verdict", "verified", "output", "evidence", "error")


# --- argument helpers --------------------------------------------------------


def _load(text: str):
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    return json.loads(text)


def _set(text: str) -> FinSet:
    return finset_from_json(_load(text))


def _shard(text: str) -> tuple[int, int]:
    try:
        i, n = (int(v) for v in text.split("/"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"shard must look like i/n, got {text!r}") from None
    if not 0 <= i < n:
        raise argparse.ArgumentTypeError(f"shard index must be below the count: {text!r}")
    return i, n


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _pair(text: str) -> tuple[int, int]:
    a, b = (int(v) for v in text.split(","))
    return a, b


def _coloring(args, ground: FinSet | None = None) -> PairColoring:
    """The coloring named by --coloring, --random-colors or --constant-colors."""
    if args.coloring:
        return PairColoring.from_json(_load(args.coloring))
    if ground is None:
        raise EmlabError("a generated coloring needs --set")
    if args.random_colors:
        return PairColoring.random(ground, args.random_colors, np.random.default_rng(args.seed))
    if args.constant_colors:
        return PairColoring.constant(ground, args.constant_colors)
    raise EmlabError("give --coloring, --random-colors or --constant-colors")


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=_positive, default=None,
                        help="enumeration budget (default: $EMLAB_BUDGET or 2^30)")
    common.add_argument("--digit-budget", type=_positive, default=largeness.DEFAULT_DIGIT_BUDGET)
    common.add_argument("--samples", type=int, default=1000)
    common.add_argument("--shard", type=_shard, default=(0, 1), metavar="I/N")
    common.add_argument("--workers", type=_positive, default=1)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--stable", action="store_true", help="omit timestamps and timings")
    common.add_argument("-v", "--verbose", action="store_true")

    colored = argparse.ArgumentParser(add_help=False)
    colored.add_argument("--coloring", help="coloring JSON or @path")
    colored.add_argument("--random-colors", type=_positive, help="random coloring of --set (uses --seed)")
    colored.add_argument("--constant-colors", type=_positive, help="constant-0 coloring of --set")

    parser = argparse.ArgumentParser(prog="emlab", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)

    def command(group, name, fn, *parents, **kw):
        p = group.add_parser(name, parents=[common, *parents], **kw)
        p.set_defaults(func=fn)
        return p

    large = groups.add_parser("large").add_subparsers(dest="cmd", required=True)
    p = command(large, "check", cmd_large_check)
    p.add_argument("--set", required=True)
    p.add_argument("--alpha", required=True)
    p = command(large, "endpoint", cmd_large_endpoint)
    p.add_argument("--alpha", required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--stepping", action="store_true", help="use the bare stepping recurrence")
    p = command(large, "decompose", cmd_large_decompose)
    p.add_argument("--set", required=True)
    p.add_argument("--parts", required=True, help="comma-separated summands, smallest block first")

    sparse = groups.add_parser("sparse").add_subparsers(dest="cmd", required=True)
    p = command(sparse, "check", cmd_sparse_check)
    p.add_argument("--set", required=True)
    p.add_argument("--alpha", required=True)

    p = groups.add_parser("sparsify", parents=[common])
    p.set_defaults(func=cmd_sparsify)
    p.add_argument("--set", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)

    color = groups.add_parser("color").add_subparsers(dest="cmd", required=True)
    for name, fn in (("fallow", cmd_color_fallow), ("transitive", cmd_color_transitive)):
        p = command(color, name, fn, colored)
        p.add_argument("--set", help="restrict the check to this subset (ground of a generated coloring)")
    p = command(color, "encode", cmd_color_encode)
    p.add_argument("--family", required=True, help="JSON list of 2-colorings or @path")
    p = command(color, "indicator", cmd_color_indicator, colored)
    p.add_argument("--color", type=int, required=True)
    p.add_argument("--set", help="ground of a generated coloring")
    p = command(color, "triple", cmd_color_triple, colored)
    p.add_argument("--set", help="ground of a generated coloring")

    wit = groups.add_parser("witness").add_subparsers(dest="cmd", required=True)
    p = command(wit, "base", cmd_witness_base, colored)
    p.add_argument("--set", required=True)
    p.add_argument("--non-strict", action="store_true")
    p = command(wit, "stabilize", cmd_witness_stabilize, colored)
    p.add_argument("--set", required=True)
    p.add_argument("--anchors", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=int, default=None)
    p.add_argument("--direction", choices=("anchors-below", "anchors-above"), default="anchors-below")
    p = command(wit, "grouping", cmd_witness_grouping, colored)
    p.add_argument("--set", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--level-gap", type=int, default=6)
    p = command(wit, "em", cmd_witness_em, colored)
    p.add_argument("--set", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--toy-base", action="store_true", help="accept every block maximum")
    p.add_argument("--non-strict", action="store_true")
    p.add_argument("--grouping-exponents", type=_pair, default=None, metavar="BLOCK,MAXSET")

    dens = groups.add_parser("density").add_subparsers(dest="cmd", required=True)
    p = command(dens, "check", cmd_density_check)
    p.add_argument("--set", required=True)
    q = p.add_mutually_exclusive_group(required=True)
    q.add_argument("--m", type=int)
    q.add_argument("--alpha")
    p.add_argument("--mode", choices=("exact", "randomized"), default="exact")
    p.add_argument("--alt-reading", action="store_true", help="bound the block count by |Z_0|")
    p = command(dens, "refute", cmd_density_refute)
    p.add_argument("--set", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--alt-reading", action="store_true")

    lm = groups.add_parser("limitmin").add_subparsers(dest="cmd", required=True)
    p = command(lm, "qmin", cmd_lm_qmin)
    p.add_argument("--table", required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p = command(lm, "f", cmd_lm_f)
    p.add_argument("--table", required=True)
    p = command(lm, "scan", cmd_lm_scan)
    q = p.add_mutually_exclusive_group(required=True)
    q.add_argument("--table")
    q.add_argument("--exhaustive", metavar="U,VCAP,HORIZON")
    p = command(lm, "stability", cmd_lm_stability)
    p.add_argument("--table", required=True)
    p.add_argument("--a", type=int, required=True)
    p = command(lm, "rtrajectory", cmd_lm_rtrajectory)
    p.add_argument("--theta", required=True)
    p.add_argument("--a", type=int, required=True)

    st = groups.add_parser("suite").add_subparsers(dest="cmd", required=True)
    p = command(st, "run", cmd_suite_run)
    p.add_argument("--filter", default=None)
    return parser


# --- commands ----------------------------------------------------------------
# Each returns a Certificate; ``verdict`` False maps to exit status 1.


def _verdict(cert: Certificate, value: bool) -> Certificate:
    cert.verdict = bool(value)
    cert.verified = True
    return cert


def cmd_large_check(args) -> Certificate:
    X, alpha = _set(args.set), parse_ordinal(args.alpha)
    cert = Certificate("large.check", {"set": X, "alpha": str(alpha)})
    res = largeness.residue(X, alpha)
    cert.output = res.is_zero
    cert.evidence = {"residue": str(res)}
    return _verdict(cert, res.is_zero)


def cmd_large_endpoint(args) -> Certificate:
    alpha = parse_ordinal(args.alpha)
    cert = Certificate("large.endpoint", {"alpha": str(alpha), "a": args.a, "stepping": args.stepping})
    fn = largeness.endpoint_by_stepping if args.stepping else largeness.least_large_endpoint
    cert.output = fn(alpha, args.a, args.digit_budget)
    return _verdict(cert, True)


def cmd_large_decompose(args) -> Certificate:
    X = _set(args.set)
    parts = [parse_ordinal(p) for p in args.parts.split(",")]
    cert = Certificate("large.decompose", {"set": X, "parts": [str(p) for p in parts]})
    try:
        cert.output = largeness.decompose_large(X, parts)
    except InsufficientLargeness as exc:
        cert.error = str(exc)
        return _verdict(cert, False)
    return _verdict(cert, True)


def cmd_sparse_check(args) -> Certificate:
    X, alpha = _set(args.set), parse_ordinal(args.alpha)
    cert = Certificate("sparse.check", {"set": X, "alpha": str(alpha)})
    cert.output = largeness.is_alpha_sparse(X, alpha)
    return _verdict(cert, cert.output)


def cmd_sparsify(args) -> Certificate:
    X = _set(args.set)
    cert = Certificate("sparsify", {"set": X, "n": args.n, "m": args.m})
    try:
        cert.output = largeness.sparsify(X, args.n, args.m)
    except InsufficientLargeness as exc:
        cert.error = str(exc)
        return _verdict(cert, False)
    return _verdict(cert, True)


def _triple_cmd(args, op, fn) -> Certificate:
    S = _set(args.set) if args.set else None
    P = _coloring(args, S)
    cert = Certificate(op, {"coloring": P, "set": S})
    res = fn(P, S)
    cert.output = res.ok
    if not res.ok:
        cert.evidence = {"triple": list(res.triple)}
    return _verdict(cert, res.ok)


def cmd_color_fallow(args) -> Certificate:
    return _triple_cmd(args, "color.fallow", is_fallow)


def cmd_color_transitive(args) -> Certificate:
    return _triple_cmd(args, "color.transitive", is_transitive)


def cmd_color_encode(args) -> Certificate:
    family = [PairColoring.from_json(c) for c in _load(args.family)]
    cert = Certificate("color.encode", {"family": family})
    cert.output = encode_family(family)
    return _verdict(cert, True)


def cmd_color_indicator(args) -> Certificate:
    P = _coloring(args, _set(args.set) if args.set else None)
    cert = Certificate("color.indicator", {"coloring": P, "color": args.color})
    cert.output = indicator(P, args.color)
    return _verdict(cert, True)


def cmd_color_triple(args) -> Certificate:
    P = _coloring(args, _set(args.set) if args.set else None)
    cert = Certificate("color.triple", {"coloring": P})
    quads = zero_homogeneous_quadruples(P)
    cert.output = {"zero_homogeneous_quadruples": [list(q) for q in quads]}
    return _verdict(cert, not quads)


def _witness_cert(op, inputs, nominal, enforced, build) -> Certificate:
    cert = Certificate(op, inputs, nominal_preconditions=nominal, enforced_preconditions=enforced)
    try:
        cert.output = build()
    except Shortfall as exc:
        cert.error = f"{type(exc).__name__}: {exc}"
        cert.evidence = {"partial": jsonable(exc.partial)}
        cert.verdict = False
        return cert
    cert.verified = True
    cert.verdict = True
    return cert


def cmd_witness_base(args) -> Certificate:
    X = _set(args.set)
    P = _coloring(args, X)
    a = X.min()
    enforced = {"colors <= min X": P.colors <= a}
    if not args.non_strict:
        enforced["|X| > (a+1)^(a+1)"] = len(X) > (a + 1) ** (a + 1)
    return _witness_cert(
        "witness.base", {"set": X, "coloring_colors": P.colors, "strict": not args.non_strict},
        witness.nominal_preconditions("base", X), enforced,
        lambda: witness.fallow_base_witness(X, P, strict=not args.non_strict),
    )


def cmd_witness_stabilize(args) -> Certificate:
    X, anchors = _set(args.set), _set(args.anchors)
    P = _coloring(args, anchors.union(X))
    c = len(anchors) if args.c is None else args.c
    return _witness_cert(
        "witness.stabilize",
        {"set": X, "anchors": anchors, "n": args.n, "c": c, "direction": args.direction},
        witness.nominal_preconditions("stabilize", X, args.n, c),
        {"rounds": c * c, "per-round demand": f"w^{args.n}.4^(c^2-i-1)"},
        lambda: witness.stabilize(X, anchors, P, args.n, args.direction, c),
    )


def cmd_witness_grouping(args) -> Certificate:
    X = _set(args.set)
    P = _coloring(args, X)
    return _witness_cert(
        "witness.grouping", {"set": X, "n": args.n, "k": args.k, "level_gap": args.level_gap},
        witness.nominal_preconditions("grouping", X), {"colors <= min X": P.colors <= X.min()},
        lambda: witness.build_grouping(X, P, args.n, args.k, args.level_gap),
    )


def cmd_witness_em(args) -> Certificate:
    X = _set(args.set)
    P = _coloring(args, X)
    kw = {"strict": not args.non_strict}
    if args.toy_base:
        kw["base"] = suite.toy_base
    if args.grouping_exponents:
        ge = args.grouping_exponents
        kw["grouping_exponents"] = lambda n: ge
    cert = _witness_cert(
        "witness.em",
        {"set": X, "n": args.n, "toy_base": args.toy_base, "strict": not args.non_strict,
         "grouping_exponents": list(args.grouping_exponents or ()) or None},
        witness.nominal_preconditions("em", X, args.n), {"colors <= min X": P.colors <= X.min()},
        lambda: witness.em_witness(X, P, args.n, **kw),
    )
    return cert


def cmd_density_check(args) -> Certificate:
    X = _set(args.set)
    common = dict(mode=args.mode, seed=args.seed, samples=args.samples, budget=args.budget,
                  shard=args.shard, workers=args.workers)
    if args.alpha is not None:
        cert = density.check_em_alpha_large(X, parse_ordinal(args.alpha), **common)
    else:
        cert = density.check_em_dense(X, args.m, alt_reading=args.alt_reading, **common)
    problems = density.revalidate(cert)
    if problems:
        raise VerificationFailed(f"evidence failed re-validation: {problems}")
    return cert


def cmd_density_refute(args) -> Certificate:
    X = _set(args.set)
    cert = Certificate("density.refute", {"set": X, "m": args.m, "alt_reading": args.alt_reading},
                       seed=args.seed, samples=args.samples, subject=X,
                       query={"kind": "em-m-dense", "parameter": args.m}, mode="randomized")
    ref = density.refute_density(X, args.m, args.samples, args.seed, args.alt_reading, args.budget)
    if ref is None:
        cert.output = "none-found"
        return cert
    cert.output = ref
    cert.verdict = False
    cert.verified = True
    cert.evidence = {"clause": ref.clause, **ref.evidence}
    return cert


def _table(text) -> limitmin.ValueTable:
    return limitmin.ValueTable.from_json(_load(text))


def cmd_lm_qmin(args) -> Certificate:
    h = _table(args.table)
    cert = Certificate("limitmin.qmin", {"table": h, "a": args.a, "b": args.b})
    cert.output = limitmin.qmin(h, args.a, args.b)
    return _verdict(cert, True)


def cmd_lm_f(args) -> Certificate:
    h = _table(args.table)
    cert = Certificate("limitmin.f", {"table": h})
    cert.output = limitmin.argmax_coloring(h)
    return _verdict(cert, True)


def cmd_lm_scan(args) -> Certificate:
    if args.exhaustive:
        u, vcap, horizon = (int(v) for v in args.exhaustive.split(","))
        cert = Certificate("limitmin.sweep", {"u": u, "vcap": vcap, "horizon": horizon})
        cert.output = limitmin.exhaustive_sweep(u, vcap, horizon)
        return _verdict(cert, cert.output["violating"] == 0)
    h = _table(args.table)
    cert = Certificate("limitmin.scan", {"table": h})
    triples = limitmin.fallow_scan(h)
    cert.output = [list(t) for t in triples]
    return _verdict(cert, not triples)


def cmd_lm_stability(args) -> Certificate:
    h = _table(args.table)
    cert = Certificate("limitmin.stability", {"table": h, "a": args.a})
    cert.output = limitmin.stability_scan(h, args.a)
    return _verdict(cert, cert.output.stable)


def cmd_lm_rtrajectory(args) -> Certificate:
    theta = limitmin.ThetaTable.from_json(_load(args.theta))
    cert = Certificate("limitmin.rtrajectory", {"bounds": list(theta.bounds), "a": args.a})
    cert.output = limitmin.r_trajectory(theta, args.a)
    return _verdict(cert, True)


def cmd_suite_run(args) -> Certificate:
    cert = Certificate("suite.run", {"seed": args.seed, "filter": args.filter,
                                     "shard": list(args.shard)}, seed=args.seed)
    report = suite.run_suite(args.seed, args.filter, args.stable, args.shard)
    cert.output = report
    return _verdict(cert, report["passed"])


# --- entry point -------------------------------------------------------------


def _emit(cert: Certificate, fmt: str, stable: bool, out) -> None:
    if fmt == "json":
        out.write(cert.dumps(stable) + "\n")
        return
    data = cert.to_json(stable)
    row = []
    for col in CSV_COLUMNS:
        v = data.get(col)
        row.append(v if isinstance(v, (str, int, float, bool)) or v is None else json.dumps(v, sort_keys=True))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    w.writerow(row)
    out.write(buf.getvalue())


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cert = args.func(args)
    except ResourceLimit as exc:
        print(f"emlab: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except VerificationFailed as exc:
        print(f"emlab: verification failed: {exc}", file=sys.stderr)
        return EXIT_FALSE
    except (EmlabError, ValueError, KeyError, OSError) as exc:
        print(f"emlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(cert, args.format, args.stable, sys.stdout)
    return EXIT_FALSE if cert.verdict is False else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
