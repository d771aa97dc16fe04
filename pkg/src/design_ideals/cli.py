"""Command-line interface.

Exit codes: 0 success, 1 table mismatch or invalid certificate, 2 zero-set
counterexample, 3 budget exceeded, 4 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bits import lex_key, points_of, subsets_of_size
from .catalog import CONSTRUCTORS, FAMILY_CHOICES, TABLE, construct, family_generators
from .certificate import GammaCertificate, certify, check_certificate, reproduce_table
from .config import DEFAULT_SEED, BudgetExceeded, set_budget
from .designs import Design, DesignError, read_design, strength, write_design
from .exactla import evaluation_matrix, rank
from .gamma import ZeroSetFailure, block_pair_matrix, greedy_generator_subset, zero_set_check
from .poly import GeneratorSet, read_generator_set, write_generator_set
from .sts import PartialTripleSystem, complete_partial_sts, parse_triple, pasch_configurations, read_trade

EXIT_OK, EXIT_FAIL, EXIT_COUNTEREXAMPLE, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3, 4


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomised steps")
    p.add_argument("--threads", type=int, default=None, help="zero-set worker threads (default: CPU count)")
    p.add_argument("--budget", type=int, default=None,
                   help="max subsets per exhaustive loop (env DESIGN_IDEALS_BUDGET)")
    return p


def _design_source(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--design", type=Path, help="design file")
    g.add_argument("--named", choices=CONSTRUCTORS, help="built-in design")
    _construction_args(p)


def _construction_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--d", type=int, default=2, help="projective dimension (pg)")
    p.add_argument("--e", type=int, default=1, help="subspace dimension (pg)")
    p.add_argument("--q", type=int, default=2, help="field order (pg, ag)")
    p.add_argument("--n", type=int, default=2, help="affine dimension (ag)")
    p.add_argument("--v", type=int, default=None, help="point count (sts, complete, 2v32)")
    p.add_argument("--k", type=int, default=None, help="block size (complete)")
    p.add_argument("--trade", type=Path, default=None, help="trade file (2v32)")
    p.add_argument("--drop", "--drop-block", dest="drop", default=None,
                   help="triple of T2 to drop (2v32), in the trade file's index base")
    p.add_argument("--index-base", type=int, choices=(0, 1), default=None,
                   help="index base of --drop (default: the trade file's; 1 for the built-in trade)")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="design-ideals",
                                     description="t-designs, vanishing-ideal generators and gamma_1/gamma_2")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build a design and write it")
    p.add_argument("--family", required=True, choices=CONSTRUCTORS)
    _construction_args(p)
    p.add_argument("-o", "--output", type=Path)

    p = sub.add_parser("gamma", parents=[common], help="certify gamma_1 and gamma_2 bounds")
    _design_source(p)
    p.add_argument("--family", choices=FAMILY_CHOICES, default="auto", help="generator family")
    p.add_argument("--t", type=int, default=None, help="strength for steiner/partial generators")
    p.add_argument("-o", "--output", type=Path, help="certificate JSON path")

    p = sub.add_parser("verify", parents=[common], help="zero-set check of a generator set")
    _design_source(p)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--family", choices=FAMILY_CHOICES, default="auto")
    g.add_argument("--generators", type=Path, help="generator set file")
    p.add_argument("--t", type=int, default=None)

    p = sub.add_parser("generators", parents=[common], help="write a generator set file")
    _design_source(p)
    p.add_argument("--family", choices=FAMILY_CHOICES, default="auto")
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--minimal", action="store_true",
                   help="greedily keep only enough generators to cut out the blocks")
    p.add_argument("-o", "--output", type=Path, required=True)

    p = sub.add_parser("reproduce-table", parents=[common], help="recompute the Witt gamma table")
    p.add_argument("--row", action="append", choices=[r[0] for r in TABLE],
                   help="restrict to a row (repeatable)")
    p.add_argument("--certificates", type=Path, help="directory for per-row certificates")

    p = sub.add_parser("check-certificate", parents=[common], help="re-verify a certificate")
    p.add_argument("certificate", type=Path)
    p.add_argument("--design", type=Path, help="design file (default: rebuild from the recipe)")

    p = sub.add_parser("coset-rank", parents=[common],
                       help="rank of monomial cosets in the coordinate ring")
    _design_source(p)
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--degree", type=int, help="all monomials x^S with |S| = degree")
    kind.add_argument("--block-sums", type=int, metavar="J",
                      help="x^{B,J} for every block B")

    p = sub.add_parser("sts", help="triple systems and trades")
    ssub = p.add_subparsers(dest="sts_command", required=True)
    q = ssub.add_parser("build-2v32", parents=[common], help="2-(v,3,2) design with gamma_2 = 3")
    _construction_args(q)
    q.add_argument("-o", "--output", type=Path)
    q = ssub.add_parser("complete", parents=[common], help="complete a partial triple system")
    q.add_argument("--partial", type=Path, help="design file of triples (default: empty)")
    q.add_argument("--v", type=int, required=True)
    q.add_argument("-o", "--output", type=Path)
    q = ssub.add_parser("pasch", parents=[common], help="count Pasch configurations")
    _design_source(q)
    q.add_argument("--list", action="store_true", help="print every configuration")
    return parser


# -- helpers -------------------------------------------------------------------------------

def _construct(args, name: str) -> Design:
    trade = read_trade(args.trade) if getattr(args, "trade", None) else None
    drop = None
    if getattr(args, "drop", None):
        base = args.index_base
        if base is None:
            base = trade.index_base if trade is not None else 1
        drop = points_of(parse_triple(args.drop, base))
    return construct(name, d=args.d, e=args.e, q=args.q, n=args.n, v=args.v, k=args.k,
                     trade=trade, drop=drop, seed=args.seed)


def _load_design(args) -> Design:
    if getattr(args, "design", None):
        return read_design(args.design)
    return _construct(args, args.named)


def _summary(design: Design) -> str:
    return f"{design.name}: v={design.v} k={design.k} b={design.b} strength {strength(design)}"


def _emit_design(design: Design, output: Path | None) -> None:
    if output:
        write_design(design, output)
        print(f"wrote {output}")
    print(_summary(design))


# -- commands ------------------------------------------------------------------------------

def cmd_construct(args) -> int:
    _emit_design(_construct(args, args.family), args.output)
    return EXIT_OK


def cmd_gamma(args) -> int:
    design = _load_design(args)
    cert = certify(design, args.family, args.t, threads=args.threads, seed=args.seed)
    if args.output:
        cert.write(args.output)
        print(f"wrote {args.output}")
    lo, hi = cert.gamma2_interval
    g1 = cert.data["gamma1"]
    g1_text = g1["value"] if g1["value"] is not None else f"[{g1['lower']}, {g1['upper']}]"
    g2_text = cert.gamma2 if cert.gamma2 is not None else f"[{lo}, {hi}]"
    up = cert.data["gamma2"]["upper"]
    print(f"{design.name}: gamma1 {g1_text}, gamma2 {g2_text} "
          f"(upper via {up['family']}, lower via {cert.data['gamma2']['lower']['source']})")
    return EXIT_OK


def _generators(args, design: Design) -> GeneratorSet:
    if getattr(args, "generators", None):
        G = read_generator_set(args.generators)
        if (G.v, G.k) != (design.v, design.k):
            raise DesignError(f"generator set is for v={G.v}, k={G.k}, design has v={design.v}, k={design.k}")
        return G
    return family_generators(design, args.family, args.t)


def cmd_verify(args) -> int:
    design = _load_design(args)
    G = _generators(args, design)
    report = zero_set_check(design, G, args.threads)
    print(f"{design.name}, {G.family} ({len(G.extra())} generators + G0, max degree {G.max_degree}): "
          f"{report.describe()}")
    return EXIT_OK if report.exact else EXIT_COUNTEREXAMPLE


def cmd_generators(args) -> int:
    design = _load_design(args)
    G = family_generators(design, args.family, args.t)
    if args.minimal:
        G = greedy_generator_subset(design, G)
    write_generator_set(G, args.output)
    print(f"wrote {args.output}: {G.family}, {len(G.extra())} generators + G0, max degree {G.max_degree}")
    return EXIT_OK


def cmd_reproduce_table(args) -> int:
    rows = reproduce_table(args.row, threads=args.threads)
    if args.certificates:
        args.certificates.mkdir(parents=True, exist_ok=True)
    for r in rows:
        status = "ok" if r.ok else "MISMATCH"
        print(f"{r.name:7s} {r.params:11s} expected {r.expected} got {r.got}  {status}")
        if args.certificates:
            r.certificate.write(args.certificates / f"{r.name}.json")
    matched = sum(r.ok for r in rows)
    print(f"{matched}/{len(rows)} rows match")
    return EXIT_OK if matched == len(rows) else EXIT_FAIL


def cmd_check_certificate(args) -> int:
    cert = GammaCertificate.read(args.certificate)
    design = read_design(args.design) if args.design else None
    res = check_certificate(cert, design, threads=args.threads)
    if res.valid:
        print("valid")
        return EXIT_OK
    print("invalid")
    for path, msg in res.errors:
        print(f"  {path}: {msg}")
    return EXIT_FAIL


def cmd_coset_rank(args) -> int:
    design = _load_design(args)
    blocks = sorted(design.blocks, key=lex_key)
    if args.degree is not None:
        funcs = list(subsets_of_size(design.v, args.degree))
        label = f"monomials of degree {args.degree}"
        r = rank(evaluation_matrix(blocks, funcs))
    else:
        funcs = blocks
        label = f"x^{{B,{args.block_sums}}} over blocks"
        r = rank(block_pair_matrix(design, args.block_sums))
    basis = r == design.b == len(funcs)
    print(f"{design.name}: rank {r} of {len(funcs)} {label}; |B| = {design.b}; "
          f"{'basis' if basis else 'not a basis'}")
    return EXIT_OK


def cmd_sts(args) -> int:
    if args.sts_command == "build-2v32":
        design = _construct(args, "2v32")
        _emit_design(design, args.output)
        print(f"dropped block {design.meta['dropped_block']} (0-indexed) is not a block")
        return EXIT_OK
    if args.sts_command == "complete":
        triples = read_design(args.partial).blocks if args.partial else ()
        design = complete_partial_sts(PartialTripleSystem.of(triples, args.v), args.v, seed=args.seed)
        _emit_design(design, args.output)
        return EXIT_OK
    design = _load_design(args)
    configs = pasch_configurations(design)
    print(f"{design.name}: {len(configs)} Pasch configurations")
    if args.list:
        for cfg in configs:
            print("  " + "  ".join(" ".join(map(str, points_of(b))) for b in cfg))
    return EXIT_OK


COMMANDS = {
    "construct": cmd_construct, "gamma": cmd_gamma, "verify": cmd_verify,
    "generators": cmd_generators, "reproduce-table": cmd_reproduce_table,
    "check-certificate": cmd_check_certificate, "coset-rank": cmd_coset_rank, "sts": cmd_sts,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors, which is the counterexample code here
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    try:
        set_budget(getattr(args, "budget", None))
        return COMMANDS[args.command](args)
    except ZeroSetFailure as exc:
        print(f"counterexample: {exc.report.describe()}", file=sys.stderr)
        return EXIT_COUNTEREXAMPLE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (DesignError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        # the budget is per invocation; main() may be called repeatedly in-process
        set_budget(None)


if __name__ == "__main__":
    sys.exit(main())
