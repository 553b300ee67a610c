"""Command-line interface: ``tridom {gen,solve,verify,oracle,bench,convert}``.

Exit codes: 0 ok, 1 verification failure, 2 input error, 3 coloring budget
exhausted.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import bench as bench_mod
from .errors import (
    BudgetExhausted,
    CodecError,
    DigestMismatch,
    EmbeddingError,
    NoPerfectMatching,
    TooLarge,
    TridomError,
    UnknownName,
    ValidationFailed,
)
from .generators import GenSpec, generate
from .graphio import (
    load_graphs,
    read_certificate,
    save_graphs,
    verify_certificate,
    write_certificate,
)
from .oracle import alpha_exact, check_obs1, gamma_exact, iota_exact
from .pipeline import solve

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def _seed(value: int) -> int:
    env = os.environ.get("TRIDOM_SEED")
    return int(env) if env not in (None, "") else value


def _cmd_gen(args) -> int:
    spec = GenSpec(kind=args.kind, n=args.n, seed=_seed(args.seed), name=args.name,
                   flips=args.flips)
    g = generate(spec)
    save_graphs(args.output, [g])
    print(f"id={spec.id} n={g.n} m={g.m} file={args.output}")
    return EXIT_OK


def _cmd_solve(args) -> int:
    graphs = load_graphs(args.input)
    if args.cert and len(graphs) != 1:
        raise ValueError("--cert needs an input holding exactly one graph")
    for g in graphs:
        cert = solve(g, seed=_seed(args.seed))
        if args.trace:
            for level, step in enumerate(cert.trace):
                print(f"level={level} case={step['case']} "
                      f"deleted={','.join(map(str, step['deleted']))} "
                      f"chords={';'.join('-'.join(map(str, c)) for c in step['chords'])}")
            print(" ".join(f"{k}={v}" for k, v in cert.stats.items()
                           if not isinstance(v, list)))
        print(f"n={cert.n} |D|={len(cert.D)} bound={cert.bound} ok")
        if args.cert:
            Path(args.cert).write_text(write_certificate(cert, g))
    return EXIT_OK


def _cmd_verify(args) -> int:
    graphs = load_graphs(args.input)
    if len(graphs) != 1:
        raise ValueError("verify needs an input holding exactly one graph")
    cert = read_certificate(Path(args.cert).read_text())
    try:
        report = verify_certificate(graphs[0], cert)
    except (DigestMismatch, ValidationFailed) as exc:
        print(f"verification failed: {exc}")
        return EXIT_VERIFY
    print(f"n={graphs[0].n} |D|={report.size} bound={report.bound} ok")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    for g in load_graphs(args.input):
        if args.param == "obs1":
            res = check_obs1(g)
            print(f"obs1={'true' if res.holds else 'false'} max={res.max_size} n={g.n} "
                  f"f3={res.f3} f6plus={res.f6plus}")
            if not res.holds:
                return EXIT_VERIFY
            continue
        fn = {"iota": iota_exact, "gamma": gamma_exact, "alpha": alpha_exact}[args.param]
        res = fn(g)
        print(f"{args.param}={res.value} witness={','.join(map(str, res.witness))} "
              f"nodes={res.nodes_explored}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    specs = bench_mod.load_specs(args.spec)
    records = bench_mod.run_bench(specs, jobs=args.jobs, iota_max=args.iota_max)
    with open(args.csv, "w", newline="") as fh:
        bench_mod.write_csv(records, fh)
    worst = sum(r.dsize > r.bound for r in records)
    print(f"rows={len(records)} over_bound={worst} csv={args.csv}")
    return EXIT_OK if worst == 0 else EXIT_VERIFY


def _cmd_convert(args) -> int:
    graphs = load_graphs(args.input)
    save_graphs(args.output, graphs)
    print(f"graphs={len(graphs)} file={args.output}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tridom", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a triangulation")
    g.add_argument("--kind", choices=["named", "stacked", "flipmix", "gadget"], required=True)
    g.add_argument("--n", type=int, default=4)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--flips", type=int, default=0)
    g.add_argument("--name")
    g.add_argument("-o", "--output", required=True, help="output file (.plc or .rot)")
    g.set_defaults(func=_cmd_gen)

    s = sub.add_parser("solve", help="certified independent dominating set")
    s.add_argument("input")
    s.add_argument("--cert")
    s.add_argument("--trace", action="store_true")
    s.add_argument("--seed", type=int, default=0, help="coloring restart seed")
    s.set_defaults(func=_cmd_solve)

    v = sub.add_parser("verify", help="re-check a certificate")
    v.add_argument("input")
    v.add_argument("--cert", required=True)
    v.set_defaults(func=_cmd_verify)

    o = sub.add_parser("oracle", help="exact small-graph parameters")
    o.add_argument("input")
    o.add_argument("--param", choices=["iota", "gamma", "alpha", "obs1"], required=True)
    o.set_defaults(func=_cmd_oracle)

    b = sub.add_parser("bench", help="batch run over generator specs")
    b.add_argument("--spec", required=True, help="JSON list of generator specs")
    b.add_argument("--csv", required=True)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--iota-max", type=int, default=bench_mod.DEFAULT_IOTA_MAX,
                   help="run the exact oracle up to this many vertices")
    b.set_defaults(func=_cmd_bench)

    c = sub.add_parser("convert", help="convert between .plc and .rot")
    c.add_argument("input")
    c.add_argument("output")
    c.set_defaults(func=_cmd_convert)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CodecError, EmbeddingError, UnknownName, NoPerfectMatching, TooLarge,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TridomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
