"""Command-line driver: ``bnet check|rank|marginal|infer|gen|bench``.

Exit codes: 0 success, 1 domain error (e.g. ``--engine dp`` on a non-graded
network), 2 usage, parse or validation error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from .errors import BNetError, NotGraded, ParseError, UnknownName, ValidationError, UnassignedVariable
from .inference import SLICE_CAP, forward_dp, infer
from .io import parse_evidence, parse_network, serialize_network
from .model import marginal_brute_force
from .netgen import GenConfig, gen_fixture, gen_graded
from .ranking import compute_semi_ranks
from .tropical import INF, tropicalize, tropicalize_model

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2
_INPUT_ERRORS = (ParseError, ValidationError, UnknownName, UnassignedVariable, OSError)


def fmt_weight(w: float) -> str:
    return "inf" if w == INF else format(w, ".12g")


def fmt_prob(p: float) -> str:
    return format(p, ".12g")


def _slice_cap() -> int:
    raw = os.environ.get("BNET_SLICE_CAP")
    if not raw:
        return SLICE_CAP
    try:
        return int(float(raw))
    except ValueError:
        raise ParseError(f"BNET_SLICE_CAP={raw!r} is not a number", "$env") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _load_net(path: str):
    return parse_network(Path(path).read_bytes())


def _witness_text(net, ranks) -> str:
    w, u = ranks.witness, ranks.witness_parent
    want = ranks.rho[w] if net.variables[w].observed else ranks.rho[w] - 1
    return (f"witness: {net.variables[w].name} (hidden parent {net.variables[u].name} "
            f"has rank {ranks.rho[u]}, expected {want})")


def cmd_check(args, out) -> int:
    net = _load_net(args.network)
    ranks = compute_semi_ranks(net)
    print("valid: true", file=out)
    print(f"graded: {'true' if ranks.graded else 'false'}", file=out)
    if not ranks.graded:
        print(_witness_text(net, ranks), file=out)
        return EXIT_DOMAIN
    return EXIT_OK


def cmd_rank(args, out) -> int:
    net = _load_net(args.network)
    ranks = compute_semi_ranks(net)
    width = max([4] + [len(v.name) for v in net.variables])
    print(f"{'name':<{width}} kind     rho", file=out)
    for v in net.variables:
        print(f"{v.name:<{width}} {v.kind:<8} {ranks.rho[v.id]}", file=out)
    print(f"graded: {'true' if ranks.graded else 'false'}", file=out)
    return EXIT_OK


def cmd_marginal(args, out) -> int:
    net = _load_net(args.network)
    x = parse_evidence(Path(args.evidence).read_bytes(), net)
    p = marginal_brute_force(net, x)
    print(f"marginal: {fmt_prob(p)}", file=out)
    print(f"weight: {fmt_weight(tropicalize(min(p, 1.0)))}", file=out)
    return EXIT_OK


def cmd_infer(args, out) -> int:
    net = _load_net(args.network)
    x = parse_evidence(Path(args.evidence).read_bytes(), net)
    res = infer(net, x, mode="all" if args.all else "one", engine=args.engine,
                slice_cap=_slice_cap())
    print(f"engine: {res.engine}", file=out)
    print(f"weight: {fmt_weight(res.weight)}", file=out)
    if res.marginal is not None:
        print(f"marginal: {fmt_prob(res.marginal)}", file=out)
    if not res.explanations:
        print("no explanation", file=out)
        return EXIT_OK
    print(f"explanations: {res.explanation_count}", file=out)
    for y in res.explanations:
        print(json.dumps(net.labels(y)), file=out)
    return EXIT_OK


def cmd_gen(args, out) -> int:
    if args.fixture:
        net = gen_fixture(args.fixture, args.n, states=args.states, seed=args.seed)
    else:
        hidden = args.hidden or [1] * args.ranks
        observed = args.observed or [1] * len(hidden)
        if len(hidden) == 1 and args.ranks > 1:
            hidden = hidden * args.ranks
        if len(observed) == 1 and len(hidden) > 1:
            observed = observed * len(hidden)
        cfg = GenConfig(seed=args.seed or 0, hidden_per_rank=hidden, observed_per_rank=observed,
                        states_per_var=args.states, edge_density=args.density,
                        max_parents=args.max_parents)
        net = gen_graded(cfg)
    text = serialize_network(net)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def bench_once(family: str, size: int, states: int, seed: int) -> tuple[int, float]:
    """(trellis cell updates, seconds) of one forward DP on a figure family."""
    net = gen_fixture(family, size, states=states, seed=seed)
    wm = tropicalize_model(net)
    ranks = compute_semi_ranks(net)
    rng = np.random.default_rng(seed)
    x = {v: int(rng.integers(net.variables[v].card)) for v in net.observed}
    t0 = time.perf_counter()
    trellis = forward_dp(wm, ranks, x, slice_cap=_slice_cap())
    return trellis.cell_updates, time.perf_counter() - t0


def cmd_bench(args, out) -> int:
    print("family,size,states,cell_updates,seconds", file=out)
    for size in args.sizes:
        best = math.inf
        for _ in range(args.repeat):
            cells, secs = bench_once(args.family, size, args.states, args.seed)
            best = min(best, secs)
        print(f"{args.family},{size},{args.states},{cells},{best:.6f}", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bnet", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a network and test gradedness")
    p.add_argument("network")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("rank", help="print semi-ranks")
    p.add_argument("network")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("marginal", help="p_X(x) by enumeration")
    p.add_argument("network")
    p.add_argument("evidence")
    p.set_defaults(func=cmd_marginal)

    p = sub.add_parser("infer", help="most probable hidden states")
    p.add_argument("network")
    p.add_argument("evidence")
    p.add_argument("--all", action="store_true", help="print every explanation")
    p.add_argument("--engine", choices=["auto", "dp", "oracle"], default="auto")
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("gen", help="emit a random graded network or a figure fixture")
    p.add_argument("--seed", type=int, help="RNG seed (fixtures get uniform CPTs without it)")
    p.add_argument("--ranks", type=int, default=1, help="number of rank slices")
    p.add_argument("--hidden", type=_int_list, help="hidden variables per rank, e.g. 1,2,1")
    p.add_argument("--observed", type=_int_list, help="observed variables per rank")
    p.add_argument("--states", type=int, default=2)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--max-parents", type=int, default=4)
    p.add_argument("--fixture", choices=["fig1", "fig2", "fig3", "star", "hmm", "fan"])
    p.add_argument("--n", type=int, help="size for star/hmm/fan fixtures")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="CSV of forward DP cost per size")
    p.add_argument("--family", choices=["hmm", "star", "fan"], required=True)
    p.add_argument("--sizes", type=_int_list, required=True)
    p.add_argument("--states", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeat", type=int, default=1)
    p.set_defaults(func=cmd_bench)
    return ap


def run_cli(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args, out)
    except _INPUT_ERRORS as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE
    except NotGraded as e:
        print(f"error: {e}", file=err)
        return EXIT_DOMAIN
    except BNetError as e:
        print(f"error: {type(e).__name__}: {e}", file=err)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run_cli())
