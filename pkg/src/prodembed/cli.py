"""Command-line front end.

Usage:
  prodembed dim k5 k5 [--circles S] [--intervals I] [--json]
  prodembed verify --kind {sacks,k6,invariance} [--n N] [--trials T] [--seed S] [--json]
  prodembed obstruction --n N [--embedding {standard,random}] [--seed S] [--json]
  prodembed dump-complex --kind {skeleton,join-power,star,product-link,standard,random} ...

Exit codes: 0 success, 2 parse/usage error, 3 hypothesis violation,
4 property violation, 5 geometric failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .complex_core import cone, join_power, product_vertex_link, skeleton_complex
from .graph_core import GraphParseError, HypothesisError, min_embedding_dim, parse_graph
from .linking_verifier import (
    campaign,
    compute_obstruction,
    max_n,
    random_embedding,
    standard_join_embedding,
)
from .pl_geometry import DegeneracyError, ResampleBudgetError

SCHEMA = 1
EXIT_OK, EXIT_PARSE, EXIT_HYPOTHESIS, EXIT_PROPERTY, EXIT_GEOMETRY = 0, 2, 3, 4, 5

KIND_ALIASES = {"sacks": "sacks_n", "k6": "conway_gordon_k6", "invariance": "obstruction_invariance"}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def report_document(command: str, inputs: dict, result: dict, elapsed_ms: float) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "inputs": inputs,
        "result": result,
        "version": __version__,
        "elapsed_ms": round(elapsed_ms, 3),
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


def _load_factor(source: str):
    if os.path.isfile(source):
        with open(source, encoding="utf-8") as fh:
            return parse_graph(fh.read())
    return parse_graph(source)


def cmd_dim(args) -> tuple[dict, dict, int, str]:
    try:
        factors = [_load_factor(src) for src in args.factors]
    except GraphParseError as exc:
        raise CliError(f"parse error: {exc}", EXIT_PARSE) from None
    try:
        res = min_embedding_dim(factors, args.circles, args.intervals)
    except HypothesisError as exc:
        raise CliError(f"hypothesis violation: {exc}", EXIT_HYPOTHESIS) from None
    inputs = {"factors": list(args.factors), "s": args.circles, "i": args.intervals}
    text = f"d = {res.d} (case {res.case}; n={res.n}, s={res.s}, i={res.i})"
    return inputs, res.as_dict(), EXIT_OK, text


def cmd_verify(args) -> tuple[dict, dict, int, str]:
    kind = KIND_ALIASES[args.kind]
    n = args.n if args.n is not None else (3 if kind == "obstruction_invariance" else 2)
    if kind == "conway_gordon_k6":
        n = 2
    elif n > max_n():
        raise CliError(f"n={n} exceeds the cap {max_n()} (PRODEMBED_MAX_N)", EXIT_PARSE)
    res = campaign(kind, n, args.trials, args.seed, workers=args.workers, limit=max_n())
    inputs = {"kind": kind, "n": n, "trials": args.trials, "seed": args.seed}
    if res.failing_seeds:
        code = EXIT_PROPERTY
    elif res.error_seeds:
        code = EXIT_GEOMETRY
    else:
        code = EXIT_OK
    text = (
        f"{kind}: linked fraction {res.linked_fraction:.4f} over {res.trials} trials, "
        f"v histogram {dict(sorted(res.v_histogram.items()))}"
    )
    if res.failing_seeds:
        text += f"\nPROPERTY VIOLATED for seeds {res.failing_seeds}"
    if res.error_seeds:
        text += f"\ngeometric failures for seeds {res.error_seeds}"
    return inputs, res.as_dict(), code, text


def cmd_obstruction(args) -> tuple[dict, dict, int, str]:
    n = args.n
    if n < 1 or n > max_n():
        raise CliError(f"n must be in 1..{max_n()} (PRODEMBED_MAX_N)", EXIT_PARSE)
    base = None
    if args.base:
        try:
            base = tuple(int(x) for x in args.base.split(","))
        except ValueError:
            raise CliError(f"malformed --base {args.base!r}", EXIT_PARSE) from None
    try:
        if args.embedding == "standard":
            e = standard_join_embedding(n, args.seed, limit=max_n())
            g = e.geometric
        else:
            e = None
            g = random_embedding(join_power(skeleton_complex(0, 3), n), 2 * n - 1, args.seed)
        rep = compute_obstruction(g, base)
    except (DegeneracyError, ResampleBudgetError) as exc:
        raise CliError(f"geometric failure: {exc}", EXIT_GEOMETRY) from None
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    result = rep.as_dict()
    if e is not None:
        for entry, pair in zip(result["linked_pairs"], rep.linked_pairs):
            entry["alpha_params"] = e.sphere_params(pair.alpha)
            entry["beta_params"] = e.sphere_params(pair.beta)
    inputs = {"n": n, "embedding": args.embedding, "seed": args.seed, "base": list(base) if base else None}
    text = f"v = {rep.v}; {rep.pairs_examined} constrained pairs examined, {len(rep.linked_pairs)} linked"
    for entry in result["linked_pairs"]:
        a = entry.get("alpha_params", entry["alpha"])
        b = entry.get("beta_params", entry["beta"])
        text += f"\n  linked: alpha={a} beta={b}"
    return inputs, result, EXIT_OK, text


def cmd_dump(args) -> tuple[dict, dict, int, str]:
    kind = args.kind
    try:
        if kind == "skeleton":
            text = skeleton_complex(args.m, args.n).to_text()
        elif kind == "join-power":
            text = join_power(skeleton_complex(0, 3), args.n).to_text()
        elif kind == "star":
            text = cone(join_power(skeleton_complex(0, 3), args.n)).to_text()
        elif kind == "product-link":
            degrees = [int(x) for x in args.degrees.split(",")]
            text = product_vertex_link(degrees).to_text()
        elif kind == "standard":
            text = standard_join_embedding(args.n, args.seed, limit=max_n()).geometric.to_text()
        else:
            c = join_power(skeleton_complex(0, 3), args.n)
            text = random_embedding(c, 2 * args.n - 1, args.seed).to_text()
    except (ValueError, TypeError, AttributeError) as exc:
        raise CliError(f"bad dump arguments: {exc}", EXIT_PARSE) from None
    inputs = {"kind": kind, "m": args.m, "n": args.n, "degrees": args.degrees, "seed": args.seed}
    return inputs, {"text": text}, EXIT_OK, text.rstrip("\n")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="prodembed", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", help="minimal embedding dimension of a product of graphs")
    p.add_argument("factors", nargs="+", help="builtin graph name or edge-list file")
    p.add_argument("--circles", type=int, default=0, metavar="S")
    p.add_argument("--intervals", type=int, default=0, metavar="I")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("verify", help="Monte Carlo verification campaign")
    p.add_argument("--kind", choices=sorted(KIND_ALIASES), required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("obstruction", help="van Kampen parity of a join embedding")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--embedding", choices=["standard", "random"], default="standard")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--base", default=None, help="comma-separated vertex index per factor")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_obstruction)

    p = sub.add_parser("dump-complex", help="serialize a construction")
    p.add_argument(
        "--kind",
        choices=["skeleton", "join-power", "star", "product-link", "standard", "random"],
        required=True,
    )
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--degrees", default="4,4")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_dump)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        inputs, result, code, text = args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    elapsed = (time.perf_counter() - start) * 1000
    if args.json:
        print(dumps(report_document(args.command, inputs, result, elapsed)))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
