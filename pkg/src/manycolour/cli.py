"""Command-line entry point.

    manycolour [--config FILE] {construct,eval,guarantee,hyper,oracle} ...

Results go to stdout as JSON (and to --out when given). Every run appends one
manifest line to $RUN_LOG (default ./run_log.jsonl). Exit codes: 0 success,
1 domain error (precondition or guard), 2 I/O or parse error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import platform
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .construct import (
    certificate_catalogue,
    cube_colouring,
    hypergraph_colouring,
    projective_plane_hypergraph,
    random_base_blowup,
)
from .core import (
    DomainError,
    EdgeColouring,
    Hypergraph,
    ParseError,
    ceil_fraction,
    dumps,
    load,
)
from .evaluate import best_f
from .guarantee import (
    best_colour_set_d,
    greedy_augment,
    iterated_contraction,
    lower_g_bound,
    valid_d_values,
)
from .hypergraph import (
    cover_number,
    disjoint_pair,
    double_count_lower_bound,
    exclusion_sample,
    min_edges_in_subsets,
    uniform_intersecting_sample,
)
from .oracle import census, exact_value


def _fraction_json(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


def _load(path: str, kind):
    return load(path, kind)


# ---------------------------------------------------------------------------
# handlers: each returns a JSON-able object, or a string to print verbatim
# ---------------------------------------------------------------------------

def _construct(args):
    kind = args.what
    if kind == "cube":
        return cube_colouring(args.d, args.n)
    if kind == "random-base":
        return random_base_blowup(args.r, args.s, args.n, args.seed, max_draws=args.max_draws)
    if kind == "plane":
        H = projective_plane_hypergraph(args.p)
    elif kind == "catalogue":
        H = certificate_catalogue(args.name)
    else:
        H = _load(args.inp, Hypergraph)
    return H if args.n is None else hypergraph_colouring(H, args.n)


def _eval(args):
    c = _load(args.colouring, EdgeColouring)
    k = 0 if args.kind == "g" else args.k
    res = best_f(c, args.s, k, force=args.force)
    return {
        "kind": args.kind, "s": args.s, "k": k, "value": res.value,
        "argmax_colours": res.colours.members(), "witness": list(res.witness),
        "exact": res.exact,
    }


def _guarantee(args):
    c = _load(args.colouring, EdgeColouring)
    if args.what == "augment":
        return greedy_augment(c, args.s)
    if args.what == "contract":
        return iterated_contraction(c, args.s, args.k)
    d = args.d
    if d is None:
        ds = list(valid_d_values(c.r, args.s))
        if not ds:
            raise DomainError(f"no d with s <= d < r - s for s={args.s}, r={c.r}")
        d = max(ds, key=lambda x: (lower_g_bound(c.n, c.r, args.s, x), -x))
    return best_colour_set_d(c, args.s, d)


def _hyper(args, log_lines: list[str]):
    what = args.what
    if what == "bound":
        b = double_count_lower_bound(args.r, args.s, args.u)
        return {"bound": _fraction_json(b), "edges_needed": ceil_fraction(b)}
    if what in ("check", "cover", "subsets"):
        H = _load(args.inp, Hypergraph)
        if what == "check":
            pair = disjoint_pair(H)
            out = {"intersecting": pair is None}
            if pair is not None:
                out["disjoint_pair"] = [H.edge_sets()[i] for i in pair]
            return out
        if what == "cover":
            return {"cover_number": cover_number(H, force=args.force)}
        t, W = min_edges_in_subsets(H, args.m, force=args.force)
        return {"m": args.m, "t": t, "subset": list(W)}
    first = None
    successes = 0
    for i in range(args.count):
        seed = args.seed + i
        if what == "sample-uniform":
            sample = uniform_intersecting_sample(args.r, args.s, seed, u=args.u, m=args.m)
            entry, H = sample.log_entry(), sample.hypergraph
            successes += sample.success
        else:
            H = exclusion_sample(args.r, args.x, seed)
            entry = {"sampler": "exclusion", "seed": seed, "r": args.r, "x": args.x,
                     "m": H.m, "intersecting": disjoint_pair(H) is None}
            successes += entry["intersecting"]
        log_lines.append(json.dumps(entry, separators=(",", ":")))
        if first is None:
            first = H
    if args.out is not None and first is not None:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dumps(first) + "\n")
    key = "successes" if what == "sample-uniform" else "intersecting"
    return {"samples": args.count, key: successes, "first_seed": args.seed}


def _parse_range(text: str) -> list[int]:
    try:
        if ":" in text:
            lo, hi = text.split(":")
            return list(range(int(lo), int(hi) + 1))
        return [int(text)]
    except ValueError:
        raise ParseError(f"expected INT or LO:HI, got {text!r}") from None


def _oracle(args):
    if args.census:
        kinds = tuple(args.kind.split(","))
        recs = census(_parse_range(args.n), _parse_range(args.r), kinds, out=args.out,
                      vertex_sym=args.vertex_sym, jobs=args.jobs)
        return {"cells": len(recs), "table": args.out}
    if args.s is None:
        raise DomainError("--s is required unless --census is given")
    rec = exact_value(int(args.n), int(args.r), args.s, args.kind,
                      vertex_sym=args.vertex_sym, jobs=args.jobs)
    return rec


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="manycolour", description=__doc__.split("\n\n")[0])
    p.add_argument("--config", help="JSON object of default flags for the subcommand")
    sub = p.add_subparsers(dest="command", required=True)

    con = sub.add_parser("construct", help="generate extremal colourings and hypergraphs")
    csub = con.add_subparsers(dest="what", required=True)
    q = csub.add_parser("cube", help="Z_2^d cube colouring blown up to n vertices")
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q = csub.add_parser("plane", help="PG(2,p) hypergraph, or its colouring with --n")
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--n", type=int)
    q = csub.add_parser("hyper", help="colouring from a hypergraph file")
    q.add_argument("--in", dest="inp", required=True)
    q.add_argument("--n", type=int, required=True)
    q = csub.add_parser("catalogue", help="named certificate hypergraph, or its colouring with --n")
    q.add_argument("--name", required=True)
    q.add_argument("--n", type=int)
    q = csub.add_parser("random-base", help="blow-up of a filtered random base colouring")
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--s", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--seed", type=int, required=True)
    q.add_argument("--max-draws", type=int, default=1000)
    for q in csub.choices.values():
        q.add_argument("--out")

    ev = sub.add_parser("eval", help="best s-colour set of a colouring")
    ev.add_argument("--colouring", required=True)
    ev.add_argument("--s", type=int, required=True)
    ev.add_argument("--k", type=int, default=1)
    ev.add_argument("--kind", choices=("f", "g"), default="f")
    ev.add_argument("--force", action="store_true", help="ignore the subset-count guard")
    ev.add_argument("--out")

    gu = sub.add_parser("guarantee", help="witnesses for the constructive lower bounds")
    gsub = gu.add_subparsers(dest="what", required=True)
    for name in ("lower-g", "augment", "contract"):
        q = gsub.add_parser(name)
        q.add_argument("--colouring", required=True)
        q.add_argument("--s", type=int, required=True)
        q.add_argument("--out")
    gsub.choices["lower-g"].add_argument("--d", type=int, help="default: d with the largest bound")
    gsub.choices["contract"].add_argument("--k", type=int, default=1)

    hy = sub.add_parser("hyper", help="hypergraph checks, samplers and bounds")
    hsub = hy.add_subparsers(dest="what", required=True)
    for name in ("check", "cover", "subsets"):
        q = hsub.add_parser(name)
        q.add_argument("--in", dest="inp", required=True)
        q.add_argument("--out")
    hsub.choices["subsets"].add_argument("--m", type=int, required=True)
    for name in ("cover", "subsets"):
        hsub.choices[name].add_argument("--force", action="store_true")
    q = hsub.add_parser("sample-uniform", help="m uniform u-sets; checks intersecting and cover > s")
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--s", type=int, required=True)
    q.add_argument("--u", type=int)
    q.add_argument("--m", type=int)
    q = hsub.add_parser("sample-exclusion", help="keep fired x-sets with no fired disjoint partner")
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--x", type=int, required=True)
    for name in ("sample-uniform", "sample-exclusion"):
        q = hsub.choices[name]
        q.add_argument("--seed", type=int, required=True, help="sample i uses seed + i")
        q.add_argument("--count", type=int, default=1)
        q.add_argument("--log", help="JSON-lines file, one entry per sample")
        q.add_argument("--out", help="hypergraph of the first sample")
    q = hsub.add_parser("bound", help="double-counting lower bound C(r,s)/C(r-u,s)")
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--s", type=int, required=True)
    q.add_argument("--u", type=int, required=True)
    q.add_argument("--out")

    orc = sub.add_parser("oracle", help="exact f or g by exhaustive search")
    orc.add_argument("--n", required=True, help="INT, or LO:HI with --census")
    orc.add_argument("--r", required=True, help="INT, or LO:HI with --census")
    orc.add_argument("--s", type=int)
    orc.add_argument("--kind", default="f", help="f or g (census: comma list)")
    orc.add_argument("--vertex-sym", action="store_true", help="also prune vertex symmetry at vertex 0")
    orc.add_argument("--census", action="store_true", help="every s <= r; writes a CSV table to --out")
    orc.add_argument("--jobs", type=int, default=1)
    orc.add_argument("--out")
    return p


def _expand_config(argv: list[str]) -> list[str]:
    """Splice flags from ``--config FILE`` in front of the command's own flags,
    so explicit flags win."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise ParseError("--config needs a file")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2:]
    with open(path, encoding="utf-8") as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(cfg, dict):
        raise ParseError(f"{path}: config must be a JSON object")
    tokens = []
    for key, value in cfg.items():
        flag = "--" + key.replace("_", "-")
        if value is True:
            tokens.append(flag)
        elif value is not False and value is not None:
            tokens += [flag, str(value)]
    j = next((k for k, tok in enumerate(rest) if tok.startswith("-")), len(rest))
    return rest[:j] + tokens + rest[j:]


def _versions() -> dict:
    return {"manycolour": __version__, "python": platform.python_version(), "numpy": np.__version__}


def _append_manifest(entry: dict) -> None:
    path = os.environ.get("RUN_LOG", "run_log.jsonl")
    try:
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, sort_keys=True, separators=(",", ":")) + "\n")
    except OSError as exc:
        print(f"warning: could not append run manifest to {path}: {exc}", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _expand_config(argv)
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    args = build_parser().parse_args(argv)
    command = args.command + (f" {args.what}" if getattr(args, "what", None) else "")
    log_lines: list[str] = []
    text = ""
    code = 0
    try:
        if args.command == "construct":
            result = _construct(args)
        elif args.command == "eval":
            result = _eval(args)
        elif args.command == "guarantee":
            result = _guarantee(args)
        elif args.command == "hyper":
            result = _hyper(args, log_lines)
        else:
            result = _oracle(args)
        if isinstance(result, dict):
            text = json.dumps(result, separators=(",", ":"))
        else:
            text = dumps(result)
        sampling = args.command == "hyper" and args.what.startswith("sample")
        if args.out is not None and not sampling and not (args.command == "oracle" and args.census):
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        if log_lines and args.log is not None:
            with open(args.log, "a", encoding="utf-8") as fh:
                fh.write("\n".join(log_lines) + "\n")
        print(text)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 2
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "what")}
    _append_manifest({
        "subcommand": command,
        "params": params,
        "seed": getattr(args, "seed", None),
        "versions": _versions(),
        "output_sha256": hashlib.sha256(text.encode()).hexdigest() if code == 0 else None,
        "exit_code": code,
    })
    return code


if __name__ == "__main__":
    sys.exit(main())
