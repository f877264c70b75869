"""Command line entry point: ``flipcount count | zeta | export``.

Exit codes: 2 for unreadable or malformed input (including empty shifts),
3 when the map is not a flip, 4 when ``--verify`` finds a mismatch, 5 when
an irreducible component is requested for a reducible presentation,
and 1 when the presentation is too large for the configured semigroup cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from .counting import FlipIncompatible
from .krieger import MonoidBlowup, NotIrreducible, StarMismatch, to_dot
from .pipeline import (
    CHAINS,
    chain_for,
    closed_forms,
    counts,
    direct_counts,
    oracle_counts,
)
from .presentations import BadSymbol, EmptyShift, FlipError, FlipSpec, FlipSystem, LabeledGraph, SftMatrix
from .series import flip_zeta_series
from .signed_subsets import build_all_levels, dump_levels

EXIT_SCHEMA = 2
EXIT_FLIP = 3
EXIT_MISMATCH = 4
EXIT_REDUCIBLE = 5


class SchemaError(ValueError):
    pass


def _require(doc, key, kind):
    if key not in doc:
        raise SchemaError(f"missing key {key!r}")
    if not isinstance(doc[key], kind):
        raise SchemaError(f"key {key!r} has the wrong type")
    return doc[key]


def _split_block(key: str, alphabet) -> tuple:
    if any(c.isspace() for c in key):
        return tuple(key.split())
    if all(len(a) == 1 for a in alphabet):
        return tuple(key)
    raise SchemaError(f"block {key!r} must separate multi-character symbols by spaces")


def _parse_flip(doc, alphabet) -> FlipSpec:
    flip = _require(doc, "flip", dict)
    if "tau" in flip:
        tau = flip["tau"]
        if not isinstance(tau, dict):
            raise SchemaError("flip.tau must be an object")
        return FlipSpec.one_block(tau)
    if "window" in flip:
        window = flip["window"]
        if not isinstance(window, dict):
            raise SchemaError("flip.window must be an object")
        radius = _require(window, "radius", int)
        table = _require(window, "table", dict)
        if radius < 0:
            raise SchemaError("flip.window.radius must be non-negative")
        parsed = {}
        for key, value in table.items():
            block = _split_block(key, alphabet)
            if len(block) != 2 * radius + 1:
                raise SchemaError(f"block {key!r} does not have length {2 * radius + 1}")
            parsed[block] = value
        return FlipSpec.sliding(radius, parsed)
    raise SchemaError("flip needs either 'tau' or 'window'")


def parse_system(doc) -> FlipSystem:
    """Build a flip system from a decoded JSON document."""
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    name = _require(doc, "name", str)
    kind = _require(doc, "kind", str)
    try:
        if kind == "sofic":
            alphabet = _require(doc, "alphabet", list)
            graph = _require(doc, "graph", dict)
            vertices = _require(graph, "vertices", list)
            edges = _require(graph, "edges", list)
            if any(not isinstance(e, list) or len(e) != 3 for e in edges):
                raise SchemaError("edges must be [from, label, to] triples")
            g = LabeledGraph(vertices, [tuple(e) for e in edges], alphabet)
            return FlipSystem(name, g, _parse_flip(doc, alphabet))
        if kind == "sft":
            states = _require(doc, "states", list)
            matrix = _require(doc, "matrix", list)
            alphabet = doc.get("alphabet", states)
            if sorted(map(str, alphabet)) != sorted(map(str, states)):
                raise SchemaError("for kind 'sft' the alphabet is the list of states")
            sft = SftMatrix(states, matrix)
            return FlipSystem(name, sft.to_graph(), _parse_flip(doc, states), sft)
    except SchemaError:
        raise
    except (TypeError, ValueError) as exc:
        if isinstance(exc, EmptyShift):
            raise
        raise SchemaError(str(exc)) from exc
    raise SchemaError(f"unknown kind {kind!r}")


def load_system(path: str) -> FlipSystem:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    return parse_system(doc)


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".flipcount-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_count(args, out) -> int:
    system = load_system(args.system)
    if args.max_m < 1:
        raise SchemaError("--max-m must be at least 1")
    if args.direct:
        if system.sft is None or system.flip.kind != "one-block":
            raise SchemaError("--direct needs kind 'sft' with a 'tau' flip")
        table = direct_counts(system, args.max_m)
    else:
        table = counts(system, args.max_m, args.chain)
    if not args.verify:
        out.write(table.as_tsv())
        return 0
    truth = oracle_counts(system, args.max_m)
    lines = ["m\tp_m\tp_{m,0}\tp_{m,1}\toracle_p_m\toracle_p_{m,0}\toracle_p_{m,1}\tok"]
    ok = True
    for row, ref in zip(table.rows, truth.rows):
        same = row == ref
        ok &= same
        cells = [*row, *ref[1:]]
        lines.append("\t".join("-" if c is None else str(c) for c in cells) + ("\tyes" if same else "\tNO"))
    out.write("\n".join(lines) + "\n")
    return 0 if ok else EXIT_MISMATCH


def cmd_zeta(args, out) -> int:
    system = load_system(args.system)
    if args.order < 0:
        raise SchemaError("--order must be non-negative")
    zeta, G = closed_forms(system)
    if args.closed_form:
        out.write(f"zeta_T(t) = {zeta}\n")
        out.write(f"G(t) = {G}\n")
    out.write(flip_zeta_series(zeta, G, args.order).as_lines())
    return 0


def cmd_export(args, out) -> int:
    system = load_system(args.system)
    if args.what == "matrices":
        chain = chain_for(system, "joint")
        text = dump_levels(build_all_levels(chain), chain)
    else:
        chain = chain_for(system, args.what)
        text = to_dot(chain, f"{system.name}-{args.what}")
    write_atomic(args.out, text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flipcount", description="Count flip-fixed periodic points of sofic shifts."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    count = sub.add_parser("count", help="table of p_m, p_{m,0}, p_{m,1}")
    count.add_argument("--system", required=True)
    count.add_argument("--max-m", type=int, required=True)
    count.add_argument("--chain", choices=CHAINS, default="joint")
    count.add_argument("--verify", action="store_true", help="compare with brute-force enumeration")
    count.add_argument("--direct", action="store_true", help="use the vertex-shift matrices of an sft file")
    count.set_defaults(run=cmd_count)

    zeta = sub.add_parser("zeta", help="coefficients of the flip zeta function")
    zeta.add_argument("--system", required=True)
    zeta.add_argument("--order", type=int, required=True)
    zeta.add_argument("--closed-form", action="store_true", help="also print zeta_T and G")
    zeta.set_defaults(run=cmd_zeta)

    export = sub.add_parser("export", help="write a chain as DOT or the level matrices as text")
    export.add_argument("--system", required=True)
    export.add_argument("--what", choices=(*CHAINS, "matrices"), required=True)
    export.add_argument("--out", required=True)
    export.set_defaults(run=cmd_export)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args, sys.stdout)
    except (SchemaError, EmptyShift, BadSymbol) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (FlipError, FlipIncompatible, StarMismatch) as exc:
        print(f"not a flip: {exc}", file=sys.stderr)
        return EXIT_FLIP
    except NotIrreducible as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REDUCIBLE
    except MonoidBlowup as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
