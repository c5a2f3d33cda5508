"""
Command-line interface.

    pontryagin build <name>
    pontryagin check <name|file>
    pontryagin homology <name|file> [--dim k]
    pontryagin p1 <name|file> [--jobs N] [--seed S] [--dump-chains DIR] [--dump-decomposition]

Inputs are facet-list text files (one facet per line, ``#`` comments), JSON
complex documents, or built-in names.  Reports are JSON documents.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Dict, List, Optional

from . import builders
from .complex import (
    ComplexError,
    NonOrientable,
    NotPseudomanifold,
    SimplicialComplex,
    format_facets,
    load_complex,
    orient,
)
from .homology import HomologyBasis
from .pipeline import LinkFailure, dump_document, run


def load_input(source: str) -> SimplicialComplex:
    """A path to an existing file, or else a built-in name."""
    if os.path.exists(source):
        return load_complex(source)
    return builders.builtin(source)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def check_report(K: SimplicialComplex) -> Dict:
    report: Dict = {
        "vertices": len(K.vertices),
        "facets": len(K.facets),
        "dimension": K.dim,
        "f_vector": K.f_vector(),
        "euler_characteristic": K.euler_characteristic(),
    }
    closed = K.is_closed_pseudomanifold()
    report["closed_pseudomanifold"] = closed
    if closed:
        try:
            orient(K)
            report["orientable"] = True
        except NonOrientable:
            report["orientable"] = False
    else:
        report["orientable"] = None
    k = 0
    while k < len(K.vertices) and builders.verify_neighbourliness(K, k + 1):
        k += 1
    report["neighbourliness"] = k
    if len(K.vertices) == 15 and K.dim == 8:
        report["complementarity"] = builders.verify_complementarity(K)
    return report


def cmd_build(args) -> int:
    K = builders.builtin(args.name)
    text = format_facets(K)
    _emit(text, args.output)
    return 0


def cmd_check(args) -> int:
    K = load_input(args.input)
    _emit(_json(check_report(K)), args.output)
    return 0


def cmd_homology(args) -> int:
    K = load_input(args.input)
    dims = [args.dim] if args.dim is not None else list(range(K.dim + 1))
    rows = []
    for k in dims:
        if not 0 <= k <= K.dim:
            raise ComplexError(f"dimension {k} outside 0..{K.dim}")
        hb = HomologyBasis(K, k)
        rows.append({"dim": k, "betti": hb.betti, "torsion": hb.torsion})
    _emit(_json({"homology": rows}), args.output)
    return 0


def _sigma_name(s) -> str:
    return "_".join(map(str, s))


def cmd_p1(args) -> int:
    K = load_input(args.input)
    keep = bool(args.dump_chains or args.dump_decomposition)
    doc, res = run(K, jobs=args.jobs, seed=args.seed, keep=keep)
    if args.dump_chains:
        os.makedirs(args.dump_chains, exist_ok=True)
        for s, trace in res.traces.items():
            with open(os.path.join(args.dump_chains, _sigma_name(s) + ".txt"), "w") as fh:
                fh.write(trace)
    if args.dump_decomposition:
        doc["decomposition"] = [
            {"simplex": list(s), "vertex": v, "rows": rows}
            for s in sorted(res.decompositions)
            for v, rows in res.decompositions[s]
        ]
    _emit(dump_document(doc), args.output)
    return 0


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pontryagin", description=__doc__.split("\n\n")[0].strip())
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="emit the facet list of a built-in complex")
    b.add_argument("name", help="one of: " + ", ".join(builders.BUILTINS))
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("check", help="structural report")
    c.add_argument("input")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_check)

    h = sub.add_parser("homology", help="integral homology via Smith normal form")
    h.add_argument("input")
    h.add_argument("--dim", type=int)
    h.add_argument("-o", "--output")
    h.set_defaults(func=cmd_homology)

    q = sub.add_parser("p1", help="rational cycle dual to the first Pontryagin class")
    q.add_argument("input")
    q.add_argument("--jobs", type=int, default=1)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--dump-chains", metavar="DIR")
    q.add_argument("--dump-decomposition", action="store_true")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_p1)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ComplexError, builders.UnknownBuiltin, LinkFailure, NotPseudomanifold, OSError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
