"""
The rational chain dual to the first Pontryagin class.

For every simplex of codimension four its link (an oriented 3-sphere) is
reduced to the boundary of the 4-simplex.  The reduction induces a path of
labeled 2-spheres on the link of each vertex that moves; each path is closed
into a cycle and the cocycle is evaluated on it.  The sum over vertices is
the coefficient of the simplex.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .bistellar import Sphere
from .complex import OrientedComplex, SimplicialComplex, Simplex, induced_link_orientation, orient
from .cycles import Decomposer, close_cycle
from .homology import HomologyBasis, RankMismatch
from .reducer import MoveChain, reduce_3sphere

RationalChain = Dict[Simplex, Fraction]


class VertexNeverPresent(ValueError):
    pass


class LinkFailure(RuntimeError):
    """Raised when some links could not be processed; ``failures`` maps each
    offending simplex to its error message."""

    def __init__(self, failures: Mapping[Simplex, str]):
        super().__init__(f"{len(failures)} link(s) failed, first: "
                         f"{min(failures)}: {failures[min(failures)]}")
        self.failures = dict(failures)


def induce_chain(chain: MoveChain, v: int) -> List[Sphere]:
    """The path of oriented vertex links of v along the chain, from v's
    first appearance to its last, without repeated consecutive spheres."""
    out: List[Sphere] = []
    for K in chain.states:
        if not K.complex.has_face((v,)):
            continue
        S = Sphere.from_oriented(induced_link_orientation(K, (v,)))
        if not out or out[-1] != S:
            out.append(S)
    if not out:
        raise VertexNeverPresent(v)
    return out


@dataclass
class LinkResult:
    value: Fraction
    chain: MoveChain
    decompositions: List[Tuple[int, list]]


def local_formula_value(L: OrientedComplex, seed: int = 0, keep: bool = False) -> LinkResult:
    """Sum over the vertices moved by the reduction of L of the cocycle on
    the closed vertex-link cycles."""
    chain = reduce_3sphere(L, seed=seed)
    total = Fraction(0)
    decs = []
    for v in chain.vertices_in_moves():
        loop = close_cycle(induce_chain(chain, v))
        dec = Decomposer().decompose(loop)
        total += dec.value
        if keep:
            decs.append((v, [e.row() for e in dec.elementary]))
    return LinkResult(total, chain, decs)


# ---- the whole complex --------------------------------------------------------

_WORKER_K: Optional[OrientedComplex] = None


def _init_worker(K: OrientedComplex) -> None:
    global _WORKER_K
    _WORKER_K = K


def _job(args) -> Tuple[Simplex, Optional[Fraction], Optional[str], str, list]:
    sigma, seed, keep = args
    K = _WORKER_K
    try:
        res = local_formula_value(induced_link_orientation(K, sigma), seed=seed, keep=keep)
    except Exception as exc:  # isolated per link, reported by the caller
        return sigma, None, f"{type(exc).__name__}: {exc}", "", []
    return sigma, res.value, None, res.chain.trace() if keep else "", res.decompositions


@dataclass
class PipelineResult:
    chain: RationalChain
    traces: Dict[Simplex, str]
    decompositions: Dict[Simplex, list]


def pontryagin_cycle(K: OrientedComplex, jobs: int = 1, seed: int = 0,
                     keep: bool = False, simplices: Optional[Sequence[Simplex]] = None) -> PipelineResult:
    """Coefficient of every codimension-4 simplex (zeros omitted)."""
    if K.dim < 4:
        raise ValueError("the complex must have dimension at least 4")
    todo = list(simplices) if simplices is not None else K.complex.faces(K.dim - 4)
    args = [(s, seed, keep) for s in todo]
    if jobs > 1:
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(K,)) as ex:
            results = list(ex.map(_job, args, chunksize=max(1, len(args) // (8 * jobs))))
    else:
        _init_worker(K)
        results = [_job(a) for a in args]
    failures = {s: err for s, _, err, _, _ in results if err is not None}
    if failures:
        raise LinkFailure(failures)
    results.sort(key=lambda r: r[0])
    chain = {s: v for s, v, _, _, _ in results if v}
    traces = {s: t for s, _, _, t, _ in results} if keep else {}
    decs = {s: d for s, _, _, _, d in results} if keep else {}
    return PipelineResult(chain, traces, decs)


def verify_is_cycle(ch: Mapping[Simplex, Fraction], K: SimplicialComplex | None = None) -> bool:
    acc: Dict[Simplex, Fraction] = {}
    for s, c in ch.items():
        # every 0-chain is a cycle
        for i in range(len(s) if len(s) > 1 else 0):
            f = s[:i] + s[i + 1:]
            acc[f] = acc.get(f, 0) + (-c if i % 2 else c)
    return all(v == 0 for v in acc.values())


def class_coefficient(ch: Mapping[Simplex, Fraction], K: SimplicialComplex, k: Optional[int] = None,
                      basis: Optional[HomologyBasis] = None) -> Fraction:
    """The multiple of an integral generator of H_k modulo torsion that the
    cycle represents (the group must have rank one)."""
    if k is None:
        k = K.dim - 4
    hb = basis or HomologyBasis(K, k)
    if hb.betti != 1:
        raise RankMismatch(f"H_{k} has rank {hb.betti}")
    if not ch:
        return Fraction(0)
    return hb.coordinates(ch)[0]


def total_weight(ch: Mapping[Simplex, Fraction]) -> Fraction:
    return sum(ch.values(), Fraction(0))


# ---- output document ----------------------------------------------------------

def input_hash(K: SimplicialComplex) -> str:
    blob = "\n".join(" ".join(map(str, f)) for f in K.sorted_facets).encode()
    return hashlib.sha256(blob).hexdigest()


def run(K: SimplicialComplex, jobs: int = 1, seed: int = 0, keep: bool = False,
        clock=time.perf_counter) -> Tuple[Dict, PipelineResult]:
    t0 = clock()
    OK = orient(K)
    res = pontryagin_cycle(OK, jobs=jobs, seed=seed, keep=keep)
    is_cycle = verify_is_cycle(res.chain, K)
    coef: Optional[Fraction] = None
    if not res.chain:
        coef = Fraction(0)
    elif K.dim == 4:
        coef = total_weight(res.chain)
    elif is_cycle:
        try:
            coef = class_coefficient(res.chain, K)
        except RankMismatch:
            coef = None
    doc = {
        "input_hash": input_hash(K),
        "dimension": K.dim,
        "chain": [[list(s), c.numerator, c.denominator] for s, c in sorted(res.chain.items())],
        "is_cycle": is_cycle,
        "class_coefficient": None if coef is None else [coef.numerator, coef.denominator],
        "elapsed": round(clock() - t0, 3),
    }
    return doc, res


def dump_document(doc: Dict) -> str:
    return json.dumps(doc, sort_keys=False) + "\n"


def default_jobs() -> int:
    return max(1, os.cpu_count() or 1)
