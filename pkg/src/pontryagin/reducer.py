"""
Reduction of spheres by bistellar moves.

* ``reduce_3sphere`` simplifies an oriented combinatorial 3-sphere to the
  boundary of the 4-simplex by a seeded greedy search.
* ``canonical_kappa`` reduces a labeled 2-sphere to a tetrahedron boundary
  by always taking the first complexity-decreasing move in a fixed order, so
  the result depends only on the labeled input.
* ``relabel_chain`` connects two labeled tetrahedron boundaries by moves that
  never use more than five vertices.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass, field
from typing import List, Optional, Set

from .bistellar import (
    BistellarMove,
    Sphere,
    apply_move,
    enumerate_moves,
    fingerprint,
    move_between,
)
from .complex import OrientedComplex, SimplicialComplex


class ReductionStalled(RuntimeError):
    pass


# ---- chains on oriented complexes -----------------------------------------

@dataclass
class MoveChain:
    """A start complex and the moves applied to it, with every intermediate
    complex kept (``states[0]`` is the start)."""

    states: List[OrientedComplex]
    moves: List[BistellarMove] = field(default_factory=list)

    @property
    def start(self) -> OrientedComplex:
        return self.states[0]

    @property
    def end(self) -> OrientedComplex:
        return self.states[-1]

    def __len__(self) -> int:
        return len(self.moves)

    def append(self, move: BistellarMove, new_vertex: Optional[int] = None) -> None:
        nxt = apply_move(self.end, move, new_vertex)
        if not move.tau:
            move = BistellarMove(move.sigma, (new_vertex,), move.before)
        self.moves.append(move)
        self.states.append(nxt)

    def trace(self) -> str:
        return "".join(m.trace() + "\n" for m in self.moves)

    def vertices_in_moves(self) -> List[int]:
        return sorted({v for m in self.moves for v in m.sigma + m.tau})

    def validate(self) -> bool:
        cur = self.states[0]
        for m, nxt in zip(self.moves, self.states[1:]):
            tau = m.tau
            if len(m.sigma) == cur.dim + 1:  # a vertex was inserted
                cur = apply_move(cur, BistellarMove(m.sigma, ()), tau[0])
            else:
                cur = apply_move(cur, m)
            if cur != nxt:
                return False
        return True


def _smallest_unused(used: Set[int]) -> int:
    v = 1
    while v in used:
        v += 1
    return v


# ---- 3-sphere reduction ---------------------------------------------------

def _vertex_star_sizes(K: SimplicialComplex) -> List[int]:
    return sorted(len(K.star_facets((v,))) for v in K.vertices)


def energy(K: SimplicialComplex) -> tuple:
    """Ordering used by the greedy search after the vertex count: first the
    smallest vertex star (a vertex with four facets can be removed), then
    the next smallest, then the number of facets."""
    stars = _vertex_star_sizes(K)
    return (len(K.vertices), stars[0], stars[1] if len(stars) > 1 else 0, len(K.facets))


def _seed_from(K: OrientedComplex, seed: int) -> int:
    # the orientation is left out so that L and -L are reduced by the same
    # moves, which makes the local value exactly odd
    blob = f"{seed}:{fingerprint(K.complex)}".encode()
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")


def reduce_3sphere(L: OrientedComplex, seed: int = 0, budget: int = 10 ** 5,
                   stall_limit: int = 30, restarts: int = 50) -> MoveChain:
    """Reduce L to a complex with 5 vertices and 5 facets.

    Vertex removals are taken as soon as one exists.  Otherwise the move
    leading to the least ``energy`` is taken, never returning to a complex
    already visited in the current attempt; ties are broken by an RNG seeded
    from ``seed`` and the labeled input.  After ``stall_limit`` moves without
    a new best energy the attempt restarts with a fresh stream of random
    numbers.  Inserted vertices receive the least label never used in the
    chain."""
    if L.dim != 3:
        raise ValueError("reduce_3sphere needs a 3-dimensional complex")
    rng = random.Random(_seed_from(L, seed))
    spent = 0
    for _ in range(restarts):
        chain = MoveChain([L])
        seen = {frozenset(L.complex.facets)}
        best = energy(L.complex)
        since_best = 0
        while len(chain.end.complex.vertices) > 5:
            if spent >= budget:
                raise ReductionStalled(f"no reduction within {budget} moves")
            K = chain.end.complex
            moves = [m for m in enumerate_moves(K) if m.tau]
            removal = [m for m in moves if len(m.sigma) == 1]
            if removal:
                chain.append(removal[0])
            else:
                scored = []
                for m in moves:
                    nxt = apply_move(chain.end, m).complex
                    key = frozenset(nxt.facets)
                    if key in seen:
                        continue
                    scored.append((energy(nxt), rng.random(), m))
                if since_best >= stall_limit or not scored:
                    break
                scored.sort(key=lambda t: (t[0], t[1]))
                # mostly greedy, occasionally a random admissible move
                pick = scored[0] if rng.random() < 0.9 else rng.choice(scored)
                chain.append(pick[2])
            spent += 1
            seen.add(frozenset(chain.end.complex.facets))
            e = energy(chain.end.complex)
            if e < best:
                best, since_best = e, 0
            else:
                since_best += 1
        else:
            if len(chain.end.complex.facets) != 5:
                raise ReductionStalled("five vertices reached but not the boundary of a simplex")
            return chain
    raise ReductionStalled(f"no reduction after {restarts} restarts")


# ---- canonical reduction of labeled 2-spheres ------------------------------

def canonical_kappa(S: Sphere) -> List[Sphere]:
    """States from S down to a tetrahedron boundary, each step the first
    complexity-decreasing move in the order (deletions, flips; then by the
    sorted removed face)."""
    out = [S]
    while S.nvertices() > 4:
        c = S.complexity6()
        for m in S.moves():
            T = S.apply(m)
            if T.complexity6() < c:
                S = T
                break
        else:
            raise ReductionStalled("no complexity-decreasing move on a 2-sphere")
        out.append(S)
    return out


def kappa_moves(S: Sphere) -> List[tuple]:
    states = canonical_kappa(S)
    return [move_between(a, b) for a, b in zip(states, states[1:])]


# ---- relabeling tetrahedron boundaries --------------------------------------

def _swap_label(S: Sphere, old: int, new: int) -> List[Sphere]:
    """Three moves replacing label ``old`` by the unused label ``new``:
    insert ``new`` into a triangle at ``old``, flip an edge at ``old`` so that
    it drops to degree three, delete ``old``."""
    others = sorted(v for v in S.vertices if v != old)
    v1, w1, z1 = others
    A = S.insert((old, v1, w1), new)
    B = A.flip(old, v1)
    C = B.delete(old)
    return [A, B, C]


def relabel_chain(d1: Sphere, d2: Sphere) -> List[Sphere]:
    """States from d1 to d2 (both tetrahedron boundaries)."""
    if d1.nvertices() != 4 or d2.nvertices() != 4:
        raise ValueError("relabel_chain joins two tetrahedron boundaries")
    missing = sorted(set(d2.vertices) - set(d1.vertices))
    extra = sorted(set(d1.vertices) - set(d2.vertices))
    # with two or more labels to replace, some pairing also fixes the
    # orientation; try pairings in a fixed order
    for pairing in itertools.permutations(missing):
        out = [d1]
        cur = d1
        for old, new in zip(extra, pairing):
            steps = _swap_label(cur, old, new)
            out.extend(steps)
            cur = steps[-1]
        if cur == d2:
            return out
    # same labels, opposite orientation: exchange two labels through a
    # temporary one
    a, b = sorted(cur.vertices)[:2]
    t = _smallest_unused(set(d1.vertices) | set(d2.vertices))
    for old, new in ((a, t), (b, a), (t, b)):
        steps = _swap_label(cur, old, new)
        out.extend(steps)
        cur = steps[-1]
    assert cur == d2
    return out
