"""Random generators shared by the test modules."""

from __future__ import annotations

import random
from pathlib import Path
from typing import List

from pontryagin.bistellar import Sphere, apply_move, enumerate_moves, tetrahedron
from pontryagin.builders import build_boundary_simplex
from pontryagin.complex import OrientedComplex, load_complex, orient
from pontryagin.cycles import close_cycle

DATA = Path(__file__).parent / "data"


def cp2_9():
    return load_complex(str(DATA / "cp2_9.txt"))


def random_2sphere(rng: random.Random, nv: int, extra_flips: int = 20, relabel: bool = True) -> Sphere:
    """Stacked sphere on nv vertices scrambled by flips and relabeled."""
    S = tetrahedron(1, 2, 3, 4)
    nxt = 5
    while S.nvertices() < nv:
        S = S.insert(rng.choice(sorted(S.tris)), nxt)
        nxt += 1
    for _ in range(extra_flips):
        edges = [e for e in S.edges() if S.can_flip(*e)]
        if not edges:
            break
        S = S.flip(*rng.choice(edges))
    if relabel:
        vs = S.vertices
        labels = rng.sample(range(1, 3 * len(vs) + 5), len(vs))
        S = S.relabel(dict(zip(vs, labels)))
    return S


def random_walk(rng: random.Random, S: Sphere, steps: int) -> List[Sphere]:
    out = [S]
    nxt = max(S.vertices) + 1
    for _ in range(steps):
        m = rng.choice(S.moves(new_vertex=nxt))
        S = S.apply(m)
        out.append(S)
        if m[0] == "ins":
            nxt += 1
    return out


def random_cycle(rng: random.Random, max_vertices: int = 9, max_steps: int = 12) -> List[Sphere]:
    S = random_2sphere(rng, rng.randint(4, max_vertices), rng.randint(0, 20))
    return close_cycle(random_walk(rng, S, rng.randint(1, max_steps)))


def random_sphere_complex(rng: random.Random, dim: int, steps: int) -> OrientedComplex:
    """Oriented combinatorial dim-sphere: random moves from the boundary of
    a simplex, never removing vertices."""
    K = orient(build_boundary_simplex(dim))
    nxt = dim + 3
    for _ in range(steps):
        moves = [m for m in enumerate_moves(K.complex) if len(m.sigma) != 1]
        m = rng.choice(moves)
        if m.tau:
            K = apply_move(K, m)
        else:
            K = apply_move(K, m, nxt)
            nxt += 1
    return K


# one (number, verdict, description) entry per acceptance criterion checked
ACCEPTANCE_RESULTS: List[tuple] = []
