"""
Built-in complexes: the 15-vertex 8-manifolds generated from permutation
data, boundaries of simplices, and a few small reference surfaces.
"""

from __future__ import annotations

import hashlib
import itertools
import re
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from .complex import SimplicialComplex, Simplex, build_complex, simplex

GROUND = tuple(range(1, 16))

Perm = Tuple[int, ...]  # image tuple indexed by point - 1


def parse_cycles(text: str, n: int = 15) -> Perm:
    """Read cycle notation such as ``(1 2 3)(4 5)`` into an image tuple."""
    img = list(range(1, n + 1))
    seen = set()
    for cyc in re.findall(r"\(([^)]*)\)", text):
        pts = [int(x) for x in cyc.split()]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            if a in seen:
                raise ValueError(f"point {a} repeated in {text!r}")
            seen.add(a)
            img[a - 1] = b
    return tuple(img)


def compose(*perms: Perm) -> Perm:
    """Product acting right-to-left: ``compose(f, g)(x) = f(g(x))``."""
    n = len(perms[0])
    out = tuple(range(1, n + 1))
    for p in reversed(perms):
        out = tuple(p[x - 1] for x in out)
    return out


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x - 1] = i + 1
    return tuple(inv)


def power(p: Perm, k: int) -> Perm:
    if k < 0:
        p, k = inverse(p), -k
    out = tuple(range(1, len(p) + 1))
    for _ in range(k):
        out = compose(p, out)
    return out


def act(p: Perm, s: Iterable[int]) -> Simplex:
    return simplex(p[v - 1] for v in s)


def group_closure(generators: Sequence[Perm], n: int = 15) -> List[Perm]:
    """All elements of the generated group, found breadth first."""
    ident = tuple(range(1, n + 1))
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for h in generators:
                gh = compose(h, g)
                if gh not in elems:
                    elems.add(gh)
                    nxt.append(gh)
        frontier = nxt
    return sorted(elems)


def orbit(group: Iterable[Perm], s: Iterable[int]) -> FrozenSet[Simplex]:
    s = tuple(s)
    return frozenset(act(g, s) for g in group)


# ---- permutation data, entered in cycle notation --------------------------

P = parse_cycles("(1 2 3 4 5)(6 7 8 9 10)(11 12 13 14 15)")
T = parse_cycles("(3 10)(4 14)(5 8)(6 11)(7 12)(13 15)")
U = parse_cycles("(1 6 11)(2 7 12)(3 8 13)(4 9 14)(5 10 15)")
S = parse_cycles("(1 6 11)(2 15 14)(3 13 8)(4 7 5)(9 12 10)")
R = parse_cycles("(2 5)(3 4)(7 10)(8 9)(12 15)(13 14)")

SEEDS: Dict[str, Simplex] = {
    "A": (1, 2, 3, 6, 8, 11, 13, 14, 15),
    "B": (1, 3, 6, 8, 9, 10, 11, 12, 13),
    "C": (1, 2, 6, 9, 10, 11, 12, 14, 15),
    "D": (1, 2, 3, 4, 7, 9, 12, 14, 15),
    "E": (1, 2, 4, 7, 9, 10, 12, 13, 14),
    "F": (1, 2, 6, 8, 9, 10, 11, 14, 15),
    "G": (1, 2, 3, 4, 5, 6, 9, 11, 13),
    "H": (1, 3, 5, 6, 8, 9, 10, 11, 12),
    "I": (1, 3, 5, 6, 7, 8, 9, 10, 11),
    "J": (1, 2, 3, 4, 5, 7, 10, 12, 15),
    "K": (1, 2, 3, 7, 8, 10, 12, 13, 14),
    "M": (2, 5, 6, 7, 8, 9, 10, 13, 14),
}
L1 = (3, 4, 6, 7, 11, 12, 13, 14, 15)
N1 = (3, 4, 6, 7, 10, 12, 13, 14, 15)


def seed_checksum() -> str:
    rows = [SEEDS[k] for k in sorted(SEEDS)] + [L1, N1]
    blob = "\n".join(" ".join(map(str, r)) for r in rows).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def g1_group() -> List[Perm]:
    return group_closure([P, S])


def g0_group() -> List[Perm]:
    return group_closure([R, S])


def common_part() -> FrozenSet[Simplex]:
    """Union of the orbits of the twelve seed facets under <P, S>."""
    G = g1_group()
    out: set = set()
    for s in SEEDS.values():
        out |= orbit(G, s)
    return frozenset(out)


def extra_block(n: int, twisted: bool = False) -> FrozenSet[Simplex]:
    """The n-th 15-facet block: P^(n-1) applied to the <R, S>-orbit of the
    pair (L1, N1), or of its T-image when ``twisted``."""
    base = [act(T, L1), act(T, N1)] if twisted else [L1, N1]
    G = g0_group()
    Pn = power(P, n - 1)
    out: set = set()
    for b in base:
        out |= {act(Pn, x) for x in orbit(G, b)}
    return frozenset(out)


VARIANTS = {"plain": (), "tilde": (1,), "double_tilde": (1, 3)}


def build_M8_15(variant: str = "plain") -> SimplicialComplex:
    twisted = VARIANTS[variant]
    facets = set(common_part())
    for n in range(1, 6):
        facets |= extra_block(n, n in twisted)
    if len(facets) != 490:
        raise RuntimeError(f"built {len(facets)} facets, expected 490")
    return SimplicialComplex(facets)


def build_boundary_simplex(n: int, vertices: Sequence[int] | None = None) -> SimplicialComplex:
    """Boundary of the (n+1)-simplex: all (n+1)-subsets of n+2 vertices."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    vs = tuple(vertices) if vertices is not None else tuple(range(1, n + 3))
    return build_complex(itertools.combinations(vs, n + 1))


def verify_neighbourliness(K: SimplicialComplex, k: int) -> bool:
    return all(K.has_face(c) for c in itertools.combinations(K.vertices, k))


def verify_complementarity(K: SimplicialComplex) -> bool:
    """For 15-vertex 8-complexes: a 9-set is a facet iff its 6-element
    complement is not a face."""
    vs = K.vertices
    for c in itertools.combinations(vs, 9):
        comp = tuple(v for v in vs if v not in c)
        if (c in K.facets) == K.has_face(comp):
            return False
    return True


def is_automorphism(K: SimplicialComplex, g: Perm) -> bool:
    return {act(g, f) for f in K.facets} == K.facets


# ---- small reference complexes --------------------------------------------

def octahedron() -> SimplicialComplex:
    ring = [1, 2, 3, 4]
    return build_complex([a, b, apex] for apex in (5, 6) for a, b in zip(ring, ring[1:] + ring[:1]))


def icosahedron() -> SimplicialComplex:
    top, bot = 1, 12
    up = [2, 3, 4, 5, 6]
    lo = [7, 8, 9, 10, 11]
    tris = []
    for i in range(5):
        j = (i + 1) % 5
        tris.append((top, up[i], up[j]))
        tris.append((bot, lo[i], lo[j]))
        tris.append((up[i], up[j], lo[i]))
        tris.append((up[j], lo[i], lo[j]))
    return build_complex(tris)


def rp2_six() -> SimplicialComplex:
    """The 6-vertex real projective plane."""
    return build_complex([
        (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
        (2, 3, 5), (3, 4, 6), (2, 4, 5), (3, 5, 6), (2, 4, 6),
    ])


BUILTINS = ("M8_15", "M8_15_tilde", "M8_15_double_tilde", "boundary_simplex:<n>",
            "octahedron", "icosahedron", "rp2")


class UnknownBuiltin(ValueError):
    pass


def builtin(name: str) -> SimplicialComplex:
    if name == "M8_15":
        return build_M8_15("plain")
    if name == "M8_15_tilde":
        return build_M8_15("tilde")
    if name == "M8_15_double_tilde":
        return build_M8_15("double_tilde")
    if name.startswith("boundary_simplex:"):
        # boundary of the n-simplex, a sphere of dimension n - 1
        try:
            n = int(name.split(":", 1)[1])
        except ValueError:
            raise UnknownBuiltin(name) from None
        if n < 1:
            raise UnknownBuiltin(name)
        return build_boundary_simplex(n - 1)
    table = {"octahedron": octahedron, "icosahedron": icosahedron, "rp2": rp2_six}
    if name in table:
        return table[name]()
    raise UnknownBuiltin(name)
