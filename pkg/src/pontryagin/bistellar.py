"""
Bistellar moves.

Two layers live here.  ``BistellarMove`` with ``enumerate_moves`` /
``apply_move`` works on oriented complexes of any dimension and is used for
the 3-spheres arising as links.  ``Sphere`` is a compact, hashable oriented
2-sphere (cyclically ordered triangles) used for the long move sequences on
vertex links, where speed matters.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .complex import (
    OrientedComplex,
    SimplicialComplex,
    Simplex,
    permutation_sign,
    simplex,
)


class NotApplicable(ValueError):
    pass


def fingerprint(K: SimplicialComplex | OrientedComplex) -> str:
    if isinstance(K, OrientedComplex):
        items = sorted(K.signs.items())
    else:
        items = K.sorted_facets
    return hashlib.sha1(repr(items).encode()).hexdigest()[:16]


@dataclass(frozen=True)
class BistellarMove:
    """Replace sigma * boundary(tau) by tau * boundary(sigma).

    ``tau == ()`` marks a 0-move whose new vertex is chosen when applied.
    """

    sigma: Simplex
    tau: Simplex
    before: str = ""  # fingerprint of the complex it was enumerated on

    @property
    def kind(self) -> int:
        return len(self.tau) - 1 if self.tau else 0

    def inverse(self, before: str = "") -> "BistellarMove":
        return BistellarMove(self.tau, self.sigma, before)

    def trace(self) -> str:
        return f"move {self.kind} sigma={' '.join(map(str, self.sigma))} tau={' '.join(map(str, self.tau))}"


def _link_is_boundary_of(K: SimplicialComplex, s: Simplex) -> Optional[Simplex]:
    """If link(s) is the boundary of a simplex tau not in K, return tau."""
    star = K.star_facets(s)
    ss = set(s)
    link = [tuple(v for v in f if v not in ss) for f in star]
    verts = sorted({v for t in link for v in t})
    m = len(link[0])
    if len(verts) != m + 1 or len(link) != m + 1:
        return None
    tau = tuple(verts)
    if K.has_face(tau):
        return None
    return tau


def enumerate_moves(K: SimplicialComplex) -> List[BistellarMove]:
    fp = fingerprint(K)
    out = [BistellarMove(f, (), fp) for f in K.sorted_facets]
    for d in range(K.dim - 1, -1, -1):
        for s in K.faces(d):
            tau = _link_is_boundary_of(K, s)
            if tau is not None:
                out.append(BistellarMove(s, tau, fp))
    return out


def is_applicable(K: SimplicialComplex, m: BistellarMove) -> bool:
    if not m.tau:
        return m.sigma in K.facets
    if len(m.sigma) + len(m.tau) != K.dim + 2 or not K.has_face(m.sigma):
        return False
    return _link_is_boundary_of(K, m.sigma) == m.tau


def apply_move(K: OrientedComplex, m: BistellarMove, new_vertex: Optional[int] = None) -> OrientedComplex:
    """Apply m, signing new facets so the result stays consistently oriented."""
    C = K.complex
    tau = m.tau
    if not tau:
        if new_vertex is None:
            new_vertex = max(C.vertices) + 1
        if new_vertex in C.vertices:
            raise NotApplicable(f"vertex {new_vertex} already present")
        tau = (new_vertex,)
    if not is_applicable(C, BistellarMove(m.sigma, tau if m.tau else ())):
        raise NotApplicable(m)
    whole = simplex(m.sigma + tau)
    pos = {v: i for i, v in enumerate(whole)}
    signs = dict(K.signs)
    eps = None
    for x in tau:
        f = simplex(v for v in whole if v != x)
        e = signs.pop(f) * (-1) ** pos[x]
        if eps is None:
            eps = e
        elif e != eps:
            raise NotApplicable("inconsistent orientation around the move")
    for y in m.sigma:
        f = simplex(v for v in whole if v != y)
        signs[f] = -eps * (-1) ** pos[y]
    return OrientedComplex(SimplicialComplex(signs), signs)


def induced_move(m: BistellarMove, v: int, new_vertex: Optional[int] = None) -> Optional[Tuple[Simplex, Simplex]]:
    """The move seen on link(v): (sigma', tau') or None when v is untouched.

    An empty sigma' means link(v) vanishes (v removed); an empty tau' means v
    is created with link boundary(sigma')."""
    tau = m.tau or ((new_vertex,) if new_vertex is not None else ())
    if v in m.sigma:
        return tuple(x for x in m.sigma if x != v), tau
    if v in tau:
        return m.sigma, tuple(x for x in tau if x != v)
    return None


# ---- complexity (in units of 1/6) ---------------------------------------

def complexity6_from(nverts: int, mindeg: int) -> int:
    return 6 * nverts + (0 if mindeg <= 3 else 2 if mindeg == 4 else 4)


def move_complexity6(a1: int, a2: int) -> int:
    return a1 + 1 if a1 == a2 else max(a1, a2)


def as_fraction(a6: int) -> Fraction:
    return Fraction(a6, 6)


# ---- fast oriented 2-spheres --------------------------------------------

Tri = Tuple[int, int, int]
Move = Tuple  # ('del', x) | ('flip', a, b) | ('ins', (a, b, c), x)

KIND_ORDER = {"del": 0, "flip": 1, "ins": 2}


def norm_tri(a: int, b: int, c: int) -> Tri:
    if a < b and a < c:
        return (a, b, c)
    if b < c:
        return (b, c, a)
    return (c, a, b)


class Sphere:
    """Oriented triangulated 2-sphere; triangles are stored as cyclic triples
    rotated to start at their least label."""

    __slots__ = ("tris", "_succ", "_hash", "_c6", "__weakref__")

    def __init__(self, tris: Iterable[Tri]):
        self.tris: FrozenSet[Tri] = frozenset(norm_tri(*t) for t in tris)
        self._succ = None
        self._c6 = -1
        self._hash = hash(self.tris)

    def __eq__(self, other):
        if not isinstance(other, Sphere):
            return NotImplemented
        return self is other or (self._hash == other._hash and self.tris == other.tris)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Sphere({sorted(self.tris)})"

    @classmethod
    def from_oriented(cls, K: OrientedComplex) -> "Sphere":
        tris = []
        for (a, b, c), s in K.signs.items():
            tris.append((a, b, c) if s > 0 else (a, c, b))
        return cls(tris)

    def to_oriented(self) -> OrientedComplex:
        signs = {}
        for t in self.tris:
            st = tuple(sorted(t))
            signs[st] = permutation_sign(t)
        return OrientedComplex(SimplicialComplex(signs), signs)

    def relabel(self, mapping) -> "Sphere":
        return Sphere((mapping[a], mapping[b], mapping[c]) for a, b, c in self.tris)

    def reversed(self) -> "Sphere":
        return Sphere((a, c, b) for a, b, c in self.tris)

    @property
    def succ(self) -> Dict[int, Dict[int, int]]:
        """succ[v][a] = b when (v, a, b) is a positively oriented triangle."""
        if self._succ is None:
            s: Dict[int, Dict[int, int]] = {}
            for a, b, c in self.tris:
                s.setdefault(a, {})[b] = c
                s.setdefault(b, {})[c] = a
                s.setdefault(c, {})[a] = b
            self._succ = s
        return self._succ

    @property
    def vertices(self) -> List[int]:
        return sorted(self.succ)

    def nvertices(self) -> int:
        return len(self.succ)

    def degree(self, v: int) -> int:
        return len(self.succ[v])

    def has_vertex(self, v: int) -> bool:
        return v in self.succ

    def has_edge(self, a: int, b: int) -> bool:
        sa = self.succ.get(a)
        return sa is not None and b in sa

    def circle(self, v: int, start: Optional[int] = None) -> List[int]:
        """Neighbours of v in positive cyclic order, starting at ``start``
        (default: least neighbour)."""
        nx = self.succ[v]
        x0 = min(nx) if start is None else start
        out = [x0]
        x = nx[x0]
        while x != x0:
            out.append(x)
            x = nx[x]
        return out

    def edges(self) -> List[Tuple[int, int]]:
        return sorted((a, b) for a, nx in self.succ.items() for b in nx if a < b)

    def mindeg(self) -> int:
        return min(len(nx) for nx in self.succ.values())

    def complexity6(self) -> int:
        """Complexity in units of 1/6."""
        if self._c6 < 0:
            self._c6 = complexity6_from(len(self.succ), self.mindeg())
        return self._c6

    def complexity(self) -> Fraction:
        return Fraction(self.complexity6(), 6)

    # -- moves ------------------------------------------------------------

    def opposite(self, a: int, b: int) -> Tuple[int, int]:
        """Vertices c, d with (a, b, c) and (b, a, d) positive triangles."""
        return self.succ[a][b], self.succ[b][a]

    def can_flip(self, a: int, b: int) -> bool:
        if not self.has_edge(a, b):
            return False
        c, d = self.opposite(a, b)
        return c != d and not self.has_edge(c, d)

    def flip(self, a: int, b: int) -> "Sphere":
        if not self.has_edge(a, b):
            raise NotApplicable(("flip", a, b))
        c, d = self.opposite(a, b)
        if c == d or self.has_edge(c, d):
            raise NotApplicable(("flip", a, b))
        T = set(self.tris)
        T.discard(norm_tri(a, b, c))
        T.discard(norm_tri(b, a, d))
        T.add(norm_tri(c, d, b))
        T.add(norm_tri(d, c, a))
        return Sphere(T)

    def can_delete(self, x: int) -> bool:
        nx = self.succ.get(x)
        if nx is None or len(nx) != 3 or self.nvertices() <= 4:
            return False
        a, b, c = self.circle(x)
        return norm_tri(a, b, c) not in self.tris and norm_tri(a, c, b) not in self.tris

    def delete(self, x: int) -> "Sphere":
        if not self.can_delete(x):
            raise NotApplicable(("del", x))
        a, b, c = self.circle(x)
        T = {t for t in self.tris if x not in t}
        T.add(norm_tri(a, b, c))
        return Sphere(T)

    def insert(self, tri: Sequence[int], x: int) -> "Sphere":
        a, b, c = tri
        t = norm_tri(a, b, c)
        if t not in self.tris:
            t = norm_tri(a, c, b)
            if t not in self.tris:
                raise NotApplicable(("ins", tri, x))
        if x in self.succ:
            raise NotApplicable(("ins", tri, x))
        a, b, c = t
        T = set(self.tris)
        T.remove(t)
        T.update((norm_tri(a, b, x), norm_tri(b, c, x), norm_tri(c, a, x)))
        return Sphere(T)

    def apply(self, move: Move) -> "Sphere":
        k = move[0]
        if k == "flip":
            return self.flip(move[1], move[2])
        if k == "del":
            return self.delete(move[1])
        if k == "ins":
            return self.insert(move[1], move[2])
        raise NotApplicable(move)

    def moves(self, new_vertex: Optional[int] = None) -> List[Move]:
        """All applicable moves in canonical order (deletions, flips, insertions)."""
        out: List[Move] = [("del", x) for x in self.vertices if self.can_delete(x)]
        out += [("flip", a, b) for a, b in self.edges() if self.can_flip(a, b)]
        if new_vertex is not None:
            out += [("ins", tuple(sorted(t)), new_vertex) for t in sorted(self.tris, key=sorted)]
        return out


def move_between(S: Sphere, T: Sphere) -> Move:
    """Identify the single bistellar move taking S to T."""
    gone = S.tris - T.tris
    new = T.tris - S.tris
    if len(gone) == 1 and len(new) == 3:
        (t,) = gone
        (x,) = set(T.succ) - set(S.succ)
        return ("ins", tuple(sorted(t)), x)
    if len(gone) == 3 and len(new) == 1:
        (x,) = set(S.succ) - set(T.succ)
        return ("del", x)
    if len(gone) == 2 and len(new) == 2:
        vs = set(itertools.chain(*gone))
        ws = set(itertools.chain(*new))
        common = vs & ws
        if len(common) == 4:
            e_old = [v for v in vs if all(v in t for t in gone)]
            if len(e_old) == 2:
                a, b = sorted(e_old)
                if S.can_flip(a, b) and S.flip(a, b) == T:
                    return ("flip", a, b)
    raise NotApplicable("states are not one bistellar move apart")


def move_sigma(move: Move) -> Tuple[int, ...]:
    """The face removed by the move (as a sorted tuple)."""
    if move[0] == "del":
        return (move[1],)
    if move[0] == "flip":
        return (move[1], move[2])
    return tuple(sorted(move[1]))


def move_key(move: Move) -> Tuple:
    return (KIND_ORDER[move[0]], move_sigma(move))


def participants(S: Sphere, move: Move) -> Tuple[int, ...]:
    """Vertices whose link is changed by the move applied at S."""
    if move[0] == "del":
        return (move[1],) + tuple(S.circle(move[1]))
    if move[0] == "flip":
        c, d = S.opposite(move[1], move[2])
        return (move[1], move[2], c, d)
    return tuple(move[1]) + (move[2],)


def tetrahedron(a: int, b: int, c: int, d: int) -> Sphere:
    """Oriented boundary of the simplex abcd."""
    return Sphere([(a, b, c), (a, c, d), (a, d, b), (b, d, c)])


def sphere_complexity(S: Sphere) -> Fraction:
    """k, k + 1/3 or k + 2/3 for k vertices and minimal degree 3, 4, >= 5."""
    return S.complexity()


def move_complexity(S: Sphere, T: Sphere) -> Fraction:
    """The larger sphere complexity, or the common one plus 1/6."""
    return as_fraction(move_complexity6(S.complexity6(), T.complexity6()))


# ---- isomorphisms and essential moves --------------------------------------

def _extend_isomorphism(S: Sphere, T: Sphere, a: int, b: int, x: int, y: int) -> Optional[Dict[int, int]]:
    """The orientation-preserving isomorphism S -> T sending the directed
    edge (a, b) to (x, y), if one exists."""
    phi = {a: x, b: y}
    stack = [(a, b)]
    while stack:
        u, w = stack.pop()
        # walk around u in S and around phi[u] in T simultaneously
        su, tu = S.succ[u], T.succ[phi[u]]
        if len(su) != len(tu):
            return None
        cur, img = w, phi[w]
        for _ in range(len(su)):
            nxt, nimg = su[cur], tu.get(img)
            if nimg is None:
                return None
            if nxt in phi:
                if phi[nxt] != nimg:
                    return None
            else:
                phi[nxt] = nimg
                stack.append((nxt, u))
            cur, img = nxt, nimg
    if len(set(phi.values())) != len(phi) or len(phi) != S.nvertices():
        return None
    return phi


def isomorphisms(S: Sphere, T: Sphere):
    """All orientation-preserving isomorphisms S -> T."""
    if S.nvertices() != T.nvertices() or sorted(map(S.degree, S.vertices)) != sorted(map(T.degree, T.vertices)):
        return
    a = min(S.vertices, key=lambda v: (S.degree(v), v))
    b = min(S.succ[a])
    for x in T.vertices:
        if T.degree(x) != S.degree(a):
            continue
        for y in T.succ[x]:
            phi = _extend_isomorphism(S, T, a, b, x, y)
            if phi is not None:
                yield phi


def is_essential(S: Sphere, move: Move) -> bool:
    """False when some relabeling carries the move to its own inverse: it maps
    the sphere before the move onto the sphere after it, the removed face onto
    the created face, and back."""
    T = S.apply(move)
    if S.nvertices() != T.nvertices():
        return True
    back = move_between(T, S)
    removed, created = set(move_sigma(move)), set(move_sigma(back))
    for phi in isomorphisms(S, T):
        if {phi[v] for v in removed} != created:
            continue
        if T.relabel(phi) == S:
            return False
    return True
