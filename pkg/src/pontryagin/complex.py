"""
Finite pure simplicial complexes over integer vertex labels.

A complex stores only its facets, each a strictly increasing tuple of labels.
Faces, links and boundary matrices are derived on demand and cached on the
(immutable) instance.
"""

from __future__ import annotations

import itertools
import json
from collections import defaultdict
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

Simplex = Tuple[int, ...]


class ComplexError(ValueError):
    pass


class EmptyInput(ComplexError):
    pass


class MixedDimension(ComplexError):
    pass


class NotAFace(ComplexError):
    pass


class UnknownVertex(ComplexError):
    pass


class NotPseudomanifold(ComplexError):
    pass


class NonOrientable(ComplexError):
    pass


class DimensionOutOfRange(ComplexError):
    pass


def simplex(vertices: Iterable[int]) -> Simplex:
    """Canonical sorted form; rejects repeated vertices."""
    s = tuple(sorted(vertices))
    if len(set(s)) != len(s):
        raise ComplexError(f"repeated vertex in {s}")
    return s


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq`` (entries distinct)."""
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class SimplicialComplex:
    __slots__ = ("facets", "dim", "__dict__")

    def __init__(self, facets: Iterable[Simplex]):
        fs = frozenset(facets)
        if not fs:
            raise EmptyInput("complex needs at least one facet")
        dims = {len(f) for f in fs}
        if len(dims) != 1:
            raise MixedDimension(f"facet sizes {sorted(dims)}")
        self.facets: frozenset = fs
        self.dim: int = dims.pop() - 1

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and self.facets == other.facets

    def __hash__(self):
        return hash(self.facets)

    def __repr__(self):
        return f"SimplicialComplex(dim={self.dim}, vertices={len(self.vertices)}, facets={len(self.facets)})"

    @cached_property
    def sorted_facets(self) -> List[Simplex]:
        return sorted(self.facets)

    @cached_property
    def vertices(self) -> List[int]:
        return sorted({v for f in self.facets for v in f})

    @cached_property
    def _faces(self) -> Dict[int, List[Simplex]]:
        out: Dict[int, set] = defaultdict(set)
        for f in self.facets:
            for k in range(1, len(f) + 1):
                out[k - 1].update(itertools.combinations(f, k))
        return {d: sorted(s) for d, s in out.items()}

    def faces(self, k: int) -> List[Simplex]:
        """All k-dimensional faces in canonical sorted order."""
        return self._faces.get(k, [])

    @cached_property
    def _face_sets(self) -> Dict[int, frozenset]:
        return {d: frozenset(s) for d, s in self._faces.items()}

    def has_face(self, s: Sequence[int]) -> bool:
        s = tuple(sorted(s))
        if not s:
            return True
        return s in self._face_sets.get(len(s) - 1, ())

    @cached_property
    def _star_index(self) -> Dict[int, List[Simplex]]:
        idx: Dict[int, List[Simplex]] = defaultdict(list)
        for f in self.facets:
            for v in f:
                idx[v].append(f)
        return idx

    def star_facets(self, s: Sequence[int]) -> List[Simplex]:
        """Facets containing ``s``."""
        s = tuple(s)
        if not s:
            return list(self.facets)
        cand = self._star_index.get(s[0], [])
        ss = set(s)
        return [f for f in cand if ss.issubset(f)]

    def link(self, s: Sequence[int]) -> "SimplicialComplex":
        s = simplex(s)
        star = self.star_facets(s)
        if not star:
            raise NotAFace(f"{s} is not a face")
        ss = set(s)
        return SimplicialComplex(tuple(v for v in f if v not in ss) for f in star)

    def vertex_degree(self, v: int) -> int:
        if v not in self._star_index:
            raise UnknownVertex(v)
        nbrs = {u for f in self._star_index[v] for u in f}
        return len(nbrs) - 1

    def ridge_counts(self) -> Dict[Simplex, int]:
        cnt: Dict[Simplex, int] = defaultdict(int)
        for f in self.facets:
            for i in range(len(f)):
                cnt[f[:i] + f[i + 1:]] += 1
        return cnt

    def is_closed_pseudomanifold(self) -> bool:
        return all(c == 2 for c in self.ridge_counts().values())

    def f_vector(self) -> List[int]:
        return [len(self.faces(k)) for k in range(self.dim + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector()))

    def boundary_matrix(self, k: int) -> "SparseMatrix":
        """Matrix of the boundary map from k-faces to (k-1)-faces."""
        if not 1 <= k <= self.dim:
            raise DimensionOutOfRange(k)
        rows = self.faces(k - 1)
        cols = self.faces(k)
        ridx = {r: i for i, r in enumerate(rows)}
        entries: List[Dict[int, int]] = []
        for c in cols:
            col = {}
            for i in range(len(c)):
                col[ridx[c[:i] + c[i + 1:]]] = -1 if i % 2 else 1
            entries.append(col)
        return SparseMatrix(len(rows), len(cols), entries)

    def relabel(self, mapping: Mapping[int, int]) -> "SimplicialComplex":
        return SimplicialComplex(simplex(mapping[v] for v in f) for f in self.facets)


class SparseMatrix:
    """Column-sparse integer matrix: ``cols[j]`` maps row index to value."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols: List[Dict[int, int]]):
        self.nrows = nrows
        self.ncols = ncols
        self.cols = cols

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> "SparseMatrix":
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        cols = [{i: int(rows[i][j]) for i in range(nr) if rows[i][j]} for j in range(nc)]
        return cls(nr, nc, cols)

    def to_dense(self) -> List[List[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                out[i][j] = v
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        assert self.ncols == other.nrows
        cols = []
        for col in other.cols:
            acc: Dict[int, int] = defaultdict(int)
            for k, b in col.items():
                for i, a in self.cols[k].items():
                    acc[i] += a * b
            cols.append({i: v for i, v in acc.items() if v})
        return SparseMatrix(self.nrows, other.ncols, cols)

    def is_zero(self) -> bool:
        return not any(self.cols)


class OrientedComplex:
    """A complex together with a sign per facet (relative to sorted order)."""

    __slots__ = ("complex", "signs")

    def __init__(self, complex: SimplicialComplex, signs: Mapping[Simplex, int]):
        self.complex = complex
        self.signs: Dict[Simplex, int] = dict(signs)

    @property
    def dim(self) -> int:
        return self.complex.dim

    def __eq__(self, other):
        return isinstance(other, OrientedComplex) and self.signs == other.signs

    def __hash__(self):
        return hash(frozenset(self.signs.items()))

    def reversed(self) -> "OrientedComplex":
        return OrientedComplex(self.complex, {f: -s for f, s in self.signs.items()})

    def is_consistent(self) -> bool:
        """Every ridge receives opposite induced signs from its two facets."""
        acc: Dict[Simplex, int] = defaultdict(int)
        cnt: Dict[Simplex, int] = defaultdict(int)
        for f, s in self.signs.items():
            for i in range(len(f)):
                r = f[:i] + f[i + 1:]
                acc[r] += s * (-1) ** i
                cnt[r] += 1
        return all(v == 0 for v in acc.values()) and all(c == 2 for c in cnt.values())

    def relabel(self, mapping: Mapping[int, int]) -> "OrientedComplex":
        signs = {}
        for f, s in self.signs.items():
            img = [mapping[v] for v in f]
            signs[simplex(img)] = s * permutation_sign(img)
        return OrientedComplex(SimplicialComplex(signs), signs)

    def link(self, s: Sequence[int]) -> "OrientedComplex":
        return induced_link_orientation(self, s)


def orient(K: SimplicialComplex) -> OrientedComplex:
    """Propagate a consistent orientation from the least facet, which gets +1."""
    ridges: Dict[Simplex, List[Tuple[Simplex, int]]] = defaultdict(list)
    for f in K.facets:
        for i in range(len(f)):
            ridges[f[:i] + f[i + 1:]].append((f, i))
    if any(len(v) != 2 for v in ridges.values()):
        raise NotPseudomanifold("some ridge is not in exactly two facets")
    signs: Dict[Simplex, int] = {}
    for seed in K.sorted_facets:
        if seed in signs:
            continue
        signs[seed] = 1
        stack = [seed]
        while stack:
            f = stack.pop()
            s = signs[f]
            for i in range(len(f)):
                (g0, i0), (g1, i1) = ridges[f[:i] + f[i + 1:]]
                g, j = (g1, i1) if g0 == f else (g0, i0)
                # induced signs s*(-1)^i and t*(-1)^j must cancel
                t = -s * (-1) ** (i + j)
                if g in signs:
                    if signs[g] != t:
                        raise NonOrientable("orientation propagation contradiction")
                else:
                    signs[g] = t
                    stack.append(g)
    return OrientedComplex(K, signs)


def induced_link_orientation(K: OrientedComplex, s: Sequence[int]) -> OrientedComplex:
    s = simplex(s)
    star = K.complex.star_facets(s)
    if not star:
        raise NotAFace(f"{s} is not a face")
    ss = set(s)
    signs = {}
    for f in star:
        t = tuple(v for v in f if v not in ss)
        signs[t] = K.signs[f] * permutation_sign(s + t)
    return OrientedComplex(SimplicialComplex(signs), signs)


def build_complex(facets: Iterable[Iterable[int]]) -> SimplicialComplex:
    return SimplicialComplex(simplex(f) for f in facets)


# ---- text formats -------------------------------------------------------

def format_facets(K: SimplicialComplex, header: str | None = None) -> str:
    lines = []
    if header:
        lines.extend("# " + h for h in header.splitlines())
    lines.extend(" ".join(map(str, f)) for f in K.sorted_facets)
    return "\n".join(lines) + "\n"


def parse_facets(text: str) -> SimplicialComplex:
    facets = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        facets.append([int(x) for x in line.split()])
    if not facets:
        raise EmptyInput("no facets in input")
    return build_complex(facets)


def to_document(K: SimplicialComplex) -> str:
    doc = {"dimension": K.dim, "vertices": K.vertices, "facets": [list(f) for f in K.sorted_facets]}
    return json.dumps(doc, indent=None, separators=(", ", ": ")) + "\n"


def from_document(text: str) -> SimplicialComplex:
    doc = json.loads(text)
    K = build_complex(doc["facets"])
    if K.dim != doc["dimension"] or K.vertices != sorted(doc["vertices"]):
        raise ComplexError("document fields disagree with its facets")
    return K


def load_complex(path: str) -> SimplicialComplex:
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return from_document(text)
    return parse_facets(text)
