"""
Integral homology through a sparse Smith normal form.

The elimination keeps a log of elementary row and column operations instead
of materialising the unimodular transforms; vectors are pushed through the log
on demand.  Unit pivots are taken greedily (sparsest row/column first), and
whatever non-unit block survives is finished by a dense routine.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd
from typing import Dict, List, Mapping, Sequence, Tuple

from .complex import SimplicialComplex, Simplex, SparseMatrix

Op = Tuple[int, int, int]  # (target, source, factor); source == -1 means negate target


class NotACycle(ValueError):
    pass


class RankMismatch(ValueError):
    pass


class SmithDecomposition:
    """``S = Pr · U · M · V · Pc`` is diagonal with d1 | d2 | ... .

    ``row_ops`` build U (applied to the left of M), ``col_ops`` build V.
    ``pivots[i]`` is the (row, col) of M's coordinates holding ``diagonal[i]``.
    """

    def __init__(self, nrows, ncols, diagonal, pivots, row_ops, col_ops):
        self.nrows = nrows
        self.ncols = ncols
        self.diagonal: List[int] = diagonal
        self.pivots: List[Tuple[int, int]] = pivots
        self.row_ops: List[Op] = row_ops
        self.col_ops: List[Op] = col_ops

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    def pivot_rows(self) -> set:
        return {r for r, _ in self.pivots}

    def apply_U(self, vec: Sequence[int]) -> List[int]:
        x = list(vec)
        for t, s, f in self.row_ops:
            if s < 0:
                x[t] = -x[t]
            else:
                x[t] += f * x[s]
        return x

    def apply_V(self, vec: Sequence[int]) -> List[int]:
        # V = E1 E2 ... En, so V x applies the column operations in reverse
        x = list(vec)
        for t, s, f in reversed(self.col_ops):
            if s < 0:
                x[t] = -x[t]
            else:
                x[s] += f * x[t]
        return x

    def _row_perm(self) -> List[int]:
        rows = [r for r, _ in self.pivots]
        used = set(rows)
        return rows + [r for r in range(self.nrows) if r not in used]

    def _col_perm(self) -> List[int]:
        cols = [c for _, c in self.pivots]
        used = set(cols)
        return cols + [c for c in range(self.ncols) if c not in used]

    def U(self) -> List[List[int]]:
        """Dense left transform, rows already permuted onto the diagonal."""
        cols = [self.apply_U([int(i == j) for i in range(self.nrows)]) for j in range(self.nrows)]
        perm = self._row_perm()
        return [[cols[j][perm[i]] for j in range(self.nrows)] for i in range(self.nrows)]

    def V(self) -> List[List[int]]:
        """Dense right transform, columns already permuted onto the diagonal."""
        perm = self._col_perm()
        cols = [self.apply_V([int(i == perm[j]) for i in range(self.ncols)]) for j in range(self.ncols)]
        return [[cols[j][i] for j in range(self.ncols)] for i in range(self.ncols)]


def smith_normal_form(M: SparseMatrix | Sequence[Sequence[int]]) -> SmithDecomposition:
    if not isinstance(M, SparseMatrix):
        M = SparseMatrix.from_dense(M)
    nr, nc = M.nrows, M.ncols
    rows: Dict[int, Dict[int, int]] = {}
    cols: Dict[int, set] = {}
    for j, col in enumerate(M.cols):
        for i, v in col.items():
            if v:
                rows.setdefault(i, {})[j] = v
                cols.setdefault(j, set()).add(i)
    row_ops: List[Op] = []
    col_ops: List[Op] = []
    pivots: List[Tuple[int, int]] = []
    units: List[int] = []

    def add_row(t: int, s: int, f: int):
        rt = rows.setdefault(t, {})
        for j, v in rows[s].items():
            nv = rt.get(j, 0) + f * v
            if nv:
                if j not in rt:
                    cols[j].add(t)
                rt[j] = nv
            elif j in rt:
                del rt[j]
                cols[j].discard(t)
        if not rt:
            del rows[t]
        row_ops.append((t, s, f))

    # phase 1: unit pivots, sparsest column first
    heap = [(len(s), j) for j, s in cols.items()]
    heapq.heapify(heap)
    done_cols = set()
    skipped = []
    while heap:
        n, c = heapq.heappop(heap)
        if c in done_cols or c not in cols:
            continue
        cur = len(cols[c])
        if cur == 0:
            continue
        if cur != n:
            heapq.heappush(heap, (cur, c))
            continue
        best = None
        for r in cols[c]:
            v = rows[r][c]
            if v in (1, -1):
                key = (len(rows[r]), r)
                if best is None or key < best[0]:
                    best = (key, r, v)
        if best is None:
            skipped.append(c)
            continue
        _, p, u = best
        touched = set()
        for i in list(cols[c]):
            if i != p:
                touched.update(rows[i])
                add_row(i, p, -rows[i][c] * u)
        for j, v in list(rows[p].items()):
            if j != c:
                col_ops.append((j, c, -v * u))
                cols[j].discard(p)
                touched.add(j)
        del rows[p]
        del cols[c]
        done_cols.add(c)
        pivots.append((p, c))
        units.append(1)
        if u == -1:
            row_ops.append((p, -1, 0))
        for j in touched:
            if j in cols and j not in done_cols:
                heapq.heappush(heap, (len(cols[j]), j))
        # a skipped column may have gained a unit entry
        for j in skipped:
            if j in cols and cols[j]:
                heapq.heappush(heap, (len(cols[j]), j))
        skipped = []

    # phase 2: dense finish on whatever is left
    rem_rows = sorted(r for r in rows if rows[r])
    rem_cols = sorted({j for r in rem_rows for j in rows[r]})
    tail_diag: List[int] = []
    tail_piv: List[Tuple[int, int]] = []
    if rem_rows:
        A = [[rows[r].get(j, 0) for j in rem_cols] for r in rem_rows]
        tail_diag, tail_piv = _dense_snf(A, rem_rows, rem_cols, row_ops, col_ops)
    return SmithDecomposition(nr, nc, units + tail_diag, pivots + tail_piv, row_ops, col_ops)


def _dense_snf(A, rmap, cmap, row_ops, col_ops):
    """Classical SNF of a small dense block, logging ops in global indices."""
    m, n = len(A), len(A[0])
    rperm = list(range(m))  # logical position -> local row
    cperm = list(range(n))

    def g(i, j):
        return A[rperm[i]][cperm[j]]

    def radd(t, s, f):  # logical rows
        rt, rs = A[rperm[t]], A[rperm[s]]
        for j in range(n):
            rt[j] += f * rs[j]
        row_ops.append((rmap[rperm[t]], rmap[rperm[s]], f))

    def cadd(t, s, f):
        ct, cs = cperm[t], cperm[s]
        for i in range(m):
            A[i][ct] += f * A[i][cs]
        col_ops.append((cmap[ct], cmap[cs], f))

    diag, piv = [], []
    t = 0
    while t < min(m, n):
        nz = [(abs(g(i, j)), i, j) for i in range(t, m) for j in range(t, n) if g(i, j)]
        if not nz:
            break
        _, i0, j0 = min(nz)
        rperm[t], rperm[i0] = rperm[i0], rperm[t]
        cperm[t], cperm[j0] = cperm[j0], cperm[t]
        while True:
            p = g(t, t)
            changed = False
            for i in range(t + 1, m):
                if g(i, t):
                    radd(i, t, -(g(i, t) // p))
                    if g(i, t):
                        changed = True
            for j in range(t + 1, n):
                if g(t, j):
                    cadd(j, t, -(g(t, j) // p))
                    if g(t, j):
                        changed = True
            if changed:
                nz = [(abs(g(i, t)), i, t) for i in range(t, m) if g(i, t)]
                nz += [(abs(g(t, j)), t, j) for j in range(t, n) if g(t, j)]
                _, i0, j0 = min(nz)
                rperm[t], rperm[i0] = rperm[i0], rperm[t]
                cperm[t], cperm[j0] = cperm[j0], cperm[t]
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if g(i, j) % p), None)
            if bad is None:
                break
            radd(t, bad[0], 1)
        if g(t, t) < 0:
            A[rperm[t]] = [-x for x in A[rperm[t]]]
            row_ops.append((rmap[rperm[t]], -1, 0))
        diag.append(g(t, t))
        piv.append((rmap[rperm[t]], cmap[cperm[t]]))
        t += 1
    return diag, piv


# ---- homology -------------------------------------------------------------

class HomologyBasis:
    """Free part of H_k through the cocycles given by non-pivot rows of U."""

    def __init__(self, K: SimplicialComplex, k: int):
        self.K = K
        self.k = k
        self.cells: List[Simplex] = K.faces(k)
        self.index = {s: i for i, s in enumerate(self.cells)}
        n = len(self.cells)
        self.rank_out = smith_normal_form(K.boundary_matrix(k)).rank if k >= 1 else 0
        if k < K.dim:
            self.snf_in = smith_normal_form(K.boundary_matrix(k + 1))
        else:
            self.snf_in = SmithDecomposition(n, 0, [], [], [], [])
        self.betti = n - self.rank_out - self.snf_in.rank
        self.torsion = [d for d in self.snf_in.diagonal if d > 1]
        pr = self.snf_in.pivot_rows()
        self.free_rows = [i for i in range(n) if i not in pr]
        self._basis = None

    def cocycle_values(self, vec: Sequence[int]) -> List[int]:
        y = self.snf_in.apply_U(vec)
        return [y[i] for i in self.free_rows]

    def dense(self, chain: Mapping[Simplex, int]) -> List[int]:
        x = [0] * len(self.cells)
        for s, c in chain.items():
            x[self.index[s]] += c
        return x

    def is_cycle(self, chain: Mapping[Simplex, Fraction]) -> bool:
        if self.k == 0:
            return True
        acc: Dict[Simplex, Fraction] = {}
        for s, c in chain.items():
            for i in range(len(s)):
                f = s[:i] + s[i + 1:]
                acc[f] = acc.get(f, 0) + (-c if i % 2 else c)
        return all(v == 0 for v in acc.values())

    def basis(self) -> List[List[int]]:
        """Integral basis of the saturated lattice of cocycle-value vectors of
        cycles; it is in bijection with H_k modulo torsion."""
        if self._basis is None:
            vecs = []
            if self.betti:
                snf_out = smith_normal_form(self.K.boundary_matrix(self.k)) if self.k >= 1 else None
                n = len(self.cells)
                if snf_out is None:
                    gens = [[int(i == j) for i in range(n)] for j in range(n)]
                else:
                    used = {c for _, c in snf_out.pivots}
                    gens = (snf_out.apply_V([int(i == j) for i in range(n)]) for j in range(n) if j not in used)
                for z in gens:
                    v = self.cocycle_values(z)
                    if any(v):
                        vecs.append(v)
                        if _rank(vecs) < len(vecs):
                            vecs.pop()
                        elif len(vecs) == self.betti:
                            break
            self._basis = _saturate(vecs)
        return self._basis

    def coordinates(self, chain: Mapping[Simplex, Fraction]) -> List[Fraction]:
        if not self.is_cycle(chain):
            raise NotACycle("chain has nonzero boundary")
        den = 1
        for c in chain.values():
            den = den * Fraction(c).denominator // gcd(den, Fraction(c).denominator)
        ints = {s: int(Fraction(c) * den) for s, c in chain.items()}
        v = self.cocycle_values(self.dense(ints))
        coords = _solve_in_basis(self.basis(), v)
        return [Fraction(c, den) for c in coords]


def homology(K: SimplicialComplex, k: int) -> Tuple[int, List[int]]:
    hb = HomologyBasis(K, k)
    return hb.betti, hb.torsion


def express_in_basis(chain: Mapping[Simplex, Fraction], K: SimplicialComplex, k: int) -> List[Fraction]:
    return HomologyBasis(K, k).coordinates(chain)


def _rank(vecs: List[List[int]]) -> int:
    rows = [[Fraction(x) for x in v] for v in vecs]
    r = 0
    ncol = len(rows[0]) if rows else 0
    for c in range(ncol):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def _saturate(vecs: List[List[int]]) -> List[List[int]]:
    """Basis of (rational span of vecs) ∩ Z^m."""
    if not vecs:
        return []
    if len(vecs) == 1:
        g = 0
        for x in vecs[0]:
            g = gcd(g, x)
        return [[x // g for x in vecs[0]]]
    # rows of W: W = U^-1 D V^-1; saturation is spanned by the first r rows of V^-1
    W = [list(v) for v in vecs]
    snf = smith_normal_form(SparseMatrix.from_dense(W))
    Vinv = _inverse_unimodular(snf.V())
    return [Vinv[i] for i in range(snf.rank)]


def _inverse_unimodular(V: List[List[int]]) -> List[List[int]]:
    n = len(V)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(V)]
    for c in range(n):
        p = next(i for i in range(c, n) if A[i][c])
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return [[int(x) for x in row[n:]] for row in A]


def _solve_in_basis(basis: List[List[int]], v: List[int]) -> List[Fraction]:
    """Exact coordinates of v in the given (independent) integer rows."""
    if not basis:
        if any(v):
            raise ValueError("vector outside the lattice span")
        return []
    b = len(basis)
    cols = [c for c in range(len(v)) if any(row[c] for row in basis) or v[c]]
    # augmented system basis^T x = v
    A = [[Fraction(basis[i][c]) for i in range(b)] + [Fraction(v[c])] for c in cols]
    r = 0
    where = [-1] * b
    for c in range(b):
        p = next((i for i in range(r, len(A)) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        A[r] = [x / piv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * bb for a, bb in zip(A[i], A[r])]
        where[c] = r
        r += 1
    if any(A[i][b] for i in range(r, len(A))):
        raise ValueError("vector outside the lattice span")
    return [A[where[c]][b] if where[c] >= 0 else Fraction(0) for c in range(b)]
