"""
Cycles in the graph of labeled 2-spheres and the rational cocycle on them.

A cycle is stored as the list of its spheres ``[S0, S1, ..., S(n-1)]``; the
edges are the single bistellar moves ``S(i) -> S(i+1)`` together with the
closing move ``S(n-1) -> S0``.  The cocycle is evaluated by decomposing a
cycle into elementary cycles (twelve kinds, each with a closed-form value)
through induction on the largest move complexity.

Complexities are handled as integers in units of 1/6 (see
``bistellar.complexity6_from``): a sphere with k vertices has complexity
6k, 6k + 2 or 6k + 4 for minimal degree 3, 4 or at least 5.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .bistellar import (
    Move,
    NotApplicable,
    Sphere,
    move_between,
    move_complexity6,
    move_sigma,
    norm_tri,
    participants,
)

# Moves whose complexity is at most 5 + 1/6 only join spheres with at most
# five vertices; cycles made of them carry no value and end the induction.
BASE_COMPLEXITY6 = 31

KINDS = ("1a", "1b", "1c", "1d", "1e", "1f", "1g", "1h", "1i", "2a", "2b", "2c")


class UnknownKind(ValueError):
    pass


class NotACycle(ValueError):
    pass


class DecompositionFailed(RuntimeError):
    """No rule of the complexity induction applies; ``cycle`` is the stuck
    residual (a list of spheres) and ``position`` the offending index."""

    def __init__(self, message: str, cycle: Sequence[Sphere] = (), position: int = -1):
        super().__init__(message)
        self.cycle = list(cycle)
        self.position = position


# ---- closed-form values ---------------------------------------------------

def rho(p: int, q: int) -> Fraction:
    return Fraction(q - p, (p + q + 2) * (p + q + 3) * (p + q + 4))


def omega(p: int) -> Fraction:
    return Fraction(1, (p + 2) * (p + 3))


TWELFTH = Fraction(1, 12)


def table_value(kind: str, params: Sequence[int]) -> Fraction:
    """Value of the cocycle on the template cycle of the given kind."""
    if kind in ("1a", "1d", "1g"):
        return Fraction(0)
    if kind in ("1b", "1e", "1h"):
        p, q = params
        return rho(p, q)
    if kind in ("1c", "1i"):
        p, q = params
        return rho(0, q) - rho(0, p)
    if kind == "1f":
        p, q = params
        return rho(0, q) + rho(0, p)
    if kind == "2a":
        p, q, r = params
        return omega(p) - omega(q) + omega(r) - TWELFTH
    if kind == "2b":
        p, q, r, k = params
        return omega(p) - omega(q) - omega(r) + omega(k)
    if kind == "2c":
        return sum((omega(x) for x in params), Fraction(0)) - TWELFTH
    raise UnknownKind(kind)


@dataclass(frozen=True)
class ElementaryCycle:
    """An elementary cycle realized on concrete spheres.

    ``multiplicity`` is +1 when ``states`` runs through the template in its
    reference direction and -1 when it runs backwards, so the value of the
    realized cycle is ``multiplicity * table_value(kind, params)``."""

    kind: str
    params: Tuple[int, ...]
    multiplicity: int
    states: Tuple[Sphere, ...] = field(repr=False, compare=False)

    @property
    def value(self) -> Fraction:
        return evaluate_elementary(self)

    def row(self) -> Dict:
        v = self.value
        return {"kind": self.kind, "params": list(self.params), "multiplicity": self.multiplicity,
                "value": [v.numerator, v.denominator]}


def evaluate_elementary(e: ElementaryCycle) -> Fraction:
    return e.multiplicity * table_value(e.kind, e.params)


# ---- parameter extraction -------------------------------------------------

def cycle_moves(states: Sequence[Sphere]) -> List[Move]:
    n = len(states)
    return [move_between(states[i], states[(i + 1) % n]) for i in range(n)]


def _fan(S: Sphere, v: int) -> List[Tuple[int, int, int]]:
    """Triangles at v in positive cyclic order."""
    c = S.circle(v)
    return [norm_tri(v, c[i], c[(i + 1) % len(c)]) for i in range(len(c))]


def _arc_ends(indices: List[int], n: int) -> Tuple[int, int]:
    s = set(indices)
    start = next(i for i in indices if (i - 1) % n not in s)
    end = next(i for i in indices if (i + 1) % n not in s)
    return start, end


def _gains(S: Sphere, T: Sphere, v: int) -> int:
    return 1 if T.degree(v) > S.degree(v) else -1


def _square_angles(S0: Sphere, S1: Sphere, S3: Sphere) -> List[Tuple[int, int]]:
    """Angle pairs (p, q) at the vertices touched by both moves of a square
    with base S0 and sides S0 -> S1, S0 -> S3."""
    mA = move_between(S0, S1)
    mB = move_between(S0, S3)
    shared = sorted(set(participants(S0, mA)) & set(participants(S0, mB)))
    goneA = S0.tris - S1.tris
    goneB = S0.tris - S3.tris
    out = []
    for v in shared:
        T = _fan(S0, v)
        n = len(T)
        ia = [i for i in range(n) if T[i] in goneA]
        ib = [i for i in range(n) if T[i] in goneB]
        sa, ea = _arc_ends(ia, n)
        sb, eb = _arc_ends(ib, n)
        g_ab = (sb - ea - 1) % n
        g_ba = (sa - eb - 1) % n
        if _gains(S0, S1, v) * _gains(S0, S3, v) > 0:
            out.append((g_ab, g_ba))
        else:
            out.append((g_ba, g_ab))
    return out


def _classify_square(states: Sequence[Sphere]) -> ElementaryCycle:
    S0, S1, S2, S3 = states
    mA = move_between(S0, S1)
    mB = move_between(S0, S3)
    if _try(S1, mB) != S2:
        raise NotACycle("four-cycle is not a commuting square")
    types = sorted("f" if m[0] == "flip" else "v" for m in (mA, mB))
    row = {("v", "v"): "abc", ("f", "v"): "def", ("f", "f"): "ghi"}[tuple(types)]
    angles = _square_angles(S0, S1, S3)
    if len(angles) > 2:
        raise NotACycle("square with more than two shared vertices")
    kind = "1" + row[len(angles)]
    if len(angles) == 0:
        return ElementaryCycle(kind, (), 1, tuple(states))
    if len(angles) == 1:
        return ElementaryCycle(kind, angles[0], 1, tuple(states))
    (p1, q1), (p2, q2) = angles
    if kind == "1f":
        if p1 == 0 and p2 == 0:
            return ElementaryCycle(kind, tuple(sorted((q1, q2))), 1, tuple(states))
        if q1 == 0 and q2 == 0:
            return ElementaryCycle(kind, tuple(sorted((p1, p2))), -1, tuple(states))
    else:
        if q1 == 0 and p2 == 0:
            return ElementaryCycle(kind, (p1, q2), 1, tuple(states))
        if p1 == 0 and q2 == 0:
            return ElementaryCycle(kind, (p2, q1), 1, tuple(states))
    raise NotACycle(f"unexpected angle pattern {angles} for kind {kind}")


def _rotate(states: Sequence[Sphere], i: int) -> List[Sphere]:
    return list(states[i:]) + list(states[:i])


def _classify_2a(states: Sequence[Sphere], moves: List[Move]) -> ElementaryCycle:
    i = next(j for j, m in enumerate(moves) if m[0] == "flip")
    X = _rotate(states, i)
    L1, L2, _, M, _ = X
    flip = move_between(L1, L2)
    v2 = move_between(X[1], X[2])[1]
    v1 = move_between(X[4], X[0])[2]
    a, b = flip[1], flip[2]
    y = b if a == v2 else a
    c, d = L1.opposite(a, b)
    w = d if c == v1 else c
    corners = X[4].circle(v2)
    z = next(u for u in corners if u not in (y, w))
    orient = 1 if norm_tri(y, w, z) in M.tris else -1
    p = {u: M.degree(u) - 1 for u in corners}
    return ElementaryCycle("2a", (p[y], p[z], p[w]), orient, tuple(states))


def _classify_2b(states: Sequence[Sphere], moves: List[Move]) -> ElementaryCycle:
    n = len(states)
    # the peak is the state between two flips, entered and left by flips
    i = next(j for j in range(n) if moves[j - 1][0] == "flip" and moves[j][0] == "flip"
             and moves[(j - 2) % n][0] != "flip")
    X = _rotate(states, i - 1)
    L1, L, L2 = X[0], X[1], X[2]
    e1 = move_between(L, L1)
    e2 = move_between(L, L2)
    (x,) = set(e1[1:]) & set(e2[1:])
    s1 = e1[1] if e1[2] == x else e1[2]
    s2 = e2[1] if e2[2] == x else e2[2]
    ring = L.circle(x, s1)
    if len(ring) != 4 or s2 not in (ring[1], ring[3]):
        raise NotACycle("flips of a 2b cycle must use adjacent spokes of a degree-4 vertex")
    orient = 1 if ring[1] == s2 else -1
    s3 = ring[2]
    s4 = ring[3] if orient == 1 else ring[1]
    p = {u: L.degree(u) - 2 for u in ring}
    return ElementaryCycle("2b", (p[s1], p[s3], p[s4], p[s2]), -orient, tuple(states))


def _classify_2c(states: Sequence[Sphere]) -> ElementaryCycle:
    common = frozenset.intersection(*(S.tris for S in states))
    fan0 = states[0].tris - common
    directed = {(a, b) for t in fan0 for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0]))}
    boundary = {a: b for a, b in directed if (b, a) not in directed}
    if len(boundary) != 5:
        raise NotACycle("five flips that do not rotate a pentagon")
    start = min(boundary)
    ring = [start]
    while len(ring) < 5:
        ring.append(boundary[ring[-1]])

    def apex(S: Sphere) -> int:
        fan = [set(t) for t in S.tris - common]
        return next(iter(set.intersection(*fan)))

    step = (ring.index(apex(states[1])) - ring.index(apex(states[0]))) % 5
    if step not in (2, 3):
        raise NotACycle("pentagon fans are not visited in rotation order")
    p = [sum(1 for t in common if c in t) for c in ring]
    return ElementaryCycle("2c", tuple(p), 1 if step == 3 else -1, tuple(states))


def classify(states: Sequence[Sphere]) -> ElementaryCycle:
    """Recognize an elementary cycle from its spheres and extract its kind,
    angle parameters and direction."""
    validate_cycle(states)
    moves = cycle_moves(states)
    flips = sum(1 for m in moves if m[0] == "flip")
    if len(states) == 4:
        return _classify_square(states)
    if len(states) == 5:
        if flips == 1:
            return _classify_2a(states, moves)
        if flips == 3:
            return _classify_2b(states, moves)
        if flips == 5:
            return _classify_2c(states)
    raise NotACycle(f"not an elementary cycle: {[m[0] for m in moves]}")


# ---- the decomposition ----------------------------------------------------

def _c6(S: Sphere) -> int:
    return S.complexity6()


def _mc(S: Sphere, T: Sphere) -> int:
    return move_complexity6(S.complexity6(), T.complexity6())


def _try(S: Sphere, m: Move) -> Optional[Sphere]:
    try:
        return S.apply(m)
    except (NotApplicable, KeyError):
        return None


def _path_ok(path: Sequence[Sphere], bound: int) -> bool:
    return all(_mc(a, b) < bound for a, b in zip(path, path[1:]))


def _disjoint(S: Sphere, m1: Move, m2: Move) -> bool:
    """No triangle of S contains both removed faces."""
    u = set(move_sigma(m1)) | set(move_sigma(m2))
    if len(u) > 3:
        return True
    return not any(u.issubset(t) for t in S.tris)


def _square(S: Sphere, m1: Move, m2: Move) -> Optional[Tuple[Sphere, Sphere, Sphere]]:
    """If m1 and m2 commute at S, return (m1 S, m2 S, m1 m2 S)."""
    if m1 == m2 or not _disjoint(S, m1, m2):
        return None
    A = _try(S, m1)
    B = _try(S, m2)
    if A is None or B is None:
        return None
    AB = _try(A, m2)
    if AB is None or AB != _try(B, m1):
        return None
    return A, B, AB


def _down_moves(S: Sphere) -> List[Move]:
    """Deletions and flips at S, in canonical order."""
    return S.moves()


@dataclass
class Decomposition:
    elementary: List[ElementaryCycle]
    residual: List[Sphere]

    @property
    def value(self) -> Fraction:
        return sum((e.value for e in self.elementary), Fraction(0))


class Decomposer:
    """Complexity induction: repeatedly lower the largest move complexity A
    of the cycle by splitting off elementary cycles.

    Odd A arises from a flip between two spheres of equal complexity A - 1;
    that single edge is rerouted.  Even A arises at a peak sphere of
    complexity A; the two moves leaving the peak are rerouted below it."""

    def __init__(self, max_steps: int = 10 ** 6, rng=None):
        self.max_steps = max_steps
        # with an RNG the choices among admissible rules become random; used
        # to check that the total value does not depend on them
        self.rng = rng

    def _moves(self, S: Sphere) -> List[Move]:
        ms = _down_moves(S)
        if self.rng is not None:
            self.rng.shuffle(ms)
        return ms

    def _pick(self, indices: List[int]) -> int:
        return indices[0] if self.rng is None else self.rng.choice(indices)

    def decompose(self, states: Sequence[Sphere]) -> Decomposition:
        self.cycle = cancel_backtracks(list(states))
        self.found: List[ElementaryCycle] = []
        for _ in range(self.max_steps):
            if not self._step():
                return Decomposition(self.found, self.cycle)
            self.cycle = cancel_backtracks(self.cycle)
        raise DecompositionFailed("step budget exhausted", self.cycle)

    # -- bookkeeping -----------------------------------------------------

    def _record(self, loop: Sequence[Sphere]) -> None:
        loop = cancel_backtracks(list(loop))
        if loop:
            self.found.append(classify(loop))

    def _replace(self, start: int, length: int, new_path: Sequence[Sphere]) -> None:
        """Replace cycle[start .. start+length] (length moves, indices taken
        cyclically) by new_path, which has the same endpoints."""
        cyc = _rotate(self.cycle, start)
        old = cyc[: length + 1] if length < len(cyc) else cyc + cyc[:1]
        assert old[0] == new_path[0] and old[-1] == new_path[-1]
        rest = cyc[length:] if length < len(cyc) else cyc[:1]
        self.cycle = list(new_path[:-1]) + rest

    # -- one induction step ----------------------------------------------

    def _step(self) -> bool:
        cyc = self.cycle
        n = len(cyc)
        if n == 0:
            return False
        mcs = [_mc(cyc[i], cyc[(i + 1) % n]) for i in range(n)]
        A = max(mcs)
        if A <= BASE_COMPLEXITY6:
            return False
        if A % 2:
            i = self._pick([j for j in range(n) if mcs[j] == A])
            if not self._odd(i, A, allow_split=True):
                raise DecompositionFailed(f"no rule for a move of complexity {A}/6", cyc, i)
        else:
            i = self._pick([j for j in range(n) if _c6(cyc[j]) == A])
            if not self._even(i, A, allow_vertical=True):
                raise DecompositionFailed(f"no rule for a peak of complexity {A}/6", cyc, i)
        return True

    # -- odd A: reroute the flip L1 -> L2 --------------------------------

    def _odd_paths(self, L1: Sphere, L2: Sphere, A: int):
        """Candidate replacement paths for the edge L1 -> L2 using only
        moves below A; yields (path, elementary loops)."""
        beta = move_between(L1, L2)
        back = move_between(L2, L1)
        # commuting squares with a move made at both ends
        for m in self._moves(L1):
            sq = _square(L1, beta, m)
            if sq is None:
                continue
            _, L1m, L2m = sq
            if not _disjoint(L2, back, m):
                continue
            path = [L1, L1m, L2m, L2]
            if _path_ok(path, A):
                yield path, [[L1, L2, L2m, L1m]]
        # the degree-3 / degree-4 pair around the flipped edge
        for X, Y, rev in ((L1, L2, False), (L2, L1, True)):
            m = move_between(X, Y)
            a, b = m[1], m[2]
            c, d = X.opposite(a, b)
            for v1 in (c, d):
                if X.degree(v1) != 3:
                    continue
                for v2 in (a, b):
                    if X.degree(v2) != 4:
                        continue
                    X1 = _try(X, ("del", v1))
                    Y2 = _try(Y, ("del", v2))
                    if X1 is None or Y2 is None:
                        continue
                    Mid = _try(X1, ("del", v2))
                    if Mid is None or _try(Y2, ("del", v1)) != Mid:
                        continue
                    path = [X, X1, Mid, Y2, Y]
                    if not _path_ok(path, A):
                        continue
                    loop = [X, Y, Y2, Mid, X1]
                    if rev:
                        yield path[::-1], [loop]
                    else:
                        yield path, [loop]

    def _odd(self, i: int, A: int, allow_split: bool) -> bool:
        cyc = self.cycle
        n = len(cyc)
        L1, L2 = cyc[i], cyc[(i + 1) % n]
        for path, loops in self._odd_paths(L1, L2, A):
            for lp in loops:
                self._record(lp)
            self._replace(i, 1, path)
            return True
        if not allow_split:
            return False
        # a commuting square whose new edges may stay at level A, provided
        # each of them can itself be rerouted below A
        beta = move_between(L1, L2)
        back = move_between(L2, L1)
        for m in self._moves(L1):
            sq = _square(L1, beta, m)
            if sq is None or not _disjoint(L2, back, m):
                continue
            _, L1m, L2m = sq
            path = [L1, L1m, L2m, L2]
            levels = [_mc(a, b) for a, b in zip(path, path[1:])]
            if max(levels) > A:
                continue
            subs = []
            ok = True
            for (a, b), lv in zip(zip(path, path[1:]), levels):
                if lv < A:
                    subs.append(None)
                    continue
                cand = next(self._odd_paths(a, b, A), None)
                if cand is None:
                    ok = False
                    break
                subs.append(cand)
            if not ok:
                continue
            self._record([L1, L2, L2m, L1m])
            full = [L1]
            for (a, b), sub in zip(zip(path, path[1:]), subs):
                if sub is None:
                    full.append(b)
                else:
                    sp, loops = sub
                    for lp in loops:
                        self._record(lp)
                    full.extend(sp[1:])
            self._replace(i, 1, full)
            return True
        return False

    # -- even A: reroute around the peak L -------------------------------

    def _pair_paths(self, L: Sphere, L1: Sphere, L2: Sphere, A: int):
        """Direct replacements of L1 <- L -> L2 by a path below A."""
        s1 = move_between(L, L1)
        s2 = move_between(L, L2)
        sq = _square(L, s1, s2)
        if sq is not None:
            L12 = sq[2]
            path = [L1, L12, L2]
            if _path_ok(path, A):
                yield path, [[L1, L, L2, L12]]
        if s1[0] == "flip" and s2[0] == "flip":
            common = set(s1[1:]) & set(s2[1:])
            for x in sorted(common):
                if L.degree(x) != 4:
                    continue
                Q1 = _try(L1, ("del", x))
                Q2 = _try(L2, ("del", x))
                if Q1 is None or Q2 is None:
                    continue
                try:
                    mq = move_between(Q1, Q2)
                except NotApplicable:
                    continue
                if mq[0] != "flip":
                    continue
                path = [L1, Q1, Q2, L2]
                if _path_ok(path, A):
                    yield path, [[L1, L, L2, Q2, Q1]]

    def _pair_with_middle(self, L: Sphere, L1: Sphere, L2: Sphere, A: int):
        for path, loops in self._pair_paths(L, L1, L2, A):
            yield path, loops
        for mu in self._moves(L):
            Lm = _try(L, mu)
            if Lm is None or Lm == L1 or Lm == L2 or _c6(Lm) >= A:
                continue
            first = next(self._pair_paths(L, L1, Lm, A), None)
            if first is None:
                continue
            second = next(self._pair_paths(L, Lm, L2, A), None)
            if second is None:
                continue
            yield first[0] + second[0][1:], first[1] + second[1]

    def _even(self, i: int, A: int, allow_vertical: bool) -> bool:
        cyc = self.cycle
        n = len(cyc)
        L, L1, L2 = cyc[i], cyc[i - 1], cyc[(i + 1) % n]
        start = (i - 1) % n
        cand = next(self._pair_with_middle(L, L1, L2, A), None)
        if cand is not None:
            path, loops = cand
            for lp in loops:
                self._record(lp)
            self._replace(start, 2, path)
            return True
        if not allow_vertical:
            return False
        s1 = move_between(L, L1)
        s2 = move_between(L, L2)
        for e in self._moves(L):
            q1 = _square(L, s1, e)
            q2 = _square(L, s2, e)
            if q1 is None or q2 is None:
                continue
            _, Lp, L1p = q1
            _, _, L2p = q2
            if _c6(Lp) > A:
                continue
            if _mc(L1, L1p) >= A or _mc(L2, L2p) >= A:
                continue
            if _c6(Lp) < A:
                mid = [L1p, Lp, L2p]
                if not _path_ok(mid, A):
                    continue
                tail = [(mid, [])]
            else:
                sub = next(self._pair_with_middle(Lp, L1p, L2p, A), None)
                if sub is None:
                    continue
                tail = [sub]
            self._record([L1, L, Lp, L1p])
            self._record([L, L2, L2p, Lp])
            path = [L1]
            for sp, loops in tail:
                for lp in loops:
                    self._record(lp)
                path.extend(sp)
            path.append(L2)
            self._replace(start, 2, path)
            return True
        return False


def cancel_backtracks(states: List[Sphere]) -> List[Sphere]:
    """Remove immediate returns S -> T -> S and repeated states, cyclically."""
    out: List[Sphere] = []
    for s in states:
        if out and out[-1] == s:
            continue
        if len(out) >= 2 and out[-2] == s:
            out.pop()
            continue
        out.append(s)
    while out:
        if len(out) >= 2 and out[-1] == out[0]:
            out.pop()
        elif len(out) == 2:
            out = []
        elif len(out) >= 3 and out[-1] == out[1]:
            out = out[2:]  # backtrack through out[0]
        elif len(out) >= 3 and out[-2] == out[0]:
            out = out[:-2]  # backtrack through out[-1]
        else:
            break
    return out


def decompose(states: Sequence[Sphere]) -> Decomposition:
    return Decomposer().decompose(states)


def evaluate_cycle(states: Sequence[Sphere]) -> Fraction:
    return decompose(states).value


# ---- certificates -----------------------------------------------------------

def _key(S: Sphere) -> Tuple:
    return tuple(sorted(S.tris))


def edge_multiset(states: Sequence[Sphere]) -> Counter:
    """Signed multiset of the directed edges of a cycle; an edge and its
    reversal cancel."""
    out: Counter = Counter()
    n = len(states)
    for i in range(n):
        a, b = _key(states[i]), _key(states[(i + 1) % n])
        if a < b:
            out[(a, b)] += 1
        else:
            out[(b, a)] -= 1
    return Counter({k: v for k, v in out.items() if v})


def certificate_holds(states: Sequence[Sphere], dec: Decomposition) -> bool:
    """The cycle equals the sum of its elementary pieces and the residual."""
    total: Counter = Counter()
    for e in dec.elementary:
        total.update(edge_multiset(e.states))
    total.update(edge_multiset(dec.residual))
    want = edge_multiset(states)
    total = Counter({k: v for k, v in total.items() if v})
    diff = {k: want.get(k, 0) - total.get(k, 0) for k in set(want) | set(total)}
    return all(v == 0 for v in diff.values())


def validate_cycle(states: Sequence[Sphere]) -> None:
    """Every consecutive pair (cyclically) must be one bistellar move apart."""
    try:
        cycle_moves(states)
    except NotApplicable as exc:
        raise NotACycle(str(exc)) from None


# ---- closing induced chains ---------------------------------------------------

def close_cycle(path: Sequence[Sphere]) -> List[Sphere]:
    """Close a path of labeled 2-spheres: follow the canonical reduction of
    its last sphere, bridge the two tetrahedron boundaries by relabeling
    moves, and climb back along the canonical reduction of its first sphere.
    Immediate returns are cancelled."""
    from .reducer import canonical_kappa, relabel_chain

    if not path:
        return []
    k_end = canonical_kappa(path[-1])
    k_start = canonical_kappa(path[0])
    bridge = relabel_chain(k_end[-1], k_start[-1])
    loop = list(path) + k_end[1:] + bridge[1:] + k_start[::-1][1:]
    return cancel_backtracks(loop[:-1])
