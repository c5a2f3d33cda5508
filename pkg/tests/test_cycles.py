import json
import random
from fractions import Fraction

import pytest

from helpers import DATA, random_2sphere, random_cycle, random_walk
from oracles import rotation_value
from pontryagin.bistellar import Sphere, tetrahedron
from pontryagin.cycles import (
    KINDS,
    Decomposer,
    NotACycle,
    UnknownKind,
    cancel_backtracks,
    certificate_holds,
    classify,
    close_cycle,
    decompose,
    evaluate_cycle,
    omega,
    rho,
    table_value,
    validate_cycle,
)

GOLDEN = json.loads((DATA / "elementary_cycles.json").read_text())


def _states(kind):
    return [Sphere(tuple(t) for t in tris) for tris in GOLDEN[kind]["states"]]


def _relabel(states, rng):
    vs = sorted({v for S in states for v in S.vertices})
    phi = dict(zip(vs, rng.sample(range(1, 10 * len(vs)), len(vs))))
    return [S.relabel(phi) for S in states]


def _rho_direct(p, q):
    n = p + q
    return Fraction(q - p) / ((n + 2) * (n + 3) * (n + 4))


def test_rho_and_omega_exact():
    assert rho(0, 1) == Fraction(1, 60)
    assert omega(0) == Fraction(1, 6)
    assert omega(1) == Fraction(1, 12)
    for p in range(21):
        assert omega(p) == Fraction(1, p + 2) - Fraction(1, p + 3)
        for q in range(21):
            assert rho(p, q) == _rho_direct(p, q)
            assert rho(p, q) == -rho(q, p)


def test_table_rows():
    assert table_value("1a", ()) == table_value("1d", ()) == table_value("1g", ()) == 0
    for k in ("1b", "1e", "1h"):
        assert table_value(k, (1, 2)) == rho(1, 2)
    assert table_value("1c", (2, 3)) == rho(0, 3) - rho(0, 2)
    assert table_value("1i", (2, 3)) == rho(0, 3) - rho(0, 2)
    assert table_value("1f", (1, 1)) == 2 * rho(0, 1)
    assert table_value("2a", (3, 3, 3)) == omega(3) - Fraction(1, 12)
    assert table_value("2b", (2, 3, 3, 3)) == omega(2) - omega(3)
    assert table_value("2c", (2, 2, 2, 2, 2)) == 5 * omega(2) - Fraction(1, 12)
    with pytest.raises(UnknownKind):
        table_value("3z", ())


@pytest.mark.parametrize("kind", KINDS)
def test_golden_elementary_cycles(kind):
    states = _states(kind)
    g = GOLDEN[kind]
    e = classify(states)
    assert e.kind == kind
    assert list(e.params) == g["params"]
    assert e.multiplicity == g["multiplicity"]
    assert e.value == rotation_value(states)
    if kind not in ("1a", "1d", "1g"):
        assert e.value != 0
    rev = classify(states[::-1])
    assert rev.kind == kind and rev.value == -e.value
    rng = random.Random(kind)
    assert classify(_relabel(states, rng)).value == e.value
    assert classify([S.reversed() for S in states]).value == -e.value
    assert evaluate_cycle(states) == e.value


def test_classify_agrees_with_rotation_oracle():
    rng = random.Random(31)
    seen = set()
    checked = 0
    for _ in range(300):
        for e in decompose(random_cycle(rng)).elementary:
            assert e.value == rotation_value(list(e.states)), e
            seen.add(e.kind)
            checked += 1
    assert checked > 1000
    assert len(seen) >= 10


def test_not_an_elementary_cycle():
    S = tetrahedron(1, 2, 3, 4)
    path = [S, S.insert((1, 2, 3), 5), S.insert((1, 2, 3), 5).insert((1, 2, 5), 6)]
    with pytest.raises(NotACycle):
        classify(path)
    with pytest.raises(NotACycle):
        validate_cycle([S, S.insert((1, 2, 3), 5).insert((1, 2, 5), 6)])


def test_certificate_on_random_cycles():
    rng = random.Random(32)
    for _ in range(1000):
        c = random_cycle(rng)
        dec = decompose(c)
        assert certificate_holds(c, dec)
        assert all(S.nvertices() <= 5 for S in dec.residual)


def test_decomposition_order_independence():
    rng = random.Random(33)
    for _ in range(150):
        c = random_cycle(rng)
        v = evaluate_cycle(c)
        for k in range(3):
            dec = Decomposer(rng=random.Random(k)).decompose(c)
            assert certificate_holds(c, dec)
            assert dec.value == v


def test_additivity_at_shared_base_point():
    rng = random.Random(34)
    for _ in range(60):
        S = random_2sphere(rng, rng.randint(5, 9), 10)
        c1 = close_cycle(random_walk(rng, S, rng.randint(1, 8)))
        c2 = close_cycle(random_walk(rng, S, rng.randint(1, 8)))
        if not c1 or not c2 or c1[0] != S or c2[0] != S:
            continue
        joined = cancel_backtracks(c1 + c2)
        assert evaluate_cycle(joined) == evaluate_cycle(c1) + evaluate_cycle(c2)


def test_reversal_relabeling_and_orientation():
    rng = random.Random(35)
    nonzero = 0
    for _ in range(150):
        c = random_cycle(rng)
        v = evaluate_cycle(c)
        nonzero += v != 0
        assert evaluate_cycle(c[::-1]) == -v
        assert evaluate_cycle(_relabel(c, rng)) == v
        assert evaluate_cycle([S.reversed() for S in c]) == -v
    assert nonzero > 50


def test_close_cycle():
    S = tetrahedron(1, 2, 3, 4)
    T = S.insert((1, 2, 3), 5)
    assert cancel_backtracks([S, T]) == []
    assert close_cycle([S]) == []
    assert close_cycle([]) == []
    there_and_back = close_cycle([S, T])
    validate_cycle(there_and_back)
    assert evaluate_cycle(there_and_back) == 0
    rng = random.Random(36)
    for _ in range(50):
        c = random_cycle(rng)
        validate_cycle(c)
