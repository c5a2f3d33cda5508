import random
import time
from fractions import Fraction

import pytest

from helpers import cp2_9, random_sphere_complex
from pontryagin.bistellar import BistellarMove, apply_move
from pontryagin.builders import build_boundary_simplex, octahedron
from pontryagin.complex import orient
from pontryagin.homology import RankMismatch
from pontryagin.pipeline import (
    LinkFailure,
    VertexNeverPresent,
    class_coefficient,
    induce_chain,
    local_formula_value,
    pontryagin_cycle,
    run,
    total_weight,
    verify_is_cycle,
)
from pontryagin.reducer import reduce_3sphere


def _relabeled(K, rng):
    vs = sorted(K.complex.vertices)
    return K.relabel(dict(zip(vs, rng.sample(range(1, 5 * len(vs)), len(vs)))))


def test_boundary_of_4_simplex_has_value_zero():
    r = local_formula_value(orient(build_boundary_simplex(3)))
    assert r.value == 0 and len(r.chain) == 0


def test_zero_move_and_inverse_elsewhere_is_label_independent():
    rng = random.Random(40)
    L = orient(build_boundary_simplex(3))
    L6 = apply_move(L, BistellarMove((1, 2, 3, 4), ()), 6)
    L5 = apply_move(L6, BistellarMove((5,), (1, 2, 3, 4)))
    for M in (L6, L5):
        values = {local_formula_value(_relabeled(M, rng), seed=k).value for k in range(10)}
        assert values == {Fraction(0)}


def test_local_value_is_orientation_odd():
    rng = random.Random(41)
    nonzero = 0
    for _ in range(12):
        L = random_sphere_complex(rng, 3, rng.randint(5, 25))
        v = local_formula_value(L).value
        nonzero += v != 0
        assert local_formula_value(L.reversed()).value == -v
    assert nonzero


def test_induce_chain():
    L = orient(build_boundary_simplex(3))
    L6 = apply_move(L, BistellarMove((1, 2, 3, 4), ()), 6)
    chain = reduce_3sphere(L6)
    removed = chain.moves[0].sigma[0]
    assert len(induce_chain(chain, removed)) == 1
    assert len(induce_chain(chain, 1)) == 2
    with pytest.raises(VertexNeverPresent):
        induce_chain(chain, 99)


def test_boundary_of_9_simplex_gives_zero_quickly():
    t0 = time.perf_counter()
    doc, res = run(build_boundary_simplex(8))
    assert time.perf_counter() - t0 < 60
    assert res.chain == {}
    assert doc["is_cycle"] and doc["class_coefficient"] == [0, 1]


def test_boundary_of_5_simplex_gives_zero():
    doc, res = run(build_boundary_simplex(4))
    assert res.chain == {}
    assert doc["class_coefficient"] == [0, 1]


def test_random_4_spheres_have_total_weight_zero():
    rng = random.Random(42)
    nonzero = 0
    for _ in range(3):
        K = random_sphere_complex(rng, 4, 25)
        ch = pontryagin_cycle(K).chain
        nonzero += bool(ch)
        assert total_weight(ch) == 0
    assert nonzero


def test_random_5_spheres_give_cycles():
    rng = random.Random(43)
    for _ in range(2):
        K = random_sphere_complex(rng, 5, 20)
        ch = pontryagin_cycle(K).chain
        assert verify_is_cycle(ch, K.complex)


def test_projective_plane_signature_three():
    rng = random.Random(44)
    K = orient(cp2_9())
    base = pontryagin_cycle(K).chain
    assert total_weight(base) in (3, -3)
    assert set(base.values()) == {total_weight(base) / 9}
    for k in range(5):
        R = _relabeled(K, rng)
        for sign, M in ((1, R), (-1, R.reversed())):
            w = total_weight(pontryagin_cycle(M, seed=k).chain)
            assert w == sign * total_weight(base)


def test_verify_is_cycle_and_class_coefficient():
    O = orient(octahedron())
    ch = {f: Fraction(s, 2) for f, s in O.signs.items()}
    assert verify_is_cycle(ch)
    assert abs(class_coefficient(ch, O.complex, k=2)) == Fraction(1, 2)
    broken = dict(ch)
    broken.pop(next(iter(broken)))
    assert not verify_is_cycle(broken)
    assert verify_is_cycle({(1,): Fraction(3)})
    with pytest.raises(RankMismatch):
        class_coefficient(ch, O.complex, k=1)


def test_deterministic_replay():
    rng = random.Random(45)
    K = random_sphere_complex(rng, 4, 20)
    a = pontryagin_cycle(K, seed=7, keep=True)
    b = pontryagin_cycle(K, seed=7, keep=True)
    assert a.chain == b.chain and a.traces == b.traces


def test_parallel_matches_serial():
    K = orient(cp2_9())
    assert pontryagin_cycle(K, jobs=2).chain == pontryagin_cycle(K, jobs=1).chain


def test_link_failure_names_the_simplex(monkeypatch):
    from pontryagin import pipeline
    from pontryagin.reducer import ReductionStalled

    real = pipeline.reduce_3sphere

    def stalling(L, seed=0):
        if 5 not in L.complex.vertices:
            raise ReductionStalled("budget exhausted")
        return real(L, seed=seed)

    monkeypatch.setattr(pipeline, "reduce_3sphere", stalling)
    K = orient(cp2_9())
    with pytest.raises(LinkFailure) as info:
        pontryagin_cycle(K)
    # every vertex is adjacent to 5, so only the link of 5 itself fails
    assert list(info.value.failures) == [(5,)]
    assert "budget exhausted" in info.value.failures[(5,)]
    with pytest.raises(ValueError):
        pontryagin_cycle(orient(build_boundary_simplex(3)))
