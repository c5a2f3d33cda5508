import pytest

from pontryagin import builders
from pontryagin.builders import (
    P,
    R,
    S,
    SEEDS,
    build_M8_15,
    compose,
    group_closure,
    inverse,
    extra_block,
    g0_group,
    g1_group,
    is_automorphism,
    orbit,
)


@pytest.fixture(scope="module")
def plain():
    return build_M8_15("plain")


def test_group_orders():
    assert len(g0_group()) == 12
    assert len(g1_group()) == len(set(g1_group()))


def test_seed_orbit_sizes():
    G = g1_group()
    sizes = [len(orbit(G, SEEDS[k])) for k in sorted(SEEDS)]
    assert sizes == [10, 10, 20, 30, 30, 60, 60, 60, 60, 30, 30, 15]
    assert len(builders.common_part()) == 415


def test_extra_blocks_have_fifteen_facets():
    for n in range(1, 6):
        assert len(extra_block(n)) == 15
        assert len(extra_block(n, twisted=True)) == 15


def test_variants_have_490_facets_and_differ_in_one_block(plain):
    tilde = build_M8_15("tilde")
    dtilde = build_M8_15("double_tilde")
    assert len(tilde.facets) == len(dtilde.facets) == 490
    assert plain.facets - tilde.facets == extra_block(1)
    assert tilde.facets - plain.facets == extra_block(1, twisted=True)
    assert len(plain.facets ^ tilde.facets) == 30


def test_symmetry_groups(plain):
    assert all(is_automorphism(plain, g) for g in (P, S, R))
    tilde = build_M8_15("tilde")
    assert is_automorphism(tilde, S) and is_automorphism(tilde, R)
    assert not is_automorphism(tilde, P)
    dtilde = build_M8_15("double_tilde")
    twisted_group = group_closure([compose(P, R, inverse(P)), S])
    assert all(is_automorphism(dtilde, g) for g in twisted_group)
    assert not all(is_automorphism(dtilde, g) for g in g0_group())


def test_group_of_order_sixty():
    assert len(g1_group()) == 60


def test_boundary_simplex_builtin():
    assert len(builders.builtin("boundary_simplex:3").facets) == 4
    assert len(builders.builtin("boundary_simplex:9").facets) == 10
    for bad in ("boundary_simplex:x", "boundary_simplex:0", "no_such_complex"):
        with pytest.raises(builders.UnknownBuiltin):
            builders.builtin(bad)


def test_small_reference_surfaces():
    assert builders.octahedron().f_vector() == [6, 12, 8]
    assert builders.icosahedron().f_vector() == [12, 30, 20]
    assert builders.rp2_six().euler_characteristic() == 1


def test_seed_checksum_is_stable():
    assert builders.seed_checksum() == "df86e58c2990fc6b"
