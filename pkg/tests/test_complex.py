import json

import pytest

from pontryagin.builders import build_boundary_simplex, rp2_six
from pontryagin.complex import (
    ComplexError,
    EmptyInput,
    MixedDimension,
    NonOrientable,
    NotAFace,
    NotPseudomanifold,
    DimensionOutOfRange,
    UnknownVertex,
    build_complex,
    from_document,
    format_facets,
    orient,
    parse_facets,
    permutation_sign,
    to_document,
)


def test_faces_and_f_vector_of_tetrahedron_boundary():
    K = build_boundary_simplex(2)
    assert K.f_vector() == [4, 6, 4]
    assert K.euler_characteristic() == 2
    assert K.is_closed_pseudomanifold()
    assert K.faces(1)[0] == (1, 2)


def test_link_and_degree():
    K = build_boundary_simplex(3)
    L = K.link((1, 2))
    assert sorted(L.facets) == [(3, 4), (3, 5), (4, 5)]
    assert K.vertex_degree(1) == 4
    with pytest.raises(UnknownVertex):
        K.vertex_degree(99)
    with pytest.raises(NotAFace):
        build_boundary_simplex(2).link((1, 2, 3, 4))


def test_construction_errors():
    with pytest.raises(EmptyInput):
        build_complex([])
    with pytest.raises(MixedDimension):
        build_complex([(1, 2, 3), (1, 2)])
    with pytest.raises(ComplexError):
        build_complex([(1, 1, 2)])
    with pytest.raises(EmptyInput):
        parse_facets("# only a comment\n")


def test_orientation_of_tetrahedron_boundary():
    O = orient(build_boundary_simplex(2))
    assert len(O.signs) == 4
    assert O.is_consistent()
    assert O.signs[(1, 2, 3)] == 1
    assert O.reversed().is_consistent()


def test_projective_plane_is_not_orientable():
    with pytest.raises(NonOrientable):
        orient(rp2_six())


def test_open_complex_is_not_a_pseudomanifold():
    with pytest.raises(NotPseudomanifold):
        orient(build_complex([(1, 2, 3), (1, 3, 4)]))


def test_boundary_of_boundary_vanishes():
    K = build_boundary_simplex(4)
    for k in range(2, K.dim + 1):
        assert (K.boundary_matrix(k - 1) @ K.boundary_matrix(k)).is_zero()
    with pytest.raises(DimensionOutOfRange):
        K.boundary_matrix(0)


def test_relabel_preserves_consistency():
    O = orient(build_boundary_simplex(3))
    R = O.relabel({1: 10, 2: 7, 3: 8, 4: 2, 5: 1})
    assert R.is_consistent()


def test_induced_link_orientation_is_consistent():
    O = orient(build_boundary_simplex(4))
    for s in [(1,), (2, 5), (1, 3, 4)]:
        assert O.link(s).is_consistent()


def test_permutation_sign():
    assert permutation_sign([1, 2, 3]) == 1
    assert permutation_sign([2, 1, 3]) == -1
    assert permutation_sign([3, 1, 2]) == 1


def test_text_and_json_round_trip():
    K = build_boundary_simplex(3)
    assert parse_facets(format_facets(K, header="demo")) == K
    doc = to_document(K)
    assert json.loads(doc)["dimension"] == 3
    assert from_document(doc) == K
