import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubulate import fixtures as fx
from cubulate.complexes import (
    CubicalComplex,
    MarkedComplex,
    SimplicialComplex,
    admissibility_check,
    barycentric_subdivision,
    boundary_cells,
    cube_dim,
    cubify,
    is_isomorphic,
    link,
    non_top_maximal_cells,
    relative_cone,
)
from cubulate.errors import (
    DuplicateVertexInCell,
    NotACellComplex,
    NotASubcomplex,
    UnknownCell,
)

seeds = st.integers(min_value=0, max_value=10 ** 6)


def test_simplex_closure_and_f_vector():
    K = fx.single_triangle()
    assert K.f_vector == (3, 3, 1)
    assert K.euler_characteristic() == 1
    assert K.cell(("c", "a", "b")) == ("a", "b", "c")


def test_cube_canonical_form_is_symmetry_invariant():
    X = fx.single_square()
    sq = X.cells(2)[0]
    a, b, c, d = sq
    # binary-index order: a=00, b=10, c=01, d=11; all 8 symmetries give the same cell
    for t in [(a, b, c, d), (b, a, d, c), (c, d, a, b), (a, c, b, d), (d, b, c, a)]:
        assert X.cell(t) == sq


def test_square_vertex_order_matters():
    X = fx.single_square()
    a, b, c, d = X.cells(2)[0]
    with pytest.raises(UnknownCell):
        X.cell((a, d, b, c))


def test_duplicate_vertex_rejected():
    with pytest.raises(DuplicateVertexInCell):
        SimplicialComplex([("a", "a", "b")])
    with pytest.raises(DuplicateVertexInCell):
        CubicalComplex([("a", "b", "a", "c")])


def test_cubes_must_meet_in_faces():
    with pytest.raises(NotACellComplex):
        CubicalComplex([("a", "b", "c", "d"), ("a", "x", "y", "d")])


def test_cube_dim():
    assert [cube_dim(k) for k in (1, 2, 4, 8)] == [0, 1, 2, 3]


def test_faces_and_cofaces():
    X = fx.grid(2, 2)
    centre = X.cell(((1, 1),))
    assert len(X.cofacets(centre)) == 4
    assert len(X.cofaces(centre)) == 1 + 4 + 4
    sq = X.cells(2)[0]
    assert len(X.faces(sq)) == 9


def test_grid_euler_characteristic():
    for m, n in [(1, 1), (2, 3), (4, 4)]:
        assert fx.grid(m, n).euler_characteristic() == 1
    assert fx.torus_grid(4, 4).euler_characteristic() == 0
    assert fx.cube_boundary().euler_characteristic() == 2


def test_link_of_vertex_in_octahedron_is_square():
    K = fx.octahedron()
    L = link(K, (K.vertices[0],))
    assert L.f_vector == (4, 4)


def test_boundary_and_homogeneity():
    assert boundary_cells(fx.single_triangle())
    assert not boundary_cells(fx.octahedron())
    K = SimplicialComplex([("a", "b", "c"), ("c", "d")])
    assert non_top_maximal_cells(K) == [("c", "d")]


def test_annulus_with_both_circles_coned_is_admissible():
    K = fx.annulus(4)
    rep = admissibility_check(K, fx.annulus_boundary(4))
    assert rep.passed
    assert rep.counts["cone_points"] == 2
    assert rep.counts["euler_characteristic"] == 2


def test_single_triangle_is_not_admissible():
    rep = admissibility_check(fx.single_triangle())
    assert rep.failed
    bd = next(c for c in rep.children if c.check == "without_boundary")
    assert len(bd.witnesses[0]) == 2


def test_relative_cone_rejects_foreign_simplex():
    with pytest.raises(NotASubcomplex):
        relative_cone(fx.single_triangle(), [("a", "z")])


def test_marked_complex_from_cone_points():
    m = MarkedComplex.from_cone_points(fx.cone_over_cycle(6), ["y"])
    assert m.verify() == []
    assert m.cone_links["y"].f_vector == (6, 6)
    assert m.punctured().f_vector == (6, 6)


def test_cubify_preserves_euler_characteristic():
    K = fx.octahedron()
    X = cubify(K)
    assert X.dim == 2
    assert X.euler_characteristic() == K.euler_characteristic()
    assert X.f_vector[2] == 3 * K.f_vector[2]


@given(seeds, st.integers(min_value=1, max_value=3))
def test_barycentric_subdivision_preserves_euler_characteristic(seed, dim):
    K = fx.random_simplicial_complex(random.Random(seed), dim)
    B = barycentric_subdivision(K)
    assert B.euler_characteristic() == K.euler_characteristic()
    assert B.f_vector[0] == len(K.cells())
    assert B.dim == K.dim


@given(seeds, st.integers(min_value=1, max_value=3))
def test_link_dimension(seed, dim):
    K = fx.random_simplicial_complex(random.Random(seed), dim)
    for c in K.cells():
        L = link(K, c)
        if c in K.maximal_cells():
            assert L.dim == -1
        else:
            top = max(len(C) for C in K.cofaces(c)) - 1
            assert L.dim == top - K.cell_dim(c) - 1


@given(seeds, st.integers(min_value=1, max_value=3))
def test_cone_then_puncture_gives_back_the_complex(seed, dim):
    rng = random.Random(seed)
    K = fx.random_simplicial_complex(rng, dim)
    cells = K.cells()
    sub = rng.sample(cells, rng.randint(1, min(4, len(cells))))
    marked = relative_cone(K, sub)
    assert marked.verify() == []
    assert marked.punctured() == K
    assert is_isomorphic(marked.punctured(), K)


@given(seeds)
def test_cube_euler_characteristic_matches_alternating_count(seed):
    X, _ = fx.random_grid_complex(random.Random(seed), dim=3, max_side=3)
    f = X.f_vector
    assert X.euler_characteristic() == sum((-1) ** k * x for k, x in enumerate(f))


def test_relabel_and_isomorphism():
    X = fx.grid(2, 1)
    Y = X.relabel({v: f"v{i}" for i, v in enumerate(X.vertices)})
    assert is_isomorphic(X, Y)
    assert is_isomorphic(X, fx.grid(1, 2))
    assert not is_isomorphic(X, fx.single_square())
