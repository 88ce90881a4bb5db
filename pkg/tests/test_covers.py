import random

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from cubulate import fixtures as fx
from cubulate.complexes import MarkedComplex, SimplicialComplex, is_isomorphic
from cubulate.covers import (
    PermRep,
    branched_cover,
    build_cover,
    deck_transformations,
    format_cycles,
    identity_cover,
    parse_cycles,
    perm_rep_from_edge_labels,
    pi1_presentation,
)
from cubulate.errors import Disconnected, NotTransitive, RelatorNotKilled, UnknownVertex

seeds = st.integers(min_value=0, max_value=10 ** 6)


def torus_rep(m, degree, shift=1):
    """Cyclic voltage on the edges that wrap around in the first coordinate."""
    X = fx.torus_grid(m, m)
    P = pi1_presentation(X)
    perm = tuple((k + shift) % degree for k in range(degree))
    labels = {((m - 1, j), (0, j)): perm for j in range(m)}
    return X, P, perm_rep_from_edge_labels(P, degree, labels)


@pytest.mark.parametrize("X,ab", [
    (fx.cycle_graph(4), "Z"),
    (fx.single_square(), "0"),
    (fx.theta_graph(), "Z + Z"),
    (fx.octahedron(), "0"),
    (fx.annulus(4), "Z"),
    (fx.torus_grid(3, 3), "Z + Z"),
], ids=["cycle4", "square", "theta", "octahedron", "annulus", "torus3x3"])
def test_presentations(X, ab):
    P = pi1_presentation(X)
    # one generator per edge outside the spanning tree, one relator per 2-cell
    assert len(P.generators) == X.f_vector[1] - (X.f_vector[0] - 1)
    assert len(P.relators) == (X.f_vector[2] if X.dim >= 2 else 0)
    assert P.abelianization_string() == ab


def test_square_relator_kills_its_generator():
    P = pi1_presentation(fx.single_square())
    assert P.abelianization() == (0, [])


def test_projective_plane_has_torsion():
    # six-vertex triangulation of the real projective plane
    K = SimplicialComplex([(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
                           (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4)])
    assert pi1_presentation(K).abelianization() == (0, [2])


def test_presentation_errors():
    with pytest.raises(Disconnected):
        pi1_presentation(SimplicialComplex([("a", "b"), ("c", "d")]))
    with pytest.raises(UnknownVertex):
        pi1_presentation(fx.cycle_graph(4), basepoint="zz")


def test_cycle_notation_round_trip():
    perm = parse_cycles("(1 3)(2 4 5)", 6)
    assert perm == (2, 3, 0, 4, 1, 5)
    assert format_cycles(perm) == "(1 3)(2 4 5)"
    assert format_cycles(tuple(range(3))) == "()"
    with pytest.raises(ValueError):
        parse_cycles("(1 7)", 3)
    with pytest.raises(ValueError):
        parse_cycles("(1 2)(2 3)", 3)


def test_rep_checks():
    X = fx.torus_grid(3, 3)
    P = pi1_presentation(X)
    rho = PermRep.from_cycles(3, {name: "(1 2 3)" if i == 0 else "()"
                                  for i, name in enumerate(P.names)})
    with pytest.raises(RelatorNotKilled) as err:
        rho.check(P)
    assert err.value.relator
    with pytest.raises(NotTransitive):
        PermRep.trivial(P, 2).check(P)


def test_four_cycle_triple_cover_is_twelve_cycle():
    X = fx.cycle_graph(4)
    cover = build_cover(X, PermRep.from_cycles(3, {"g1": "(1 2 3)"}))
    assert cover.total.f_vector == (12, 12)
    assert is_isomorphic(cover.total, fx.cycle_graph(12))
    assert cover.verify().passed
    assert len(deck_transformations(cover)) == 3


def test_identity_cover():
    X = fx.grid(2, 2)
    cover = identity_cover(X)
    assert cover.degree == 1
    assert cover.verify().passed


@pytest.mark.parametrize("degree", [2, 3, 4])
def test_torus_cyclic_covers(degree):
    X, P, rho = torus_rep(3, degree)
    rho.check(P)
    cover = build_cover(X, rho, P)
    assert cover.total.f_vector == tuple(degree * x for x in X.f_vector)
    assert cover.total.euler_characteristic() == 0
    assert cover.verify().passed
    assert len(deck_transformations(cover)) == degree


def test_non_regular_cover_has_fewer_deck_transformations():
    X = fx.theta_graph()
    P = pi1_presentation(X)
    rho = PermRep.from_cycles(3, {"g1": "(1 2)", "g2": "(2 3)"})
    cover = build_cover(X, rho, P)
    assert cover.verify().passed
    assert len(deck_transformations(cover)) == 1


def test_branched_cone_over_six_cycle():
    marked = MarkedComplex.from_cone_points(fx.cone_over_cycle(6), ["y"])
    P = pi1_presentation(marked.punctured())
    cover = branched_cover(marked, PermRep.from_cycles(2, {"g1": "(1 2)"}), P)
    assert is_isomorphic(cover.total, fx.cone_over_cycle(12))
    assert cover.total.euler_characteristic() == 1
    assert cover.branch_points == {("y", 1): 2}
    rep = cover.verify()
    assert rep.passed
    assert rep.counts["non_bijective_links"] == 0


def test_branched_suspension_is_a_sphere():
    K = fx.suspension_of_cycle(5)
    marked = MarkedComplex.from_cone_points(K, ["n", "s"])
    P = pi1_presentation(marked.punctured())
    rho = PermRep.from_cycles(2, {name: "(1 2)" for name in P.names})
    cover = branched_cover(marked, rho, P)
    assert cover.total.euler_characteristic() == 2
    assert len(cover.branch_points) == 2
    assert cover.verify().passed


def test_branched_cover_with_unbranched_sheet_split():
    # the trivial rep gives two cone points over y, both with local degree 1
    marked = MarkedComplex.from_cone_points(fx.cone_over_cycle(4), ["y"])
    P = pi1_presentation(marked.punctured())
    rho = PermRep.from_cycles(2, {"g1": "()"})
    with pytest.raises(NotTransitive):
        rho.check(P)


@given(seeds, st.integers(min_value=2, max_value=4))
def test_graph_covers_multiply_euler_characteristic(seed, degree):
    rng = random.Random(seed)
    X = fx.theta_graph() if rng.random() < 0.5 else fx.cycle_graph(rng.randint(3, 7))
    P = pi1_presentation(X)
    perms = {}
    for name in P.names:
        p = list(range(degree))
        rng.shuffle(p)
        perms[name] = tuple(p)
    rho = PermRep(degree, perms)
    assume(rho.is_transitive())
    cover = build_cover(X, rho, P)
    assert cover.total.euler_characteristic() == degree * X.euler_characteristic()
    assert cover.verify().passed
    decks = deck_transformations(cover)
    assert 1 <= len(decks) <= degree and degree % len(decks) == 0


@given(st.integers(min_value=2, max_value=4), st.integers(min_value=1, max_value=3))
def test_torus_covers_multiply_euler_characteristic(degree, shift):
    assume(shift % degree != 0)
    X, P, rho = torus_rep(3, degree, shift)
    assume(rho.is_transitive())
    cover = build_cover(X, rho, P)
    assert cover.total.euler_characteristic() == degree * X.euler_characteristic()
    assert cover.verify().passed
