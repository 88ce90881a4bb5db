import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from cubulate import fixtures as fx
from cubulate.errors import InvalidFolding, UnknownVertex
from cubulate.folding import Folding
from cubulate.strata import (
    complement_components,
    framings,
    local_mirror_count,
    mirror_structure_check,
    mirrors,
    separation_check,
    stratify,
)

seeds = st.integers(min_value=0, max_value=10 ** 6)


def test_square_cells_are_its_faces():
    S = stratify(fx.single_square(), fx.grid_folding(1, 1))
    assert S.cell_counts() == (4, 4, 1)
    assert len(S.tiles) == 1
    assert len(S.mirrors) == 4


def test_cell_ids_sorted_by_dimension():
    S = stratify(fx.grid(2, 2), fx.grid_folding(2, 2))
    dims = [s.dim for s in S.cells]
    assert dims == sorted(dims)
    assert [s.id for s in S.cells] == list(range(len(S.cells)))


def test_poset_is_codimension_one_incidence():
    S = stratify(fx.grid(2, 2), fx.grid_folding(2, 2))
    X = S.complex
    for lo, hi in S.poset:
        assert S.cells[hi].dim == S.cells[lo].dim + 1
        assert S.cells[lo].cube in X.faces(S.cells[hi].cube)
    assert len(S.poset) == 2 * 12 + 4 * 4


def test_grid_mirrors():
    fams = mirrors(fx.grid(2, 2), fx.grid_folding(2, 2))
    assert {k: len(v) for k, v in fams.items()} == {(0, 0): 2, (0, 1): 1, (1, 0): 2, (1, 1): 1}
    centre = fams[(0, 1)][0]
    assert len(centre.vertices) == 3


def test_mirror_repr_is_short():
    fams = mirrors(fx.grid(2, 2), fx.grid_folding(2, 2))
    assert "carrier" not in repr(fams[(0, 1)][0])


def test_invalid_folding_rejected():
    bad = Folding(2, {v: (0, 0) for v in fx.single_square().vertices})
    with pytest.raises(InvalidFolding):
        stratify(fx.single_square(), bad)


def test_local_mirror_count():
    X, F = fx.grid(2, 2), fx.grid_folding(2, 2)
    assert local_mirror_count(X, F, (1, 1)) == 2
    assert local_mirror_count(X, F, (0, 0)) == 2
    with pytest.raises(UnknownVertex):
        local_mirror_count(X, F, (9, 9))


def test_grid_mirrors_separate():
    X, F = fx.grid(3, 3), fx.grid_folding(3, 3)
    for M in stratify(X, F).mirrors:
        assert separation_check(X, F, M).passed


def test_framings_of_central_mirror():
    X, F = fx.grid(2, 2), fx.grid_folding(2, 2)
    M = mirrors(X, F)[(0, 1)][0]
    assert len(framings(X, M)) == 2


def test_torus_has_a_non_separating_mirror():
    X, F = fx.torus_grid(4, 4), fx.torus_folding(4, 4)
    reports = [separation_check(X, F, M) for M in stratify(X, F).mirrors]
    failing = [r for r in reports if r.failed]
    assert failing
    assert failing[0].witnesses


def test_complement_components_of_grid():
    X, F = fx.grid(3, 3), fx.grid_folding(3, 3)
    assert len(complement_components(X, F, 0)) == 3


@given(seeds, st.integers(min_value=2, max_value=3))
def test_mirror_structure_on_random_grids(seed, dim):
    X, F = fx.random_grid_complex(random.Random(seed), dim=dim, max_side=3)
    assert mirror_structure_check(X, F).passed
    for v in X.vertices:
        assert local_mirror_count(X, F, v) <= dim


@given(seeds)
def test_mirror_count_matches_coordinate_oracle(seed):
    rng = random.Random(seed)
    X, F = fx.random_grid_complex(rng, dim=2)
    corners = [tuple(min(v[i] for v in c) for i in range(2)) for c in X.cells(2)]
    fams = mirrors(X, F)
    assert sum(len(v) for v in fams.values()) == oracles.grid_mirror_count(corners, 2)


@given(seeds)
def test_strata_partition_the_complex(seed):
    X, F = fx.random_grid_complex(random.Random(seed), dim=2)
    S = stratify(X, F)
    assert sum(len(s.carrier) for s in S.cells) == len(X.cells())
    assert set(S.cell_of) == set(X.cells())
