"""Small named complexes used by the tests, the CLI and the acceptance run."""
import random

from .complexes import CubicalComplex, SimplicialComplex, relative_cone
from .folding import Folding


# -- cubical ---------------------------------------------------------------------

def _square(a, b, c, d):
    # a=(0,0), b=(1,0), c=(0,1), d=(1,1) in binary-index order
    return (a, b, c, d)


def grid(m, n):
    """``m`` by ``n`` grid of unit squares; vertex ids are ``(i, j)``."""
    return CubicalComplex(
        _square((i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1))
        for i in range(m) for j in range(n))


def grid_folding(m, n):
    return Folding(2, {(i, j): (i % 2, j % 2) for i in range(m + 1) for j in range(n + 1)})


def single_square():
    return grid(1, 1)


def strip():
    """Two squares side by side."""
    return grid(2, 1)


def torus_grid(m, n):
    """``m`` by ``n`` grid with opposite sides identified (needs ``m, n >= 3``)."""
    return CubicalComplex(
        _square((i, j), ((i + 1) % m, j), (i, (j + 1) % n), ((i + 1) % m, (j + 1) % n))
        for i in range(m) for j in range(n))


def torus_folding(m, n):
    if m % 2 or n % 2:
        raise ValueError("only even torus grids fold")
    return Folding(2, {(i, j): (i % 2, j % 2) for i in range(m) for j in range(n)})


def grid3d(a, b, c):
    cubes = []
    for i in range(a):
        for j in range(b):
            for k in range(c):
                cubes.append(tuple((i + (t & 1), j + ((t >> 1) & 1), k + ((t >> 2) & 1))
                                   for t in range(8)))
    return CubicalComplex(cubes)


def cube_boundary():
    """The six squares bounding the 3-cube; vertex ids are bit triples."""
    squares = []
    for axis in range(3):
        for side in (0, 1):
            free = [i for i in range(3) if i != axis]
            verts = []
            for t in range(4):
                v = [0, 0, 0]
                v[axis] = side
                v[free[0]] = t & 1
                v[free[1]] = (t >> 1) & 1
                verts.append(tuple(v))
            squares.append(tuple(verts))
    return CubicalComplex(squares)


def cycle_graph(k):
    """The ``k``-cycle as a 1-dimensional cubical complex on ``0..k-1``."""
    return CubicalComplex((i, (i + 1) % k) for i in range(k))


def cubical_wheel(k):
    """``k`` squares around the centre ``y``; spokes ``s*`` and rim corners ``r*``."""
    return CubicalComplex(
        _square("y", f"s{i}", f"s{(i + 1) % k}", f"r{i}") for i in range(k))


def random_grid_complex(rng, max_side=4, dim=2):
    """A random nonempty set of unit cubes from a small grid, with its folding."""
    if isinstance(rng, int):
        rng = random.Random(rng)
    sides = [rng.randint(1, max_side) for _ in range(dim)]
    cells = []

    def rec(prefix):
        if len(prefix) == dim:
            cells.append(tuple(prefix))
            return
        for x in range(sides[len(prefix)]):
            rec(prefix + [x])

    rec([])
    keep = [c for c in cells if rng.random() < 0.7] or [cells[0]]
    cubes = [tuple(tuple(c[i] + ((t >> i) & 1) for i in range(dim)) for t in range(2 ** dim))
             for c in keep]
    X = CubicalComplex(cubes)
    F = Folding(dim, {v: tuple(x % 2 for x in v) for v in X.vertices})
    return X, F


# -- simplicial --------------------------------------------------------------------

def simplicial_cycle(k):
    return SimplicialComplex((i, (i + 1) % k) for i in range(k))


def path(k):
    return SimplicialComplex((i, i + 1) for i in range(k))


def single_triangle():
    return SimplicialComplex([("a", "b", "c")])


def two_triangles_at_vertex():
    return SimplicialComplex([("a", "b", "c"), ("a", "d", "e")])


def tetrahedron_boundary():
    return SimplicialComplex([s for s in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]])


def octahedron():
    poles = [("n", "s"), ("e", "w"), ("f", "b")]
    return SimplicialComplex((x, y, z) for x in poles[0] for y in poles[1] for z in poles[2])


def annulus(k):
    """Triangulated annulus with inner circle ``a*`` and outer circle ``b*``."""
    tris = []
    for i in range(k):
        j = (i + 1) % k
        tris.append((f"a{i}", f"a{j}", f"b{i}"))
        tris.append((f"a{j}", f"b{i}", f"b{j}"))
    return SimplicialComplex(tris)


def annulus_boundary(k):
    return [(f"a{i}", f"a{(i + 1) % k}") for i in range(k)] + \
           [(f"b{i}", f"b{(i + 1) % k}") for i in range(k)]


def coned_annulus(k):
    return relative_cone(annulus(k), annulus_boundary(k))


def cone_over_cycle(k, apex="y"):
    return SimplicialComplex((apex, f"c{i}", f"c{(i + 1) % k}") for i in range(k))


def suspension_of_cycle(k):
    """Two cone points ``n`` and ``s`` over a ``k``-cycle: a 2-sphere."""
    return SimplicialComplex((p, f"c{i}", f"c{(i + 1) % k}") for p in ("n", "s") for i in range(k))


def theta_graph():
    return SimplicialComplex([("a", "x1"), ("x1", "b"), ("a", "x2"), ("x2", "b"),
                              ("a", "x3"), ("x3", "b")])


def random_simplicial_complex(rng, dim, n_vertices=None, n_simplices=None):
    """Random pure complex: a union of ``dim``-simplices on a small vertex set."""
    if isinstance(rng, int):
        rng = random.Random(rng)
    n_vertices = n_vertices or rng.randint(dim + 1, dim + 5)
    n_simplices = n_simplices or rng.randint(1, 6)
    verts = list(range(n_vertices))
    simplices = {tuple(sorted(rng.sample(verts, dim + 1))) for _ in range(n_simplices)}
    return SimplicialComplex(simplices)
