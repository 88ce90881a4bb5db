"""Finite abstract simplicial and cubical complexes.

Cells are tuples of vertex ids.  A simplex is stored as its vertices sorted by
:func:`sort_key`; a ``k``-cube is a tuple of ``2**k`` vertices where position
``j`` holds the vertex whose binary coordinates are the bits of ``j`` (bit ``i``
is coordinate ``i``).  Cube tuples are kept in canonical form: the
lexicographically least tuple over the symmetry group of the cube.  A vertex is
the 1-tuple ``(v,)`` in both kinds of complex.

Complexes are immutable once built; every operation returns a new value.
"""
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations

import networkx as nx

from ._order import sort_key, sorted_ids
from .errors import (
    DuplicateVertexInCell,
    NotACellComplex,
    NotASubcomplex,
    UnknownCell,
)
from .report import FAIL, PASS, Report


def _cell_key(c):
    return (len(c), tuple(sort_key(v) for v in c))


class CellComplex:
    """Shared machinery for the two kinds of complex.

    Subclasses supply ``canonical``, ``cell_dim`` and ``_raw_facets``.
    """

    kind = None

    def __init__(self, cells=(), _closed=False):
        if _closed:
            closed = frozenset(cells)
        else:
            closed = self._close(self.canonical(c) for c in cells)
        self._cells = closed
        self._facets = {c: self._facet_tuple(c) for c in closed}
        by_dim = defaultdict(list)
        for c in closed:
            by_dim[self.cell_dim(c)].append(c)
        self._by_dim = {d: tuple(sorted(cs, key=_cell_key)) for d, cs in by_dim.items()}
        self.dim = max(by_dim) if by_dim else -1
        self.vertices = tuple(sorted_ids(c[0] for c in self._by_dim.get(0, ())))
        self._by_vertex_set = {}
        for c in closed:
            self._by_vertex_set.setdefault(frozenset(c), c)
        self._faces = {}
        self._cofaces = None
        self._cofacets = None
        if not _closed:
            self._validate()

    # -- construction helpers -------------------------------------------------
    def _facet_tuple(self, c):
        return tuple(sorted({self.canonical(f) for f in self._raw_facets(c)}, key=_cell_key))

    def _close(self, cells):
        seen = set()
        stack = list(cells)
        while stack:
            c = stack.pop()
            if c in seen:
                continue
            seen.add(c)
            stack.extend(self.canonical(f) for f in self._raw_facets(c))
        return frozenset(seen)

    def _validate(self):
        pass

    @classmethod
    def _from_closed(cls, cells, **kw):
        obj = cls.__new__(cls)
        obj._init_extra(**kw)
        CellComplex.__init__(obj, cells, _closed=True)
        return obj

    def _init_extra(self, **kw):
        pass

    # -- queries ----------------------------------------------------------------
    def __contains__(self, c):
        try:
            return self.canonical(tuple(c)) in self._cells
        except Exception:
            return False

    def __len__(self):
        return len(self._cells)

    def __eq__(self, other):
        return type(self) is type(other) and self._cells == other._cells

    def __hash__(self):
        return hash((self.kind, self._cells))

    def __repr__(self):
        return f"{type(self).__name__}(f={self.f_vector})"

    def cell(self, c):
        """Canonical form of ``c``; raises :class:`UnknownCell` if absent."""
        if not isinstance(c, tuple):
            c = (c,)
        try:
            cc = self.canonical(c)
        except DuplicateVertexInCell:
            raise UnknownCell(c) from None
        if cc not in self._cells:
            raise UnknownCell(c)
        return cc

    def cells(self, dim=None):
        if dim is None:
            return [c for d in sorted(self._by_dim) for c in self._by_dim[d]]
        return list(self._by_dim.get(dim, ()))

    def cell_by_vertices(self, vertices):
        return self._by_vertex_set.get(frozenset(vertices))

    @property
    def f_vector(self):
        return tuple(len(self._by_dim.get(d, ())) for d in range(self.dim + 1))

    def facets(self, c):
        return self._facets[c]

    def faces(self, c):
        """All faces of ``c``, including ``c`` itself."""
        got = self._faces.get(c)
        if got is None:
            out = {c}
            for f in self._facets[c]:
                out |= self.faces(f)
            got = self._faces[c] = frozenset(out)
        return got

    def _build_co(self):
        cofaces = defaultdict(set)
        cofacets = defaultdict(set)
        for c in self._cells:
            for f in self.faces(c):
                cofaces[f].add(c)
            for f in self._facets[c]:
                cofacets[f].add(c)
        self._cofaces = {c: frozenset(cofaces[c]) for c in self._cells}
        self._cofacets = {c: tuple(sorted(cofacets[c], key=_cell_key)) for c in self._cells}

    def cofaces(self, c):
        """All cells containing ``c``, including ``c`` itself."""
        if self._cofaces is None:
            self._build_co()
        return self._cofaces[c]

    def cofacets(self, c):
        if self._cofacets is None:
            self._build_co()
        return self._cofacets[c]

    def maximal_cells(self):
        return [c for c in self.cells() if len(self.cofaces(c)) == 1]

    def edges(self):
        return self.cells(1)

    def neighbors(self, v):
        """Vertices joined to ``v`` by an edge, sorted."""
        out = set()
        for e in self.cofacets((v,)):
            out.update(x for x in e if x != v)
        return sorted_ids(out)

    def graph(self):
        """The 1-skeleton as a :class:`networkx.Graph`."""
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        for e in self.edges():
            a, b = (e[0], e[-1]) if self.kind == "cubical" else e
            g.add_edge(a, b)
        return g

    def is_connected(self):
        return len(self.vertices) <= 1 or nx.is_connected(self.graph())

    def euler_characteristic(self):
        return sum((-1) ** d * n for d, n in enumerate(self.f_vector))

    # -- derived complexes ------------------------------------------------------
    def subcomplex(self, cells):
        """Closure of ``cells``, which must belong to this complex."""
        keep = set()
        for c in cells:
            cc = self.canonical(tuple(c))
            if cc not in self._cells:
                raise NotASubcomplex(f"{c} is not a cell")
            keep |= self.faces(cc)
        return self._derive(keep)

    def full_subcomplex(self, vertices):
        vs = set(vertices)
        return self._derive(c for c in self._cells if vs.issuperset(c))

    def without_open_stars(self, vertices):
        vs = set(vertices)
        return self._derive(c for c in self._cells if vs.isdisjoint(c))

    def relabel(self, mapping):
        """Rename vertices; ``mapping`` must be injective on the vertex set."""
        if len({mapping[v] for v in self.vertices}) != len(self.vertices):
            raise ValueError("relabelling is not injective")
        return type(self)([tuple(mapping[v] for v in c) for c in self.maximal_cells()])

    def _derive(self, cells):
        return type(self)._from_closed(cells)


class SimplicialComplex(CellComplex):
    kind = "simplicial"

    def __init__(self, simplices=(), grading=None):
        self._init_extra(grading=grading)
        super().__init__([tuple(s) for s in simplices])

    def _init_extra(self, grading=None):
        # vertex -> dimension of the cell it subdivides (barycentric output only)
        self.grading = dict(grading) if grading else None

    @staticmethod
    def canonical(t):
        if len(set(t)) != len(t):
            raise DuplicateVertexInCell(f"simplex {t!r} repeats a vertex")
        return tuple(sorted(t, key=sort_key))

    @staticmethod
    def cell_dim(c):
        return len(c) - 1

    @staticmethod
    def _raw_facets(c):
        if len(c) < 2:
            return ()
        return [c[:i] + c[i + 1:] for i in range(len(c))]

    @property
    def simplices(self):
        return self.cells()


@lru_cache(maxsize=None)
def _cube_symmetries(k):
    """Index maps ``j -> phi(j)`` for every symmetry of the ``k``-cube."""
    maps = []
    for perm in permutations(range(k)):
        for mask in range(2 ** k):
            m = []
            for j in range(2 ** k):
                src = 0
                for i in range(k):
                    if (j >> i) & 1:
                        src |= 1 << perm[i]
                m.append(src ^ mask)
            maps.append(tuple(m))
    return tuple(maps)


def cube_dim(n_vertices):
    k = n_vertices.bit_length() - 1
    if n_vertices < 1 or 2 ** k != n_vertices:
        raise NotACellComplex(f"cube with {n_vertices} vertices: not a power of two")
    return k


def cube_edges(k):
    """Pairs of tuple positions joined by an edge in the standard ``k``-cube."""
    return [(j, j | (1 << i)) for j in range(2 ** k) for i in range(k) if not (j >> i) & 1]


def cube_face_positions(k, fixed):
    """Positions of the face of the ``k``-cube fixing ``{coord: value}``."""
    return [j for j in range(2 ** k) if all((j >> i) & 1 == b for i, b in fixed.items())]


class CubicalComplex(CellComplex):
    kind = "cubical"

    def __init__(self, cubes=()):
        super().__init__([tuple(c) for c in cubes])

    @staticmethod
    def canonical(t):
        k = cube_dim(len(t))
        if len(set(t)) != len(t):
            raise DuplicateVertexInCell(f"cube {t!r} repeats a vertex")
        if k == 0:
            return tuple(t)
        keys = [sort_key(v) for v in t]
        best = min(_cube_symmetries(k), key=lambda m: [keys[i] for i in m])
        return tuple(t[i] for i in best)

    @staticmethod
    def cell_dim(c):
        return len(c).bit_length() - 1

    @staticmethod
    def _raw_facets(c):
        k = len(c).bit_length() - 1
        out = []
        for i in range(k):
            for s in (0, 1):
                out.append(tuple(c[j] for j in range(2 ** k) if (j >> i) & 1 == s))
        return out

    @property
    def cubes(self):
        return self.cells()

    def face_with_positions(self, cube, positions):
        return self.canonical(tuple(cube[j] for j in positions))

    def _validate(self):
        # the intersection of two cells is empty or a common face
        maximal = self.maximal_cells()
        at_vertex = defaultdict(list)
        for idx, c in enumerate(maximal):
            for v in c:
                at_vertex[v].append(idx)
        vsets = {}
        for c in maximal:
            vsets[c] = {frozenset(f): f for f in self.faces(c)}
        checked = set()
        for idxs in at_vertex.values():
            for a in idxs:
                for b in idxs:
                    if a >= b or (a, b) in checked:
                        continue
                    checked.add((a, b))
                    ca, cb = maximal[a], maximal[b]
                    common = frozenset(ca) & frozenset(cb)
                    fa = vsets[ca].get(common)
                    fb = vsets[cb].get(common)
                    if fa is None or fb is None or fa != fb:
                        raise NotACellComplex(
                            f"cubes {ca} and {cb} meet in {sorted_ids(common)}, "
                            "which is not a common face")


def build_simplicial(max_simplices):
    """Downward closure of the given vertex sets."""
    return SimplicialComplex(max_simplices)


def build_cubical(cubes):
    """All faces of the given cubes, with the cell-complex condition checked."""
    return CubicalComplex(cubes)


# -- links, subdivision, cones ---------------------------------------------------

def link(X, cell):
    """Abstract link of ``cell``.

    Vertices are the cells having ``cell`` as a facet; a set of them spans a
    simplex when they all lie in one cell of the matching dimension.
    """
    c = X.cell(cell)
    simplices = []
    for C in X.cofaces(c):
        if C == c:
            continue
        faces = X.faces(C)
        simplices.append(tuple(f for f in X.cofacets(c) if f in faces))
    return SimplicialComplex(simplices)


def barycentric_subdivision(X):
    """Chains of the face poset, graded by the dimension of the top cell."""
    chains = []

    def descend(c, acc):
        fs = X.facets(c)
        if not fs:
            chains.append(acc)
            return
        for f in fs:
            descend(f, acc + (f,))

    for top in X.maximal_cells():
        descend(top, (top,))
    grading = {c: X.cell_dim(c) for c in X.cells()}
    return SimplicialComplex(chains, grading=grading)


def _fresh_names(existing, count, prefix="y"):
    used = set(existing)
    names = []
    for i in range(count):
        name = f"{prefix}{i}"
        while name in used:
            name += "'"
        used.add(name)
        names.append(name)
    return names


def _components(cells):
    """Connected components (as sets of cells) of a closed cell set."""
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in cells:
        for v in c:
            parent.setdefault(v, v)
        for v in c[1:]:
            ra, rb = find(c[0]), find(v)
            if ra != rb:
                parent[ra] = rb
    groups = defaultdict(set)
    for c in cells:
        groups[find(c[0])].add(c)
    return sorted(groups.values(), key=lambda g: min(sort_key(v) for c in g for v in c))


@dataclass(frozen=True, eq=False)
class MarkedComplex:
    """A complex with designated cone points and the link each one cones."""

    base: CellComplex
    cone_points: tuple
    cone_links: dict = field(default_factory=dict)

    def punctured(self):
        """The complex with the open stars of all cone points removed."""
        return self.base.without_open_stars(self.cone_points)

    @classmethod
    def from_cone_points(cls, X, cone_points):
        cps = tuple(sorted_ids(cone_points))
        links = {}
        for y in cps:
            X.cell((y,))
            if X.kind == "simplicial":
                links[y] = SimplicialComplex._from_closed(
                    tuple(v for v in c if v != y)
                    for c in X.cofaces((y,)) if c != (y,))
            else:
                links[y] = link(X, (y,))
        return cls(X, cps, links)

    def verify(self):
        """Check that each cone point's star is the cone over its recorded link."""
        bad = []
        for y in self.cone_points:
            L = self.cone_links[y]
            if self.base.kind == "simplicial":
                star = {c for c in self.base.cofaces((y,)) if c != (y,)}
                cone = {self.base.canonical(s + (y,)) for s in L.cells()}
                if star != cone:
                    bad.append(y)
            elif not is_isomorphic(link(self.base, (y,)), L):
                bad.append(y)
        return bad


def relative_cone(K, L):
    """Attach one cone per connected component of the subcomplex ``L``."""
    if isinstance(L, CellComplex):
        l_cells = L.cells()
    else:
        l_cells = list(L)
    closed = set()
    for s in l_cells:
        try:
            c = K.cell(tuple(s) if not isinstance(s, tuple) else s)
        except UnknownCell:
            raise NotASubcomplex(f"{s} is not a simplex of K") from None
        closed |= K.faces(c)
    comps = _components(closed)
    names = _fresh_names(K.vertices, len(comps))
    cells = list(K.maximal_cells())
    links = {}
    for y, comp in zip(names, comps):
        cells.extend(c + (y,) for c in comp)
        links[y] = SimplicialComplex._from_closed(comp)
    coned = SimplicialComplex(cells)
    return MarkedComplex(coned, tuple(names), links)


# -- admissibility ------------------------------------------------------------------

def non_top_maximal_cells(X):
    return [c for c in X.maximal_cells() if X.cell_dim(c) != X.dim]


def boundary_cells(X):
    """``(n-1)``-cells lying in fewer than two ``n``-cells."""
    n = X.dim
    if n < 1:
        return []
    return [c for c in X.cells(n - 1)
            if sum(1 for C in X.cofacets(c) if X.cell_dim(C) == n) < 2]


def check_homogeneous(X):
    return not non_top_maximal_cells(X)


def check_without_boundary(X):
    return not boundary_cells(X)


def admissibility_check(K, L=()):
    """Whether coning off ``L`` in ``K`` gives a homogeneous complex without boundary."""
    marked = relative_cone(K, L)
    X = marked.base
    inhom = non_top_maximal_cells(X)
    bdry = boundary_cells(X)
    children = [
        Report("homogeneous", FAIL if inhom else PASS, witnesses=inhom[:1],
               counts={"non_top_maximal": len(inhom)}),
        Report("without_boundary", FAIL if bdry else PASS, witnesses=bdry[:1],
               counts={"boundary_cells": len(bdry)}),
    ]
    status = PASS if not (inhom or bdry) else FAIL
    return Report("admissibility", status, children=children,
                  counts={"dim": X.dim, "cone_points": len(marked.cone_points),
                          "euler_characteristic": X.euler_characteristic()},
                  details={"cone_points": list(marked.cone_points)})


def cubify(K):
    """Standard cubification: the ``n``-simplex becomes ``n+1`` cubes.

    The cube at vertex ``v`` of a simplex has as vertices the barycentres of
    the faces containing ``v``; barycentres are named by the face (a tuple).
    """
    cubes = []
    for sigma in K.maximal_cells():
        for v in sigma:
            others = [w for w in sigma if w != v]
            cube = []
            for j in range(2 ** len(others)):
                face = (v,) + tuple(others[b] for b in range(len(others)) if (j >> b) & 1)
                cube.append(K.canonical(face))
            cubes.append(tuple(cube))
    return CubicalComplex(cubes)


# -- isomorphism ---------------------------------------------------------------------

def hasse_diagram(X):
    g = nx.DiGraph()
    for c in X.cells():
        g.add_node(c, dim=X.cell_dim(c))
        for f in X.facets(c):
            g.add_edge(f, c)
    return g


def is_isomorphic(X, Y):
    """Face-poset isomorphism (this determines the complex for both kinds)."""
    if X.f_vector != Y.f_vector:
        return False
    return nx.is_isomorphic(hasse_diagram(X), hasse_diagram(Y),
                            node_match=lambda a, b: a["dim"] == b["dim"])


def euler_characteristic(X):
    return X.euler_characteristic()
