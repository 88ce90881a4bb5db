"""Cells, tiles and mirrors of a folded cubical complex."""
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations

from ._order import sort_key
from .complexes import _cell_key
from .errors import InvalidFolding, UnknownVertex
from .folding import verify_folding
from .report import FAIL, PASS, Report


@dataclass(frozen=True)
class StratCell:
    id: int
    dim: int
    carrier: frozenset
    model_face: tuple

    @property
    def cube(self):
        """Smallest cube of the carrier (the whole carrier when it is one cube)."""
        return min(self.carrier, key=_cell_key)


@dataclass(frozen=True)
class Mirror:
    id: int
    family: tuple
    carrier: frozenset = field(repr=False)

    @property
    def vertices(self):
        return frozenset(c[0] for c in self.carrier if len(c) == 1)

    def __contains__(self, cube):
        return cube in self.carrier


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def groups(self):
        out = defaultdict(set)
        for x in self.parent:
            out[self.find(x)].add(x)
        return list(out.values())


def _check(X, F):
    ok, witness = verify_folding(X, F)
    if not ok:
        raise InvalidFolding(f"labels do not fold cube {witness}", witness=witness)


def _group_key(cubes):
    return min(_cell_key(c) for c in cubes)


def mirrors(X, F):
    """Mirrors grouped by family ``(coordinate, side)``; all ``2n`` families present."""
    _check(X, F)
    return _mirrors(X, F)


def _mirrors(X, F):
    out = {}
    faces = {c: F.model_face(c) for c in X.cells()}
    next_id = 0
    for i in range(F.target_dim):
        for side in (0, 1):
            cubes = [c for c in X.cells() if faces[c][i] == side]
            uf = _UnionFind(cubes)
            first_at = {}
            for c in cubes:
                for v in c:
                    if v in first_at:
                        uf.union(first_at[v], c)
                    else:
                        first_at[v] = c
            found = []
            for g in sorted(uf.groups(), key=_group_key):
                found.append(Mirror(next_id, (i, side), frozenset(g)))
                next_id += 1
            out[(i, side)] = found
    return out


class Stratification:
    """Cells of a folded complex with their codimension-1 incidences."""

    def __init__(self, X, F, cells, poset, mirror_families):
        self.complex = X
        self.folding = F
        self.n = F.target_dim
        self.cells = tuple(cells)
        self.poset = frozenset(poset)
        self.cell_of = {c: s.id for s in self.cells for c in s.carrier}
        self.tiles = tuple(s.id for s in self.cells if s.dim == self.n)
        self.families = mirror_families
        self.mirrors = tuple(m for fam in sorted(mirror_families) for m in mirror_families[fam])
        self.mirror_cells = {
            m.id: frozenset(s.id for s in self.cells if s.carrier <= m.carrier)
            for m in self.mirrors
        }
        self._mirrors_of_cell = defaultdict(set)
        for mid, ids in self.mirror_cells.items():
            for sid in ids:
                self._mirrors_of_cell[sid].add(mid)

    def __repr__(self):
        return f"Stratification(cells={len(self.cells)}, mirrors={len(self.mirrors)})"

    def cell_counts(self):
        counts = defaultdict(int)
        for s in self.cells:
            counts[s.dim] += 1
        return tuple(counts[d] for d in range(self.n + 1))

    def mirrors_of(self, cell_id):
        return frozenset(self._mirrors_of_cell.get(cell_id, ()))

    def faces_of(self, cell_id):
        """Ids of all cells contained in the closure of ``cell_id``."""
        out = set()
        X = self.complex
        for c in self.cells[cell_id].carrier:
            out.update(self.cell_of[f] for f in X.faces(c))
        return frozenset(out)

    def mirror(self, mid):
        return self.mirrors[mid]


def stratify(X, F):
    """Cells are components of preimages of open faces of the model cube.

    Two cubes with the same image belong to one cell only if they share a
    face with that same image, so distinct open cubes stay apart.
    """
    _check(X, F)
    image = {c: F.model_face(c) for c in X.cells()}
    by_face = defaultdict(list)
    for c in X.cells():
        by_face[image[c]].append(c)
    comps = []
    for face, cubes in by_face.items():
        uf = _UnionFind(cubes)
        holder = {}
        for c in cubes:
            for f in X.faces(c):
                if f != c and image[f] == face:
                    if f in holder:
                        uf.union(holder[f], c)
                    else:
                        holder[f] = c
        for g in uf.groups():
            comps.append((face, frozenset(g)))
    comps.sort(key=lambda fg: (sum(x is None for x in fg[0]), _group_key(fg[1])))
    cells = [StratCell(i, sum(x is None for x in face), g, face)
             for i, (face, g) in enumerate(comps)]
    cell_of = {c: s.id for s in cells for c in s.carrier}
    poset = set()
    for s in cells:
        for c in s.carrier:
            for f in X.facets(c):
                lower = cells[cell_of[f]]
                if lower.dim == s.dim - 1:
                    poset.add((lower.id, s.id))
    return Stratification(X, F, cells, poset, _mirrors(X, F))


def local_mirror_count(X, F, p):
    """Number of mirrors through vertex ``p``."""
    if (p,) not in X._cells:
        raise UnknownVertex(p)
    return sum(1 for fam in mirrors(X, F).values() for m in fam if (p,) in m.carrier)


def _tile_components(X, tiles, blocked):
    """Group tiles, joining two when they share a face outside ``blocked``."""
    uf = _UnionFind(tiles)
    holder = {}
    for t in tiles:
        for f in X.faces(t):
            if f == t or blocked(f):
                continue
            if f in holder:
                uf.union(holder[f], t)
            else:
                holder[f] = t
    return sorted((sorted(g, key=_cell_key) for g in uf.groups()),
                  key=lambda g: _cell_key(g[0]))


def complement_components(X, F, family):
    """Tiles grouped by the components of the complement of the family's mirrors.

    ``family`` is a coordinate index; both sides are removed.  Tiles are
    joined through any shared face whose image has that coordinate free.
    """
    _check(X, F)
    n = F.target_dim
    tiles = X.cells(n)
    return _tile_components(X, tiles, lambda f: F.model_face(f)[family] is not None)


def framings(X, M):
    """``(sigma, tau1, tau2)`` for codimension-1 cells ``sigma`` of ``M``."""
    n = X.dim
    out = []
    for sigma in sorted((c for c in M.carrier if X.cell_dim(c) == n - 1), key=_cell_key):
        tops = [t for t in X.cofacets(sigma) if X.cell_dim(t) == n]
        for t1, t2 in combinations(tops, 2):
            common = X.cell_by_vertices(frozenset(t1) & frozenset(t2))
            if common is not None and common in M.carrier:
                out.append((sigma, t1, t2))
    return out


def separation_check(X, F, M):
    """Does ``M`` put the two tiles of every framing in different components?"""
    _check(X, F)
    tiles = X.cells(X.dim)
    comps = _tile_components(X, tiles, lambda f: f in M.carrier)
    comp_of = {t: i for i, g in enumerate(comps) for t in g}
    rows = []
    bad = []
    for sigma, t1, t2 in framings(X, M):
        split = comp_of[t1] != comp_of[t2]
        rows.append({"cell": sigma, "tiles": [t1, t2], "separated": split})
        if not split:
            bad.append({"cell": sigma, "tiles": [t1, t2]})
    return Report(
        f"separation[mirror {M.id}]",
        FAIL if bad else PASS,
        witnesses=bad[:1],
        counts={"framings": len(rows), "complement_components": len(comps),
                "non_separated": len(bad)},
        details={"family": list(M.family), "framings": rows},
    )


def mirror_structure_check(X, F):
    """Same-family mirrors are disjoint and at most ``n`` pass through a vertex."""
    fams = mirrors(X, F)
    n = F.target_dim
    clashes = []
    for i in range(n):
        same = fams[(i, 0)] + fams[(i, 1)]
        for a, b in combinations(same, 2):
            if a.vertices & b.vertices:
                clashes.append([a.id, b.id])
    through = defaultdict(int)
    for fam in fams.values():
        for m in fam:
            for v in m.vertices:
                through[v] += 1
    crowded = sorted((v for v, k in through.items() if k > n), key=sort_key)
    status = FAIL if clashes or crowded else PASS
    return Report("mirror_structure", status, witnesses=clashes[:1] + crowded[:1],
                  counts={"mirrors": sum(len(f) for f in fams.values()),
                          "max_through_vertex": max(through.values(), default=0)})
