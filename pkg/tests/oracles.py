"""Brute-force reference computations that share no code with the package.

Cubes of a grid are described by coordinates: a cell is a tuple of
intervals ``(lo, hi)`` with ``hi - lo`` in ``{0, 1}``.
"""
from itertools import product


def grid_cells(corners, dim):
    """All faces of the unit cubes with the given lower corners."""
    cells = set()
    for corner in corners:
        for choice in product((0, 1, None), repeat=dim):
            cells.add(tuple((c, c + 1) if ch is None else (c + ch, c + ch)
                            for c, ch in zip(corner, choice)))
    return cells


def cell_dim(cell):
    return sum(hi - lo for lo, hi in cell)


def is_face(a, b):
    return all(blo <= alo and ahi <= bhi for (alo, ahi), (blo, bhi) in zip(a, b))


def dual_f_vector(corners, dim):
    """Dual k-cubes are pairs of cells ``sigma <= tau`` with ``dim tau - dim sigma = k``."""
    cells = grid_cells(corners, dim)
    f = [0] * (dim + 1)
    for a in cells:
        for b in cells:
            if is_face(a, b):
                f[cell_dim(b) - cell_dim(a)] += 1
    return tuple(f)


def grid_corners(m, n):
    return [(i, j) for i in range(m) for j in range(n)]


def euler(f):
    return sum((-1) ** k * x for k, x in enumerate(f))


def grid_mirror_count(corners, dim):
    """Mirrors of the mod-2 folding: facets in one coordinate plane, grouped by touching."""
    facets = {}
    for cell in grid_cells(corners, dim):
        if cell_dim(cell) != dim - 1:
            continue
        i = next(k for k, (lo, hi) in enumerate(cell) if lo == hi)
        facets.setdefault((i, cell[i][0]), []).append(cell)
    count = 0
    for group in facets.values():
        verts = [set(product(*[(lo, hi) for lo, hi in c])) for c in group]
        parent = list(range(len(group)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in range(len(group)):
            for b in range(a + 1, len(group)):
                if verts[a] & verts[b]:
                    parent[find(a)] = find(b)
        count += len({find(a) for a in range(len(group))})
    return count


def minimal_bridges(adj, mirror_sets, max_length):
    """Every minimal bridge up to ``max_length`` as a vertex tuple.

    A bridge for a vertex set ``M`` starts and ends in ``M`` and leaves it in
    between.  A bridge is minimal when no proper subpath is a bridge.  Walks
    are extended only while no subpath ending at the new vertex is a bridge.
    """
    member = {}
    for k, ms in enumerate(mirror_sets):
        for v in ms:
            member.setdefault(v, set()).add(k)

    def is_bridge(vs):
        common = member.get(vs[0], set()) & member.get(vs[-1], set())
        return any(any(v not in mirror_sets[k] for v in vs[1:-1]) for k in common)

    found = []

    def extend(path):
        if len(path) - 1 == max_length:
            return
        for w in sorted(adj[path[-1]]):
            nxt = path + (w,)
            if any(is_bridge(nxt[a:]) for a in range(1, len(nxt) - 2)):
                continue
            if len(nxt) >= 3 and is_bridge(nxt):
                found.append(nxt)
                continue
            extend(nxt)

    for v in sorted(member):
        extend((v,))
    return found
