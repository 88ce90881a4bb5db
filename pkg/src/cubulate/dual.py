"""The cube complex dual to a stratification."""
import warnings
from itertools import combinations

from .complexes import CubicalComplex, link
from .errors import ForeignMirror, IntervalNotBoolean, NotACover, NotATile
from .report import FAIL, PASS, Report


class DualComplex:
    """Vertices are strata cells; ``height`` is the dimension of the dual cell."""

    def __init__(self, stratification, carrier, branch=(), non_boolean=(), unfilled=()):
        self.stratification = stratification
        self.carrier = carrier
        self.dual_of = {s.id: s for s in stratification.cells}
        self.height = {s.id: s.dim for s in stratification.cells}
        self.branch = frozenset(branch)
        self.non_boolean = tuple(non_boolean)
        self.unfilled = tuple(unfilled)

    def __repr__(self):
        return f"DualComplex(f={self.carrier.f_vector}, branch={sorted(self.branch)})"

    @property
    def f_vector(self):
        return self.carrier.f_vector

    @property
    def filling_consistent(self):
        """Interval filling agrees with filling every cube 1-skeleton."""
        return not self.unfilled

    def vertex_of(self, cube):
        """Dual vertex of the cell carrying the base cube ``cube``."""
        X = self.stratification.complex
        return self.stratification.cell_of[X.cell(cube)]

    def min_vertex(self, cube):
        return min(cube, key=lambda v: self.height[v])

    def max_vertex(self, cube):
        return max(cube, key=lambda v: self.height[v])

    def with_branch(self, branch_cells):
        return DualComplex(self.stratification, self.carrier, branch_cells,
                           self.non_boolean, self.unfilled)


def _interval_cube(S, sigma, mu, below):
    """Vertex tuple of the cube on ``[sigma, mu]`` or None if not Boolean."""
    k = S.cells[mu].dim - S.cells[sigma].dim
    members = [r for r in below[mu] if sigma in below[r]]
    if len(members) != 2 ** k:
        return None
    d0 = S.cells[sigma].dim
    atoms = sorted(r for r in members if S.cells[r].dim == d0 + 1)
    if len(atoms) != k:
        return None
    slots = {}
    for r in members:
        mask = sum(1 << b for b, a in enumerate(atoms) if a in below[r])
        if bin(mask).count("1") != S.cells[r].dim - d0 or mask in slots:
            return None
        slots[mask] = r
    return tuple(slots[j] for j in range(2 ** k))


def _cube_skeleta(adj, k):
    """Vertex sets spanning an induced copy of the ``k``-cube graph."""
    found = set()
    masks = sorted(range(2 ** k), key=lambda m: (bin(m).count("1"), m))
    for v in sorted(adj):
        for nbrs in combinations(sorted(adj[v]), k):
            pos = {0: v}
            for i, w in enumerate(nbrs):
                pos[1 << i] = w

            def extend(idx):
                if idx == len(masks):
                    yield dict(pos)
                    return
                m = masks[idx]
                if m in pos:
                    yield from extend(idx + 1)
                    return
                below = [pos[m ^ (1 << i)] for i in range(k) if (m >> i) & 1]
                cands = set(adj[below[0]])
                for b in below[1:]:
                    cands &= adj[b]
                cands -= set(pos.values())
                for c in sorted(cands):
                    pos[m] = c
                    yield from extend(idx + 1)
                    del pos[m]

            for p in extend(0):
                vs = frozenset(p.values())
                if vs in found:
                    continue
                inner = sum(1 for a in vs for b in adj[a] if b in vs) // 2
                if inner == k * 2 ** (k - 1):
                    found.add(vs)
    return found


def dualize(S, branch_cells=()):
    """Cube complex dual to ``S``.

    A ``k``-cube is filled over each Boolean poset interval of rank ``k``;
    afterwards every induced cube 1-skeleton is checked to be filled, and any
    gap is recorded in ``unfilled``.
    """
    for b in branch_cells:
        if S.cells[b].dim != 0:
            raise ValueError(f"branch cell {b} is not a 0-cell")
    below = {s.id: S.faces_of(s.id) for s in S.cells}
    cubes = [(s.id,) for s in S.cells]
    non_boolean = []
    for mu in below:
        for sigma in below[mu]:
            if sigma == mu:
                continue
            cube = _interval_cube(S, sigma, mu, below)
            if cube is None:
                non_boolean.append((sigma, mu))
                warnings.warn(f"interval [{sigma}, {mu}] is not Boolean", IntervalNotBoolean)
            else:
                cubes.append(cube)
    carrier = CubicalComplex(cubes)

    adj = {v: set(carrier.neighbors(v)) for v in carrier.vertices}
    unfilled = []
    for k in range(2, carrier.dim + 2):
        for vs in sorted(_cube_skeleta(adj, k), key=sorted):
            c = carrier.cell_by_vertices(vs)
            if c is None or carrier.cell_dim(c) != k:
                unfilled.append(tuple(sorted(vs)))
    return DualComplex(S, carrier, branch_cells, non_boolean, unfilled)


def dual_mirror(D, M):
    """Full subcomplex on the vertices dual to cells of ``M``."""
    S = D.stratification
    if M.id >= len(S.mirrors) or S.mirrors[M.id] != M:
        raise ForeignMirror(f"mirror {M.id} does not belong to this stratification")
    return D.carrier.full_subcomplex(S.mirror_cells[M.id])


def dual_tile(D, tile):
    """Closed star of the vertex dual to ``tile`` (the cubical 1-neighbourhood)."""
    tid = getattr(tile, "id", tile)
    S = D.stratification
    if not isinstance(tid, int) or not 0 <= tid < len(S.cells) or S.cells[tid].dim != S.n:
        raise NotATile(f"{tile!r} is not a tile")
    return D.carrier.subcomplex(D.carrier.cofaces((tid,)))


# -- maps between duals ------------------------------------------------------------

def induced_dual_map(D, D_base, cover):
    """Dual vertex map induced by the cover's vertex map; raises NotACover."""
    S, Sb = D.stratification, D_base.stratification
    Xb = Sb.complex
    phi = {}
    for s in S.cells:
        img = tuple(cover.vertex_map[v] for v in s.cube)
        try:
            cube = Xb.cell(img)
        except Exception:
            raise NotACover(f"cell {s.cube} maps to {img}, not a cube") from None
        if Xb.cell_dim(cube) != s.dim:
            raise NotACover(f"cell {s.cube} collapses under the projection")
        phi[s.id] = Sb.cell_of[cube]
    for C in D.carrier.cells():
        img = tuple(phi[v] for v in C)
        if len(set(img)) != len(img) or img not in D_base.carrier:
            raise NotACover(f"dual cube {C} does not map onto a dual cube")
    return phi


def _edge_image(e, phi, carrier):
    return carrier.canonical(tuple(phi[v] for v in e))


def branched_dual_consistency(D, D_base, cover):
    """Check the dual map is a cover, branched only at branch vertices."""
    phi = induced_dual_map(D, D_base, cover)
    carrier, base_carrier = D.carrier, D_base.carrier
    bad_height = [v for v in phi if D.height[v] != D_base.height[phi[v]]]
    not_iso = []
    not_cover = []
    link_degrees = {}
    for v in carrier.vertices:
        L = link(carrier, (v,))
        Lb = link(base_carrier, (phi[v],))

        def img(simplex):
            return Lb.canonical(tuple(_edge_image(e, phi, base_carrier) for e in simplex))

        images = {}
        for s in L.cells():
            images[s] = img(s)
        if not all(t in Lb._cells and len(t) == len(s) for s, t in images.items()):
            not_cover.append(v)
            continue
        if v not in D.branch:
            if len(set(images.values())) != len(images) or set(images.values()) != Lb._cells:
                not_iso.append(v)
            continue
        # branch vertex: the link map must be a covering of simplicial complexes
        ok = set(images.values()) == Lb._cells
        for w in L.vertices:
            star = [s for s in L.cofaces((w,))]
            star_img = [images[s] for s in star]
            target = Lb.cofaces(img(((w,))))
            if len(set(star_img)) != len(star_img) or set(star_img) != set(target):
                ok = False
                break
        fibre = sum(1 for w in L.vertices if img((w,)) == img((L.vertices[0],))) if L.vertices else 0
        link_degrees[v] = fibre
        if not ok:
            not_cover.append(v)
    fibres = {}
    for v, b in phi.items():
        fibres.setdefault(b, []).append(v)
    degree = {len(vs) for b, vs in fibres.items()
              if not any(v in D.branch for v in vs)}
    status = FAIL if (bad_height or not_iso or not_cover or len(degree) > 1) else PASS
    return Report(
        "branched_dual_consistency", status,
        witnesses=(bad_height + not_iso + not_cover)[:1],
        counts={"degree": min(degree) if degree else 0,
                "branch_vertices": len(D.branch),
                "height_mismatches": len(bad_height),
                "non_isomorphic_links": len(not_iso),
                "non_covering_links": len(not_cover)},
        details={"branch_link_degrees": link_degrees},
    )
