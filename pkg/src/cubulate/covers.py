"""Edge-path group presentations, finite covers and branched covers."""
import re
from collections import deque
from dataclasses import dataclass, field

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from ._order import sort_key, sorted_ids
from .complexes import _components, cube_edges, link
from .errors import Disconnected, NotACover, NotTransitive, RelatorNotKilled, UnknownVertex
from .report import FAIL, PASS, Report


# -- presentations -------------------------------------------------------------------

def _cell_boundary_walk(X, c):
    """Closed vertex walk around a 2-cell."""
    if X.kind == "cubical":
        return (c[0], c[1], c[3], c[2], c[0])
    return (c[0], c[1], c[2], c[0])


@dataclass
class GroupPresentation:
    """Spanning-tree presentation: one generator per non-tree edge."""

    basepoint: object
    tree: frozenset
    generators: list
    relators: list
    names: list = field(default_factory=list)
    parent: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.names:
            self.names = [f"g{i + 1}" for i in range(len(self.generators))]
        self._index = {e: i for i, e in enumerate(self.generators)}

    def edge_letter(self, u, v):
        """``(index, +1/-1)`` for traversing ``u -> v``, or None on a tree edge."""
        if (u, v) in self._index:
            return self._index[(u, v)], 1
        if (v, u) in self._index:
            return self._index[(v, u)], -1
        return None

    def word(self, walk):
        """Word read along a vertex walk (tree edges contribute nothing)."""
        out = []
        for u, v in zip(walk, walk[1:]):
            letter = self.edge_letter(u, v)
            if letter is not None:
                out.append(letter)
        return tuple(out)

    def tree_path(self, v):
        """Vertex walk from the basepoint to ``v`` inside the tree."""
        walk = [v]
        while walk[-1] != self.basepoint:
            walk.append(self.parent[walk[-1]])
        return walk[::-1]

    def generator_loop(self, index):
        """Closed walk at the basepoint reading exactly one generator."""
        u, v = self.generators[index]
        return self.tree_path(u) + self.tree_path(v)[::-1]

    def format_word(self, word):
        return " ".join(self.names[g] + ("" if e == 1 else "^-1") for g, e in word) or "1"

    def relation_matrix(self):
        rows = []
        for r in self.relators:
            row = [0] * len(self.generators)
            for g, e in r:
                row[g] += e
            rows.append(row)
        return rows

    def abelianization(self):
        """``(free_rank, torsion)`` from the invariant factors of the relation matrix."""
        n = len(self.generators)
        rows = [r for r in self.relation_matrix() if any(r)]
        if not rows or n == 0:
            return n, []
        factors = [abs(int(f)) for f in invariant_factors(Matrix(rows), domain=ZZ)]
        nonzero = [f for f in factors if f != 0]
        return n - len(nonzero), [f for f in nonzero if f != 1]

    def abelianization_string(self):
        free, torsion = self.abelianization()
        parts = (["Z"] * free if free <= 3 else [f"Z^{free}"]) + [f"Z/{t}" for t in torsion]
        return " + ".join(parts) if parts else "0"


def pi1_presentation(X, basepoint=None):
    """Presentation of the edge-path group of ``X`` from a BFS spanning tree."""
    if not X.vertices:
        raise Disconnected("empty complex")
    if basepoint is None:
        basepoint = X.vertices[0]
    if (basepoint,) not in X._cells:
        raise UnknownVertex(basepoint)
    seen = {basepoint}
    parent = {}
    tree = set()
    q = deque([basepoint])
    while q:
        u = q.popleft()
        for w in X.neighbors(u):
            if w not in seen:
                seen.add(w)
                parent[w] = u
                tree.add(frozenset((u, w)))
                q.append(w)
    if len(seen) != len(X.vertices):
        raise Disconnected(f"{len(X.vertices) - len(seen)} vertices unreachable from {basepoint!r}")
    gens = []
    for e in X.edges():
        a, b = (e[0], e[-1])
        if frozenset((a, b)) not in tree:
            gens.append(tuple(sorted_ids((a, b))))
    gens.sort(key=lambda e: (sort_key(e[0]), sort_key(e[1])))
    P = GroupPresentation(basepoint, frozenset(tree), gens, [], parent=parent)
    P.relators = [P.word(_cell_boundary_walk(X, c)) for c in X.cells(2)]
    return P


# -- permutation representations -------------------------------------------------------

_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text, degree):
    """Permutation of ``0..degree-1`` from 1-based cycle notation like ``(1 2)(3 4)``."""
    perm = list(range(degree))
    body = text.strip()
    if body in ("", "()", "1", "id"):
        return tuple(perm)
    if _CYCLE.sub("", body).strip():
        raise ValueError(f"cannot read cycles from {text!r}")
    used = set()
    for cyc in _CYCLE.findall(body):
        try:
            pts = [int(x) - 1 for x in cyc.replace(",", " ").split()]
        except ValueError:
            raise ValueError(f"cannot read cycle ({cyc})") from None
        if any(not 0 <= x < degree for x in pts) or len(set(pts)) != len(pts):
            raise ValueError(f"bad cycle ({cyc}) for degree {degree}")
        if used & set(pts):
            raise ValueError(f"cycles are not disjoint at ({cyc})")
        used.update(pts)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            perm[a] = b
    return tuple(perm)


def format_cycles(perm):
    seen = set()
    out = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = perm[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = perm[x]
        out.append("(" + " ".join(str(y + 1) for y in cyc) + ")")
    return "".join(out) or "()"


def _inverse(perm):
    inv = [0] * len(perm)
    for i, j in enumerate(perm):
        inv[j] = i
    return tuple(inv)


class PermRep:
    """Degree ``d`` action of the generators on sheets ``0..d-1``.

    Words act on the right: the sheet moved by the first letter is then
    moved by the second, so holonomy follows a walk in order.
    """

    def __init__(self, degree, perms):
        self.degree = degree
        self.perms = {name: tuple(p) for name, p in perms.items()}
        for name, p in self.perms.items():
            if sorted(p) != list(range(degree)):
                raise ValueError(f"{name} is not a permutation of degree {degree}")

    def __repr__(self):
        body = ", ".join(f"{k}={format_cycles(v)}" for k, v in sorted(self.perms.items()))
        return f"PermRep({self.degree}; {body})"

    @classmethod
    def from_cycles(cls, degree, cycles):
        return cls(degree, {name: parse_cycles(text, degree) for name, text in cycles.items()})

    @classmethod
    def trivial(cls, presentation, degree=1):
        return cls(degree, {n: tuple(range(degree)) for n in presentation.names})

    def perm(self, name, exponent=1):
        p = self.perms.get(name, tuple(range(self.degree)))
        return p if exponent == 1 else _inverse(p)

    def of_word(self, presentation, word):
        sheets = list(range(self.degree))
        for g, e in word:
            p = self.perm(presentation.names[g], e)
            sheets = [p[k] for k in sheets]
        return tuple(sheets)

    def is_transitive(self):
        seen = {0}
        q = [0]
        while q:
            k = q.pop()
            for p in self.perms.values():
                for x in (p[k], _inverse(p)[k]):
                    if x not in seen:
                        seen.add(x)
                        q.append(x)
        return len(seen) == self.degree

    def check(self, presentation):
        unknown = set(self.perms) - set(presentation.names)
        if unknown:
            raise ValueError(f"generators {sorted(unknown)} are not in the presentation")
        ident = tuple(range(self.degree))
        for r in presentation.relators:
            if self.of_word(presentation, r) != ident:
                raise RelatorNotKilled(
                    f"relator {presentation.format_word(r)} acts nontrivially", relator=r)
        if not self.is_transitive():
            raise NotTransitive("the generators do not act transitively; the cover is disconnected")

    def to_text(self, presentation=None):
        names = presentation.names if presentation else sorted(self.perms, key=sort_key)
        lines = [f"degree {self.degree}"]
        lines += [f"{n} {format_cycles(self.perm(n))}" for n in names]
        return "\n".join(lines) + "\n"


def perm_rep_from_edge_labels(presentation, degree, labels):
    """Representation from permutations on oriented edges (a voltage assignment).

    ``labels`` maps ``(u, v)`` to a permutation of ``0..degree-1``; unlisted
    edges carry the identity and ``(v, u)`` gets the inverse.  Each generator
    is sent to the holonomy of its generator loop.
    """
    ident = tuple(range(degree))

    def volt(u, v):
        if (u, v) in labels:
            return tuple(labels[(u, v)])
        if (v, u) in labels:
            return _inverse(tuple(labels[(v, u)]))
        return ident

    perms = {}
    for i, name in enumerate(presentation.names):
        walk = presentation.generator_loop(i)
        sheets = list(ident)
        for u, v in zip(walk, walk[1:]):
            p = volt(u, v)
            sheets = [p[k] for k in sheets]
        perms[name] = tuple(sheets)
    return PermRep(degree, perms)


# -- covers ---------------------------------------------------------------------------------

@dataclass(eq=False)
class CoverProjection:
    total: object
    base: object
    vertex_map: dict
    degree: int
    branch_points: dict = field(default_factory=dict)
    cone_points: tuple = ()

    def cell_map(self, c):
        return self.base.canonical(tuple(self.vertex_map[v] for v in c))

    def fibre(self, base_cell):
        return [c for c in self.total.cells() if self.cell_map(c) == base_cell]

    def verify(self):
        """Report on the cell map, fibre sizes and local bijectivity on links."""
        total, base = self.total, self.base
        bad_cells = []
        counts = {}
        for c in total.cells():
            img = self.cell_map(c)
            if img not in base._cells or base.cell_dim(img) != total.cell_dim(c):
                bad_cells.append(c)
                continue
            counts[img] = counts.get(img, 0) + 1
        cones = set(self.cone_points)
        bad_fibres = [b for b in base.cells()
                      if cones.isdisjoint(b) and counts.get(b, 0) != self.degree]
        branch = set(self.branch_points)
        not_local = []
        checked = 0
        for c in total.cells():
            if branch.intersection(c) or c in bad_cells:
                continue
            checked += 1
            if not self._link_bijective(c):
                not_local.append(c)
        branch_ok = []
        for y, deg in sorted(self.branch_points.items(), key=lambda kv: sort_key(kv[0])):
            branch_ok.append(self._branch_link_degree((y,)) == deg)
        status = FAIL if (bad_cells or bad_fibres or not_local or not all(branch_ok)) else PASS
        chi_t, chi_b = total.euler_characteristic(), base.euler_characteristic()
        return Report(
            "cover", status,
            witnesses=(bad_cells + bad_fibres + not_local)[:1],
            counts={"degree": self.degree, "euler_total": chi_t, "euler_base": chi_b,
                    "cells_checked": checked, "non_combinatorial": len(bad_cells),
                    "bad_fibres": len(bad_fibres), "non_bijective_links": len(not_local),
                    "branch_points": len(branch)},
            details={"branch_points": dict(self.branch_points)},
        )

    def _link_image(self, c):
        L = link(self.total, c)
        Lb = link(self.base, self.cell_map(c))
        images = {s: Lb.canonical(tuple(self.cell_map(x) for x in s)) for s in L.cells()}
        return L, Lb, images

    def _link_bijective(self, c):
        L, Lb, images = self._link_image(c)
        vals = list(images.values())
        return len(set(vals)) == len(vals) and set(vals) == Lb._cells

    def _branch_link_degree(self, c):
        L, Lb, images = self._link_image(c)
        if not Lb.vertices:
            return 0
        return len(L.vertices) // len(Lb.vertices)


def _transport(pres, rho):
    """Sheet permutation for traversing the oriented edge ``u -> v``."""
    ident = tuple(range(rho.degree))

    def step(u, v):
        letter = pres.edge_letter(u, v)
        if letter is None:
            return ident
        g, e = letter
        return rho.perm(pres.names[g], e)
    return step


def _cell_edges(X, c):
    if X.kind == "cubical":
        k = len(c).bit_length() - 1
        return [(c[a], c[b]) for a, b in cube_edges(k)]
    return [(a, b) for i, a in enumerate(c) for b in c[i + 1:]]


def build_cover(X, rho, presentation=None):
    """Cover with vertices ``(v, sheet)``, sheets numbered from 1."""
    pres = presentation or pi1_presentation(X)
    rho.check(pres)
    step = _transport(pres, rho)
    d = rho.degree
    lifted = []
    for c in X.maximal_cells():
        adj = {v: [] for v in c}
        for a, b in _cell_edges(X, c):
            adj[a].append(b)
            adj[b].append(a)
        for k in range(d):
            sheet = {c[0]: k}
            q = deque([c[0]])
            while q:
                u = q.popleft()
                for w in adj[u]:
                    if w not in sheet:
                        sheet[w] = step(u, w)[sheet[u]]
                        q.append(w)
            lifted.append(tuple((v, sheet[v] + 1) for v in c))
    total = type(X)(lifted)
    vmap = {v: v[0] for v in total.vertices}
    return CoverProjection(total, X, vmap, d)


def identity_cover(X):
    return CoverProjection(X, X, {v: v for v in X.vertices}, 1)


def _outer_part(X, y):
    """Cells of the star of ``y`` that avoid ``y`` (the base of the cone at ``y``)."""
    out = set()
    for c in X.cofaces((y,)):
        for f in X.faces(c):
            if y not in f:
                out.add(f)
    return out


def branched_cover(marked, rho, presentation=None):
    """Cover of the punctured complex with a cone vertex glued per lifted link component."""
    X = marked.base
    P = marked.punctured()
    cover = build_cover(P, rho, presentation)
    total = cover.total
    cells = list(total.maximal_cells())
    branch = {}
    vmap = dict(cover.vertex_map)
    for y in marked.cone_points:
        outer = _outer_part(X, y)
        pre = [c for c in total.cells() if cover.cell_map(c) in outer]
        comps = _components(pre)
        comp_of = {}
        outer_vertices = {f[0] for f in outer if len(f) == 1}
        for j, comp in enumerate(comps, start=1):
            yhat = (y, j)
            vs = {c[0] for c in comp if len(c) == 1}
            for v in vs:
                comp_of[v] = yhat
            vmap[yhat] = y
            branch[yhat] = len(vs) // max(len(outer_vertices), 1)
        for c in X.maximal_cells():
            if y not in c:
                continue
            rest = [v for v in c if v != y]
            adj = {v: set() for v in rest}
            for a, b in _cell_edges(X, c):
                if a != y and b != y:
                    adj[a].add(b)
                    adj[b].add(a)
            for k in range(1, rho.degree + 1):
                lift = {rest[0]: (rest[0], k)}
                q = deque([rest[0]])
                while q:
                    u = q.popleft()
                    for w in sorted_ids(adj[u]):
                        if w in lift:
                            continue
                        cands = [x for x in total.neighbors(lift[u]) if vmap[x] == w]
                        if len(cands) != 1:
                            raise NotACover(f"edge {u}-{w} does not lift uniquely")
                        lift[w] = cands[0]
                        q.append(w)
                yhat = comp_of[lift[rest[0]]]
                cells.append(tuple(yhat if v == y else lift[v] for v in c))
    full = type(X)(cells)
    for v in full.vertices:
        if v not in vmap:
            raise NotACover(f"vertex {v!r} has no image")
    return CoverProjection(full, X, vmap, rho.degree, branch, tuple(marked.cone_points))


def deck_transformations(cover, basepoint=None):
    """Automorphisms of the total space commuting with the projection.

    Each is determined by where it sends one lift of the basepoint; every
    candidate is propagated along edges and kept if it is a cell map.
    """
    total = cover.total
    vmap = cover.vertex_map
    base = basepoint if basepoint is not None else vmap[total.vertices[0]]
    fibre = sorted_ids(v for v in total.vertices if vmap[v] == base)
    out = []
    for target in fibre:
        phi = {fibre[0]: target}
        q = deque([fibre[0]])
        ok = True
        while q and ok:
            u = q.popleft()
            for w in total.neighbors(u):
                cands = [x for x in total.neighbors(phi[u]) if vmap[x] == vmap[w]]
                if len(cands) != 1:
                    ok = False
                    break
                if w in phi:
                    if phi[w] != cands[0]:
                        ok = False
                        break
                else:
                    phi[w] = cands[0]
                    q.append(w)
        if not ok or len(phi) != len(total.vertices):
            continue
        if all(total.canonical(tuple(phi[v] for v in c)) in total._cells
               for c in total.maximal_cells()):
            out.append(phi)
    return out
