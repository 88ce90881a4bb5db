"""Foldings onto the model cube and the model simplex.

A cubical folding labels every vertex by a bit tuple of length ``n``; it is
valid when each cube maps isomorphically onto a face of ``[0, 1]**n``.  A
simplicial folding colours vertices by ``0..n`` so that each simplex sees
distinct colours.
"""
from collections import deque
from dataclasses import dataclass, field
from itertools import permutations, product

import networkx as nx

from ._order import sort_key, sorted_ids
from .complexes import cube_edges
from .errors import MissingLabel, NotFoldable


@dataclass(frozen=True, eq=False)
class Folding:
    target_dim: int
    labels: dict = field(default_factory=dict)
    kind: str = "cubical"

    def __eq__(self, other):
        return (isinstance(other, Folding) and self.kind == other.kind
                and self.target_dim == other.target_dim and self.labels == other.labels)

    def label(self, v):
        try:
            return self.labels[v]
        except KeyError:
            raise MissingLabel(f"vertex {v!r} has no label") from None

    def model_face(self, cell):
        """Closed face of the model cube hit by ``cell``: 0, 1 or None per coordinate."""
        labs = [self.label(v) for v in cell]
        return tuple(labs[0][i] if all(l[i] == labs[0][i] for l in labs) else None
                     for i in range(self.target_dim))

    def restrict(self, Y):
        return Folding(self.target_dim, {v: self.labels[v] for v in Y.vertices}, self.kind)

    def label_string(self, v):
        lab = self.label(v)
        return "".join(map(str, lab)) if self.kind == "cubical" else str(lab)


def _hamming(a, b):
    return sum(x != y for x, y in zip(a, b))


def _check_cube(cube, labs, n):
    k = len(cube).bit_length() - 1
    if any(len(l) != n or any(b not in (0, 1) for b in l) for l in labs):
        return False
    if len(set(labs)) != len(labs):
        return False
    if any(_hamming(labs[a], labs[b]) != 1 for a, b in cube_edges(k)):
        return False
    varying = sum(1 for i in range(n) if len({l[i] for l in labs}) > 1)
    return varying == k


def verify_folding(X, F):
    """``(True, None)`` if ``F`` folds ``X``, else ``(False, offending_cell)``.

    Only maximal cells are checked: a cube that folds onto a face of the
    model cube folds each of its faces too.  The witness is a maximal cell.
    """
    for v in X.vertices:
        F.label(v)
    if X.kind == "simplicial":
        for s in X.maximal_cells():
            cols = [F.labels[v] for v in s]
            if len(set(cols)) != len(cols) or any(not 0 <= c <= F.target_dim for c in cols):
                return False, s
        return True, None
    for c in X.maximal_cells():
        if not _check_cube(c, [F.labels[v] for v in c], F.target_dim):
            return False, c
    return True, None


# -- search helpers ---------------------------------------------------------------

def _odd_cycle(g):
    """A closed odd cycle of ``g`` as a vertex list, or None if bipartite."""
    for comp in sorted((sorted_ids(c) for c in nx.connected_components(g)), key=lambda c: sort_key(c[0])):
        root = comp[0]
        parent = {root: None}
        depth = {root: 0}
        q = deque([root])
        while q:
            u = q.popleft()
            for w in sorted_ids(g[u]):
                if w not in depth:
                    depth[w] = depth[u] + 1
                    parent[w] = u
                    q.append(w)
                elif depth[w] == depth[u] and sort_key(u) < sort_key(w):
                    a, b = [u], [w]
                    while a[-1] != b[-1]:
                        a.append(parent[a[-1]])
                        b.append(parent[b[-1]])
                    return a + b[-2::-1] + [u]
    return None


def _bfs_order(X, seed, comp_vertices):
    order = list(dict.fromkeys(seed))
    seen = set(order)
    q = deque(order)
    while q:
        u = q.popleft()
        for w in X.neighbors(u):
            if w in comp_vertices and w not in seen:
                seen.add(w)
                order.append(w)
                q.append(w)
    return order


def _backtrack(order, fixed, constraints, candidates_for):
    """Depth-first search over ``order`` assigning the first consistent values.

    ``constraints[v]`` lists ``(w, test)`` pairs; ``test(value_v, value_w)``
    must hold once both are assigned.  Returns ``(assignment, None)`` or
    ``(None, deepest_failed_vertex)``.
    """
    assign = dict(fixed)
    free = [v for v in order if v not in assign]
    iters = []
    deepest = (-1, None)
    i = 0
    while 0 <= i < len(free):
        v = free[i]
        if len(iters) <= i:
            iters.append(iter(candidates_for(v, assign)))
        placed = False
        for lab in iters[i]:
            if all(test(lab, assign[w]) for w, test in constraints[v] if w in assign):
                assign[v] = lab
                placed = True
                break
        if placed:
            i += 1
        else:
            if i > deepest[0]:
                deepest = (i, v)
            iters.pop()
            i -= 1
            if i >= 0:
                del assign[free[i]]
    if i < 0:
        return None, deepest[1]
    return assign, None


def _components_with_vertices(X):
    g = X.graph()
    comps = [set(c) for c in nx.connected_components(g)]
    return sorted(comps, key=lambda c: min(sort_key(v) for v in c))


def _class_obstruction(X, n):
    """Odd cycle of edge parallel classes in the square-conflict graph (n == 2)."""
    parent = {e: e for e in X.cells(1)}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    squares = X.cells(2)
    for s in squares:
        for a, b in (((0, 1), (2, 3)), ((0, 2), (1, 3))):
            ea = X.canonical((s[a[0]], s[a[1]]))
            eb = X.canonical((s[b[0]], s[b[1]]))
            ra, rb = find(ea), find(eb)
            if ra != rb:
                parent[ra] = rb
    conflict = nx.Graph()
    for s in squares:
        ex = find(X.canonical((s[0], s[1])))
        ey = find(X.canonical((s[0], s[2])))
        if ex == ey:
            return [X.canonical((s[0], s[1])), X.canonical((s[0], s[2]))]
        conflict.add_edge(ex, ey)
    if n == 2:
        return _odd_cycle(conflict)
    return None


def compute_folding(X):
    """Fold a cubical complex onto ``[0, 1]**dim``; raise :class:`NotFoldable`.

    Each connected component pins its first top-dimensional cube to the
    identity labelling, then assigns vertices in breadth-first order taking
    the smallest admissible label first.  The result is finally moved by the
    model-cube symmetry giving the smallest label vector in vertex order, so
    the answer is deterministic and independent of cube vertex order.
    """
    n = max(X.dim, 0)
    if X.dim <= 0:
        return Folding(n, {v: () for v in X.vertices})
    odd = _odd_cycle(X.graph())
    if odd is not None:
        raise NotFoldable("1-skeleton has an odd cycle", cycle=odd, kind="odd_cycle")

    constraints = {v: [] for v in X.vertices}
    for c in X.cells():
        if len(c) < 2:
            continue
        for a in range(len(c)):
            for b in range(len(c)):
                if a != b:
                    d = bin(a ^ b).count("1")
                    constraints[c[a]].append((c[b], lambda x, y, d=d: _hamming(x, y) == d))

    all_labels = list(product((0, 1), repeat=n))

    def candidates(v, assign):
        for w in X.neighbors(v):
            if w in assign:
                base = assign[w]
                return sorted(base[:i] + (1 - base[i],) + base[i + 1:] for i in range(n))
        return all_labels

    labels = {}
    for comp in _components_with_vertices(X):
        tops = [c for c in X.maximal_cells() if c[0] in comp]
        top = sorted(tops, key=lambda c: (-len(c), [sort_key(v) for v in c]))[0]
        k = len(top).bit_length() - 1
        fixed = {v: tuple((j >> i) & 1 if i < k else 0 for i in range(n))
                 for j, v in enumerate(top)}
        order = _bfs_order(X, top, comp)
        assign, failed = _backtrack(order, fixed, constraints, candidates)
        if assign is None:
            cyc = _class_obstruction(X, n)
            if cyc is not None:
                raise NotFoldable("edge parallel classes cannot be given distinct directions",
                                  cycle=cyc, kind="class_cycle")
            cubes = sorted(c for c in X.cofaces((failed,)) if len(c) > 1) if failed is not None else None
            raise NotFoldable(f"no consistent label for vertex {failed!r}", cubes=cubes,
                              kind="search")
        labels.update(_lex_smallest(assign, n))
    return Folding(n, labels)


def _lex_smallest(assign, n):
    """Image of ``assign`` under the model-cube symmetry with the smallest label vector."""
    order = sorted_ids(assign)
    best = None
    for perm in permutations(range(n)):
        for flip in product((0, 1), repeat=n):
            vec = tuple(tuple(assign[v][perm[i]] ^ flip[i] for i in range(n)) for v in order)
            if best is None or vec < best:
                best = vec
    return dict(zip(order, best))


def simplicial_folding(K):
    """Colour ``K`` by ``0..dim`` so that every simplex is rainbow.

    Barycentric subdivisions carry their dimension grading, which is returned
    directly when valid.
    """
    n = max(K.dim, 0)
    if K.grading is not None:
        F = Folding(n, {v: K.grading[v] for v in K.vertices}, "simplicial")
        if verify_folding(K, F)[0]:
            return F
    g = K.graph()
    constraints = {v: [(w, lambda x, y: x != y) for w in g[v]] for v in K.vertices}
    colours = list(range(n + 1))
    labels = {}
    for comp in _components_with_vertices(K):
        tops = sorted((c for c in K.maximal_cells() if c[0] in comp),
                      key=lambda c: (-len(c), [sort_key(v) for v in c]))
        top = tops[0]
        if len(top) > n + 1:
            raise NotFoldable("simplex larger than the model", cycle=list(top), kind="clique")
        fixed = {v: i for i, v in enumerate(top)}
        order = _bfs_order(K, top, comp)
        assign, failed = _backtrack(order, fixed, constraints, lambda v, a: colours)
        if assign is None:
            sub = g.subgraph(comp)
            clique = max(nx.find_cliques(sub), key=lambda c: (len(c), sorted(map(sort_key, c))))
            if len(clique) > n + 1:
                raise NotFoldable(f"clique of size {len(clique)} needs more than {n + 1} colours",
                                  cycle=sorted_ids(clique), kind="clique")
            raise NotFoldable(f"no colour left for vertex {failed!r}",
                              cubes=sorted_ids([failed] + list(g[failed])), kind="search")
        labels.update(assign)
    return Folding(n, labels, "simplicial")
