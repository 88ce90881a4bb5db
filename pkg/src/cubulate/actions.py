"""Finite groups acting on complexes by vertex permutations, and cube stabilizers."""
from collections import deque, namedtuple

from ._order import sort_key
from .errors import ActionNotStructurePreserving, UnknownCell
from .report import FAIL, NOT_APPLICABLE, PASS, Report, combine

Stabilizer = namedtuple("Stabilizer", "setwise pointwise")


class GroupAction:
    """A finite group of automorphisms of ``X`` closed under composition.

    Elements are dicts ``vertex -> vertex``; element 0 is the identity.
    Each element is checked to map cells onto cells.  When ``heights`` is
    given (a dual complex), heights must be preserved too.
    """

    def __init__(self, X, elements, heights=None):
        self.complex = X
        self.vertices = X.vertices
        self._pos = {v: i for i, v in enumerate(self.vertices)}
        perms = []
        seen = set()
        ident = tuple(range(len(self.vertices)))
        for g in [dict(zip(self.vertices, self.vertices))] + list(elements):
            t = self._as_tuple(g)
            if t not in seen:
                seen.add(t)
                perms.append(t)
        if perms[0] != ident:
            raise ValueError("identity must come first")
        self._perms = perms
        self._index = {p: i for i, p in enumerate(perms)}
        for p in perms:
            self._check_element(p, heights)
        self.table = [[self._index.get(self._compose(a, b)) for b in perms] for a in perms]
        if any(x is None for row in self.table for x in row):
            raise ValueError("elements are not closed under composition")

    def __len__(self):
        return len(self._perms)

    def __repr__(self):
        return f"GroupAction(order={len(self)})"

    def _as_tuple(self, g):
        try:
            t = tuple(self._pos[g[v]] for v in self.vertices)
        except KeyError as exc:
            raise ActionNotStructurePreserving(f"vertex {exc.args[0]!r} is not mapped into X") from None
        if len(set(t)) != len(t):
            raise ActionNotStructurePreserving("element is not a bijection on vertices")
        return t

    @staticmethod
    def _compose(a, b):
        """``a`` after ``b``."""
        return tuple(a[b[i]] for i in range(len(b)))

    def _check_element(self, p, heights):
        X = self.complex
        for c in X.maximal_cells():
            img = tuple(self.vertices[p[self._pos[v]]] for v in c)
            if X.canonical(img) not in X._cells:
                raise ActionNotStructurePreserving(f"cell {c} is sent to a non-cell")
        if heights is not None:
            for v in self.vertices:
                if heights[v] != heights[self.vertices[p[self._pos[v]]]]:
                    raise ActionNotStructurePreserving(f"height of {v!r} is not preserved")

    def element(self, i):
        p = self._perms[i]
        return {v: self.vertices[p[j]] for j, v in enumerate(self.vertices)}

    def elements(self):
        return [self.element(i) for i in range(len(self))]

    def act(self, i, v):
        return self.vertices[self._perms[i][self._pos[v]]]

    def act_cell(self, i, c):
        return self.complex.canonical(tuple(self.act(i, v) for v in c))

    def inverse(self, i):
        return self.table[i].index(0)

    def order_of(self, i):
        k, j = 1, i
        while j != 0:
            j = self.table[j][i]
            k += 1
        return k

    def orbit(self, c):
        c = self.complex.cell(c)
        return sorted({self.act_cell(i, c) for i in range(len(self))},
                      key=lambda x: [sort_key(v) for v in x])


def generate(X, generators, heights=None):
    """Close ``generators`` (vertex dicts) under composition."""
    vs = X.vertices
    pos = {v: i for i, v in enumerate(vs)}
    gens = [tuple(pos[g[v]] for v in vs) for g in generators]
    ident = tuple(range(len(vs)))
    seen = {ident}
    order = [ident]
    q = deque([ident])
    while q:
        a = q.popleft()
        for g in gens:
            b = tuple(g[a[i]] for i in range(len(vs)))
            if b not in seen:
                seen.add(b)
                order.append(b)
                q.append(b)
    return GroupAction(X, [{v: vs[p[i]] for i, v in enumerate(vs)} for p in order[1:]], heights)


def induced_dual_action(D, A):
    """Action on ``D`` induced by an action on the stratified base complex."""
    S = D.stratification
    X = S.complex
    elements = []
    for i in range(1, len(A)):
        g = {}
        for s in S.cells:
            img = A.act_cell(i, s.cube)
            if img not in X._cells:
                raise ActionNotStructurePreserving(f"cube {s.cube} is sent to a non-cube")
            g[s.id] = S.cell_of[img]
        elements.append(g)
    return GroupAction(D.carrier, elements, D.height)


def stabilizer(A, c):
    """Elements fixing ``c`` setwise and pointwise (as element indices)."""
    X = A.complex
    try:
        c = X.cell(c)
    except UnknownCell:
        raise
    setwise = [i for i in range(len(A)) if A.act_cell(i, c) == c]
    pointwise = [i for i in setwise if all(A.act(i, v) == v for v in c)]
    return Stabilizer(setwise, pointwise)


def acts_freely_away_from(A, branch):
    """Cubes avoiding ``branch`` with nontrivial setwise stabilizer (empty if free)."""
    bad = []
    for c in A.complex.cells():
        if branch.isdisjoint(c) and len(stabilizer(A, c).setwise) > 1:
            bad.append(c)
    return bad


def verify_stabilizer_lemmas(D, A, branch=None):
    """Check the cube-stabilizer statements for ``A`` acting on the dual ``D``."""
    branch = frozenset(D.branch if branch is None else branch)
    X = D.carrier
    for i in range(len(A)):
        for v in X.vertices:
            if D.height[A.act(i, v)] != D.height[v]:
                raise ActionNotStructurePreserving(f"element {i} changes the height of {v}")
        if {A.act(i, b) for b in branch} != branch:
            raise ActionNotStructurePreserving(f"element {i} does not preserve the branch set")
    stab = {c: frozenset(stabilizer(A, c).setwise) for c in X.cells()}
    not_free = acts_freely_away_from(A, branch)
    free = not not_free

    a_bad, b_bad, c_bad, d_bad = [], [], [], []
    b_checked = c_checked = 0
    for c in X.cells():
        v = D.min_vertex(c)
        if not stab[c] <= stab[(v,)]:
            a_bad.append(c)
        if v not in branch:
            b_checked += 1
            if stab[c] != stab[(v,)]:
                b_bad.append(c)
        elif len(c) > 1:
            c_checked += 1
            if len(stab[c]) != 1:
                c_bad.append(c)
    pairs = 0
    for c in X.cells():
        if not branch.isdisjoint(c):
            continue
        for y in sorted(branch):
            pairs += 1
            if len(stab[c] & stab[(y,)]) != 1:
                d_bad.append([c, y])

    def rep(name, bad, checked, conditional=True):
        if conditional and not free:
            return Report(name, NOT_APPLICABLE, counts={"checked": checked},
                          details={"reason": "action is not free away from branch vertices",
                                   "fixed_cubes": not_free[:5]})
        return Report(name, FAIL if bad else PASS, witnesses=bad[:1],
                      counts={"checked": checked, "violations": len(bad)})

    children = [
        rep("stab_in_min_vertex", a_bad, len(stab), conditional=False),
        rep("stab_equals_min_vertex", b_bad, b_checked),
        rep("branch_cube_trivial", c_bad, c_checked),
        rep("branch_intersection_trivial", d_bad, pairs),
    ]
    return combine("stabilizer_lemmas", children,
                   counts={"group_order": len(A), "branch_vertices": len(branch),
                           "free_away_from_branch": free})


def grid_rotation(m):
    """Quarter turn of the ``m`` by ``m`` grid about its centre."""
    return {(i, j): (m - j, i) for i in range(m + 1) for j in range(m + 1)}


def grid_reflection(m, n):
    """Reflection of the ``m`` by ``n`` grid in its vertical midline."""
    return {(i, j): (m - i, j) for i in range(m + 1) for j in range(n + 1)}
