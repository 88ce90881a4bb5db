"""Edge paths in a dual complex, bridges, projections and contraction certificates.

A loop is stored as its closed vertex sequence ``(v0, ..., vs)`` with
``vs == v0``.  Moves act on that sequence at a position ``k``:

``backtrack``  ``v[k-1] == v[k+1]``; drop ``v[k]`` and ``v[k+1]``.
``square``     replace ``v[k]`` by the fourth corner of a filled square.
``rotate``     restart the loop at ``v[k]``.
``project``    replace a minimal bridge starting at ``k`` by its projection;
               the move carries the ladder of tile-local rewrites that turns
               the bridge into the projection.
``replace``    (ladder step) swap a subpath for another with the same ends;
               carries a certificate contracting the loop they bound.

Position 0 of a closed loop is cyclic: its neighbours are ``v[s-1]`` and
``v[1]``.
"""
from collections import deque
from dataclasses import dataclass, field

from .errors import ProjectionUndefined, SearchExhausted


# -- paths --------------------------------------------------------------------------

class EdgePath:
    """Vertex sequence in a dual complex with consecutive vertices adjacent."""

    def __init__(self, D, vertices):
        vertices = tuple(vertices)
        if not vertices:
            raise ValueError("an edge path needs at least one vertex")
        adj = _adjacency(D)
        for a, b in zip(vertices, vertices[1:]):
            if b not in adj.get(a, ()):
                raise ValueError(f"{a} and {b} are not adjacent")
        if vertices[0] not in adj:
            raise ValueError(f"{vertices[0]} is not a vertex")
        self.D = D
        self.vertices = vertices

    def __repr__(self):
        return f"EdgePath({list(self.vertices)})"

    def __eq__(self, other):
        return isinstance(other, EdgePath) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __len__(self):
        return len(self.vertices) - 1

    @property
    def length(self):
        return len(self.vertices) - 1

    @property
    def closed(self):
        return self.vertices[0] == self.vertices[-1]

    def reversed(self):
        return EdgePath(self.D, self.vertices[::-1])


@dataclass(frozen=True)
class Bridge:
    path: EdgePath
    supporting_mirror: object
    start: int = 0

    @property
    def length(self):
        return self.path.length


@dataclass
class Move:
    kind: str
    position: int
    before: tuple = ()
    after: tuple = ()
    mirror: int = None
    tile: int = None
    length: int = None
    ladder: list = field(default_factory=list)
    proof: object = None

    def to_dict(self):
        out = {"kind": self.kind, "position": self.position, "length": self.length}
        if self.before:
            out["before"] = list(self.before)
            out["after"] = list(self.after)
        if self.mirror is not None:
            out["mirror"] = self.mirror
        if self.tile is not None:
            out["tile"] = self.tile
        if self.ladder:
            out["ladder"] = [m.to_dict() for m in self.ladder]
        if self.proof is not None:
            out["proof"] = self.proof.to_dict()
        return out


@dataclass
class ContractionCertificate:
    loop: tuple
    moves: list = field(default_factory=list)

    @property
    def lengths(self):
        return [len(self.loop) - 1] + [m.length for m in self.moves]

    def count(self, kind):
        return sum(1 for m in self.moves if m.kind == kind)

    def depth(self):
        """Nesting depth of ladder proofs."""
        inner = [m.proof.depth() for m in self.moves for m in [m] + m.ladder if m.proof]
        return 1 + max(inner, default=0)

    def to_dict(self):
        return {"loop": list(self.loop), "moves": [m.to_dict() for m in self.moves]}


# -- cached structure ---------------------------------------------------------------

def _cache(D):
    c = getattr(D, "_homotopy_cache", None)
    if c is None:
        c = {}
        D._homotopy_cache = c
    return c


def _adjacency(D):
    c = _cache(D)
    if "adj" not in c:
        c["adj"] = {v: frozenset(D.carrier.neighbors(v)) for v in D.carrier.vertices}
    return c["adj"]


def _tile_vertices(D):
    c = _cache(D)
    if "tiles" not in c:
        S = D.stratification
        c["tiles"] = {t: S.faces_of(t) for t in S.tiles}
    return c["tiles"]


def _mirror_vertices(D, M):
    return D.stratification.mirror_cells[M.id]


def containing_tile(D, vertices):
    """Smallest tile whose dual tile holds every vertex, or None."""
    vs = set(vertices)
    for t, faces in _tile_vertices(D).items():
        if vs <= faces:
            return t
    return None


def _squares_through(D, a, b, c):
    """Fourth corners ``d`` of filled squares with path ``a, b, c`` on the boundary."""
    adj = _adjacency(D)
    out = []
    for d in sorted(adj[a] & adj[c]):
        if d == b:
            continue
        sq = D.carrier.cell_by_vertices((a, b, c, d))
        if sq is not None and len(sq) == 4:
            out.append(d)
    return out


# -- crossings and bridges -------------------------------------------------------------

def _sides(D, M):
    """Components of the tile neighbourhood of ``D(M)`` with ``D(M)`` removed."""
    key = ("sides", M.id)
    c = _cache(D)
    if key in c:
        return c[key]
    inside = _mirror_vertices(D, M)
    near = set()
    for faces in _tile_vertices(D).values():
        if faces & inside:
            near |= faces
    near -= inside
    adj = _adjacency(D)
    comp = {}
    for v in sorted(near):
        if v in comp:
            continue
        comp[v] = v
        q = deque([v])
        while q:
            u = q.popleft()
            for w in adj[u]:
                if w in near and w not in comp:
                    comp[w] = v
                    q.append(w)
    c[key] = comp
    return comp


def crossings(p, M):
    """Number of maximal runs of ``p`` inside ``D(M)`` entered and left on different sides."""
    D = p.D
    inside = _mirror_vertices(D, M)
    vs = list(p.vertices)
    if p.closed:
        vs = vs[:-1]
        outside = [i for i, v in enumerate(vs) if v not in inside]
        if not outside:
            return 0
        r = outside[0]
        vs = vs[r:] + vs[:r] + [vs[r]]
    side = _sides(D, M)
    count = 0
    i = 0
    while i < len(vs):
        if vs[i] in inside and i > 0:
            j = i
            while j < len(vs) and vs[j] in inside:
                j += 1
            if j < len(vs) and side.get(vs[i - 1]) != side.get(vs[j]):
                count += 1
            i = j
        else:
            i += 1
    return count


def _bridge_mirror(D, vs):
    """Smallest mirror id making the vertex sequence ``vs`` a bridge, or None."""
    S = D.stratification
    common = S.mirrors_of(vs[0]) & S.mirrors_of(vs[-1])
    for mid in sorted(common):
        cells = S.mirror_cells[mid]
        if any(v not in cells for v in vs[1:-1]):
            return mid
    return None


def _is_minimal(D, vs):
    n = len(vs)
    for a in range(n):
        for b in range(a + 2, n):
            if (a, b) != (0, n - 1) and _bridge_mirror(D, vs[a:b + 1]) is not None:
                return False
    return True


def find_minimal_bridge(p):
    """Earliest-starting, then shortest, minimal bridge of ``p``.

    Closed loops are scanned cyclically and give None when they fit in one
    dual tile; open paths are scanned as they stand.
    """
    D = p.D
    S = D.stratification
    if p.closed:
        if containing_tile(D, p.vertices) is not None:
            return None
        base = list(p.vertices[:-1])
        s = len(base)
        seq = base + base + [base[0]]
        spans = [(a, L) for a in range(s) for L in range(2, s + 1)]
    else:
        seq = list(p.vertices)
        s = len(seq) - 1
        spans = [(a, L) for a in range(s + 1) for L in range(2, s - a + 1)]
    last_start = None
    for a, L in spans:
        if a == last_start:
            continue
        vs = seq[a:a + L + 1]
        mid = _bridge_mirror(D, vs)
        if mid is None:
            continue
        last_start = a
        if _is_minimal(D, vs):
            return Bridge(EdgePath(D, vs), S.mirrors[mid], a)
    return None


# -- projection -----------------------------------------------------------------------

def _face_in_tile(S, tile_cube, pattern):
    """Face of a tile cube whose labels match ``pattern`` (None = free)."""
    F = S.folding
    verts = [w for w in tile_cube
             if all(x is None or F.label(w)[i] == x for i, x in enumerate(pattern))]
    return S.cell_of[S.complex.cell_by_vertices(verts)]


def _tile_projection(S, tile, sigma, M):
    """``(projection, rung)`` of cell ``sigma`` onto ``M`` inside ``tile``."""
    i, side = M.family
    pat = list(S.cells[sigma].model_face)
    tcube = S.cells[tile].cube
    if pat[i] == side:
        return sigma, (sigma,)
    if pat[i] is None:
        pat[i] = side
        pi = _face_in_tile(S, tcube, pat)
        return pi, (sigma, pi)
    pat[i] = None
    join = _face_in_tile(S, tcube, pat)
    pat[i] = side
    pi = _face_in_tile(S, tcube, pat)
    return pi, (sigma, join, pi)


def _meets(S, tile, M):
    i, side = M.family
    facet = S.complex.cell_by_vertices(
        [w for w in S.cells[tile].cube if S.folding.label(w)[i] == side])
    return facet in M.carrier


def _ladder(D, vs, M):
    """Projected path and ladder steps ``(tile, A, B)`` for bridge vertices ``vs``."""
    S = D.stratification
    tiles = _tile_vertices(D)
    proj = [vs[0]]
    rungs = [(vs[0],)]
    steps = []
    for j in range(len(vs) - 1):
        a, b = vs[j], vs[j + 1]
        chosen = None
        for t in sorted(tiles):
            if a in tiles[t] and b in tiles[t] and _meets(S, t, M):
                pa, _ = _tile_projection(S, t, a, M)
                if pa == proj[-1]:
                    chosen = t
                    break
        if chosen is None:
            raise ProjectionUndefined(
                f"no tile meeting mirror {M.id} carries step {a}->{b} consistently")
        pb, rung_b = _tile_projection(S, chosen, b, M)
        step = (proj[-1], pb) if pb != proj[-1] else (proj[-1],)
        A = rungs[-1][::-1] + (b,)
        B = step + rung_b[::-1][1:]
        steps.append((chosen, A, B))
        proj.append(pb)
        rungs.append(rung_b)
    path = [proj[0]]
    for v in proj[1:]:
        if v != path[-1]:
            path.append(v)
    return tuple(path), steps


def project_bridge(b, bound=None):
    """Projection of a minimal bridge onto its supporting dual mirror."""
    path, _ = _project(b, bound, ladder=False)
    return path


def _project(b, bound=None, ladder=True):
    D = b.path.D
    vs = b.path.vertices
    M = b.supporting_mirror
    if _bridge_mirror(D, vs) is None or not _is_minimal(D, vs):
        raise ProjectionUndefined("the path is not a minimal bridge")
    proj, steps = _ladder(D, vs, M)
    if proj[0] != vs[0] or proj[-1] != vs[-1]:
        raise ProjectionUndefined("projection moved an endpoint")
    inside = _mirror_vertices(D, M)
    assert all(v in inside for v in proj)
    assert len(proj) - 1 <= len(vs) - 3, "projection failed to shorten the bridge"
    moves = []
    if ladder:
        cur = list(vs)
        pos = 0
        for tile, A, B in steps:
            if A == B:
                pos += len(A) - 1
                continue
            k = _find(cur, A, pos)
            loop = A + B[::-1][1:]
            proof = contract_in_tile(D, loop, bound, tile=tile)
            cur[k:k + len(A)] = B
            moves.append(Move("replace", k, A, B, tile=tile, length=len(cur) - 1, proof=proof))
            pos = k + len(B) - 1
        cur = _strip_stutter(cur)
        if tuple(cur) != proj:
            raise ProjectionUndefined("ladder did not reach the projection")
    return EdgePath(D, proj), moves


def _find(seq, sub, start):
    n = len(sub)
    for k in range(max(start - n, 0), len(seq) - n + 1):
        if tuple(seq[k:k + n]) == sub:
            return k
    raise ProjectionUndefined("ladder step does not match the current path")


def _strip_stutter(seq):
    out = [seq[0]]
    for v in seq[1:]:
        if v != out[-1]:
            out.append(v)
    return out


# -- loop moves ---------------------------------------------------------------------------

def _apply(loop, kind, k, new=None):
    """Apply a basic move to a closed vertex tuple."""
    s = len(loop) - 1
    v = list(loop)
    if kind == "backtrack":
        if k == 0:
            return tuple(v[1:s])
        return tuple(v[:k] + v[k + 2:])
    if kind == "square":
        if k == 0:
            v[0] = v[s] = new
        else:
            v[k] = new
        return tuple(v)
    if kind == "rotate":
        return tuple(v[k:s] + v[:k + 1])
    raise ValueError(kind)


def _nbrs(loop, k):
    s = len(loop) - 1
    if k == 0:
        return loop[s - 1], loop[0], loop[1]
    return loop[k - 1], loop[k], loop[k + 1]


def _backtrack_positions(loop):
    s = len(loop) - 1
    if s < 2:
        return []
    return [k for k in range(s) if _nbrs(loop, k)[0] == _nbrs(loop, k)[2]]


def _free_reduce(loop, moves):
    while True:
        ks = _backtrack_positions(loop)
        if not ks:
            return loop
        loop = _apply(loop, "backtrack", ks[0])
        moves.append(Move("backtrack", ks[0], length=len(loop) - 1))


def contract_in_tile(D, p, bound=None, tile=None):
    """Breadth-first search for square and backtrack moves contracting ``p``.

    Backtracks are removed eagerly; square moves stay inside the dual tile.
    ``bound`` caps the number of moves (default four times the length).
    """
    loop = tuple(p.vertices if isinstance(p, EdgePath) else p)
    if loop[0] != loop[-1]:
        raise ValueError("contract_in_tile needs a closed loop")
    if tile is None:
        tile = containing_tile(D, loop)
    allowed = _tile_vertices(D).get(tile)
    if allowed is None or not set(loop) <= allowed:
        raise ValueError("the loop does not lie in one dual tile")
    if bound is None:
        bound = 4 * (len(loop) - 1)
    start = loop
    parent = {start: None}
    frontier = [start]
    goal = start if len(start) == 1 else None
    depth = 0
    while goal is None and frontier and depth < bound:
        depth += 1
        nxt = []
        for state in frontier:
            for move, new in _tile_moves(D, state, allowed):
                if new in parent:
                    continue
                parent[new] = (state, move)
                if len(new) == 1:
                    goal = new
                    break
                nxt.append(new)
            if goal is not None:
                break
        frontier = nxt
    if goal is None:
        raise SearchExhausted(f"no contraction within {bound} moves", loop=loop)
    moves = []
    state = goal
    while parent[state] is not None:
        state, move = parent[state]
        moves.append(move)
    moves.reverse()
    return ContractionCertificate(start, moves)


def _tile_moves(D, loop, allowed):
    ks = _backtrack_positions(loop)
    if ks:
        new = _apply(loop, "backtrack", ks[0])
        yield Move("backtrack", ks[0], length=len(new) - 1), new
        return
    s = len(loop) - 1
    for k in range(s):
        a, b, c = _nbrs(loop, k)
        for d in _squares_through(D, a, b, c):
            if d in allowed:
                new = _apply(loop, "square", k, d)
                yield Move("square", k, (a, b, c), (a, d, c), length=s), new


def contract_loop(D, p, bound=None):
    """Certificate that the closed loop ``p`` is nullhomotopic.

    Loops inside one dual tile go to :func:`contract_in_tile`; otherwise the
    earliest minimal bridge is replaced by its projection, which shortens the
    loop by at least two, and the process repeats.
    """
    loop = tuple(p.vertices if isinstance(p, EdgePath) else p)
    if loop[0] != loop[-1]:
        raise ValueError("contract_loop needs a closed loop")
    EdgePath(D, loop)
    moves = []
    start = loop
    while True:
        loop = _free_reduce(loop, moves)
        if len(loop) == 1:
            return ContractionCertificate(start, moves)
        tile = containing_tile(D, loop)
        if tile is not None:
            try:
                moves.extend(contract_in_tile(D, loop, bound, tile=tile).moves)
            except SearchExhausted as exc:
                raise SearchExhausted(str(exc), loop=loop) from None
            return ContractionCertificate(start, moves)
        b = find_minimal_bridge(EdgePath(D, loop))
        if b is None:
            raise SearchExhausted("loop fits no dual tile and has no bridge", loop=loop)
        try:
            proj, ladder = _project(b, bound)
        except (ProjectionUndefined, SearchExhausted) as exc:
            raise SearchExhausted(f"projection failed: {exc}", loop=loop) from None
        s = len(loop) - 1
        if b.start + b.length > s:
            loop = _apply(loop, "rotate", b.start)
            moves.append(Move("rotate", b.start, length=s))
            k = 0
        else:
            k = b.start
        before = b.path.vertices
        after = proj.vertices
        loop = loop[:k] + after + loop[k + len(before):]
        moves.append(Move("project", k, before, after, mirror=b.supporting_mirror.id,
                          length=len(loop) - 1, ladder=ladder))


# -- independent validation ------------------------------------------------------------------

def validate_certificate(D, cert):
    """Replay a certificate against ``D`` alone; returns ``(ok, message)``."""
    try:
        _replay(D, cert)
    except _Invalid as exc:
        return False, str(exc)
    return True, "ok"


class _Invalid(Exception):
    pass


def _require(cond, msg):
    if not cond:
        raise _Invalid(msg)


def _is_path(D, vs):
    cells = D.carrier
    return all((a,) in cells._cells for a in vs) and all(
        cells.cell_by_vertices((a, b)) is not None and a != b for a, b in zip(vs, vs[1:]))


def _replay(D, cert):
    loop = tuple(cert.loop)
    _require(len(loop) >= 1 and loop[0] == loop[-1], "certificate loop is not closed")
    _require(_is_path(D, loop), "certificate loop is not an edge path")
    for i, m in enumerate(cert.moves):
        s = len(loop) - 1
        where = f"move {i} ({m.kind})"
        if m.kind == "backtrack":
            _require(s >= 2 and 0 <= m.position < s, f"{where}: bad position")
            a, _, c = _nbrs(loop, m.position)
            _require(a == c, f"{where}: no backtrack there")
            loop = _apply(loop, "backtrack", m.position)
        elif m.kind == "square":
            _require(0 <= m.position < s, f"{where}: bad position")
            a, b, c = _nbrs(loop, m.position)
            _require(tuple(m.before) == (a, b, c), f"{where}: recorded corner mismatch")
            d = m.after[1]
            sq = D.carrier.cell_by_vertices((a, b, c, d))
            _require(sq is not None and len(sq) == 4 and len({a, b, c, d}) == 4,
                     f"{where}: {a},{b},{c},{d} is not a filled square")
            loop = _apply(loop, "square", m.position, d)
        elif m.kind == "rotate":
            _require(0 <= m.position < max(s, 1), f"{where}: bad position")
            loop = _apply(loop, "rotate", m.position)
        elif m.kind == "project":
            loop = _replay_project(D, loop, m, where)
        else:
            raise _Invalid(f"{where}: unknown move")
        _require(m.length == len(loop) - 1, f"{where}: recorded length mismatch")
    _require(len(loop) == 1, "certificate does not end at a constant loop")


def _replay_project(D, loop, m, where):
    S = D.stratification
    k = m.position
    before, after = tuple(m.before), tuple(m.after)
    _require(0 <= k and k + len(before) <= len(loop), f"{where}: bridge out of range")
    _require(tuple(loop[k:k + len(before)]) == before, f"{where}: bridge not in loop")
    _require(0 <= m.mirror < len(S.mirrors), f"{where}: unknown mirror")
    inside = S.mirror_cells[m.mirror]
    _require(before[0] in inside and before[-1] in inside
             and any(v not in inside for v in before), f"{where}: not a bridge")
    _require(after[0] == before[0] and after[-1] == before[-1], f"{where}: endpoints moved")
    _require(all(v in inside for v in after), f"{where}: projection leaves the mirror")
    _require(_is_path(D, after), f"{where}: projection is not an edge path")
    _require(len(after) <= len(before) - 2, f"{where}: projection too long")
    cur = list(before)
    for j, step in enumerate(m.ladder):
        A, B = tuple(step.before), tuple(step.after)
        _require(tuple(cur[step.position:step.position + len(A)]) == A,
                 f"{where}: ladder step {j} does not match")
        _require(A[0] == B[0] and A[-1] == B[-1] and _is_path(D, B),
                 f"{where}: ladder step {j} is not a rewrite")
        _require(step.proof is not None and tuple(step.proof.loop) == A + B[::-1][1:],
                 f"{where}: ladder step {j} has no matching proof")
        ok, msg = validate_certificate(D, step.proof)
        _require(ok, f"{where}: ladder step {j}: {msg}")
        cur[step.position:step.position + len(A)] = B
    _require(tuple(_strip_stutter(cur)) == after, f"{where}: ladder does not reach projection")
    return loop[:k] + after + loop[k + len(before):]
