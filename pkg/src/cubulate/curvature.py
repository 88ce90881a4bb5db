"""Vertex links, flagness and Gromov's link condition for cube complexes."""
from ._order import sort_key, sorted_ids
from .complexes import link
from .errors import UnknownCell, UnknownVertex
from .report import FAIL, PASS, Report


def vertex_link(X, v):
    """Link of ``v``: one vertex per edge at ``v``, one simplex per cube at ``v``."""
    try:
        X.cell((v,))
    except UnknownCell:
        raise UnknownVertex(v) from None
    return link(X, (v,))


def is_flag(L):
    """``(True, None)`` or ``(False, clique)`` with a minimal clique spanning no simplex.

    Every minimal non-face has all its facets present, so it is found by
    extending some simplex by a common neighbour of its vertices.
    """
    adj = {v: set(L.neighbors(v)) for v in L.vertices}
    for s in sorted((c for c in L.cells() if len(c) >= 2),
                    key=lambda c: (len(c), [sort_key(v) for v in c])):
        common = set.intersection(*(adj[v] for v in s))
        for w in sorted_ids(common):
            cand = L.canonical(s + (w,))
            if cand in L._cells:
                continue
            if all(L.canonical(tuple(x for x in cand if x != u)) in L._cells for u in cand):
                return False, cand
    return True, None


def npc_certificate(X):
    """Check every vertex link is flag; accepts a cube complex or a dual complex."""
    carrier = getattr(X, "carrier", X)
    branch = getattr(X, "branch", frozenset())
    failures = []
    per_vertex = {}
    for v in carrier.vertices:
        L = vertex_link(carrier, v)
        ok, clique = is_flag(L)
        per_vertex[v] = {"link_f_vector": list(L.f_vector), "flag": ok}
        if v in branch:
            per_vertex[v]["branch"] = True
        if not ok:
            failures.append({"vertex": v, "clique": list(clique)})
    return Report(
        "npc", FAIL if failures else PASS,
        witnesses=failures[:1],
        counts={"vertices": len(carrier.vertices), "non_flag_vertices": len(failures)},
        details={"links": per_vertex},
    )
