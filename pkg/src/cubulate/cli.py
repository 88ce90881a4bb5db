"""Command line front end.

Every subcommand prints a JSON report on stdout.  Exit status is 0 when all
checks pass, 1 when a check fails (the report carries a witness) and 2 on
bad input.  ``--emit-dir`` writes intermediate complexes and certificates.
"""
import argparse
import json
import os
import sys

import networkx as nx

from . import fixtures
from ._order import sort_key
from .complexes import (
    MarkedComplex,
    boundary_cells,
    cubify,
    non_top_maximal_cells,
)
from .covers import PermRep, branched_cover, build_cover, pi1_presentation
from .curvature import npc_certificate
from .dual import dualize
from .errors import CubulateError, NotFoldable, ParseError, SearchExhausted
from .fileio import format_complex, read_complex, read_rep
from .folding import compute_folding, simplicial_folding, verify_folding
from .homotopy import contract_loop, validate_certificate
from .report import FAIL, PASS, Report, combine, jsonable
from .strata import mirror_structure_check, separation_check, stratify


class InputError(Exception):
    pass


# -- helpers ---------------------------------------------------------------------------

def _load(path):
    try:
        return read_complex(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _emit(args, name, text):
    if not getattr(args, "emit_dir", None):
        return
    os.makedirs(args.emit_dir, exist_ok=True)
    with open(os.path.join(args.emit_dir, name), "w", encoding="utf-8") as fh:
        fh.write(text)


def _dump(obj):
    return json.dumps(jsonable(obj), indent=2) + "\n"


def _cubical_input(cf, args):
    X = cf.complex
    if X.kind == "simplicial":
        if not getattr(args, "cubify", False):
            raise InputError("this command needs a cubical complex (use --cubify)")
        return cubify(X), None
    return X, cf.folding


def _folding_for(X, given):
    if given is not None:
        ok, witness = verify_folding(X, given)
        if not ok:
            raise InputError(f"the labels in the file do not fold cube {witness}")
        return given
    return compute_folding(X)


def _not_foldable_report(exc):
    wit = exc.cycle if exc.cycle is not None else exc.cubes
    return Report("folding", FAIL, witnesses=[wit] if wit else [],
                  details={"obstruction": exc.kind, "message": str(exc)})


def _branch_ids(S, cf):
    names = cf.branch or cf.cone_points
    return [S.cell_of[S.complex.cell((v,))] for v in names]


def _canonical_cycle(cycle):
    """Rotate to start at the least vertex, heading to its smaller neighbour."""
    i = min(range(len(cycle)), key=lambda k: sort_key(cycle[k]))
    c = cycle[i:] + cycle[:i]
    if len(c) > 2 and sort_key(c[-1]) < sort_key(c[1]):
        c = [c[0]] + c[1:][::-1]
    return tuple(c) + (c[0],)


def contraction_loops(D):
    """Generator loops of the edge-path group of ``D`` plus its boundary cycles."""
    carrier = D.carrier
    P = pi1_presentation(carrier)
    loops = []
    for i in range(len(P.generators)):
        loops.append(("generator", P.names[i], tuple(P.generator_loop(i))))
    if carrier.dim >= 2:
        g = nx.Graph()
        for e in boundary_cells(carrier):
            if len(e) == 2:
                g.add_edge(*e)
        for k, cyc in enumerate(sorted((_canonical_cycle(c) for c in nx.cycle_basis(g)),
                                       key=lambda c: [sort_key(v) for v in c])):
            loops.append(("boundary", f"b{k + 1}", cyc))
    return loops


def _contract_all(D, loops, bound):
    children = []
    certs = []
    for kind, name, loop in loops:
        try:
            cert = contract_loop(D, loop, bound)
        except SearchExhausted as exc:
            children.append(Report(f"contract[{name}]", FAIL, witnesses=[list(exc.loop or loop)],
                                   counts={"length": len(loop) - 1},
                                   details={"loop": list(loop), "kind": kind,
                                            "reason": f"SearchExhausted: {exc}"}))
            continue
        ok, msg = validate_certificate(D, cert)
        children.append(Report(f"contract[{name}]", PASS if ok else FAIL,
                               witnesses=[] if ok else [msg],
                               counts={"length": len(loop) - 1, "moves": len(cert.moves),
                                       "projections": cert.count("project")},
                               details={"loop": list(loop), "kind": kind}))
        certs.append({"name": name, "certificate": cert.to_dict()})
    return combine("contraction", children, counts={"loops": len(loops)}), certs


# -- subcommands ---------------------------------------------------------------------------

def cmd_check(args):
    cf = _load(args.path)
    X = cf.complex
    inhom = non_top_maximal_cells(X)
    bdry = boundary_cells(X)
    children = [
        Report("valid", PASS, counts={"dim": X.dim, "f_vector": list(X.f_vector),
                                      "euler_characteristic": X.euler_characteristic()}),
        Report("homogeneous", FAIL if inhom else PASS, witnesses=inhom[:1],
               counts={"non_top_maximal": len(inhom)}),
        Report("without_boundary", FAIL if bdry else PASS, witnesses=bdry[:1],
               counts={"boundary_cells": len(bdry)}),
    ]
    if cf.cone_points:
        bad = MarkedComplex.from_cone_points(X, cf.cone_points).verify()
        children.append(Report("cone_points", FAIL if bad else PASS, witnesses=bad[:1],
                               counts={"cone_points": len(cf.cone_points)}))
    if cf.folding is not None:
        ok, witness = verify_folding(X, cf.folding)
        children.append(Report("folding", PASS if ok else FAIL,
                               witnesses=[] if ok else [witness]))
    return combine("check", children), None


def cmd_fold(args):
    cf = _load(args.path)
    X = cf.complex
    try:
        if X.kind == "simplicial" and not args.cubify:
            F = simplicial_folding(X)
        else:
            X, _ = _cubical_input(cf, args)
            F = compute_folding(X)
    except NotFoldable as exc:
        return _not_foldable_report(exc), None
    _emit(args, "folded.cx", format_complex(X, folding=F))
    labels = {v: F.label_string(v) for v in X.vertices}
    return Report("folding", PASS, counts={"target_dim": F.target_dim},
                  details={"labels": labels}), None


def _stratified(cf, args):
    X, given = _cubical_input(cf, args)
    F = _folding_for(X, given)
    return X, F, stratify(X, F)


def cmd_stratify(args):
    cf = _load(args.path)
    try:
        X, F, S = _stratified(cf, args)
    except NotFoldable as exc:
        return _not_foldable_report(exc), None
    seps = [separation_check(X, F, M) for M in S.mirrors]
    mirrors = [{"id": M.id, "family": list(M.family), "cubes": len(M.carrier)}
               for M in S.mirrors]
    children = [mirror_structure_check(X, F), combine("separation", seps)]
    return combine("stratify", children,
                   counts={"cells": len(S.cells), "cells_by_dim": list(S.cell_counts()),
                           "tiles": len(S.tiles), "mirrors": len(S.mirrors)},
                   details={"mirrors": mirrors}), None


def _dual_report(D):
    return Report("dual", PASS if D.filling_consistent else FAIL,
                  witnesses=list(D.unfilled[:1]),
                  counts={"f_vector": list(D.f_vector),
                          "euler_characteristic": D.carrier.euler_characteristic(),
                          "non_boolean_intervals": len(D.non_boolean),
                          "branch_vertices": len(D.branch)})


def _dual_text(D):
    return format_complex(D.carrier, branch=sorted(D.branch))


def cmd_dual(args):
    cf = _load(args.path)
    try:
        X, F, S = _stratified(cf, args)
    except NotFoldable as exc:
        return _not_foldable_report(exc), None
    D = dualize(S, _branch_ids(S, cf))
    _emit(args, "dual.cx", _dual_text(D))
    rep = _dual_report(D)
    rep.details["heights"] = {v: D.height[v] for v in D.carrier.vertices}
    rep.details["dual_of"] = {v: D.dual_of[v].cube for v in D.carrier.vertices}
    return rep, None


def cmd_npc(args):
    cf = _load(args.path)
    X, _ = _cubical_input(cf, args)
    rep = npc_certificate(X)
    if not args.verbose:
        rep.details = {}
    return rep, None


def cmd_contract(args):
    cf = _load(args.path)
    try:
        X, F, S = _stratified(cf, args)
    except NotFoldable as exc:
        return _not_foldable_report(exc), None
    D = dualize(S, _branch_ids(S, cf))
    if args.loop:
        try:
            loop = tuple(int(x) for x in args.loop.split(","))
        except ValueError:
            raise InputError("--loop takes comma-separated dual vertex ids") from None
        loops = [("given", "loop", loop)]
    else:
        loops = contraction_loops(D)
    rep, certs = _contract_all(D, loops, args.bound)
    _emit(args, "certificates.json", _dump(certs))
    return rep, None


def cmd_pipeline(args):
    cf = _load(args.path)
    X, given = _cubical_input(cf, args)
    try:
        F = _folding_for(X, given)
    except NotFoldable as exc:
        return combine("pipeline", [_not_foldable_report(exc)]), None
    S = stratify(X, F)
    D = dualize(S, _branch_ids(S, cf))
    _emit(args, "folded.cx", format_complex(X, folding=F))
    _emit(args, "dual.cx", _dual_text(D))
    npc = npc_certificate(D)
    npc.details = {}
    children = [
        Report("folding", PASS, counts={"target_dim": F.target_dim}),
        Report("stratify", PASS, counts={"cells": len(S.cells),
                                         "cells_by_dim": list(S.cell_counts()),
                                         "mirrors": len(S.mirrors)}),
        _dual_report(D),
        npc,
    ]
    if args.contract:
        rep, certs = _contract_all(D, contraction_loops(D), args.bound)
        children.append(rep)
        _emit(args, "certificates.json", _dump(certs))
    report = combine("pipeline", children)
    _emit(args, "report.json", _dump(report))
    return report, None


def cmd_cover(args):
    cf = _load(args.path)
    try:
        rf = read_rep(args.rep)
    except OSError as exc:
        raise InputError(f"cannot read {args.rep}: {exc.strerror}") from None
    rho = PermRep(rf.degree, rf.cycles)
    X = cf.complex
    if args.branched:
        if not cf.cone_points:
            raise InputError("--branched needs cone_points in the complex file")
        marked = MarkedComplex.from_cone_points(X, cf.cone_points)
        P = pi1_presentation(marked.punctured())
        cover = branched_cover(marked, rho, P)
        d = rho.degree
        over = {y: sum(1 for c in cover.branch_points if c[0] == y) for y in marked.cone_points}
        defect = sum(d - n for n in over.values())
        expected = d * X.euler_characteristic() - defect
        formula = (f"d*chi(base) - sum(d - preimages) = {d}*{X.euler_characteristic()}"
                   f" - {defect}")
    else:
        P = pi1_presentation(X)
        cover = build_cover(X, rho, P)
        expected = rho.degree * X.euler_characteristic()
        formula = f"d*chi(base) = {rho.degree}*{X.euler_characteristic()}"
    chi = cover.total.euler_characteristic()
    euler = Report("euler", PASS if chi == expected else FAIL,
                   counts={"euler_total": chi, "expected": expected},
                   details={"formula": formula})
    _emit(args, "cover.cx", format_complex(cover.total, cone_points=list(cover.branch_points)))
    rep = combine("cover", [cover.verify(), euler],
                  counts={"degree": rho.degree, "f_vector": list(cover.total.f_vector),
                          "connected": cover.total.is_connected()})
    return rep, None


def cmd_pi1(args):
    cf = _load(args.path)
    X = cf.complex
    if args.punctured:
        X = MarkedComplex.from_cone_points(X, cf.cone_points).punctured()
    P = pi1_presentation(X, args.basepoint)
    free, torsion = P.abelianization()
    return Report("pi1", PASS,
                  counts={"generators": len(P.generators), "relators": len(P.relators),
                          "free_rank": free},
                  details={"basepoint": P.basepoint,
                           "generators": {n: list(e) for n, e in zip(P.names, P.generators)},
                           "relators": [P.format_word(r) for r in P.relators],
                           "torsion": torsion,
                           "abelianization": P.abelianization_string()}), None


FIXTURES = {
    "square": lambda: (fixtures.single_square(), {"folding": fixtures.grid_folding(1, 1)}),
    "strip": lambda: (fixtures.strip(), {"folding": fixtures.grid_folding(2, 1)}),
    "grid2x2": lambda: (fixtures.grid(2, 2), {"folding": fixtures.grid_folding(2, 2)}),
    "grid3x3": lambda: (fixtures.grid(3, 3), {"folding": fixtures.grid_folding(3, 3)}),
    "torus3x3": lambda: (fixtures.torus_grid(3, 3), {}),
    "torus4x4": lambda: (fixtures.torus_grid(4, 4), {"folding": fixtures.torus_folding(4, 4)}),
    "cube-boundary": lambda: (fixtures.cube_boundary(), {}),
    "cycle3": lambda: (fixtures.cycle_graph(3), {}),
    "cycle4": lambda: (fixtures.cycle_graph(4), {}),
    "wheel6": lambda: (fixtures.cubical_wheel(6), {"cone_points": ["y"]}),
    "triangle": lambda: (fixtures.single_triangle(), {}),
    "two-triangles": lambda: (fixtures.two_triangles_at_vertex(), {}),
    "annulus-coned": lambda: _coned_annulus(),
    "cone6": lambda: (fixtures.cone_over_cycle(6), {"cone_points": ["y"]}),
    "suspension5": lambda: (fixtures.suspension_of_cycle(5), {"cone_points": ["n", "s"]}),
    "octahedron": lambda: (fixtures.octahedron(), {}),
}


def _coned_annulus():
    m = fixtures.coned_annulus(4)
    return m.base, {"cone_points": list(m.cone_points)}


def cmd_fixture(args):
    X, kw = FIXTURES[args.name]()
    sys.stdout.write(format_complex(X, **kw))
    return None, 0


# -- entry point --------------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="cubulate",
        description="Fold, stratify and dualize cell complexes; certify curvature, "
                    "contract loops and build covers.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, cubical=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("path", help="complex file")
        p.add_argument("--emit-dir", help="write intermediate files here")
        if cubical:
            p.add_argument("--cubify", action="store_true",
                           help="cubify a simplicial input first")
        p.set_defaults(func=func)
        return p

    add("check", cmd_check, "validity, homogeneity and boundary checks")
    add("fold", cmd_fold, "compute a folding", cubical=True)
    add("stratify", cmd_stratify, "cells, mirrors and separation", cubical=True)
    add("dual", cmd_dual, "build the dual cube complex", cubical=True)
    p = add("npc", cmd_npc, "Gromov link condition on a cube complex", cubical=True)
    p.add_argument("--verbose", action="store_true", help="include every vertex link")
    p = add("contract", cmd_contract, "contract loops in the dual complex", cubical=True)
    p.add_argument("--loop", help="comma-separated dual vertex ids of one closed loop")
    p.add_argument("--bound", type=int, default=None,
                   help="move bound for the in-tile search (default 4 x length)")
    p = add("pipeline", cmd_pipeline, "fold, stratify, dualize, npc, contract", cubical=True)
    p.add_argument("--contract", action="store_true", help="contract the generator loops")
    p.add_argument("--bound", type=int, default=None,
                   help="move bound for the in-tile search (default 4 x length)")
    p = add("cover", cmd_cover, "finite or branched cover from a permutation rep")
    p.add_argument("rep", help="representation file")
    p.add_argument("--branched", action="store_true", help="branch over the cone points")
    p = add("pi1", cmd_pi1, "edge-path group presentation")
    p.add_argument("--basepoint", default=None)
    p.add_argument("--punctured", action="store_true",
                   help="remove the open stars of the cone points first")
    p = sub.add_parser("fixture", help="print a built-in example complex")
    p.add_argument("name", choices=sorted(FIXTURES))
    p.set_defaults(func=cmd_fixture)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        report, code = args.func(args)
    except (InputError, ParseError, CubulateError, ValueError) as exc:
        msg = {"error": type(exc).__name__, "message": str(exc)}
        sys.stdout.write(json.dumps(msg, indent=2) + "\n")
        return 2
    if report is None:
        return code
    sys.stdout.write(_dump(report))
    return 1 if report.failed else 0


if __name__ == "__main__":
    sys.exit(main())
