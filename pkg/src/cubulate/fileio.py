"""Line-oriented text formats for complexes and permutation representations.

A complex file looks like::

    kind cubical
    dim 2
    vertices a b c d
    cell a b c d
    label a 00
    cone_points y
    branch y

Blank lines and ``#`` comments are ignored.  Cubical cells list their
vertices in binary-index order.  ``label`` lines give a folding (bit
strings for cubical complexes, colours for simplicial ones).
"""
from dataclasses import dataclass, field

from ._order import format_id, sort_key, sorted_ids
from .complexes import CubicalComplex, MarkedComplex, SimplicialComplex, _cell_key
from .errors import DuplicateVertexInCell, ParseError
from .folding import Folding

KINDS = ("simplicial", "cubical", "marked")
KEYWORDS = ("kind", "dim", "vertices", "cell", "label", "cone_points", "branch")


@dataclass
class ComplexFile:
    kind: str
    complex: object
    cone_points: tuple = ()
    folding: Folding = None
    branch: tuple = ()
    declared_dim: int = None

    def marked(self):
        return MarkedComplex.from_cone_points(self.complex, self.cone_points)


def _tokens(line):
    """``(column, token)`` pairs with 1-based columns."""
    out = []
    i = 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        out.append((i + 1, line[i:j]))
        i = j
    return out


def parse_complex(text):
    kind = None
    dim = None
    vertices = None
    cells = []
    labels = {}
    cone_points = []
    branch = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        (col, key), args = toks[0], toks[1:]
        if key not in KEYWORDS:
            raise ParseError(f"unknown field {key!r}", lineno, col)
        if key != "kind" and kind is None:
            raise ParseError("the first field must be 'kind'", lineno, col)
        if key == "kind":
            if kind is not None:
                raise ParseError("kind given twice", lineno, col)
            if len(args) != 1 or args[0][1] not in KINDS:
                c = args[0][0] if args else col + len(key)
                raise ParseError(f"kind must be one of {', '.join(KINDS)}", lineno, c)
            kind = args[0][1]
        elif key == "dim":
            if len(args) != 1 or not args[0][1].lstrip("-").isdigit():
                raise ParseError("dim takes one integer", lineno, args[0][0] if args else col)
            dim = int(args[0][1])
        elif key == "vertices":
            if vertices is None:
                vertices = {}
            for c, tok in args:
                if tok in vertices:
                    raise ParseError(f"vertex {tok!r} declared twice", lineno, c)
                vertices[tok] = lineno
        else:
            if vertices is None:
                raise ParseError("'vertices' must come before cells and labels", lineno, col)
            for c, tok in (args[:1] if key == "label" else args):
                if tok not in vertices:
                    raise ParseError(f"undeclared vertex {tok!r}", lineno, c)
            if key == "cell":
                if not args:
                    raise ParseError("empty cell", lineno, col)
                names = [t for _, t in args]
                if len(set(names)) != len(names):
                    dup = next(c for i, (c, t) in enumerate(args) if t in names[:i])
                    raise ParseError("cell repeats a vertex", lineno, dup)
                if kind == "cubical" and len(names) & (len(names) - 1):
                    raise ParseError("a cube needs a power-of-two number of vertices",
                                     lineno, args[0][0])
                cells.append(tuple(names))
            elif key == "label":
                if len(args) != 2:
                    raise ParseError("label takes a vertex and a value", lineno, col)
                c, val = args[1]
                if kind == "cubical":
                    if not val or any(ch not in "01" for ch in val):
                        raise ParseError("cubical labels are bit strings", lineno, c)
                    labels[args[0][1]] = tuple(int(ch) for ch in val)
                else:
                    if not val.isdigit():
                        raise ParseError("simplicial labels are colours 0..n", lineno, c)
                    labels[args[0][1]] = int(val)
            elif key == "cone_points":
                cone_points.extend(t for _, t in args)
            elif key == "branch":
                branch.extend(t for _, t in args)
    if kind is None:
        raise ParseError("missing 'kind'", 1, 1)
    if vertices is None:
        raise ParseError("missing 'vertices'", 1, 1)
    cells.extend((v,) for v in vertices)
    try:
        if kind == "cubical":
            X = CubicalComplex(cells)
        else:
            X = SimplicialComplex(cells)
    except DuplicateVertexInCell as exc:
        raise ParseError(str(exc), 1, 1) from None
    if dim is not None and dim != X.dim:
        raise ParseError(f"declared dim {dim} but the cells have dim {X.dim}", 1, 1)
    folding = None
    if labels:
        lens = {len(l) for l in labels.values()} if kind == "cubical" else {X.dim}
        if len(lens) != 1:
            raise ParseError("labels have different lengths", 1, 1)
        folding = Folding(lens.pop(), labels, "cubical" if kind == "cubical" else "simplicial")
    return ComplexFile(kind, X, tuple(cone_points), folding, tuple(branch), dim)


def read_complex(path):
    with open(path, encoding="utf-8") as fh:
        return parse_complex(fh.read())


def _string_ids(X):
    names = {v: format_id(v) for v in X.vertices}
    if len(set(names.values())) != len(names):
        raise ValueError("vertex ids collide once written as strings")
    if any(not n or any(ch.isspace() or ch == "#" for ch in n) for n in names.values()):
        raise ValueError("vertex ids must not contain whitespace or '#'")
    return names


def format_complex(X, cone_points=(), folding=None, branch=(), kind=None, comment=None):
    """Canonical text for ``X``: string ids, sorted vertices, maximal cells only."""
    names = _string_ids(X)
    Y = X.relabel(names) if any(names[v] != v for v in X.vertices) else X
    if kind is None:
        kind = X.kind if not (cone_points and X.kind == "simplicial") else "marked"
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"kind {kind}")
    lines.append(f"dim {Y.dim}")
    lines.append("vertices " + " ".join(sorted_ids(Y.vertices)))
    for c in sorted(Y.maximal_cells(), key=_cell_key):
        lines.append("cell " + " ".join(c))
    if cone_points:
        lines.append("cone_points " + " ".join(sorted_ids(names[y] for y in cone_points)))
    if folding is not None:
        for v in sorted(X.vertices, key=lambda v: sort_key(names[v])):
            lines.append(f"label {names[v]} {folding.label_string(v)}")
    if branch:
        lines.append("branch " + " ".join(sorted_ids(names[b] for b in branch)))
    return "\n".join(lines) + "\n"


def write_complex(path, X, **kw):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_complex(X, **kw))


# -- permutation representations --------------------------------------------------------

@dataclass
class RepFile:
    degree: int
    cycles: dict = field(default_factory=dict)


def parse_rep(text):
    """``degree d`` followed by ``name (cycles)`` lines, 1-based points."""
    from .covers import parse_cycles
    degree = None
    cycles = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        col, key = toks[0]
        if degree is None:
            if key != "degree" or len(toks) != 2 or not toks[1][1].isdigit():
                raise ParseError("the first line must be 'degree <d>'", lineno, col)
            degree = int(toks[1][1])
            if degree < 1:
                raise ParseError("degree must be positive", lineno, toks[1][0])
            continue
        if key in cycles:
            raise ParseError(f"generator {key!r} given twice", lineno, col)
        body = line[col - 1 + len(key):]
        try:
            cycles[key] = parse_cycles(body, degree)
        except ValueError as exc:
            c = toks[1][0] if len(toks) > 1 else col
            raise ParseError(str(exc), lineno, c) from None
    if degree is None:
        raise ParseError("missing 'degree'", 1, 1)
    return RepFile(degree, cycles)


def read_rep(path):
    with open(path, encoding="utf-8") as fh:
        return parse_rep(fh.read())
