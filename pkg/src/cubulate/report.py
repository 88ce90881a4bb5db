"""Structured check results shared by every verification routine."""
from dataclasses import dataclass, field

from ._order import format_id, sorted_ids

PASS = "PASS"
FAIL = "FAIL"
NOT_APPLICABLE = "NOT-APPLICABLE"


def jsonable(obj):
    """Convert nested results into JSON-safe values with string ids."""
    if isinstance(obj, Report):
        return obj.to_dict()
    if isinstance(obj, dict):
        return {format_id(k) if not isinstance(k, str) else k: jsonable(v)
                for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return [jsonable(x) for x in sorted_ids(obj)]
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return format_id(obj)


@dataclass
class Report:
    check: str
    status: str
    witnesses: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    children: list = field(default_factory=list)

    @property
    def passed(self):
        return self.status == PASS

    @property
    def failed(self):
        return self.status == FAIL or any(c.failed for c in self.children)

    def to_dict(self):
        out = {"check": self.check, "status": self.status}
        if self.witnesses:
            out["witnesses"] = jsonable(self.witnesses)
        if self.counts:
            out["counts"] = jsonable(self.counts)
        if self.details:
            out["details"] = jsonable(self.details)
        if self.children:
            out["children"] = [c.to_dict() for c in self.children]
        return out

    def lines(self, indent=0):
        pad = "  " * indent
        yield f"{pad}{self.check}: {self.status}"
        for c in self.children:
            yield from c.lines(indent + 1)


def combine(check, children, **kw):
    """Aggregate child reports: FAIL if any child failed, else PASS."""
    status = FAIL if any(c.failed for c in children) else PASS
    return Report(check, status, children=list(children), **kw)
