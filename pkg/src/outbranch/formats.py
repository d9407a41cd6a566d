"""Text formats: edge lists for digraphs, parent arrays for out-branchings.

Edge list::

    n m
    u v        # m arc lines, 0-indexed; '#' starts a comment

Parent array::

    root r
    v parent(v)   # one line per non-root vertex
"""

from __future__ import annotations

from .digraph import Digraph
from .outtree import OutTree

__all__ = ["InstanceFormatError", "parse_instance", "format_instance", "parse_witness", "format_witness"]


class InstanceFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield lineno, body.split()


def _ints(fields, lineno, expected):
    if len(fields) != expected:
        raise InstanceFormatError(f"expected {expected} fields, got {len(fields)}", lineno)
    try:
        return [int(f) for f in fields]
    except ValueError:
        raise InstanceFormatError(f"non-integer field in {' '.join(fields)!r}", lineno) from None


def parse_instance(text: str) -> Digraph:
    lines = _content_lines(text)
    try:
        lineno, fields = next(lines)
    except StopIteration:
        raise InstanceFormatError("missing header 'n m'") from None
    n, m = _ints(fields, lineno, 2)
    if n < 0 or m < 0:
        raise InstanceFormatError("negative count in header", lineno)
    g = Digraph(n)
    count = 0
    for lineno, fields in lines:
        u, v = _ints(fields, lineno, 2)
        count += 1
        if count > m:
            raise InstanceFormatError(f"more than the declared {m} arcs", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise InstanceFormatError(f"vertex index out of range [0, {n})", lineno)
        if u == v:
            raise InstanceFormatError(f"self-loop at vertex {u}", lineno)
        if not g.add_arc(u, v):
            raise InstanceFormatError(f"duplicate arc {u} {v}", lineno)
    if count != m:
        raise InstanceFormatError(f"declared {m} arcs, found {count}")
    return g


def format_instance(g: Digraph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.arcs())
    return "\n".join(lines) + "\n"


def format_witness(t: OutTree) -> str:
    lines = [f"root {t.root}"]
    lines.extend(f"{v} {p}" for v, p in sorted(t.parent.items()))
    return "\n".join(lines) + "\n"


def parse_witness(text: str) -> OutTree:
    lines = _content_lines(text)
    try:
        lineno, fields = next(lines)
    except StopIteration:
        raise InstanceFormatError("missing 'root r' line") from None
    if len(fields) != 2 or fields[0] != "root":
        raise InstanceFormatError("first line must be 'root r'", lineno)
    (root,) = _ints(fields[1:], lineno, 1)
    parent: dict[int, int] = {}
    for lineno, fields in lines:
        v, p = _ints(fields, lineno, 2)
        if v in parent or v == root:
            raise InstanceFormatError(f"vertex {v} given a parent twice", lineno)
        parent[v] = p
    try:
        return OutTree.from_parents(root, parent)
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from None
