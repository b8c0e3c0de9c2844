"""Text file formats for metrics and topologies.

Metric file::

    points: a b c
    a b = 1/2
    b a = 1

Every ordered off-diagonal pair must be listed unless ``sparse`` is set, in
which case missing pairs are 0. Topology file::

    points: a b
    open: a
    open: a b

The empty set is always open. ``#`` starts a comment.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .metrics import MetricError, QuasiPseudometric, validate
from .topology import FiniteTopology, TopologyError, validate_topology


class FormatError(ValueError):
    def __init__(self, source: str, line: int | None, message: str):
        self.source, self.line, self.message = source, line, message
        where = f"{source}:{line}" if line else source
        super().__init__(f"{where}: {message}")


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line


def _points(source: str, lines) -> tuple[int, list[str]]:
    try:
        n, first = next(lines)
    except StopIteration:
        raise FormatError(source, None, "empty file; expected 'points: ...'") from None
    key, _, rest = first.partition(":")
    if key.strip() != "points" or not rest.split():
        raise FormatError(source, n, "first line must be 'points: <names>'")
    pts = rest.split()
    if len(set(pts)) != len(pts):
        raise FormatError(source, n, "duplicate point names")
    if "e" in pts:
        raise FormatError(source, n, "'e' is reserved for the identity")
    return n, pts


def parse_fraction(text: str) -> Fraction:
    try:
        if "." in text or "e" in text.lower():
            raise ValueError
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"{text!r} is not an exact rational (use p/q or an integer)") from None


def parse_metric(text: str, sparse: bool = False, source: str = "<metric>") -> QuasiPseudometric:
    lines = _lines(text)
    _, pts = _points(source, lines)
    table: dict[tuple[str, str], Fraction] = {}
    where: dict[tuple[str, str], int] = {}
    for n, line in lines:
        lhs, eq, rhs = line.partition("=")
        names = lhs.split()
        if not eq or len(names) != 2:
            raise FormatError(source, n, f"expected 'x y = value', got {line!r}")
        x, y = names
        for p in names:
            if p not in pts:
                raise FormatError(source, n, f"unknown point {p!r}")
        if (x, y) in table:
            raise FormatError(source, n, f"pair ({x},{y}) given twice (first on line {where[x, y]})")
        try:
            table[x, y] = parse_fraction(rhs.strip())
        except ValueError as err:
            raise FormatError(source, n, str(err)) from None
        where[x, y] = n
    for x in pts:
        for y in pts:
            if (x, y) in table:
                continue
            if x == y or sparse:
                table[x, y] = Fraction(0)
            else:
                raise FormatError(source, None, f"missing pair ({x},{y}); pass --sparse to default it to 0")
    try:
        return validate(pts, table)
    except MetricError as err:
        key = _offending_pair(err)
        raise FormatError(source, where.get(key), f"{type(err).__name__}: {err}") from None


def _offending_pair(err: MetricError):
    x = getattr(err, "x", None)
    y = getattr(err, "y", x)
    return (x, y)


def format_metric(d: QuasiPseudometric) -> str:
    lines = ["points: " + " ".join(d.points)]
    for x, y, v in d.items():
        if x != y:
            lines.append(f"{x} {y} = {v}")
    return "\n".join(lines)


def parse_topology(text: str, source: str = "<topology>", name: str = "") -> FiniteTopology:
    lines = _lines(text)
    _, pts = _points(source, lines)
    opens: list[list[str]] = [[]]
    for n, line in lines:
        key, colon, rest = line.partition(":")
        if key.strip() != "open" or not colon:
            raise FormatError(source, n, f"expected 'open: <names>', got {line!r}")
        members = rest.split()
        for p in members:
            if p not in pts:
                raise FormatError(source, n, f"unknown point {p!r}")
        opens.append(members)
    try:
        return validate_topology(pts, opens, name=name)
    except TopologyError as err:
        raise FormatError(source, None, f"{type(err).__name__}: {err}") from None


def format_topology(t: FiniteTopology) -> str:
    return str(t)


def load_metric(path, sparse: bool = False) -> QuasiPseudometric:
    p = Path(path)
    return parse_metric(_read(p), sparse=sparse, source=str(p))


def load_topology(path) -> FiniteTopology:
    p = Path(path)
    return parse_topology(_read(p), source=str(p), name=p.stem)


def _read(p: Path) -> str:
    try:
        return p.read_text(encoding="utf-8")
    except OSError as err:
        raise FormatError(str(p), None, f"cannot read file: {err.strerror}") from None
