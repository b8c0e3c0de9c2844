"""Finite (Alexandroff) topological spaces and the inverse topology on X^-1.

Open sets are stored as integer bitmasks over the ordered point tuple. On a
finite space every point has a smallest open neighbourhood, so a topology is
the same thing as its specialization preorder; :func:`all_topologies` walks
preorders to produce every labelled topology on a small point set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .report import Report


class TopologyError(ValueError):
    pass


class MissingEmpty(TopologyError):
    pass


class MissingFull(TopologyError):
    pass


class NotClosedUnderUnion(TopologyError):
    def __init__(self, a: frozenset, b: frozenset):
        self.a, self.b = a, b
        super().__init__(f"union of {_fmt(a)} and {_fmt(b)} is not open")


class NotClosedUnderIntersection(TopologyError):
    def __init__(self, a: frozenset, b: frozenset):
        self.a, self.b = a, b
        super().__init__(f"intersection of {_fmt(a)} and {_fmt(b)} is not open")


class UnknownPoint(TopologyError, KeyError):
    def __str__(self) -> str:
        return f"unknown point {self.args[0]!r}"


def _fmt(s: Iterable[str]) -> str:
    return "{" + ",".join(s) + "}"


@dataclass(frozen=True)
class FiniteTopology:
    points: tuple[str, ...]
    opens: frozenset[int]
    name: str = field(default="", compare=False)

    # -- set <-> mask ---------------------------------------------------
    @property
    def full(self) -> int:
        return (1 << len(self.points)) - 1

    def index(self, x: str) -> int:
        try:
            return self.points.index(x)
        except ValueError:
            raise UnknownPoint(x) from None

    def mask(self, subset: Iterable[str]) -> int:
        m = 0
        for x in subset:
            m |= 1 << self.index(x)
        return m

    def names(self, mask: int) -> frozenset[str]:
        return frozenset(p for i, p in enumerate(self.points) if mask >> i & 1)

    def ordered(self, mask: int) -> tuple[str, ...]:
        return tuple(p for i, p in enumerate(self.points) if mask >> i & 1)

    # -- queries --------------------------------------------------------
    def is_open(self, subset: Iterable[str]) -> bool:
        return self.mask(subset) in self.opens

    def is_closed(self, subset: Iterable[str]) -> bool:
        return self.full & ~self.mask(subset) in self.opens

    def open_sets(self) -> list[frozenset[str]]:
        return [self.names(m) for m in sorted(self.opens, key=lambda m: (bin(m).count("1"), m))]

    def closed_masks(self) -> list[int]:
        return sorted(self.full & ~m for m in self.opens)

    def closed_sets(self) -> list[frozenset[str]]:
        return [self.names(m) for m in self.closed_masks()]

    def minimal_open_mask(self, i: int) -> int:
        m = self.full
        for u in self.opens:
            if u >> i & 1:
                m &= u
        return m

    def minimal_open(self, x: str) -> frozenset[str]:
        return self.names(self.minimal_open_mask(self.index(x)))

    def closure_mask(self, i: int) -> int:
        avoid = 0
        for u in self.opens:
            if not u >> i & 1:
                avoid |= u
        return self.full & ~avoid

    def closure(self, x: str) -> frozenset[str]:
        return self.names(self.closure_mask(self.index(x)))

    def is_T1(self) -> bool:
        return all(self.closure_mask(i) == 1 << i for i in range(len(self.points)))

    def is_discrete(self) -> bool:
        return len(self.opens) == 1 << len(self.points)

    def is_indiscrete(self) -> bool:
        return self.opens == frozenset({0, self.full})

    def label(self) -> str:
        if self.name:
            return self.name
        body = "".join(_fmt(self.ordered(m)) for m in sorted(self.opens) if m)
        return f"{''.join(self.points)}:{body}"

    def __str__(self) -> str:
        lines = ["points: " + " ".join(self.points)]
        for s in self.open_sets():
            if s:
                lines.append("open: " + " ".join(p for p in self.points if p in s))
        return "\n".join(lines)


def closure_point(t: FiniteTopology, x: str) -> frozenset[str]:
    return t.closure(x)


def is_T1(t: FiniteTopology) -> bool:
    return t.is_T1()


def validate_topology(
    points: Sequence[str], opens: Iterable[Iterable[str]], name: str = ""
) -> FiniteTopology:
    points = tuple(points)
    if len(set(points)) != len(points):
        raise TopologyError("duplicate point names")
    probe = FiniteTopology(points, frozenset(), name)
    masks = {probe.mask(u) for u in opens}
    if 0 not in masks:
        raise MissingEmpty("the empty set is not open")
    ordered = sorted(masks)
    for a, b in itertools.combinations(ordered, 2):
        if a | b not in masks:
            raise NotClosedUnderUnion(probe.names(a), probe.names(b))
    for a, b in itertools.combinations(ordered, 2):
        if a & b not in masks:
            raise NotClosedUnderIntersection(probe.names(a), probe.names(b))
    if probe.full not in masks:
        raise MissingFull("the whole space is not open")
    return FiniteTopology(points, frozenset(masks), name)


def generate_topology(
    points: Sequence[str], subbase: Iterable[int], name: str = ""
) -> FiniteTopology:
    """Coarsest topology in which every mask of ``subbase`` is open."""
    points = tuple(points)
    full = (1 << len(points)) - 1
    base = {full}
    frontier = set(subbase) | {full}
    while frontier:
        new = set()
        for a in frontier:
            for b in base | frontier:
                c = a & b
                if c not in base and c not in frontier:
                    new.add(c)
        base |= frontier
        frontier = new
    opens = {0}
    for b in sorted(base):
        opens |= {u | b for u in opens}
    return FiniteTopology(points, frozenset(opens), name)


def discrete(points: Sequence[str], name: str = "") -> FiniteTopology:
    n = len(points)
    return FiniteTopology(tuple(points), frozenset(range(1 << n)), name or f"discrete{n}")


def indiscrete(points: Sequence[str], name: str = "") -> FiniteTopology:
    n = len(points)
    return FiniteTopology(
        tuple(points), frozenset({0, (1 << n) - 1}), name or f"indiscrete{n}"
    )


def sierpinski(points: Sequence[str] = ("a", "b")) -> FiniteTopology:
    """Two points, only the first of which is open."""
    return FiniteTopology(tuple(points), frozenset({0, 1, 3}), "sierpinski")


def from_preorder(points: Sequence[str], above: Sequence[int], name: str = "") -> FiniteTopology:
    """Topology whose smallest neighbourhood of point ``i`` is the mask ``above[i]``."""
    n = len(points)
    opens = []
    for s in range(1 << n):
        if all(above[i] & ~s == 0 for i in range(n) if s >> i & 1):
            opens.append(s)
    return FiniteTopology(tuple(points), frozenset(opens), name)


def all_topologies(points: Sequence[str]) -> Iterator[FiniteTopology]:
    """Every labelled topology on ``points`` (1, 1, 4, 29, 355 for 0..4 points)."""
    points = tuple(points)
    n = len(points)
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    seen: set[frozenset[int]] = set()
    for bits in range(1 << len(pairs)):
        above = [1 << i for i in range(n)]
        for k, (i, j) in enumerate(pairs):
            if bits >> k & 1:
                above[i] |= 1 << j
        # transitivity: everything above j is above i whenever j is above i
        if any(
            above[i] >> j & 1 and above[j] & ~above[i]
            for i in range(n)
            for j in range(n)
        ):
            continue
        t = from_preorder(points, above)
        if t.opens not in seen:
            seen.add(t.opens)
            yield t


# -- the inverse topology ------------------------------------------------


def inverse_name(x: str) -> str:
    return f"{x}^-1"


@dataclass(frozen=True)
class InverseTopology:
    """The topology on X^-1 with base ``{cl(x)^-1 : x in X}``.

    ``topology`` has the same point order as ``base`` with names ``x^-1``.
    """

    base: FiniteTopology
    topology: FiniteTopology

    def basic_set(self, x: str) -> frozenset[str]:
        return frozenset(inverse_name(y) for y in self.base.closure(x))

    def smallest_neighbourhood(self, x: str) -> frozenset[str]:
        return self.topology.minimal_open(inverse_name(x))

    def invert_mask(self, mask: int) -> frozenset[str]:
        return self.topology.names(mask)


def inverse_topology(t: FiniteTopology) -> InverseTopology:
    inv_points = tuple(inverse_name(p) for p in t.points)
    basics = [t.closure_mask(i) for i in range(len(t.points))]
    opens = {0}
    for b in basics:
        opens |= {u | b for u in opens}
    inv = FiniteTopology(inv_points, frozenset(opens), f"T_A({t.label()})")
    return InverseTopology(t, inv)


def check_rez_duality(t: FiniteTopology) -> Report:
    """``a in cl_X(b)`` iff ``b^-1 in cl(a^-1)``, the right side taken in T_A."""
    inv = inverse_topology(t).topology
    report = Report()
    for i, a in enumerate(t.points):
        for j, b in enumerate(t.points):
            left = bool(t.closure_mask(j) >> i & 1)
            right = bool(inv.closure_mask(i) >> j & 1)
            report.add(
                "rez_duality",
                f"{t.label()}:({a},{b})",
                left == right,
                "" if left == right else f"left={left} right={right}",
            )
    return report


def check_reznichenko(t: FiniteTopology) -> Report:
    """Every closed ``A`` has ``A^-1`` open in T_A."""
    inv = inverse_topology(t).topology
    report = Report()
    for c in t.closed_masks():
        ok = c in inv.opens
        report.add(
            "reznichenko_open",
            f"{t.label()}:{_fmt(t.ordered(c))}",
            ok,
            "" if ok else f"{_fmt(inv.ordered(c))} not open in T_A",
        )
    return report


# -- topologies generated by quasi-pseudometric balls --------------------


def ball_thresholds(values: Iterable[Fraction]) -> list[Fraction]:
    """Radii at which a finite ball family can change: the positive table
    values plus one radius above the maximum."""
    vals = sorted(set(values))
    top = vals[-1] if vals else Fraction(0)
    return [v for v in vals if v > 0] + [top + 1]


def topology_from_distance(
    points: Sequence[str], dist, name: str = ""
) -> FiniteTopology:
    """Topology generated by all balls ``{y : dist(x, y) < r}``.

    ``dist`` is any callable on point names returning exact rationals.
    """
    points = tuple(points)
    table = {(x, y): dist(x, y) for x in points for y in points}
    subbase = set()
    for r in ball_thresholds(table.values()):
        for x in points:
            m = 0
            for j, y in enumerate(points):
                if table[x, y] < r:
                    m |= 1 << j
            subbase.add(m)
    return generate_topology(points, subbase, name)


@dataclass
class FamilyComparison:
    space: FiniteTopology
    family_size: int
    family_topology: FiniteTopology
    t_a: FiniteTopology

    @property
    def included(self) -> bool:
        return self.family_topology.opens <= self.t_a.opens

    @property
    def equal(self) -> bool:
        return self.family_topology.opens == self.t_a.opens

    def report(self) -> Report:
        r = Report()
        extra = self.family_topology.opens - self.t_a.opens
        r.add(
            "family_subset_T_A",
            self.space.label(),
            self.included,
            "" if self.included else "extra " + ";".join(
                _fmt(self.t_a.ordered(m)) for m in sorted(extra)
            ),
        )
        missing = self.t_a.opens - self.family_topology.opens
        r.add(
            "family_equals_T_A",
            self.space.label(),
            self.equal,
            "" if self.equal else "missing " + ";".join(
                _fmt(self.t_a.ordered(m)) for m in sorted(missing)
            ),
        )
        return r


DEFAULT_FAMILY_CAP = 1 << 12


def graev_family_topology_on_inverse(
    t: FiniteTopology, n_family_cap: int = DEFAULT_FAMILY_CAP, max_points: int = 5
) -> FamilyComparison:
    """Compare T_A with the topology that Graev extensions of finitely many
    bounded usc quasi-pseudometrics induce on X^-1.

    The family is every pointwise max of a non-empty set of the metrics
    ``rho_U`` (``U`` open, ``U`` neither empty nor everything); the zero
    metric stands in when no such ``U`` exists.
    """
    from .graev import GraevExtension
    from .metrics import max_combine, rho_from_open_set, zero_metric
    from .words import ReducedWord, Letter
    from .words import CapExceeded

    if len(t.points) > max_points:
        raise CapExceeded(f"{len(t.points)} points exceeds the cap of {max_points}")
    proper = [m for m in sorted(t.opens) if m not in (0, t.full)]
    n_subsets = (1 << len(proper)) - 1
    if n_subsets > n_family_cap:
        raise CapExceeded(f"{n_subsets} metrics in the family exceeds the cap {n_family_cap}")
    rhos = [rho_from_open_set(t.names(m), t) for m in proper]
    family = []
    for bits in range(1, 1 << len(rhos)):
        family.append(max_combine([r for k, r in enumerate(rhos) if bits >> k & 1]))
    if not family:
        family.append(zero_metric(t.points))

    inv_points = tuple(inverse_name(p) for p in t.points)
    subbase = set()
    for d in family:
        ext = GraevExtension(d)
        inv = {p: ReducedWord((Letter(p, -1),)) for p in t.points}
        table = {
            (x, y): ext.distance(inv[x], inv[y]) for x in t.points for y in t.points
        }
        for r in ball_thresholds(table.values()):
            for x in t.points:
                m = 0
                for j, y in enumerate(t.points):
                    if table[x, y] < r:
                        m |= 1 << j
                subbase.add(m)
    fam_top = generate_topology(inv_points, subbase, f"family({t.label()})")
    return FamilyComparison(t, len(family), fam_top, inverse_topology(t).topology)
