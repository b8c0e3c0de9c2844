"""Exact-rational quasi-pseudometrics on finite point sets.

Distances are :class:`fractions.Fraction` throughout. Symmetry is never
assumed: ``d(x, y)`` and ``d(y, x)`` are independent table entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

from .topology import ball_thresholds
from .words import E, Letter

if TYPE_CHECKING:
    from .topology import FiniteTopology

ONE = Fraction(1)
TWO = Fraction(2)


class MetricError(ValueError):
    violations: list["MetricError"]


class NotSquare(MetricError):
    pass


class NegativeEntry(MetricError):
    def __init__(self, x: str, y: str, value: Fraction):
        self.x, self.y, self.value = x, y, value
        super().__init__(f"d({x},{y}) = {value} is negative")


class ZeroDiagonalViolation(MetricError):
    def __init__(self, x: str, value: Fraction):
        self.x, self.value = x, value
        super().__init__(f"d({x},{x}) = {value}, expected 0")


class TriangleViolation(MetricError):
    """``d(x, y) > d(x, z) + d(z, y)``; reported as ``(x, z, y)``."""

    def __init__(self, x: str, z: str, y: str, lhs: Fraction, rhs: Fraction):
        self.x, self.z, self.y = x, z, y
        self.lhs, self.rhs = lhs, rhs
        super().__init__(f"d({x},{y}) = {lhs} > d({x},{z}) + d({z},{y}) = {rhs}")

    @property
    def triple(self) -> tuple[str, str, str]:
        return (self.x, self.z, self.y)


class NotBoundedByOne(MetricError):
    def __init__(self, x: str, y: str, value: Fraction):
        self.x, self.y, self.value = x, y, value
        super().__init__(f"d({x},{y}) = {value} exceeds 1")


class NotOpen(MetricError):
    pass


class PreconditionViolation(MetricError):
    pass


class EmptyFamily(MetricError):
    pass


class PointSetMismatch(MetricError):
    pass


@dataclass(frozen=True)
class QuasiPseudometric:
    points: tuple[str, ...]
    matrix: tuple[tuple[Fraction, ...], ...]

    @cached_property
    def _index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    def __call__(self, x: str, y: str) -> Fraction:
        ix = self._index
        return self.matrix[ix[x]][ix[y]]

    def items(self):
        for i, x in enumerate(self.points):
            for j, y in enumerate(self.points):
                yield x, y, self.matrix[i][j]

    def values(self) -> set[Fraction]:
        return {v for row in self.matrix for v in row}

    @property
    def bounded(self) -> bool:
        return all(v <= 1 for row in self.matrix for v in row)

    def unbounded_entries(self) -> list[NotBoundedByOne]:
        return [NotBoundedByOne(x, y, v) for x, y, v in self.items() if v > 1]

    def ball(self, x: str, radius: Fraction) -> frozenset[str]:
        return frozenset(y for y in self.points if self(x, y) < radius)

    def le(self, other: "QuasiPseudometric") -> bool:
        """Entrywise ``self <= other``."""
        _same_points([self, other])
        return all(
            a <= b for ra, rb in zip(self.matrix, other.matrix) for a, b in zip(ra, rb)
        )

    def __str__(self) -> str:
        from .formats import format_metric

        return format_metric(self)


def _as_fraction(v) -> Fraction:
    if isinstance(v, float):
        raise TypeError("floating point distances are not accepted; use Fraction or str")
    return Fraction(v)


def check_axioms(points: Sequence[str], matrix) -> list[MetricError]:
    """Every violated axiom instance of ``matrix`` (empty if valid)."""
    n = len(points)
    found: list[MetricError] = []
    for i in range(n):
        for j in range(n):
            if matrix[i][j] < 0:
                found.append(NegativeEntry(points[i], points[j], matrix[i][j]))
    for i in range(n):
        if matrix[i][i] != 0:
            found.append(ZeroDiagonalViolation(points[i], matrix[i][i]))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                rhs = matrix[i][k] + matrix[k][j]
                if matrix[i][j] > rhs:
                    found.append(
                        TriangleViolation(points[i], points[k], points[j], matrix[i][j], rhs)
                    )
    return found


def validate(points: Sequence[str], table) -> QuasiPseudometric:
    """Validate a square table (nested sequences, or a mapping on pairs in
    which omitted pairs are 0).

    Raises the first violation found; ``err.violations`` lists all of them.
    Values above 1 are allowed here; see :attr:`QuasiPseudometric.bounded`.
    """
    points = tuple(points)
    n = len(points)
    if len(set(points)) != n:
        raise NotSquare("duplicate point names")
    if isinstance(table, Mapping):
        matrix = [[_as_fraction(table.get((x, y), 0)) for y in points] for x in points]
    else:
        rows = list(table)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise NotSquare(f"expected a {n}x{n} table")
        matrix = [[_as_fraction(v) for v in r] for r in rows]
    found = check_axioms(points, matrix)
    if found:
        err = found[0]
        err.violations = found
        raise err
    return QuasiPseudometric(points, tuple(tuple(r) for r in matrix))


def from_function(points: Sequence[str], f) -> QuasiPseudometric:
    return validate(points, [[f(x, y) for y in points] for x in points])


def zero_metric(points: Sequence[str]) -> QuasiPseudometric:
    return from_function(points, lambda x, y: 0)


def discrete_metric(points: Sequence[str], value=1) -> QuasiPseudometric:
    return from_function(points, lambda x, y: 0 if x == y else value)


def cap(d: QuasiPseudometric, bound=1) -> QuasiPseudometric:
    """``min(d, bound)`` entrywise; still a quasi-pseudometric."""
    b = Fraction(bound)
    return QuasiPseudometric(d.points, tuple(tuple(min(v, b) for v in r) for r in d.matrix))


def require_bounded(d: QuasiPseudometric) -> None:
    bad = d.unbounded_entries()
    if bad:
        bad[0].violations = list(bad)
        raise bad[0]


# -- extension to X ∪ {e} ∪ X^-1 -------------------------------------------


@dataclass(frozen=True)
class ExtendedMetric:
    """The extension ``d*`` of a bounded quasi-pseudometric to the letters
    ``X ∪ {e} ∪ X^-1`` (letters carry sign +1, 0 or -1)."""

    base: QuasiPseudometric

    def d_e(self, x: Letter, y: Letter) -> Fraction:
        """``d`` on ``X ∪ {e}``; both arguments must have sign +1 or 0."""
        if x == y:
            return Fraction(0)
        if x.sign == 1 and y.sign == 1:
            return self.base(x.base, y.base)
        return ONE

    def __call__(self, x: Letter, y: Letter) -> Fraction:
        if x == y:
            return Fraction(0)
        if x.sign >= 0 and y.sign >= 0:
            return self.d_e(x, y)
        if x.sign <= 0 and y.sign <= 0:
            return self.d_e(y.inverse(), x.inverse())
        return TWO

    @property
    def letters(self) -> list[Letter]:
        pts = self.base.points
        return [Letter(p, 1) for p in pts] + [E] + [Letter(p, -1) for p in pts]

    def as_metric(self) -> QuasiPseudometric:
        """``d*`` as a plain table on the names ``a, ..., e, a^-1, ...``."""
        ls = self.letters
        return validate([str(x) for x in ls], [[self(x, y) for y in ls] for x in ls])


def extend_dstar(d: QuasiPseudometric) -> ExtendedMetric:
    require_bounded(d)
    return ExtendedMetric(d)


# -- special constructions -------------------------------------------------


def rho_from_open_set(U: Iterable[str], topology: "FiniteTopology") -> QuasiPseudometric:
    """``rho_U(x, y) = 1`` iff ``x in U`` and ``y not in U``."""
    U = frozenset(U)
    if not topology.is_open(U):
        raise NotOpen(f"{sorted(U)} is not open")
    return from_function(topology.points, lambda x, y: int(x in U and y not in U))


def joiner_dij(
    topology: "FiniteTopology", x_i: str, x_j: str, U_i: Iterable[str]
) -> QuasiPseudometric:
    """``d(x, y) = 1`` iff ``(x != x_j and y == x_j)`` or ``(x in U_i and y not in U_i)``."""
    U_i = frozenset(U_i)
    if not topology.is_T1():
        raise PreconditionViolation("topology is not T1")
    if x_i == x_j:
        raise PreconditionViolation(f"x_i and x_j coincide ({x_i})")
    if not topology.is_open(U_i):
        raise PreconditionViolation(f"U_i = {sorted(U_i)} is not open")
    if x_i not in U_i:
        raise PreconditionViolation(f"x_i = {x_i} is not in U_i")
    if x_j in U_i:
        raise PreconditionViolation(f"x_j = {x_j} lies in U_i")
    return from_function(
        topology.points,
        lambda x, y: int((x != x_j and y == x_j) or (x in U_i and y not in U_i)),
    )


def max_combine(family: Sequence[QuasiPseudometric]) -> QuasiPseudometric:
    family = list(family)
    if not family:
        raise EmptyFamily("cannot combine an empty family")
    _same_points(family)
    rows = zip(*(d.matrix for d in family))
    return QuasiPseudometric(
        family[0].points, tuple(tuple(max(v) for v in zip(*r)) for r in rows)
    )


def _same_points(family: Sequence[QuasiPseudometric]) -> None:
    pts = family[0].points
    for d in family[1:]:
        if d.points != pts:
            raise PointSetMismatch(f"{d.points} differs from {pts}")


@dataclass(frozen=True)
class UscWitness:
    center: str
    radius: Fraction
    ball: frozenset[str]


def check_usc(
    d: QuasiPseudometric, topology: "FiniteTopology"
) -> tuple[bool, UscWitness | None]:
    """Whether every section ``d(x, .)`` is upper semi-continuous, i.e. every
    ball ``{y : d(x, y) < r}`` is open."""
    if d.points != topology.points:
        raise PointSetMismatch(f"{d.points} differs from {topology.points}")
    for r in ball_thresholds(d.values()):
        for x in d.points:
            b = d.ball(x, r)
            if not topology.is_open(b):
                return False, UscWitness(x, r, b)
    return True, None
