"""Named test spaces and metric batteries used by the sweeps and the CLI."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

from .metrics import (
    MetricError,
    QuasiPseudometric,
    discrete_metric,
    from_function,
    validate,
)
from .topology import all_topologies, discrete, indiscrete, sierpinski

HALF = Fraction(1, 2)


def point_names(k: int) -> tuple[str, ...]:
    return tuple("abcdfghijk"[:k])  # no 'e'


def standard_spaces(max_points: int = 3):
    """Sierpiński, then discrete and indiscrete spaces on 1..max_points points."""
    out = [sierpinski()]
    for k in range(1, max_points + 1):
        out.append(discrete(point_names(k)))
        if k > 1:
            out.append(indiscrete(point_names(k)))
    return out


def rho_metrics(points: Sequence[str]) -> list[tuple[str, QuasiPseudometric]]:
    """Distinct ``rho_U`` over all topologies on ``points``.

    Every subset is open in some topology, so this is one metric per subset
    (empty set and whole space both give the zero metric).
    """
    seen: dict[tuple, tuple[str, QuasiPseudometric]] = {}
    for t in all_topologies(points):
        for m in sorted(t.opens):
            U = t.names(m)
            d = from_function(points, lambda x, y, U=U: int(x in U and y not in U))
            label = "rho{" + ",".join(p for p in points if p in U) + "}"
            seen.setdefault(d.matrix, (label, d))
    return list(seen.values())


def three_valued_metrics(points: Sequence[str]) -> list[QuasiPseudometric]:
    """Every quasi-pseudometric on ``points`` with values in {0, 1/2, 1}, in
    lexicographic order of the off-diagonal entries."""
    pairs = [(x, y) for x in points for y in points if x != y]
    out = []
    for vals in itertools.product((Fraction(0), HALF, Fraction(1)), repeat=len(pairs)):
        table = {(x, x): 0 for x in points}
        table.update(zip(pairs, vals))
        try:
            out.append(validate(points, table))
        except MetricError:
            continue
    return out


def metric_battery(points: Sequence[str], samples: int = 13) -> list[tuple[str, QuasiPseudometric]]:
    """All ``rho_U``, the discrete metrics at 1 and 1/2, and an evenly spaced
    sample of {0, 1/2, 1}-valued metrics (all of them when ``samples`` is 0)."""
    points = tuple(points)
    battery = rho_metrics(points)
    battery.append(("discrete", discrete_metric(points)))
    battery.append(("discrete_half", discrete_metric(points, HALF)))
    tv = three_valued_metrics(points)
    if samples and samples < len(tv):
        step = len(tv) / samples
        tv = [tv[int(i * step)] for i in range(samples)]
    seen = {d.matrix for _, d in battery}
    for k, d in enumerate(tv):
        if d.matrix not in seen:
            seen.add(d.matrix)
            battery.append((f"tv{k}", d))
    return battery


def bench_metric(k: int = 5) -> QuasiPseudometric:
    """An asymmetric metric on ``k`` points: ``d(p_i, p_j) = max(0, j - i) / (k - 1)``."""
    pts = point_names(k)
    scale = max(k - 1, 1)
    idx = {p: i for i, p in enumerate(pts)}
    return from_function(pts, lambda x, y: Fraction(max(0, idx[y] - idx[x]), scale))
