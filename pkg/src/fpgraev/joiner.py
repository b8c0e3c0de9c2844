"""Finite-instance verification of the neighbourhood base at a word of FP_n(X).

For a T1 space ``X`` and a reduced word ``w = x_1^e_1 ... x_n^e_n`` the basic
sets are ``B = U_1^e_1 ... U_n^e_n`` with ``U_i`` an open neighbourhood of
``x_i`` when ``e_i = +1`` and ``U_i = {x_i}`` when ``e_i = -1``. The verifier
builds the max-combined metric of the pairwise ``d_{j,k}`` and checks
``{h in FP_n(X) : N_d(h w^-1) < 1} ⊆ B`` by enumeration.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .graev import GraevExtension
from .metrics import (
    QuasiPseudometric,
    from_function,
    joiner_dij,
    max_combine,
    validate,
    zero_metric,
)
from .report import Report
from .topology import FiniteTopology, inverse_topology, validate_topology
from .words import (
    DEFAULT_ENUMERATION_CAP,
    EPSILON,
    Letter,
    ReducedWord,
    Word,
    enumerate_FPn,
    exponent_sum,
    format_letters,
    invert,
    multiply,
    parse_reduced,
    reduce,
    word_sort_key,
)


class JoinerError(ValueError):
    pass


class NotT1(JoinerError):
    pass


class NotReduced(JoinerError):
    pass


class ConditionViolation(JoinerError):
    pass


class NotSeparable(JoinerError):
    pass


def _fmt_set(s: Iterable[str], order: Sequence[str]) -> str:
    s = set(s)
    return "{" + ",".join(p for p in order if p in s) + "}"


@dataclass(frozen=True)
class JoinerInstance:
    space: FiniteTopology
    w: ReducedWord
    U: tuple[frozenset[str], ...]
    V: tuple[frozenset[str], ...] | None = None

    def __post_init__(self) -> None:
        if not self.space.is_T1():
            raise NotT1(f"{self.space.label()} is not T1")
        if not isinstance(self.w, ReducedWord):
            if reduce(self.w).letters != tuple(self.w.letters):
                raise NotReduced(f"{self.w} is not reduced")
            object.__setattr__(self, "w", reduce(self.w))
        U = tuple(frozenset(u) for u in self.U)
        object.__setattr__(self, "U", U)
        if len(U) != len(self.w):
            raise ConditionViolation(f"{len(U)} neighbourhoods for a word of length {len(self.w)}")
        for i, (x, u) in enumerate(zip(self.w.letters, U), 1):
            if x.sign == -1 and u != {x.base}:
                raise ConditionViolation(f"U_{i} must be {{{x.base}}} for an inverse letter")
            if x.base not in u:
                raise ConditionViolation(f"U_{i} does not contain {x.base}")
            if not self.space.is_open(u):
                raise ConditionViolation(f"U_{i} is not open")
        if self.V is None:
            object.__setattr__(self, "V", default_V(self))
        else:
            object.__setattr__(self, "V", tuple(frozenset(v) for v in self.V))
            _check_V(self)

    @property
    def distinct(self) -> list[str]:
        """Distinct points of ``w`` in order of first occurrence."""
        out: list[str] = []
        for x in self.w.letters:
            if x.base not in out:
                out.append(x.base)
        return out

    def I(self, j: int) -> list[int]:
        """Positions (0-based) carrying the ``j``-th distinct point with exponent +1."""
        p = self.distinct[j]
        return [i for i, x in enumerate(self.w.letters) if x.base == p and x.sign == 1]

    def describe(self) -> str:
        us = "".join(_fmt_set(u, self.space.points) for u in self.U)
        return f"{self.space.label()}:w={format_letters(self.w.letters)}:U={us or '-'}"


def default_V(inst: JoinerInstance) -> tuple[frozenset[str], ...]:
    """``V_j`` = intersection of ``U_i`` over ``I_j`` minus the other distinct points."""
    A = inst.distinct
    out = []
    for j, p in enumerate(A):
        v = set(inst.space.points)
        for i in inst.I(j):
            v &= inst.U[i]
        v -= {q for q in A if q != p}
        out.append(frozenset(v))
    return tuple(out)


def _check_V(inst: JoinerInstance) -> None:
    A = inst.distinct
    if len(inst.V) != len(A):
        raise ConditionViolation(f"expected {len(A)} sets V_j, got {len(inst.V)}")
    for j, (p, v) in enumerate(zip(A, inst.V)):
        if p not in v or not inst.space.is_open(v):
            raise ConditionViolation(f"V_{j + 1} is not an open neighbourhood of {p}")
        for i in inst.I(j):
            if not v <= inst.U[i]:
                raise ConditionViolation(f"condition (i): V_{j + 1} is not inside U_{i + 1}")
        for q in A:
            if q != p and q in v:
                raise ConditionViolation(f"condition (ii): {q} lies in V_{j + 1}")


def make_instance(
    space: FiniteTopology, w: ReducedWord | str, choice: str | Sequence[str] = "singleton"
) -> JoinerInstance:
    """Instance with ``U_i = {x_i}`` ("singleton") or ``U_i = X`` ("full") on
    the +1 positions; ``choice`` may also be one name per position."""
    if isinstance(w, str):
        w = parse_reduced(w)
    choices = [choice] * len(w) if isinstance(choice, str) else list(choice)
    U = []
    for x, c in zip(w.letters, choices):
        if x.sign == -1 or c == "singleton":
            U.append(frozenset({x.base}))
        elif c == "full":
            U.append(frozenset(space.points))
        else:
            raise ValueError(f"unknown neighbourhood choice {c!r}")
    return JoinerInstance(space, w, tuple(U))


def build_joiner_metric(inst: JoinerInstance) -> QuasiPseudometric:
    """Max of ``d_{j,k}`` over ordered pairs of distinct points of ``w``
    (the zero metric when there are fewer than two)."""
    A = inst.distinct
    family = [
        joiner_dij(inst.space, A[j], A[k], inst.V[j])
        for j in range(len(A))
        for k in range(len(A))
        if j != k
    ]
    if not family:
        return zero_metric(inst.space.points)
    return max_combine(family)


def fallback_metric(inst: JoinerInstance) -> QuasiPseudometric:
    """Metric used when ``w`` has one distinct point ``p``: the max of
    ``rho_{V_1}`` and ``[x != p and y == p]``."""
    (p,) = inst.distinct
    v = inst.V[0]
    return from_function(
        inst.space.points, lambda x, y: int((x != p and y == p) or (x in v and y not in v))
    )


def basic_set(inst: JoinerInstance) -> set[ReducedWord]:
    """``U_1^e_1 ... U_n^e_n`` as a set of reduced words."""
    slots = []
    for x, u in zip(inst.w.letters, inst.U):
        slots.append([Letter(p, x.sign) for p in inst.space.points if p in u])
    return {reduce(Word(combo)) for combo in itertools.product(*slots)}


@dataclass
class Certificate:
    verdict: bool
    instance: JoinerInstance
    metric: QuasiPseudometric
    fallback: bool
    values: dict[ReducedWord, Fraction]
    trace: list[ReducedWord]
    offending: ReducedWord | None = None
    w_in_B: bool = True

    def to_dict(self) -> dict:
        inst = self.instance
        pts = inst.space.points
        return {
            "kind": "joiner",
            "verdict": self.verdict,
            "space": {"points": list(pts), "opens": [list(inst.space.ordered(m)) for m in sorted(inst.space.opens)]},
            "w": str(inst.w),
            "U": [[p for p in pts if p in u] for u in inst.U],
            "V": [[p for p in pts if p in v] for v in inst.V],
            "fallback": self.fallback,
            "metric": [[str(v) for v in row] for row in self.metric.matrix],
            "values": {str(h): str(v) for h, v in self.values.items()},
            "trace": [str(h) for h in self.trace],
            "offending": None if self.offending is None else str(self.offending),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def verify_neighbourhood(
    inst: JoinerInstance, cap: int = DEFAULT_ENUMERATION_CAP
) -> Certificate:
    n = len(inst.w)
    metric = build_joiner_metric(inst)
    fallback = len(inst.distinct) == 1
    if fallback:
        metric = fallback_metric(inst)
    ext = GraevExtension(metric)
    B = basic_set(inst)
    w_inv = invert(inst.w)
    values: dict[ReducedWord, Fraction] = {}
    trace = []
    offending = None
    for h in enumerate_FPn(inst.space.points, n, cap):
        v = ext.prenorm(multiply(h, w_inv))
        values[h] = v
        if v < 1:
            trace.append(h)
            if h not in B and offending is None:
                offending = h
    w_in_B = inst.w in B
    return Certificate(
        verdict=offending is None and w_in_B,
        instance=inst,
        metric=metric,
        fallback=fallback,
        values=values,
        trace=trace,
        offending=offending,
        w_in_B=w_in_B,
    )


def certificate_from_dict(data: dict) -> tuple[JoinerInstance, QuasiPseudometric, dict]:
    space = validate_topology(data["space"]["points"], data["space"]["opens"])
    inst = JoinerInstance(
        space, parse_reduced(data["w"]), tuple(data["U"]), tuple(data["V"])
    )
    metric = validate(space.points, [[Fraction(v) for v in row] for row in data["metric"]])
    values = {parse_reduced(k): Fraction(v) for k, v in data["values"].items()}
    return inst, metric, values


def replay(data: dict) -> Report:
    """Re-derive a stored certificate and compare every recorded value."""
    inst, metric, values = certificate_from_dict(data)
    fresh = verify_neighbourhood(inst)
    label = inst.describe()
    report = Report()
    report.add("replay_metric", label, fresh.metric == metric)
    ext = GraevExtension(metric)
    w_inv = invert(inst.w)
    bad = [h for h, v in values.items() if ext.prenorm(multiply(h, w_inv)) != v]
    report.add("replay_values", label, not bad, f"first mismatch {bad[0]}" if bad else "")
    report.add("replay_verdict", label, fresh.verdict == data["verdict"])
    return report


def refine_exact_length(inst: JoinerInstance) -> JoinerInstance:
    """Shrink the +1 neighbourhoods so that no product in ``B`` cancels.

    A product ``u_1^e_1 ... u_n^e_n`` is reduced unless two neighbours cancel,
    which needs opposite signs and equal points; the single fixed point of the
    inverse slot is removed from the adjacent +1 slot.
    """
    xs = inst.w.letters
    U = [set(u) for u in inst.U]
    for i in range(len(xs) - 1):
        a, b = xs[i], xs[i + 1]
        if a.sign == b.sign:
            continue
        if a.sign == 1:
            U[i].discard(b.base)
        else:
            U[i + 1].discard(a.base)
    return JoinerInstance(inst.space, inst.w, tuple(frozenset(u) for u in U))


# -- separation certificates -------------------------------------------------


def _target(text: str) -> tuple[str, int, int | None]:
    """Parse ``X``, ``X^-1`` or ``FP<n>``: (name, max length, exponent class)."""
    s = text.replace("_", "")
    if s == "X":
        return "X", 1, 1
    if s in ("X^-1", "Xinv"):
        return "X^-1", 1, -1
    if s.startswith("FP") and s[2:].isdigit():
        n = int(s[2:])
        return f"FP_{n}", n, 0 if n == 0 else None
    raise ValueError(f"unknown target {text!r}; expected X, X^-1 or FP<n>")


def in_target(w: ReducedWord, target: str) -> bool:
    name, n, _ = _target(target)
    if name == "X":
        return len(w) == 1 and w[0].sign == 1
    if name == "X^-1":
        return len(w) == 1 and w[0].sign == -1
    return len(w) <= n


@dataclass
class SeparationCertificate:
    kind: str  # "exponent_sum" or "joiner"
    w: ReducedWord
    target: str
    word_class: int
    target_class: int | None = None
    neighbourhood: list[ReducedWord] = field(default_factory=list)
    joiner: Certificate | None = None

    def line(self) -> str:
        if self.kind == "exponent_sum":
            return f"{self.target} in Z_{self.target_class}, w in Z_{self.word_class}"
        return "neighbourhood " + ";".join(str(h) for h in self.neighbourhood)


def separation_certificate(
    space: FiniteTopology, w: ReducedWord | str, target: str, choice: str = "singleton"
) -> SeparationCertificate:
    """A neighbourhood of ``w`` missing ``target``.

    The classes ``Z_m`` of words with exponent sum ``m`` are open and
    partition the group, so differing classes settle it. Otherwise a basic
    neighbourhood of exact length ``len(w)`` is used; it needs ``X`` to be T1.
    """
    if isinstance(w, str):
        w = parse_reduced(w)
    name, n, cls = _target(target)
    if in_target(w, target):
        raise NotSeparable(f"{w} lies in {name}")
    wc = exponent_sum(w)
    if cls is not None and wc != cls:
        return SeparationCertificate("exponent_sum", w, name, wc, cls)
    if not space.is_T1():
        raise NotT1(f"{space.label()} is not T1; no basic neighbourhood is available for {w}")
    inst = refine_exact_length(make_instance(space, w, choice))
    cert = verify_neighbourhood(inst)
    nbhd = sorted(basic_set(inst), key=word_sort_key(space.points))
    if not cert.verdict:
        raise AssertionError(f"basic set at {w} failed verification: {cert.offending}")
    if any(len(h) != len(w) or in_target(h, target) for h in nbhd):
        raise AssertionError(f"neighbourhood of {w} meets {name}")
    return SeparationCertificate("joiner", w, name, wc, None, nbhd, cert)


def _sweep_separation(
    space: FiniteTopology, target: str, words: Iterable[ReducedWord]
) -> tuple[bool, str, int]:
    count = 0
    for w in words:
        if in_target(w, target):
            continue
        count += 1
        try:
            separation_certificate(space, w, target)
        except NotT1:
            return False, f"no certificate for {w}", count
    return True, "", count


@dataclass
class EquivResult:
    space: FiniteTopology
    values: dict[str, bool]
    notes: dict[str, str]

    @property
    def consistent(self) -> bool:
        return len(set(self.values.values())) == 1

    def report(self) -> Report:
        r = Report()
        base = self.values["1"]
        for k, v in self.values.items():
            note = f"value={'true' if v else 'false'}"
            if self.notes.get(k):
                note += f" ({self.notes[k]})"
            r.add(f"equiv_cond_{k}", self.space.label(), v == base, note)
        r.add("equiv_consistent", self.space.label(), self.consistent)
        return r


def equiv_conds_battery(
    space: FiniteTopology, max_len: int = 3, ns: Sequence[int] = (1, 2), cap_points: int = 4
) -> EquivResult:
    """Desk-scale truth values of the equivalent conditions on ``space``.

    (1) T1; (3) X closed, (6) X^-1 closed and (7)/(8) FP_n closed are
    certificate sweeps over reduced words up to ``max_len`` (resp. ``n + 1``)
    outside the set; (4)/(5) read T_A on X^-1.
    """
    from .words import CapExceeded

    if len(space.points) > cap_points:
        raise CapExceeded(f"{len(space.points)} points exceeds the battery cap {cap_points}")
    words = enumerate_FPn(space.points, max(max_len, max(ns) + 1))
    values: dict[str, bool] = {}
    notes: dict[str, str] = {}
    values["1"] = space.is_T1()
    ok, note, _ = _sweep_separation(space, "X", (w for w in words if len(w) <= max_len))
    values["3"], notes["3"] = ok, note
    t_a = inverse_topology(space).topology
    values["4"] = t_a.is_discrete()
    values["5"] = t_a.is_T1()
    ok, note, _ = _sweep_separation(space, "X^-1", (w for w in words if len(w) <= max_len))
    values["6"], notes["6"] = ok, note
    per_n = {}
    for n in ns:
        per_n[n] = _sweep_separation(space, f"FP{n}", (w for w in words if len(w) <= n + 1))
    values["7"] = all(v[0] for v in per_n.values())
    notes["7"] = "; ".join(f"n={n}: {v[1]}" for n, v in per_n.items() if not v[0])
    values["8"] = any(v[0] for v in per_n.values())
    return EquivResult(space, values, notes)


def x_power_check(space: FiniteTopology, n: int, cap: int = 4) -> Report:
    """The positive-word map ``X^n -> FP_n(X)``: injective, discrete image,
    image closed in FP_n(X)."""
    from .words import CapExceeded

    if not space.is_T1():
        raise NotT1(f"{space.label()} is not T1")
    if n > cap:
        raise CapExceeded(f"n = {n} exceeds the cap {cap}")
    label = f"{space.label()}:n={n}"
    report = Report()
    tuples = list(itertools.product(space.points, repeat=n))
    image = [ReducedWord(tuple(Letter(p, 1) for p in t)) if t else EPSILON for t in tuples]
    report.add("xpower_injective", label, len(set(image)) == len(tuples), f"{len(image)} words")
    bad = None
    for w in image:
        cert = verify_neighbourhood(make_instance(space, w, "singleton"))
        if not cert.verdict or cert.trace != [w]:
            bad = bad or str(w)
    report.add("xpower_discrete", label, bad is None, f"first failure {bad}" if bad else "")
    image_set = set(image)
    bad = None
    count = 0
    for h in enumerate_FPn(space.points, n):
        if h in image_set:
            continue
        count += 1
        if exponent_sum(h) == n:
            bad = bad or str(h)
    report.add(
        "xpower_closed",
        label,
        bad is None,
        f"no certificate for {bad}" if bad else f"{count} words separated by exponent sum",
    )
    return report


# -- sweeps ----------------------------------------------------------------------


def _choices_for(w: ReducedWord) -> list[tuple[str, ...]]:
    plus = [i for i, x in enumerate(w.letters) if x.sign == 1]
    out = []
    for bits in itertools.product(("singleton", "full"), repeat=len(plus)):
        c = ["singleton"] * len(w)
        for i, b in zip(plus, bits):
            c[i] = b
        out.append(tuple(c))
    return out


def _verify_word(args) -> list[tuple[str, bool, str, str]]:
    space, w = args
    rows = []
    for choice in _choices_for(w):
        inst = make_instance(space, w, choice)
        cert = verify_neighbourhood(inst)
        witness = "" if cert.verdict else f"offending {cert.offending}"
        rows.append(("joiner_verdict", cert.verdict, inst.describe(), witness))
        if all(c == "singleton" for c in choice):
            exact = cert.trace == [w]
            rows.append(
                ("joiner_trace_singleton", exact, inst.describe(),
                 "" if exact else "trace " + ";".join(str(h) for h in cert.trace))
            )
    return rows


def joiner_sweep(space: FiniteTopology, max_len: int = 3, jobs: int = 1) -> Report:
    """Verify every reduced word up to ``max_len`` under every mix of
    singleton and full neighbourhoods on its +1 positions."""
    words = enumerate_FPn(space.points, max_len)
    tasks = [(space, w) for w in words]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_verify_word, tasks, chunksize=16))
    else:
        results = [_verify_word(t) for t in tasks]
    report = Report()
    for rows in results:
        for name, ok, instance, witness in rows:
            report.add(name, instance, ok, witness)
    return report
