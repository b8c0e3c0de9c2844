"""The Graev extension of a bounded quasi-pseudometric to the free group.

``N_d(g)`` is the least cost ``gamma`` of a representation of ``g`` over
``X ∪ {e} ∪ X^-1`` together with a scheme. The minimum is attained on words
made of the letters of ``g`` with at most ``len(g)`` copies of ``e`` inserted
into distinct gaps, which is the space :meth:`GraevExtension.prenorm_bruteforce`
searches. :meth:`GraevExtension.prenorm_dp` gets the same number from an
interval recurrence: a letter is either matched to a later letter (no
crossings) or to an ``e`` placed right next to it, which never crosses.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .metrics import ExtendedMetric, QuasiPseudometric, extend_dstar
from .report import Report
from .schemes import Representation, Scheme, enumerate_schemes, gamma
from .words import (
    E,
    EPSILON,
    CapExceeded,
    Letter,
    ReducedWord,
    Word,
    invert,
    multiply,
    product,
)

DEFAULT_BRUTEFORCE_CAP = 8


def _common_denominator(values: Iterable[Fraction]) -> int:
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return den


class GraevExtension:
    """``N_d`` and the two-sided invariant quasi-pseudometric ``d^(g, h) = N_d(g^-1 h)``.

    Values are cached per reduced word. The cache is only ever filled with
    the exact value for its key, so concurrent readers may share an instance.
    """

    def __init__(self, d: QuasiPseudometric, name: str = ""):
        self.dstar: ExtendedMetric = extend_dstar(d)
        self.name = name
        self.memo: dict[ReducedWord, Fraction] = {}
        # integer costs: twice a pair cost, times the common denominator
        self._den = _common_denominator(d.values())
        self._pair_cache: dict[tuple[Letter, Letter], int] = {}
        self._e_cache: dict[Letter, int] = {}

    @property
    def metric(self) -> QuasiPseudometric:
        return self.dstar.base

    def clear(self) -> None:
        self.memo.clear()

    # -- cost pieces ---------------------------------------------------------
    def pair_cost(self, x: Letter, y: Letter) -> Fraction:
        """Cost of matching ``x`` with a later ``y``."""
        ds = self.dstar
        return (ds(x.inverse(), y) + ds(y.inverse(), x)) / 2

    def e_cost(self, x: Letter) -> Fraction:
        """Cost of matching ``x`` with an inserted ``e``."""
        ds = self.dstar
        return (ds(x.inverse(), E) + ds(E, x)) / 2

    def _pair_int(self, x: Letter, y: Letter) -> int:
        key = (x, y)
        v = self._pair_cache.get(key)
        if v is None:
            ds = self.dstar
            v = int((ds(x.inverse(), y) + ds(y.inverse(), x)) * self._den)
            self._pair_cache[key] = v
        return v

    def _e_int(self, x: Letter) -> int:
        v = self._e_cache.get(x)
        if v is None:
            ds = self.dstar
            v = int((ds(x.inverse(), E) + ds(E, x)) * self._den)
            self._e_cache[x] = v
        return v

    # -- the prenorm ---------------------------------------------------------
    def prenorm(self, g: ReducedWord) -> Fraction:
        v = self.memo.get(g)
        if v is None:
            v = self.prenorm_dp(g)
            self.memo[g] = v
        return v

    __call__ = prenorm

    def prenorm_dp(self, g: ReducedWord) -> Fraction:
        xs = g.letters
        L = len(xs)
        if L == 0:
            return Fraction(0)
        ec = [self._e_int(x) for x in xs]
        pc = [[self._pair_int(xs[i], xs[k]) if k > i else 0 for k in range(L)] for i in range(L)]
        # f[i][j]: cheapest cover of letters i .. j-1
        f = [[0] * (L + 1) for _ in range(L + 1)]
        for span in range(1, L + 1):
            for i in range(L - span + 1):
                j = i + span
                inner = f[i + 1]
                best = ec[i] + inner[j]
                row = pc[i]
                for k in range(i + 1, j):
                    c = row[k] + inner[k] + f[k + 1][j]
                    if c < best:
                        best = c
                f[i][j] = best
        return Fraction(f[0][L], 2 * self._den)

    def prenorm_bruteforce(self, g: ReducedWord, cap: int = DEFAULT_BRUTEFORCE_CAP) -> Fraction:
        """Minimum of ``gamma`` over the bounded search space, evaluated exactly.

        Each (e-insertion, scheme) pair is reduced to which letters it matches
        with which and which it matches with ``e``; costs are taken straight
        from ``d*``.
        """
        L = len(g)
        if L > cap:
            raise CapExceeded(f"length {L} exceeds the brute-force cap {cap}")
        if L == 0:
            return Fraction(0)
        xs = g.letters
        ds = self.dstar
        best = None
        for pairs, singles in search_structures(L):
            total = Fraction(0)
            for i, j in pairs:
                total += ds(xs[i].inverse(), xs[j]) + ds(xs[j].inverse(), xs[i])
            for i in singles:
                total += ds(xs[i].inverse(), E) + ds(E, xs[i])
            if best is None or total < best:
                best = total
        return best / 2

    def distance(self, g: ReducedWord, h: ReducedWord) -> Fraction:
        return self.prenorm(multiply(invert(g), h))

    def ball(
        self, center: ReducedWord, radius, universe: Iterable[ReducedWord]
    ) -> list[ReducedWord]:
        """Members of ``universe`` strictly closer than ``radius`` to ``center``."""
        r = Fraction(radius)
        if r <= 0:
            raise ValueError("radius must be positive")
        return [h for h in universe if self.distance(center, h) < r]

    def check_prenorm_axioms(
        self, sample: Sequence[ReducedWord], tuple_len: int = 3, label: str = ""
    ) -> Report:
        return check_prenorm_axioms(self, sample, tuple_len, label)


# -- the bounded search space ------------------------------------------------


def insertion_words(L: int) -> Iterable[tuple[int, ...]]:
    """Token sequences for a length-``L`` word with ``e`` in distinct gaps.

    A token is a letter index ``0..L-1`` or ``-1`` for ``e``. The number of
    inserted ``e`` has the parity of ``L`` and is at most ``L``.
    """
    for k in range(L % 2, L + 1, 2):
        for gaps in itertools.combinations(range(L + 1), k):
            chosen = set(gaps)
            tokens: list[int] = []
            for gap in range(L + 1):
                if gap in chosen:
                    tokens.append(-1)
                if gap < L:
                    tokens.append(gap)
            yield tuple(tokens)


def search_space(g: ReducedWord) -> Iterable[tuple[Representation, Scheme]]:
    """Every (representation, scheme) pair of the bounded search space for ``g``."""
    L = len(g)
    if L == 0:
        return
    for tokens in insertion_words(L):
        word = Word(tuple(E if t < 0 else g.letters[t] for t in tokens))
        rep = Representation(word, g)
        for s in enumerate_schemes(len(tokens) // 2, cap=L):
            yield rep, s


@lru_cache(maxsize=None)
def search_structures(L: int) -> tuple[tuple[tuple[tuple[int, int], ...], tuple[int, ...]], ...]:
    """The distinct matching structures met in the bounded search space.

    Each entry is ``(pairs, singles)``: letter-letter matches and letters
    matched with an inserted ``e`` (``e``-``e`` matches cost nothing).
    """
    seen: dict = {}
    for tokens in insertion_words(L):
        for s in enumerate_schemes(len(tokens) // 2, cap=max(L, 1)):
            pairs = []
            singles = []
            for p, q in enumerate(s.mate):
                if p > q:
                    continue
                a, b = tokens[p], tokens[q]
                if a >= 0 and b >= 0:
                    pairs.append((a, b))
                elif a >= 0:
                    singles.append(a)
                elif b >= 0:
                    singles.append(b)
            key = (tuple(sorted(pairs)), tuple(sorted(singles)))
            seen.setdefault(key, None)
    return tuple(seen)


def prenorm_bruteforce_many(
    exts: Sequence[GraevExtension], words: Sequence[ReducedWord], cap: int = DEFAULT_BRUTEFORCE_CAP
) -> list[list[Fraction]]:
    """Brute-force ``N_d`` for many metrics and words at once.

    Same search structures as :meth:`GraevExtension.prenorm_bruteforce`,
    evaluated with integer numpy arrays. Returns ``out[m][w]``.
    """
    import numpy as np

    if not exts:
        return []
    points = exts[0].metric.points
    letters = [Letter(p, s) for p in points for s in (1, -1)]
    code = {x: i for i, x in enumerate(letters)}
    by_len: dict[int, list[int]] = {}
    for idx, w in enumerate(words):
        if len(w) > cap:
            raise CapExceeded(f"length {len(w)} exceeds the brute-force cap {cap}")
        by_len.setdefault(len(w), []).append(idx)
    out = [[Fraction(0)] * len(words) for _ in exts]
    for m, ext in enumerate(exts):
        if ext.metric.points != points:
            raise ValueError("all metrics must share the point set")
        ds = ext.dstar
        den = _common_denominator(ext.metric.values())
        P = np.array(
            [[int((ds(x.inverse(), y) + ds(y.inverse(), x)) * den) for y in letters] for x in letters],
            dtype=np.int64,
        )
        Ev = np.array([int((ds(x.inverse(), E) + ds(E, x)) * den) for x in letters], dtype=np.int64)
        for L, idxs in by_len.items():
            if L == 0:
                continue
            W = np.array([[code[x] for x in words[i].letters] for i in idxs], dtype=np.int64)
            best = None
            for pairs, singles in search_structures(L):
                cost = np.zeros(len(idxs), dtype=np.int64)
                for i, j in pairs:
                    cost += P[W[:, i], W[:, j]]
                for i in singles:
                    cost += Ev[W[:, i]]
                best = cost if best is None else np.minimum(best, cost)
            for i, v in zip(idxs, best.tolist()):
                out[m][i] = Fraction(v, 2 * den)
    return out


def prenorm_wide_search(ext: GraevExtension, g: ReducedWord, extra: int = 2, insert_pair: bool = True) -> Fraction:
    """Minimum of ``gamma`` over a strictly larger space than the bounded one.

    Allows up to ``len(g) + extra`` copies of ``e`` anywhere (adjacent ``e``
    included) and, with ``insert_pair``, one extra cancelling pair ``x x^-1``
    of any point at any position. Only usable on very short words.
    """
    bases: list[tuple[Letter, ...]] = [g.letters]
    if insert_pair:
        for p in ext.metric.points:
            for s in (1, -1):
                x = Letter(p, s)
                for pos in range(len(g) + 1):
                    bases.append(g.letters[:pos] + (x, x.inverse()) + g.letters[pos:])
    best = None
    for base in bases:
        L = len(base)
        for k in range(L % 2, len(g) + extra + 1, 2):
            for gaps in itertools.combinations_with_replacement(range(L + 1), k):
                letters: list[Letter] = []
                for gap in range(L + 1):
                    letters.extend([E] * gaps.count(gap))
                    if gap < L:
                        letters.append(base[gap])
                if not letters:
                    continue
                rep = Representation(Word(tuple(letters)), g)
                for s in enumerate_schemes(rep.n, cap=rep.n):
                    v = gamma(ext.dstar, rep, s)
                    if best is None or v < best:
                        best = v
    return Fraction(0) if best is None else best


# -- axiom checks ---------------------------------------------------------------


def group_element(x: Letter) -> ReducedWord:
    return EPSILON if x.is_identity else ReducedWord((x,))


def check_prenorm_axioms(
    ext: GraevExtension, sample: Sequence[ReducedWord], tuple_len: int = 3, label: str = ""
) -> Report:
    """Invariant quasi-prenorm axioms on ``sample`` plus the two-sided
    invariance inequality on letter tuples up to ``tuple_len``."""
    label = label or ext.name or "metric"
    N = ext.prenorm
    report = Report()
    report.add("N(e)=0", label, N(EPSILON) == 0, "" if N(EPSILON) == 0 else f"N(e)={N(EPSILON)}")

    bad = None
    count = 0
    for g in sample:
        for h in sample:
            count += 1
            if N(multiply(g, h)) > N(g) + N(h):
                bad = bad or f"g={g} h={h}"
    report.add("subadditive", f"{label}:{count}_pairs", bad is None, bad or "")

    bad = None
    for g in sample:
        for h in sample:
            if N(product(invert(h), g, h)) != N(g):
                bad = bad or f"g={g} h={h}"
    report.add("conjugation_invariant", f"{label}:{count}_pairs", bad is None, bad or "")

    bad = None
    count = 0
    elems = [group_element(x) for x in ext.dstar.letters]
    pairs = [(a, b, ext.distance(a, b)) for a in elems for b in elems]
    for n in range(1, tuple_len + 1):
        for combo in itertools.product(pairs, repeat=n):
            count += 1
            lhs = ext.distance(product(*(c[0] for c in combo)), product(*(c[1] for c in combo)))
            rhs = sum((c[2] for c in combo), Fraction(0))
            if lhs > rhs:
                bad = bad or "x=(" + ",".join(str(c[0]) for c in combo) + ") y=(" + ",".join(
                    str(c[1]) for c in combo
                ) + ")"
    report.add("two_sided_invariance", f"{label}:{count}_tuples", bad is None, bad or "")
    return report
