"""Schemes: fixed-point-free non-crossing involutions on ``{1, ..., 2n}``.

Positions are 1-based in every public interface and in the text form
``"1-4 2-3"``; internally a scheme is a 0-based ``mate`` array.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .metrics import ExtendedMetric
from .words import CapExceeded, Letter, ReducedWord, Word, reduce

DEFAULT_SCHEME_CAP = 8
HALF = Fraction(1, 2)


class SchemeError(ValueError):
    pass


class NotInvolution(SchemeError):
    def __init__(self, i: int):
        self.i = i
        super().__init__(f"phi(phi({i})) != {i}")


class FixedPoint(SchemeError):
    def __init__(self, i: int):
        self.i = i
        super().__init__(f"phi({i}) = {i}")


class Crossing(SchemeError):
    def __init__(self, i: int, j: int):
        self.i, self.j = i, j
        super().__init__(f"{i} < {j} < phi({i}) < phi({j})")


class LengthMismatch(SchemeError):
    pass


@dataclass(frozen=True)
class Scheme:
    n: int
    mate: tuple[int, ...]

    def phi(self, i: int) -> int:
        return self.mate[i - 1] + 1

    def pairs(self) -> list[tuple[int, int]]:
        return [(i + 1, j + 1) for i, j in enumerate(self.mate) if i < j]

    def __str__(self) -> str:
        return " ".join(f"{i}-{j}" for i, j in self.pairs())

    def __repr__(self) -> str:
        return f"Scheme({str(self)!r})"


def _crossing(mate: Sequence[int]) -> tuple[int, int] | None:
    """First crossing pair ``(i, j)`` (0-based), scanning as bracket matching."""
    stack: list[int] = []
    for pos, partner in enumerate(mate):
        if partner > pos:
            stack.append(pos)
        elif stack[-1] == partner:
            stack.pop()
        else:
            return partner, stack[-1]
    return None


def validate_scheme(n: int, mapping) -> Scheme:
    """``mapping`` is ``phi(1), ..., phi(2n)`` as a sequence, or a dict ``{i: phi(i)}``."""
    if n < 1:
        raise SchemeError("n must be at least 1")
    size = 2 * n
    if isinstance(mapping, Mapping):
        if set(mapping) != set(range(1, size + 1)):
            raise SchemeError(f"domain must be 1..{size}")
        images = [mapping[i] for i in range(1, size + 1)]
    else:
        images = list(mapping)
        if len(images) != size:
            raise SchemeError(f"expected {size} images, got {len(images)}")
    for i, j in enumerate(images, 1):
        if not 1 <= j <= size:
            raise SchemeError(f"phi({i}) = {j} is outside 1..{size}")
    for i, j in enumerate(images, 1):
        if j == i:
            raise FixedPoint(i)
    for i, j in enumerate(images, 1):
        if images[j - 1] != i:
            raise NotInvolution(i)
    mate = tuple(j - 1 for j in images)
    bad = _crossing(mate)
    if bad is not None:
        raise Crossing(bad[0] + 1, bad[1] + 1)
    return Scheme(n, mate)


def parse_scheme(text: str) -> Scheme:
    images: dict[int, int] = {}
    for token in text.split():
        try:
            a, b = (int(s) for s in token.split("-"))
        except ValueError:
            raise SchemeError(f"bad pair {token!r}; expected i-j") from None
        for k, v in ((a, b), (b, a)):
            if k in images:
                raise SchemeError(f"position {k} paired twice")
            images[k] = v
    if not images or len(images) % 2:
        raise SchemeError(f"scheme {text!r} does not cover an even index set")
    return validate_scheme(len(images) // 2, images)


def nested_scheme(n: int) -> Scheme:
    size = 2 * n
    return Scheme(n, tuple(size - 1 - i for i in range(size)))


def is_nested(s: Scheme) -> bool:
    size = 2 * s.n
    return all(j == size - 1 - i for i, j in enumerate(s.mate))


@lru_cache(maxsize=None)
def _matchings(lo: int, n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Non-crossing matchings of ``lo .. lo+2n-1``, ordered by partner of ``lo``."""
    if n == 0:
        return ((),)
    out = []
    for k in range(1, n + 1):
        partner = lo + 2 * k - 1
        for inner in _matchings(lo + 1, k - 1):
            for outer in _matchings(partner + 1, n - k):
                out.append(((lo, partner),) + inner + outer)
    return tuple(out)


def enumerate_schemes(n: int, cap: int = DEFAULT_SCHEME_CAP) -> list[Scheme]:
    if n < 1:
        raise SchemeError("n must be at least 1")
    if n > cap:
        raise CapExceeded(f"n = {n} exceeds the scheme cap {cap}")
    out = []
    for pairs in _matchings(0, n):
        mate = [0] * (2 * n)
        for i, j in pairs:
            mate[i], mate[j] = j, i
        out.append(Scheme(n, tuple(mate)))
    return out


# -- representations and the cost functional --------------------------------


@dataclass(frozen=True)
class Representation:
    """An even-length word over ``X ∪ {e} ∪ X^-1`` and the element it reduces to."""

    word: Word
    target: ReducedWord | None = None

    def __post_init__(self) -> None:
        red = reduce(self.word)
        if self.target is None:
            object.__setattr__(self, "target", red)
        elif red != self.target:
            raise SchemeError(f"{self.word} reduces to {red}, not {self.target}")
        if len(self.word) % 2:
            raise SchemeError(f"representation {self.word} has odd length")

    @property
    def n(self) -> int:
        return len(self.word) // 2


def gamma(dstar: ExtendedMetric, rep: Representation, s: Scheme) -> Fraction:
    """Half the sum of ``d*(x_i^-1, x_phi(i))`` over all positions."""
    xs = rep.word.letters
    if len(xs) != 2 * s.n:
        raise LengthMismatch(f"word length {len(xs)} but scheme on {2 * s.n} points")
    total = sum(
        (dstar(xs[i].inverse(), xs[j]) for i, j in enumerate(s.mate)), Fraction(0)
    )
    return total * HALF


def _normalize(xs: tuple[Letter, ...], mate: list[int]) -> tuple[Letter, ...]:
    size = len(xs)
    if mate[0] == size - 1:
        if size == 2:
            return xs
        inner = _normalize(xs[1:-1], [m - 1 for m in mate[1:-1]])
        return (xs[0],) + inner + (xs[-1],)
    split = mate[0] + 1
    y = _normalize(xs[:split], mate[:split])
    z = _normalize(xs[split:], [m - split for m in mate[split:]])
    q = len(y) // 2
    tail = y[q:]
    return y + z + tuple(x.inverse() for x in reversed(tail)) + tail


def nested_normalize(
    rep: Representation, s: Scheme, dstar: ExtendedMetric | None = None
) -> tuple[Representation, Scheme]:
    """Rewrite ``(rep, s)`` as a representation of the same element with a
    nested scheme, the same support and the same cost.

    Splits at ``phi(1) = 2n`` (recurse inside) or at the first closed block
    ``1 .. phi(1)`` (recurse on both sides, then append ``W^-1 W`` where ``W``
    is the second half of the left block). The result can be longer than the
    input. If ``dstar`` is given the cost equality is re-checked.
    """
    if len(rep.word) != 2 * s.n:
        raise LengthMismatch(f"word length {len(rep.word)} but scheme on {2 * s.n} points")
    xs = _normalize(rep.word.letters, list(s.mate))
    out = Representation(Word(xs), rep.target)
    phi = nested_scheme(out.n)
    if dstar is not None and gamma(dstar, out, phi) != gamma(dstar, rep, s):
        raise AssertionError("normalization changed the cost")
    return out, phi
