"""Free-group words over the extended alphabet ``X ∪ {e} ∪ X^-1``.

A :class:`Word` is any finite string of letters and may contain the identity
letter ``e`` or cancelling pairs. A :class:`ReducedWord` is freely reduced and
``e``-free; the empty reduced word is the group identity.

Text syntax: whitespace separated tokens, each a point name optionally
suffixed with ``^-1``; the token ``e`` is the identity letter::

    >>> reduce(parse_word("a b b^-1 a"))
    ReducedWord('a a')
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

IDENTITY_NAME = "e"
DEFAULT_ENUMERATION_CAP = 10**6

_NAME = re.compile(r"^[A-Za-z0-9_]+$")


class WordSyntaxError(ValueError):
    pass


class CapExceeded(ValueError):
    """A resource guard refused to run an enumeration."""


class Letter(NamedTuple):
    base: str
    sign: int  # +1, -1; 0 only for the identity letter

    @property
    def is_identity(self) -> bool:
        return self.sign == 0

    def inverse(self) -> "Letter":
        return Letter(self.base, -self.sign)

    def __str__(self) -> str:
        if self.sign < 0:
            return f"{self.base}^-1"
        return self.base


E = Letter(IDENTITY_NAME, 0)


def letter(name: str, sign: int = 1) -> Letter:
    if name == IDENTITY_NAME:
        return E
    if not _NAME.match(name):
        raise WordSyntaxError(f"invalid point name {name!r}")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return Letter(name, sign)


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", tuple(self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __str__(self) -> str:
        return format_letters(self.letters)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({str(self)!r})"

    def concat(self, other: "Word") -> "Word":
        return Word(self.letters + tuple(other.letters))

    def inverse_word(self) -> "Word":
        """Formal inverse, letter by letter; no reduction is applied."""
        return Word(tuple(x.inverse() for x in reversed(self.letters)))


@dataclass(frozen=True, repr=False)
class ReducedWord(Word):
    def __post_init__(self) -> None:
        super().__post_init__()
        prev = None
        for x in self.letters:
            if x.is_identity:
                raise ValueError("a reduced word cannot contain the identity letter")
            if prev is not None and x == prev.inverse():
                raise ValueError(f"adjacent cancelling pair {prev} {x}")
            prev = x

    def __mul__(self, other: "ReducedWord") -> "ReducedWord":
        return multiply(self, other)

    def __invert__(self) -> "ReducedWord":
        return invert(self)

    def is_identity(self) -> bool:
        return not self.letters


EPSILON = ReducedWord(())


def format_letters(letters: Sequence[Letter]) -> str:
    if not letters:
        return IDENTITY_NAME
    return " ".join(str(x) for x in letters)


def parse_word(text: str) -> Word:
    letters = []
    for token in text.split():
        if token.endswith("^-1"):
            name, sign = token[:-3], -1
        elif token.endswith("^1"):
            name, sign = token[:-2], 1
        else:
            name, sign = token, 1
        if not name or not _NAME.match(name):
            raise WordSyntaxError(f"bad token {token!r} in word {text!r}")
        letters.append(E if name == IDENTITY_NAME else Letter(name, sign))
    return Word(tuple(letters))


def parse_reduced(text: str) -> ReducedWord:
    return reduce(parse_word(text))


def _free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    stack: list[Letter] = []
    for x in letters:
        if x.is_identity:
            continue
        if stack and stack[-1].base == x.base and stack[-1].sign == -x.sign:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def reduce(w: Word) -> ReducedWord:
    if isinstance(w, ReducedWord):
        return w
    return ReducedWord(_free_reduce(w.letters))


def multiply(g: ReducedWord, h: ReducedWord) -> ReducedWord:
    a, b = g.letters, h.letters
    k = 0
    while k < len(a) and k < len(b) and a[-1 - k] == b[k].inverse():
        k += 1
    return ReducedWord(a[: len(a) - k] + b[k:])


def invert(g: ReducedWord) -> ReducedWord:
    return ReducedWord(tuple(x.inverse() for x in reversed(g.letters)))


def product(*words: ReducedWord) -> ReducedWord:
    out = EPSILON
    for w in words:
        out = multiply(out, w)
    return out


def length(w: Word) -> int:
    return len(w.letters)


def support(w: Word) -> frozenset[Letter]:
    return frozenset(
        y for x in w.letters if not x.is_identity for y in (x, x.inverse())
    )


def exponent_sum(w: Word) -> int:
    return sum(x.sign for x in w.letters)


def is_almost_irreducible(w: Word) -> bool:
    # e is its own inverse, so "e e" is rejected too
    for x, y in zip(w.letters, w.letters[1:]):
        if y == x.inverse():
            return False
    return True


def alphabet(points: Sequence[str]) -> list[Letter]:
    """Non-identity letters in canonical order: ``a, a^-1, b, b^-1, ...``."""
    return [Letter(p, s) for p in points for s in (1, -1)]


def count_FPn(k: int, n: int) -> int:
    return 1 + sum(2 * k * (2 * k - 1) ** (j - 1) for j in range(1, n + 1))


def enumerate_FPn(
    points: Sequence[str], n: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> list[ReducedWord]:
    """All reduced words of length at most ``n``, shortlex in point order."""
    points = list(points)
    if not points:
        raise ValueError("point set must be non-empty")
    if n < 0:
        raise ValueError("n must be non-negative")
    total = count_FPn(len(points), n)
    if total > cap:
        raise CapExceeded(f"FP_{n} over {len(points)} points has {total} words (cap {cap})")
    letters = alphabet(points)
    out: list[tuple[Letter, ...]] = [()]
    layer: list[tuple[Letter, ...]] = [()]
    for _ in range(n):
        nxt = []
        for w in layer:
            for x in letters:
                if w and w[-1] == x.inverse():
                    continue
                nxt.append(w + (x,))
        out.extend(nxt)
        layer = nxt
    return [ReducedWord(w) for w in out]


def word_sort_key(points: Sequence[str]):
    order = {p: i for i, p in enumerate(points)}

    def key(w: Word):
        return (len(w), tuple((order.get(x.base, -1), -x.sign) for x in w.letters))

    return key
