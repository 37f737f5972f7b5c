"""Finite words, eventually periodic selectors, and truncated one-sided shifts."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from typing import Iterable, Sequence

from .metric import FiniteMetricSpace, build_space

DEFAULT_POINT_BUDGET = 4096


class BudgetExceeded(RuntimeError):
    """A construction or search would exceed the configured budget."""


@dataclass(frozen=True)
class Word:
    symbols: tuple[int, ...]
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("alphabet size must be >= 1")
        object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))
        bad = [s for s in self.symbols if not 0 <= s < self.m]
        if bad:
            raise ValueError(f"symbol {bad[0]} outside alphabet of size {self.m}")

    @classmethod
    def parse(cls, text: str | Sequence[int], m: int) -> "Word":
        """Digit string (``"011"``) or sequence of ints; ``""`` is the empty word."""
        if isinstance(text, str):
            return cls(tuple(int(ch) for ch in text), m)
        return cls(tuple(text), m)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, i):
        return self.symbols[i]

    def __str__(self) -> str:
        # Serialized as a plain digit string; alphabets beyond 10 use dots.
        if self.m <= 10:
            return "".join(str(s) for s in self.symbols)
        return ".".join(str(s) for s in self.symbols)


def length(w: Word) -> int:
    return len(w.symbols)


def concat(w: Word, v: Word) -> Word:
    if w.m != v.m:
        raise ValueError(f"alphabet mismatch: {w.m} vs {v.m}")
    return Word(w.symbols + v.symbols, w.m)


def reverse(w: Word) -> Word:
    return Word(w.symbols[::-1], w.m)


@dataclass(frozen=True)
class Selector:
    """Eventually periodic symbol sequence ``preperiod · period^∞``."""

    preperiod: Word
    period: Word

    def __post_init__(self):
        if len(self.period) == 0:
            raise ValueError("selector period must be nonempty")
        if self.preperiod.m != self.period.m:
            raise ValueError("preperiod and period use different alphabets")

    @classmethod
    def parse(cls, preperiod: str | Sequence[int], period: str | Sequence[int], m: int) -> "Selector":
        return cls(Word.parse(preperiod, m), Word.parse(period, m))

    @property
    def m(self) -> int:
        return self.period.m

    def __getitem__(self, n: int) -> int:
        return selector_symbol(self, n)

    def prefix(self, n: int) -> Word:
        return Word(tuple(selector_symbol(self, i) for i in range(n)), self.m)

    def __str__(self) -> str:
        return f"{self.preperiod}({self.period})"


def selector_symbol(sel: Selector, n: int) -> int:
    if n < 0:
        raise ValueError("index must be nonnegative")
    pre = sel.preperiod.symbols
    if n < len(pre):
        return pre[n]
    per = sel.period.symbols
    return per[(n - len(pre)) % len(per)]


def d1_metric(w: Word | Sequence[int], v: Word | Sequence[int]) -> Fraction:
    """``2**-k`` with ``k`` the first index where the words differ; 0 if equal."""
    a, b = tuple(w), tuple(v)
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    if isinstance(w, Word) and isinstance(v, Word) and w.m != v.m:
        raise ValueError(f"alphabet mismatch: {w.m} vs {v.m}")
    for k, (s, t) in enumerate(zip(a, b)):
        if s != t:
            return Fraction(1, 2**k)
    return Fraction(0)


@dataclass(frozen=True)
class CylinderSpace:
    """All ``m**K`` words of length ``K`` under the truncated shift metric.

    Point ``i`` is the word whose base-``m`` digits (most significant first)
    are ``i``; labels are the digit strings.
    """

    m: int
    K: int
    words: tuple[tuple[int, ...], ...]
    space: FiniteMetricSpace

    def index(self, word: Word | Sequence[int] | str) -> int:
        if isinstance(word, str):
            word = Word.parse(word, self.m)
        i = 0
        for s in word:
            i = i * self.m + s
        return i

    def word(self, i: int) -> Word:
        return Word(self.words[i], self.m)


def _check_budget(n: int, budget: int, what: str) -> None:
    if n > budget:
        raise BudgetExceeded(f"{what} needs {n} points, budget is {budget}")


def all_words(m: int, K: int) -> list[tuple[int, ...]]:
    return list(cartesian(range(m), repeat=K))


def cylinder_space(m: int, K: int, budget: int = DEFAULT_POINT_BUDGET) -> CylinderSpace:
    if m < 1 or K < 1:
        raise ValueError("need m >= 1 and K >= 1")
    _check_budget(m**K, budget, f"cylinder space m={m} K={K}")
    words = all_words(m, K)
    table = [[d1_metric(a, b) for b in words] for a in words]
    labels = [str(Word(w, m)) for w in words]
    # d1 is an ultrametric by construction; validation is O(N^3).
    space = build_space(table=table, labels=labels, validate=len(words) <= 64)
    return CylinderSpace(m, K, tuple(words), space)


def prepend_generators(m: int, K: int) -> list[tuple[int, ...]]:
    """``f_j(s_0..s_{K-1}) = j s_0..s_{K-2}`` as index arrays, one per symbol."""
    words = all_words(m, K)
    index = {w: i for i, w in enumerate(words)}
    return [tuple(index[(j,) + w[:-1]] for w in words) for j in range(m)]


def shift_generator(m: int, K: int, pad: int = 0) -> tuple[int, ...]:
    """Padded shift ``s_0..s_{K-1} -> s_1..s_{K-1} pad`` as an index array."""
    if not 0 <= pad < m:
        raise ValueError(f"pad symbol {pad} outside alphabet of size {m}")
    words = all_words(m, K)
    index = {w: i for i, w in enumerate(words)}
    return tuple(index[w[1:] + (pad,)] for w in words)


def words_to_indices(words: Iterable[Word | str], m: int) -> list[int]:
    out = []
    for w in words:
        if isinstance(w, str):
            w = Word.parse(w, m)
        i = 0
        for s in w:
            i = i * m + s
        out.append(i)
    return out
