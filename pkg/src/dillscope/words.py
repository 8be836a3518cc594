"""Alphabets, finite words, lazily generated infinite words and the Cantor distance.

Letters are dense integer indices ``0..k-1``; glyphs only matter when words
are parsed from or printed to text.  Finite words wrap a read-only ``uint8``
array so that the distance kernels can consume them without copying.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

DEFAULT_GLYPHS = "0123456789abcdefghijklmnopqrstuvwxyz"


class OrbitError(ValueError):
    """Raised when a substitution orbit cannot produce the requested prefix."""


@dataclass(frozen=True)
class Alphabet:
    size: int
    glyphs: str = ""

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("alphabet needs at least one letter")
        if self.size > 256:
            raise ValueError("alphabets are limited to 256 letters")
        glyphs = self.glyphs or DEFAULT_GLYPHS[: self.size]
        if len(glyphs) != self.size or len(set(glyphs)) != self.size:
            raise ValueError(f"need {self.size} distinct glyphs, got {glyphs!r}")
        object.__setattr__(self, "glyphs", glyphs)

    def letter(self, glyph: str) -> int:
        idx = self.glyphs.find(glyph)
        if idx < 0 or len(glyph) != 1:
            raise ValueError(f"glyph {glyph!r} not in alphabet {self.glyphs!r}")
        return idx

    def words(self, length: int) -> Iterable["Word"]:
        """All words of the given length, in lexicographic order."""
        for letters in itertools.product(range(self.size), repeat=length):
            yield Word(letters, self)

    def __len__(self):
        return self.size


BINARY = Alphabet(2)


def _freeze(letters) -> np.ndarray:
    arr = np.array(letters, dtype=np.uint8).reshape(-1)
    arr.flags.writeable = False
    return arr


class Word:
    """Immutable finite word.  ``Word("0110")`` parses glyphs over the binary alphabet."""

    __slots__ = ("letters", "alphabet")

    def __init__(self, letters: "str | Sequence[int] | np.ndarray | Word" = (),
                 alphabet: Alphabet | None = None):
        if isinstance(letters, Word):
            alphabet = alphabet or letters.alphabet
            letters = letters.letters
        if isinstance(letters, str):
            alphabet = alphabet or infer_alphabet(letters)
            letters = [alphabet.letter(g) for g in letters]
        arr = letters if (isinstance(letters, np.ndarray) and letters.dtype == np.uint8
                          and not letters.flags.writeable) else _freeze(letters)
        if alphabet is None:
            alphabet = Alphabet(max(2, int(arr.max()) + 1)) if arr.size else BINARY
        if arr.size and int(arr.max()) >= alphabet.size:
            raise ValueError(f"letter {int(arr.max())} outside alphabet of size {alphabet.size}")
        self.letters = arr
        self.alphabet = alphabet

    def __len__(self):
        return int(self.letters.size)

    def __getitem__(self, key):
        if isinstance(key, slice):
            return Word(self.letters[key], self.alphabet)
        return int(self.letters[key])

    def __iter__(self):
        return iter(self.letters.tolist())

    def __add__(self, other: "Word") -> "Word":
        other = as_word(other, self.alphabet)
        return Word(np.concatenate([self.letters, other.letters]), self.alphabet)

    def __mul__(self, times: int) -> "Word":
        return Word(np.tile(self.letters, times), self.alphabet)

    def __eq__(self, other):
        if isinstance(other, str):
            other = Word(other, self.alphabet)
        if not isinstance(other, Word):
            return NotImplemented
        return np.array_equal(self.letters, other.letters)

    def __hash__(self):
        return hash(self.letters.tobytes())

    def count(self, letter: int) -> int:
        """Number of occurrences of ``letter``."""
        return int(np.count_nonzero(self.letters == letter))

    def startswith(self, other: "Word") -> bool:
        other = as_word(other, self.alphabet)
        n = len(other)
        return n <= len(self) and np.array_equal(self.letters[:n], other.letters)

    def __str__(self):
        glyphs = self.alphabet.glyphs
        return "".join(glyphs[i] for i in self.letters.tolist())

    def __repr__(self):
        return f"Word({str(self)!r})"


EMPTY = Word(())


def infer_alphabet(text: str) -> Alphabet:
    """Smallest default alphabet (at least binary) containing every glyph of ``text``."""
    if not text:
        return BINARY
    top = max(DEFAULT_GLYPHS.index(g) if g in DEFAULT_GLYPHS else -1 for g in text)
    if any(g not in DEFAULT_GLYPHS for g in text):
        raise ValueError(f"cannot infer alphabet for {text!r}; pass one explicitly")
    return Alphabet(max(2, top + 1))


def as_word(u, alphabet: Alphabet | None = None) -> Word:
    return u if isinstance(u, Word) and alphabet in (None, u.alphabet) else Word(u, alphabet)


def as_array(u) -> np.ndarray:
    """Letters of a word-like value as a ``uint8`` array (no copy for ``Word``)."""
    if isinstance(u, Word):
        return u.letters
    if isinstance(u, str):
        return Word(u).letters
    return np.asarray(u, dtype=np.uint8).reshape(-1)


# ---------------------------------------------------------------------------
# infinite words


class InfiniteWordSpec:
    """A deterministic recipe for the prefixes of an infinite word."""

    alphabet: Alphabet

    def prefix(self, length: int) -> Word:
        if length < 0:
            raise ValueError("prefix length must be nonnegative")
        word = self._prefix(length)
        assert len(word) == length
        return word

    def _prefix(self, length: int) -> Word:
        raise NotImplementedError

    def is_eventually_periodic(self) -> bool:
        return False


@dataclass(frozen=True, eq=False)
class EventuallyPeriodic(InfiniteWordSpec):
    """``transient · period^∞``."""

    transient: Word
    period: Word

    def __post_init__(self):
        if len(self.period) == 0:
            raise ValueError("period must be nonempty")
        if self.transient.alphabet != self.period.alphabet:
            alpha = max(self.transient.alphabet, self.period.alphabet, key=lambda a: a.size)
            object.__setattr__(self, "transient", Word(self.transient.letters, alpha))
            object.__setattr__(self, "period", Word(self.period.letters, alpha))

    @classmethod
    def of(cls, transient="", period="0", alphabet: Alphabet | None = None):
        if alphabet is None and isinstance(transient, str) and isinstance(period, str):
            alphabet = infer_alphabet(transient + period)
        return cls(Word(transient, alphabet), Word(period, alphabet))

    @property
    def alphabet(self) -> Alphabet:
        return self.period.alphabet

    def _prefix(self, length):
        t = self.transient.letters
        if length <= t.size:
            return Word(t[:length], self.alphabet)
        reps = -(-(length - t.size) // self.period.letters.size)
        body = np.tile(self.period.letters, reps)[: length - t.size]
        return Word(np.concatenate([t, body]), self.alphabet)

    def is_eventually_periodic(self):
        return True

    def shifted(self, n: int) -> "EventuallyPeriodic":
        t, p = self.transient, self.period
        if n <= len(t):
            return EventuallyPeriodic(t[n:], p)
        r = (n - len(t)) % len(p)
        return EventuallyPeriodic(Word((), self.alphabet), p[r:] + p[:r])

    def __eq__(self, other):
        return (isinstance(other, EventuallyPeriodic) and self.transient == other.transient
                and self.period == other.period)

    def __hash__(self):
        return hash((self.transient, self.period))

    def __str__(self):
        return f"{self.transient}({self.period})^inf"

    def __repr__(self):
        return f"EventuallyPeriodic({str(self)!r})"


@dataclass(frozen=True, eq=False)
class SubstitutionOrbit(InfiniteWordSpec):
    """The fixed point ``lim τ^t(seed)`` of a substitution prolongable on ``seed``.

    ``rule`` is any diameter-1 map exposing ``f_star`` and ``alphabet``.
    """

    rule: object
    seed: int
    max_iterations: int = 64
    name: str = ""

    @property
    def alphabet(self) -> Alphabet:
        return self.rule.alphabet

    def _prefix(self, length):
        word = Word([self.seed], self.alphabet)
        prolongable = self.rule.f_star(word).startswith(word)
        for _ in range(self.max_iterations):
            if len(word) >= length:
                return word[:length]
            if not prolongable:
                break
            nxt = self.rule.f_star(word)
            if len(nxt) == len(word):
                break
            word = nxt
        if len(word) >= length:
            return word[:length]
        raise OrbitError("orbit prefix not stabilizing")

    def __str__(self):
        return f"fix({self.name or 'rule'},{self.alphabet.glyphs[self.seed]})"


@dataclass(frozen=True, eq=False)
class ExplicitStream(InfiniteWordSpec):
    """Letters drawn from ``generator()``; each call must yield the same stream."""

    generator: Callable[[], Iterable[int]]
    alphabet: Alphabet = BINARY

    def _prefix(self, length):
        letters = list(itertools.islice(self.generator(), length))
        if len(letters) < length:
            raise ValueError("stream generator ended early")
        return Word(letters, self.alphabet)


@dataclass(frozen=True, eq=False)
class Shifted(InfiniteWordSpec):
    base: InfiniteWordSpec
    offset: int

    @property
    def alphabet(self):
        return self.base.alphabet

    def _prefix(self, length):
        return self.base.prefix(length + self.offset)[self.offset:]

    def __str__(self):
        return f"shift({self.base},{self.offset})"


def prefix(x: InfiniteWordSpec, length: int) -> Word:
    return x.prefix(length)


def shift(x: InfiniteWordSpec, n: int) -> InfiniteWordSpec:
    """``σ^n(x)``; eventually periodic words stay in normal form."""
    if n < 0:
        raise ValueError("shift amount must be nonnegative")
    if n == 0:
        return x
    if isinstance(x, EventuallyPeriodic):
        return x.shifted(n)
    if isinstance(x, Shifted):
        return Shifted(x.base, x.offset + n)
    return Shifted(x, n)


def cantor_distance(x: InfiniteWordSpec, y: InfiniteWordSpec, max_l: int) -> Fraction:
    """``2^-m`` for the first mismatch ``m < max_l``; 0 means equal as far as inspected."""
    if max_l < 1:
        raise ValueError("max_l must be at least 1")
    diff = np.flatnonzero(x.prefix(max_l).letters != y.prefix(max_l).letters)
    if diff.size == 0:
        return Fraction(0)
    return Fraction(1, 2 ** int(diff[0]))


def periodic(transient="", period="0", alphabet: Alphabet | None = None) -> EventuallyPeriodic:
    """Shorthand for ``EventuallyPeriodic.of``."""
    return EventuallyPeriodic.of(transient, period, alphabet)


def joint_period(x: EventuallyPeriodic, y: EventuallyPeriodic) -> tuple[int, int]:
    """(joint transient length, lcm of the periods)."""
    return max(len(x.transient), len(y.transient)), math.lcm(len(x.period), len(y.period))


_SPEC_RE = re.compile(r"^\s*([^()\s]*)\(([^()\s]+)\)\^inf\s*$")
_FIX_RE = re.compile(r"^\s*fix\(\s*([\w\-]+)\s*,\s*(\S)\s*\)\s*$")


def parse_spec(text: str, alphabet: Alphabet | None = None,
               rules: Callable[[str], object] | None = None) -> InfiniteWordSpec:
    """Parse ``transient(period)^inf`` or ``fix(<rule-name>,<seed>)``.

    ``rules`` resolves a rule name to a substitution for the ``fix`` form.
    """
    m = _SPEC_RE.match(text)
    if m:
        return EventuallyPeriodic.of(m.group(1), m.group(2), alphabet)
    m = _FIX_RE.match(text)
    if m:
        if rules is None:
            raise ValueError("fix(...) specs need a rule resolver")
        rule = rules(m.group(1))
        if rule.diameter != 1:
            raise ValueError(f"rule {m.group(1)!r} is not a substitution")
        return SubstitutionOrbit(rule, rule.alphabet.letter(m.group(2)), name=m.group(1))
    raise ValueError(f"cannot parse infinite word spec {text!r}")
