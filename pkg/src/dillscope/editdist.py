"""Hamming and Levenshtein distances on finite words.

The Levenshtein distance here is the deletion-only, half-weighted one:
``d_L(u, v) = (|u| + |v|)/2 - lcs(u, v)``.  Values are exact half-integers.

``lcs_length`` and ``lcs_prefix_profile`` share a bit-parallel kernel
(Allison-Dix / Hyyrö style) over ``uint64`` words, compiled with numba.
One pass over ``u`` against a fixed ``v`` yields ``lcs(u[:i], v[:j])`` for
every ``j`` as a prefix popcount of the row vector, which is what makes whole
distance curves cost the same as a single evaluation at the longest length.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numba
import numpy as np

from .words import Word, as_array, as_word

ORACLE_MAX_LENGTH = 12


@functools.total_ordering
class HalfInt:
    """Exact nonnegative half-integer, stored doubled."""

    __slots__ = ("doubled",)

    def __init__(self, doubled: int):
        if doubled < 0:
            raise ValueError("HalfInt values are nonnegative")
        self.doubled = int(doubled)

    @classmethod
    def of(cls, value) -> "HalfInt":
        twice = Fraction(value) * 2
        if twice.denominator != 1:
            raise ValueError(f"{value} is not a half-integer")
        return cls(int(twice))

    def __add__(self, other):
        if isinstance(other, int):
            other = HalfInt(2 * other)
        if not isinstance(other, HalfInt):
            return NotImplemented
        return HalfInt(self.doubled + other.doubled)

    __radd__ = __add__

    def _cmp_value(self, other):
        if isinstance(other, HalfInt):
            return other.doubled
        if isinstance(other, (int, Fraction)):
            return 2 * other
        if isinstance(other, float):
            return 2.0 * other
        return NotImplemented

    def __eq__(self, other):
        o = self._cmp_value(other)
        return NotImplemented if o is NotImplemented else self.doubled == o

    def __lt__(self, other):
        o = self._cmp_value(other)
        return NotImplemented if o is NotImplemented else self.doubled < o

    def __hash__(self):
        return hash(Fraction(self.doubled, 2))

    def as_fraction(self) -> Fraction:
        return Fraction(self.doubled, 2)

    def __float__(self):
        return self.doubled / 2

    def __str__(self):
        return str(self.doubled // 2) if self.doubled % 2 == 0 else f"{self.doubled}/2"

    def __repr__(self):
        return f"HalfInt({self})"


# ---------------------------------------------------------------------------
# edit operations


@dataclass(frozen=True)
class Substitute:
    position: int
    letter: int


@dataclass(frozen=True)
class Delete:
    position: int


EditOp = Substitute | Delete


def apply_edit(u, op: EditOp) -> Word:
    word = as_word(u)
    j = op.position
    if not 0 <= j < len(word):
        raise IndexError(f"edit position {j} out of range for word of length {len(word)}")
    letters = word.letters
    if isinstance(op, Delete):
        return Word(np.concatenate([letters[:j], letters[j + 1:]]), word.alphabet)
    out = letters.copy()
    out[j] = op.letter
    return Word(out, word.alphabet)


# ---------------------------------------------------------------------------
# distances


def hamming(u, v) -> int:
    a, b = as_array(u), as_array(v)
    if a.size != b.size:
        raise ValueError(f"Hamming distance needs equal lengths, got {a.size} and {b.size}")
    return int(np.count_nonzero(a != b))


def _pattern_masks(v: np.ndarray, nwords: int) -> np.ndarray:
    k = int(v.max()) + 1
    masks = np.zeros((k, nwords), dtype=np.uint64)
    for c in range(k):
        bits = np.packbits((v == c).astype(np.uint8), bitorder="little")
        padded = np.zeros(nwords * 8, dtype=np.uint8)
        padded[: bits.size] = bits
        masks[c] = padded.view("<u8")
    return masks


@numba.njit(cache=True)
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return int((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@numba.njit(cache=True)
def _lcs_rows(u, masks, nwords, rows, cols):
    """LCS(u[:rows[r]], v[:cols[r]]) for increasing ``rows``; ``v`` lives in ``masks``."""
    ones = np.uint64(0xFFFFFFFFFFFFFFFF)
    V = np.full(nwords, ones, dtype=np.uint64)
    out = np.zeros(rows.size, dtype=np.int64)
    nk = masks.shape[0]
    r = 0
    while r < rows.size and rows[r] == 0:
        r += 1
    for i in range(u.size):
        if r >= rows.size:
            break
        c = u[i]
        if c < nk:
            carry = np.uint64(0)
            for w in range(nwords):
                x = V[w] & masks[c, w]
                if x == 0 and carry == 0:
                    continue
                s = V[w] + x
                c1 = s < x
                s2 = s + carry
                c2 = s2 < s
                carry = np.uint64(1) if (c1 or c2) else np.uint64(0)
                V[w] = s2 | (V[w] - x)
        while r < rows.size and rows[r] == i + 1:
            n = cols[r]
            zeros = 0
            full = n // 64
            for w in range(full):
                zeros += 64 - _popcount(V[w])
            rem = n % 64
            if rem:
                m = (np.uint64(1) << np.uint64(rem)) - np.uint64(1)
                zeros += rem - _popcount(V[full] & m)
            out[r] = zeros
            r += 1
    return out


def _lcs_kernel(u: np.ndarray, v: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    if v.size == 0 or u.size == 0:
        return np.zeros(rows.size, dtype=np.int64)
    nwords = (v.size + 63) // 64
    masks = _pattern_masks(v, nwords)
    return _lcs_rows(np.ascontiguousarray(u, dtype=np.uint8), masks, nwords,
                     np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))


def lcs_length(u, v) -> int:
    """Length of a longest common subsequence ("subword") of ``u`` and ``v``."""
    a, b = as_array(u), as_array(v)
    if a.size > b.size:
        a, b = b, a
    # rows over the longer word keeps the bit vector short
    return int(_lcs_kernel(b, a, np.array([b.size]), np.array([a.size]))[0])


def lcs_prefix_profile(u, v, lengths: Sequence[int]) -> list[int]:
    """``[lcs(u[:l], v[:l]) for l in lengths]`` in a single kernel pass."""
    lengths = [int(l) for l in lengths]
    if any(b < a for a, b in zip(lengths, lengths[1:])):
        raise ValueError("lengths must be nondecreasing")
    if not lengths:
        return []
    top = lengths[-1]
    a, b = as_array(u), as_array(v)
    if a.size < top or b.size < top:
        raise ValueError("words shorter than the longest requested prefix")
    arr = np.array(lengths, dtype=np.int64)
    return [int(n) for n in _lcs_kernel(a[:top], b[:top], arr, arr)]


def levenshtein(u, v) -> HalfInt:
    a, b = as_array(u), as_array(v)
    return HalfInt(a.size + b.size - 2 * lcs_length(a, b))


def levenshtein_prefix_profile(u, v, lengths: Sequence[int]) -> list[HalfInt]:
    return [HalfInt(2 * l - 2 * c) for l, c in zip(lengths, lcs_prefix_profile(u, v, lengths))]


# ---------------------------------------------------------------------------
# brute-force oracle


@functools.lru_cache(maxsize=4096)
def _deletion_results(word: tuple[int, ...]) -> dict[int, frozenset]:
    """Words reachable from ``word`` by exactly m deletions, keyed by m."""
    results = {}
    n = len(word)
    for m in range(n + 1):
        reach = set()
        for positions in itertools.combinations(range(n), m):
            w = Word(word)
            # delete right to left so earlier positions stay valid
            for j in sorted(positions, reverse=True):
                w = apply_edit(w, Delete(j))
            reach.add(tuple(w))
        results[m] = frozenset(reach)
    return results


def levenshtein_oracle(u, v) -> HalfInt:
    """Minimal total deletion count (halved) making the two words equal, by enumeration."""
    a, b = tuple(as_array(u).tolist()), tuple(as_array(v).tolist())
    if len(a) > ORACLE_MAX_LENGTH or len(b) > ORACLE_MAX_LENGTH:
        raise ValueError(f"oracle limited to words of length <= {ORACLE_MAX_LENGTH}")
    da, db = _deletion_results(a), _deletion_results(b)
    for total in range(len(a) + len(b) + 1):
        for m in range(max(0, total - len(b)), min(total, len(a)) + 1):
            mp = total - m
            if len(a) - m != len(b) - mp:
                continue
            if not da[m].isdisjoint(db[mp]):
                return HalfInt(total)
    raise AssertionError("unreachable: deleting everything always works")

