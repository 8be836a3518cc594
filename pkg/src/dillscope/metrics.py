"""Besicovitch, Feldman, centred and sliding (Weyl) pseudo-metric estimates.

The pseudo-metrics are limsups of normalized prefix distances, so from
finitely many samples only curves and bounds can be reported:

* ``curve`` samples ``d(x[0,l), y[0,l)) / l`` and summarizes the tail by its max;
* ``besicovitch_exact_periodic`` is exact for eventually periodic pairs;
* ``feldman_periodic_bounds`` gives certified upper bounds from subadditivity.

For both Hamming and Levenshtein the largest distance between two words of
length ``l`` is ``l`` (attained by ``0^l`` and ``1^l``), so ``l`` is the normalizer.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .editdist import HalfInt, hamming, levenshtein, levenshtein_prefix_profile
from .words import EventuallyPeriodic, InfiniteWordSpec, joint_period, shift

HAMMING = "hamming"
LEVENSHTEIN = "levenshtein"
KINDS = (HAMMING, LEVENSHTEIN)

DEFAULT_TAIL_FRACTION = 0.25


def geometric_lengths(lo: int = 6, hi: int = 20) -> list[int]:
    """``[2**lo, ..., 2**hi]``, the default sampling schedule."""
    return [2**i for i in range(lo, hi + 1)]


@dataclass(frozen=True)
class Sample:
    length: int
    raw: int | HalfInt
    normalized: Fraction

    @property
    def raw_doubled(self) -> int:
        return self.raw.doubled if isinstance(self.raw, HalfInt) else 2 * int(self.raw)


@dataclass(frozen=True)
class Estimate:
    value: Fraction
    kind: str  # "ExactPeriodic" | "FeketeUpperBound" | "TailMax"


@dataclass(frozen=True)
class DistanceCurve:
    kind: str
    samples: tuple[Sample, ...]
    estimate: Estimate

    @property
    def lengths(self) -> list[int]:
        return [s.length for s in self.samples]

    @property
    def normalized(self) -> list[Fraction]:
        return [s.normalized for s in self.samples]

    def to_csv(self) -> str:
        out = io.StringIO(newline="")
        out.write("l,raw_doubled,normalized\n")
        for s in self.samples:
            out.write(f"{s.length},{s.raw_doubled},{float(s.normalized):.9f}\n")
        out.write(f"# estimate={float(self.estimate.value):.9f} kind={self.estimate.kind}\n")
        return out.getvalue()


def _check_lengths(lengths: Sequence[int]) -> list[int]:
    lengths = [int(l) for l in lengths]
    if not lengths:
        raise ValueError("need at least one length")
    if any(l <= 0 for l in lengths):
        raise ValueError("prefix lengths must be positive")
    if any(b <= a for a, b in zip(lengths, lengths[1:])):
        raise ValueError("lengths must be strictly increasing")
    return lengths


def tail_max(values: Sequence[Fraction], fraction: float = DEFAULT_TAIL_FRACTION) -> Fraction:
    n = max(1, math.ceil(len(values) * fraction))
    return max(values[-n:])


def _raw_profile(kind: str, u: np.ndarray, v: np.ndarray, lengths: list[int]) -> list:
    if kind == HAMMING:
        mism = np.concatenate([[0], np.cumsum(u != v)])
        return [int(mism[l]) for l in lengths]
    if kind == LEVENSHTEIN:
        return levenshtein_prefix_profile(u, v, lengths)
    raise ValueError(f"unknown distance kind {kind!r}")


def curve(kind: str, x: InfiniteWordSpec, y: InfiniteWordSpec, lengths: Sequence[int],
          tail_fraction: float = DEFAULT_TAIL_FRACTION) -> DistanceCurve:
    """Normalized prefix distances at each length; estimate is the tail max."""
    lengths = _check_lengths(lengths)
    top = lengths[-1]
    u, v = x.prefix(top).letters, y.prefix(top).letters
    raws = _raw_profile(kind, u, v, lengths)
    samples = tuple(Sample(l, r, _fraction(r) / l) for l, r in zip(lengths, raws))
    value = tail_max([s.normalized for s in samples], tail_fraction)
    return DistanceCurve(kind, samples, Estimate(value, "TailMax"))


def _fraction(raw) -> Fraction:
    return raw.as_fraction() if isinstance(raw, HalfInt) else Fraction(raw)


def besicovitch_exact_periodic(x: EventuallyPeriodic, y: EventuallyPeriodic) -> Fraction:
    """Exact Besicovitch distance: mismatch density over one joint period past both transients."""
    t, p = joint_period(x, y)
    u = x.prefix(t + p).letters[t:]
    v = y.prefix(t + p).letters[t:]
    return Fraction(hamming(u, v), p)


@dataclass(frozen=True)
class FeldmanBounds:
    upper: Fraction
    tail_estimate: Fraction
    block_counts: tuple[int, ...]
    uppers: tuple[Fraction, ...]   # running minimum, one per block count
    block_length: int


def feldman_periodic_bounds(x: EventuallyPeriodic, y: EventuallyPeriodic,
                            block_counts: Sequence[int] = (1, 2, 4, 8, 16, 32, 64)
                            ) -> FeldmanBounds:
    """Certified upper bound on the Feldman distance of two eventually periodic words.

    Past the joint transient both words are periodic with the lcm period ``B``;
    ``a_n = d_L`` of ``n`` aligned blocks is subadditive, so every ``a_n / (nB)``
    bounds the limit from above.  ``tail_estimate`` is the plain normalized
    distance at the longest sampled prefix ``t + nB``; it can exceed ``upper``
    by at most ``t / (t + nB)`` when the counts are powers of two.
    """
    counts = sorted({int(n) for n in block_counts})
    if not counts or counts[0] < 1:
        raise ValueError("block counts must be positive")
    t, B = joint_period(x, y)
    xs, ys = shift(x, t), shift(y, t)
    lengths = [n * B for n in counts]
    u, v = xs.prefix(lengths[-1]).letters, ys.prefix(lengths[-1]).letters
    profile = levenshtein_prefix_profile(u, v, lengths)
    uppers, best = [], None
    for l, d in zip(lengths, profile):
        ratio = d.as_fraction() / l
        best = ratio if best is None else min(best, ratio)
        uppers.append(best)
    tail = curve(LEVENSHTEIN, x, y, [t + l for l in lengths]).samples[-1].normalized
    return FeldmanBounds(best, tail, tuple(counts), tuple(uppers), B)


# ---------------------------------------------------------------------------
# generalized pseudo-metrics

Distance = Callable[[np.ndarray, np.ndarray], "int | HalfInt | Fraction"]

_BUILTIN_DISTANCES: dict[str, Distance] = {HAMMING: hamming, LEVENSHTEIN: levenshtein}


def centred_pseudometric(d: str | Distance, x: InfiniteWordSpec, y: InfiniteWordSpec,
                         lengths: Sequence[int],
                         normalizer: Callable[[int], "int | Fraction"] | None = None,
                         tail_fraction: float = DEFAULT_TAIL_FRACTION) -> DistanceCurve:
    """``d(x[0,l), y[0,l)) / max_{u,v in A^l} d(u, v)``.

    Built-in kinds use the normalizer ``l``; custom distances must pass one.
    """
    if x.alphabet.size < 2:
        raise ValueError("degenerate normalizer: one-letter alphabets have max distance 0")
    if isinstance(d, str):
        if normalizer is None:
            return curve(d, x, y, lengths, tail_fraction)
        d = _BUILTIN_DISTANCES[d]
    if normalizer is None:
        raise ValueError("custom distances need a normalizer")
    lengths = _check_lengths(lengths)
    samples = []
    for l in lengths:
        raw = d(x.prefix(l).letters, y.prefix(l).letters)
        norm = Fraction(normalizer(l))
        if norm == 0:
            raise ValueError("degenerate normalizer: max distance is 0")
        samples.append(Sample(l, raw, _fraction(raw) / norm))
    value = tail_max([s.normalized for s in samples], tail_fraction)
    return DistanceCurve(str(getattr(d, "__name__", "custom")), tuple(samples),
                         Estimate(value, "TailMax"))


def weyl_curve(kind: str, x: EventuallyPeriodic, y: EventuallyPeriodic,
               lengths: Sequence[int],
               tail_fraction: float = DEFAULT_TAIL_FRACTION) -> DistanceCurve:
    """Sliding-window curve: ``max_k d(x[k,k+l), y[k,k+l)) / l``.

    Window starts beyond the joint transient plus one joint period repeat
    earlier windows, so ``k`` ranges over ``0..t+B``.
    """
    if not (isinstance(x, EventuallyPeriodic) and isinstance(y, EventuallyPeriodic)):
        raise TypeError("sliding pseudo-metric is supported for eventually periodic words only")
    lengths = _check_lengths(lengths)
    t, B = joint_period(x, y)
    starts = t + B + 1
    u = x.prefix(starts + lengths[-1]).letters
    v = y.prefix(starts + lengths[-1]).letters
    samples = []
    if kind == HAMMING:
        mism = np.concatenate([[0], np.cumsum(u != v)])
        for l in lengths:
            raw = int((mism[l: l + starts] - mism[:starts]).max())
            samples.append(Sample(l, raw, Fraction(raw, l)))
    elif kind == LEVENSHTEIN:
        for l in lengths:
            raw = max((levenshtein(u[k: k + l], v[k: k + l]) for k in range(starts)),
                      key=lambda h: h.doubled)
            samples.append(Sample(l, raw, raw.as_fraction() / l))
    else:
        raise ValueError(f"unknown distance kind {kind!r}")
    value = tail_max([s.normalized for s in samples], tail_fraction)
    return DistanceCurve(f"weyl-{kind}", tuple(samples), Estimate(value, "TailMax"))
