"""Dill maps: sliding local rules ``A^s -> A^+`` whose images are concatenated.

Cellular automata are the dill maps whose images all have length 1, and
substitutions are the dill maps of diameter 1.
"""
from __future__ import annotations

import itertools
import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping

import numpy as np

from .words import (Alphabet, EventuallyPeriodic, InfiniteWordSpec, Word, as_array,
                    infer_alphabet, shift)

DEFAULT_MAX_INPUT = 10**8


class OrbitBlowUp(RuntimeError):
    """An iteration would need more input letters than the configured cap."""


class RuleParseError(ValueError):
    def __init__(self, path, line: int, msg: str):
        super().__init__(f"{path}:{line}: {msg}")
        self.path, self.line, self.msg = path, line, msg


def max_input_cap() -> int:
    return int(os.environ.get("DILLSCOPE_MAX_INPUT", DEFAULT_MAX_INPUT))


class LocalRule:
    """Total table from the ``k^s`` windows to nonempty words.

    Windows are indexed by their base-``k`` value, most significant letter first.
    """

    def __init__(self, alphabet: Alphabet, diameter: int, images):
        if diameter < 1:
            raise ValueError("diameter must be positive")
        k = alphabet.size
        if len(images) != k**diameter:
            raise ValueError(f"need {k**diameter} window images, got {len(images)}")
        imgs = tuple(as_array(Word(img, alphabet)).copy() for img in images)
        for code, img in enumerate(imgs):
            if img.size == 0:
                raise ValueError(f"window {self._window_str(alphabet, diameter, code)} has an empty image")
        self.alphabet = alphabet
        self.diameter = diameter
        self.images = tuple(Word(img, alphabet) for img in imgs)
        self.lengths = np.array([img.size for img in imgs], dtype=np.int64)
        self.lengths.flags.writeable = False
        width = int(self.lengths.max())
        self._padded = np.zeros((len(imgs), width), dtype=np.uint8)
        for code, img in enumerate(imgs):
            self._padded[code, : img.size] = img
        self._padded.flags.writeable = False
        self._powers = k ** np.arange(diameter - 1, -1, -1, dtype=np.int64)

    @staticmethod
    def _window_str(alphabet, diameter, code):
        letters = []
        for _ in range(diameter):
            code, r = divmod(code, alphabet.size)
            letters.append(alphabet.glyphs[r])
        return "".join(reversed(letters))

    def windows(self):
        return [Word(w, self.alphabet)
                for w in itertools.product(range(self.alphabet.size), repeat=self.diameter)]

    def image(self, window) -> Word:
        code = int(np.dot(as_array(window).astype(np.int64), self._powers))
        return self.images[code]

    def window_codes(self, u: np.ndarray) -> np.ndarray:
        s = self.diameter
        n = u.size - s + 1
        if n <= 0:
            return np.zeros(0, dtype=np.int64)
        u64 = u.astype(np.int64)
        codes = np.zeros(n, dtype=np.int64)
        for j in range(s):
            codes += u64[j: j + n] * self._powers[j]
        return codes

    @property
    def lower_norm(self) -> int:
        return int(self.lengths.min())

    @property
    def upper_norm(self) -> int:
        return int(self.lengths.max())

    def __eq__(self, other):
        return (isinstance(other, LocalRule) and self.alphabet == other.alphabet
                and self.diameter == other.diameter and self.images == other.images)

    def __hash__(self):
        return hash((self.alphabet, self.diameter, self.images))


class DillMap:
    """A dill map given by its local rule; kind predicates are derived, never stored."""

    def __init__(self, rule: LocalRule, name: str = ""):
        self.rule = rule
        self.name = name

    # constructors ---------------------------------------------------------

    @classmethod
    def from_table(cls, table: Mapping[str, str], alphabet: Alphabet | None = None,
                   name: str = "") -> "DillMap":
        """``{"00": "01", ...}``; every window must appear exactly once."""
        if alphabet is None:
            alphabet = infer_alphabet("".join(table) + "".join(table.values()))
        diameters = {len(w) for w in table}
        if len(diameters) != 1:
            raise ValueError("all windows must have the same length")
        (s,) = diameters
        images = []
        for w in itertools.product(alphabet.glyphs, repeat=s):
            key = "".join(w)
            if key not in table:
                raise ValueError(f"missing window {key!r}")
            images.append(Word(table[key], alphabet))
        return cls(LocalRule(alphabet, s, images), name)

    @classmethod
    def substitution(cls, images: Mapping[str, str] | list[str],
                     alphabet: Alphabet | None = None, name: str = "") -> "DillMap":
        if not isinstance(images, Mapping):
            alphabet = alphabet or Alphabet(max(2, len(images)))
            images = {alphabet.glyphs[a]: img for a, img in enumerate(images)}
        return cls.from_table(images, alphabet, name)

    @classmethod
    def cellular_automaton(cls, local: Callable[..., int], diameter: int,
                           alphabet: Alphabet = Alphabet(2), name: str = "") -> "DillMap":
        images = [[local(*w)] for w in itertools.product(range(alphabet.size), repeat=diameter)]
        return cls(LocalRule(alphabet, diameter, images), name)

    # structure ------------------------------------------------------------

    @property
    def alphabet(self) -> Alphabet:
        return self.rule.alphabet

    @property
    def diameter(self) -> int:
        return self.rule.diameter

    @property
    def lower_norm(self) -> int:
        return self.rule.lower_norm

    @property
    def upper_norm(self) -> int:
        return self.rule.upper_norm

    @property
    def is_substitution(self) -> bool:
        return self.diameter == 1

    @property
    def is_uniform(self) -> bool:
        return self.lower_norm == self.upper_norm

    @property
    def is_ca(self) -> bool:
        return self.upper_norm == 1

    def image(self, window) -> Word:
        return self.rule.image(window)

    def f_star(self, u) -> Word:
        return f_star(self, u)

    def __call__(self, x: InfiniteWordSpec) -> InfiniteWordSpec:
        return apply_as_spec(self, x)

    def __eq__(self, other):
        return isinstance(other, DillMap) and self.rule == other.rule

    def __hash__(self):
        return hash(self.rule)

    def table_text(self) -> str:
        lines = [f"alphabet={self.alphabet.glyphs}", f"diameter={self.diameter}"]
        for w in self.rule.windows():
            lines.append(f"{w} -> {self.image(w)}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<DillMap{label} s={self.diameter} norms=[{self.lower_norm},{self.upper_norm}]>"


# ---------------------------------------------------------------------------
# application


def _f_star_array(F: DillMap, u: np.ndarray) -> np.ndarray:
    rule = F.rule
    codes = rule.window_codes(u)
    if codes.size == 0:
        return np.zeros(0, dtype=np.uint8)
    if F.is_uniform:
        return rule._padded[codes].reshape(-1)
    rows = rule._padded[codes]
    keep = np.arange(rows.shape[1]) < rule.lengths[codes][:, None]
    return rows[keep]


def f_star(F: DillMap, u) -> Word:
    """Concatenated images of the ``|u| - s + 1`` windows of ``u`` (empty if ``|u| < s``)."""
    return Word(_f_star_array(F, as_array(u)), F.alphabet)


def input_needed(F: DillMap, l_out: int) -> int:
    """Input letters sufficient for ``l_out`` output letters."""
    if l_out <= 0:
        return 0
    return -(-l_out // F.lower_norm) + F.diameter - 1


def cocycle(F: DillMap, x: InfiniteWordSpec, n: int) -> int:
    """``|f*(x[0, n+s))|``: output length of the first ``n + 1`` windows."""
    return int(F.rule.lengths[F.rule.window_codes(x.prefix(n + F.diameter).letters)].sum())


def apply(F: DillMap, x: InfiniteWordSpec, l_out: int) -> Word:
    """First ``l_out`` letters of ``F(x)``."""
    u = x.prefix(input_needed(F, l_out)).letters
    return Word(_f_star_array(F, u)[:l_out], F.alphabet)


@dataclass(frozen=True, eq=False)
class DillImage(InfiniteWordSpec):
    """Lazy ``F(x)`` for inputs without a periodic normal form."""

    dill: DillMap
    base: InfiniteWordSpec

    @property
    def alphabet(self):
        return self.dill.alphabet

    def _prefix(self, length):
        return apply(self.dill, self.base, length)

    def __str__(self):
        return f"{self.dill.name or 'F'}({self.base})"


def apply_as_spec(F: DillMap, x: InfiniteWordSpec) -> InfiniteWordSpec:
    """``F(x)`` as a spec; eventually periodic inputs give an exact periodic normal form."""
    if isinstance(x, EventuallyPeriodic):
        s = F.diameter
        t = len(x.transient)
        p = len(x.period)
        letters = x.prefix(t + p + s - 1).letters
        transient = _f_star_array(F, letters[: t + s - 1])
        period = _f_star_array(F, letters[t:])
        return EventuallyPeriodic(Word(transient, F.alphabet), Word(period, F.alphabet))
    return DillImage(F, x)


def iterate(F: DillMap, x: InfiniteWordSpec, t: int, l_out: int,
            cap: int | None = None) -> Word:
    """Prefix of length ``l_out`` of ``F^t(x)``.

    The input length is found by backward accounting through ``t`` steps;
    exceeding ``cap`` input letters raises :class:`OrbitBlowUp`.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    cap = max_input_cap() if cap is None else cap
    needs = [l_out]
    for _ in range(t):
        needs.append(input_needed(F, needs[-1]))
        if needs[-1] > cap:
            raise OrbitBlowUp(f"orbit blow-up: step needs {needs[-1]} input letters (cap {cap})")
    needs.reverse()
    w = x.prefix(needs[0]).letters
    for need in needs[1:]:
        w = _f_star_array(F, w)[:need]
    return Word(w, F.alphabet)


def orbit_rows(F: DillMap, x: InfiniteWordSpec, steps: int, width: int,
               cap: int | None = None) -> np.ndarray:
    """``steps x width`` array whose row ``t`` is the prefix of ``F^t(x)``."""
    rows = np.zeros((steps, width), dtype=np.uint8)
    for t in range(steps):
        rows[t] = iterate(F, x, t, width, cap).letters
    return rows


def check_cocycle_identity(F: DillMap, x: InfiniteWordSpec, n: int, l: int) -> bool:
    """``F(σ^n x)`` agrees with ``σ^θ F(x)`` on ``l`` letters, ``θ = cocycle(F, x, n-1)``."""
    theta = cocycle(F, x, n - 1) if n > 0 else 0
    lhs = apply(F, shift(x, n), l)
    rhs = apply(F, x, l + theta)[theta:]
    return lhs == rhs


# ---------------------------------------------------------------------------
# structure


def nonuniform_pair(F: DillMap) -> tuple[Word, Word, int] | None:
    """First equal-length pair (lexicographic, shortest first) sharing a suffix of
    length ``s - 1`` whose images differ in length, oriented so the gap ``k`` is positive.

    ``None`` for uniform maps.  A pair of length at most ``2s - 1`` always exists
    otherwise: if none did, image lengths could not depend on any window letter.
    """
    if F.is_uniform:
        return None
    s, A = F.diameter, F.alphabet
    for m in range(s, 2 * s):
        free = m - s + 1
        for suffix in itertools.product(range(A.size), repeat=s - 1):
            heads = list(itertools.product(range(A.size), repeat=free))
            for hu, hv in itertools.combinations(heads, 2):
                u = Word(hu + suffix, A)
                v = Word(hv + suffix, A)
                k = len(f_star(F, u)) - len(f_star(F, v))
                if k > 0:
                    return u, v, k
                if k < 0:
                    return v, u, -k
    raise AssertionError("nonuniform map without a length-separating pair")


def _period_window(F: DillMap, k: int) -> int:
    return F.diameter + -(-(k + 1) // F.lower_norm) + 1


def is_constant(F: DillMap) -> bool:
    """Whether ``F(x)`` is the same infinite word for every ``x``."""
    if F.is_uniform:
        return len(set(F.rule.images)) == 1
    _, _, k = nonuniform_pair(F)
    return k_periodicity_violation(F, k) is None


def k_periodicity_violation(F: DillMap, k: int) -> tuple[Word, int] | None:
    """Some ``(w, i)`` with ``f*(w)_i != f*(w)_{i+k}``, searching words of the
    sufficient length only (every ``k + 1`` consecutive output letters come from
    a factor of at most that length)."""
    L = _period_window(F, k)
    for w in F.alphabet.words(L):
        img = _f_star_array(F, w.letters)
        if img.size > k:
            bad = np.flatnonzero(img[:-k] != img[k:])
            if bad.size:
                return w, int(bad[0])
    return None


def compose_subst_ca(tau: DillMap, g: DillMap) -> DillMap:
    """Local rule ``u -> τ(g(u))``."""
    if not tau.is_substitution:
        raise TypeError("first argument must be a substitution")
    if not g.is_ca:
        raise TypeError("second argument must be a cellular automaton")
    if tau.alphabet != g.alphabet:
        raise TypeError("alphabets differ")
    images = [tau.rule.images[img[0]] for img in g.rule.images]
    name = f"{tau.name}_{g.name}" if tau.name and g.name else ""
    return DillMap(LocalRule(g.alphabet, g.diameter, images), name)


def identity_substitution(alphabet: Alphabet) -> DillMap:
    return DillMap(LocalRule(alphabet, 1, [[a] for a in range(alphabet.size)]), "identity")


# ---------------------------------------------------------------------------
# rule files

_HEADER_RE = re.compile(r"^(alphabet|diameter)\s*=\s*(\S+)$")
_LINE_RE = re.compile(r"^(\S+)\s*->\s*(\S*)$")


def parse_rule(text: str, path: str = "<string>", name: str = "") -> DillMap:
    """Parse ``alphabet=..``/``diameter=..`` headers and ``window -> image`` lines."""
    header: dict[str, tuple[str, int]] = {}
    table: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER_RE.match(line)
        if m:
            if m.group(1) in header:
                raise RuleParseError(path, lineno, f"duplicate {m.group(1)} header")
            header[m.group(1)] = (m.group(2), lineno)
            continue
        m = _LINE_RE.match(line)
        if not m:
            raise RuleParseError(path, lineno, f"cannot parse line {line!r}")
        window, image = m.groups()
        if not image:
            raise RuleParseError(path, lineno, f"empty image for window {window!r}")
        if window in table:
            raise RuleParseError(path, lineno, f"duplicate window {window!r}")
        table[window] = (image, lineno)
    for key in ("alphabet", "diameter"):
        if key not in header:
            raise RuleParseError(path, 1, f"missing {key}= header")
    glyphs, lineno = header["alphabet"]
    try:
        alphabet = Alphabet(len(glyphs), glyphs)
    except ValueError as exc:
        raise RuleParseError(path, lineno, str(exc)) from None
    dtext, lineno = header["diameter"]
    if not dtext.isdigit() or int(dtext) < 1:
        raise RuleParseError(path, lineno, f"bad diameter {dtext!r}")
    s = int(dtext)
    for window, (image, lineno) in table.items():
        if len(window) != s:
            raise RuleParseError(path, lineno, f"window {window!r} has length {len(window)}, expected {s}")
        bad = [g for g in window + image if g not in glyphs]
        if bad:
            raise RuleParseError(path, lineno, f"glyph {bad[0]!r} not in alphabet")
    images = []
    for w in itertools.product(glyphs, repeat=s):
        key = "".join(w)
        if key not in table:
            raise RuleParseError(path, len(text.splitlines()) or 1, f"missing window {key!r}")
        images.append(Word(table[key][0], alphabet))
    return DillMap(LocalRule(alphabet, s, images), name)


def load_rule(path) -> DillMap:
    path = Path(path)
    return parse_rule(path.read_text(), str(path), path.stem)
