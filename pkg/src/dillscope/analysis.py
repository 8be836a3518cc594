"""Occurrence matrices, irreducible components and the classification of dill maps
in the Besicovitch and Feldman pseudo-metrics.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.sparse.csgraph import connected_components

from .dillmap import (DillMap, f_star, is_constant, iterate, k_periodicity_violation,
                      nonuniform_pair, apply_as_spec)
from .editdist import hamming
from .words import EventuallyPeriodic

RHO_TOL = 1e-12
RHO_MAX_ITER = 100_000


def _require_substitution(tau: DillMap):
    if not tau.is_substitution:
        raise TypeError("operation needs a substitution (diameter 1)")


def occurrence_matrix(tau: DillMap) -> np.ndarray:
    """``M[a, b] = |τ(a)|_b`` as an exact integer matrix."""
    _require_substitution(tau)
    k = tau.alphabet.size
    M = np.zeros((k, k), dtype=np.int64)
    for a, img in enumerate(tau.rule.images):
        M[a] = np.bincount(img.letters, minlength=k)
    return M


def matrix_power(M: np.ndarray, t: int) -> np.ndarray:
    """Exact power with Python integers (no overflow)."""
    P = np.identity(M.shape[0], dtype=object)
    B = M.astype(object)
    while t:
        if t & 1:
            P = P.dot(B)
        B = B.dot(B)
        t >>= 1
    return P


def growth(tau: DillMap, a: int, t: int) -> int:
    """``|τ^t(a)|`` as the row sum of ``M^t``."""
    if t > 64:
        raise ValueError("growth is limited to t <= 64")
    return int(sum(matrix_power(occurrence_matrix(tau), t)[a]))


# ---------------------------------------------------------------------------
# spectral radius


@dataclass(frozen=True)
class SpectralRadius:
    low: float
    high: float
    iterations: int
    converged: bool

    @property
    def value(self) -> float:
        return (self.low + self.high) / 2


def spectral_radius(M: np.ndarray, tol: float = RHO_TOL,
                    max_iter: int = RHO_MAX_ITER) -> SpectralRadius:
    """Perron root of an irreducible nonnegative matrix, bracketed by Collatz-Wielandt bounds.

    Iterates on ``M + I`` (primitive whenever ``M`` is irreducible, same Perron
    vector) so periodic components converge too.
    """
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if n == 1:
        r = float(M[0, 0])
        return SpectralRadius(r, r, 0, True)
    B = M + np.identity(n)
    v = np.ones(n)
    low, high = 0.0, np.inf
    for it in range(1, max_iter + 1):
        w = B @ v
        ratios = w / v
        low, high = max(low, ratios.min()), min(high, ratios.max())
        if high - low <= tol * max(1.0, high):
            return SpectralRadius(float(low) - 1, float(high) - 1, it, True)
        v = w / w.max()
    return SpectralRadius(float(low) - 1, float(high) - 1, max_iter, False)


# ---------------------------------------------------------------------------
# components


@dataclass(frozen=True)
class Component:
    letters: tuple[int, ...]
    rho: SpectralRadius
    transient: bool
    terminal: bool = False
    maximum: bool = False
    reaches: tuple[int, ...] = ()


@dataclass(frozen=True)
class ComponentDecomposition:
    components: tuple[Component, ...]
    maxal: frozenset[int]
    rho_plus: SpectralRadius
    component_of: tuple[int, ...]

    def component(self, letter: int) -> Component:
        return self.components[self.component_of[letter]]


def components(tau: DillMap) -> ComponentDecomposition:
    """Strongly connected components of the occurrence digraph ``a -> b iff M[a, b] > 0``.

    Letters on no cycle form singleton components with ``ρ = 0``.
    """
    M = occurrence_matrix(tau)
    k = M.shape[0]
    n, labels = connected_components(M > 0, directed=True, connection="strong")
    # canonical order: by smallest letter
    order = sorted(range(n), key=lambda c: int(np.flatnonzero(labels == c)[0]))
    relabel = {old: new for new, old in enumerate(order)}
    labels = np.array([relabel[c] for c in labels])
    members = [tuple(int(a) for a in np.flatnonzero(labels == c)) for c in range(n)]

    # condensation reachability (reflexive, transitive)
    reach = np.identity(n, dtype=bool)
    for a, b in zip(*np.nonzero(M)):
        reach[labels[a], labels[b]] = True
    for m in range(n):
        reach |= reach[:, [m]] & reach[[m], :]

    rhos, transient = [], []
    for letters in members:
        sub = M[np.ix_(letters, letters)]
        is_transient = bool(len(letters) == 1 and sub[0, 0] == 0)
        transient.append(is_transient)
        rhos.append(SpectralRadius(0.0, 0.0, 0, True) if is_transient else spectral_radius(sub))

    best_low = max(r.low for r in rhos)
    maximum = [bool(not transient[c] and rhos[c].high >= best_low) for c in range(n)]
    comps = []
    for c in range(n):
        others = tuple(d for d in range(n) if d != c and reach[c, d])
        comps.append(Component(members[c], rhos[c], transient[c], terminal=not others,
                               maximum=maximum[c], reaches=others))
    maxal = frozenset(a for a in range(k)
                      if any(maximum[d] and reach[labels[a], d] for d in range(n)))
    top = max((rhos[c] for c in range(n) if maximum[c]), key=lambda r: r.high)
    return ComponentDecomposition(tuple(comps), maxal, top, tuple(int(c) for c in labels))


def letter_growth_rates(tau: DillMap) -> dict[int, float]:
    """``ρ_a``: the largest spectral radius among components reachable from ``a``."""
    dec = components(tau)
    rates = {}
    for a in range(tau.alphabet.size):
        c = dec.component_of[a]
        reachable = (c,) + dec.components[c].reaches
        rates[a] = max(dec.components[d].rho.value for d in reachable)
    return rates


# ---------------------------------------------------------------------------
# predicates


def is_primitive(M: np.ndarray) -> bool:
    """Some power ``M^n`` with ``n <= (k-1)^2 + 1`` is entrywise positive."""
    k = M.shape[0]
    B = (np.asarray(M) > 0).astype(np.int64)
    P = B.copy()
    for _ in range((k - 1) ** 2 + 1):
        if P.all():
            return True
        P = ((P @ B) > 0).astype(np.int64)
    return bool(P.all())


def toeplitz_column(tau: DillMap) -> int | None:
    """First position where all images carry the same letter (uniform substitutions)."""
    imgs = np.array([img.letters for img in tau.rule.images])
    for i in range(imgs.shape[1]):
        if (imgs[:, i] == imgs[0, i]).all():
            return i
    return None


def predicates(F: DillMap) -> dict[str, bool | None]:
    """Kind predicates; ``None`` marks a predicate that does not apply to this map."""
    out: dict[str, bool | None] = {
        "uniform": F.is_uniform,
        "ca": F.is_ca,
        "substitution": F.is_substitution,
        "irreducible": None,
        "primitive": None,
        "toeplitz": None,
    }
    if F.is_substitution:
        out["irreducible"] = len(components(F).components) == 1
        out["primitive"] = is_primitive(occurrence_matrix(F))
        if F.is_uniform:
            out["toeplitz"] = toeplitz_column(F) is not None
    return out


# ---------------------------------------------------------------------------
# Besicovitch


def image_distance_extremes(F: DillMap) -> tuple[int, int]:
    """(maxd, mind): Hamming extremes over pairs of window images (uniform maps)."""
    imgs = F.rule.images
    dists = [hamming(a, b) for a, b in itertools.combinations(imgs, 2)]
    if not dists:
        return 0, 0
    return max(dists), min(dists)


@dataclass(frozen=True)
class BesicovitchWitness:
    """Two words at Besicovitch distance 0 whose images are not."""

    x: EventuallyPeriodic
    y: EventuallyPeriodic
    image_distance: Fraction


def classify_besicovitch(F: DillMap) -> dict:
    s, lower = F.diameter, F.lower_norm
    report = {"status": None, "lipschitz": None, "regime": "Unclassified",
              "maxd": None, "mind": None}
    if F.is_uniform:
        maxd, mind = image_distance_extremes(F)
        report.update(status="WellDefinedUniform", maxd=maxd, mind=mind,
                      lipschitz=Fraction(s * maxd, lower))
        if s * maxd < lower:
            report["regime"] = "Contracting"
        elif s * mind == lower and s * maxd == lower:
            report["regime"] = "Isometry"
        elif s * maxd <= lower:
            report["regime"] = "Equicontinuous"
    elif is_constant(F):
        report.update(status="WellDefinedConstant", lipschitz=Fraction(0), regime="Contracting")
    else:
        report["status"] = "NotWellDefined"
    return report


def besicovitch_witness(F: DillMap, max_period: int = 8) -> BesicovitchWitness | None:
    """Pair ``u·w^∞``, ``v·w^∞`` (finitely many differences) whose images differ with
    positive density; ``None`` when the map is well defined."""
    from .metrics import besicovitch_exact_periodic

    pair = nonuniform_pair(F)
    if pair is None:
        return None
    u, v, k = pair
    for n in range(1, max_period + 1):
        for w in F.alphabet.words(n):
            x = EventuallyPeriodic(u, w)
            y = EventuallyPeriodic(v, w)
            d = besicovitch_exact_periodic(apply_as_spec(F, x), apply_as_spec(F, y))
            if d > 0:
                return BesicovitchWitness(x, y, d)
    if k_periodicity_violation(F, k) is None:
        return None
    raise RuntimeError("no witness found within the period bound")


# ---------------------------------------------------------------------------
# Feldman


def classify_feldman(F: DillMap) -> dict:
    report = {
        "lipschitz": Fraction((2 * F.diameter - 1) * F.upper_norm, F.lower_norm),
        "equicontinuous": None,
        "equicontinuous_letters": None,
    }
    if F.is_substitution:
        dec = components(F)
        report["equicontinuous"] = all(c.maximum for c in dec.components if c.terminal)
        report["equicontinuous_letters"] = sorted(dec.maxal)
    return report


def classify(F: DillMap) -> dict:
    """Full report with the stable JSON field layout."""
    bes = classify_besicovitch(F)
    fel = classify_feldman(F)
    report = {
        "rule": F.name,
        "besicovitch": {k: bes[k] for k in ("status", "lipschitz", "regime")},
        "feldman": {"lipschitz": fel["lipschitz"], "equicontinuous": fel["equicontinuous"]},
        "predicates": predicates(F),
        "maxd": bes["maxd"],
        "mind": bes["mind"],
        "components": [],
        "maxal": None,
    }
    if F.is_substitution:
        dec = components(F)
        report["components"] = [
            {"letters": list(c.letters), "rho_low": c.rho.low, "rho_high": c.rho.high,
             "terminal": c.terminal, "maximum": c.maximum}
            for c in dec.components
        ]
        report["maxal"] = sorted(dec.maxal)
    return report


def shift_compose_invariance(F: DillMap, m: int, samples, n_max: int = 5,
                             length: int = 64) -> bool:
    """``(σ^m∘F)^n(x)`` equals ``σ^{Σ_{j<n} m⌊f⌋^j}(F^n(x))`` on ``length`` letters,
    for every sample ``x`` and ``n <= n_max``."""
    if not F.is_uniform:
        raise ValueError("identity holds for uniform maps only")
    q, s = F.lower_norm, F.diameter
    for x in samples:
        for n in range(n_max + 1):
            needs = [length]
            for _ in range(n):
                needs.append(-(-(needs[-1] + m) // q) + s - 1)
            needs.reverse()
            w = x.prefix(needs[0])
            for need in needs[1:]:
                w = f_star(F, w)[m: m + need]
            offset = sum(m * q**j for j in range(n))
            rhs = iterate(F, x, n, length + offset)[offset:]
            if w != rhs:
                return False
    return True


def _jsonable(value):
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else float(value)
    if isinstance(value, dict):
        out = {}
        for key, item in value.items():
            out[key] = _jsonable(item)
            if isinstance(item, Fraction):
                out[f"{key}_exact"] = str(item)
        return out
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def report_json(report: dict) -> str:
    """JSON text of a ``classify`` report; every Fraction ``key`` also gets a
    ``key_exact`` string such as ``"2/3"``."""
    return json.dumps(_jsonable(report), indent=2) + "\n"
