"""The reproduction suite behind ``dillscope verify``.

Each experiment is a deterministic function returning an :class:`Outcome`:
a pass/fail verdict, a one-line detail and optional artifacts (CSV, JSON or
PPM payloads keyed by file name).  Random inputs come from fixed seeds.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable

import numpy as np

from . import analysis, metrics
from .catalog import BUILTIN_NAMES, builtin
from .diagram import ppm_bytes
from .dillmap import (DillMap, check_cocycle_identity, compose_subst_ca,
                      iterate, orbit_rows, parse_rule)
from .editdist import hamming, levenshtein, levenshtein_oracle
from .words import Alphabet, BINARY, EventuallyPeriodic, Word, periodic, shift


@dataclass
class Outcome:
    id: str
    passed: bool
    detail: str
    artifacts: dict[str, bytes | str] = field(default_factory=dict)


EXPERIMENTS: dict[str, Callable[[], Outcome]] = {}


def experiment(name: str):
    def register(fn):
        def run() -> Outcome:
            passed, detail, artifacts = fn()
            return Outcome(name, bool(passed), detail, artifacts or {})
        run.__doc__ = fn.__doc__
        EXPERIMENTS[name] = run
        return run
    return register


def random_word(rng: np.random.Generator, alphabet: Alphabet, length: int) -> Word:
    return Word(rng.integers(0, alphabet.size, length, dtype=np.uint8), alphabet)


def random_periodic(rng: np.random.Generator, alphabet: Alphabet = BINARY,
                    max_transient: int = 4, max_period: int = 6) -> EventuallyPeriodic:
    t = int(rng.integers(0, max_transient + 1))
    p = int(rng.integers(1, max_period + 1))
    return EventuallyPeriodic(random_word(rng, alphabet, t), random_word(rng, alphabet, p))


def _failures(items) -> str:
    items = list(items)
    shown = ", ".join(str(i) for i in items[:5])
    return f"{len(items)} failures: {shown}" + (" ..." if len(items) > 5 else "")


# ---------------------------------------------------------------------------
# edit distances


@experiment("edit_distance_examples")
def _edit_examples():
    """Levenshtein values of the worked examples."""
    got = (levenshtein("010101", "101010"), levenshtein("0000", "00001"))
    ok = got[0] == 1 and got[1] == Fraction(1, 2)
    return ok, f"d_L(010101,101010)={got[0]} d_L(0000,00001)={got[1]}", None


@experiment("hamming_example")
def _hamming_example():
    """Hamming value as stated for the worked example (expects 5)."""
    got = hamming("010101", "101010")
    return got == 5, f"d_H(010101,101010)={got}, stated 5", None


@experiment("levenshtein_oracle")
def _oracle():
    """Bit-parallel Levenshtein against deletion search: binary words up to length 6
    exhaustively, plus 200 random ternary pairs up to length 8."""
    words = [w for n in range(7) for w in BINARY.words(n)]
    bad = [(str(u), str(v)) for u in words for v in words
           if levenshtein(u, v) != levenshtein_oracle(u, v)]
    rng = np.random.default_rng(11)
    tern = Alphabet(3)
    for _ in range(200):
        u = random_word(rng, tern, int(rng.integers(0, 9)))
        v = random_word(rng, tern, int(rng.integers(0, 9)))
        if levenshtein(u, v) != levenshtein_oracle(u, v):
            bad.append((str(u), str(v)))
    checked = len(words) ** 2 + 200
    return not bad, f"{checked} pairs, " + (_failures(bad) if bad else "all equal"), None


@experiment("metric_properties")
def _metric_properties():
    """Symmetry, triangle inequality, Hamming additivity, Levenshtein subadditivity."""
    rng = np.random.default_rng(12)
    bad = []
    for trial in range(1000):
        n, m = int(rng.integers(0, 12)), int(rng.integers(0, 12))
        u, v, w = (random_word(rng, BINARY, n) for _ in range(3))
        u2, v2 = random_word(rng, BINARY, m), random_word(rng, BINARY, m)
        for d in (hamming, levenshtein):
            if d(u, v) != d(v, u) or d(u, w) > d(u, v) + d(v, w):
                bad.append(trial)
        if hamming(u + u2, v + v2) != hamming(u, v) + hamming(u2, v2):
            bad.append(trial)
        if levenshtein(u + u2, v + v2) > levenshtein(u, v) + levenshtein(u2, v2):
            bad.append(trial)
    return not bad, "1000 quadruples, " + (_failures(bad) if bad else "no violations"), None


# ---------------------------------------------------------------------------
# occurrence matrices


def _mat(M) -> list[list[int]]:
    return [[int(a) for a in row] for row in M]


@experiment("occurrence_matrices")
def _matrices():
    """Thue-Morse matrix, (0->1, 1->00) squared is 2I, Fibonacci matrix by definition."""
    tm = _mat(analysis.occurrence_matrix(builtin("thue_morse")))
    sq = _mat(analysis.matrix_power(analysis.occurrence_matrix(builtin("one_to_1_00")), 2))
    fib = analysis.occurrence_matrix(builtin("fibonacci"))
    ok = (tm == [[1, 1], [1, 1]] and sq == [[2, 0], [0, 2]]
          and _mat(fib) == [[1, 1], [1, 0]]
          and _mat(analysis.matrix_power(fib, 2)) == [[2, 1], [1, 1]])
    return ok, f"TM={tm} one_to_1_00^2={sq} fib={_mat(fib)}", None


@experiment("fibonacci_matrix_stated")
def _fibonacci_stated():
    """Fibonacci matrix and square as displayed: [[0,1],[1,1]] and [[1,1],[1,2]]."""
    fib = analysis.occurrence_matrix(builtin("fibonacci"))
    got, got2 = _mat(fib), _mat(analysis.matrix_power(fib, 2))
    ok = got == [[0, 1], [1, 1]] and got2 == [[1, 1], [1, 2]]
    swapped = _mat(fib[::-1, ::-1])
    return ok, f"M={got} M^2={got2}; with letters ordered (1,0): M={swapped}", None


@experiment("fibonacci_growth_rate")
def _fibonacci_rho():
    """Spectral radius of the Fibonacci substitution against the golden ratio."""
    rho = analysis.spectral_radius(analysis.occurrence_matrix(builtin("fibonacci")))
    golden = (1 + 5**0.5) / 2
    err = abs(rho.value - golden)
    return err <= 1e-6, f"rho={rho.value:.10f} bracket_width={rho.high - rho.low:.1e}", None


# ---------------------------------------------------------------------------
# classifier verdicts

BUILTIN_EXPECTATIONS: dict[str, dict[str, object]] = {
    "thue_morse": {"besicovitch.status": "WellDefinedUniform", "besicovitch.regime": "Isometry",
                   "predicates.uniform": True, "predicates.primitive": True},
    "fibonacci": {"besicovitch.status": "NotWellDefined", "feldman.lipschitz": 2,
                  "predicates.irreducible": True, "feldman.equicontinuous": True},
    "doubling": {"predicates.irreducible": False, "components.maximum": [True, True],
                 "besicovitch.regime": "Isometry"},
    "cantor": {"besicovitch.regime": "Contracting", "predicates.toeplitz": True},
    "xor": {"predicates.ca": True, "feldman.lipschitz": 3,
            "besicovitch.regime": "Unclassified"},
    "min": {"predicates.ca": True, "feldman.lipschitz": 3},
    "min_doubling": {"predicates.uniform": True, "predicates.ca": False,
                     "feldman.lipschitz": 3},
    "one_to_1_00": {"predicates.irreducible": True, "predicates.primitive": False,
                    "feldman.equicontinuous": True, "besicovitch.status": "NotWellDefined"},
    "zero_keep": {"maxal": [1], "feldman.equicontinuous": False,
                  "besicovitch.status": "NotWellDefined"},
}

BRANCH_RULES: dict[str, tuple[str, dict[str, object]]] = {
    "constant": ("alphabet=01\ndiameter=1\n0 -> 0\n1 -> 00\n",
                 {"besicovitch.status": "WellDefinedConstant",
                  "besicovitch.regime": "Contracting"}),
    "equicontinuous": ("alphabet=012\ndiameter=1\n0 -> 00\n1 -> 01\n2 -> 11\n",
                       {"besicovitch.status": "WellDefinedUniform",
                        "besicovitch.regime": "Equicontinuous"}),
}


def lookup(report: dict, path: str):
    head, _, rest = path.partition(".")
    if head == "components":
        return [c[rest] for c in report["components"]]
    value = report[head]
    return value[rest] if rest else value


def _check_report(F: DillMap, expected: dict[str, object]):
    report = analysis.classify(F)
    wrong = [f"{k}={lookup(report, k)!r}" for k, v in expected.items() if lookup(report, k) != v]
    detail = "; ".join(f"{k}={lookup(report, k)}" for k in expected)
    return not wrong, (detail if not wrong else "mismatch " + "; ".join(wrong)), report


def _classify_builtin(name: str):
    def fn():
        ok, detail, report = _check_report(builtin(name), BUILTIN_EXPECTATIONS[name])
        return ok, detail, {f"classify_{name}.json": analysis.report_json(report)}
    fn.__doc__ = f"Classifier verdicts for the built-in rule {name}."
    return fn


for _name in BUILTIN_NAMES:
    experiment(f"classify_{_name}")(_classify_builtin(_name))


def _classify_branch(label: str):
    def fn():
        text, expected = BRANCH_RULES[label]
        ok, detail, report = _check_report(parse_rule(text, f"<{label}>", label), expected)
        return ok, detail, {f"classify_{label}.json": analysis.report_json(report)}
    fn.__doc__ = f"Classifier branch {label} on an inline rule."
    return fn


for _label in BRANCH_RULES:
    experiment(f"classify_branch_{_label}")(_classify_branch(_label))


@experiment("min_doubling_composition")
def _min_doubling_composition():
    """The shipped min_doubling rule is doubling composed with Min."""
    composed = compose_subst_ca(builtin("doubling"), builtin("min"))
    ok = composed.rule == builtin("min_doubling").rule
    return ok, "table " + ("matches" if ok else "differs"), None


# ---------------------------------------------------------------------------
# Besicovitch


@experiment("fibonacci_besicovitch")
def _fibonacci_besicovitch():
    """Inputs at Besicovitch distance 0 whose Fibonacci images are at distance about 1."""
    F = builtin("fibonacci")
    x, y = periodic("", "0"), periodic("1", "0")
    d_in = metrics.besicovitch_exact_periodic(x, y)
    d_ref = metrics.besicovitch_exact_periodic(periodic("", "01"), periodic("", "10"))
    c = metrics.curve(metrics.HAMMING, F(x), F(y), metrics.geometric_lengths(6, 20))
    est = c.estimate.value
    ok = d_in == 0 and d_ref == 1 and est >= Fraction(2, 5)
    detail = f"d(x,y)={d_in} d((01),(10))={d_ref} image estimate={float(est):.6f} at l=2^20"
    return ok, detail, {"fibonacci_besicovitch.csv": c.to_csv()}


@experiment("besicovitch_witnesses")
def _witnesses():
    """Non-uniform, non-constant built-ins get a witness pair; the others get none."""
    lines, ok = [], True
    for name in BUILTIN_NAMES:
        F = builtin(name)
        w = analysis.besicovitch_witness(F)
        expect = analysis.classify_besicovitch(F)["status"] == "NotWellDefined"
        ok &= (w is not None) == expect
        if w is not None:
            ok &= metrics.besicovitch_exact_periodic(w.x, w.y) == 0 and w.image_distance > 0
            lines.append(f"{name}: {w.x} vs {w.y} -> {w.image_distance}")
    return ok, f"{len(lines)} witnesses", {"besicovitch_witnesses.txt": "\n".join(lines) + "\n"}


@experiment("thue_morse_isometry")
def _thue_morse_isometry():
    """Thue-Morse preserves exact Besicovitch distances of periodic pairs."""
    F = builtin("thue_morse")
    rng = np.random.default_rng(7)
    bad = []
    for i in range(20):
        x, y = random_periodic(rng), random_periodic(rng)
        before = metrics.besicovitch_exact_periodic(x, y)
        after = metrics.besicovitch_exact_periodic(F(x), F(y))
        if abs(after - before) > Fraction(1, 2**10):
            bad.append(i)
    return not bad, "20 pairs, " + (_failures(bad) if bad else "distances preserved"), None


@experiment("uniform_lipschitz")
def _uniform_lipschitz():
    """Uniform built-ins never stretch exact Besicovitch distances beyond their coefficient;
    the contracting Cantor rule shrinks them by 2/3."""
    rng = np.random.default_rng(8)
    bad, checked = [], 0
    for name in BUILTIN_NAMES:
        F = builtin(name)
        if not F.is_uniform:
            continue
        lip = analysis.classify_besicovitch(F)["lipschitz"]
        for i in range(10):
            x, y = random_periodic(rng), random_periodic(rng)
            checked += 1
            if metrics.besicovitch_exact_periodic(F(x), F(y)) > lip * metrics.besicovitch_exact_periodic(x, y):
                bad.append(f"{name}#{i}")
    return not bad, f"{checked} pairs, " + (_failures(bad) if bad else "bounds hold"), None


# ---------------------------------------------------------------------------
# Feldman


@experiment("shift_identity_feldman")
def _shift_identity():
    """A word and its shift are at normalized Levenshtein distance at most 1/l."""
    rng = np.random.default_rng(9)
    lengths = metrics.geometric_lengths(4, 14)
    bad, artifacts = [], {}
    for i in range(10):
        x = random_periodic(rng, max_period=12)
        c = metrics.curve(metrics.LEVENSHTEIN, x, shift(x, 1), lengths)
        if any(s.normalized > Fraction(1, s.length) for s in c.samples):
            bad.append(i)
        if i == 0:
            artifacts["shift_identity_feldman.csv"] = c.to_csv()
    return not bad, "10 words, " + (_failures(bad) if bad else "curve <= 1/l"), artifacts


@experiment("feldman_lipschitz")
def _feldman_lipschitz():
    """Substitution images satisfy the Feldman Lipschitz bound, measured on curves."""
    rng = np.random.default_rng(10)
    lengths = metrics.geometric_lengths(6, 12)
    bad, checked = [], 0
    for name in BUILTIN_NAMES:
        tau = builtin(name)
        if not tau.is_substitution:
            continue
        ratio = Fraction(tau.upper_norm, tau.lower_norm)
        for i in range(5):
            x, y = random_periodic(rng), random_periodic(rng)
            bound = metrics.feldman_periodic_bounds(x, y).upper
            est = metrics.curve(metrics.LEVENSHTEIN, tau(x), tau(y), lengths).estimate.value
            checked += 1
            if est > ratio * bound + Fraction(1, 64):
                bad.append(f"{name}#{i}")
    return not bad, f"{checked} pairs, " + (_failures(bad) if bad else "bounds hold"), None


@experiment("fekete_bounds")
def _fekete():
    """Certified Feldman upper bounds for (01)^inf against (10)^inf decrease to 1/128."""
    b = metrics.feldman_periodic_bounds(periodic("", "01"), periodic("", "10"))
    ok = b.uppers[-1] == Fraction(1, 128) and list(b.uppers) == sorted(b.uppers, reverse=True)
    rows = "".join(f"{n},{u}\n" for n, u in zip(b.block_counts, b.uppers))
    return ok, f"upper={b.upper} block={b.block_length}", {"fekete_bounds.csv": "blocks,upper\n" + rows}


@experiment("weyl_dominates")
def _weyl_dominates():
    """Sliding-window curves dominate the plain prefix curves."""
    rng = np.random.default_rng(13)
    lengths = [8, 16, 32, 64]
    bad = []
    for i in range(10):
        x, y = random_periodic(rng), random_periodic(rng)
        for kind in metrics.KINDS:
            plain = metrics.curve(kind, x, y, lengths).normalized
            slide = metrics.weyl_curve(kind, x, y, lengths).normalized
            if any(a > b for a, b in zip(plain, slide)):
                bad.append(f"{kind}#{i}")
    return not bad, "10 pairs, " + (_failures(bad) if bad else "sliding >= plain"), None


# ---------------------------------------------------------------------------
# instabilities


def _constant_prefix(w: Word, letter: int) -> bool:
    return bool((w.letters == letter).all())


@experiment("min_doubling_instability")
def _min_doubling_instability():
    """Composed Min dill map sends (1^{p-1}0)^inf to 0^inf after p-1 steps, p = 2..32."""
    F = builtin("min_doubling")
    bad = [p for p in range(2, 33)
           if not _constant_prefix(iterate(F, periodic("", "1" * (p - 1) + "0"), p - 1, 1024), 0)]
    return not bad, "p=2..32, " + (f"not all zero for p in {bad[:3]}..{bad[-1]}" if bad else "all zero"), None


@experiment("min_instability")
def _min_instability():
    """The Min CA sends (1^{p-1}0)^inf to 0^inf after p-1 steps, p = 2..32."""
    F = builtin("min")
    bad = [p for p in range(2, 33)
           if not _constant_prefix(iterate(F, periodic("", "1" * (p - 1) + "0"), p - 1, 1024), 0)]
    return not bad, "p=2..32, " + (_failures(bad) if bad else "all zero"), None


@experiment("xor_instability")
def _xor_instability():
    """XOr sends (0^{2^k-1}1)^inf to 1^inf after 2^k-1 steps, k = 1..6; the literal
    reading with exponent 2k-1 is recorded only."""
    F = builtin("xor")
    bad = [k for k in range(1, 7)
           if not _constant_prefix(iterate(F, periodic("", "0" * (2**k - 1) + "1"), 2**k - 1, 1024), 1)]
    literal = [k for k in range(1, 7)
               if _constant_prefix(iterate(F, periodic("", "0" * (2 * k - 1) + "1"), 2**k - 1, 1024), 1)]
    detail = ("k=1..6 " + (_failures(bad) if bad else "all ones")
              + f"; literal 2k-1 reading all ones for k in {literal}")
    return not bad, detail, None


# ---------------------------------------------------------------------------
# structure of dill maps


@experiment("cocycle_identity")
def _cocycle():
    """F(shift^n x) = shift^theta F(x) on 256 letters for 200 random triples."""
    rng = np.random.default_rng(14)
    rules = [builtin(n) for n in BUILTIN_NAMES]
    bad = []
    for i in range(200):
        F = rules[int(rng.integers(len(rules)))]
        x = random_periodic(rng, max_transient=8, max_period=9)
        n = int(rng.integers(0, 17))
        if not check_cocycle_identity(F, x, n, 256):
            bad.append(f"{F.name}#{i}")
    return not bad, "200 triples, " + (_failures(bad) if bad else "identity holds"), None


@experiment("shift_compose_invariance")
def _shift_compose():
    """Iterating shift-composed uniform maps matches shifted iterates."""
    rng = np.random.default_rng(15)
    samples = [random_periodic(rng) for _ in range(5)]
    cases = [("thue_morse", 1), ("xor", 2), ("cantor", 1)]
    bad = [f"{n},m={m}" for n, m in cases
           if not analysis.shift_compose_invariance(builtin(n), m, samples)]
    return not bad, f"{len(cases)} cases, " + (_failures(bad) if bad else "identity holds"), None


# ---------------------------------------------------------------------------
# space-time diagrams


@experiment("xor_sierpinski")
def _xor_sierpinski():
    """XOr rows are binomial parities: a single 1 at the right edge draws Pascal mod 2."""
    F, width, steps = builtin("xor"), 64, 64
    x = periodic("0" * (width - 1) + "1", "0")
    rows = orbit_rows(F, x, steps, width)
    expect = np.array([[comb(t, width - 1 - i) % 2 for i in range(width)] for t in range(steps)],
                      dtype=np.uint8)
    ok = np.array_equal(rows, expect)
    return ok, f"{steps}x{width} diagram", {"xor_sierpinski.ppm": ppm_bytes(rows)}


@experiment("zero_keep_diagrams")
def _zero_keep():
    """0->0, 1->11 fixes 1^inf while (10)^inf becomes (1^{2^t}0)^inf."""
    F, width, steps = builtin("zero_keep"), 96, 6
    ones = orbit_rows(F, periodic("", "1"), steps, width)
    alt = orbit_rows(F, periodic("", "10"), steps, width)
    expect = np.array([periodic("", "1" * 2**t + "0").prefix(width).letters for t in range(steps)])
    ok = bool((ones == 1).all()) and np.array_equal(alt, expect)
    return ok, f"{steps}x{width} diagrams", {"zero_keep_ones.ppm": ppm_bytes(ones),
                                            "zero_keep_alternating.ppm": ppm_bytes(alt)}


@experiment("identity_ca_columns")
def _identity_ca():
    """The CA f(ab) = a leaves every column constant."""
    F = parse_rule("alphabet=01\ndiameter=2\n00 -> 0\n01 -> 0\n10 -> 1\n11 -> 1\n", "<left>", "left")
    x = random_periodic(np.random.default_rng(16), max_transient=16, max_period=16)
    rows = orbit_rows(F, x, 16, 48)
    ok = bool((rows == rows[0]).all())
    return ok, "16x48 diagram", None


# ---------------------------------------------------------------------------
# running


def run(ids: list[str] | None = None) -> list[Outcome]:
    ids = list(EXPERIMENTS) if ids is None else ids
    unknown = [i for i in ids if i not in EXPERIMENTS]
    if unknown:
        raise KeyError(f"unknown experiment {unknown[0]!r}")
    return [EXPERIMENTS[i]() for i in ids]


def summary(outcomes: list[Outcome]) -> dict:
    return {
        "passed": sum(o.passed for o in outcomes),
        "failed": sum(not o.passed for o in outcomes),
        "experiments": [{"id": o.id, "status": "PASS" if o.passed else "FAIL",
                         "detail": o.detail, "artifacts": sorted(o.artifacts)}
                        for o in outcomes],
    }


def summary_json(outcomes: list[Outcome]) -> str:
    return json.dumps(summary(outcomes), indent=2) + "\n"


def table(outcomes: list[Outcome]) -> str:
    width = max(len(o.id) for o in outcomes)
    lines = [f"{'PASS' if o.passed else 'FAIL'}  {o.id:<{width}}  {o.detail}" for o in outcomes]
    lines.append(f"{sum(o.passed for o in outcomes)}/{len(outcomes)} passed")
    return "\n".join(lines) + "\n"
