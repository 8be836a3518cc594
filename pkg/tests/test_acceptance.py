"""Acceptance gate: every criterion at its stated size and tolerance.

A one-line PASS/FAIL summary per criterion is printed at the end of the run.
"""
import itertools
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from dillscope import analysis, metrics
from dillscope.catalog import BUILTIN_NAMES, all_builtins
from dillscope.dillmap import check_cocycle_identity, iterate
from dillscope.editdist import hamming, levenshtein, levenshtein_oracle
from dillscope.reproduce import BUILTIN_EXPECTATIONS, lookup, random_periodic, random_word
from dillscope.words import Alphabet, BINARY, periodic, shift

RULES = all_builtins()


@pytest.fixture
def record(record_property):
    def put(number, text):
        record_property("acceptance", (number, text))
    return put


def test_criterion_01_edit_distance_examples(record):
    dh = hamming("010101", "101010")
    dl = levenshtein("010101", "101010")
    dl2 = levenshtein("0000", "00001")
    record(1, f"edit-distance examples: d_H={dh} (expected 5), d_L={dl} (expected 1), "
              f"d_L(0000,00001)={dl2} (expected 1/2)")
    assert dl == 1 and dl2 == Fraction(1, 2)
    assert dh == 5


def test_criterion_02_oracle_equivalence(record):
    words = [w for n in range(9) for w in BINARY.words(n)]
    bad = sum(levenshtein(u, v) != levenshtein_oracle(u, v) for u, v in itertools.product(words, repeat=2))
    rng = np.random.default_rng(202)
    tern = Alphabet(3)
    for _ in range(1000):
        u = random_word(rng, tern, int(rng.integers(0, 11)))
        v = random_word(rng, tern, int(rng.integers(0, 11)))
        bad += levenshtein(u, v) != levenshtein_oracle(u, v)
    record(2, f"oracle equivalence: {len(words) ** 2} binary + 1000 ternary pairs, {bad} mismatches")
    assert bad == 0


def test_criterion_03_metric_properties(record):
    rng = np.random.default_rng(303)
    violations = 0
    for _ in range(10_000):
        n = int(rng.integers(0, 16))
        a, b, c, d = (random_word(rng, BINARY, n) for _ in range(4))
        for dist in (hamming, levenshtein):
            violations += dist(a, b) != dist(b, a)
            violations += dist(a, c) > dist(a, b) + dist(b, c)
        violations += hamming(a + b, c + d) != hamming(a, c) + hamming(b, d)
        violations += levenshtein(a + b, c + d) > levenshtein(a, c) + levenshtein(b, d)
        # unequal lengths for the Levenshtein-only properties
        e, f = (random_word(rng, BINARY, int(rng.integers(0, 16))) for _ in range(2))
        violations += levenshtein(a + e, c + f) > levenshtein(a, c) + levenshtein(e, f)
        violations += levenshtein(a, e) > levenshtein(a, f) + levenshtein(f, e)
    record(3, f"metric properties: 10^4 quadruples, {violations} violations")
    assert violations == 0


def test_criterion_04_matrices(record):
    tm = analysis.occurrence_matrix(RULES["thue_morse"]).tolist()
    fib = analysis.occurrence_matrix(RULES["fibonacci"])
    fib2 = analysis.matrix_power(fib, 2).tolist()
    sq = analysis.matrix_power(analysis.occurrence_matrix(RULES["one_to_1_00"]), 2).tolist()
    rho = analysis.spectral_radius(fib).value
    root = (1 + 5**0.5) / 2
    record(4, f"matrices: TM={tm} fib={fib.tolist()} (expected [[0,1],[1,1]]) fib^2={fib2} "
              f"(expected [[1,1],[1,2]]) one_to_1_00^2={sq} rho={rho:.9f}")
    assert tm == [[1, 1], [1, 1]] and sq == [[2, 0], [0, 2]]
    assert abs(rho - root) <= 1e-6
    assert fib.tolist() == [[0, 1], [1, 1]] and fib2 == [[1, 1], [1, 2]]


def test_criterion_05_classifier_verdicts(record):
    wrong = []
    for name in BUILTIN_NAMES:
        report = analysis.classify(RULES[name])
        wrong += [f"{name}:{k}" for k, v in BUILTIN_EXPECTATIONS[name].items() if lookup(report, k) != v]
    record(5, f"classifier verdicts on {len(BUILTIN_NAMES)} built-ins, mismatches: {wrong or 'none'}")
    assert not wrong


def test_criterion_06_besicovitch_witness(record):
    F = RULES["fibonacci"]
    x, y = periodic("", "0"), periodic("1", "0")
    d_in = metrics.besicovitch_exact_periodic(x, y)
    d_ref = metrics.besicovitch_exact_periodic(periodic("", "01"), periodic("", "10"))
    est = metrics.curve(metrics.HAMMING, F(x), F(y), [2**20]).estimate.value
    record(6, f"Besicovitch witness: d(x,y)={d_in} d((01),(10))={d_ref} image estimate={float(est):.6f}")
    assert d_in == 0 and d_ref == 1 and est >= Fraction(2, 5)


def test_criterion_07_thue_morse_isometry(record):
    F = RULES["thue_morse"]
    rng = np.random.default_rng(707)
    worst = Fraction(0)
    for _ in range(20):
        x, y = random_periodic(rng), random_periodic(rng)
        gap = abs(metrics.besicovitch_exact_periodic(F(x), F(y)) - metrics.besicovitch_exact_periodic(x, y))
        worst = max(worst, gap)
    record(7, f"Thue-Morse isometry: 20 pairs, worst gap {worst}")
    assert worst <= Fraction(1, 2**10)


def test_criterion_08_feldman_shift_identity(record):
    rng = np.random.default_rng(808)
    lengths = metrics.geometric_lengths(0, 16)
    bad = 0
    for _ in range(10):
        x = random_periodic(rng, max_transient=8, max_period=16)
        c = metrics.curve(metrics.LEVENSHTEIN, x, shift(x, 1), lengths)
        bad += sum(s.normalized > Fraction(1, s.length) for s in c.samples)
    record(8, f"Feldman shift identity: 10 words x {len(lengths)} lengths, {bad} samples above 1/l")
    assert bad == 0


def test_criterion_09_instabilities(record):
    min_doubling = RULES["min_doubling"]
    bad_min = [p for p in range(2, 33)
               if set(iterate(min_doubling, periodic("", "1" * (p - 1) + "0"), p - 1, 1024)) != {0}]
    bad_xor = [k for k in range(1, 7)
               if set(iterate(RULES["xor"], periodic("", "0" * (2**k - 1) + "1"), 2**k - 1, 1024)) != {1}]
    record(9, f"instabilities: composed Min fails for p in {bad_min or 'none'}; "
              f"XOr fails for k in {bad_xor or 'none'}")
    assert not bad_xor
    assert not bad_min


def test_criterion_10_cocycle_identity(record):
    rng = np.random.default_rng(1010)
    names = list(BUILTIN_NAMES)
    bad = 0
    for _ in range(200):
        F = RULES[names[int(rng.integers(len(names)))]]
        x = random_periodic(rng, max_transient=10, max_period=12)
        bad += not check_cocycle_identity(F, x, int(rng.integers(0, 17)), 256)
    record(10, f"cocycle identity: 200 triples, {bad} failures")
    assert bad == 0


def test_criterion_11_feldman_lipschitz(record):
    rng = np.random.default_rng(1111)
    lengths = metrics.geometric_lengths(6, 14)
    worst, checked = None, 0
    for name in BUILTIN_NAMES:
        tau = RULES[name]
        if not tau.is_substitution:
            continue
        ratio = Fraction(tau.upper_norm, tau.lower_norm)
        for _ in range(20):
            x, y = random_periodic(rng), random_periodic(rng)
            bound = ratio * metrics.feldman_periodic_bounds(x, y).upper
            est = metrics.curve(metrics.LEVENSHTEIN, tau(x), tau(y), lengths).estimate.value
            slack = est - bound
            worst = slack if worst is None else max(worst, slack)
            checked += 1
    record(11, f"Feldman Lipschitz bound: {checked} pairs, worst excess {float(worst):.6f} (allowed 1/64)")
    assert worst <= Fraction(1, 64)


def test_criterion_12_determinism(record, tmp_path):
    dirs = [tmp_path / "a", tmp_path / "b"]
    for d in dirs:
        subprocess.run([sys.executable, "-m", "dillscope.cli", "verify", "all", "--out", str(d)],
                       capture_output=True, check=False)
    files = [sorted(p.name for p in d.iterdir()) for d in dirs]
    same = files[0] == files[1] and all(
        (dirs[0] / f).read_bytes() == (dirs[1] / f).read_bytes() for f in files[0])
    record(12, f"determinism: {len(files[0])} artifacts, byte-identical={same}")
    assert files[0] and same
