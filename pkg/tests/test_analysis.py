import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dillscope import analysis
from dillscope.catalog import BUILTIN_NAMES, all_builtins
from dillscope.dillmap import parse_rule
from dillscope.metrics import besicovitch_exact_periodic
from dillscope.words import periodic

RULES = all_builtins()
GOLDEN = (1 + 5**0.5) / 2


def test_occurrence_matrices():
    assert analysis.occurrence_matrix(RULES["thue_morse"]).tolist() == [[1, 1], [1, 1]]
    fib = analysis.occurrence_matrix(RULES["fibonacci"])
    assert fib.tolist() == [[1, 1], [1, 0]]
    assert analysis.matrix_power(fib, 2).tolist() == [[2, 1], [1, 1]]
    # listing the letters as (1, 0) gives the other common display
    assert fib[::-1, ::-1].tolist() == [[0, 1], [1, 1]]
    M = analysis.occurrence_matrix(RULES["one_to_1_00"])
    assert analysis.matrix_power(M, 2).tolist() == [[2, 0], [0, 2]]


def test_occurrence_matrix_needs_substitution():
    with pytest.raises(TypeError):
        analysis.occurrence_matrix(RULES["xor"])


def test_growth_is_fibonacci():
    assert [analysis.growth(RULES["fibonacci"], 0, t) for t in range(8)] == [1, 2, 3, 5, 8, 13, 21, 34]
    assert analysis.growth(RULES["thue_morse"], 1, 64) == 2**64
    with pytest.raises(ValueError):
        analysis.growth(RULES["thue_morse"], 0, 65)


def test_spectral_radius():
    rho = analysis.spectral_radius(analysis.occurrence_matrix(RULES["fibonacci"]))
    assert rho.converged and rho.low <= GOLDEN + 1e-12 and rho.high >= GOLDEN - 1e-12
    assert abs(rho.value - GOLDEN) < 1e-9
    # periodic irreducible matrix: plain power iteration would oscillate
    assert abs(analysis.spectral_radius(np.array([[0, 1], [2, 0]])).value - 2**0.5) < 1e-9


@settings(max_examples=50)
@given(st.integers(2, 5).flatmap(lambda k: st.lists(st.integers(1, 4), min_size=k * k, max_size=k * k)))
def test_spectral_radius_matches_eigvals(entries):
    k = int(len(entries) ** 0.5)
    M = np.array(entries).reshape(k, k)
    rho = analysis.spectral_radius(M)
    assert abs(rho.value - max(abs(np.linalg.eigvals(M)))) < 1e-8


def test_components_doubling():
    dec = analysis.components(RULES["doubling"])
    assert [c.letters for c in dec.components] == [(0,), (1,)]
    assert all(c.maximum and c.terminal for c in dec.components)
    assert dec.maxal == {0, 1}


def test_components_zero_keep():
    dec = analysis.components(RULES["zero_keep"])
    assert dec.component(1).maximum and not dec.component(0).maximum
    assert dec.component(0).terminal
    assert dec.maxal == {1}


def test_transient_letter():
    tau = parse_rule("alphabet=012\ndiameter=1\n0 -> 11\n1 -> 1\n2 -> 22\n")
    dec = analysis.components(tau)
    assert dec.component(0).transient and not dec.component(0).maximum
    assert dec.maxal == {2}


def test_letter_growth_rates():
    rates = analysis.letter_growth_rates(RULES["cantor"])
    assert rates == {0: pytest.approx(3.0), 1: pytest.approx(3.0)}


def test_predicates():
    p = analysis.predicates(RULES["thue_morse"])
    assert p["uniform"] and p["primitive"] and p["irreducible"] and not p["toeplitz"]
    assert analysis.predicates(RULES["cantor"])["toeplitz"]
    p = analysis.predicates(RULES["one_to_1_00"])
    assert p["irreducible"] and not p["primitive"] and p["toeplitz"] is None
    p = analysis.predicates(RULES["xor"])
    assert p["ca"] and p["irreducible"] is None


def test_besicovitch_regimes():
    cb = analysis.classify_besicovitch
    assert cb(RULES["thue_morse"])["regime"] == "Isometry"
    assert cb(RULES["cantor"])["lipschitz"] == Fraction(2, 3)
    assert cb(RULES["cantor"])["regime"] == "Contracting"
    assert cb(RULES["xor"])["regime"] == "Unclassified"
    assert cb(RULES["fibonacci"])["status"] == "NotWellDefined"
    tern = parse_rule("alphabet=012\ndiameter=1\n0 -> 00\n1 -> 01\n2 -> 11\n")
    assert cb(tern)["regime"] == "Equicontinuous"
    const = parse_rule("alphabet=01\ndiameter=1\n0 -> 0\n1 -> 00\n")
    assert cb(const)["status"] == "WellDefinedConstant"


def test_witness_fibonacci():
    w = analysis.besicovitch_witness(RULES["fibonacci"])
    assert (w.x, w.y) == (periodic("0", "0"), periodic("1", "0"))
    assert besicovitch_exact_periodic(w.x, w.y) == 0 and w.image_distance == 1
    assert analysis.besicovitch_witness(RULES["thue_morse"]) is None


def test_feldman():
    cf = analysis.classify_feldman
    assert cf(RULES["fibonacci"])["lipschitz"] == 2
    assert cf(RULES["xor"])["lipschitz"] == 3
    assert cf(RULES["zero_keep"])["equicontinuous"] is False
    assert cf(RULES["one_to_1_00"])["equicontinuous"] is True
    assert cf(RULES["xor"])["equicontinuous"] is None


def test_primitive_substitutions_are_equicontinuous():
    for name in BUILTIN_NAMES:
        F = RULES[name]
        if F.is_substitution and analysis.predicates(F)["irreducible"]:
            assert analysis.classify_feldman(F)["equicontinuous"]


def test_report_json_layout():
    text = analysis.report_json(analysis.classify(RULES["cantor"]))
    report = json.loads(text)
    assert list(report) == ["rule", "besicovitch", "feldman", "predicates", "maxd", "mind",
                            "components", "maxal"]
    assert report["besicovitch"]["lipschitz_exact"] == "2/3"
    assert report["feldman"]["lipschitz"] == 1


def test_shift_compose_invariance():
    samples = [periodic("1", "011"), periodic("", "0")]
    assert analysis.shift_compose_invariance(RULES["thue_morse"], 1, samples)
    assert analysis.shift_compose_invariance(RULES["xor"], 2, samples)
    with pytest.raises(ValueError):
        analysis.shift_compose_invariance(RULES["fibonacci"], 1, samples)
