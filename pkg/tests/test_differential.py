"""Exterior derivative: nilpotency, Leibniz, operator identities, curl."""

import random

import pytest

from hsuperplane.algebra import AlgebraError, Element, gen, word
from hsuperplane.differential import (
    UnsupportedGeneratorError,
    check_d_squared,
    check_leibniz,
    check_operator_relations,
    curl,
    d_operator,
    dsquared_report,
    exterior_d,
    monomial_basis,
    operator_report,
    random_form,
)
from hsuperplane.presentations import get_presentation
from hsuperplane.scalar import ONE, Q, sc


HC = get_presentation("h-calculus")
QH = get_presentation("qh-calculus")


# -- the derivation --------------------------------------------------------------


def test_d_on_generators():
    assert exterior_d(gen("x"), HC) == gen("dx")
    assert exterior_d(gen("th"), HC) == gen("dth")
    assert exterior_d(gen("dx"), HC).is_zero()
    assert exterior_d(gen("dth"), HC).is_zero()
    assert exterior_d(gen("h"), HC).is_zero()
    assert exterior_d(Element.scalar(7), HC).is_zero()


def test_d_of_a_two_letter_word():
    result = exterior_d(word("x", "th"), HC)
    assert result == word("dth", "x") + word("dx", "th") - word("h", "dx", "x")


def test_d_of_a_two_letter_word_at_q_level():
    result = exterior_d(word("x", "th"), QH)
    expected = (
        Q * word("dth", "x")
        + (Q * Q) * word("dx", "th")
        - word("h", "dx", "x")
    )
    assert result == QH.normal_form(expected)


def test_d_kills_the_plane_relation():
    relation = word("x", "th") - word("th", "x") - word("h", "x", "x")
    assert exterior_d(relation, HC).is_zero()


def test_d_rejects_derivatives():
    with pytest.raises(UnsupportedGeneratorError):
        exterior_d(word("x", "px"), HC)


def test_d_is_linear():
    f = word("x", "x")
    g = word("th", "x")
    combined = exterior_d(f + g.scale(sc(3)), HC)
    assert combined == HC.normal_form(
        exterior_d(f, HC) + exterior_d(g, HC).scale(sc(3))
    )


def test_d_of_differential_words():
    # d(dx*x) = -dx*dx = 0; d(dth*th) = dth*dth survives
    assert exterior_d(word("dx", "x"), HC).is_zero()
    assert exterior_d(word("dth", "th"), HC) == word("dth", "dth")


# -- nilpotency and Leibniz ------------------------------------------------------


def test_monomial_basis_counts():
    assert len(monomial_basis(HC, 4)) == 66
    assert len(monomial_basis(HC, 5)) == 102
    assert Element.scalar(1) in monomial_basis(HC, 1)


def test_d_squared_on_basis_both_levels():
    for p in (HC, QH):
        report = check_d_squared(monomial_basis(p, 5), p)
        assert report.passed
        assert len(report.entries) == 102


def test_d_squared_on_random_polynomials():
    rng = random.Random(17)
    for p in (HC, QH):
        samples = [random_form(rng, p, 5) for _ in range(25)]
        assert check_d_squared(samples, p).passed


def test_leibniz_exact_pair():
    report = check_leibniz([(gen("x"), gen("x"))], HC)
    assert report.passed
    assert exterior_d(word("x", "x"), HC) == word("dx", "x").scale(sc(2))


def test_leibniz_on_random_pairs():
    rng = random.Random(23)
    for p in (HC, QH):
        pairs = []
        while len(pairs) < 20:
            f = random_form(rng, p, 4, parity=rng.choice((0, 1)))
            if f.is_zero():
                continue
            pairs.append((f, random_form(rng, p, 4)))
        assert check_leibniz(pairs, p).passed


def test_leibniz_rejects_mixed_parity_left_factor():
    with pytest.raises(AlgebraError):
        check_leibniz([(gen("x") + gen("th"), gen("x"))], HC)


# -- operator realization --------------------------------------------------------


def test_operator_realization_matches_derivation():
    d = d_operator()
    assert d == word("dx", "px") + word("dth", "pth")
    rng = random.Random(31)
    for p in (HC, QH):
        for _ in range(20):
            f = random_form(rng, p, 4)
            assert p.act(d, f) == exterior_d(f, p)


def test_operator_relations_report():
    report = check_operator_relations(HC)
    assert report.passed
    assert len(report.entries) == 8
    labels = [entry.label for entry in report.entries]
    assert "d*x - x*d acts as dx" in labels
    assert "d anticommutes with pth" in labels
    assert all(entry.data["monomials"] == 66 for entry in report.entries)


def test_operator_report_wrapper():
    report = operator_report()
    assert report.passed
    assert report.presentation == "h-calculus"


# -- curl ------------------------------------------------------------------------


def test_curl_of_the_basic_one_form():
    assert curl(gen("th"), gen("x"), QH) == Element.scalar(Q - ONE)


def test_curl_vanishing_cases():
    zero = Element.zero()
    assert curl(zero, zero, QH).is_zero()
    assert curl(gen("x"), zero, QH).is_zero()
    # at the h-level the exchange coefficient is 1 and the curl cancels
    assert curl(gen("th"), gen("x"), HC).is_zero()


def test_curl_verifies_on_random_forms():
    rng = random.Random(41)
    for p in (HC, QH):
        for _ in range(15):
            w1 = random_form(rng, p, 3, letters=("h", "th", "x"))
            w2 = random_form(rng, p, 3, letters=("h", "th", "x"))
            value = curl(w1, w2, p)
            assert p.is_normal(value)


def test_curl_rejects_non_coordinate_input():
    with pytest.raises(UnsupportedGeneratorError):
        curl(gen("dx"), Element.zero(), QH)
    with pytest.raises(UnsupportedGeneratorError):
        curl(Element.zero(), gen("px"), QH)


# -- aggregate report ------------------------------------------------------------


def test_dsquared_report():
    report = dsquared_report()
    assert report.passed
    assert len(report.entries) == 4
    assert report.entries[0].data["samples"] == 202
