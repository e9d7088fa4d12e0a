"""Acceptance gate: the eleven exact verification criteria.

Every criterion is an exact symbolic identity with zero tolerance; each
test prints a single pass/fail line and must finish well inside 60
seconds.  Run with ``pytest -s tests/test_acceptance.py`` to see the
summary lines.
"""

import random

from hsuperplane.algebra import Element, gen, word
from hsuperplane.differential import (
    check_d_squared,
    check_leibniz,
    check_operator_relations,
    monomial_basis,
    random_form,
)
from hsuperplane.presentations import (
    apply_star,
    build_star,
    coaction_check,
    consistency_equations,
    contract,
    build_heisenberg,
    get_presentation,
    involution_check,
    limit_presentation,
    oscillator_check,
    solve_consistency,
)
from hsuperplane.rmatrix import (
    SuperTensor,
    build_K_h,
    build_K_hq,
    build_Khat_h,
    build_R_h,
    coordinate_differential_rules,
    h_line,
    inverse_check,
    regenerate_calculus,
    rtt_report,
    ybe_check,
)
from hsuperplane.scalar import ONE, Q, ZERO


def _verdict(number: int, summary: str, passed: bool) -> bool:
    flag = "PASS" if passed else "FAIL"
    print(f"criterion {number:2d} [{flag}] {summary}")
    return passed


def test_criterion_01_consistency_solution():
    solution = solve_consistency()
    exact = (
        solution.F11 == Q
        and solution.F12 == Q * Q - ONE
        and solution.F21 == -Q
        and solution.F22 == ZERO
        and solution.B == ONE
        and solution.A_free
    )
    residuals = consistency_equations(solution)
    back = all(residual.is_zero() for _, residual in residuals)
    ok = exact and back and len(residuals) == 8
    assert _verdict(1, "mixed-sector coefficients solve and back-substitute", ok)


def test_criterion_02_contraction_round_trip():
    contracted = contract(get_presentation("qh-calculus"))
    catalogue = get_presentation("h-calculus")
    ok = (
        contracted.generators_equal(catalogue)
        and contracted.rules_equal(catalogue)
        and len(contracted.rule_list()) == 19
    )
    assert _verdict(2, "q-level calculus contracts rule-for-rule to the h level", ok)


def test_criterion_03_confluence():
    ok = True
    for name in ("h-calculus", "qh-calculus", "gl-h11", "h-heisenberg", "q-oscillator"):
        outcome = get_presentation(name).check_confluence()
        ok = ok and outcome.passed and outcome.failures == [] and outcome.words_checked > 0
    assert _verdict(3, "all critical pairs resolve in the five presentations", ok)


def test_criterion_04_yang_baxter():
    r = build_R_h()
    ok = (
        ybe_check(build_Khat_h(), "hat", graded=True)
        and ybe_check(r, "plain", graded=True)
        and ybe_check(r, "plain", graded=False)
        and inverse_check()
        and build_K_h() * r == SuperTensor.identity(h_line(), 4)
    )
    assert _verdict(4, "graded/ungraded Yang-Baxter and inverse identities", ok)


def test_criterion_05_rtt_expansion():
    report = rtt_report()
    reductions = [e for e in report.entries if e.label.startswith("entry")]
    recoveries = [e for e in report.entries if e.label.startswith("relation")]
    ok = (
        report.passed
        and len(reductions) == 16
        and all(e.passed for e in reductions)
        and len(recoveries) == 8
        and all(e.passed for e in recoveries)
    )
    assert _verdict(5, "reflection relation expands onto the supergroup relations", ok)


def test_criterion_06_regeneration():
    catalogue = get_presentation("h-calculus")
    regenerated = regenerate_calculus(build_K_h())
    rules = catalogue.rules
    ok = all(rules[lhs] == rhs for lhs, rhs in regenerated.rules.items())
    ok = ok and set(rules) - set(regenerated.rules) == {
        ("dx", "dx"),
        ("dx", "dth"),
        ("h", "h"),
    }
    qh = get_presentation("qh-calculus")
    q_rules = coordinate_differential_rules(build_K_hq(), factor=Q)
    ok = ok and len(q_rules) == 4
    ok = ok and all(qh.rules[lhs] == rhs for lhs, rhs in q_rules.items())
    assert _verdict(6, "K-matrix regenerates the calculus at both levels", ok)


def test_criterion_07_differential():
    rng = random.Random(7)
    ok = True
    for name in ("qh-calculus", "h-calculus"):
        p = get_presentation(name)
        samples = monomial_basis(p, 5) + [random_form(rng, p, 5) for _ in range(100)]
        ok = ok and check_d_squared(samples, p).passed
        pairs = []
        while len(pairs) < 100:
            f = random_form(rng, p, 4, parity=rng.choice((0, 1)))
            if not f.is_zero():
                pairs.append((f, random_form(rng, p, 4)))
        ok = ok and check_leibniz(pairs, p).passed
    operators = check_operator_relations(get_presentation("h-calculus"))
    ok = ok and operators.passed and len(operators.entries) == 8
    assert _verdict(7, "nilpotency, Leibniz, and operator exchange identities", ok)


def test_criterion_08_involution():
    report = involution_check()
    star = build_star()
    p = get_presentation("h-calculus")
    idem = all(
        p.normal_form(apply_star(apply_star(gen(g.name)))) == gen(g.name)
        for g in p.generators
    )
    relation_entries = [e for e in report.entries if e.label.startswith("star preserves")]
    ok = report.passed and idem and len(relation_entries) == 10 and star.is_involutive()
    assert _verdict(8, "star involution fixes the calculus and squares to one", ok)


def test_criterion_09_heisenberg():
    _, report = build_heisenberg()
    ok = report.passed and len(report.entries) == 8
    assert _verdict(9, "deformed phase-space relations hold for the hatted operators", ok)


def test_criterion_10_oscillator():
    report = oscillator_check()
    exact = all(
        part.strip() == "0"
        for entry in report.entries
        for part in entry.normal_form.split(";")
    )
    ok = report.passed and exact and len(report.entries) == 5
    limit = limit_presentation(get_presentation("q-oscillator"), "oscillator-limit")
    expected = {
        ("a", "ad"): Element.scalar(1) + word("ad", "a"),
        ("a", "b"): word("b", "a"),
        ("a", "bd"): word("bd", "a"),
        ("b", "ad"): word("ad", "b"),
        ("b", "bd"): Element.scalar(1) - word("bd", "b"),
        ("bd", "ad"): word("ad", "bd"),
    }
    ok = ok and limit.rules == expected
    assert _verdict(10, "deformed oscillator closes with no h and undeforms at q = 1", ok)


def test_criterion_11_coaction():
    report = coaction_check()
    control = report.entries[-1]
    invariance = report.entries[:-1]
    ok = (
        report.passed
        and len(invariance) == 10
        and all(entry.passed for entry in invariance)
        and "control" in control.label
        and control.passed
    )
    assert _verdict(11, "coaction preserves the plane; undeformed control leaks h", ok)
