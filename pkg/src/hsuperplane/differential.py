"""The exterior derivative as a graded derivation on the calculus.

The derivative d sends x to dx and th to dth, kills differentials and
the deformation parameter, and extends to words by the graded Leibniz
rule with the Koszul sign of the left prefix.  The same operator is
realized inside the algebra as dx*px + dth*pth acting through ``act``;
the two realizations are cross-checked, together with nilpotency, the
Leibniz rule, the operator exchange identities and the curl formula.
"""

import itertools
import random
from typing import Iterable, List, Optional, Sequence, Tuple

from .algebra import AlgebraError, Element, Presentation, gen, word
from .presentations import get_presentation
from .reports import VerificationReport
from .scalar import ONE, ScalarQ, sc


class UnsupportedGeneratorError(AlgebraError):
    """The element contains a generator outside the operation's domain."""


_D_IMAGES = {"x": "dx", "th": "dth"}
_D_CONSTANTS = ("dx", "dth", "h")
_FORM_LETTERS = ("h", "dth", "dx", "th", "x")
_COORDINATE_LETTERS = ("h", "th", "x")


def _check_letters(element: Element, allowed: Iterable[str], what: str) -> None:
    allowed = set(allowed)
    for w in element.words():
        for letter in w:
            if letter not in allowed:
                raise UnsupportedGeneratorError(
                    f"{what} must not contain {letter!r}"
                )


def d_operator() -> Element:
    """The derivative realized inside the algebra: dx*px + dth*pth."""
    return word("dx", "px") + word("dth", "pth")


def exterior_d(a: Element, p: Presentation) -> Element:
    """Apply d term-wise by the graded Leibniz rule and normalize.

    d(g_1 ... g_n) is the sum over positions k of the word with g_k
    replaced by its image, signed by the parity of the prefix before k.
    """
    _check_letters(a, _D_IMAGES.keys() | set(_D_CONSTANTS), "a form argument")
    parities = {g.name: g.parity for g in p.generators}
    result = Element.zero()
    for w, coeff in a.items():
        prefix_parity = 0
        for k, letter in enumerate(w):
            image = _D_IMAGES.get(letter)
            if image is not None:
                sign = sc((-1) ** prefix_parity)
                result = result + Element.word(
                    w[:k] + (image,) + w[k + 1 :], coeff * sign
                )
            prefix_parity = (prefix_parity + parities[letter]) % 2
    return p.normal_form(result)


def monomial_basis(
    p: Presentation, max_degree: int, letters: Sequence[str] = _FORM_LETTERS
) -> List[Element]:
    """All normal-form monomials of degree at most max_degree, 1 included."""
    basis = [Element.scalar(1)]
    for degree in range(1, max_degree + 1):
        for w in itertools.product(letters, repeat=degree):
            if p.is_normal(Element.word(w, ONE)):
                basis.append(Element.word(w, ONE))
    return basis


def random_form(
    rng: random.Random,
    p: Presentation,
    max_degree: int,
    letters: Sequence[str] = _FORM_LETTERS,
    terms: int = 3,
    parity: Optional[int] = None,
) -> Element:
    """Random normalized polynomial; fixed parity when requested."""
    parities = {g.name: g.parity for g in p.generators}
    element = Element.zero()
    for _ in range(terms):
        degree = rng.randint(0 if parity in (None, 0) else 1, max_degree)
        w = tuple(rng.choice(letters) for _ in range(degree))
        if parity is not None and sum(parities[g] for g in w) % 2 != parity:
            continue
        element = element + Element.word(w, sc(rng.choice((1, 2, 3, -1, -2))))
    return p.normal_form(element)


def check_d_squared(samples: Iterable[Element], p: Presentation) -> VerificationReport:
    """d applied twice annihilates every sample."""
    report = VerificationReport("dsquared", p.name)
    for sample in samples:
        result = exterior_d(exterior_d(sample, p), p)
        report.add(
            f"d^2({p.show(sample)}) = 0", p.show(result), result.is_zero()
        )
    return report


def check_leibniz(
    pairs: Iterable[Tuple[Element, Element]], p: Presentation
) -> VerificationReport:
    """Graded Leibniz rule on pairs with parity-homogeneous left factor."""
    parities = {g.name: g.parity for g in p.generators}
    report = VerificationReport("leibniz", p.name)
    for f, g in pairs:
        f_parities = {sum(parities[l] for l in w) % 2 for w in f.words()}
        if len(f_parities) > 1:
            raise AlgebraError("left factor must be parity-homogeneous")
        sign = sc((-1) ** (f_parities.pop() if f_parities else 0))
        residual = p.normal_form(
            exterior_d(p.normal_form(f * g), p)
            - exterior_d(f, p) * g
            - (f * exterior_d(g, p)).scale(sign)
        )
        report.add(
            f"Leibniz on ({p.show(f)}, {p.show(g)})",
            p.show(residual),
            residual.is_zero(),
        )
    return report


def check_operator_relations(p: Presentation) -> VerificationReport:
    """Exchange identities of d with multiplication and derivative operators.

    d is realized as dx*px + dth*pth through ``act``; each identity is
    verified on every normal monomial of degree at most 4.
    """
    basis = monomial_basis(p, 4)
    d = d_operator()

    def d_of(m: Element) -> Element:
        return p.act(d, m)

    checks = [
        (
            "d*x - x*d acts as dx",
            lambda m: d_of(p.normal_form(gen("x") * m))
            - p.normal_form(gen("x") * d_of(m))
            - p.normal_form(gen("dx") * m),
        ),
        (
            "d*th + th*d acts as dth",
            lambda m: d_of(p.normal_form(gen("th") * m))
            + p.normal_form(gen("th") * d_of(m))
            - p.normal_form(gen("dth") * m),
        ),
        (
            "d commutes with px",
            lambda m: d_of(p.act(gen("px"), m)) - p.act(gen("px"), d_of(m)),
        ),
        (
            "d anticommutes with pth",
            lambda m: d_of(p.act(gen("pth"), m)) + p.act(gen("pth"), d_of(m)),
        ),
        (
            "d anticommutes with dx",
            lambda m: d_of(p.normal_form(gen("dx") * m))
            + p.normal_form(gen("dx") * d_of(m)),
        ),
        (
            "d commutes with dth",
            lambda m: d_of(p.normal_form(gen("dth") * m))
            - p.normal_form(gen("dth") * d_of(m)),
        ),
        ("d squares to zero as an operator", lambda m: d_of(d_of(m))),
        (
            "operator realization matches the derivation",
            lambda m: d_of(m) - exterior_d(m, p),
        ),
    ]
    report = VerificationReport("operators", p.name)
    for label, residual_of in checks:
        failure = None
        for m in basis:
            residual = p.normal_form(residual_of(m))
            if not residual.is_zero():
                failure = f"{p.show(m)} -> {p.show(residual)}"
                break
        report.add(
            label,
            "0" if failure is None else failure,
            failure is None,
            monomials=len(basis),
        )
    return report


def _two_form_part(element: Element) -> Element:
    """The words of a two-form lying in the dth*dx component.

    Normal forms put the deformation parameter first, so both pure
    (dth, dx, ...) words and (h, dth, dx, ...) words belong to it.
    """
    part = Element.zero()
    for w, coeff in element.items():
        body = w[1:] if w[:1] == ("h",) else w
        if body[:2] == ("dth", "dx"):
            part = part + Element.word(w, coeff)
    return part


def curl(w1: Element, w2: Element, p: Presentation) -> Element:
    """The curl of the one-form dx*w1 + dth*w2.

    Returns (1/lambda)*px(w2) - pth(w1), where lambda is the exchange
    coefficient of dx*dth -> lambda*dth*dx; the result is verified to
    be the dx*dth component of the exterior derivative of the form.
    """
    for component in (w1, w2):
        _check_letters(component, _COORDINATE_LETTERS, "a curl component")
    rule = p.rules.get(("dx", "dth"))
    if rule is None:
        lam = ONE
    else:
        lam = rule.coefficient(("dth", "dx"))
    if lam.is_zero():
        raise AlgebraError("the dx*dth exchange rule has no dth*dx term")
    value = p.normal_form(
        p.act(gen("px"), w2).scale(ONE / lam) - p.act(gen("pth"), w1)
    )
    derivative = exterior_d(
        p.normal_form(gen("dx") * w1 + gen("dth") * w2), p
    )
    expected = _two_form_part(derivative)
    recovered = p.normal_form(word("dx", "dth") * value)
    if expected != recovered:
        raise AlgebraError("curl does not match the two-form coefficient")
    return value


def dsquared_report(seed: int = 2024) -> VerificationReport:
    """Nilpotency on the monomial basis and random polynomials, plus Leibniz."""
    rng = random.Random(seed)
    combined = VerificationReport("dsquared")
    for name in ("qh-calculus", "h-calculus"):
        p = get_presentation(name)
        basis = monomial_basis(p, 5)
        samples = basis + [random_form(rng, p, 5) for _ in range(100)]
        partial = check_d_squared(samples, p)
        combined.add(
            f"d^2 vanishes on the degree-5 basis and 100 random forms [{name}]",
            "" if partial.passed else str(partial.failures()[0]),
            partial.passed,
            samples=len(samples),
        )
        pairs = []
        while len(pairs) < 100:
            f = random_form(rng, p, 4, parity=rng.choice((0, 1)))
            g = random_form(rng, p, 4)
            if not f.is_zero():
                pairs.append((f, g))
        leibniz = check_leibniz(pairs, p)
        combined.add(
            f"graded Leibniz rule on 100 random pairs [{name}]",
            "" if leibniz.passed else str(leibniz.failures()[0]),
            leibniz.passed,
            pairs=len(pairs),
        )
    return combined


def operator_report() -> VerificationReport:
    """Operator exchange identities in the h-level calculus."""
    return check_operator_relations(get_presentation("h-calculus"))
