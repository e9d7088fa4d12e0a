"""Catalogue of the deformed superplane algebras and their verification suites.

The central objects are rewrite-rule presentations of:

* the q-superplane and its full differential calculus (coordinates,
  differentials, derivatives) carrying both deformation parameters q and h;
* the h-superplane calculus obtained from it by the singular change of
  generators followed by the q -> 1 limit (``contract``);
* the function algebra of the h-deformed supergroup GL_h(1|1);
* the h-deformed super-Heisenberg algebra and the q-deformed
  super-oscillator algebra realized inside the calculi.

The module also houses the linear solver that fixes the calculus
coefficients from the d-consistency equations, and named verification
suites (Heisenberg, oscillator, involution, coaction) returning
:class:`~hsuperplane.reports.VerificationReport` objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .scalar import ONE, ZERO, I, Q, ScalarQ, qpow, sc
from .algebra import (
    AlgebraError,
    AlgebraMorphism,
    Element,
    InvolutionSpec,
    Presentation,
    gen,
    word,
)
from .reports import VerificationReport


class InconsistentSystemError(AlgebraError):
    """The linear system has no (unique) solution."""


class UnknownPresentationError(AlgebraError):
    """No catalogue entry under that name."""


# -- generator tables ---------------------------------------------------------
# Order matters: each tuple lists generators in normal order (rewriting moves
# every word towards ascending order in this listing).

CALCULUS_GENERATORS = (
    ("h", 1),
    ("dth", 0),
    ("dx", 1),
    ("th", 1),
    ("x", 0),
    ("px", 0),
    ("pth", 1),
)
CALCULUS_DERIVATIVES = ("px", "pth")

PLANE_GENERATORS = (("h", 1), ("dth", 0), ("dx", 1), ("th", 1), ("x", 0))

GL_GENERATORS = (("h", 1), ("a", 0), ("bt", 1), ("gm", 1), ("dd", 0))

HEISENBERG_GENERATORS = (("h", 1), ("th", 1), ("x", 0), ("px", 0), ("pth", 1))

OSCILLATOR_GENERATORS = (("ad", 0), ("bd", 1), ("b", 1), ("a", 0))

COACTION_GENERATORS = (
    ("h", 1),
    ("a", 0),
    ("ai", 0),
    ("bt", 1),
    ("gm", 1),
    ("dd", 0),
    ("ddi", 0),
    ("dth", 0),
    ("dx", 1),
    ("th", 1),
    ("x", 0),
    ("px", 0),
    ("pth", 1),
)


# -- consistency coefficients --------------------------------------------------


@dataclass(frozen=True)
class CoefficientSolution:
    """The exchange coefficients of the mixed calculus relations.

    ``A`` scales the x--dx exchange and is not constrained by the
    consistency equations (``A_free``); the default is q^2.
    """

    A: ScalarQ
    B: ScalarQ
    F11: ScalarQ
    F12: ScalarQ
    F21: ScalarQ
    F22: ScalarQ
    A_free: bool = True


def consistency_system() -> tuple[list[list[ScalarQ]], list[ScalarQ], list[str]]:
    """The linear system obeyed by (B, F11, F12, F21, F22).

    Rows are returned in the order the equations arise when the exterior
    differential is applied to each defining relation of the calculus.
    Two of the eight equations repeat earlier ones, so the system leaves a
    one-parameter family: F22 is not pinned down by d-consistency alone.
    """
    one, q = ONE, Q
    rows = [
        [ZERO, one, ZERO, ZERO, q],
        [ZERO, ZERO, one, q, ZERO],
        [ZERO, -q, one, ZERO, ZERO],
        [ZERO, ZERO, ZERO, one, -q],
        [one + q, -q, one, one, -q],
        [one, ZERO, ZERO, ZERO, ZERO],
        [ZERO, ZERO, one, q, ZERO],
        [ZERO, one, ZERO, ZERO, q],
    ]
    rhs = [q, -one, -one, -q, ZERO, one, -one, q]
    labels = [
        "F11 = q*(1 - F22)",
        "F12 = -(1 + q*F21)",
        "F12 = q*F11 - 1",
        "F21 = q*(F22 - 1)",
        "F12 + F21 = q*(F11 + F22) - (1 + q)*B",
        "B = 1",
        "F12 + F21 + 1 = (1 - q)*F21",
        "1 - F11 - F22 = (1 - q)*(1 - F22)",
    ]
    return rows, rhs, labels


def consistency_equations(sol: CoefficientSolution) -> list[tuple[str, ScalarQ]]:
    """Residual of each consistency equation under a candidate solution.

    All residuals vanish identically in q exactly when the solution
    satisfies the system.
    """
    one, q = ONE, Q
    B, F11, F12, F21, F22 = sol.B, sol.F11, sol.F12, sol.F21, sol.F22
    return [
        ("F11 = q*(1 - F22)", F11 - q * (one - F22)),
        ("F12 = -(1 + q*F21)", F12 + one + q * F21),
        ("F12 = q*F11 - 1", F12 - (q * F11 - one)),
        ("F21 = q*(F22 - 1)", F21 - q * (F22 - one)),
        (
            "F12 + F21 = q*(F11 + F22) - (1 + q)*B",
            F12 + F21 - (q * (F11 + F22) - (one + q) * B),
        ),
        ("B = 1", B - one),
        ("F12 + F21 + 1 = (1 - q)*F21", F12 + F21 + one - (one - q) * F21),
        (
            "1 - F11 - F22 = (1 - q)*(1 - F22)",
            one - F11 - F22 - (one - q) * (one - F22),
        ),
    ]


def solve_linear(
    rows: Sequence[Sequence[ScalarQ]], rhs: Sequence[ScalarQ]
) -> list[ScalarQ]:
    """Solve an exact linear system by Gauss-Jordan elimination.

    Raises InconsistentSystemError when the system is contradictory or
    does not determine every unknown.
    """
    if not rows:
        raise InconsistentSystemError("empty system")
    nvars = len(rows[0])
    m = [list(row) + [b] for row, b in zip(rows, rhs)]
    pivots: list[int] = []
    rank = 0
    for col in range(nvars):
        pivot_row = next(
            (k for k in range(rank, len(m)) if not m[k][col].is_zero()), None
        )
        if pivot_row is None:
            continue
        m[rank], m[pivot_row] = m[pivot_row], m[rank]
        inv = ONE / m[rank][col]
        m[rank] = [entry * inv for entry in m[rank]]
        for k in range(len(m)):
            if k != rank and not m[k][col].is_zero():
                factor = m[k][col]
                m[k] = [a - factor * b for a, b in zip(m[k], m[rank])]
        pivots.append(col)
        rank += 1
    for k in range(rank, len(m)):
        if not m[k][nvars].is_zero():
            raise InconsistentSystemError("contradictory linear system")
    if rank < nvars:
        free = [c for c in range(nvars) if c not in pivots]
        raise InconsistentSystemError(
            f"underdetermined system; free columns {free}"
        )
    solution = [ZERO] * nvars
    for row_index, col in enumerate(pivots):
        solution[col] = m[row_index][nvars]
    return solution


def solve_consistency() -> CoefficientSolution:
    """Solve the d-consistency system for the calculus coefficients.

    The system itself fixes B = 1 and ties F11, F12, F21 to F22, leaving a
    one-parameter family.  The catalogue uses the F22 = 0 member: it is the
    normalization under which the mixed relations stay polynomial in q and
    reproduce the standard exchange matrix, and it makes the solution
    unique.  A never enters the system and stays free (default q^2).
    """
    rows, rhs, _ = consistency_system()
    pinned_rows = [list(row) for row in rows]
    pinned_rows.append([ZERO, ZERO, ZERO, ZERO, ONE])
    pinned_rhs = list(rhs) + [ZERO]
    b, f11, f12, f21, f22 = solve_linear(pinned_rows, pinned_rhs)
    solution = CoefficientSolution(
        A=Q * Q, B=b, F11=f11, F12=f12, F21=f21, F22=f22, A_free=True
    )
    bad = [label for label, res in consistency_equations(solution) if not res.is_zero()]
    if bad:
        raise InconsistentSystemError(f"solution violates {bad}")
    return solution


# -- catalogue builders --------------------------------------------------------


def build_q_superplane() -> Presentation:
    """Coordinates (x, th) and differentials (dx, dth) at the q level.

    h is carried along as a passive odd constant so that elements of the
    contracted algebras parse in this presentation too.
    """
    rules = [
        (("x", "th"), Q * word("th", "x")),
        (("th", "th"), Element.zero()),
        (("dx", "dx"), Element.zero()),
        (("dx", "dth"), qpow(-1) * word("dth", "dx")),
        (("h", "h"), Element.zero()),
    ]
    return Presentation("q-superplane", PLANE_GENERATORS, rules)


def build_qh_rules(A: Optional[ScalarQ] = None, *, name: str = "qh-calculus") -> Presentation:
    """The full calculus carrying both q and h.

    Coordinate, differential and derivative sectors are fixed; the mixed
    sectors are instantiated from the consistency solution, with the free
    exchange coefficient ``A`` (default q^2, the value for which the
    differential-derivative sector below is valid).
    """
    solution = solve_consistency()
    if A is None:
        A = solution.A
    elif not isinstance(A, ScalarQ):
        A = sc(A)
    F11, F12, F21, F22, B = (
        solution.F11,
        solution.F12,
        solution.F21,
        solution.F22,
        solution.B,
    )
    c = ONE / (Q - ONE)
    one = Element.scalar(1)
    rules = [
        # coordinates
        (("x", "th"), Q * word("th", "x") + word("h", "x", "x")),
        (("th", "th"), -word("h", "th", "x")),
        # differentials
        (("dx", "dx"), Element.zero()),
        (("dx", "dth"), qpow(-1) * word("dth", "dx")),
        # coordinates with differentials
        (("x", "dx"), A * word("dx", "x")),
        (
            ("x", "dth"),
            F11 * word("dth", "x")
            + F12 * word("dx", "th")
            + Element.word(("h", "dx", "x"), c * (A - F11 - F12)),
        ),
        (
            ("th", "dx"),
            F21 * word("dx", "th")
            + F22 * word("dth", "x")
            - Element.word(("h", "dx", "x"), c * (A + F21 + F22)),
        ),
        (
            ("th", "dth"),
            B * word("dth", "th")
            - Element.word(("h", "dx", "th"), c * (B + F12 + F21))
            + Element.word(("h", "dth", "x"), c * (B - F11 - F22)),
        ),
        # derivatives
        (("pth", "px"), Q * word("px", "pth")),
        (("pth", "pth"), Element.zero()),
        # derivatives with coordinates
        (
            ("px", "x"),
            one
            + A * word("x", "px")
            + F12 * word("th", "pth")
            - Element.word(("h", "x", "pth"), c * (A - F11 - F12)),
        ),
        (
            ("px", "th"),
            -F21 * word("th", "px")
            - Element.word(("h", "x", "px"), c * (A + F21 + F22))
            - Element.word(("h", "th", "pth"), c * (ONE + F12 + F21)),
        ),
        (("pth", "x"), F11 * word("x", "pth")),
        (
            ("pth", "th"),
            one
            - word("th", "pth")
            - F22 * word("x", "px")
            - Element.word(("h", "x", "pth"), c * (ONE - F11 - F22)),
        ),
        # derivatives with differentials.  This sector exchanges with the
        # inverse coefficients 1/A and 1/q: together with the sectors above
        # that is the unique choice closing every length-3 critical pair
        # (any other collapses the algebra, e.g. forcing dx = 0), and its
        # q -> 1 limit agrees with the h-level calculus.
        (
            ("px", "dx"),
            (ONE / A) * word("dx", "px") + Element.word(("h", "dx", "pth"), c * (ONE / A - qpow(-1))),
        ),
        (
            ("px", "dth"),
            qpow(-1) * word("dth", "px")
            + qpow(-1) * word("h", "dx", "px")
            + qpow(-1) * word("h", "dth", "pth"),
        ),
        (("pth", "dx"), -qpow(-1) * word("dx", "pth")),
        (
            ("pth", "dth"),
            word("dth", "pth")
            + (ONE - ONE / A) * word("dx", "px")
            - Element.word(("h", "dx", "pth"), c * (ONE / A - qpow(-1))),
        ),
        # odd deformation parameter
        (("h", "h"), Element.zero()),
    ]
    return Presentation(
        name, CALCULUS_GENERATORS, rules, derivatives=CALCULUS_DERIVATIVES
    )


def build_h_calculus() -> Presentation:
    """The h-superplane calculus: all exchange coefficients at q = 1."""
    one = Element.scalar(1)
    rules = [
        # coordinates
        (("x", "th"), word("th", "x") + word("h", "x", "x")),
        (("th", "th"), -word("h", "th", "x")),
        # differentials (dual plane)
        (("dx", "dx"), Element.zero()),
        (("dx", "dth"), word("dth", "dx")),
        # coordinates with differentials
        (("x", "dx"), word("dx", "x")),
        (("x", "dth"), word("dth", "x") - word("h", "dx", "x")),
        (("th", "dx"), -word("dx", "th") - word("h", "dx", "x")),
        (("th", "dth"), word("dth", "th") - word("h", "dx", "th") - word("h", "dth", "x")),
        # derivatives
        (("pth", "px"), word("px", "pth")),
        (("pth", "pth"), Element.zero()),
        # derivatives with coordinates
        (("px", "x"), one + word("x", "px") + word("h", "x", "pth")),
        (("px", "th"), word("th", "px") - word("h", "x", "px") - word("h", "th", "pth")),
        (("pth", "x"), word("x", "pth")),
        (("pth", "th"), one - word("th", "pth") + word("h", "x", "pth")),
        # derivatives with differentials
        (("px", "dx"), word("dx", "px") - word("h", "dx", "pth")),
        (("px", "dth"), word("dth", "px") + word("h", "dx", "px") + word("h", "dth", "pth")),
        (("pth", "dx"), -word("dx", "pth")),
        (("pth", "dth"), word("dth", "pth") + word("h", "dx", "pth")),
        # odd deformation parameter
        (("h", "h"), Element.zero()),
    ]
    return Presentation(
        "h-calculus", CALCULUS_GENERATORS, rules, derivatives=CALCULUS_DERIVATIVES
    )


def build_gl_h11() -> Presentation:
    """Function algebra of the h-deformed supergroup GL_h(1|1).

    Generators: even a, dd on the diagonal, odd bt, gm off the diagonal.
    Pairs without an explicit rule graded-commute, which covers the
    relations a*bt = bt*a, dd*bt = bt*dd and bt^2 = 0.
    """
    rules = [
        (
            ("gm", "a"),
            word("a", "gm") - word("h", "a", "a") - word("h", "gm", "bt") + word("h", "a", "dd"),
        ),
        (
            ("dd", "gm"),
            word("gm", "dd") - word("h", "dd", "dd") + word("h", "gm", "bt") + word("h", "dd", "a"),
        ),
        (("gm", "gm"), word("h", "gm", "dd") - word("h", "gm", "a")),
        (("gm", "bt"), -word("bt", "gm") + word("h", "bt", "dd") - word("h", "bt", "a")),
        (("dd", "a"), word("a", "dd") - word("h", "bt", "a") + word("h", "bt", "dd")),
        (("h", "h"), Element.zero()),
    ]
    return Presentation("gl-h11", GL_GENERATORS, rules)


def build_h_heisenberg() -> Presentation:
    """The h-deformed super-Heisenberg algebra on (x, th, px, pth)."""
    one = Element.scalar(1)
    rules = [
        (("x", "th"), word("th", "x") + word("h", "x", "x")),
        (("th", "th"), -word("h", "th", "x")),
        (("pth", "px"), word("px", "pth")),
        (("pth", "pth"), Element.zero()),
        (("px", "x"), word("x", "px") + Element.scalar(I) + I * word("h", "x", "pth")),
        (("pth", "x"), word("x", "pth")),
        (("px", "th"), word("th", "px") - word("h", "x", "px") - I * word("h", "th", "pth")),
        (("pth", "th"), one - word("th", "pth") + word("h", "x", "pth")),
        (("h", "h"), Element.zero()),
    ]
    return Presentation("h-heisenberg", HEISENBERG_GENERATORS, rules)


def build_q_oscillator() -> Presentation:
    """The q-deformed super-oscillator algebra on (a, ad, b, bd).

    The two exchange rules between the raising sector and ad are fixed by
    the realization of the oscillator inside the calculus; they are exactly
    what the remaining rules need to be confluent.
    """
    one = Element.scalar(1)
    rules = [
        (("a", "ad"), one + Q * Q * word("ad", "a") + (Q * Q - ONE) * word("bd", "b")),
        (("b", "bd"), one - word("bd", "b")),
        (("a", "bd"), Q * word("bd", "a")),
        (("a", "b"), qpow(-1) * word("b", "a")),
        (("b", "ad"), Q * word("ad", "b")),
        (("bd", "ad"), qpow(-1) * word("ad", "bd")),
    ]
    return Presentation("q-oscillator", OSCILLATOR_GENERATORS, rules)


# -- coaction product algebra ----------------------------------------------


def _inverse_swap_rule(
    mod_h: Presentation,
    base_pair: tuple[str, str],
    base_rhs: Element,
    pair: tuple[str, str],
) -> Element:
    """Exchange rule for a pair with one letter inverted.

    From a stored rule  base = kappa * (swapped base) + h * S  with S free
    of h, conjugating by the inverse letter ui gives

        v * ui = kappa^-1 * ui * v - kappa^-1 * h * (ui * S * ui)   and
        ui * v = kappa^-1 * v * ui - kappa^-1 * h * (ui * S * ui)

    for the two descending pairs obtained by inverting one side.  The
    conjugated correction is reduced modulo h, which is exact because it
    multiplies h and h^2 = 0.
    """
    swapped = (base_pair[1], base_pair[0])
    kappa = base_rhs.coefficient(swapped)
    if kappa.is_zero():
        raise AlgebraError(f"base rule for {base_pair} has no swap term")
    s_terms = {}
    for w, coeff in base_rhs.items():
        if w == swapped:
            continue
        if not w or w[0] != "h":
            raise AlgebraError(f"base rule for {base_pair} is not h-split")
        s_terms[w[1:]] = coeff
    correction = Element(s_terms)
    ui = pair[0] if pair[0] in ("ai", "ddi") else pair[1]
    conjugated = mod_h.normal_form(
        Element.generator(ui) * correction * Element.generator(ui)
    )
    kinv = ONE / kappa
    return Element.word((pair[1], pair[0]), kinv) - (
        Element.generator("h") * conjugated
    ).scale(kinv)


def build_coaction_product() -> Presentation:
    """GL_h(1|1) entries, their inverses and the calculus in one algebra.

    The group letters graded-commute with the plane letters (tensor-product
    sign rule).  Formal inverses ai, ddi of the even diagonal letters are
    adjoined with two-sided unit rules, and the exchange rules between an
    inverted letter and gm/dd/a are derived by conjugation; each derived
    rule is re-verified by multiplying the inverse back in.
    """
    one = Element.scalar(1)
    gl_rules = [
        (lhs, rhs) for lhs, rhs in build_gl_h11().rules.items() if lhs != ("h", "h")
    ]
    plane_rules = list(build_h_calculus().rules.items())
    unit_rules = [
        (("a", "ai"), one),
        (("ai", "a"), one),
        (("dd", "ddi"), one),
        (("ddi", "dd"), one),
    ]
    core = plane_rules + gl_rules + unit_rules
    partial = Presentation(
        "coaction-core", COACTION_GENERATORS, core, derivatives=CALCULUS_DERIVATIVES
    )
    mod_h = partial.with_h_dropped("coaction-core|h=0")
    stored = partial.rules
    derived: list[tuple[tuple[str, str], Element]] = []
    for pair, base_pair in (
        (("dd", "ai"), ("dd", "a")),
        (("gm", "ai"), ("gm", "a")),
        (("ddi", "a"), ("dd", "a")),
        (("ddi", "gm"), ("dd", "gm")),
    ):
        derived.append(
            (pair, _inverse_swap_rule(mod_h, base_pair, stored[base_pair], pair))
        )
    # ddi against ai rests on the freshly derived dd-ai rule
    dd_ai_rhs = dict(derived)[("dd", "ai")]
    derived.append(
        (("ddi", "ai"), _inverse_swap_rule(mod_h, ("dd", "ai"), dd_ai_rhs, ("ddi", "ai")))
    )
    full = Presentation(
        "coaction-product",
        COACTION_GENERATORS,
        core + derived,
        derivatives=CALCULUS_DERIVATIVES,
    )
    inverse_of = {"ai": "a", "ddi": "dd"}
    for pair, rhs in derived:
        if pair[1] in inverse_of:
            # rule for v*ui: multiplying by u on the right must give back v
            check = full.normal_form(rhs * gen(inverse_of[pair[1]]))
            expected = full.normal_form(gen(pair[0]))
        else:
            # rule for ui*v: multiplying by u on the left must give back v
            check = full.normal_form(gen(inverse_of[pair[0]]) * rhs)
            expected = full.normal_form(gen(pair[1]))
        if check != expected:
            raise AlgebraError(f"derived inverse rule for {pair} fails its unit check")
    return full


def _build_coaction_control() -> Presentation:
    """Same product algebra but with undeformed (graded-commuting) group letters."""
    one = Element.scalar(1)
    plane_rules = list(build_h_calculus().rules.items())
    unit_rules = [
        (("a", "ai"), one),
        (("ai", "a"), one),
        (("dd", "ddi"), one),
        (("ddi", "dd"), one),
    ]
    return Presentation(
        "coaction-control",
        COACTION_GENERATORS,
        plane_rules + unit_rules,
        derivatives=CALCULUS_DERIVATIVES,
    )


def coaction_images() -> dict[str, Element]:
    """Images of the calculus generators under the supergroup coaction."""
    return {
        "x": word("a", "x") + word("bt", "th"),
        "th": word("gm", "x") + word("dd", "th"),
        "dx": word("a", "dx") - word("bt", "dth"),
        "dth": -word("gm", "dx") + word("dd", "dth"),
        "px": word("ai", "px")
        - word("ai", "gm", "ddi", "bt", "ai", "px")
        - word("ai", "gm", "ddi", "pth"),
        "pth": word("ddi", "pth")
        - word("ddi", "bt", "ai", "gm", "ddi", "pth")
        + word("ddi", "bt", "ai", "px"),
        "h": gen("h"),
    }


# -- contraction pipeline ------------------------------------------------------


def limit_presentation(p: Presentation, name: Optional[str] = None) -> Presentation:
    """Apply the q -> 1 limit to every rule coefficient.

    Raises PoleAtOne when any coefficient is singular there.
    """
    relations = [
        (lhs, rhs.map_coefficients(lambda s: s.limit_at_one()))
        for lhs, rhs in p.rules.items()
    ]
    return Presentation(
        name or f"{p.name}|q=1",
        [(g.name, g.parity) for g in p.generators],
        relations,
        derivatives=p.derivatives,
    )


def set_h_to_zero(p: Presentation, name: Optional[str] = None) -> Presentation:
    """Drop every h term from the rules (the h -> 0 specialization)."""
    return p.with_h_dropped(name)


_TRANSPORT_IMAGES = {
    "x": ("x", None),
    "th": ("th", ("h", "x", -1)),
    "dx": ("dx", None),
    "dth": ("dth", ("h", "dx", 1)),
    "px": ("px", ("h", "pth", 1)),
    "pth": ("pth", None),
    "h": ("h", None),
}


def transport_morphism(p_q: Presentation) -> AlgebraMorphism:
    """The singular change of generators into the h -> 0 specialization.

    Each generator of the q,h-level calculus is written in terms of the
    plain q-level generators; the corrections carry the coefficient
    1/(q - 1), which is what makes the q -> 1 limit a contraction.
    """
    c = ONE / (Q - ONE)
    target = p_q.with_h_dropped(f"{p_q.name}|h=0")
    images: dict[str, Element] = {}
    for g in p_q.generators:
        if g.name not in _TRANSPORT_IMAGES:
            raise AlgebraError(f"no transport image for generator {g.name!r}")
        base, correction = _TRANSPORT_IMAGES[g.name]
        image = gen(base)
        if correction is not None:
            first, second, sign = correction
            image = image + Element.word((first, second), c * sc(sign))
        images[g.name] = image
    return AlgebraMorphism(p_q, target, images)


def contract(p_q: Presentation, *, name: Optional[str] = None) -> Presentation:
    """Contract a q,h-level presentation to its h-level limit.

    First verifies that every rule is the correct transport of the plain
    q-level calculus (the rule must hold identically after the singular
    change of generators), then takes the q -> 1 limit coefficient-wise.
    PoleAtOne propagates if any coefficient fails to converge.
    """
    sigma = transport_morphism(p_q)
    for lhs, rhs in p_q.rules.items():
        residual = sigma(Element.word(lhs)) - sigma(rhs)
        if not residual.is_zero():
            raise AlgebraError(
                f"rule {lhs} is not transported correctly: residual {residual!r}"
            )
    return limit_presentation(p_q, name or "h-calculus")


# -- verification suites -------------------------------------------------------


def verify_presentation(
    p: Presentation, relations: Sequence, suite: str = "relations"
) -> VerificationReport:
    """Normalize each relation element; an entry passes iff it reduces to 0.

    ``relations`` holds Elements or (label, Element) pairs.
    """
    report = VerificationReport(suite, p.name)
    for index, item in enumerate(relations):
        if isinstance(item, tuple):
            label, element = item
        else:
            label, element = f"relation {index + 1}", item
        nf = p.normal_form(element)
        report.add(label, p.show(nf), nf.is_zero())
    return report


def build_heisenberg() -> tuple[Presentation, VerificationReport]:
    """Realize the Heisenberg operators inside the calculus and verify.

    The hatted operators are x, th + h*x, i*(px - h*pth), pth; all their
    exchange relations are verified by normalization, and the abstract
    presentation they satisfy is returned together with the report.
    """
    hc = get_presentation("h-calculus")
    h = gen("h")
    one = Element.scalar(1)
    xh = gen("x")
    thh = gen("th") + word("h", "x")
    pxh = I * gen("px") - I * word("h", "pth")
    pthh = gen("pth")
    relations = [
        ("x*th = th*x + h*x^2", xh * thh - thh * xh - h * xh * xh),
        ("th^2 = -h*th*x", thh * thh + h * thh * xh),
        ("pth*px = px*pth", pthh * pxh - pxh * pthh),
        ("pth^2 = 0", pthh * pthh),
        ("px*x = x*px + i*(1 + h*x*pth)", pxh * xh - xh * pxh - I * (one + h * xh * pthh)),
        ("pth*x = x*pth", pthh * xh - xh * pthh),
        (
            "px*th = th*px - h*(x*px + i*th*pth)",
            pxh * thh - thh * pxh + h * (xh * pxh + I * thh * pthh),
        ),
        (
            "pth*th = 1 - th*pth + h*x*pth",
            pthh * thh - one + thh * pthh - h * xh * pthh,
        ),
    ]
    report = verify_presentation(hc, relations, suite="heisenberg")
    return get_presentation("h-heisenberg"), report


def oscillator_check() -> VerificationReport:
    """Verify the super-oscillator relations inside the q,h-level calculus.

    The oscillators are A+ = x, A = px - h/(q-1)*pth, B+ = th + h/(q-1)*x,
    B = pth.  Every relation holds with residual exactly 0; the entries
    record the h-degree of each side's normal form to witness that the
    h-dependence cancels (it never exceeds 1 in the intermediates).
    """
    p = get_presentation("qh-calculus")
    c = ONE / (Q - ONE)
    one = Element.scalar(1)
    a_plus = gen("x")
    a_op = gen("px") - Element.word(("h", "pth"), c)
    b_plus = gen("th") + Element.word(("h", "x"), c)
    b_op = gen("pth")
    report = VerificationReport("oscillator", p.name)

    def entry(label: str, lhs: Element, rhs: Element) -> None:
        lhs_nf = p.normal_form(lhs)
        rhs_nf = p.normal_form(rhs)
        residual = lhs_nf - rhs_nf
        report.add(
            label,
            p.show(residual),
            residual.is_zero(),
            h_degree_lhs=lhs_nf.max_letter_count("h"),
            h_degree_rhs=rhs_nf.max_letter_count("h"),
        )

    entry(
        "A*A+ = 1 + q^2*A+*A + (q^2-1)*B+*B",
        a_op * a_plus,
        one + Q * Q * a_plus * a_op + (Q * Q - ONE) * b_plus * b_op,
    )
    entry("B*B+ = 1 - B+*B", b_op * b_plus, one - b_plus * b_op)
    nil_b = p.normal_form(b_op * b_op)
    nil_b_plus = p.normal_form(b_plus * b_plus)
    report.add(
        "B^2 = 0 = B+^2",
        f"{p.show(nil_b)}; {p.show(nil_b_plus)}",
        nil_b.is_zero() and nil_b_plus.is_zero(),
        h_degree_lhs=nil_b.max_letter_count("h"),
        h_degree_rhs=nil_b_plus.max_letter_count("h"),
    )
    entry("A*B+ = q*B+*A", a_op * b_plus, Q * b_plus * a_op)
    entry("A*B = q^-1*B*A", a_op * b_op, qpow(-1) * b_op * a_op)
    return report


# The mixed coordinate-differential relations are not star-invariant; the
# star preserves the coordinate, dual-plane and derivative sectors.
_STAR_INVARIANT_PAIRS = (
    ("x", "th"),
    ("th", "th"),
    ("dx", "dx"),
    ("dx", "dth"),
    ("pth", "px"),
    ("pth", "pth"),
    ("px", "x"),
    ("px", "th"),
    ("pth", "x"),
    ("pth", "th"),
)


def build_star() -> InvolutionSpec:
    """The antilinear anti-automorphism of the h-level calculus.

    x and pth are self-adjoint, th and px pick up 2h-corrections, h is
    anti-self-adjoint, and the differentials are fixed.
    """
    p = get_presentation("h-calculus")
    images = {
        "x": gen("x"),
        "th": gen("th") + Element.word(("h", "x"), sc(2)),
        "px": -gen("px") + Element.word(("h", "pth"), sc(2)),
        "pth": gen("pth"),
        "h": -gen("h"),
        "dx": gen("dx"),
        "dth": gen("dth"),
    }
    return InvolutionSpec(p, images)


def apply_star(element: Element) -> Element:
    return build_star()(element)


def involution_check() -> VerificationReport:
    """Check that the star is involutive and preserves the invariant sectors."""
    p = get_presentation("h-calculus")
    star = build_star()
    report = VerificationReport("involution", p.name)
    report.add(
        "star applied twice fixes every generator", "", star.is_involutive()
    )
    rules = p.rules
    for lhs in _STAR_INVARIANT_PAIRS:
        relation = Element.word(lhs) - rules[lhs]
        image = p.normal_form(star(relation))
        label = f"star preserves {p.show(Element.word(lhs))} = {p.show(rules[lhs])}"
        report.add(label, p.show(image), image.is_zero())
    return report


def coaction_check() -> VerificationReport:
    """Verify covariance of the calculus under the supergroup coaction.

    The coordinate coaction must preserve the plane relations, its
    extension to differentials the coordinate-differential relations, and
    its extension to derivatives the derivative-coordinate relations.  A
    control run with undeformed group letters fails, with the residual
    proportional to h.
    """
    hc = get_presentation("h-calculus")
    product = get_presentation("coaction-product")
    delta = AlgebraMorphism(hc, product, coaction_images())
    report = VerificationReport("coaction", product.name)
    hc_rules = hc.rules
    sectors = (
        ("coordinates", (("x", "th"), ("th", "th"))),
        ("differentials", (("x", "dx"), ("x", "dth"), ("th", "dx"), ("th", "dth"))),
        ("derivatives", (("px", "x"), ("px", "th"), ("pth", "x"), ("pth", "th"))),
    )
    for sector, pairs in sectors:
        for lhs in pairs:
            relation = Element.word(lhs) - hc_rules[lhs]
            residual = delta(relation)
            label = (
                f"{sector}: delta preserves "
                f"{hc.show(Element.word(lhs))} = {hc.show(hc_rules[lhs])}"
            )
            report.add(label, product.show(residual), residual.is_zero())
    control = _build_coaction_control()
    delta0 = AlgebraMorphism(hc, control, coaction_images())
    relation = Element.word(("x", "th")) - hc_rules[("x", "th")]
    residual0 = delta0(relation)
    control_ok = (not residual0.is_zero()) and all(
        "h" in w for w in residual0.words()
    )
    report.add(
        "control: undeformed group letters break x*th = th*x + h*x^2",
        control.show(residual0),
        control_ok,
        expected="nonzero residual, every term carrying h",
    )
    return report


# -- catalogue ----------------------------------------------------------------


def _build_q_calculus() -> Presentation:
    return set_h_to_zero(build_qh_rules(), "q-calculus")


_BUILDERS = {
    "q-superplane": build_q_superplane,
    "qh-calculus": build_qh_rules,
    "q-calculus": _build_q_calculus,
    "h-calculus": build_h_calculus,
    "gl-h11": build_gl_h11,
    "h-heisenberg": build_h_heisenberg,
    "q-oscillator": build_q_oscillator,
    "coaction-product": build_coaction_product,
}

CATALOGUE_NAMES = tuple(_BUILDERS)

_CACHE: dict[str, Presentation] = {}


def get_presentation(name: str) -> Presentation:
    """Fetch a catalogue presentation by name (built once, then cached)."""
    if name not in _BUILDERS:
        known = ", ".join(CATALOGUE_NAMES)
        raise UnknownPresentationError(f"unknown presentation {name!r}; known: {known}")
    if name not in _CACHE:
        _CACHE[name] = _BUILDERS[name]()
    return _CACHE[name]


# -- suite report builders -------------------------------------------------------


def consistency_report() -> VerificationReport:
    """Solve the consistency system and back-substitute every equation."""
    solution = solve_consistency()
    report = VerificationReport("consistency", "qh-calculus")
    closed_form = (
        ("B", solution.B, ONE),
        ("F11", solution.F11, Q),
        ("F12", solution.F12, Q * Q - ONE),
        ("F21", solution.F21, -Q),
        ("F22", solution.F22, ZERO),
    )
    for name, value, expected in closed_form:
        report.add(f"{name} = {expected}", str(value), value == expected)
    report.add(
        "A stays free (default q^2)",
        str(solution.A),
        solution.A_free and solution.A == Q * Q,
    )
    for label, residual in consistency_equations(solution):
        report.add(f"back-substitution: {label}", str(residual), residual.is_zero())
    return report


def contraction_report() -> VerificationReport:
    """Transport every q-level rule to h = 0 and compare the catalogues."""
    p_q = get_presentation("qh-calculus")
    sigma = transport_morphism(p_q)
    report = VerificationReport("contraction", p_q.name)
    for rule in p_q.rule_list():
        residual = sigma(Element.word(rule.lhs, ONE)) - sigma(rule.rhs)
        report.add(
            f"rule {'*'.join(rule.lhs)} transports to the h = 0 plane",
            sigma.target.show(residual),
            residual.is_zero(),
        )
    contracted = contract(p_q)
    catalogue = get_presentation("h-calculus")
    report.add(
        "contracted generators match the h-level catalogue",
        "",
        contracted.generators_equal(catalogue),
    )
    report.add(
        "contracted rules match the h-level catalogue",
        "",
        contracted.rules_equal(catalogue),
    )
    return report


def confluence_report() -> VerificationReport:
    """Resolve every doubly-reducible length-3 word in every catalogue entry."""
    report = VerificationReport("confluence")
    for name in CATALOGUE_NAMES:
        outcome = get_presentation(name).check_confluence()
        report.add(
            f"{name} has no unresolved critical pairs",
            f"{outcome.words_checked} words checked",
            outcome.passed and not outcome.failures,
            words_checked=outcome.words_checked,
            failures=len(outcome.failures),
        )
    return report
