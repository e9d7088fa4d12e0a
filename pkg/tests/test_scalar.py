"""Exact scalar arithmetic: canonical form, field laws, q -> 1 limits."""

import random
from fractions import Fraction

import pytest

from hsuperplane.scalar import (
    DivisionByZero,
    GaussianRational,
    I,
    ONE,
    PoleAtOne,
    PolyQ,
    Q,
    ScalarQ,
    ZERO,
    qpow,
    sc,
)


def random_gaussian(rng):
    return GaussianRational(
        Fraction(rng.randint(-6, 6), rng.randint(1, 4)),
        Fraction(rng.randint(-6, 6), rng.randint(1, 4)),
    )


def random_poly(rng, max_degree=3):
    coeffs = [random_gaussian(rng) for _ in range(rng.randint(1, max_degree + 1))]
    return PolyQ(coeffs)


def random_scalar(rng, max_degree=2):
    num = random_poly(rng, max_degree)
    den = random_poly(rng, max_degree)
    while den.is_zero():
        den = random_poly(rng, max_degree)
    return ScalarQ(num, den)


def random_nonzero_scalar(rng, max_degree=2):
    s = random_scalar(rng, max_degree)
    while s.is_zero():
        s = random_scalar(rng, max_degree)
    return s


# -- Gaussian rationals ------------------------------------------------------


def test_gaussian_arithmetic():
    a = GaussianRational(1, 2)
    b = GaussianRational(3, -1)
    assert a + b == GaussianRational(4, 1)
    assert a * b == GaussianRational(3 + 2, 6 - 1)  # (1+2i)(3-i) = 5+5i
    assert a - a == GaussianRational(0)
    assert -a == GaussianRational(-1, -2)


def test_gaussian_division_and_conjugate():
    a = GaussianRational(1, 1)
    assert a * a.conjugate() == GaussianRational(2)
    assert a / a == GaussianRational(1)
    assert GaussianRational(1) / GaussianRational(0, 1) == GaussianRational(0, -1)
    with pytest.raises(DivisionByZero):
        a / GaussianRational(0)


def test_gaussian_str():
    assert str(GaussianRational(3)) == "3"
    assert str(GaussianRational(0, 1)) == "i"
    assert str(GaussianRational(0, -1)) == "-i"
    assert str(GaussianRational(Fraction(3, 2))) == "3/2"
    assert str(GaussianRational(3, 2)) == "3+2*i"
    assert str(GaussianRational(3, -1)) == "3-i"
    assert str(GaussianRational(0, Fraction(3, 2))) == "3/2*i"


def test_gaussian_immutable():
    a = GaussianRational(1)
    with pytest.raises(AttributeError):
        a.re = Fraction(2)


# -- polynomials ---------------------------------------------------------------


def test_poly_basics():
    p = PolyQ([GaussianRational(-1), GaussianRational(0), GaussianRational(1)])  # q^2 - 1
    assert p.degree == 2
    assert str(p) == "q^2-1"
    assert p.evaluate(GaussianRational(1)) == GaussianRational(0)
    assert p.evaluate(GaussianRational(2)) == GaussianRational(3)
    assert PolyQ().degree == -1


def test_poly_divmod_identity():
    rng = random.Random(101)
    for _ in range(60):
        a = random_poly(rng, 4)
        b = random_poly(rng, 2)
        if b.is_zero():
            continue
        quot, rem = divmod(a, b)
        assert quot * b + rem == a
        assert rem.is_zero() or rem.degree < b.degree


def test_poly_gcd_divides_both():
    rng = random.Random(202)
    for _ in range(40):
        a = random_poly(rng, 3)
        b = random_poly(rng, 3)
        if a.is_zero() or b.is_zero():
            continue
        g = a.gcd(b)
        assert (a % g).is_zero()
        assert (b % g).is_zero()
        assert g.lead == GaussianRational(1)


def test_poly_gcd_known_factor():
    q = PolyQ.variable()
    one = PolyQ.constant(1)
    a = q * q - one  # (q-1)(q+1)
    b = q - one
    assert a.gcd(b) == b


# -- scalars -------------------------------------------------------------------


def test_scalar_canonical_form():
    q = PolyQ.variable()
    one = PolyQ.constant(1)
    s = ScalarQ(q * q - one, q - one)  # cancels to q + 1
    assert s.den == PolyQ.constant(1)
    assert s == ScalarQ(q + one)
    # denominator comes out monic with the leading unit folded into the numerator
    t = ScalarQ(one, (q - one).scale(GaussianRational(2)))
    assert t.den == q - one
    assert t.num == PolyQ.constant(Fraction(1, 2))


def test_scalar_field_axioms():
    rng = random.Random(303)
    for _ in range(40):
        a = random_scalar(rng)
        b = random_scalar(rng)
        c = random_scalar(rng)
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + ZERO == a
        assert a * ONE == a
        assert a - a == ZERO
        d = random_nonzero_scalar(rng)
        assert (a / d) * d == a
        assert d * d ** -1 == ONE


def test_scalar_powers():
    assert Q ** 0 == ONE
    assert Q ** 3 == Q * Q * Q
    assert qpow(-2) * Q * Q == ONE
    assert (Q - 1) ** 2 == Q * Q - 2 * Q + 1
    with pytest.raises(DivisionByZero):
        ZERO ** -1


def test_scalar_division_by_zero():
    with pytest.raises(DivisionByZero):
        ONE / ZERO
    with pytest.raises(DivisionByZero):
        ScalarQ(PolyQ.constant(1), PolyQ())


def test_limit_at_one_values():
    assert ((Q * Q - 1) / (Q - 1)).limit_at_one() == GaussianRational(2)
    assert ((Q ** 3 - 1) / (Q - 1)).limit_at_one() == GaussianRational(3)
    assert (Q * Q).limit_at_one() == GaussianRational(1)
    assert (I * Q).limit_at_one() == GaussianRational(0, 1)
    assert ZERO.limit_at_one() == GaussianRational(0)
    # double cancellation: (q-1)^2 / (q^2 - 2q + 1) == 1 identically
    assert (((Q - 1) ** 2) / (Q * Q - 2 * Q + 1)).limit_at_one() == GaussianRational(1)


def test_limit_at_one_pole():
    with pytest.raises(PoleAtOne):
        (ONE / (Q - 1)).limit_at_one()
    with pytest.raises(PoleAtOne):
        ((Q + 1) / ((Q - 1) ** 2 * (Q + 2))).limit_at_one()


def test_conjugate_fixes_q_flips_i():
    assert Q.conjugate() == Q
    assert I.conjugate() == -I
    s = (I * Q + 1) / (Q - 1)
    assert s.conjugate() == (-I * Q + 1) / (Q - 1)
    rng = random.Random(404)
    for _ in range(25):
        a = random_scalar(rng)
        assert a.conjugate().conjugate() == a


def test_scalar_str_forms():
    assert str(Q) == "q"
    assert str(qpow(-1)) == "q^-1"
    assert str(3 * qpow(-2)) == "3*q^-2"
    assert str(Q * Q - 1) == "q^2-1"
    assert str((Q * Q - 1) / (Q - 1)) == "q+1"  # cancels before printing
    assert str(ONE / (Q - 1)) == "1/(q-1)"
    assert str((Q + 1) / (Q * Q + Q + 1)) == "(q+1)/(q^2+q+1)"
    assert str(ZERO) == "0"
    assert str(-ONE) == "-1"
    assert str(I) == "i"


def test_sc_coercion():
    assert sc(3) == ScalarQ(3)
    assert sc(Fraction(1, 2)) + sc(Fraction(1, 2)) == ONE
    assert sc(Q) is Q


def test_scalar_hashable():
    seen = {Q: "q", ONE: "one"}
    assert seen[ScalarQ(PolyQ.variable())] == "q"
    assert seen[(Q * Q - 1) / (Q * Q - 1)] == "one"
