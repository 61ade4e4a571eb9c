from fractions import Fraction

import pytest

from meroforms.elliptic import BadReduction
from meroforms.hypergeom import (
    DATUM_362,
    BadValuation,
    HypergeometricDatum,
    LowerParamPole,
    coefficient_divisibility_check,
    curve_2f1_check,
    factorial_form_term,
    fricke_clausen_check,
    lambda_curve,
    theorem52_check,
    truncated_pfq,
)


def test_truncated_pfq():
    assert truncated_pfq(DATUM_362, Fraction(3, 7), 0) == 1
    c = Fraction(11)
    assert truncated_pfq(DATUM_362, 1728 / c, 1) - 1 == Fraction(120) / c
    for cc in (Fraction(7), Fraction(-3375), Fraction(5, 3)):
        lhs = truncated_pfq(DATUM_362, 1728 / cc, 30)
        rhs = sum(Fraction(factorial_form_term(m)) / cc**m for m in range(31))
        assert lhs == rhs


def test_lower_param_pole():
    bad = HypergeometricDatum((Fraction(1, 2),), (Fraction(-3),))
    with pytest.raises(LowerParamPole):
        truncated_pfq(bad, Fraction(1), 10)


def test_divisibility():
    assert coefficient_divisibility_check(5, 1)
    assert coefficient_divisibility_check(7, 1)
    assert coefficient_divisibility_check(11, 1)
    assert coefficient_divisibility_check(5, 2)


def test_theorem52():
    assert theorem52_check(Fraction(-3375), 11, 1)["ok"]
    assert theorem52_check(Fraction(1), 5, 2)["ok"]
    assert theorem52_check(Fraction(2), 7, 1)["ok"]
    assert theorem52_check(Fraction(8000), 13, 1)["ok"]
    with pytest.raises(BadValuation):
        theorem52_check(Fraction(5), 5, 1)
    with pytest.raises(BadValuation):
        theorem52_check(Fraction(10), 3, 1)


def test_fricke_clausen():
    assert fricke_clausen_check(50)


def test_lambda_curve():
    C = lambda_curve(Fraction(-1, 8))
    assert C.j_invariant == Fraction(432) / (Fraction(-1, 8) * Fraction(9, 8))
    with pytest.raises(BadReduction):
        lambda_curve(Fraction(1))
    with pytest.raises(BadReduction):
        lambda_curve(Fraction(0))


def test_curve_2f1():
    assert curve_2f1_check(Fraction(-1, 8), 11)["ok"]
    assert curve_2f1_check(Fraction(2), 7)["ok"]
    assert curve_2f1_check(Fraction(1, 2), 13)["ok"]
    for lam in (Fraction(3), Fraction(-5, 7), Fraction(9, 4)):
        for p in (5, 11, 13, 17):
            try:
                assert curve_2f1_check(lam, p)["ok"], (lam, p)
            except BadReduction:
                continue
