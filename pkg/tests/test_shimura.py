from fractions import Fraction

import pytest

from meroforms.exactnum import kronecker
from meroforms.modforms import d_operator, delta
from meroforms.qseries import TruncatedSeries, ZZ
from meroforms.shimura import (
    InsufficientPrecision,
    NoSolution,
    PlusSpaceForm,
    admissible,
    eis_weight2,
    g_sequence,
    half_hecke,
    magnetic_check,
    moebius_bridge_check,
    plus_basis,
    plus_mask_ok,
    prop62_check,
    prop62_scale,
    shimura_lift,
    theta_half,
)


def test_generators():
    th = theta_half(30)
    assert th.coeff(0) == 1 and th.coeff(1) == 2 and th.coeff(4) == 2
    assert th.coeff(2) == 0 and th.coeff(3) == 0
    F = eis_weight2(30)
    assert F.coeff(1) == 1 and F.coeff(3) == 4 and F.coeff(5) == 6
    assert F.coeff(2) == 0


def test_admissibility():
    assert admissible(2, 7) and admissible(2, 8) and not admissible(2, 5)
    assert admissible(3, 4) and admissible(3, 1) and not admissible(3, 2)


def test_plus_basis_principal_parts():
    f7 = plus_basis(2, 7, 120)
    assert f7.coeff(-7) == 1
    assert all(f7.coeff(n) == 0 for n in range(-6, 1))
    assert plus_mask_ok(2, f7.series)
    # the basis matrix of principal parts is the identity
    for s in (2, 3):
        admissible_ms = [m for m in range(1, 21) if admissible(s, m)]
        for m in admissible_ms:
            f = plus_basis(s, m, 30)
            for mm in admissible_ms:
                want = 1 if mm == m else 0
                assert f.coeff(-mm) == want, (s, m, mm)


def test_plus_basis_ladder_consistency():
    # ladder-grown forms match the direct linear-algebra construction
    direct = _direct_form(2, 16, 25)
    ladder = plus_basis(2, 16, 25)
    assert ladder.series.truncate(20) == direct.truncate(20)


def _direct_form(s, m, N):
    from meroforms.shimura import _try_plus_basis

    t = (m + 3) // 4
    form = _try_plus_basis(s, m, t, N)
    assert form is not None
    return form.series


def test_plus_basis_rejects_inadmissible():
    with pytest.raises(NoSolution):
        plus_basis(2, 5, 20)


def test_principal_part_divisibility():
    # a plus form whose principal part is divisible by p^r is 0 mod p^r:
    # combinations of basis elements demonstrate it
    f7 = plus_basis(2, 7, 60)
    f4 = plus_basis(2, 4, 60)
    comb = f7.series.scale(9) + f4.series.scale(27)
    for i, c in enumerate(comb.coeffs):
        assert c % 9 == 0


def test_half_hecke():
    f7 = plus_basis(2, 7, 9 * 30)
    h = half_hecke(f7, 3)
    s = 2
    assert h.series.coeff(-63) == 3 ** (2 * s - 1)
    assert h.series.coeff(-7) == 3 ** (s - 1) * kronecker(-7, 3)
    assert plus_mask_ok(2, h.series)
    zero = PlusSpaceForm(2, 0, TruncatedSeries.zero(ZZ, 50))
    assert half_hecke(zero, 3).series.is_zero()


def test_g_sequence_identifications():
    gs = g_sequence(2, 7, 3, 2, N=12)
    assert gs[1].m == 63
    assert gs[1].series.truncate(10) == plus_basis(2, 63, 12).series.truncate(10)
    gs = g_sequence(2, 8, 5, 2, N=6)
    assert gs[1].m == 200
    assert gs[1].series.truncate(6) == plus_basis(2, 200, 6).series.truncate(6)
    gs = g_sequence(3, 4, 3, 2, N=8)
    assert gs[1].m == 36
    assert gs[1].series.truncate(8) == plus_basis(3, 36, 8).series.truncate(8)


def test_g_sequence_hypothesis():
    # p = 2, 4 | m with (-1)^{s-1} m/4 = 0,1 mod 4 violates the ladder hypothesis
    with pytest.raises(ValueError):
        g_sequence(3, 16, 2, 2, N=6)


def test_shimura_lift_basics():
    f7 = plus_basis(2, 7, 110)
    lift = shimura_lift(f7, 1, 10)
    assert lift.coeff(1) == f7.coeff(1)  # a_1 = a_{|d0|}
    zero = PlusSpaceForm(2, 0, TruncatedSeries.zero(ZZ, 500))
    assert shimura_lift(zero, 1, 10).is_zero()
    with pytest.raises(InsufficientPrecision):
        shimura_lift(plus_basis(2, 7, 50), 1, 10)


def test_lift_hecke_equivariance():
    # S_1 (f|T_{p,5/2}) = S_1(f)|T_{p,4}
    from meroforms.modforms import hecke

    p, N = 3, 6
    f7 = plus_basis(2, 7, (N * p) ** 2 + 80)
    lhs = shimura_lift(half_hecke(f7, p), 1, N)
    rhs = hecke(shimura_lift(f7, 1, N * p), p, 4)
    assert lhs.truncate(rhs.precision) == rhs.truncate(lhs.precision)


def test_prop62():
    assert prop62_check(2, -7, 1, 20)
    assert prop62_check(2, -8, 1, 16)
    assert prop62_check(3, 4, -3, 12)
    assert prop62_scale(2, -7, 1) == Fraction(1, 7)
    assert prop62_scale(3, 4, -3) == Fraction(3, 8)


def test_moebius_bridge():
    assert moebius_bridge_check(2, -12, 60)
    assert moebius_bridge_check(2, -16, 30)


def test_magnetic_check():
    img = d_operator(d_operator(delta(60).series))
    rep = magnetic_check(img, 2, 60)
    assert rep["passed"]
    rep = magnetic_check(delta(60).series, 1, 60)
    assert not rep["passed"]
    assert rep["first_failure"][0] == 11  # 11 does not divide tau(11)
