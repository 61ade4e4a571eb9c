import random
from fractions import Fraction

import pytest

from meroforms.modforms import (
    apply_relation,
    cusp_basis,
    cusp_relation,
    cusp_relation_from_matrix,
    d_operator,
    delta,
    dim_sk,
    e2,
    eisenstein,
    g_k,
    hecke,
    j_invariant,
)
from meroforms.qseries import QQ, TruncatedSeries, ZZ


def sigma(n, k):
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def test_eisenstein_divisor_sums():
    E4 = eisenstein(4, 30)
    assert E4.weight == 4 and E4.depth == 0
    assert E4.series.coeff(0) == 1
    for n in (1, 2, 7, 30):
        assert E4.series.coeff(n) == 240 * sigma(n, 3)
    E6 = eisenstein(6, 20)
    for n in (1, 5, 12):
        assert E6.series.coeff(n) == -504 * sigma(n, 5)
    assert e2(10).depth == 1
    # non-integral weight 12 requires the rational ring
    from meroforms.qseries import RingMismatch

    with pytest.raises(RingMismatch):
        eisenstein(12, 10)
    E12 = eisenstein(12, 10, QQ)
    assert E12.series.coeff(1) == Fraction(65520, 691)


def test_delta_and_j():
    D = delta(40)
    assert D.series.valuation == 1 and D.series.coeff(1) == 1
    assert D.series.coeff(2) == -24
    J = j_invariant(20)
    assert J.series.coeff(-1) == 1
    assert J.series.coeff(0) == 744
    assert J.series.coeff(1) == 196884
    E4, E6 = eisenstein(4, 40).series, eisenstein(6, 40).series
    assert E4**3 - E6**2 == D.series.scale(1728)


def test_ramanujan_system():
    N = 40
    E2s = e2(N).series.to_rational()
    E4 = eisenstein(4, N).series.to_rational()
    E6 = eisenstein(6, N).series.to_rational()
    assert d_operator(E2s) == (E2s * E2s - E4).scale(Fraction(1, 12))
    assert d_operator(E4) == (E2s * E4 - E6).scale(Fraction(1, 3))
    assert d_operator(E6) == (E2s * E6 - E4 * E4).scale(Fraction(1, 2))


def test_dj_identity():
    N = 30
    J = j_invariant(N).series
    E4 = eisenstein(4, N + 4).series
    E6 = eisenstein(6, N + 4).series
    rhs = (E4 * E4 * E6).scale(-1) * delta(N + 4).series.invert()
    dj = d_operator(J)
    assert dj == rhs.truncate(dj.precision)


def test_g_k():
    gm2 = g_k(-2, 20)
    assert gm2.series.valuation == -1
    e10 = eisenstein(10, 24).series
    assert gm2.series == (e10 * delta(24).series.invert()).truncate(20)
    assert g_k(12, 20).series == delta(20).series
    assert g_k(14, 20).series == eisenstein(14, 20).series
    assert g_k(0, 20).series == TruncatedSeries.one(ZZ, 20)
    assert g_k(16, 20).series == (eisenstein(4, 20).series * delta(20).series).truncate(20)
    assert g_k(26, 20).weight == 26


def test_hecke_operator():
    D = delta(40).series
    assert hecke(D, 1, 12) == D
    h2 = hecke(D, 2, 12)
    assert h2 == D.scale(-24).truncate(h2.precision)
    # composition law on random series at weight 4
    rng = random.Random(9)
    f = TruncatedSeries.from_coeffs([rng.randint(-9, 9) for _ in range(61)], precision=60)
    lhs = hecke(hecke(f, 3, 4), 2, 4)
    assert lhs == hecke(f, 6, 4).truncate(lhs.precision)
    # T_p T_p = T_{p^2} + p^{k-1} T_1 at weight 12
    f = TruncatedSeries.from_coeffs([rng.randint(-9, 9) for _ in range(82)], precision=81)
    lhs = hecke(hecke(f, 3, 12), 3, 12)
    rhs = hecke(f, 9, 12) + f.scale(3**11).truncate(lhs.precision)
    assert lhs == rhs.truncate(lhs.precision)


def test_hecke_negative_weight():
    g = g_k(-2, 30).series
    h = hecke(g, 2, -2)
    # n^{k-1} g|T_{n,2-k} has integer coefficients and principal part q^{-n}
    scaled = h.scale(Fraction(2) ** 3).to_integer()
    assert scaled.coeff(-2) == 1 and scaled.coeff(-1) == 0


def test_dims():
    assert dim_sk(4) == 0 and dim_sk(10) == 0
    assert dim_sk(12) == 1 and dim_sk(16) == 1
    assert dim_sk(24) == 2 and dim_sk(26) == 1


def test_cusp_relations():
    assert cusp_relation(4) == (1,)
    assert cusp_relation(10) == (1,)
    assert cusp_relation(12) == (24, 1)
    r16 = cusp_relation(16)
    assert r16 == (216, -1)
    for k in range(12, 27, 2):
        rel = cusp_relation(k)
        d = dim_sk(k)
        assert len(rel) == d + 1
        prec = (d + 2) * (len(rel) + 1)
        for f in cusp_basis(k, prec):
            assert apply_relation(f, rel, k).is_zero()
    # cross-check against the matrix-kernel route
    b = cusp_basis(16, 10)
    rows = [[f.coeff(m) for m in range(1, dim_sk(16) + 2)] for f in b]
    assert cusp_relation_from_matrix(rows) == r16


def test_apply_relation_eisenstein_survives():
    E12 = eisenstein(12, 40, QQ).series
    out = apply_relation(E12, (24, 1), 12)
    assert not out.is_zero()
    D = delta(40).series.to_rational()
    assert apply_relation(D, (24, 1), 12).is_zero()
    assert apply_relation(D, (1,), 12) == D
