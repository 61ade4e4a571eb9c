"""Meromorphic modular forms with one non-cuspidal pole.

The expansion of E_k/(j-c)^r is assembled as E_k Delta^r (E_4^3 - c Delta)^-r,
which keeps all arithmetic in the coefficient ring of c (integers for integer
c, rationals otherwise, residues for modular sweeps).  The q^n coefficient of
E_k/(j-X) as a polynomial in X gives P_{k,n}; its reversal gives Q_n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .modforms import delta, dim_sk, eisenstein, g_k, hecke, j_invariant
from .qseries import (
    POLY,
    QQ,
    ZZ,
    PadicRing,
    Poly,
    Ring,
    TruncatedSeries,
)

WEIGHTS = (4, 6, 8, 10, 14)


class GVanishesAtPole(Exception):
    pass


@dataclass(frozen=True)
class MeromorphicForm:
    """E_k/(j-c)^r (or g/(j-c)^r) together with its defining data."""

    weight: int
    pole: object  # pole location c, exact
    order: int
    series: TruncatedSeries
    numerator: str = "E_k"

    def coeff(self, n):
        return self.series.coeff(n)


def _coerce_pole(c):
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    raise TypeError("pole location must be an exact integer or Fraction")


def pole_denominator(c, N: int, ring: Ring = ZZ) -> TruncatedSeries:
    """(j - c) * Delta = E_4^3 - c Delta over the requested ring."""
    E4 = eisenstein(4, N, ring).series
    D = delta(N, ring).series
    if isinstance(ring, PadicRing) and isinstance(c, int):
        c = c % (ring.p**ring.N)
    return E4**3 - D.scale(c)


_DENOM_INV_MEMO: dict = {}
_DENOM_LOCK = __import__("threading").Lock()


def _pole_denominator_inverse(c, N: int, ring: Ring) -> TruncatedSeries:
    """Memoized (E_4^3 - c Delta)^-1; shared across weights and pole orders."""
    key = (c, N, ring.tag)
    with _DENOM_LOCK:
        hit = _DENOM_INV_MEMO.get(key)
    if hit is not None:
        return hit
    inv = pole_denominator(c, N, ring).invert()
    with _DENOM_LOCK:
        if len(_DENOM_INV_MEMO) > 256:
            _DENOM_INV_MEMO.clear()
        _DENOM_INV_MEMO[key] = inv
    return inv


def f_series(k: int, c, r: int, N: int, ring: Ring = ZZ) -> MeromorphicForm:
    """Exact expansion of E_k/(j-c)^r to precision N.

    A non-integral rational c promotes the ring to QQ; over a PadicRing the
    denominator of c must be a unit mod p.
    """
    if k not in WEIGHTS:
        raise ValueError(f"k must be in {WEIGHTS}")
    if r < 1:
        raise ValueError("pole order must be >= 1")
    c = _coerce_pole(c)
    eff_ring = ring
    if isinstance(c, Fraction):
        if isinstance(ring, PadicRing):
            m = ring.p**ring.N
            c = c.numerator * pow(c.denominator, -1, m) % m
        else:
            eff_ring = QQ
    work = N + r + 2
    Binv = _pole_denominator_inverse(c, work, eff_ring)
    Ek = eisenstein(k, work, eff_ring).series
    D = delta(work, eff_ring).series
    series = (Ek * D**r * Binv**r).truncate(N)
    return MeromorphicForm(k, c, r, series)


def g_over_pole(g: TruncatedSeries, c, r: int, N: int) -> TruncatedSeries:
    """g/(j-c)^r for an arbitrary level-1 numerator series g."""
    c = _coerce_pole(c)
    eff_ring = QQ if isinstance(c, Fraction) or g.ring == QQ else g.ring
    if g.ring == ZZ and eff_ring == QQ:
        g = g.to_rational()
    work = N + r + 2 + max(0, -g.valuation)
    B = pole_denominator(c, work, eff_ring)
    D = delta(work, eff_ring).series
    return (g * D**r * B.invert() ** r).truncate(N)


# ---------------------------------------------------------------------------
# P_{k,n}(X) and Q_n(X)


from functools import lru_cache


@lru_cache(maxsize=32)
def p_poly_series(k: int, N: int) -> TruncatedSeries:
    """E_k/(j-X) as a series with polynomial coefficients: sum P_{k,n}(X) q^n."""
    if k not in WEIGHTS:
        raise ValueError(f"k must be in {WEIGHTS}")
    work = N + 3
    E4 = eisenstein(4, work, ZZ).series
    D = delta(work, ZZ).series
    Ek = eisenstein(k, work, ZZ).series
    to_poly = lambda s: s.map_coeffs(Poly.const, POLY)
    B = to_poly(E4**3) - to_poly(D).scale(Poly.x())
    return (to_poly(Ek * D) * B.invert()).truncate(N)


def p_poly(k: int, n: int) -> Poly:
    """P_{k,n}: integer polynomial of degree n-1 with a_n(F_{k,c}) = P_{k,n}(c)."""
    ser = p_poly_series(k, 1 << (n - 1).bit_length() if n > 1 else 1)
    poly = ser.coeff(n)
    out = []
    for c in poly.coeffs:
        c = Fraction(c)
        if c.denominator != 1:
            raise RuntimeError(f"P_{{{k},{n}}} has a non-integer coefficient {c}")
        out.append(c.numerator)
    return Poly(out)


def q_poly(n: int) -> Poly:
    """Q_n(X) = X^{n-1} P_{4,n}(X^{-1})."""
    p = p_poly(4, n)
    rev = [0] * n
    for i, c in enumerate(p.coeffs):
        rev[n - 1 - i] = c
    return Poly(rev)


# ---------------------------------------------------------------------------
# dual basis forms and the section-5 congruences


def dual_basis_form(k: int, n: int, N: int) -> TruncatedSeries:
    """g_{2-k,n} = n^{k-1} (E_{14-k}/Delta)|T_{n,2-k}; integer coefficients."""
    if k not in WEIGHTS:
        raise ValueError(f"k must be in {WEIGHTS}")
    base = g_k(2 - k, N * n + 2).series
    lifted = hecke(base, n, 2 - k).scale(Fraction(n) ** (k - 1))
    return lifted.truncate(N).to_integer()


def _mod_p(f: TruncatedSeries, p: int) -> TruncatedSeries:
    """Integer series mapped into the fast mod-p ring."""
    R = PadicRing(p, 1)
    return TruncatedSeries(R, f.valuation, [c % p for c in f.coeffs], f.precision)


def _poly_in_j_mod_p(poly: Poly, p: int, N: int) -> TruncatedSeries:
    """poly(j) mod p as a q-series to precision N (Horner on the j-series)."""
    deg = max(poly.degree(), 0)
    R = PadicRing(p, 1)
    jser = _mod_p(j_invariant(N + deg, ZZ).series, p)
    acc = TruncatedSeries.zero(R, N + deg)
    for c in reversed(poly.coeffs):
        acc = (acc * jser).truncate(N + deg)
        cc = int(Fraction(c)) % p
        if cc:
            acc = acc + TruncatedSeries(R, 0, [cc], acc.precision)
    return acc.truncate(N)


def frobenius_poly_congruence_check(k: int, p: int, n: int, N: int) -> bool:
    """Frobenius-compatibility of the coefficient polynomials mod p:
    P_{k,np}(j) = g_{2-k,n}^p / g_{2-k} as q-series, and
    P_{k,np}(j) = P_{k,p}(j) P_{k,n}(j)^p as polynomials."""
    P_np = p_poly(k, n * p)
    P_p = p_poly(k, p)
    P_n = p_poly(k, n)
    window = N + n * p + 4
    lhs = _poly_in_j_mod_p(P_np, p, N)
    g = _mod_p(g_k(2 - k, window).series, p)
    gn = _mod_p(dual_basis_form(k, n, window), p)
    rhs = ((gn**p) * g.invert()).truncate(N)
    if lhs != rhs:
        return False
    prod = (P_p * P_n**p).mod_int(p)
    return prod == P_np.mod_int(p)


def prime_power_congruence_check(k: int, p: int, l: int, N: int = 40) -> bool:
    """P_{k,p^l}(j) = g_{2-k}^{p^l-1} mod p as q-series (prime-power case)."""
    q = p**l
    lhs = _poly_in_j_mod_p(p_poly(k, q), p, N)
    window = N + q + 4
    g = _mod_p(g_k(2 - k, window).series, p)
    # Frobenius escape: g^{p^l} = g(q^{p^l}) mod p
    rhs = (g.v_p(q) * g.invert()).truncate(N)
    return lhs == rhs


_WEIGHT_REDUCTION_EXPONENTS = {6: (0, 1), 8: (1, 1), 10: (1, 2), 14: (2, 3)}


def weight_reduction_check(k: int, p: int, l: int) -> bool:
    """Reduction to weight 4:
    P_{4,p^l}(j)^{(k-2)/2} = (j^a (j-1728)^b)^{p^l-1} P_{k,p^l}(j) mod p."""
    if k not in _WEIGHT_REDUCTION_EXPONENTS:
        raise ValueError("k must be in {6,8,10,14}")
    a, b = _WEIGHT_REDUCTION_EXPONENTS[k]
    q = p**l
    lhs = _pow_mod_poly(p_poly(4, q), (k - 2) // 2, p)
    X = Poly.x()
    factor = _pow_mod_poly(X**a * (X - 1728) ** b, q - 1, p)
    rhs = (factor * p_poly(k, q)).mod_int(p)
    return lhs == rhs


def _pow_mod_poly(poly: Poly, e: int, p: int) -> Poly:
    result = Poly([1])
    base = poly.mod_int(p)
    while e:
        if e & 1:
            result = (result * base).mod_int(p)
        e >>= 1
        if e:
            base = (base * base).mod_int(p)
    return result


# ---------------------------------------------------------------------------
# decomposition of f/(j-c)^r into the span of g/(j-c)^i plus a cusp form


def to_j_polynomial(f: TruncatedSeries, k: int) -> Poly:
    """Express a holomorphic weight-k form as E_{k'} Delta^l * P(j); return P."""
    if k % 2 or k < 0:
        raise ValueError("k must be even and >= 0")
    kp = k % 12
    l = k // 12
    if kp == 2:
        kp, l = 14, l - 1
    if l < 0:
        raise ValueError("no holomorphic base at this weight")
    need = 2 * l + 3
    if f.precision < need:
        raise ValueError("need more precision to extract the j-polynomial")
    base = g_k(k, need).series.to_rational()
    phi = f.truncate(need).to_rational() * base.invert()  # valuation >= -l
    jser = j_invariant(phi.precision + l + 1, QQ).series
    coeffs = [Fraction(0)] * (l + 1)
    for d in range(l, 0, -1):
        c = phi.coeff(-d)
        coeffs[d] = c
        if c:
            phi = phi - (jser**d).scale(c).truncate(phi.precision)
    coeffs[0] = phi.coeff(0)
    phi = phi - TruncatedSeries.one(QQ, phi.precision).scale(coeffs[0])
    if not phi.is_zero():
        raise ValueError("input is not E_{k'} Delta^l * P(j): remainder survives")
    return Poly(coeffs)


def decompose_lemma72(f, g, c, r: int, k: int, N: int = 40):
    """f/(j-c)^r = sum_i lambda_i g/(j-c)^i + cusp form, by the j-polynomial
    recursion.

    f and g are holomorphic weight-k series.  Returns ([lambda_1..lambda_r],
    cusp_series).  Raises GVanishesAtPole when g's j-polynomial vanishes at c.
    """
    c = _coerce_pole(c)
    f = f.to_rational() if f.ring == ZZ else f
    g = g.to_rational() if g.ring == ZZ else g
    Pg = to_j_polynomial(g, k)
    gc = Pg(Fraction(c))
    if gc == 0:
        raise GVanishesAtPole(f"g vanishes at the pole j = {c}")
    work = max(N, 2 * (k // 12) + 3) + 2 * r + 2
    if f.precision < work or g.precision < work:
        raise ValueError(f"need precision >= {work}")
    jser = j_invariant(work + 2, QQ).series
    jc_inv = (jser - TruncatedSeries.one(QQ, jser.precision).scale(Fraction(c))).invert()
    lambdas = [Fraction(0)] * (r + 1)
    current = f.truncate(work)
    for i in range(r, 0, -1):
        Pf = to_j_polynomial(current, k)
        lam = Pf(Fraction(c)) / gc
        lambdas[i] = lam
        current = ((current - g.truncate(current.precision).scale(lam)) * jc_inv).truncate(
            current.precision - 2
        )
    return lambdas[1:], current.truncate(min(N, current.precision))
