"""Truncated hypergeometric sums and the classical identities behind them.

The congruence checks stay square-root free: identities involving fourth or
square roots of Eisenstein series are verified after raising both sides to
the matching power.  Truncated sums mod p are accumulated with explicit
p-valuation bookkeeping so no factorial is ever formed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .elliptic import BadReduction, EllipticCurve, ap
from .exactnum import fraction_valuation, valuation
from .meromorphic import f_series
from .modforms import delta, eisenstein, g_k, j_invariant
from .qseries import QQ, TruncatedSeries


class LowerParamPole(Exception):
    pass


class BadValuation(Exception):
    pass


@dataclass(frozen=True)
class HypergeometricDatum:
    upper: tuple
    lower: tuple

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(Fraction(a) for a in self.upper))
        object.__setattr__(self, "lower", tuple(Fraction(b) for b in self.lower))


DATUM_362 = HypergeometricDatum(
    (Fraction(1, 2), Fraction(1, 6), Fraction(5, 6)), (Fraction(1), Fraction(1))
)


def truncated_pfq(datum: HypergeometricDatum, z, r: int):
    """sum_{m=0}^{r} prod (alpha_i)_m / prod (beta_j)_m * z^m / m!, exact."""
    if r < 0:
        raise ValueError("truncation index must be >= 0")
    for b in datum.lower:
        if b.denominator == 1 and b <= 0 and -b < r:
            raise LowerParamPole(f"lower parameter {b} pole within range")
    total = Fraction(0) * z + 1  # promotes to the ring of z
    term = total
    for m in range(1, r + 1):
        num = Fraction(1)
        for a in datum.upper:
            num *= a + m - 1
        den = Fraction(m)
        for b in datum.lower:
            den *= b + m - 1
        term = term * z * (num / den)
        total = total + term
    return total


def factorial_form_term(m: int) -> int:
    """(6m)! / (m!^3 (3m)!), the integer coefficient of the (1/2,1/6,5/6) datum."""
    from math import factorial

    return factorial(6 * m) // (factorial(m) ** 3 * factorial(3 * m))


def _factorial_term_mod(p: int, e: int, rmax: int):
    """Iterator of (m, valuation, unit mod p^e) for (6m)!/(m!^3 (3m)!)."""
    mod = p**e
    val, unit = 0, 1

    def mul_factor(n, vv, uu):
        while n % p == 0:
            n //= p
            vv += 1
        return vv, uu * n % mod

    def div_factor(n, vv, uu):
        while n % p == 0:
            n //= p
            vv -= 1
        return vv, uu * pow(n, -1, mod) % mod

    yield 0, 0, 1
    for m in range(1, rmax + 1):
        for i in range(6 * m - 5, 6 * m + 1):
            val, unit = mul_factor(i, val, unit)
        for _ in range(3):
            val, unit = div_factor(m, val, unit)
        for i in range(3 * m - 2, 3 * m + 1):
            val, unit = div_factor(i, val, unit)
        yield m, val, unit


def truncated_factorial_sum_mod(c_inv: int, p: int, r: int) -> int:
    """sum_{m=0}^{r} (6m)!/(m!^3 (3m)!) c^{-m} mod p, with c_inv = c^{-1} mod p."""
    total = 0
    cpow = 1
    for m, val, unit in _factorial_term_mod(p, 1, r):
        if val == 0:
            total = (total + unit * cpow) % p
        elif val < 0:
            raise ArithmeticError("negative valuation: term not p-integral")
        cpow = cpow * c_inv % p
    return total


_F4C_MEMO: dict = {}


def _f4c_series(c: Fraction, N: int):
    """Memoized F_{4,c} expansion, bucketed so a c-sweep builds each c once."""
    bucket = 64
    while bucket < N:
        bucket *= 2
    key = (c, bucket)
    ser = _F4C_MEMO.get(key)
    if ser is None:
        ser = f_series(4, c, 1, bucket).series
        if len(_F4C_MEMO) > 32:
            _F4C_MEMO.clear()
        _F4C_MEMO[key] = ser
    return ser


def theorem52_check(c, p: int, l: int, N: int | None = None) -> dict:
    """a_{p^l}(F_{4,c}) = (c(c-1728))^{(p^l-1)/2} * 3F2-truncation mod p.

    Returns a report cell dict; requires v_p(c) = 0 and p >= 5.
    """
    c = Fraction(c)
    if p < 5:
        raise BadValuation("p must be at least 5")
    if fraction_valuation(c, p) != 0:
        raise BadValuation(f"v_{p}({c}) != 0")
    idx = p**l
    if N is None:
        N = idx
    cp = c.numerator * pow(c.denominator, -1, p) % p
    an = _f4c_series(c, max(N, idx)).coeff(idx)
    lhs = (an if isinstance(an, int) else an.numerator * pow(an.denominator, -1, p)) % p
    pref = pow(cp * (cp - 1728) % p, (idx - 1) // 2, p)
    rhs = pref * truncated_factorial_sum_mod(pow(cp, -1, p), p, idx - 1) % p
    return {
        "c": str(c),
        "p": p,
        "l": l,
        "lhs_mod_p": lhs,
        "rhs_mod_p": rhs,
        "ok": lhs == rhs,
    }


def coefficient_divisibility_check(p: int, l: int) -> bool:
    """p divides (6r)!/(r!^3 (3r)!) for (p^l-1)/6 < r <= p^l-1 (p coprime to 6)."""
    if p in (2, 3):
        raise ValueError("p must be coprime to 6")
    top = p**l - 1
    lo = top // 6  # range is open at (p^l-1)/6
    for r in range(lo + 1, top + 1):
        value = factorial_form_term(r)
        if value % p:
            return False
    return True


# ---------------------------------------------------------------------------
# Fricke-Klein and Clausen identities


def _compose(outer_coeffs, inner: TruncatedSeries, N: int) -> TruncatedSeries:
    """sum_m outer[m] * inner^m to precision N; inner must have valuation >= 1."""
    if not inner.is_zero() and inner.valuation < 1:
        raise ValueError("composition needs a positive-valuation inner series")
    acc = TruncatedSeries.zero(inner.ring, N)
    for cm in reversed(outer_coeffs):
        acc = (acc * inner).truncate(N)
        if cm:
            one = TruncatedSeries.one(inner.ring, N)
            acc = acc + one.scale(cm)
    return acc


def fricke_clausen_check(N: int) -> bool:
    """Verify, as exact q-series identities to precision N:

    (2F1(1/12,5/12;1;1728/j))^4 = E_4,
    Clausen: (2F1(1/12,5/12;1;t))^2 = 3F2(1/2,1/6,5/6;1,1;t) as t-series,
    and, squared to avoid the root: (E_10/Delta)^2 3F2(...;1728/j)^2 = j(j-1728).
    """
    M = N + 2  # number of t-coefficients carried through the composition
    # 2F1(1/12, 5/12; 1; 1728 t) coefficients
    f21 = [Fraction(1)]
    for m in range(1, M + 1):
        prev = f21[-1]
        num = (Fraction(1, 12) + m - 1) * (Fraction(5, 12) + m - 1) * 1728
        f21.append(prev * num / (m * m))
    # 3F2(1/2,1/6,5/6;1,1;1728 t) coefficients = (6m)!/(m!^3 (3m)!)
    f32 = [Fraction(factorial_form_term(m)) for m in range(M + 1)]
    # Clausen in the formal variable: (sum f21 t^m)^2 = sum f32 t^m
    sq = [Fraction(0)] * (M + 1)
    for i, a in enumerate(f21):
        for j in range(0, M + 1 - i):
            sq[i + j] += a * f21[j]
    if sq != f32[: M + 1]:
        return False
    # alpha = 1/j = Delta/E_4^3, an integer series of valuation 1
    E4 = eisenstein(4, N + 4, QQ).series
    D = delta(N + 4, QQ).series
    alpha = (D * (E4**3).invert()).truncate(N + 2)
    lhs = _compose(f21, alpha, N) ** 4
    if lhs.truncate(N) != E4.truncate(N):
        return False
    # E_10/Delta = (j(j-1728))^{1/2} 3F2(...)^{-1}: compare squares
    g2 = g_k(-2, N + 4, QQ).series  # E_10/Delta
    B = _compose(f32, alpha, N + 2)
    lhs54 = ((g2**2).truncate(N) * (B**2).truncate(N + 2)).truncate(N - 2)
    jser = j_invariant(N + 4, QQ).series
    rhs54 = (jser * (jser - TruncatedSeries.one(QQ, jser.precision).scale(1728))).truncate(
        lhs54.precision
    )
    return lhs54 == rhs54.truncate(lhs54.precision)


# ---------------------------------------------------------------------------
# the lambda-curve congruence (rational lambda)


def lambda_curve(lam: Fraction) -> EllipticCurve:
    """Integral model of y^2 + xy = x^3 - lambda/432, via (x,y) -> (u^2 x, u^3 y)."""
    lam = Fraction(lam)
    if lam in (0, 1):
        raise BadReduction("lambda in {0,1} gives a singular curve")
    b = lam.denominator
    u = 6 * b
    # y^2 + u a1' x y = x^3 + u^6 a6: a1 = 6b, a6 = -108 a b^5
    return EllipticCurve(6 * b, 0, 0, 0, -108 * lam.numerator * b**5)


def curve_2f1_check(lam, p: int) -> dict:
    """a_p(C_1) = 2F1(1/6,5/6;1;lambda)_{p-1} mod p for the lambda-curve."""
    lam = Fraction(lam)
    C = lambda_curve(lam)
    if p < 5:
        raise BadReduction("desk check needs p >= 5")
    if fraction_valuation(lam, p) < 0 or C.discriminant % p == 0:
        raise BadReduction(f"bad reduction at {p}")
    a = ap(C, p)
    lamp = lam.numerator * pow(lam.denominator, -1, p) % p
    # truncated 2F1(1/6,5/6;1;lam) mod p: all Pochhammer factors are p-units
    total, term = 1, 1
    inv36 = pow(36, -1, p)
    for m in range(1, p):
        num = (6 * m - 5) * (6 * m - 1) % p
        den = m * m % p
        term = term * num * pow(den, -1, p) % p * inv36 % p * lamp % p
        total = (total + term) % p
    return {"lambda": str(lam), "p": p, "ap_mod_p": a % p, "sum_mod_p": total, "ok": a % p == total}
