"""Level-1 modular form building blocks and Hecke operators.

Generators (E_k, Delta, j, E_2) are produced over a requested coefficient
ring so congruence sweeps can run with residue coefficients while identity
checks stay fully exact.  Hecke operators work in any integer weight,
including the negative weights used by the dual basis g_{2-k,n}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .exactnum import bernoulli, divisors
from .qseries import (
    QQ,
    ZZ,
    PadicRing,
    Ring,
    RingMismatch,
    TruncatedSeries,
)

EISENSTEIN_INTEGER_WEIGHTS = {2: -24, 4: 240, 6: -504, 8: 480, 10: -264, 14: -24}


@dataclass(frozen=True)
class LevelOneForm:
    """A level-1 quasimodular form: series plus weight and E_2-depth."""

    series: TruncatedSeries
    weight: int
    depth: int = 0  # 0 holomorphic/weakly holomorphic, 1 for E_2

    def coeff(self, n):
        return self.series.coeff(n)


@lru_cache(maxsize=None)
def _sigma_list(k: int, N: int) -> tuple:
    out = [0] * (N + 1)
    for d in range(1, N + 1):
        dk = d**k
        for m in range(d, N + 1, d):
            out[m] += dk
    return tuple(out)


def _build(ring: Ring, coeffs, N, valuation=0):
    if isinstance(ring, PadicRing):
        m = ring.p**ring.N
        coeffs = [c % m for c in coeffs]
    return TruncatedSeries(ring, valuation, coeffs, N)


def eisenstein(k: int, N: int, ring: Ring = ZZ) -> LevelOneForm:
    """E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n, normalized a_0 = 1."""
    if k < 2 or k % 2:
        raise ValueError("k must be even and >= 2")
    sig = _sigma_list(k - 1, N)
    if k in EISENSTEIN_INTEGER_WEIGHTS:
        c = EISENSTEIN_INTEGER_WEIGHTS[k]
        coeffs = [1] + [c * s for s in sig[1:]]
        series = _build(ring, coeffs, N)
    else:
        if ring != QQ:
            raise RingMismatch(f"E_{k} has non-integral coefficients; use QQ")
        c = Fraction(-2 * k) / bernoulli(k)
        series = TruncatedSeries(QQ, 0, [Fraction(1)] + [c * s for s in sig[1:]], N)
    return LevelOneForm(series, k, 1 if k == 2 else 0)


def e2(N: int, ring: Ring = ZZ) -> LevelOneForm:
    return eisenstein(2, N, ring)


def delta(N: int, ring: Ring = ZZ) -> LevelOneForm:
    """Delta = (E_4^3 - E_6^2)/1728, computed over Z and mapped into ring."""
    series = _delta_series_int(N)
    if ring == ZZ:
        pass
    elif ring == QQ:
        series = series.to_rational()
    elif isinstance(ring, PadicRing):
        series = _build(ring, series.coeffs, N, series.valuation)
    else:
        raise RingMismatch("delta supports int, rat, padic rings")
    return LevelOneForm(series, 12)


@lru_cache(maxsize=8)
def _delta_series_int(N: int) -> TruncatedSeries:
    E4 = eisenstein(4, N).series
    E6 = eisenstein(6, N).series
    diff = E4 * E4 * E4 - E6 * E6
    return TruncatedSeries(
        ZZ, diff.valuation, [c // 1728 for c in diff.coeffs], diff.precision
    )


def j_invariant(N: int, ring: Ring = ZZ) -> LevelOneForm:
    """j = E_4^3/Delta = q^-1 + 744 + 196884 q + ...  (precision N)."""
    E4 = eisenstein(4, N + 2, ring).series
    D = delta(N + 2, ring).series
    series = (E4 * E4 * E4 * D.invert()).truncate(N)
    return LevelOneForm(series, 0)


def g_k(k: int, N: int, ring: Ring = ZZ) -> LevelOneForm:
    """g_k = E_{k'} Delta^l with k = 12l + k', k' in {0,4,6,8,10,14}.

    For k <= 0 the power l is negative and the result is weakly holomorphic.
    """
    if k % 2:
        raise ValueError("k must be even")
    kp = k % 12
    l = k // 12
    if kp in (0, 4, 6, 8, 10):
        pass
    elif kp == 2:  # 14 = 12+2: use k' = 14, l -= 1
        kp, l = 14, l - 1
    else:
        raise ValueError(f"no admissible decomposition for k={k}")
    pad = max(0, -l)  # inverse powers shift the reachable precision
    work = N + pad + 2
    base = (
        TruncatedSeries.one(ring, work)
        if kp == 0
        else eisenstein(kp, work, ring).series
    )
    D = delta(work, ring).series
    series = base * D**l if l >= 0 else base * D.invert() ** (-l)
    return LevelOneForm(series.truncate(N), k)


def d_operator(f: TruncatedSeries) -> TruncatedSeries:
    """D = q d/dq on coefficients."""
    coeffs = [
        (f.valuation + i) * c for i, c in enumerate(f.coeffs)
    ]
    return TruncatedSeries(f.ring, f.valuation, coeffs, f.precision)


def hecke(f: TruncatedSeries, m: int, k: int) -> TruncatedSeries:
    """f|T_{m,k} with a_n = sum_{r>0, r|(m,n)} r^{k-1} a_{mn/r^2}(f).

    Works for any integer weight; for k <= 0 the powers r^{k-1} are
    rational, so the output ring is promoted to QQ.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if m == 1:
        return f
    rational_weights = k <= 0
    ring = QQ if rational_weights else f.ring
    if rational_weights and f.ring == ZZ:
        f = f.to_rational()
    elif rational_weights and f.ring != QQ:
        raise RingMismatch("negative-weight Hecke needs an int/rat series")
    prec = f.precision // m
    v_out = f.valuation * m if f.valuation < 0 else -(-f.valuation // m)
    if f.is_zero():
        return TruncatedSeries.zero(ring, prec)
    rpows = {r: Fraction(r) ** (k - 1) if rational_weights else r ** (k - 1)
             for r in divisors(m)}
    coeffs = []
    for n in range(v_out, prec + 1):
        acc = ring.zero()
        g = m if n == 0 else gcd(m, abs(n))
        for r in divisors(m):
            if g % r:
                continue
            idx = m * n // (r * r)
            if idx < f.valuation or m * n % (r * r):
                continue
            if idx > f.precision:
                continue
            acc = acc + rpows[r] * f.coeff(idx)
        coeffs.append(acc)
    return TruncatedSeries(ring, v_out, coeffs, prec)


def _dim_mk(k: int) -> int:
    if k < 0 or k % 2:
        return 0
    return k // 12 + (0 if k % 12 == 2 else 1)


def dim_sk(k: int) -> int:
    d = _dim_mk(k) - 1
    return max(d, 0)


def cusp_basis(k: int, N: int) -> list[TruncatedSeries]:
    """Echelonized basis of S_k(1): a_m(f_i) = delta_{im} for m <= dim."""
    d = dim_sk(k)
    if d == 0:
        return []
    E4 = eisenstein(4, N, QQ).series
    E6 = eisenstein(6, N, QQ).series
    D = delta(N, QQ).series
    monomials = []
    for a in range(1, k // 12 + 1):
        rem = k - 12 * a
        for c in range(rem // 6 + 1):
            if (rem - 6 * c) % 4 == 0:
                b = (rem - 6 * c) // 4
                monomials.append(D**a * E4**b * E6**c)
    # Gauss echelon on the q^1..q^d window
    basis = []
    for pivot in range(1, d + 1):
        cand = None
        for f in monomials:
            if all(f.coeff(i) == 0 for i in range(1, pivot)) and f.coeff(pivot) != 0:
                cand = f
                break
        if cand is None:
            raise RuntimeError(f"cusp basis pivot {pivot} missing at weight {k}")
        cand = cand.scale(1 / Fraction(cand.coeff(pivot)))
        monomials = [
            f - cand.scale(f.coeff(pivot)) for f in monomials if f is not cand
        ]
        basis.append(cand)
    # back-substitute to make a_m(f_i) = delta for all pivots
    for i in range(d - 1, -1, -1):
        for j in range(i + 1, d):
            c = basis[i].coeff(j + 1)
            if c != 0:
                basis[i] = basis[i] - basis[j].scale(c)
    return basis


@lru_cache(maxsize=None)
def cusp_relation(k: int) -> tuple[int, ...]:
    """The minimal-support integral relation annihilating S_k(1) coefficients.

    Supported on m = 1..dim+1, content 1, first entry positive.
    """
    if k < 4 or k % 2:
        raise ValueError("k must be even and >= 4")
    d = dim_sk(k)
    if d == 0:
        return (1,)
    basis = cusp_basis(k, d + 2)
    # a_m(f_i) = delta_{im} for m <= d, so lambda_m = -a_{d+1}(f_m) * lambda_{d+1}
    lam = [-basis[m - 1].coeff(d + 1) for m in range(1, d + 1)] + [Fraction(1)]
    den = 1
    for c in lam:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in lam]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    first = next(c for c in ints if c)
    if first < 0:
        ints = [-c for c in ints]
    return tuple(ints)


def apply_relation(F: TruncatedSeries, lam, k: int) -> TruncatedSeries:
    """F|lambda = sum_m lambda_m F|T_{m,k}."""
    support = [m for m, c in enumerate(lam, start=1) if c]
    if not support:
        raise ValueError("empty relation")
    maxm = max(support)
    if F.precision < maxm:
        raise ValueError("series precision below relation support")
    out = None
    for m in support:
        term = hecke(F, m, k).scale(lam[m - 1])
        out = term if out is None else out + term
    return out


def cusp_relation_from_matrix(rows) -> tuple[int, ...]:
    """Kernel of a d x (d+1) exact matrix, normalized like cusp_relation.

    Independent route for cross-checking cusp_relation in tests.
    """
    rows = [[Fraction(x) for x in row] for row in rows]
    d = len(rows)
    ncols = d + 1
    # Gaussian elimination
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, d) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        rows[r] = [x / rows[r][c] for x in rows[r]]
        for i in range(d):
            if i != r and rows[i][c] != 0:
                fac = rows[i][c]
                rows[i] = [x - fac * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == d:
            break
    free = next(c for c in range(ncols) if c not in pivots)
    sol = [Fraction(0)] * ncols
    sol[free] = Fraction(1)
    for i, c in enumerate(pivots):
        sol[c] = -rows[i][free]
    den = 1
    for x in sol:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in sol]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    first = next(x for x in ints if x)
    if first < 0:
        ints = [-x for x in ints]
    return tuple(ints)
