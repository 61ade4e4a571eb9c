"""Elliptic curves over Q, Frobenius data, and CM theta eigenforms.

Point counting is naive (quadratic-character table over F_p, direct
enumeration over F_4/F_9 and F_p^2 when needed), which is exact and fast at
desk scale p <= 10^4.  Symmetric-power Frobenius characteristic polynomials
are computed in Z[t]/(t^2 - a_p t + p), so all outputs stay in Z.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .exactnum import (
    PadicApprox,
    QuadraticInteger,
    RamifiedPrime,
    cornacchia_split,
    kronecker,
    unit_root,
)
from .qseries import QQ, ZZ, TruncatedSeries


class BadReduction(Exception):
    pass


@dataclass(frozen=True)
class EllipticCurve:
    """Integral Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    label: str = ""

    @property
    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def c4(self) -> int:
        b2, b4, _, _ = self.b_invariants
        return b2 * b2 - 24 * b4

    @property
    def c6(self) -> int:
        b2, b4, b6, _ = self.b_invariants
        return -b2**3 + 36 * b2 * b4 - 216 * b6

    @property
    def j_invariant(self) -> Fraction:
        disc = self.discriminant
        if disc == 0:
            raise ValueError("singular curve")
        return Fraction(self.c4**3, disc)

    def __post_init__(self):
        if self.discriminant == 0:
            raise ValueError("discriminant vanishes: not an elliptic curve")

    def has_good_reduction(self, p: int) -> bool:
        # desk criterion: good iff p does not divide the discriminant of this
        # (assumed close-to-minimal) model; the shipped presets are minimal
        return self.discriminant % p != 0

    def __repr__(self):
        name = self.label or "curve"
        return (
            f"EllipticCurve({name}: y^2+{self.a1}xy+{self.a3}y ="
            f" x^3+{self.a2}x^2+{self.a4}x+{self.a6})"
        )


# CM presets at the three rational special j-values, plus a non-CM companion.
CURVES = {
    "49.a4": EllipticCurve(1, -1, 0, -2, -1, "49.a4"),  # j = -3375, CM by -7
    "32.a3": EllipticCurve(0, 0, 0, -1, 0, "32.a3"),  # y^2 = x^3 - x, j = 1728
    "27.a4": EllipticCurve(0, 0, 1, 0, 0, "27.a4"),  # y^2 + y = x^3, j = 0
    "37.a1": EllipticCurve(0, 0, 1, -1, 0, "37.a1"),  # non-CM, j = 110592/37
}

CM_DISCRIMINANT = {"49.a4": -7, "32.a3": -4, "27.a4": -3}


def curve(name_or_coeffs) -> EllipticCurve:
    if isinstance(name_or_coeffs, EllipticCurve):
        return name_or_coeffs
    if isinstance(name_or_coeffs, str):
        try:
            return CURVES[name_or_coeffs]
        except KeyError:
            raise KeyError(
                f"unknown curve preset {name_or_coeffs!r}; known: {sorted(CURVES)}"
            )
    return EllipticCurve(*name_or_coeffs)


# ---------------------------------------------------------------------------
# point counting


@lru_cache(maxsize=512)
def _qr_table(p: int) -> tuple:
    """chi[x] = Legendre symbol (x/p) for x in [0, p)."""
    chi = [-1] * p
    chi[0] = 0
    for x in range(1, (p + 1) // 2):
        chi[x * x % p] = 1
    return tuple(chi)


def count_points(C: EllipticCurve, p: int) -> int:
    """|C(F_p)| including the point at infinity, by direct counting."""
    if not C.has_good_reduction(p):
        raise BadReduction(f"{C.label or C} has bad reduction at {p}")
    if p < 5:
        count = 1
        for x in range(p):
            for y in range(p):
                lhs = (y * y + C.a1 * x * y + C.a3 * y) % p
                rhs = (x**3 + C.a2 * x * x + C.a4 * x + C.a6) % p
                if lhs == rhs:
                    count += 1
        return count
    # complete the square: (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    b2, b4, b6, _ = C.b_invariants
    chi = _qr_table(p)
    count = p + 1
    for x in range(p):
        rhs = (4 * x**3 + b2 * x * x + 2 * b4 * x + b6) % p
        count += chi[rhs]
    return count


def ap(C, p: int) -> int:
    """Trace of Frobenius a_p = p + 1 - |C(F_p)|."""
    C = curve(C)
    a = p + 1 - count_points(C, p)
    assert a * a <= 4 * p, "Hasse bound violated: counting bug"
    return a


def ap_power(C, p: int, l: int) -> int:
    """alpha^l + beta^l via t_l = a_p t_{l-1} - p t_{l-2}; t_0 = 2."""
    C = curve(C)
    a = ap(C, p)
    t0, t1 = 2, a
    if l == 0:
        return 2
    for _ in range(l - 1):
        t0, t1 = t1, a * t1 - p * t0
    return t1


def _fp2_elements(p: int):
    """F_{p^2} = F_p[t]/(f) for the lexicographically least irreducible monic
    quadratic f = t^2 + u t + v; returns (u, v)."""
    chi = _qr_table(p) if p > 2 else None
    for u in range(p):
        for v in range(p):
            # irreducible iff no root in F_p
            if all((t * t + u * t + v) % p for t in range(p)):
                return u, v
    raise RuntimeError("no irreducible quadratic found")


def count_points_fp2(C: EllipticCurve, p: int) -> int:
    """|C(F_{p^2})| by direct enumeration (desk scale, p <= ~200)."""
    if not C.has_good_reduction(p):
        raise BadReduction(f"bad reduction at {p}")
    u, v = _fp2_elements(p)

    def mul(a, b):
        # (a0 + a1 t)(b0 + b1 t) with t^2 = -u t - v
        c0 = a[0] * b[0]
        c1 = a[0] * b[1] + a[1] * b[0]
        c2 = a[1] * b[1]
        return ((c0 - v * c2) % p, (c1 - u * c2) % p)

    def add(a, b):
        return ((a[0] + b[0]) % p, (a[1] + b[1]) % p)

    consts = {
        name: (val % p, 0)
        for name, val in (
            ("a1", C.a1), ("a2", C.a2), ("a3", C.a3), ("a4", C.a4), ("a6", C.a6),
        )
    }
    count = 1
    for x0 in range(p):
        for x1 in range(p):
            x = (x0, x1)
            x2 = mul(x, x)
            x3 = mul(x2, x)
            rhs = add(add(x3, mul(consts["a2"], x2)), add(mul(consts["a4"], x), consts["a6"]))
            a1x = mul(consts["a1"], x)
            for y0 in range(p):
                for y1 in range(p):
                    y = (y0, y1)
                    lhs = add(mul(y, y), mul(add(a1x, consts["a3"]), y))
                    if lhs == rhs:
                        count += 1
    return count


def reduce_at_quadratic_prime(C, p: int, l: int) -> int:
    """a_p-frak for a degree-l prime: N(p-frak) = p^l, via the recurrence,
    cross-checked by direct F_{p^2} counting for small inert primes."""
    C = curve(C)
    if l not in (1, 2):
        raise ValueError("only degree 1 and 2 primes at desk scale")
    if l == 1:
        return ap(C, p)
    value = ap_power(C, p, 2)
    if p <= 13:
        direct = p * p + 1 - count_points_fp2(C, p)
        assert direct == value, "F_{p^2} count disagrees with the recurrence"
    return value


def count_points_quadratic(coeffs, p: int, inert: bool) -> int:
    """|C(F_q)| for a curve with coefficients in a quadratic order O_D.

    The reduction embeds sqrt(D) as a root of X^2 - D over F_p (split) or
    into F_{p^2} = F_p[t]/(f) (inert).  Desk scale: direct enumeration.
    """
    from .exactnum import _sqrt_mod_p

    D = coeffs[0].D
    if any(c.D != D for c in coeffs):
        raise ValueError("mixed discriminants")
    if not inert:
        z = _sqrt_mod_p(D % p, p)
        omega = (D + z) * pow(2, -1, p) % p
        a1, a2, a3, a4, a6 = ((c.x + c.y * omega) % p for c in coeffs)
        count = 1
        for x in range(p):
            rhs = (x**3 + a2 * x * x + a4 * x + a6) % p
            for y in range(p):
                if (y * y + a1 * x * y + a3 * y) % p == rhs:
                    count += 1
        return count
    u, v = _fp2_elements(p)

    def mul(a, b):
        c0, c1, c2 = a[0] * b[0], a[0] * b[1] + a[1] * b[0], a[1] * b[1]
        return ((c0 - v * c2) % p, (c1 - u * c2) % p)

    def add(a, b):
        return ((a[0] + b[0]) % p, (a[1] + b[1]) % p)

    # sqrt(D) in F_{p^2}: a root of X^2 - D; solve by search (p is small)
    root = None
    for r0 in range(p):
        for r1 in range(p):
            if mul((r0, r1), (r0, r1)) == (D % p, 0):
                root = (r0, r1)
                break
        if root:
            break
    if root is None:
        raise RuntimeError("no square root of D in F_{p^2}: bug")
    inv2 = pow(2, -1, p)
    omega = ((D % p + root[0]) * inv2 % p, root[1] * inv2 % p)
    embedded = [add((c.x % p, 0), mul((c.y % p, 0), omega)) for c in coeffs]
    a1, a2, a3, a4, a6 = embedded
    count = 1
    for x0 in range(p):
        for x1 in range(p):
            x = (x0, x1)
            x2 = mul(x, x)
            rhs = add(add(mul(x2, x), mul(a2, x2)), add(mul(a4, x), a6))
            a1x_a3 = add(mul(a1, x), a3)
            for y0 in range(p):
                for y1 in range(p):
                    y = (y0, y1)
                    if add(mul(y, y), mul(a1x_a3, y)) == rhs:
                        count += 1
    return count


# ---------------------------------------------------------------------------
# symmetric powers and classification


def sym_charpoly(C, p: int, k: int) -> list[int]:
    """Coefficients c_1..c_{k-1} of prod_i (X - alpha^{k-2-i} beta^i).

    X^{k-1} + c_1 X^{k-2} + ... + c_{k-1}; computed in Z[t]/(t^2 - a t + p).
    """
    if k not in (4, 6, 8, 10, 14):
        raise ValueError("k must be in {4,6,8,10,14}")
    C = curve(C)
    a = ap(C, p)

    def qmul(x, y):
        # (x0 + x1 t)(y0 + y1 t), t^2 = a t - p
        c0 = x[0] * y[0]
        c1 = x[0] * y[1] + x[1] * y[0]
        c2 = x[1] * y[1]
        return (c0 - p * c2, c1 + a * c2)

    def qpow(x, e):
        r = (1, 0)
        while e:
            if e & 1:
                r = qmul(r, x)
            e >>= 1
            if e:
                x = qmul(x, x)
        return r

    w = k - 2
    alpha = (0, 1)
    beta = (a, -1)  # beta = a - alpha
    roots = [qmul(qpow(alpha, w - i), qpow(beta, i)) for i in range(w + 1)]
    # expand prod (X - root): coefficients in the order ring
    poly = [(1, 0)]
    for rt in roots:
        nxt = [(0, 0)] * (len(poly) + 1)
        for i, cf in enumerate(poly):
            nxt[i] = (nxt[i][0] + cf[0], nxt[i][1] + cf[1])
            mr = qmul(cf, rt)
            nxt[i + 1] = (nxt[i + 1][0] - mr[0], nxt[i + 1][1] - mr[1])
        poly = nxt
    out = []
    for c0, c1 in poly[1:]:
        assert c1 == 0, "charpoly coefficient not symmetric: bug"
        out.append(c0)
    return out


@dataclass(frozen=True)
class FrobeniusData:
    p: int
    ap: int
    classification: str  # ordinary | supersingular
    unit_root: PadicApprox | None
    sym_coeffs: dict


def classify(C, p: int, k: int = 4, N: int = 20) -> FrobeniusData:
    """Full per-prime record: a_p, ordinary/supersingular, unit root, Sym^k-2."""
    C = curve(C)
    a = ap(C, p)
    if a % p == 0:
        return FrobeniusData(p, a, "supersingular", None, {k: sym_charpoly(C, p, k)})
    return FrobeniusData(
        p, a, "ordinary", unit_root(a, p, N), {k: sym_charpoly(C, p, k)}
    )


# ---------------------------------------------------------------------------
# CM theta eigenforms


def theta_coeff(D: int, w: int, p: int) -> int:
    """a_p of Theta_{w+1,D}: trace(pi^w) for split p, 0 for inert p."""
    if w % 2 or w < 0:
        raise ValueError("w must be a nonnegative even exponent")
    if D % p == 0:
        raise RamifiedPrime(f"{p} divides {D}")
    chi = kronecker(D, p)
    if chi == -1:
        return 0
    if w == 0:
        return 2  # four associates {+-pi, +-pibar}, halved
    pi = cornacchia_split(p, D)
    return (pi**w).trace()


def theta_series(D: int, w: int, N: int) -> TruncatedSeries:
    """Theta_{w+1,D} = (1/2) sum_{alpha in O_D} alpha^w q^{|N(alpha)|}.

    Integer coefficients for even w >= 2; for w = 0 the constant term is 1/2
    and the series is returned over the rationals.
    """
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError("D must be a negative discriminant")
    if w % 2 or w < 0:
        raise ValueError("w must be even and >= 0")
    sums = [QuadraticInteger(D, 0, 0)] * (N + 1)
    # N(x + y omega) = x^2 + D x y + y^2 D(D-1)/4
    q_yy = D * (D - 1) // 4
    ymax = isqrt(4 * N // -D) + 1
    for y in range(-ymax, ymax + 1):
        # norm quadratic in x: minimize over x to bound the range
        # x^2 + D y x + q_yy y^2 <= N
        disc = D * D * y * y - 4 * (q_yy * y * y - N)
        if disc < 0:
            continue
        lo = (-D * y - isqrt(disc)) // 2 - 1
        hi = (-D * y + isqrt(disc)) // 2 + 1
        for x in range(lo, hi + 1):
            if x == 0 and y == 0:
                continue
            nrm = x * x + D * x * y + q_yy * y * y
            if 1 <= nrm <= N:
                sums[nrm] = sums[nrm] + QuadraticInteger(D, x, y) ** w
    coeffs = []
    for nrm in range(1, N + 1):
        s = sums[nrm]
        assert s.y == 0, "lattice sum not conjugation-stable: bug"
        assert s.x % 2 == 0 or w == 0
        coeffs.append(s.x)
    if w == 0:
        ser = TruncatedSeries(
            QQ, 0, [Fraction(1, 2)] + [Fraction(c, 2) for c in coeffs], N
        )
        return ser
    return TruncatedSeries(ZZ, 1, [c // 2 for c in coeffs], N)
