"""Exact number kernels.

Arbitrary-precision integers are Python ints, rationals are
``fractions.Fraction`` (always reduced, positive denominator).  On top of
those this module provides quadratic integers in an order O_D, bounded
precision p-adic residues, Kronecker symbols, Bernoulli numbers (ordinary
and twisted by a real character), Cornacchia splitting of rational primes,
Hensel lifting of unit roots, ideal valuations, and rational reconstruction
from high precision approximations.

Everything here is exact; no floating point enters any arithmetic path.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import gmpy2


class NotSplit(Exception):
    """Raised when a prime does not split in the requested order."""


class SupersingularInput(Exception):
    """Raised when a unit root is requested for p | a_p."""


class PrecisionExhausted(Exception):
    """Raised when a valuation meets or exceeds the working precision."""


class NoConvergent(Exception):
    """Raised when no admissible rational lies in the given interval."""


class RamifiedPrime(Exception):
    """Raised for p | D where a split/inert dichotomy was expected."""


def kronecker(a: int, n: int) -> int:
    """Full Kronecker symbol (a/n), multiplicative in both arguments."""
    return int(gmpy2.kronecker(a, n))


def is_prime(n: int) -> bool:
    return bool(gmpy2.is_prime(n))


def primes_in(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi."""
    return [p for p in range(max(lo, 2), hi + 1) if is_prime(p)]


def valuation(n: int, p: int) -> int:
    """v_p(n) for a nonzero integer n; raises on n == 0."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    # peel p^(2^j) blocks so huge inputs need few bigint divisions
    pk, step = p, 1
    while True:
        q, r = divmod(n, pk)
        if r:
            break
        n, v = q, v + step
        if pk * pk <= n:
            pk, step = pk * pk, step * 2
    while step > 1:
        pk, step = isqrt(pk), step // 2
        q, r = divmod(n, pk)
        if not r:
            n, v = q, v + step
    return v


def fraction_valuation(x: Fraction | int, p: int) -> int:
    if isinstance(x, int):
        return valuation(x, p)
    if x == 0:
        raise ValueError("valuation of 0 is infinite")
    return valuation(x.numerator, p) - valuation(x.denominator, p)


def moebius(n: int) -> int:
    if n < 1:
        raise ValueError("moebius needs n >= 1")
    res = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            res = -res
        d += 1
    if n > 1:
        res = -res
    return res


def divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


# ---------------------------------------------------------------------------
# quadratic integers


@dataclass(frozen=True)
class QuadraticInteger:
    """Element x + y*omega of the order O_D, omega = (D + sqrt(D))/2.

    D must be a discriminant (0 or 1 mod 4).  Arithmetic is exact and
    norm-multiplicative.
    """

    D: int
    x: int
    y: int

    def __post_init__(self):
        if self.D % 4 not in (0, 1):
            raise ValueError("D must be = 0,1 mod 4")

    def __add__(self, other):
        other = self._coerce(other)
        return QuadraticInteger(self.D, self.x + other.x, self.y + other.y)

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        other = self._coerce(other)
        return QuadraticInteger(self.D, self.x - other.x, self.y - other.y)

    def __rsub__(self, other):
        return self._coerce(other).__sub__(self)

    def __neg__(self):
        return QuadraticInteger(self.D, -self.x, -self.y)

    def __mul__(self, other):
        other = self._coerce(other)
        D = self.D
        # omega^2 = D*omega - (D^2-D)/4
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        c = y1 * y2
        return QuadraticInteger(
            D, x1 * x2 - c * ((D * D - D) // 4), x1 * y2 + y1 * x2 + c * D
        )

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers leave the order")
        result = QuadraticInteger(self.D, 1, 0)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def _coerce(self, other):
        if isinstance(other, QuadraticInteger):
            if other.D != self.D:
                raise ValueError("mixed discriminants")
            return other
        if isinstance(other, int):
            return QuadraticInteger(self.D, other, 0)
        return NotImplemented

    def conjugate(self) -> "QuadraticInteger":
        # conj(omega) = D - omega
        return QuadraticInteger(self.D, self.x + self.y * self.D, -self.y)

    def norm(self) -> int:
        tx = 2 * self.x + self.y * self.D
        return (tx * tx - self.D * self.y * self.y) // 4

    def trace(self) -> int:
        return 2 * self.x + self.y * self.D

    def is_rational(self) -> bool:
        return self.y == 0

    def __repr__(self):
        return f"QuadraticInteger(D={self.D}, {self.x} + {self.y}*w)"


def cornacchia_split(p: int, D: int) -> QuadraticInteger:
    """Return pi in O_D with N(pi) = p, for a prime p with (D/p) = 1.

    Desk scale: solves x^2 + |D| y^2 = 4p by ascending search on y, which is
    deterministic (smallest y >= 0, then x > 0).
    """
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError("D must be a negative discriminant")
    if kronecker(D, p) != 1:
        raise NotSplit(f"({D}/{p}) = {kronecker(D, p)}, p does not split")
    target = 4 * p
    y = 0
    while D * y * y + target >= 0:
        rem = target + D * y * y
        x = isqrt(rem)
        if x * x == rem and (x - y * D) % 2 == 0:
            # pi = (x + y*sqrt(D))/2 = (x - y*D)/2 + y*omega
            return QuadraticInteger(D, (x - y * D) // 2, y)
        y += 1
    raise NotSplit(f"no representation 4*{p} = x^2 + {-D} y^2")


# ---------------------------------------------------------------------------
# p-adic approximations


@dataclass(frozen=True)
class PadicApprox:
    """Residue in Z/p^N, tracking the precision exponent N.

    Arithmetic carries the minimum precision of the operands and never
    silently extends it.
    """

    p: int
    N: int
    residue: int

    def __post_init__(self):
        object.__setattr__(self, "residue", self.residue % self.p**self.N)

    @property
    def modulus(self) -> int:
        return self.p**self.N

    def _coerce(self, other):
        if isinstance(other, PadicApprox):
            if other.p != self.p:
                raise ValueError("mixed primes")
            return other
        if isinstance(other, int):
            return PadicApprox(self.p, self.N, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        N = min(self.N, other.N)
        return PadicApprox(self.p, N, self.residue + other.residue)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        N = min(self.N, other.N)
        return PadicApprox(self.p, N, self.residue - other.residue)

    def __rsub__(self, other):
        return self._coerce(other).__sub__(self)

    def __neg__(self):
        return PadicApprox(self.p, self.N, -self.residue)

    def __mul__(self, other):
        other = self._coerce(other)
        N = min(self.N, other.N)
        return PadicApprox(self.p, N, self.residue * other.residue)

    __rmul__ = __mul__

    def inverse(self) -> "PadicApprox":
        if self.residue % self.p == 0:
            raise ZeroDivisionError("not a p-adic unit")
        return PadicApprox(self.p, self.N, pow(self.residue, -1, self.modulus))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return PadicApprox(self.p, self.N, pow(self.residue, e, self.modulus))

    def unit_valuation(self) -> int:
        """Exact v_p, or PrecisionExhausted when it is >= N."""
        if self.residue == 0:
            raise PrecisionExhausted(f"valuation >= {self.N}")
        return valuation(self.residue, self.p)

    def __repr__(self):
        return f"{self.residue} (mod {self.p}^{self.N})"


def unit_root(ap: int, p: int, N: int) -> PadicApprox:
    """The p-adic unit root of X^2 - ap X + p, to precision p^N.

    Hensel iteration from u = ap (mod p); requires p not dividing ap.
    """
    if ap % p == 0:
        raise SupersingularInput(f"p = {p} divides a_p = {ap}")
    u = ap % p
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        mod = p**prec
        # Newton step for f(u) = u^2 - ap u + p, f'(u) = 2u - ap (a unit)
        fu = (u * u - ap * u + p) % mod
        dfu = (2 * u - ap) % mod
        u = (u - fu * pow(dfu, -1, mod)) % mod
    return PadicApprox(p, N, u)


def padic_sqrt(a: int, p: int, N: int, root_mod_p: int | None = None) -> int:
    """A square root of a mod p^N (p odd, p not dividing a).

    If root_mod_p is given it selects the branch; otherwise the smaller
    residue mod p is used, fixing a deterministic choice.
    """
    if p == 2:
        raise ValueError("p must be odd")
    a_red = a % p
    if a_red == 0:
        raise ValueError("a must be a unit mod p")
    if root_mod_p is None:
        r = _sqrt_mod_p(a_red, p)
        root_mod_p = min(r, p - r)
    u = root_mod_p % p
    if (u * u - a) % p != 0:
        raise ValueError("root_mod_p is not a square root of a mod p")
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        mod = p**prec
        fu = (u * u - a) % mod
        u = (u - fu * pow(2 * u, -1, mod)) % mod
    return u % p**N


def _sqrt_mod_p(a: int, p: int) -> int:
    """Tonelli-Shanks square root mod an odd prime."""
    if pow(a, (p - 1) // 2, p) != 1:
        raise ValueError(f"{a} is not a QR mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # write p-1 = 2^s * t
    t, s = p - 1, 0
    while t % 2 == 0:
        t //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, u, r = s, pow(z, t, p), pow(a, t, p), pow(a, (t + 1) // 2, p)
    while u != 1:
        i, uu = 0, u
        while uu != 1:
            uu = uu * uu % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        u, r = u * c % p, r * b % p
    return r


def ideal_valuation(x: QuadraticInteger, p: int, side: str, N: int = 64) -> int:
    """Valuation of x at the prime above p on the given side ('pi'/'pibar').

    The pi-side embedding sends sqrt(D) to the p-adic root under which the
    canonical Cornacchia generator pi maps to a non-unit; the pibar side uses
    the other root.  This orientation is fixed once so reports reproduce.
    """
    if side not in ("pi", "pibar"):
        raise ValueError("side must be 'pi' or 'pibar'")
    D = x.D
    if kronecker(D, p) != 1:
        raise NotSplit(f"({D}/{p}) != 1")
    pi = cornacchia_split(p, D)
    # root z of z^2 = D mod p with pi = (t + y z)/2 = 0 mod p, t = trace(pi)
    z0 = (-pi.trace() * pow(pi.y, -1, p)) % p
    if side == "pibar":
        z0 = (-z0) % p
    z = padic_sqrt(D, p, N, root_mod_p=z0)
    mod = p**N
    # x + y*omega maps to x + y (D+z)/2
    image = (x.x + x.y * (D + z) * pow(2, -1, mod)) % mod
    if image == 0:
        raise PrecisionExhausted(f"valuation >= {N}")
    return valuation(image, p)


# ---------------------------------------------------------------------------
# Bernoulli numbers and L-values

_BERNOULLI_CACHE: list[Fraction] = [Fraction(1)]
_BERNOULLI_LOCK = threading.Lock()


def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2, by the memoized ascending recurrence."""
    if n < 0:
        raise ValueError("n must be >= 0")
    with _BERNOULLI_LOCK:
        while len(_BERNOULLI_CACHE) <= n:
            m = len(_BERNOULLI_CACHE)
            # sum_{k=0}^{m} C(m+1,k) B_k = 0
            acc = Fraction(0)
            binom = 1  # C(m+1, 0)
            for k in range(m):
                acc += binom * _BERNOULLI_CACHE[k]
                binom = binom * (m + 1 - k) // (k + 1)
            _BERNOULLI_CACHE.append(-acc / (m + 1))
        return _BERNOULLI_CACHE[n]


def _bernoulli_polynomial(n: int, x: Fraction) -> Fraction:
    total = Fraction(0)
    binom = 1
    for k in range(n + 1):
        total += binom * bernoulli(k) * x ** (n - k)
        binom = binom * (n - k) // (k + 1)
    return total


def generalized_bernoulli(n: int, d0: int) -> Fraction:
    """B_{n,chi} for the Kronecker character chi = (d0/.) of modulus |d0|."""
    if d0 == 1:
        return bernoulli(n) if n != 1 else -bernoulli(1)
    f = abs(d0)
    total = Fraction(0)
    for a in range(1, f + 1):
        chi = kronecker(d0, a)
        if chi:
            total += chi * _bernoulli_polynomial(n, Fraction(a, f))
    return Fraction(f) ** (n - 1) * total


def zeta_neg(s: int) -> Fraction:
    """zeta(1-s) = -B_s/s for s >= 1."""
    if s < 1:
        raise ValueError("s must be >= 1")
    return -bernoulli(s) / s


def dirichlet_l_neg(s: int, d0: int) -> Fraction:
    """L(1-s, (d0/.)) = -B_{s,chi}/s."""
    if s < 1:
        raise ValueError("s must be >= 1")
    return -generalized_bernoulli(s, d0) / s


# ---------------------------------------------------------------------------
# rational reconstruction


def simplest_in_interval(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational with smallest denominator in [lo, hi]."""
    if lo > hi:
        raise ValueError("empty interval")
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_in_interval(-hi, -lo)
    # 0 < lo <= hi: continued fraction walk
    p0, q0, p1, q1 = 1, 0, 0, 1  # accumulated Moebius transform
    while True:
        a = lo.numerator // lo.denominator
        a_ceil = a if lo == a else a + 1
        if a_ceil <= hi:  # an integer tail is admissible: done
            return Fraction(p0 * a_ceil + p1, q0 * a_ceil + q1)
        p0, p1 = p0 * a + p1, p0
        q0, q1 = q0 * a + q1, q0
        lo, hi = 1 / (hi - a), 1 / (lo - a)


def rational_reconstruct(x, radius, denominator_bound: int) -> Fraction:
    """The unique rational within |x - r| <= radius with denominator <= bound.

    x and radius may be Fractions, ints, or exact dyadic floats/mpf values.
    Raises NoConvergent when the simplest rational in the interval exceeds
    the denominator bound.
    """
    x = _to_fraction(x)
    radius = _to_fraction(radius)
    if radius < 0:
        raise ValueError("radius must be >= 0")
    best = simplest_in_interval(x - radius, x + radius)
    if best.denominator > denominator_bound:
        raise NoConvergent(
            f"no rational with denominator <= {denominator_bound} within radius"
        )
    return best


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    # mpmath.mpf is dyadic: (sign, man, exp, bc) is exact
    mpf_tuple = getattr(x, "_mpf_", None)
    if mpf_tuple is not None:
        sign, man, exp, _ = mpf_tuple
        man, exp = int(man), int(exp)  # mantissa may be a gmpy2 mpz
        man = -man if sign else man
        return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)
    try:
        num, den = x.as_integer_ratio()
        return Fraction(num, den)
    except AttributeError:
        raise TypeError(f"cannot convert {type(x)} to Fraction")
