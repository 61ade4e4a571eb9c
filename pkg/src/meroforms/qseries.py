"""Truncated Laurent q-expansions over exact coefficient rings.

A TruncatedSeries stores coefficients a_v .. a_N exactly; everything above
the precision N is unknown, everything below the valuation v is known zero.
Supported rings: Integer (Python int), Rational (Fraction), quadratic
integers of a fixed discriminant, Z/p^N residues, and univariate polynomials
over the rationals.  Integer and rational series multiply through Kronecker
substitution (pack into one big integer, one GMP multiply, unpack), which is
what makes precision-3000 supercongruence sweeps cheap.

No floating point is used anywhere in this module.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd

import gmpy2

from .exactnum import PadicApprox, QuadraticInteger

DEFAULT_PRECISION = 2000
# hard storage cap for any single series (see README); v_p can hit it first
MAX_PRECISION = 2_000_000


class RingMismatch(Exception):
    pass


class NonUnitLeading(Exception):
    pass


class OutOfPrecision(Exception):
    pass


class ZeroSeries(Exception):
    pass


# ---------------------------------------------------------------------------
# coefficient rings


class Ring:
    """Coefficient ring descriptor: element coercion, identity tests, text IO."""

    tag = "?"

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def is_zero(self, x) -> bool:
        return x == self.zero()

    def coerce(self, x):
        return x

    def to_text(self, x) -> str:
        raise NotImplementedError

    def from_text(self, s: str):
        raise NotImplementedError

    def __repr__(self):
        return f"<ring {self.tag}>"

    def __eq__(self, other):
        return isinstance(other, Ring) and self.tag == other.tag

    def __hash__(self):
        return hash(self.tag)


class IntegerRing(Ring):
    tag = "int"

    def zero(self):
        return 0

    def one(self):
        return 1

    def coerce(self, x):
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        raise RingMismatch(f"{x!r} is not an integer")

    def to_text(self, x):
        return str(x)

    def from_text(self, s):
        return int(s)


class RationalRing(Ring):
    tag = "rat"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        raise RingMismatch(f"{x!r} is not rational")

    def to_text(self, x):
        return f"{x.numerator}/{x.denominator}"

    def from_text(self, s):
        num, den = s.split("/")
        return Fraction(int(num), int(den))


class QuadRing(Ring):
    def __init__(self, D: int):
        self.D = D
        self.tag = f"quad:{D}"

    def zero(self):
        return QuadraticInteger(self.D, 0, 0)

    def one(self):
        return QuadraticInteger(self.D, 1, 0)

    def coerce(self, x):
        if isinstance(x, QuadraticInteger):
            if x.D != self.D:
                raise RingMismatch("wrong discriminant")
            return x
        if isinstance(x, int):
            return QuadraticInteger(self.D, x, 0)
        raise RingMismatch(f"{x!r} is not in O_{self.D}")

    def to_text(self, x):
        return f"{x.x},{x.y}"

    def from_text(self, s):
        xs, ys = s.split(",")
        return QuadraticInteger(self.D, int(xs), int(ys))


class PadicRing(Ring):
    def __init__(self, p: int, N: int):
        self.p, self.N = p, N
        self.tag = f"padic:{p},{N}"

    def zero(self):
        return PadicApprox(self.p, self.N, 0)

    def one(self):
        return PadicApprox(self.p, self.N, 1)

    def is_zero(self, x):
        return x.residue == 0

    def coerce(self, x):
        if isinstance(x, PadicApprox):
            if x.p != self.p:
                raise RingMismatch("wrong prime")
            return PadicApprox(self.p, min(self.N, x.N), x.residue)
        if isinstance(x, int):
            return PadicApprox(self.p, self.N, x)
        raise RingMismatch(f"{x!r} is not p-adic")

    def to_text(self, x):
        return str(x.residue)

    def from_text(self, s):
        return PadicApprox(self.p, self.N, int(s))


class Poly:
    """Dense univariate polynomial over Fraction/int with exact degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @classmethod
    def const(cls, c):
        return cls([c])

    @classmethod
    def x(cls):
        return cls([0, 1])

    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly([])
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative polynomial powers are not defined")
        result = Poly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def mod_int(self, m: int) -> "Poly":
        return Poly([c % m for c in self.coeffs])

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        terms = [f"{c}*X^{i}" for i, c in enumerate(self.coeffs) if c]
        return "Poly(" + " + ".join(terms) + ")"


class PolyRing(Ring):
    tag = "polyrat"

    def zero(self):
        return Poly([])

    def one(self):
        return Poly([1])

    def is_zero(self, x):
        return not x

    def coerce(self, x):
        if isinstance(x, Poly):
            return x
        if isinstance(x, (int, Fraction)):
            return Poly.const(x)
        raise RingMismatch(f"{x!r} is not a polynomial")

    def to_text(self, x):
        return ",".join(
            f"{Fraction(c).numerator}/{Fraction(c).denominator}" for c in x.coeffs
        ) or "0/1"

    def from_text(self, s):
        parts = s.split(",")
        out = []
        for part in parts:
            num, den = part.split("/")
            out.append(Fraction(int(num), int(den)))
        return Poly(out)


ZZ = IntegerRing()
QQ = RationalRing()
POLY = PolyRing()


def ring_from_tag(tag: str) -> Ring:
    if tag == "int":
        return ZZ
    if tag == "rat":
        return QQ
    if tag == "polyrat":
        return POLY
    if tag.startswith("quad:"):
        return QuadRing(int(tag[5:]))
    if tag.startswith("padic:"):
        p, N = tag[6:].split(",")
        return PadicRing(int(p), int(N))
    raise ValueError(f"unknown ring tag {tag!r}")


# ---------------------------------------------------------------------------
# Kronecker-substitution convolution for integer sequences


def _pack_signed(coeffs, B):
    pos = [c if c > 0 else 0 for c in coeffs]
    neg = [-c if c < 0 else 0 for c in coeffs]
    val = gmpy2.mpz(0)
    if any(pos):
        val += gmpy2.pack([gmpy2.mpz(c) for c in pos], B)
    if any(neg):
        val -= gmpy2.pack([gmpy2.mpz(c) for c in neg], B)
    return val


def _unpack_signed(val, B, n):
    # shift every balanced digit into [0, 2^B) by adding 2^(B-1) per slot;
    # valid because every true digit satisfies |d| < 2^(B-1)
    ones = ((gmpy2.mpz(1) << (B * n)) - 1) // ((gmpy2.mpz(1) << B) - 1)
    offset = ones << (B - 1)
    shifted = val + offset
    if shifted < 0 or shifted >> (B * n):
        raise OverflowError("packing width too small")
    digits = gmpy2.unpack(shifted, B)
    half = gmpy2.mpz(1) << (B - 1)
    out = [int(d - half) for d in digits]
    out.extend([0] * (n - len(out)))
    return out


def convolve_int(a: list[int], b: list[int], nout: int) -> list[int]:
    """First nout coefficients of the product of integer sequences a, b."""
    if not a or not b:
        return [0] * nout
    a = a[:nout]
    b = b[:nout]
    abits = max(x.bit_length() for x in a) if a else 0
    bbits = max(x.bit_length() for x in b) if b else 0
    if abits == 0 or bbits == 0:
        return [0] * nout
    B = abits + bbits + (min(len(a), len(b))).bit_length() + 2
    n = len(a) + len(b) - 1
    prod = _pack_signed(a, B) * _pack_signed(b, B)
    out = _unpack_signed(prod, B, n)
    if len(out) > nout:
        del out[nout:]
    elif len(out) < nout:
        out.extend([0] * (nout - len(out)))
    return out


def _convolve_generic(a, b, nout, ring):
    zero = ring.zero()
    out = [zero] * nout
    for i, ca in enumerate(a):
        if i >= nout:
            break
        if ring.is_zero(ca):
            continue
        jmax = min(len(b), nout - i)
        for j in range(jmax):
            cb = b[j]
            if not ring.is_zero(cb):
                out[i + j] = out[i + j] + ca * cb
    return out


def _convolve_rat(a, b, nout):
    da = reduce(lambda acc, x: acc * x.denominator // gcd(acc, x.denominator), a, 1)
    db = reduce(lambda acc, x: acc * x.denominator // gcd(acc, x.denominator), b, 1)
    ia = [int(x * da) for x in a]
    ib = [int(x * db) for x in b]
    prod = convolve_int(ia, ib, nout)
    dd = da * db
    return [Fraction(c, dd) for c in prod]


# ---------------------------------------------------------------------------
# the series type


class TruncatedSeries:
    """Laurent series  sum_{n=v}^{N} a_n q^n + O(q^{N+1})  over an exact ring.

    Immutable by convention: no method mutates self. The leading stored
    coefficient is nonzero unless the series is identically 0 up to N.
    """

    __slots__ = ("ring", "valuation", "coeffs", "precision")

    def __init__(self, ring: Ring, valuation: int, coeffs, precision: int):
        if precision > MAX_PRECISION:
            raise OutOfPrecision(f"precision {precision} exceeds cap {MAX_PRECISION}")
        coeffs = [ring.coerce(c) for c in coeffs]
        # trim leading zeros, advancing the valuation
        while coeffs and ring.is_zero(coeffs[0]):
            coeffs.pop(0)
            valuation += 1
        while coeffs and ring.is_zero(coeffs[-1]):
            coeffs.pop()
        if not coeffs:
            valuation = 0
        if coeffs and valuation + len(coeffs) - 1 > precision:
            raise ValueError("coefficients extend past the precision")
        self.ring = ring
        self.valuation = valuation
        self.coeffs = coeffs
        self.precision = precision

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, ring: Ring, precision: int):
        return cls(ring, 0, [], precision)

    @classmethod
    def one(cls, ring: Ring, precision: int):
        return cls(ring, 0, [ring.one()], precision)

    @classmethod
    def q_power(cls, ring: Ring, n: int, precision: int):
        return cls(ring, n, [ring.one()], precision)

    @classmethod
    def from_coeffs(cls, coeffs, precision=None, ring=ZZ, valuation=0):
        if precision is None:
            precision = valuation + len(coeffs) - 1
        return cls(ring, valuation, coeffs, precision)

    # -- basic queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, n: int):
        """Exact coefficient a_n; OutOfPrecision above N, zero below v."""
        if n > self.precision:
            raise OutOfPrecision(f"index {n} > precision {self.precision}")
        if not self.coeffs or n < self.valuation:
            return self.ring.zero()
        i = n - self.valuation
        if i >= len(self.coeffs):
            return self.ring.zero()
        return self.coeffs[i]

    def coefficients(self, lo: int, hi: int):
        return [self.coeff(n) for n in range(lo, hi + 1)]

    def leading(self):
        if not self.coeffs:
            raise ZeroSeries("zero series has no leading coefficient")
        return self.coeffs[0]

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        n = min(self.precision, other.precision)
        lo = min(self.valuation, other.valuation)
        return self.ring == other.ring and all(
            self.coeff(i) == other.coeff(i) for i in range(lo, n + 1)
        )

    def __repr__(self):
        terms = []
        shown = 0
        for i, c in enumerate(self.coeffs):
            if not self.ring.is_zero(c):
                terms.append(f"{c}*q^{self.valuation + i}")
                shown += 1
                if shown >= 8:
                    terms.append("...")
                    break
        body = " + ".join(terms) if terms else "0"
        return f"<{body} + O(q^{self.precision + 1}) over {self.ring.tag}>"

    # -- ring operations -----------------------------------------------------

    def _check(self, other):
        if not isinstance(other, TruncatedSeries):
            raise RingMismatch("expected a TruncatedSeries")
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring.tag} vs {other.ring.tag}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        self._check(other)
        prec = min(self.precision, other.precision)
        if self.is_zero() and other.is_zero():
            return TruncatedSeries.zero(self.ring, prec)
        vals = [s.valuation for s in (self, other) if not s.is_zero()]
        v = min(vals)
        coeffs = [
            self.coeff(n) + other.coeff(n) for n in range(v, prec + 1)
        ]
        return TruncatedSeries(self.ring, v, coeffs, prec)

    def __neg__(self):
        return TruncatedSeries(
            self.ring, self.valuation, [-c for c in self.coeffs], self.precision
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        """Multiply by a ring scalar."""
        c = self.ring.coerce(c)
        if self.ring.is_zero(c):
            return TruncatedSeries.zero(self.ring, self.precision)
        return TruncatedSeries(
            self.ring, self.valuation, [c * a for a in self.coeffs], self.precision
        )

    def shift(self, m: int):
        """Multiply by q^m."""
        return TruncatedSeries(
            self.ring, self.valuation + m, list(self.coeffs), self.precision + m
        )

    def truncate(self, precision: int):
        if precision >= self.precision:
            return self
        keep = [
            c
            for i, c in enumerate(self.coeffs)
            if self.valuation + i <= precision
        ]
        return TruncatedSeries(self.ring, self.valuation, keep, precision)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        if self.is_zero() or other.is_zero():
            prec = min(self.precision, other.precision)
            return TruncatedSeries.zero(self.ring, prec)
        v = self.valuation + other.valuation
        prec = min(
            self.precision + other.valuation, other.precision + self.valuation
        )
        nout = prec - v + 1
        if nout <= 0:
            return TruncatedSeries.zero(self.ring, prec)
        if self.ring == ZZ:
            out = convolve_int(self.coeffs, other.coeffs, nout)
        elif self.ring == QQ:
            out = _convolve_rat(self.coeffs, other.coeffs, nout)
        elif isinstance(self.ring, PadicRing):
            m = self.ring.p**self.ring.N
            raw = convolve_int(
                [c.residue for c in self.coeffs],
                [c.residue for c in other.coeffs],
                nout,
            )
            out = [PadicApprox(self.ring.p, self.ring.N, c % m) for c in raw]
        else:
            out = _convolve_generic(self.coeffs, other.coeffs, nout, self.ring)
        return TruncatedSeries(self.ring, v, out, prec)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.invert() ** (-e)
        if e == 0:
            return TruncatedSeries.one(self.ring, self.precision)
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def invert(self):
        """Series inverse; the leading coefficient must be a unit."""
        if self.is_zero():
            raise NonUnitLeading("cannot invert the zero series")
        lead = self.leading()
        v = self.valuation
        n = self.precision - v + 1  # number of known coefficients of the unit part
        if n <= 0:
            raise OutOfPrecision("no coefficients available to invert")
        if self.ring == ZZ:
            if lead not in (1, -1):
                raise NonUnitLeading(f"{lead} is not a unit in Z")
            inv = _invert_int(self.coeffs, n)
        elif self.ring == QQ:
            inv = _invert_rat(self.coeffs, n)
        elif isinstance(self.ring, PadicRing):
            if lead.residue % self.ring.p == 0:
                raise NonUnitLeading(f"{lead!r} is not a unit")
            raw = _invert_mod(
                [c.residue for c in self.coeffs], n, self.ring.p**self.ring.N
            )
            inv = [PadicApprox(self.ring.p, self.ring.N, c) for c in raw]
        else:
            inv = _invert_generic(self.coeffs, n, self.ring)
        # (q^v * u)^-1 = q^(-v) u^-1, exact to n coefficients
        return TruncatedSeries(self.ring, -v, inv, -v + n - 1)

    def divide(self, other):
        self._check(other)
        return self * other.invert()

    __truediv__ = divide

    # -- operators -----------------------------------------------------------

    def u_p(self, p: int):
        """Keep a_{np} at index n; precision floor(N/p)."""
        prec = self.precision // p
        if self.is_zero():
            return TruncatedSeries.zero(self.ring, prec)
        lo = -((-self.valuation) // p)  # ceil(v/p)
        coeffs = [self.coeff(n * p) for n in range(lo, prec + 1)]
        return TruncatedSeries(self.ring, lo, coeffs, prec)

    def v_p(self, p: int):
        """Place a_n at index np; precision N*p (capped)."""
        prec = min(self.precision * p, MAX_PRECISION)
        if self.is_zero():
            return TruncatedSeries.zero(self.ring, prec)
        zero = self.ring.zero()
        coeffs = []
        for i, c in enumerate(self.coeffs):
            if i:
                coeffs.extend([zero] * (p - 1))
            coeffs.append(c)
        return TruncatedSeries(self.ring, self.valuation * p, coeffs, prec)

    def map_coeffs(self, fn, ring=None):
        ring = ring or self.ring
        return TruncatedSeries(
            ring,
            self.valuation,
            [fn(c) for c in self.coeffs],
            self.precision,
        )

    def to_rational(self):
        if self.ring == QQ:
            return self
        if self.ring == ZZ:
            return self.map_coeffs(Fraction, QQ)
        raise RingMismatch("only integer series promote to rationals")

    def to_integer(self):
        if self.ring == ZZ:
            return self
        if self.ring == QQ:
            for c in self.coeffs:
                if c.denominator != 1:
                    raise RingMismatch(f"coefficient {c} is not integral")
            return self.map_coeffs(lambda c: c.numerator, ZZ)
        raise RingMismatch("only rational series demote to integers")

    def reduce_mod(self, m: int):
        """Coefficients reduced into [0, m); integer/rational input."""
        if self.ring == ZZ:
            return self.map_coeffs(lambda c: c % m)
        if self.ring == QQ:
            def red(c):
                den = c.denominator % m
                return c.numerator % m * pow(den, -1, m) % m
            return TruncatedSeries(ZZ, self.valuation, [red(c) for c in self.coeffs], self.precision)
        raise RingMismatch("reduce_mod needs an integer or rational series")


def _invert_int(coeffs: list[int], n: int) -> list[int]:
    """Newton inversion of a unit-leading integer sequence, n output terms."""
    lead = coeffs[0]
    b = coeffs if lead == 1 else [-c for c in coeffs]
    x = [1]
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        bx = convolve_int(b[:prec], x, prec)
        # x <- x(2 - b x)
        two_minus = [2 - bx[0]] + [-c for c in bx[1:]]
        x = convolve_int(x, two_minus, prec)
    return x if lead == 1 else [-c for c in x]


def _invert_mod(coeffs: list[int], n: int, m: int) -> list[int]:
    """Newton inversion of a residue sequence mod m (leading coeff a unit)."""
    lead_inv = pow(coeffs[0], -1, m)
    b = [c * lead_inv % m for c in coeffs]
    x = [1]
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        bx = [c % m for c in convolve_int(b[:prec], x, prec)]
        two_minus = [(2 - bx[0]) % m] + [(-c) % m for c in bx[1:]]
        x = [c % m for c in convolve_int(x, two_minus, prec)]
    return [c * lead_inv % m for c in x]


def _invert_rat(coeffs, n):
    lead = coeffs[0]
    scaled = [c / lead for c in coeffs]
    x = [Fraction(1)]
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        bx = _convolve_rat(scaled[:prec], x, prec)
        two_minus = [2 - bx[0]] + [-c for c in bx[1:]]
        x = _convolve_rat(x, two_minus, prec)
    return [c / lead for c in x]


def _invert_generic(coeffs, n, ring):
    lead = coeffs[0]
    if isinstance(lead, PadicApprox):
        try:
            lead_inv = lead.inverse()
        except ZeroDivisionError as exc:
            raise NonUnitLeading(f"{lead!r} is not a unit") from exc
    elif lead == ring.one() or lead == -ring.one():
        lead_inv = lead  # the only self-inverse units we need generically
    else:
        raise NonUnitLeading(f"leading coefficient {lead!r} is not a unit")
    out = [lead_inv]
    for k in range(1, n):
        acc = ring.zero()
        jmax = min(k, len(coeffs) - 1)
        for j in range(1, jmax + 1):
            acc = acc + coeffs[j] * out[k - j]
        out.append(-(lead_inv * acc))
    return out


def content_normalize(f: TruncatedSeries):
    """Split an integer or rational series into (content, primitive part).

    The primitive part has integer coefficients with gcd 1 and positive
    leading coefficient; content * primitive reconstructs the input.
    """
    if f.is_zero():
        raise ZeroSeries("zero series has no content")
    if f.ring == ZZ:
        nums = f.coeffs
        g = 0
        for c in nums:
            g = gcd(g, c)
        content = Fraction(g)
    elif f.ring == QQ:
        num_g = 0
        den_l = 1
        for c in f.coeffs:
            num_g = gcd(num_g, c.numerator)
            den_l = den_l * c.denominator // gcd(den_l, c.denominator)
        content = Fraction(num_g, den_l)
    else:
        raise RingMismatch("content needs an integer or rational series")
    if f.leading() < 0:
        content = -content
    prim = [int(Fraction(c) / content) for c in f.coeffs]
    normalized = TruncatedSeries(ZZ, f.valuation, prim, f.precision)
    return content, normalized


# ---------------------------------------------------------------------------
# text cache format (shared with the harness)


def series_to_text(f: TruncatedSeries) -> str:
    lines = [
        f"ring={f.ring.tag}",
        f"valuation={f.valuation}",
        f"precision={f.precision}",
    ]
    lines.extend(f.ring.to_text(c) for c in f.coeffs)
    return "\n".join(lines) + "\n"


def series_from_text(text: str) -> TruncatedSeries:
    lines = text.splitlines()
    if len(lines) < 3:
        raise ValueError("truncated series file")
    head = {}
    for line in lines[:3]:
        key, _, value = line.partition("=")
        head[key] = value
    ring = ring_from_tag(head["ring"])
    valuation = int(head["valuation"])
    precision = int(head["precision"])
    coeffs = [ring.from_text(line) for line in lines[3:] if line.strip()]
    return TruncatedSeries(ring, valuation, coeffs, precision)
