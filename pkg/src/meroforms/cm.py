"""CM apparatus: quadratic forms, genus characters, and the symbolic
nonholomorphic-derivative construction of the pole-at-CM-point combinations.

The two-variable kernel G_k(z,tau) = E_k(z) g_{2-k}(tau) / (j(z)-j(tau)) is
differentiated symbolically in tau.  States live in the graded ring generated
by e2 (the almost-holomorphic E_2^*, weight 2), e4, e6 and Laurent powers of
Delta, tensored with powers of K = (j(z)-J)^{-1}.  The derivation rules are

    de2 = (e2^2-e4)/12, de4 = (e2 e4-e6)/3, de6 = (e2 e6-e4^2)/2,
    dDelta = e2 Delta,  dJ = -e4^2 e6/Delta,  dK = K^2 dJ.

Evaluation at a CM point of class number one stays exact: weight homogeneity
lets the generators be normalized to e4 = 1 (or e6 = 1 when e4 vanishes,
D = -3), leaving one formal square root sigma with rational sigma^2; every
combination coefficient then lies in Q * sigma^{0 or 1}.  The weight-zero
class sums (the middle derivative) need no normalization at all and are plain
rationals; for class number > 1 they are evaluated numerically per class and
reconstructed coefficient-by-coefficient.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from .exactnum import NoConvergent, kronecker, rational_reconstruct
from .meromorphic import f_series
from .qseries import QQ, ZZ, PadicRing, Ring, TruncatedSeries

WEIGHTS = (4, 6, 8, 10, 14)


class NotADiscriminant(Exception):
    pass


class NoCoprimeRepresentative(Exception):
    pass


class ReconstructionFailure(Exception):
    pass


class IdenticallyZero(Exception):
    pass


class NonIntegralResult(Exception):
    pass


# ---------------------------------------------------------------------------
# reduced binary quadratic forms


@dataclass(frozen=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def content(self) -> int:
        return gcd(gcd(self.a, self.b), self.c)

    def is_primitive(self) -> bool:
        return self.content == 1

    def represents_values(self, bound: int):
        for x in range(-bound, bound + 1):
            for y in range(-bound, bound + 1):
                if x or y:
                    yield self.a * x * x + self.b * x * y + self.c * y * y

    @property
    def weight(self) -> int:
        """w_Q: 2 for forms equivalent to a(X^2+Y^2), 3 for a(X^2+XY+Y^2)."""
        a, b, c = reduce_form(self.a, self.b, self.c)
        if b == 0 and a == c:
            return 2
        if a == b == c:
            return 3
        return 1


def reduce_form(a: int, b: int, c: int) -> tuple[int, int, int]:
    """SL_2(Z)-reduction of a positive definite form."""
    if a <= 0 or b * b - 4 * a * c >= 0:
        raise ValueError("form must be positive definite")
    while True:
        if b > a or b <= -a:
            # translate b into (-a, a]
            r = (a - b) // (2 * a)
            c = a * r * r + b * r + c
            b = b + 2 * r * a
            continue
        if c < a or (c == a and b < 0):
            a, b, c = c, -b, a
            continue
        if abs(b) == a and b < 0:
            b = -b
            continue
        return a, b, c


def reduced_forms(D: int) -> list[QuadForm]:
    """All reduced positive definite forms of discriminant D, sorted."""
    if D >= 0 or D % 4 not in (0, 1):
        raise NotADiscriminant(f"{D} is not a negative discriminant")
    out = []
    amax = isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            out.append(QuadForm(a, b, c))
    return sorted(out, key=lambda Q: (Q.a, Q.b, Q.c))


def primitive_forms(D: int) -> list[QuadForm]:
    return [Q for Q in reduced_forms(D) if Q.is_primitive()]


def class_number(D: int) -> int:
    """h(D): number of primitive reduced forms of discriminant D."""
    return len(primitive_forms(D))


def class_count_by_reduction(D: int, bound: int | None = None) -> int:
    """Independent oracle: reduce an exhaustive crop of forms, count classes."""
    if D >= 0 or D % 4 not in (0, 1):
        raise NotADiscriminant(f"{D}")
    bound = bound or abs(D)
    seen = set()
    for a in range(1, bound + 1):
        for b in range(-bound, bound + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c <= 0:
                continue
            seen.add(reduce_form(a, b, c))
    return len(seen)


def fundamental_decomposition(D: int) -> tuple[int, int]:
    """D = A^2 D_0 with D_0 a fundamental discriminant; returns (A, D_0)."""
    if D >= 0 or D % 4 not in (0, 1):
        raise NotADiscriminant(f"{D}")
    n, s = -D, 1
    f = 2
    while f * f <= n:
        while n % (f * f) == 0:
            n //= f * f
            s *= f
        f += 1
    m = -n  # squarefree kernel, negative
    if m % 4 == 1:
        return s, m
    if s % 2:
        raise NotADiscriminant(f"{D}: squarefree part {m} inconsistent")
    return s // 2, 4 * m


def genus_character(Q: QuadForm, d: int, d0: int) -> int:
    """chi_{d,d0}(Q) = (d0/r) for a represented r coprime to d0, else 0."""
    if d0 != 1 and d0 % 4 not in (0, 1):
        raise ValueError("d0 must be a fundamental discriminant or 1")
    if d * d0 >= 0:
        raise ValueError("dd0 must be negative")
    if Q.discriminant != d * d0:
        raise ValueError("form discriminant must equal d*d0")
    if d0 == 1:
        return 1
    if gcd(Q.content, abs(d0)) > 1:
        return 0
    for bound in (6, 12, 24, 48):
        for r in Q.represents_values(bound):
            if r and gcd(r, abs(d0)) == 1:
                return kronecker(d0, r)
    raise NoCoprimeRepresentative(f"{Q} within search bound")


def w_D(D: int) -> int:
    return 4 if D == -4 else 6 if D == -3 else 2


# ---------------------------------------------------------------------------
# the symbolic kernel calculus: polynomial states are dicts
# {(a, b, c, d): Fraction} standing for e2^a e4^b e6^c Delta^d


def _padd(P, Q):
    R = dict(P)
    for m, co in Q.items():
        s = R.get(m, 0) + co
        if s:
            R[m] = s
        elif m in R:
            del R[m]
    return R


def _pscale(P, s):
    return {m: co * s for m, co in P.items()} if s else {}


def _pmul(P, Q):
    R = {}
    for m1, c1 in P.items():
        for m2, c2 in Q.items():
            m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2], m1[3] + m2[3])
            s = R.get(m, 0) + c1 * c2
            if s:
                R[m] = s
            elif m in R:
                del R[m]
    return R


def _mono(a, b, c, d, coef=1):
    return {(a, b, c, d): Fraction(coef)}


_DE2 = _padd(_mono(2, 0, 0, 0, Fraction(1, 12)), _mono(0, 1, 0, 0, Fraction(-1, 12)))
_DE4 = _padd(_mono(1, 1, 0, 0, Fraction(1, 3)), _mono(0, 0, 1, 0, Fraction(-1, 3)))
_DE6 = _padd(_mono(1, 0, 1, 0, Fraction(1, 2)), _mono(0, 2, 0, 0, Fraction(-1, 2)))
_DJ = _mono(0, 2, 1, -1, -1)  # dJ = -e4^2 e6 / Delta

# g_{2-k} = E_{14-k}/Delta written in the generators
_G2K = {
    4: _mono(0, 1, 1, -1),
    6: _mono(0, 2, 0, -1),
    8: _mono(0, 0, 1, -1),
    10: _mono(0, 1, 0, -1),
    14: _mono(0, 0, 0, -1),
}


def _pderiv(P):
    R = {}
    for (a, b, c, d), co in P.items():
        if a:
            R = _padd(R, _pscale(_pmul(_mono(a - 1, b, c, d), _DE2), co * a))
        if b:
            R = _padd(R, _pscale(_pmul(_mono(a, b - 1, c, d), _DE4), co * b))
        if c:
            R = _padd(R, _pscale(_pmul(_mono(a, b, c - 1, d), _DE6), co * c))
        if d:
            R = _padd(R, _pscale(_mono(a + 1, b, c, d), co * d))
    return R


def _mono_weight(m) -> int:
    a, b, c, d = m
    return 2 * a + 4 * b + 6 * c + 12 * d


@dataclass(frozen=True)
class SymbolicKernelSum:
    """sum_i R_i (x) K^i after (r-1) tau-derivatives of G_k; tau-weight 2r-k."""

    k: int
    r: int
    state: dict  # K-degree -> polynomial dict

    @property
    def tau_weight(self) -> int:
        return 2 * self.r - self.k

    def assert_homogeneous(self):
        for i, P in self.state.items():
            for m in P:
                if _mono_weight(m) != self.tau_weight:
                    raise AssertionError(
                        f"monomial {m} in K^{i} has weight {_mono_weight(m)}"
                    )

    @property
    def max_k_degree(self) -> int:
        return max(self.state)


@lru_cache(maxsize=None)
def partial_g(k: int, r: int) -> SymbolicKernelSum:
    """(d_tau)^{r-1} applied to G_k, as a symbolic kernel sum."""
    if k not in WEIGHTS:
        raise ValueError(f"k must be in {WEIGHTS}")
    if r < 1:
        raise ValueError("r must be >= 1")
    state = {1: _G2K[k]}
    for _ in range(r - 1):
        new = {}
        for i, P in state.items():
            new[i] = _padd(new.get(i, {}), _pderiv(P))
            new[i + 1] = _padd(new.get(i + 1, {}), _pscale(_pmul(P, _DJ), i))
        state = {i: P for i, P in new.items() if P}
    out = SymbolicKernelSum(k, r, state)
    out.assert_homogeneous()
    return out


# ---------------------------------------------------------------------------
# CM evaluation contexts


@dataclass(frozen=True)
class CMContext:
    """Exact evaluation data at the CM point of a class-number-one order."""

    D: int
    D0: int
    A: int
    j: Fraction
    normalization: str  # "e4" (generic) or "e6" (D = -3, where e4 vanishes)
    sigma2: Fraction  # value of e6^2 under e4 := 1 (e4-normalization)
    e2_ratio: Fraction  # e2 = e2_ratio * sigma (the classical s_2 invariant)

    @property
    def delta_value(self) -> Fraction:
        if self.normalization == "e6":
            return Fraction(-1, 1728)
        return (1 - self.sigma2) / 1728


_CM_CACHE: dict[int, CMContext] = {}
_CM_LOCK = threading.Lock()

_DPS_LADDER = (60, 120, 240, 480)


@lru_cache(maxsize=64)
def _sigma_table(k: int, M: int) -> tuple:
    out = [0] * (M + 1)
    for d in range(1, M + 1):
        dk = d**k
        for m in range(d, M + 1, d):
            out[m] += dk
    return tuple(out)


def _numeric_invariants(a: int, b: int, D: int, dps: int):
    """(E2*, E4, E6, j) at alpha = (-b + sqrt(D)) / (2a), dps working digits."""
    import mpmath as mp

    with mp.workdps(dps):
        alpha = (mp.mpf(-b) + mp.sqrt(mp.mpc(D))) / (2 * a)
        y = mp.im(alpha)
        q = mp.exp(2j * mp.pi * alpha)
        M = int(dps * mp.log(10) / (2 * mp.pi * y)) + 12
        sig1, sig3, sig5 = (_sigma_table(i, M) for i in (1, 3, 5))
        qn = [mp.mpc(1)]
        for _ in range(M):
            qn.append(qn[-1] * q)
        E2 = 1 - 24 * mp.fsum(sig1[n] * qn[n] for n in range(1, M + 1))
        E4 = 1 + 240 * mp.fsum(sig3[n] * qn[n] for n in range(1, M + 1))
        E6 = 1 - 504 * mp.fsum(sig5[n] * qn[n] for n in range(1, M + 1))
        E2s = E2 - 3 / (mp.pi * y)
        jv = 1728 * E4**3 / (E4**3 - E6**2)
        return E2s, E4, E6, jv


def cm_constants(D: int) -> CMContext:
    """Exact CM context for a class-number-one discriminant D.

    j_D is recovered by high-precision evaluation and integer rounding, the
    e2 ratio (the classical rational invariant s_2 = E_2* E_4 / E_6) by
    rational reconstruction on a precision ladder, accepting only after two
    rungs agree.  D = -3 and -4 are the classical pinned degenerations
    (E_4(rho) = 0, E_6(i) = 0, E_2* vanishing at both).
    """
    with _CM_LOCK:
        if D in _CM_CACHE:
            return _CM_CACHE[D]
    if D >= 0 or D % 4 not in (0, 1):
        raise NotADiscriminant(f"{D}")
    if class_number(D) != 1:
        raise ValueError(f"cm_constants needs h(D) = 1, got {class_number(D)}")
    A, D0 = fundamental_decomposition(D)
    if D == -3:
        ctx = CMContext(D, D0, A, Fraction(0), "e6", Fraction(0), Fraction(0))
    elif D == -4:
        ctx = CMContext(D, D0, A, Fraction(1728), "e4", Fraction(0), Fraction(0))
    else:
        ctx = _reconstruct_context(D, D0, A)
    with _CM_LOCK:
        _CM_CACHE[D] = ctx
    return ctx


def _reconstruct_context(D: int, D0: int, A: int) -> CMContext:
    import mpmath as mp

    Q = primitive_forms(D)[0]
    last = None
    for dps in _DPS_LADDER:
        E2s, E4, E6, jv = _numeric_invariants(Q.a, Q.b, D, dps)
        with mp.workdps(dps):
            if abs(mp.im(jv)) > mp.mpf(10) ** (-dps // 2):
                continue
            j_int = int(mp.nint(mp.re(jv)))
            if abs(mp.re(jv) - j_int) > mp.mpf(10) ** (-20):
                continue
            try:
                t = rational_reconstruct(
                    mp.re(E2s * E4 / E6),
                    Fraction(1, 10 ** (dps // 2)),
                    10 ** (dps // 4),
                )
            except NoConvergent:
                continue
        if last == (j_int, t):
            sigma2 = 1 - Fraction(1728, j_int)
            return CMContext(D, D0, A, Fraction(j_int), "e4", sigma2, t)
        last = (j_int, t)
    raise ReconstructionFailure(f"CM constants for D={D} did not stabilize")


# ---------------------------------------------------------------------------
# exact evaluation of symbolic states


def _eval_poly_exact(P: dict, ctx: CMContext) -> tuple[Fraction, Fraction]:
    """Value of a polynomial state at the CM point as (even, odd) wrt sigma.

    e4-normalization: e4 = 1, e6 = sigma, e2 = t sigma, sigma^2 = ctx.sigma2.
    e6-normalization (D = -3): e2 = e4 = 0, e6 = 1.
    """
    even = Fraction(0)
    odd = Fraction(0)
    dv = ctx.delta_value
    if ctx.normalization == "e6":
        for (a, b, c, d), co in P.items():
            if a == 0 and b == 0:
                even += co * dv**d
        return even, odd
    s2, t = ctx.sigma2, ctx.e2_ratio
    for (a, b, c, d), co in P.items():
        v = co * (t**a if a else 1) * dv**d
        e = a + c
        if e % 2 == 0:
            even += v * (s2 ** (e // 2) if e else 1)
        else:
            odd += v * s2 ** ((e - 1) // 2)
    return even, odd


def _effective_pair(pair, ctx: CMContext):
    # when sigma itself vanishes (D = -4) the odd component is literally zero
    if ctx.normalization == "e4" and ctx.sigma2 == 0:
        return (pair[0], Fraction(0))
    return pair


def evaluate_state(sym: SymbolicKernelSum, ctx: CMContext) -> dict:
    """{K-degree: (even, odd)} value pairs; one parity vanishes throughout."""
    return {
        i: _effective_pair(_eval_poly_exact(P, ctx), ctx)
        for i, P in sym.state.items()
    }


def _extract_vector(values: dict, rmax: int) -> list[Fraction]:
    """Collapse parity pairs into one rational vector, dividing out sigma."""
    evens = [values.get(i, (Fraction(0),) * 2)[0] for i in range(1, rmax + 1)]
    odds = [values.get(i, (Fraction(0),) * 2)[1] for i in range(1, rmax + 1)]
    if any(odds) and any(evens):
        raise AssertionError("mixed sigma-parity: weight bookkeeping broken")
    return odds if any(odds) else evens


# ---------------------------------------------------------------------------
# construct_g and the identically-zero fallback


def _divisor_state(ctx: CMContext, s: int) -> dict:
    """(J - j_D)^s as a single monomial, available for j_D in {0, 1728}."""
    if ctx.j == 1728:
        return _mono(0, 0, 2 * s, -s)  # (e6^2/Delta)^s
    if ctx.j == 0:
        return _mono(0, 3 * s, 0, -s)  # (e4^3/Delta)^s
    raise IdenticallyZero(
        "zero evaluation outside D in {-3, -4}: fallback has no monomial divisor"
    )


def _canonical_order(P: dict, ctx: CMContext, maxm: int = 48):
    """(m, value-pair) at the first nonvanishing iterated derivative."""
    cur = P
    for m in range(maxm + 1):
        even, odd = _effective_pair(_eval_poly_exact(cur, ctx), ctx)
        if even or odd:
            return m, (even, odd)
        cur = _pderiv(cur)
    return None, None


def _parity_ratio(num_pair, den_pair) -> Fraction:
    ne, no = num_pair
    de, do = den_pair
    if do == 0 and de != 0:
        if no != 0:
            raise AssertionError("sigma-odd / sigma-even is not rational")
        return ne / de
    if de == 0 and do != 0:
        if ne != 0:
            raise AssertionError("sigma-even / sigma-odd is not rational")
        return no / do
    raise AssertionError("degenerate divisor value")


def _fallback_vector(sym: SymbolicKernelSum, ctx: CMContext, r: int):
    """Divide by (J - j_D)^s before evaluating (the construction's step (1)).

    The limit of R_i/(J-j_D)^s at the CM point is the ratio of the first
    nonvanishing iterated nonholomorphic derivatives (canonical Taylor
    coefficients); s is the minimal choice under which something survives.
    """
    orders = {}
    for i, P in sym.state.items():
        m, val = _canonical_order(P, ctx)
        if m is not None:
            orders[i] = (m, val)
    if not orders:
        raise IdenticallyZero(
            f"all K-components vanish to high order (k={sym.k}, D={ctx.D}, r={r})"
        )
    n1, _ = _canonical_order(_divisor_state(ctx, 1), ctx)
    m_min = min(m for m, _ in orders.values())
    if m_min % n1:
        raise IdenticallyZero(
            f"numerator order {m_min} is not a multiple of the divisor order"
            f" {n1}: no admissible s exists"
        )
    s = m_min // n1
    _, dval = _canonical_order(_divisor_state(ctx, s), ctx)
    vec = []
    for i in range(1, r + 1):
        if i not in orders or orders[i][0] > m_min:
            vec.append(Fraction(0))
        else:
            vec.append(_parity_ratio(orders[i][1], dval))
    return vec


def _normalize_vector(vec) -> list[int]:
    """Integral, content one, positive first nonzero entry, zero tail trimmed."""
    vec = list(vec)
    while vec and vec[-1] == 0:
        vec.pop()
    if not vec:
        raise IdenticallyZero("empty combination vector")
    den = 1
    for v in vec:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    ints = [v // g for v in ints]
    if next(v for v in ints if v) < 0:
        ints = [-v for v in ints]
    return ints


def construct_g(k: int, D: int, r: int, N: int = 0):
    """The standard integer combination vector for (d_tau^{r-1} G_k)(z, alpha_D).

    Returns (vector, series): A_1..A_m (content 1, first nonzero entry
    positive, trailing zeros trimmed) against E_k/(j - j_D)^i, plus the
    assembled series to precision N when N > 0.
    """
    if not 1 <= r <= k - 1:
        raise ValueError("need 1 <= r <= k-1")
    ctx = cm_constants(D)
    sym = partial_g(k, r)
    vec = _extract_vector(evaluate_state(sym, ctx), r)
    if not any(vec):
        vec = _fallback_vector(sym, ctx, r)
    ints = _normalize_vector(vec)
    series = assemble_combination(k, ctx.j, ints, N) if N else None
    return ints, series


def assemble_combination(
    k: int, j_pole, vec, N: int, ring: Ring = ZZ
) -> TruncatedSeries:
    """sum_i vec[i-1] * E_k/(j - j_pole)^i over the requested ring."""
    total = None
    for i, A in enumerate(vec, start=1):
        if not A:
            continue
        term = f_series(k, j_pole, i, N, ring=ring).series.scale(
            A % (ring.p**ring.N) if isinstance(ring, PadicRing) else A
        )
        total = term if total is None else total + term
    if total is None:
        raise IdenticallyZero("zero combination")
    return total


# ---------------------------------------------------------------------------
# pole profiles at j in {0, 1728}


def pole_profile(k: int, j0: int):
    """(kappa, [r_1..r_kappa]): pole orders of E_k/(j-j0)^i for i = 1..kappa."""
    if k not in WEIGHTS:
        raise ValueError(f"k must be in {WEIGHTS}")
    if j0 == 0:
        order = lambda i: 3 * i - (k % 3)
    elif j0 == 1728:
        order = lambda i: 2 * i - ((k // 2) % 2)
    else:
        raise ValueError("j0 must be 0 or 1728")
    rs = []
    i = 1
    while order(i) <= k - 1:
        rs.append(order(i))
        i += 1
    return len(rs), rs


# ---------------------------------------------------------------------------
# weight-zero class sums: script G, Tr_{d,d0}, tilde scaling


def _point_context(Q: QuadForm) -> CMContext:
    """Exact context at the CM point of Q (its underlying primitive order)."""
    m = Q.content
    return cm_constants(Q.discriminant // (m * m))


def _all_points_exact(forms) -> bool:
    return all(
        class_number(Q.discriminant // (Q.content**2)) == 1 for Q in forms
    )


def _class_term_vector(two_s: int, r: int, ctx: CMContext) -> list[Fraction]:
    """Rational K-vector of (d_tau^{r-1} G_{2s}) at an h = 1 point (weight 0)."""
    sym = partial_g(two_s, r)
    if sym.tau_weight != 0:
        raise ValueError("class sums need the weight-zero derivative count")
    values = evaluate_state(sym, ctx)
    vec = []
    for i in range(1, r + 1):
        even, odd = values.get(i, (Fraction(0), Fraction(0)))
        if odd:
            raise AssertionError("weight-zero value acquired a sigma part")
        vec.append(even)
    return vec


def script_g_terms(k: int, D: int):
    """[(j_Q, rational K-vector)] over the primitive classes (exact path)."""
    forms = primitive_forms(D)
    if not _all_points_exact(forms):
        raise ValueError("exact path needs class number one at every point")
    return [
        (ctx.j, _class_term_vector(k, k // 2, ctx))
        for ctx in (_point_context(Q) for Q in forms)
    ]


MAX_CLASS_NUMBER = 4  # numeric class-sum budget


def script_g(k: int, D: int, N: int) -> TruncatedSeries:
    """script-G_{k,D} = (2/w_D) * sum over primitive classes of the middle
    derivative of G_k; exact when each class point has class number one,
    numeric with rational reconstruction otherwise."""
    if k not in WEIGHTS:
        raise ValueError(f"k must be in {WEIGHTS}")
    if class_number(D) > MAX_CLASS_NUMBER:
        raise ValueError(f"h({D}) = {class_number(D)} exceeds the desk budget")
    forms = primitive_forms(D)
    if _all_points_exact(forms):
        total = None
        for j_Q, vec in script_g_terms(k, D):
            for i, A in enumerate(vec, start=1):
                if not A:
                    continue
                term = f_series(k, j_Q, i, N, ring=QQ).series.scale(A)
                total = term if total is None else total + term
        if total is None:
            raise IdenticallyZero(f"script G({k},{D}) vanished identically")
    else:
        total = _numeric_class_sum(k, k // 2, [(Q, 1, 1) for Q in forms], N)
    return total.scale(Fraction(2, w_D(D)))


def trace(d: int, d0: int, s: int, N: int) -> TruncatedSeries:
    """Tr_{d,d0} of (d_tau^{s-1} G_{2s}): genus-character weighted class sum
    over all classes of discriminant d*d0 with weights 1/w_Q."""
    if 2 * s not in WEIGHTS:
        raise ValueError("2s must be in the weight list")
    if d * d0 >= 0:
        raise ValueError("dd0 must be negative")
    forms = reduced_forms(d * d0)
    weighted = [
        (Q, genus_character(Q, d, d0), Q.weight) for Q in forms
    ]
    weighted = [(Q, chi, wq) for (Q, chi, wq) in weighted if chi]
    if not weighted:
        return TruncatedSeries.zero(QQ, N)
    if _all_points_exact([Q for Q, _, _ in weighted]):
        total = None
        for Q, chi, wq in weighted:
            ctx = _point_context(Q)
            vec = _class_term_vector(2 * s, s, ctx)
            part = None
            for i, A in enumerate(vec, start=1):
                if not A:
                    continue
                term = f_series(2 * s, ctx.j, i, N, ring=QQ).series.scale(A)
                part = term if part is None else part + term
            if part is None:
                continue
            part = part.scale(Fraction(chi, wq))
            total = part if total is None else total + part
        return total if total is not None else TruncatedSeries.zero(QQ, N)
    return _numeric_class_sum(2 * s, s, weighted, N)


def tilde_vector(k: int, D: int):
    """(j_D, integer combination vector) for G-tilde_{k,D} at a one-class D."""
    forms = primitive_forms(D)
    if len(forms) != 1:
        raise ValueError("tilde_vector needs exactly one primitive class")
    ctx = _point_context(forms[0])
    vec = _class_term_vector(k, k // 2, ctx)
    _, D0 = fundamental_decomposition(D)
    scale = Fraction(2, w_D(D))
    if k % 4 == 0:
        scale /= abs(D0) ** (k // 4)
    else:
        scale *= abs(D0) ** ((k - 2) // 4)
    out = []
    for v in vec:
        sv = v * scale
        if sv.denominator != 1:
            raise NonIntegralResult(f"tilde vector entry {sv} is not integral")
        out.append(sv.numerator)
    while out and not out[-1]:
        out.pop()
    if not out:
        raise IdenticallyZero(f"G-tilde({k},{D}) vanished")
    return ctx.j, out


def tilde_scale(k: int, D: int, G: TruncatedSeries) -> TruncatedSeries:
    """|D_0|^{-k/4} G (k = 0 mod 4) or |D_0|^{(k-2)/4} G (k = 2 mod 4);
    asserts the scaled series is integral."""
    _, D0 = fundamental_decomposition(D)
    if k % 4 == 0:
        scaled = G.scale(Fraction(1, abs(D0) ** (k // 4)))
    else:
        scaled = G.scale(Fraction(abs(D0) ** ((k - 2) // 4)))
    try:
        return scaled.to_integer()
    except Exception as exc:
        raise NonIntegralResult(f"tilde scaling of ({k},{D}) not integral") from exc


def tilde_series(k: int, D: int, N: int, ring: Ring = ZZ) -> TruncatedSeries:
    """G-tilde_{k,D} over any ring, assembled from the integer vector."""
    j_D, vec = tilde_vector(k, D)
    return assemble_combination(k, j_D, vec, N, ring=ring)


# ---------------------------------------------------------------------------
# numeric class-sum path (class number > 1)


_DENOMINATOR_BOUND = 10**12


def _numeric_class_sum(two_s, r, weighted_forms, N) -> TruncatedSeries:
    """sum chi/w_Q (d_tau^{r-1} G)(z, alpha_Q), numeric per class, with
    per-coefficient rational reconstruction checked across two precisions.

    Coefficients grow like exp(2 pi y n), so error control is relative: a
    precision rung is skipped when its residual error cannot separate
    denominators up to the reconstruction bound.
    """
    import mpmath as mp

    sym = partial_g(two_s, r)
    results = []
    for dps in (60, 120, 240, 480):
        coeffs = _numeric_sum_once(sym, two_s, weighted_forms, N, dps)
        if coeffs is None:
            continue
        try:
            rec = []
            for c in coeffs:
                scale = max(1, int(abs(c)))
                radius = Fraction(scale, 10 ** (dps - 18))
                if radius >= Fraction(1, 2 * _DENOMINATOR_BOUND**2):
                    raise NoConvergent("insufficient precision at this rung")
                rec.append(rational_reconstruct(c, radius, _DENOMINATOR_BOUND))
        except NoConvergent:
            continue
        results.append(rec)
        if len(results) >= 2 and results[-1] == results[-2]:
            return TruncatedSeries(QQ, 1, rec, N)
    raise ReconstructionFailure("numeric class sum did not stabilize")


def _numeric_sum_once(sym, two_s, weighted_forms, N, dps):
    import mpmath as mp

    from .modforms import delta as _delta, eisenstein as _eis

    E43s = (_eis(4, N).series ** 3).coefficients(0, N)
    Ds = _delta(N).series.coefficients(0, N)
    Eks = _eis(two_s, N).series.coefficients(0, N)
    with mp.workdps(dps):
        total = [mp.mpc(0)] * (N + 1)
        for Q, chi, wq in weighted_forms:
            E2v, E4v, E6v, jv = _numeric_invariants(Q.a, Q.b, Q.discriminant, dps)
            dv = (E4v**3 - E6v**2) / 1728
            vals = {}
            for i, P in sym.state.items():
                acc = mp.mpc(0)
                for (a, b, c, dd), co in P.items():
                    acc += (
                        mp.mpf(co.numerator)
                        / co.denominator
                        * E2v**a
                        * E4v**b
                        * E6v**c
                        * dv**dd
                    )
                vals[i] = acc
            Bc = [e43 - jv * dl for e43, dl in zip(E43s, Ds)]
            Binv = _cinv(Bc, N + 1)
            dl_binv = _cmul([mp.mpc(x) for x in Ds], Binv, N + 1)
            cur = _cmul([mp.mpc(x) for x in Eks], dl_binv, N + 1)  # F^1
            for i in range(1, sym.max_k_degree + 1):
                if i in vals and vals[i] != 0:
                    coefficient = vals[i] * chi / wq
                    for n in range(N + 1):
                        total[n] += coefficient * cur[n]
                if i < sym.max_k_degree:
                    cur = _cmul(cur, dl_binv, N + 1)
        # real parts of q^1..q^N; imaginary parts must be relative noise
        for c in total:
            bar = max(mp.mpf(1), abs(c)) * mp.mpf(10) ** (-(dps // 3))
            if abs(mp.im(c)) > bar:
                return None  # precision rung too low: escalate
        return [mp.re(c) for c in total[1:]]


def _cmul(a, b, n):
    out = [a[0] * 0] * n
    for i in range(min(len(a), n)):
        ca = a[i]
        if ca == 0:
            continue
        for j in range(min(len(b), n - i)):
            cb = b[j]
            if cb != 0:
                out[i + j] += ca * cb
    return out


def _cinv(a, n):
    inv0 = 1 / a[0]
    out = [inv0] + [a[0] * 0] * (n - 1)
    for k in range(1, n):
        acc = a[0] * 0
        for j in range(1, min(k, len(a) - 1) + 1):
            acc += a[j] * out[k - j]
        out[k] = -inv0 * acc
    return out
