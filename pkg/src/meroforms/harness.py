"""Declarative congruence specifications and the verification engine.

A CongruenceSpec names a family of statements: a coefficient source (one
series or a product pair), recurrence coefficients as functions of p, a
modulus exponent law, and a prime filter.  The engine computes, for every
admissible (p, n, l) cell, the exact combination

    a_{n p^l} + c_1 a_{n p^{l-1}} + ... + c_s a_{n p^{l-s}}   (a_m := 0, m not in Z)

and its valuation, either over exact integers/rationals or in Z/p^cap with
cap = required + slack.  A residue of zero only ever reports "observed >=
cap", never a fabricated exact valuation, and PASS requires the established
information to reach the required exponent.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import cm as cm_mod
from . import elliptic as ell
from . import hypergeom as hyp
from .exactnum import (
    cornacchia_split,
    fraction_valuation,
    is_prime,
    kronecker,
    padic_sqrt,
    primes_in,
    unit_root,
    valuation,
)
from .meromorphic import f_series
from .modforms import cusp_relation, delta, eisenstein, hecke
from .qseries import (
    QQ,
    ZZ,
    PadicRing,
    TruncatedSeries,
    series_from_text,
    series_to_text,
)

VALUATION_SLACK = 4
EXACT_INDEX_THRESHOLD = 650  # build exact series below, residue series above

PACKAGE_VERSION = "0.1.0"


class UnknownId(Exception):
    pass


class CorruptEntry(Exception):
    pass


class InsufficientPrecision(Exception):
    pass


def fingerprint() -> dict:
    from .qseries import MAX_PRECISION

    return {
        "package": f"meroforms {PACKAGE_VERSION}",
        "series_cap": MAX_PRECISION,
        "valuation_slack": VALUATION_SLACK,
        "exact_index_threshold": EXACT_INDEX_THRESHOLD,
    }


# ---------------------------------------------------------------------------
# series sources


@dataclass(frozen=True)
class SeriesSource:
    """A named, reproducible coefficient stream for the engine."""

    key: str
    builder: object  # callable(N, ring) -> TruncatedSeries

    def series(self, N: int, ring=ZZ) -> TruncatedSeries:
        return self.builder(N, ring)


_SERIES_MEMO: dict = {}
_SERIES_LOCK = threading.Lock()


def _bucket(n: int) -> int:
    b = 64
    while b < n:
        b *= 2
    return b


def get_series(source: SeriesSource, N: int, p: int | None = None, cap: int | None = None):
    """Memoized series fetch; (p, cap) selects the residue ring.

    Exact series are also written through to the disk cache when
    MEROFORMS_CACHE is set, keyed by the source descriptor and bucket.
    """
    NB = _bucket(N)
    key = (source.key, NB, p, cap)
    with _SERIES_LOCK:
        hit = _SERIES_MEMO.get(key)
    if hit is not None:
        return hit
    disk = default_cache() if p is None else None
    disk_key = f"{source.key}|N={NB}"
    if disk is not None:
        try:
            ser = disk.get(disk_key)
        except CorruptEntry:
            ser = None  # recompute below
        if ser is not None:
            with _SERIES_LOCK:
                _SERIES_MEMO[key] = ser
            return ser
    ring = ZZ if p is None else PadicRing(p, cap)
    ser = source.builder(NB, ring)
    with _SERIES_LOCK:
        if len(_SERIES_MEMO) > 512:
            _SERIES_MEMO.clear()
        _SERIES_MEMO[key] = ser
    if disk is not None:
        disk.put(disk_key, ser)
    return ser


def src_fkc(k: int, c, r: int = 1, label: str | None = None) -> SeriesSource:
    c = Fraction(c)
    name = label or f"fkc:k={k},c={c},r={r}"
    return SeriesSource(name, lambda N, ring: f_series(k, c, r, N, ring=ring).series)


def src_g_kdr(k: int, D: int, r: int) -> SeriesSource:
    vec, _ = cm_mod.construct_g(k, D, r)
    j_D = cm_mod.cm_constants(D).j

    def build(N, ring):
        return cm_mod.assemble_combination(k, j_D, vec, N, ring=ring)

    return SeriesSource(f"gkdr:k={k},D={D},r={r}", build)


def src_gtilde(k: int, D: int) -> SeriesSource:
    j_D, vec = cm_mod.tilde_vector(k, D)

    def build(N, ring):
        return cm_mod.assemble_combination(k, j_D, vec, N, ring=ring)

    return SeriesSource(f"gtilde:k={k},D={D}", build)


def src_kazalicki_scholl() -> SeriesSource:
    def build(N, ring):
        E4 = eisenstein(4, N + 2, ring).series
        D = delta(N + 2, ring).series
        F = E4**6 * D.invert() - (E4**3).scale(1464)
        return F.truncate(N)

    return SeriesSource("ks:E4^6/Delta-1464E4^3", build)


def src_weight16_relation(curve_name: str) -> SeriesSource:
    """Weight-16 object (g_16/(j-j(C)))|lambda, g_16 = E_4 Delta, lambda the
    cusp-killing relation."""
    C = ell.curve(curve_name)
    c = C.j_invariant
    lam = cusp_relation(16)
    maxm = len(lam)

    def build(N, ring):
        work = N * maxm + 4
        from .meromorphic import pole_denominator

        cf = Fraction(c)
        if isinstance(ring, PadicRing):
            m = ring.p**ring.N
            cc = cf.numerator * pow(cf.denominator, -1, m) % m
            eff = ring
        elif cf.denominator == 1:
            cc, eff = cf.numerator, ring
        else:
            cc, eff = cf, QQ
        E4 = eisenstein(4, work, eff).series
        D = delta(work, eff).series
        B = pole_denominator(cc, work, eff)
        F = E4 * D * D * B.invert()
        out = None
        for mm, coef in enumerate(lam, start=1):
            if not coef:
                continue
            term = hecke(F, mm, 16).scale(coef)
            out = term if out is None else out + term
        return out.truncate(N)

    return SeriesSource(f"s72:16,{curve_name}", build)


# ---------------------------------------------------------------------------
# cells and reports


@dataclass(frozen=True)
class Cell:
    tag: str
    p: int
    n: int
    l: int
    required: int | None
    observed: object  # int | "inf" | ">=C" | None
    status: str  # PASS | FAIL | SKIPPED | CAPPED

    def to_dict(self):
        return {
            "tag": self.tag,
            "p": self.p,
            "n": self.n,
            "l": self.l,
            "required": self.required,
            "observed": self.observed,
            "status": self.status,
        }


@dataclass
class VerificationReport:
    id: str
    kind: str
    params: dict
    filter_desc: str
    cells: list
    fingerprint: dict = field(default_factory=fingerprint)

    @property
    def summary(self) -> dict:
        counts = {"PASS": 0, "FAIL": 0, "SKIPPED": 0, "CAPPED": 0}
        for c in self.cells:
            counts[c.status] += 1
        counts["total"] = len(self.cells)
        counts["ok"] = counts["FAIL"] == 0 and counts["CAPPED"] == 0
        return counts

    def to_json(self) -> str:
        doc = {
            "id": self.id,
            "kind": self.kind,
            "params": self.params,
            "filter": self.filter_desc,
            "cells": [c.to_dict() for c in self.cells],
            "summary": self.summary,
            "fingerprint": self.fingerprint,
        }
        return json.dumps(doc, sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        doc = json.loads(text)
        cells = [
            Cell(
                d.get("tag", ""),
                d["p"],
                d["n"],
                d["l"],
                d["required"],
                d["observed"],
                d["status"],
            )
            for d in doc["cells"]
        ]
        rep = cls(doc["id"], doc["kind"], doc["params"], doc["filter"], cells, doc["fingerprint"])
        if rep.summary != doc["summary"]:
            raise CorruptEntry("summary does not match cells")
        return rep


# ---------------------------------------------------------------------------
# congruence specifications


@dataclass
class CongruenceSpec:
    """One verifiable statement family.

    jobs: list of (tag, job) where a job bundles the series source(s),
    coefficient provider, modulus law and filter for one sub-family.
    """

    id: str
    kind: str  # "theorem" | "conjecture"
    check_type: str  # recurrence | product | magnetic | product-magnetic | hypergeom
    params: dict
    filter_desc: str
    jobs: list


@dataclass
class RecurrenceJob:
    source: SeriesSource
    source2: SeriesSource | None  # product congruences
    coeffs: object  # callable(p, cap) -> list[(lag, residue-ish)]
    required: object  # callable(p, n, l) -> int
    primes: list
    ns: list
    ls: list
    prime_filter: object  # callable(p) -> True | (False, reason)
    embed: object = None  # callable(p, cap) -> int for ideal-side checks
    exact: bool | None = None  # force exact/modular series


@dataclass
class MagneticJob:
    source: SeriesSource
    source2: SeriesSource | None
    r: int
    nmax: int


@dataclass
class HypergeomJob:
    c: Fraction
    primes: list
    ls: list


def _lag_index(n: int, p: int, l: int, lag: int):
    """Index n*p^{l-lag}, or None when it is not an integer."""
    e = l - lag
    if e >= 0:
        return n * p**e
    q = p**-e
    return n // q if n % q == 0 else None


def _coeff_int(value, p: int, cap: int):
    """Residue of an exact/unit coefficient mod p^cap, with its precision."""
    from .exactnum import PadicApprox

    mod = p**cap
    if isinstance(value, PadicApprox):
        return value.residue % p ** min(value.N, cap), min(value.N, cap)
    if isinstance(value, Fraction):
        if value.denominator % p == 0:
            raise ValueError("coefficient denominator not a p-unit")
        return value.numerator * pow(value.denominator, -1, mod) % mod, cap
    return int(value) % mod, cap


def _observed_from_residue(residue: int, p: int, cap: int):
    if residue == 0:
        return f">={cap}", cap
    v = valuation(residue, p)
    return v, v


def _observed_exact(value, p: int):
    if value == 0:
        return "inf", 10**9
    if isinstance(value, Fraction):
        v = fraction_valuation(value, p)
    else:
        v = valuation(value, p)
    return v, v


def _run_recurrence_job(tag: str, job: RecurrenceJob, product: bool) -> list[Cell]:
    cells = []
    for p in job.primes:
        verdict = job.prime_filter(p)
        if verdict is not True:
            reason = verdict[1] if isinstance(verdict, tuple) else "filtered"
            for n in job.ns:
                for l in job.ls:
                    cells.append(Cell(tag, p, n, l, None, reason, "SKIPPED"))
            continue
        # group the cells of this prime around one series fetch
        reqs = {(n, l): job.required(p, n, l) for n in job.ns for l in job.ls}
        live = {k: r for k, r in reqs.items() if r >= 1}
        for (n, l), r in reqs.items():
            if r < 1:
                cells.append(Cell(tag, p, n, l, r, "vacuous", "SKIPPED"))
        if not live:
            continue
        cap = max(live.values()) + VALUATION_SLACK
        max_index = max(n * p**l for (n, l) in live)
        use_exact = job.exact
        if use_exact is None:
            use_exact = max_index <= EXACT_INDEX_THRESHOLD
        if use_exact:
            ser = get_series(job.source, max_index)
            ser2 = get_series(job.source2, max_index) if job.source2 else None
        else:
            ser = get_series(job.source, max_index, p, cap)
            ser2 = get_series(job.source2, max_index, p, cap) if job.source2 else None
        coeff_list = job.coeffs(p, cap)
        emb = job.embed(p, cap) if job.embed else None
        for (n, l), required in sorted(live.items()):
            try:
                cells.append(
                    _evaluate_cell(
                        tag, p, n, l, required, cap, ser, ser2, coeff_list, emb, product
                    )
                )
            except InsufficientPrecision as exc:
                # a short source can never fabricate a PASS
                cells.append(Cell(tag, p, n, l, required, f"capped: {exc}", "CAPPED"))
    return cells


def _series_value(ser, idx, p, cap):
    """(value, is_exact): coefficient as int/Fraction or residue."""
    from .exactnum import PadicApprox
    from .qseries import OutOfPrecision

    try:
        c = ser.coeff(idx)
    except OutOfPrecision as exc:
        raise InsufficientPrecision(str(exc))
    if isinstance(c, PadicApprox):
        return c.residue, False
    return c, True


def _evaluate_cell(tag, p, n, l, required, cap, ser, ser2, coeff_list, emb, product):
    mod = p**cap

    def a(idx):
        if idx is None:
            return 0, True
        v, ex = _series_value(ser, idx, p, cap)
        if ser2 is not None:
            v2, ex2 = _series_value(ser2, idx, p, cap)
            return v * v2, ex and ex2
        return v, ex

    total, exact = a(n * p**l)
    all_exact = exact
    for lag, cval in coeff_list:
        av, ex = a(_lag_index(n, p, l, lag))
        all_exact = all_exact and ex
        if av == 0:
            continue
        if emb is not None and hasattr(cval, "D"):
            cres = (cval.x + cval.y * emb) % mod
            total = total + cres * av
            all_exact = False
        elif isinstance(cval, Fraction) or isinstance(cval, int):
            total = total + cval * av
        else:  # PadicApprox
            total = total + cval.residue * av
            all_exact = False
    if all_exact:
        observed, ov = _observed_exact(total, p)
    else:
        if isinstance(total, Fraction):
            if total.denominator % p == 0:
                raise ValueError("inexact combination with non-unit denominator")
            total = total.numerator * pow(total.denominator, -1, mod)
        observed, ov = _observed_from_residue(total % mod, p, cap)
    if ov >= required:
        status = "PASS"
    elif isinstance(observed, str) and observed.startswith(">="):
        status = "CAPPED"
    else:
        status = "FAIL"
    return Cell(tag, p, n, l, required, observed, status)


def _run_magnetic_job(tag: str, job: MagneticJob) -> list[Cell]:
    ser = get_series(job.source, job.nmax)
    ser2 = get_series(job.source2, job.nmax) if job.source2 else None
    cells = []
    for n in range(1, job.nmax + 1):
        an = ser.coeff(n)
        if ser2 is not None:
            an = an * ser2.coeff(n)
        if isinstance(an, Fraction):
            if an.denominator != 1:
                cells.append(Cell(tag, 0, n, 0, job.r, "non-integral", "FAIL"))
                continue
            an = an.numerator
        if an == 0:
            cells.append(Cell(tag, 0, n, 0, job.r, "inf", "PASS"))
            continue
        e = 0
        while n > 1 and an % n ** (e + 1) == 0:
            e += 1
        observed = "inf" if n == 1 else e
        ok = n == 1 or e >= job.r
        cells.append(Cell(tag, 0, n, 0, job.r, observed, "PASS" if ok else "FAIL"))
    return cells


def _run_hypergeom_job(tag: str, job: HypergeomJob) -> list[Cell]:
    cells = []
    for p in job.primes:
        for l in job.ls:
            if fraction_valuation(job.c, p) != 0:
                cells.append(Cell(tag, p, 1, l, 1, "v_p(c) != 0", "SKIPPED"))
                continue
            r = hyp.theorem52_check(job.c, p, l)
            cells.append(
                Cell(tag, p, 1, l, 1, 1 if r["ok"] else 0, "PASS" if r["ok"] else "FAIL")
            )
    return cells


def check(spec: CongruenceSpec, parallelism: int = 1) -> VerificationReport:
    """Evaluate every cell of a spec; deterministic regardless of parallelism."""

    def run(entry):
        tag, job = entry
        if spec.check_type in ("recurrence", "product"):
            return _run_recurrence_job(tag, job, spec.check_type == "product")
        if spec.check_type in ("magnetic", "product-magnetic"):
            return _run_magnetic_job(tag, job)
        if spec.check_type == "hypergeom":
            return _run_hypergeom_job(tag, job)
        raise ValueError(f"unknown check type {spec.check_type}")

    if parallelism > 1 and len(spec.jobs) > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as ex:
            chunks = list(ex.map(run, spec.jobs))
    else:
        chunks = [run(entry) for entry in spec.jobs]
    cells = [c for chunk in chunks for c in chunk]
    cells.sort(key=lambda c: (c.tag, c.p, c.n, c.l))
    return VerificationReport(spec.id, spec.kind, spec.params, spec.filter_desc, cells)


def sweep(ids, parallelism: int = 1, overrides: dict | None = None) -> dict:
    """Run several registry specs; deduplicated, deterministic aggregation."""
    seen = []
    for i in ids:
        if i not in seen:
            seen.append(i)
    reports = {}
    for sid in sorted(seen):
        spec = registry(sid, **(overrides or {}).get(sid, {}))
        reports[sid] = check(spec, parallelism=parallelism)
    return reports


def sharpness_probe(spec: CongruenceSpec, parallelism: int = 1) -> dict:
    """Minimal observed-minus-required slack over the PASS cells."""
    rep = check(spec, parallelism=parallelism)
    min_slack = None
    witness = None
    capped = 0
    for c in rep.cells:
        if c.status != "PASS" or c.required is None:
            continue
        if isinstance(c.observed, int):
            slack = c.observed - c.required
            if min_slack is None or slack < min_slack:
                min_slack, witness = slack, c
        else:
            capped += 1
    return {
        "id": spec.id,
        "min_slack": min_slack,
        "witness": witness.to_dict() if witness else None,
        "capped_cells": capped,
        "fail_cells": rep.summary["FAIL"],
    }


# ---------------------------------------------------------------------------
# filters and coefficient helpers


def _good_filter(C, k):
    """Good prime with the valuation hypotheses appropriate for j(C)."""
    j = C.j_invariant
    if j in (0, 1728):

        def filt(p):
            if p in (2, 3):
                return (False, "p | 6")
            if not C.has_good_reduction(p):
                return (False, "bad reduction")
            a = ell.ap(C, p)
            if a % p == 0 and p < k - 1:
                return (False, "supersingular p < k-1")
            return True

        return filt, f"good p, p coprime to 6, supersingular => p >= {k - 1}"

    def filt(p):
        if p < 5:
            return (False, "p < 5")
        if not C.has_good_reduction(p):
            return (False, "bad reduction")
        if fraction_valuation(j, p) != 0:
            return (False, "v_p(j) != 0")
        if fraction_valuation(j - 1728, p) != 0:
            return (False, "v_p(j-1728) != 0")
        return True

    return filt, "good p >= 5, v_p(j) = 0 = v_p(j-1728)"


def _cm_point_filter(D: int, require=None):
    ctx = cm_mod.cm_constants(D)
    j = ctx.j

    def filt(p):
        if p < 5:
            return (False, "p < 5")
        if D % p == 0:
            return (False, "p | D")
        if j not in (0, 1728):
            if fraction_valuation(j, p) != 0 or fraction_valuation(j - 1728, p) != 0:
                return (False, "valuation hypothesis")
        if require == "split" and kronecker(D, p) != 1:
            return (False, "not split")
        if require == "inert" and kronecker(D, p) != -1:
            return (False, "not inert")
        return True

    side = {"split": ", (D/p) = 1", "inert": ", (D/p) = -1", None: ""}[require]
    return filt, f"p >= 5, p coprime to D, valuation hypotheses{side}"


_D_TO_CURVE = {-7: "49.a4", -4: "32.a3", -3: "27.a4"}


def _unit_root_power(C, p, cap, exponent):
    a = ell.ap(C, p)
    u = unit_root(a, p, cap)
    return u**exponent if exponent >= 0 else u.inverse() ** (-exponent)


# ---------------------------------------------------------------------------
# the registry


def registry(spec_id: str, **params) -> CongruenceSpec:
    """Named constructors for every registered congruence statement."""
    base_id = spec_id.split(":")[0]
    builder = _REGISTRY.get(base_id)
    if builder is None:
        raise UnknownId(f"unknown registry id {spec_id!r}; known: {registry_ids()}")
    return builder(spec_id, **params)


def registry_ids() -> list[str]:
    return sorted(_REGISTRY)


def _spec_T11(spec_id, nmax: int = 500, r: int = 1):
    jobs = [
        ("E4/j", MagneticJob(src_fkc(4, 0, 1), None, r, nmax)),
        ("E4/(j-1728)", MagneticJob(src_fkc(4, 1728, 1), None, r, nmax)),
    ]
    return CongruenceSpec(
        spec_id, "theorem", "magnetic", {"r": r, "nmax": nmax}, "all n", jobs
    )


def _spec_T12(spec_id, primes=(5, 7, 11, 13), lmax: int = 2, nmax: int = 3000, pmax=None):
    if pmax is not None:
        primes = tuple(primes_in(5, pmax))
    # one job per (pole, p, l) so the n-range can shrink with p^l
    jobs = []
    for pole, disc, tag in ((0, -3, "E4/j"), (1728, -4, "E4/(j-1728)")):
        src = src_fkc(4, pole, 1)

        def coeffs(p, cap, disc=disc):
            return [(1, -kronecker(disc, p) * p)]

        for p in primes:
            if not is_prime(p) or p < 5:
                continue
            for l in range(1, lmax + 1):
                ns = list(range(1, max(1, nmax // p**l) + 1))
                jobs.append(
                    (
                        tag,
                        RecurrenceJob(
                            src,
                            None,
                            coeffs,
                            lambda p, n, l: 3 * l,
                            [p],
                            ns,
                            [l],
                            lambda p: True,
                        ),
                    )
                )
    return CongruenceSpec(
        spec_id,
        "theorem",
        "recurrence",
        {"primes": list(primes), "lmax": lmax, "nmax": nmax},
        "p >= 5",
        jobs,
    )


def _spec_C14(spec_id, curve="49.a4", pmax: int = 97):
    C = ell.curve(curve)
    filt, desc = _good_filter(C, 4)

    def full_filter(p):
        v = filt(p)
        if v is not True:
            return v
        if ell.ap(C, p) % p != 0:
            return (False, "ordinary")
        return True

    job = RecurrenceJob(
        src_fkc(4, C.j_invariant, 1, label=f"fkc:4,{curve},1"),
        None,
        lambda p, cap: [],
        lambda p, n, l: 2,
        primes_in(5, pmax),
        [1],
        [1],
        full_filter,
    )
    return CongruenceSpec(
        spec_id,
        "conjecture",
        "recurrence",
        {"curve": curve, "pmax": pmax},
        desc + ", supersingular",
        [("a_p", job)],
    )


def _spec_C15(spec_id, curve="49.a4", pmax: int = 13, nmax: int = 6, lset=(2, 3)):
    C = ell.curve(curve)
    filt, desc = _good_filter(C, 4)

    def coeffs(p, cap):
        cs = ell.sym_charpoly(C, p, 4)
        return [(i + 1, cs[i]) for i in range(3)]

    job = RecurrenceJob(
        src_fkc(4, C.j_invariant, 1, label=f"fkc:4,{curve},1"),
        None,
        coeffs,
        lambda p, n, l: 3 * l - 3,
        primes_in(5, pmax),
        list(range(1, nmax + 1)),
        list(lset),
        filt,
    )
    return CongruenceSpec(
        spec_id,
        "conjecture",
        "recurrence",
        {"curve": curve, "pmax": pmax, "nmax": nmax},
        desc,
        [("sym2", job)],
    )


def _spec_T16(spec_id, cs=(-3375, 8000, 54000, 287496, 1, 2), pmin=5, pmax=31, lmax=2):
    jobs = [
        (f"c={c}", HypergeomJob(Fraction(c), primes_in(pmin, pmax), list(range(1, lmax + 1))))
        for c in cs
    ]
    return CongruenceSpec(
        spec_id,
        "theorem",
        "hypergeom",
        {"cs": [str(c) for c in cs], "pmax": pmax, "lmax": lmax},
        "p >= 5, v_p(c) = 0",
        jobs,
    )


def _simple_pole_ks(C) -> list[int]:
    j = C.j_invariant
    if j == 0:
        return [k for k in (4, 6, 8, 10, 14) if cm_mod.pole_profile(k, 0)[1][0] == 1]
    if j == 1728:
        return [k for k in (4, 6, 8, 10, 14) if cm_mod.pole_profile(k, 1728)[1][0] == 1]
    return [4, 6, 8, 10, 14]


def _spec_C21(spec_id, curve="49.a4", ks=None, pmax: int = 97, nmax: int = 20):
    C = ell.curve(curve)
    ks = ks or _simple_pole_ks(C)
    jobs = []
    for k in ks:
        filt, desc = _good_filter(C, k)

        def coeffs(p, cap, k=k):
            return [(1, -ell.ap(C, p) ** (k - 2))]

        jobs.append(
            (
                f"k={k}",
                RecurrenceJob(
                    src_fkc(k, C.j_invariant, 1, label=f"fkc:{k},{curve},1"),
                    None,
                    coeffs,
                    lambda p, n, l: 1,
                    primes_in(5, pmax),
                    list(range(1, nmax + 1)),
                    [1],
                    filt,
                ),
            )
        )
    return CongruenceSpec(
        spec_id,
        "conjecture",
        "recurrence",
        {"curve": curve, "ks": ks, "pmax": pmax, "nmax": nmax},
        desc,
        jobs,
    )


def _spec_C22(spec_id, curve="49.a4", ks=(4, 6), pmax=31, nmax=10, lmax=2):
    C = ell.curve(curve)
    jobs = []
    for k in ks:
        filt, desc = _good_filter(C, k)

        def full_filter(p, filt=filt):
            v = filt(p)
            if v is not True:
                return v
            if ell.ap(C, p) % p != 0:
                return (False, "ordinary")
            return True

        jobs.append(
            (
                f"k={k}",
                RecurrenceJob(
                    src_fkc(k, C.j_invariant, 1, label=f"fkc:{k},{curve},1"),
                    None,
                    lambda p, cap, k=k: [(2, -(p ** (k - 2)))],
                    lambda p, n, l, k=k: (k - 1) * l - 1,
                    primes_in(5, pmax),
                    list(range(1, nmax + 1)),
                    list(range(1, lmax + 1)),
                    full_filter,
                ),
            )
        )
    return CongruenceSpec(
        spec_id,
        "conjecture",
        "recurrence",
        {"curve": curve, "ks": list(ks), "pmax": pmax, "nmax": nmax, "lmax": lmax},
        desc + ", supersingular",
        jobs,
    )


def _spec_C23(spec_id, curve="49.a4", ks=(4, 6), pmax=31, nmax=10, lmax=2):
    C = ell.curve(curve)
    has_cm = curve in _D_TO_CURVE.values() or params_curve_cm(C)
    jobs = []
    for k in ks:
        filt, desc = _good_filter(C, k)

        def full_filter(p, filt=filt):
            v = filt(p)
            if v is not True:
                return v
            if ell.ap(C, p) % p == 0:
                return (False, "supersingular")
            return True

        def coeffs(p, cap, k=k):
            return [(1, -_unit_root_power(C, p, cap, k - 2))]

        req = (lambda p, n, l, k=k: (k - 1) * l) if has_cm else (lambda p, n, l: l)
        jobs.append(
            (
                f"k={k}",
                RecurrenceJob(
                    src_fkc(k, C.j_invariant, 1, label=f"fkc:{k},{curve},1"),
                    None,
                    coeffs,
                    req,
                    primes_in(5, pmax),
                    list(range(1, nmax + 1)),
                    list(range(1, lmax + 1)),
                    full_filter,
                ),
            )
        )
    return CongruenceSpec(
        spec_id,
        "conjecture",
        "recurrence",
        {"curve": curve, "ks": list(ks), "cm": has_cm, "pmax": pmax, "nmax": nmax},
        desc + ", ordinary",
        jobs,
    )


def params_curve_cm(C) -> bool:
    """Desk CM detection: supersingular pattern against the known j-list."""
    cm_js = {0, 1728, -3375, 8000, 54000, 287496, -32768, -884736, 16581375,
             -12288000, -884736000, -147197952000, -262537412640768000}
    return C.j_invariant in cm_js


def _spec_C24(spec_id, curve="49.a4", ks=(4, 6), pmax=31, nmax=10, lmax=2):
    C = ell.curve(curve)
    D = ell.CM_DISCRIMINANT.get(C.label)
    if D is None:
        raise ValueError(f"{C.label} has no registered CM discriminant")
    return _theta_asd_spec(spec_id, curve, D, C.j_invariant, ks, pmax, nmax, lmax)


def _spec_C26(spec_id, D=-7, ks=(4, 6), pmax=31, nmax=10, lmax=2):
    # discriminant language: F_{k,D} at j_D, no curve needed
    j_D = cm_mod.cm_constants(D).j
    return _theta_asd_spec(spec_id, None, D, j_D, ks, pmax, nmax, lmax)


def _theta_asd_spec(spec_id, curve, D, j_pole, ks, pmax, nmax, lmax):
    jobs = []
    for k in ks:
        filt, desc = _cm_point_filter(D)

        def coeffs(p, cap, k=k):
            return [
                (1, -ell.theta_coeff(D, k - 2, p)),
                (2, kronecker(D, p) * p ** (k - 2)),
            ]

        label = f"fkc:{k},{curve or f'D={D}'},1"
        jobs.append(
            (
                f"k={k}",
                RecurrenceJob(
                    src_fkc(k, j_pole, 1, label=label),
                    None,
                    coeffs,
                    lambda p, n, l, k=k: (k - 1) * l - 1,
                    primes_in(5, pmax),
                    list(range(1, nmax + 1)),
                    list(range(1, lmax + 1)),
                    filt,
                ),
            )
        )
    return CongruenceSpec(
        spec_id,
        "conjecture",
        "recurrence",
        {"curve": curve, "D": D, "ks": list(ks), "pmax": pmax, "nmax": nmax},
        desc,
        jobs,
    )


def _spec_C28(spec_id, D=-7, ks=(4, 6), pmax=31, nmax=8, lmax=2):
    curve = _D_TO_CURVE.get(D, None)
    j_D = cm_mod.cm_constants(D).j
    jobs = []
    for k in ks:
        filt, desc = _cm_point_filter(D, require="split")
        for side in ("pibar", "pi"):
            # a_{np^l} = pi^{k-2} a_{np^{l-1}} mod pibar^{(k-1)l} and conjugate

            def coeffs(p, cap, k=k, side=side):
                pi = cornacchia_split(p, D)
                if side == "pi":
                    pi = pi.conjugate()
                return [(1, -(pi ** (k - 2)))]

            def embed(p, cap, side=side):
                pi = cornacchia_split(p, D)
                # embedding under which the *modulus side* has valuation:
                # reduce mod pibar^e: send sqrt(D) to the root with pibar -> 0
                target = pi.conjugate() if side == "pibar" else pi
                z0 = (-target.trace() * pow(target.y, -1, p)) % p
                z = padic_sqrt(D, p, cap, root_mod_p=z0)
                return (D + z) * pow(2, -1, p**cap) % p**cap

            jobs.append(
                (
                    f"k={k},{side}",
                    RecurrenceJob(
                        src_fkc(k, j_D, 1, label=f"fkc:{k},D={D},1"),
                        None,
                        coeffs,
                        lambda p, n, l, k=k: (k - 1) * l,
                        primes_in(5, pmax),
                        list(range(1, nmax + 1)),
                        list(range(1, lmax + 1)),
                        filt,
                        embed=embed,
                    ),
                )
            )
    return CongruenceSpec(
        spec_id,
        "conjecture",
        "recurrence",
        {"D": D, "ks": list(ks), "pmax": pmax, "nmax": nmax},
        desc,
        jobs,
    )


def _spec_C32(spec_id, curve="49.a4", ks=(4, 6), pmax=13, nmax=8, lmax=None):
    # the exponent law only clears 1 from l = 2 (k = 4) resp. l = 3 (k = 6)
    C = ell.curve(curve)
    jobs = []
    for k in ks:
        filt, desc = _good_filter(C, k)
        ls = list(range(1, (lmax or min(k - 1, 3)) + 1))
        for r in range(1, k):

            def coeffs(p, cap, k=k):
                cs = ell.sym_charpoly(C, p, k)
                return [(i + 1, cs[i]) for i in range(k - 1)]

            jobs.append(
                (
                    f"k={k},r={r}",
                    RecurrenceJob(
                        src_fkc(k, C.j_invariant, r, label=f"fkc:{k},{curve},{r}"),
                        None,
                        coeffs,
                        lambda p, n, l, k=k, r=r: (k - 1) * l - (k - 3) * k // 2 - r,
                        primes_in(5, pmax),
                        list(range(1, nmax + 1)),
                        ls,
                        filt,
                    ),
                )
            )
    return CongruenceSpec(
        spec_id,
        "conjecture",
        "recurrence",
        {"curve": curve, "ks": list(ks), "pmax": pmax, "nmax": nmax},
        desc,
        jobs,
    )


def _spec_C33(spec_id, curve="49.a4", ks=(4, 6), pmax=13, nmax=8, lmax=2):
    C = ell.curve(curve)
    jobs = []
    for k in ks:
        filt, desc = _good_filter(C, k)

        def full_filter(p, filt=filt):
            v = filt(p)
            if v is not True:
                return v
            if ell.ap(C, p) % p != 0:
                return (False, "ordinary")
            return True

        for r in range(1, k):
            jobs.append(
                (
                    f"k={k},r={r}",
                    RecurrenceJob(
                        src_fkc(k, C.j_invariant, r, label=f"fkc:{k},{curve},{r}"),
                        None,
                        lambda p, cap, k=k: [(2, -(p ** (k - 2)))],
                        lambda p, n, l, k=k, r=r: (k - 1) * l - r,
                        primes_in(5, pmax),
                        list(range(1, nmax + 1)),
                        list(range(1, lmax + 1)),
                        full_filter,
                    ),
                )
            )
    return CongruenceSpec(
        spec_id,
        "conjecture",
        "recurrence",
        {"curve": curve, "ks": list(ks), "pmax": pmax, "nmax": nmax},
        desc + ", supersingular",
        jobs,
    )


def _gkdr_rs(k: int, D: int) -> list[int]:
    j = cm_mod.cm_constants(D).j
    if j in (0, 1728):
        return cm_mod.pole_profile(k, int(j))[1]
    return list(range(1, k))


def _spec_C41(spec_id, k=4, D=-7, pmax=31, nmax=10, lmax=2, rs=None):
    rs = rs or _gkdr_rs(k, D)
    filt, desc = _cm_point_filter(D, require="inert")
    jobs = []
    for r in rs:
        jobs.append(
            (
                f"r={r}",
                RecurrenceJob(
                    src_g_kdr(k, D, r),
                    None,
                    lambda p, cap: [(2, -(p ** (k - 2)))],
                    lambda p, n, l, r=r: (k - 1) * l - r,
                    primes_in(5, pmax),
                    list(range(1, nmax + 1)),
                    list(range(1, lmax + 1)),
                    filt,
                ),
            )
        )
    return CongruenceSpec(
        spec_id,
        "conjecture",
        "recurrence",
        {"k": k, "D": D, "rs": rs, "pmax": pmax, "nmax": nmax},
        desc,
        jobs,
    )


def _spec_C42(spec_id, k=4, D=-7, pmax=31, nmax=10, lmax=2, rs=None):
    rs = rs or _gkdr_rs(k, D)
    curve = _D_TO_CURVE.get(D)
    if curve is None:
        raise ValueError(f"no preset curve with CM by {D}")
    C = ell.curve(curve)
    filt, desc = _cm_point_filter(D, require="split")
    jobs = []
    for r in rs:

        def coeffs(p, cap, r=r):
            u = _unit_root_power(C, p, cap, k - 2 * r)
            return [(1, -(u * p ** (r - 1)))]

        jobs.append(
            (
                f"r={r}",
                RecurrenceJob(
                    src_g_kdr(k, D, r),
                    None,
                    coeffs,
                    lambda p, n, l: (k - 1) * l,
                    primes_in(5, pmax),
                    list(range(1, nmax + 1)),
                    list(range(1, lmax + 1)),
                    filt,
                ),
            )
        )
    return CongruenceSpec(
        spec_id,
        "conjecture",
        "recurrence",
        {"k": k, "D": D, "rs": rs, "curve": curve, "pmax": pmax, "nmax": nmax},
        desc,
        jobs,
    )


def _spec_C44(spec_id, k=4, D=-7, nmax=200, rs=None):
    rs = rs or _gkdr_rs(k, D)
    jobs = []
    for r in rs:
        rp = min(r, k - r)
        jobs.append((f"r={r}", MagneticJob(src_g_kdr(k, D, r), None, rp - 1, nmax)))
    return CongruenceSpec(
        spec_id,
        "conjecture",
        "magnetic",
        {"k": k, "D": D, "rs": rs, "nmax": nmax},
        "all n",
        jobs,
    )


def _spec_T45(spec_id, k=4, D=-7, pmax=31, nmax=10, lmax=2):
    filt, desc = _cm_point_filter(D)
    job = RecurrenceJob(
        src_g_kdr(k, D, k // 2),
        None,
        lambda p, cap: [(1, -((kronecker(D, p) * p) ** ((k - 2) // 2)))],
        lambda p, n, l: (k - 1) * l,
        primes_in(5, pmax),
        list(range(1, nmax + 1)),
        list(range(1, lmax + 1)),
        filt,
    )
    return CongruenceSpec(
        spec_id,
        "theorem",
        "recurrence",
        {"k": k, "D": D, "pmax": pmax, "nmax": nmax},
        desc,
        [("middle", job)],
    )


def _spec_C46(spec_id, k=4, D=-7, pmax=31, nmax=8, lmax=2, rs=None):
    rs = rs or [r for r in _gkdr_rs(k, D) if r != k // 2]
    filt, desc = _cm_point_filter(D)
    jobs = []
    for r in rs:
        rp = min(r, k - r)

        def coeffs(p, cap, r=r, rp=rp):
            return [
                (1, -(p ** (rp - 1)) * ell.theta_coeff(D, k - 2 * rp, p)),
                (2, kronecker(D, p) * p ** (k - 2)),
            ]

        jobs.append(
            (
                f"r={r}",
                RecurrenceJob(
                    src_g_kdr(k, D, r),
                    None,
                    coeffs,
                    lambda p, n, l, r=r: (k - 1) * l - r,
                    primes_in(5, pmax),
                    list(range(1, nmax + 1)),
                    list(range(1, lmax + 1)),
                    filt,
                ),
            )
        )
    return CongruenceSpec(
        spec_id,
        "conjecture",
        "recurrence",
        {"k": k, "D": D, "rs": rs, "pmax": pmax, "nmax": nmax},
        desc,
        jobs,
    )


def _spec_C47(spec_id, k=4, D=-7, pmax=13, nmax=6, lmax=2, rs=None):
    all_rs = _gkdr_rs(k, D)
    filt, desc = _cm_point_filter(D)
    jobs = []
    pairs = rs or [(r, k - r) for r in all_rs if r <= k - r and (k - r) in all_rs]
    for r, r2 in pairs:
        rp = min(r, r2)
        jobs.append(
            (
                f"r={r}x{r2}",
                RecurrenceJob(
                    src_g_kdr(k, D, r),
                    src_g_kdr(k, D, r2),
                    lambda p, cap: [(1, -(p ** (k - 2)))],
                    lambda p, n, l, rp=rp: (k + rp - 2) * l,
                    primes_in(5, pmax),
                    list(range(1, nmax + 1)),
                    list(range(1, lmax + 1)),
                    filt,
                ),
            )
        )
    return CongruenceSpec(
        spec_id,
        "conjecture",
        "product",
        {"k": k, "D": D, "pairs": [list(x) for x in pairs], "pmax": pmax, "nmax": nmax},
        desc,
        jobs,
    )


def _spec_C48(spec_id, k=4, D=-7, nmax=120, rs=None):
    all_rs = _gkdr_rs(k, D)
    pairs = rs or [(r, k - r) for r in all_rs if r <= k - r and (k - r) in all_rs]
    jobs = []
    for r, r2 in pairs:
        jobs.append(
            (
                f"r={r}x{r2}",
                MagneticJob(src_g_kdr(k, D, r), src_g_kdr(k, D, r2), k - 2, nmax),
            )
        )
    return CongruenceSpec(
        spec_id,
        "conjecture",
        "product-magnetic",
        {"k": k, "D": D, "pairs": [list(x) for x in pairs], "nmax": nmax},
        "all n",
        jobs,
    )


def _spec_T51(spec_id, curve="49.a4", ks=(4, 6), pmax=31, nmax=10, field_D=-4):
    C = ell.curve(curve)
    jobs = []
    for k in ks:
        filt, desc = _good_filter(C, k)

        def full_filter(p, filt=filt):
            v = filt(p)
            if v is not True:
                return v
            if kronecker(field_D, p) != -1:
                return (False, "split in the quadratic field")
            return True

        def coeffs(p, cap, k=k):
            return [(2, -(ell.ap_power(C, p, 2) ** (k - 2)))]

        jobs.append(
            (
                f"k={k}",
                RecurrenceJob(
                    src_fkc(k, C.j_invariant, 1, label=f"fkc:{k},{curve},1"),
                    None,
                    coeffs,
                    lambda p, n, l: 1,
                    primes_in(5, pmax),
                    list(range(1, nmax + 1)),
                    [2],
                    full_filter,
                ),
            )
        )
    return CongruenceSpec(
        spec_id,
        "theorem",
        "recurrence",
        {"curve": curve, "ks": list(ks), "field_D": field_D, "pmax": pmax},
        desc + f", inert in Q(sqrt({field_D}))",
        jobs,
    )


def _spec_T61(spec_id, k=4, D=-7, pmax=31, nmax=10, lmax=2):
    ctx = cm_mod.cm_constants(D)

    def filt(p):
        if p < 5:
            return (False, "p < 5")
        if ctx.A % p == 0:
            return (False, "p | A")
        if D % p == 0:
            return (False, "p | D")
        return True

    job = RecurrenceJob(
        src_gtilde(k, D),
        None,
        lambda p, cap: [(1, -((kronecker(D, p) * p) ** ((k - 2) // 2)))],
        lambda p, n, l: (k - 1) * l,
        primes_in(5, pmax),
        list(range(1, nmax + 1)),
        list(range(1, lmax + 1)),
        filt,
    )
    return CongruenceSpec(
        spec_id,
        "theorem",
        "recurrence",
        {"k": k, "D": D, "pmax": pmax, "nmax": nmax, "lmax": lmax},
        "p >= 5, p coprime to A and D",
        [("gtilde", job)],
    )


def _spec_S71(spec_id, pmax=13, nmax=10, lmax=2):
    C = ell.curve("27.a4")
    src = src_fkc(14, 0, 1, label="fkc:14,j=0,1")
    jobs = []

    def ord_filter(p):
        if p in (2, 3):
            return (False, "p | 6")
        if kronecker(-3, p) != 1:
            return (False, "not split")
        return True

    def ord_coeffs(p, cap):
        return [(1, -_unit_root_power(C, p, cap, 12))]

    jobs.append(
        (
            "ordinary",
            RecurrenceJob(
                src,
                None,
                ord_coeffs,
                lambda p, n, l: 13 * l,
                primes_in(5, pmax),
                list(range(1, nmax + 1)),
                list(range(1, lmax + 1)),
                ord_filter,
            ),
        )
    )

    def ss_filter(p):
        if p in (2, 3):
            return (False, "p | 6")
        if kronecker(-3, p) != -1:
            return (False, "not inert")
        if p < 13:
            return (False, "p < k-1")
        return True

    jobs.append(
        (
            "supersingular",
            RecurrenceJob(
                src,
                None,
                lambda p, cap: [(2, -(p**12))],
                lambda p, n, l: 13 * l - 1,
                primes_in(5, pmax),
                list(range(1, nmax + 1)),
                list(range(1, lmax + 1)),
                ss_filter,
            ),
        )
    )
    return CongruenceSpec(
        spec_id,
        "conjecture",
        "recurrence",
        {"curve": "27.a4", "pmax": pmax, "nmax": nmax},
        "split: p >= 5; inert: p >= 13 (pole at j = 0 replaces the valuation filter)",
        jobs,
    )


def _spec_S72(spec_id, curve="49.a4", pmax=13, nmax=10):
    C = ell.curve(curve)
    filt, desc = _good_filter(C, 16)
    src = src_weight16_relation(curve)

    def coeffs(p, cap):
        return [(1, -ell.ap(C, p) ** 14)]

    job = RecurrenceJob(
        src,
        None,
        coeffs,
        lambda p, n, l: 1,
        primes_in(5, pmax),
        list(range(1, nmax + 1)),
        [1],
        filt,
    )
    return CongruenceSpec(
        spec_id,
        "conjecture",
        "recurrence",
        {"curve": curve, "k": 16, "pmax": pmax, "nmax": nmax},
        desc,
        [("k=16", job)],
    )


def _spec_KS(spec_id, primes=(2, 3, 5), nmax=30):
    src = src_kazalicki_scholl()
    jobs = []
    for p in primes:
        tau_p = delta(p + 1, ZZ).series.coeff(p)

        def required(pp, n, l, p=p):
            return 11 * (valuation(n, p) if n % p == 0 else 0)

        jobs.append(
            (
                f"p={p}",
                RecurrenceJob(
                    src,
                    None,
                    lambda pp, cap, tau_p=tau_p, p=p: [(1, -tau_p), (2, p**11)],
                    required,
                    [p],
                    list(range(1, nmax + 1)),
                    [1],
                    lambda pp: True,
                    exact=True,
                ),
            )
        )
    return CongruenceSpec(
        spec_id,
        "theorem",
        "recurrence",
        {"primes": list(primes), "nmax": nmax},
        "all good p",
        jobs,
    )


_REGISTRY = {
    "T1.1": _spec_T11,
    "T1.2": _spec_T12,
    "C1.4": _spec_C14,
    "C1.5": _spec_C15,
    "T1.6": _spec_T16,
    "T5.2": _spec_T16,
    "C2.1": _spec_C21,
    "C2.2": _spec_C22,
    "C2.3": _spec_C23,
    "C2.4": _spec_C24,
    "C2.6": _spec_C26,
    "C2.8": _spec_C28,
    "C3.2": _spec_C32,
    "C3.3": _spec_C33,
    "C4.1": _spec_C41,
    "C4.2": _spec_C42,
    "C4.3": _spec_C44,  # the magnetic conjecture; numbering alias, see notes
    "C4.4": _spec_C44,
    "T4.5": _spec_T45,
    "C4.6": _spec_C46,
    "C4.7": _spec_C47,
    "C4.8": _spec_C48,
    "T5.1": _spec_T51,
    "T6.1": _spec_T61,
    "S7.1": _spec_S71,
    "S7.2": _spec_S72,
    "KS": _spec_KS,
}


# ---------------------------------------------------------------------------
# the persistent series cache


class SeriesCache:
    """Directory of series files (qseries text format) with a checksum index."""

    def __init__(self, directory: str):
        self.directory = directory
        os.makedirs(directory, exist_ok=True)
        self.index_path = os.path.join(directory, "index.txt")
        self._lock = threading.Lock()

    def _load_index(self) -> dict:
        out = {}
        if os.path.exists(self.index_path):
            with open(self.index_path) as fh:
                for line in fh:
                    parts = line.rstrip("\n").split("\t")
                    if len(parts) == 3:
                        out[parts[0]] = (parts[1], parts[2])
        return out

    def _store_index(self, index: dict):
        fd, tmp = tempfile.mkstemp(dir=self.directory)
        with os.fdopen(fd, "w") as fh:
            for key in sorted(index):
                fname, digest = index[key]
                fh.write(f"{key}\t{fname}\t{digest}\n")
        os.replace(tmp, self.index_path)

    def put(self, key: str, series: TruncatedSeries):
        payload = series_to_text(series)
        digest = hashlib.sha256(payload.encode()).hexdigest()
        fname = hashlib.sha256(key.encode()).hexdigest()[:20] + ".series"
        fd, tmp = tempfile.mkstemp(dir=self.directory)
        with os.fdopen(fd, "w") as fh:
            fh.write(payload)
        os.replace(tmp, os.path.join(self.directory, fname))
        with self._lock:
            index = self._load_index()
            index[key] = (fname, digest)
            self._store_index(index)

    def get(self, key: str):
        with self._lock:
            index = self._load_index()
        entry = index.get(key)
        if entry is None:
            return None
        fname, digest = entry
        path = os.path.join(self.directory, fname)
        if not os.path.exists(path):
            return None
        payload = open(path).read()
        if hashlib.sha256(payload.encode()).hexdigest() != digest:
            raise CorruptEntry(f"checksum mismatch for {key!r}")
        return series_from_text(payload)


def default_cache() -> SeriesCache | None:
    directory = os.environ.get("MEROFORMS_CACHE")
    return SeriesCache(directory) if directory else None


def cache_put(key: str, series: TruncatedSeries, directory: str | None = None):
    cache = SeriesCache(directory) if directory else default_cache()
    if cache is None:
        raise ValueError("no cache directory configured (MEROFORMS_CACHE)")
    cache.put(key, series)


def cache_get(key: str, directory: str | None = None):
    cache = SeriesCache(directory) if directory else default_cache()
    if cache is None:
        raise ValueError("no cache directory configured (MEROFORMS_CACHE)")
    return cache.get(key)
