import json
import os

import pytest

from meroforms.harness import (
    CorruptEntry,
    SeriesCache,
    UnknownId,
    VerificationReport,
    check,
    registry,
    registry_ids,
    sharpness_probe,
    src_fkc,
    sweep,
)
from meroforms.modforms import delta
from meroforms.qseries import ZZ

REQUIRED_IDS = [
    "T1.1", "T1.2", "C1.4", "C1.5", "T1.6", "T5.2",
    "C2.1", "C2.2", "C2.3", "C2.4", "C2.6", "C2.8",
    "C3.2", "C3.3",
    "C4.1", "C4.2", "C4.4", "T4.5", "C4.6", "C4.7", "C4.8",
    "T5.1", "T6.1", "S7.1", "S7.2", "KS",
]


def test_registry_coverage():
    ids = registry_ids()
    missing = [r for r in REQUIRED_IDS if r not in ids]
    assert not missing, f"registry is missing {missing}"
    with pytest.raises(UnknownId):
        registry("X9.9")


def test_kazalicki_scholl():
    rep = check(registry("KS"))
    assert rep.summary["FAIL"] == 0 and rep.summary["CAPPED"] == 0
    # all nontrivial cells (p | n) genuinely verified
    assert rep.summary["PASS"] > 20


def test_magnetic_spec_and_sharpness():
    rep = check(registry("T1.1", nmax=100))
    assert rep.summary["ok"]
    rep2 = check(registry("T1.1", nmax=100, r=2))
    assert rep2.summary["FAIL"] > 0  # not 2-magnetic, with witnesses
    probe = sharpness_probe(registry("T1.2", nmax=100, primes=(5, 7), lmax=1))
    assert probe["fail_cells"] == 0
    assert probe["min_slack"] is not None and probe["min_slack"] >= 0


def test_never_pass_from_capped():
    # an artificial spec whose requirement exceeds the information cap must
    # come back CAPPED, never PASS
    from meroforms.harness import CongruenceSpec, RecurrenceJob

    def make(coeff_sign):
        job = RecurrenceJob(
            src_fkc(4, 0, 1),
            None,
            lambda p, cap: [(1, coeff_sign * p)],
            lambda p, n, l: 3,
            [5],
            [5],
            [1],
            lambda p: True,
            exact=False,
        )
        return CongruenceSpec("X", "conjecture", "recurrence", {}, "", [("t", job)])

    # (-3/5) = -1: the true recurrence is a_{np} + 5 a_n = 0 mod 125
    cell = check(make(+1)).cells[0]
    assert cell.status == "PASS"
    if isinstance(cell.observed, str) and cell.observed.startswith(">="):
        assert int(cell.observed[2:]) >= 3
    # a wrong-sign recurrence is detected exactly, never papered over
    bad = check(make(-1)).cells[0]
    assert bad.status == "FAIL" and bad.observed == 2


def test_report_round_trip(tmp_path):
    rep = check(registry("C1.4", pmax=50))
    text = rep.to_json()
    back = VerificationReport.from_json(text)
    assert back.to_json() == text
    # tampering with a cell breaks the summary consistency check
    doc = json.loads(text)
    if doc["cells"]:
        doc["cells"][0]["status"] = "FAIL"
        with pytest.raises(CorruptEntry):
            VerificationReport.from_json(json.dumps(doc))


def test_serial_parallel_identical():
    spec_args = ("T1.2",)
    kw = {"nmax": 150, "primes": (5, 7), "lmax": 2}
    r1 = check(registry(*spec_args, **kw), parallelism=1)
    r8 = check(registry(*spec_args, **kw), parallelism=8)
    assert r1.to_json() == r8.to_json()


def test_sweep_dedup_and_determinism():
    reports1 = sweep(["KS", "C1.4", "KS"])
    assert set(reports1) == {"KS", "C1.4"}
    reports2 = sweep(["C1.4", "KS"])
    for k in reports1:
        assert reports1[k].to_json() == reports2[k].to_json()


def test_vacuous_cells_skipped():
    # C3.2 at k=4, l=1, r=1 has exponent 0: cells must be SKIPPED, not PASS
    rep = check(registry("C3.2", curve="49.a4", ks=(4,), pmax=13, nmax=2, lmax=1))
    assert all(c.status == "SKIPPED" for c in rep.cells if c.l == 1 and "r=1" in c.tag)


def test_cache_round_trip(tmp_path):
    cache = SeriesCache(str(tmp_path))
    ser = delta(40).series
    cache.put("delta:40", ser)
    assert cache.get("delta:40") == ser
    assert cache.get("missing") is None
    # version-stamped key miss on parameter change
    assert cache.get("delta:41") is None
    # checksum tamper -> CorruptEntry
    index = open(cache.index_path).read()
    fname = index.split("\t")[1]
    path = os.path.join(str(tmp_path), fname)
    with open(path, "a") as fh:
        fh.write("9999\n")
    with pytest.raises(CorruptEntry):
        cache.get("delta:40")


def test_prime_filters_record_reasons():
    rep = check(registry("C2.1", curve="49.a4", ks=(4,), pmax=11, nmax=3))
    skipped = [c for c in rep.cells if c.status == "SKIPPED"]
    assert skipped and all(isinstance(c.observed, str) for c in skipped)


def test_sharpness_cm_slack():
    # at a CM curve the ordinary congruence holds mod p^{(k-1)l}, so probing
    # against the generic-law exponent l leaves slack >= (k-2)l
    from meroforms.harness import CongruenceSpec, RecurrenceJob, _unit_root_power
    from meroforms.elliptic import ap, curve

    C = curve("49.a4")

    def filt(p):
        if p in (2, 3, 5, 7):
            return (False, "small/bad")
        if ap(C, p) % p == 0:
            return (False, "supersingular")
        return True

    job = RecurrenceJob(
        src_fkc(4, -3375, 1),
        None,
        lambda p, cap: [(1, -_unit_root_power(C, p, cap, 2))],
        lambda p, n, l: l,  # the generic (non-CM) law
        [11, 23],
        [1, 2],
        [1],
        filt,
    )
    spec = CongruenceSpec("probe", "conjecture", "recurrence", {}, "", [("t", job)])
    probe = sharpness_probe(spec)
    assert probe["fail_cells"] == 0
    assert probe["min_slack"] is None or probe["min_slack"] >= 2  # (k-2)l = 2


def test_sharpness_trivial_spec_capped():
    # a spec whose combination is identically zero reports capped slack only
    from meroforms.harness import CongruenceSpec, MagneticJob, SeriesSource
    from meroforms.qseries import TruncatedSeries

    zero_src = SeriesSource("zero", lambda N, ring: TruncatedSeries.zero(ZZ, N))
    spec = CongruenceSpec(
        "probe0", "conjecture", "magnetic", {}, "", [("z", MagneticJob(zero_src, None, 3, 10))]
    )
    probe = sharpness_probe(spec)
    assert probe["fail_cells"] == 0
    assert probe["min_slack"] is None and probe["capped_cells"] == 10
