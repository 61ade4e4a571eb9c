"""Command line front end.

Exit codes: 0 success (conjecture FAILs are reported but tolerated),
1 theorem FAIL or internal error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import cm as cm_mod
from . import elliptic as ell
from . import harness
from . import hypergeom as hyp
from . import shimura
from .meromorphic import f_series
from .qseries import series_to_text


def _parse_primes(text: str):
    if ".." in text:
        lo, hi = text.split("..")
        return tuple(p for p in range(int(lo), int(hi) + 1) if harness.is_prime(p))
    return tuple(int(x) for x in text.split(","))


def _parse_c(text: str):
    return Fraction(text)


def cmd_expand(args) -> int:
    if args.curve:
        c = ell.curve(args.curve).j_invariant
    elif args.c is not None:
        c = _parse_c(args.c)
    else:
        print("expand needs --c or --curve", file=sys.stderr)
        return 2
    if args.r < 1:
        print("pole order --r must be >= 1", file=sys.stderr)
        return 2
    form = f_series(args.k, c, args.r, args.prec)
    text = series_to_text(form.series)
    if args.out:
        tmp = args.out + ".tmp"
        with open(tmp, "w") as fh:
            fh.write(text)
        os.replace(tmp, args.out)
        print(f"wrote {args.out}")
    preview = ", ".join(
        f"a_{n}={form.series.coeff(n)}" for n in range(form.series.valuation, min(form.series.valuation + 6, args.prec + 1))
    )
    print(f"E_{args.k}/(j-({c}))^{args.r} + O(q^{args.prec + 1}): {preview}")
    if args.cache_dir:
        cache = harness.SeriesCache(args.cache_dir)
        cache.put(f"fkc:k={args.k},c={c},r={args.r},N={args.prec}", form.series)
    return 0


def cmd_construct(args) -> int:
    try:
        vec, series = cm_mod.construct_g(args.k, args.D, args.r, N=args.prec)
    except (cm_mod.NotADiscriminant, ValueError, cm_mod.IdenticallyZero) as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return 2
    print(", ".join(str(v) for v in vec))
    if series is not None:
        preview = ", ".join(f"a_{n}={series.coeff(n)}" for n in range(1, min(7, args.prec + 1)))
        print(preview)
    return 0


def _override_params(args) -> dict:
    params = {}
    if args.k is not None:
        params["k"] = args.k
    if args.D is not None:
        params["D"] = args.D
    if args.curve:
        params["curve"] = args.curve
    if args.primes:
        ps = _parse_primes(args.primes)
        params["pmax"] = max(ps)
    if args.nmax is not None:
        params["nmax"] = args.nmax
    if args.lmax is not None:
        params["lmax"] = args.lmax
    return params


def _report_exit(report) -> int:
    s = report.summary
    flag = "" if s["FAIL"] == 0 else "  ** FAIL cells present **"
    print(
        f"{report.id}: PASS={s['PASS']} FAIL={s['FAIL']} SKIPPED={s['SKIPPED']}"
        f" CAPPED={s['CAPPED']}{flag}"
    )
    if report.kind == "theorem" and (s["FAIL"] or s["CAPPED"]):
        return 1
    return 0


def cmd_verify(args) -> int:
    try:
        spec = harness.registry(args.id, **_override_params(args))
    except harness.UnknownId as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except TypeError as exc:
        print(f"parameter not accepted by {args.id}: {exc}", file=sys.stderr)
        return 2
    report = harness.check(spec, parallelism=args.parallel)
    if args.json:
        tmp = args.json + ".tmp"
        with open(tmp, "w") as fh:
            fh.write(report.to_json())
        os.replace(tmp, args.json)
        print(f"wrote {args.json}")
    return _report_exit(report)


def cmd_sweep(args) -> int:
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"bad config: {exc}", file=sys.stderr)
        return 2
    known = {"ids", "overrides", "parallel", "out"}
    unknown = set(cfg) - known
    if unknown:
        print(f"unknown config keys: {sorted(unknown)}", file=sys.stderr)
        return 2
    ids = cfg.get("ids", [])
    overrides = cfg.get("overrides", {})
    parallel = args.parallel or cfg.get("parallel", 1)
    out_dir = args.out or cfg.get("out")
    try:
        reports = harness.sweep(ids, parallelism=parallel, overrides=overrides)
    except harness.UnknownId as exc:
        print(str(exc), file=sys.stderr)
        return 2
    status = 0
    for sid, report in sorted(reports.items()):
        rc = _report_exit(report)
        status = max(status, rc)
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
            path = os.path.join(out_dir, sid.replace("/", "_") + ".json")
            tmp = path + ".tmp"
            with open(tmp, "w") as fh:
                fh.write(report.to_json())
            os.replace(tmp, path)
    return status


def cmd_crosscheck(args) -> int:
    name = args.name
    ok = None
    if name == "prop62":
        ok = shimura.prop62_check(args.s, args.d, args.d0, args.prec)
    elif name == "clausen":
        ok = hyp.fricke_clausen_check(args.prec)
    elif name == "moebius":
        ok = shimura.moebius_bridge_check(args.s, args.D, args.prec)
    elif name == "ramanujan":
        from .modforms import d_operator, e2, eisenstein
        from fractions import Fraction as F

        N = args.prec
        E2 = e2(N).series.to_rational()
        E4 = eisenstein(4, N).series.to_rational()
        E6 = eisenstein(6, N).series.to_rational()
        ok = (
            d_operator(E2) == (E2 * E2 - E4).scale(F(1, 12))
            and d_operator(E4) == (E2 * E4 - E6).scale(F(1, 3))
            and d_operator(E6) == (E2 * E6 - E4 * E4).scale(F(1, 2))
        )
    else:
        print(f"unknown crosscheck {name!r}", file=sys.stderr)
        return 2
    print(f"crosscheck {name}: {'pass' if ok else 'FAIL'}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="meroforms",
        description="Exact congruence laboratory for meromorphic modular forms",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="expand E_k/(j-c)^r to a series file")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--c", type=str)
    p.add_argument("--curve", type=str)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--prec", type=int, default=50)
    p.add_argument("--out", type=str)
    p.add_argument("--cache-dir", type=str, default=os.environ.get("MEROFORMS_CACHE"))
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("construct", help="CM derivative combination vector")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--prec", type=int, default=10)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="run one registry congruence check")
    p.add_argument("--id", type=str, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--D", type=int)
    p.add_argument("--curve", type=str)
    p.add_argument("--primes", type=str, help="a..b or comma list")
    p.add_argument("--nmax", type=int)
    p.add_argument("--lmax", type=int)
    p.add_argument("--json", type=str, help="write the JSON report here")
    p.add_argument("--parallel", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="run several checks from a JSON config")
    p.add_argument("--config", type=str, required=True)
    p.add_argument("--out", type=str)
    p.add_argument("--parallel", type=int)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("crosscheck", help="named cross-module identity checks")
    p.add_argument("name", choices=["prop62", "clausen", "moebius", "ramanujan"])
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--d", type=int, default=-7)
    p.add_argument("--d0", type=int, default=1)
    p.add_argument("--D", type=int, default=-12)
    p.add_argument("--prec", type=int, default=20)
    p.set_defaults(func=cmd_crosscheck)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0
    except Exception as exc:  # internal error contract
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
