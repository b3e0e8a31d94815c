"""Command-line driver: counting runs, trace tables, verification suites.

Subcommands

  count        count points on one family over F_(p^k)
                 mql count --family X --mu 1 --p 11 --algo table
  trace        trace records for the mu = 1 pair over a prime range
                 mql trace --p-range 2..101 --cache counts.jsonl --out traces.csv
  verify       run a named check suite and print a pass/fail table
                 mql verify --suite groups
  ledger-dump  write the recorded constant table as JSON

Exit codes: 0 success, 1 any failed verification or record, 2 usage error.
The environment variable MQL_CACHE supplies a default cache path; an
explicit --cache flag wins.  Reports are single JSON envelopes (or CSV for
traces); the cache file is JSON-lines.  With a warm cache and a fixed
configuration, reruns produce byte-identical reports: the envelope's
elapsed_ms is the sum of the per-record values, which cache hits preserve.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time

from . import __version__
from .counting import CountCache, CountTask, count_cached
from .errors import MirrorQuinticError
from .families import FamilyId, build_family
from .ffield import is_prime, make_field
from .modularity import compare_traces
from .ledger import recorded_dataset
from .verify import run_suite

_FAMILY_FLAGS = {
    "X": FamilyId.QUINTIC_X,
    "Y": FamilyId.QUINTIC_Y,
    "Q": FamilyId.QUADRIC_Q,
    "V": FamilyId.CUBICS_V,
    "W": FamilyId.CUBICS_W,
    "Wt": FamilyId.CUBICS_WTILDE,
}

_PARAM_FLAG = {
    FamilyId.QUINTIC_X: "mu",
    FamilyId.QUINTIC_Y: "mu",
    FamilyId.QUADRIC_Q: None,
    FamilyId.CUBICS_V: "lam",
    FamilyId.CUBICS_W: "lam",
    FamilyId.CUBICS_WTILDE: "nu",
}

TRACE_COLUMNS = [
    "p",
    "residue",
    "count_x",
    "count_y",
    "ap_x",
    "ap_y",
    "weil_ok",
    "match_ok",
]


class _UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mql",
        description="point counts, traces and verification for the quintic "
        "mirror pair over finite fields",
    )
    parser.add_argument("--version", action="version", version=f"mql {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--cache", default=None, help="JSON-lines count cache path")
        p.add_argument("--out", default=None, help="report output path (default stdout)")
        p.add_argument("--format", choices=["json", "csv"], default=None)

    pc = sub.add_parser("count", help="count points on one family")
    pc.add_argument("--family", choices=sorted(_FAMILY_FLAGS), required=True)
    pc.add_argument("--mu", type=int, default=None)
    pc.add_argument("--lambda", dest="lam", type=int, default=None)
    pc.add_argument("--nu", type=int, default=None)
    pc.add_argument("--p", type=int, default=None)
    pc.add_argument("--p-range", default=None, metavar="A..B")
    pc.add_argument("--ext", type=int, default=1, help="extension degree k")
    pc.add_argument("--algo", choices=["naive", "table"], default="table")
    common(pc)

    pt = sub.add_parser("trace", help="trace records over a prime range")
    pt.add_argument("--p", type=int, default=None)
    pt.add_argument("--p-range", default=None, metavar="A..B")
    pt.add_argument("--algo", choices=["naive", "table"], default="table")
    common(pt)

    pv = sub.add_parser("verify", help="run a named verification suite")
    pv.add_argument(
        "--suite",
        required=True,
        choices=[
            "nodes",
            "fibers",
            "groups",
            "coordchange",
            "quadric",
            "ledger",
            "hecke",
            "traces",
            "all",
        ],
    )
    pv.add_argument("--p-max", type=int, default=101, help="prime bound for traces")
    pv.add_argument("--long", action="store_true", help="include long-running checks")
    common(pv)

    pl = sub.add_parser("ledger-dump", help="dump the recorded constant table")
    common(pl)
    return parser


def _parse_primes(args) -> list[int]:
    if args.p is not None and args.p_range is not None:
        raise _UsageError("use either --p or --p-range, not both")
    if args.p is not None:
        if not is_prime(args.p):
            raise _UsageError(f"--p {args.p} is not prime")
        return [args.p]
    if args.p_range is not None:
        try:
            lo, hi = args.p_range.split("..")
            lo, hi = int(lo), int(hi)
        except ValueError as exc:
            raise _UsageError(f"--p-range must look like 2..101, got {args.p_range!r}") from exc
        if lo < 2 or hi < lo:
            raise _UsageError("--p-range bounds must satisfy 2 <= a <= b")
        return [p for p in range(lo, hi + 1) if is_prime(p)]
    raise _UsageError("one of --p or --p-range is required")


def _resolve_cache(args):
    path = args.cache or os.environ.get("MQL_CACHE")
    return path


class _CacheLock:
    """CLI-level single-writer lock around a cache file."""

    def __init__(self, path):
        self.lock_path = None if path is None else str(path) + ".lock"

    def __enter__(self):
        if self.lock_path is None:
            return self
        deadline = time.monotonic() + 30.0
        while True:
            try:
                fd = os.open(self.lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
                os.close(fd)
                return self
            except FileExistsError:
                if time.monotonic() > deadline:
                    raise MirrorQuinticError(
                        f"cache lock {self.lock_path} is held; remove it if stale"
                    )
                time.sleep(0.05)

    def __exit__(self, *exc):
        if self.lock_path is not None:
            try:
                os.remove(self.lock_path)
            except FileNotFoundError:
                pass
        return False


def _emit(text: str, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _envelope(config: dict, records: list[dict]) -> str:
    env = {
        "tool": "mql",
        "version": __version__,
        "config": config,
        "records": records,
        "elapsed_ms": sum(r.get("elapsed_ms", 0) for r in records),
    }
    return json.dumps(env, indent=2, sort_keys=True) + "\n"


def _cmd_count(args) -> int:
    fid = _FAMILY_FLAGS[args.family]
    pname = _PARAM_FLAG[fid]
    params = {}
    given = {"mu": args.mu, "lam": args.lam, "nu": args.nu}
    for name, val in given.items():
        if val is not None and name != pname:
            raise _UsageError(f"--family {args.family} does not take --{name}")
    if pname is not None:
        if given[pname] is None:
            flag = {"mu": "--mu", "lam": "--lambda", "nu": "--nu"}[pname]
            raise _UsageError(f"--family {args.family} requires {flag}")
        params[pname] = given[pname]
    if not 1 <= args.ext <= 4:
        raise _UsageError("--ext must be in [1, 4]")
    primes = _parse_primes(args)
    cache_path = _resolve_cache(args)
    records = []
    failures = 0
    with _CacheLock(cache_path):
        cache = CountCache(cache_path) if cache_path else None
        for p in primes:
            F = make_field(p, args.ext)
            inst = build_family(fid, params, F)
            try:
                rec = count_cached(
                    CountTask(inst, args.algo, args.threads), cache
                )
                records.append(
                    {
                        "family": rec.family,
                        "params": rec.params,
                        "p": rec.p,
                        "k": rec.k,
                        "q": rec.q,
                        "count": rec.count,
                        "algo": rec.algo,
                        "elapsed_ms": rec.elapsed_ms,
                        "status": "ok",
                    }
                )
            except MirrorQuinticError as exc:
                failures += 1
                records.append(
                    {
                        "family": fid.value,
                        "p": p,
                        "k": args.ext,
                        "status": f"error: {exc}",
                    }
                )
    fmt = args.format or ("csv" if args.out and str(args.out).endswith(".csv") else "json")
    if fmt == "csv":
        buf = io.StringIO()
        cols = ["family", "params", "p", "k", "q", "count", "algo", "elapsed_ms", "status"]
        writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        writer.writeheader()
        for r in records:
            writer.writerow({c: r.get(c, "") for c in cols})
        _emit(buf.getvalue(), args.out)
    else:
        _emit(_envelope(_config_echo(args), records), args.out)
    return 1 if failures else 0


def _config_echo(args) -> dict:
    skip = {"command"}
    return {
        k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None
    }


def _cmd_trace(args) -> int:
    primes = [p for p in _parse_primes(args) if p != 5]
    cache_path = _resolve_cache(args)
    records = []
    all_ok = True
    with _CacheLock(cache_path):
        cache = CountCache(cache_path) if cache_path else None
        for p in primes:
            rec = compare_traces(p, cache=cache, algo=args.algo, threads=args.threads)
            all_ok = all_ok and rec.match_ok and rec.weil_ok
            records.append(rec)
    fmt = args.format or ("csv" if args.out and str(args.out).endswith(".csv") else "json")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.p,
                    r.residue,
                    r.count_x,
                    r.count_y,
                    r.a_p_x,
                    r.a_p_y,
                    str(r.weil_ok).lower(),
                    str(r.match_ok).lower(),
                ]
            )
        _emit(buf.getvalue(), args.out)
    else:
        rows = [
            {
                "p": r.p,
                "residue": r.residue,
                "count_x": r.count_x,
                "count_y": r.count_y,
                "ap_x": r.a_p_x,
                "ap_y": r.a_p_y,
                "weil_ok": r.weil_ok,
                "match_ok": r.match_ok,
                "status": "ok" if (r.weil_ok and r.match_ok) else "failed",
            }
            for r in records
        ]
        _emit(_envelope(_config_echo(args), rows), args.out)
    return 0 if all_ok else 1


def _cmd_verify(args) -> int:
    cache_path = _resolve_cache(args)
    with _CacheLock(cache_path):
        cache = CountCache(cache_path) if cache_path else None
        results = run_suite(
            args.suite,
            threads=args.threads,
            cache=cache,
            long_run=args.long,
            p_max=args.p_max,
        )
    width = max(len(r.name) for r in results)
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        detail = f"  [{r.detail}]" if r.detail else ""
        lines.append(f"{status}  {r.name:<{width}}{detail}")
    n_fail = sum(1 for r in results if not r.passed)
    lines.append(
        f"{len(results) - n_fail}/{len(results)} checks passed"
        + (f", {n_fail} FAILED" if n_fail else "")
    )
    text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    if args.out is not None:
        sys.stdout.write(text)
    return 0 if n_fail == 0 else 1


def _cmd_ledger_dump(args) -> int:
    text = json.dumps(recorded_dataset(), indent=2, sort_keys=True) + "\n"
    _emit(text, args.out)
    return 0


def run(argv: list[str]) -> int:
    """Parse argv and execute; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        if args.command == "count":
            return _cmd_count(args)
        if args.command == "trace":
            return _cmd_trace(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "ledger-dump":
            return _cmd_ledger_dump(args)
        return 2
    except _UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    except MirrorQuinticError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
