"""metaweil command line.

    metaweil verify {maslov-identities,cocycle,weil,strata,p1} [--q Q] [--d D | --n N] ...
    metaweil table {gamma,theta,cocycle,strata-fn} [--q Q] [--d D] [--fn NAME]
    metaweil strata table --d D --q Q --fn {N,l0,l1,s,four-l0,four-l1}
    metaweil strata verify --d D --q Q
    metaweil p1 theta --n N --degrees=a1,..,aN --q Q [--ext e.json]
    metaweil p1 sweep --n N --min-deg D --q Q

Exit codes: 0 all checks pass, 1 some check failed (the report carries a
counterexample), 2 usage error or enumeration guard exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import suites, thetap1
from .errors import LimitExceeded
from .strata import STRATA_TABLES


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _shared(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", type=int, default=3, help="odd prime field size")
    p.add_argument("--d", type=int, default=1, help="half-dimension of the symplectic space / forms")
    p.add_argument("--n", type=int, default=1, help="rank of the split bundle (p1)")
    p.add_argument("--limit", type=int, default=None, help="enumeration guard (default: $METAWEIL_LIMIT or 1e6)")
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled sweeps")
    p.add_argument("--samples", type=int, default=500, help="sample size where a sweep is not exhaustive")
    p.add_argument("--figures", default=None, metavar="DIR", help="also render PNG figures into DIR")
    p.add_argument("--timing", action="store_true", help="print per-check timings to stderr")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="metaweil", description="Finite Weil representation toolkit")
    sub = ap.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=suites.SUITES)
    v.add_argument("--min-deg", type=int, default=-3)
    _shared(v)

    t = sub.add_parser("table", help="dump a table as JSON")
    t.add_argument("name", choices=suites.TABLES)
    t.add_argument("--fn", default="s", choices=STRATA_TABLES)
    _shared(t)

    s = sub.add_parser("strata", help="quadratic-form strata tools")
    ssub = s.add_subparsers(dest="action", required=True)
    st = ssub.add_parser("table")
    st.add_argument("--fn", required=True, choices=STRATA_TABLES)
    _shared(st)
    sv = ssub.add_parser("verify")
    _shared(sv)

    p = sub.add_parser("p1", help="theta function on the projective line")
    psub = p.add_subparsers(dest="action", required=True)
    pt = psub.add_parser("theta")
    pt.add_argument("--degrees", required=True, help="comma separated, e.g. --degrees=-2,-3")
    pt.add_argument("--ext", default=None, help="JSON extension class (default: split extension)")
    pt.add_argument("--half", action="store_true", help="insert 1/2 in front of the pairing")
    _shared(pt)
    ps = psub.add_parser("sweep")
    ps.add_argument("--min-deg", type=int, required=True)
    _shared(ps)
    return ap


def _config(a, suite: str = "") -> suites.RunConfig:
    return suites.RunConfig(suite=suite, q=a.q, d=a.d, n=a.n, min_deg=getattr(a, "min_deg", -3),
                            limit=a.limit, seed=a.seed, samples=a.samples, fn=getattr(a, "fn", "s"))


def _verify(a, suite: str) -> int:
    rep = suites.run_suite(_config(a, suite))
    _emit(_dump(rep.to_json()), a.out)
    if a.timing:
        for name, sec in rep.timing.items():
            print(f"{name}: {sec:.3f}s", file=sys.stderr)
    if a.figures:
        from . import plotting
        plotting.report_figure(rep, a.figures)
    return rep.exit_code()


def _table(a, name: str) -> int:
    cfg = _config(a)
    _emit(_dump(suites.dump_table(name, cfg)), a.out)
    if a.figures:
        from . import plotting
        if name == "strata-fn":
            from .strata import table
            plotting.strata_figure(table(cfg.fn, cfg.d, cfg.q, cfg.limit), a.figures, cfg.fn)
        elif name == "cocycle":
            group, _, _, op = suites.cocycle_tables(cfg.d, cfg.q, cfg.limit)
            plotting.cocycle_figure(op, group, a.figures)
    return 0


def _p1_theta(a) -> int:
    try:
        degrees = tuple(int(x) for x in a.degrees.split(","))
    except ValueError:
        raise suites.UsageError(f"bad --degrees {a.degrees!r}") from None
    if len(degrees) != a.n:
        raise suites.UsageError(f"--n {a.n} does not match {len(degrees)} degrees")
    L = thetap1.SplitBundle(degrees)
    if a.ext:
        e = thetap1.load_ext(a.ext)
        if e.bundle != L or e.q != a.q:
            raise suites.UsageError("extension class does not match --degrees/--q")
    else:
        e = thetap1.ExtClassP1.zero(L, a.q)
    rec = thetap1.theta_record(L, e, half=a.half)
    _emit(_dump(rec), a.out)
    return 0 if all(rec["checks"].values()) else 1


def _p1_sweep(a) -> int:
    suites.RunConfig(q=a.q, n=a.n, limit=a.limit)  # validation
    records = list(thetap1.enumerate_bunp_slice(a.n, a.min_deg, a.q, a.limit))
    failed = [r for r in records if not all(r["checks"].values())]
    lines = [json.dumps(r) for r in records]
    summary = {"summary": {"n": a.n, "min_deg": a.min_deg, "q": a.q, "records": len(records),
                           "failed": len(failed), "status": "fail" if failed else "pass"}}
    if failed:
        summary["summary"]["counterexample"] = {"degrees": failed[0]["degrees"], "ext": failed[0]["ext"]}
    lines.append(json.dumps(summary))
    _emit("\n".join(lines) + "\n", a.out)
    if a.figures:
        from . import plotting
        plotting.p1_figure(records, a.q, a.figures)
    return 1 if failed else 0


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    try:
        if a.cmd == "verify":
            return _verify(a, a.suite)
        if a.cmd == "table":
            return _table(a, a.name)
        if a.cmd == "strata":
            return _verify(a, "strata") if a.action == "verify" else _table(a, "strata-fn")
        if a.cmd == "p1":
            return _p1_theta(a) if a.action == "theta" else _p1_sweep(a)
    except (suites.UsageError, LimitExceeded, ValueError, OSError) as exc:
        print(f"metaweil: error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
