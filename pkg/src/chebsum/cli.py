"""Command-line front end.

Machine-readable JSON goes to stdout (or --json PATH); the human summary
goes to stderr.  Exit status: 0 on success/pass, 1 on verification failure,
2 on usage or domain errors.  Reports are reproducible byte for byte for a
fixed --seed, independent of --jobs.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import campaign as camp
from .denom import build_w
from .errors import ChebsumError
from .genfun import GenSpec, chi_closed, chi_closed_value, chi_series_oracle
from .kibble import CorrMatrix, kibble_closed_eval, kibble_denominator, kibble_series_oracle
from .qseries import (QContext, chi1t_check, conjecture_probe, d2_coeff, d_coeff,
                      final_identity_check, hb_poly, idb_check)


def _parse_int_list(text: str) -> tuple[int, ...]:
    if not text:
        return ()
    return tuple(int(v) for v in text.split(","))


def _parse_float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",")]


def _parse_rho_pairs(text: str) -> dict[tuple[int, int], float]:
    out = {}
    for item in text.split(","):
        key, _, val = item.partition("=")
        key = key.strip()
        if len(key) != 2 or not key.isdigit():
            raise ValueError(f"pair key must be two digits ij, got {key!r}")
        out[(int(key[0]), int(key[1]))] = float(val)
    return out


def _emit(args, text: str) -> None:
    if getattr(args, "json_path", None):
        with open(args.json_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--json", dest="json_path", default=None,
                   help="write machine output to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="chebsum",
                                  description="closed forms and oracles for "
                                              "Chebyshev generating sums")
    top.add_argument("--config", default=None,
                     help="JSON file of flag defaults; explicit flags win")
    sub = top.add_subparsers(dest="command", required=True)

    w = sub.add_parser("w", help="denominator polynomials")
    wsub = w.add_subparsers(dest="action", required=True)
    wb = wsub.add_parser("build")
    wb.add_argument("--n", type=int, required=True)
    _common_flags(wb)
    wc = wsub.add_parser("check")
    _common_flags(wc)

    chi = sub.add_parser("chi", help="mixed generating functions")
    csub = chi.add_subparsers(dest="action", required=True)
    cb = csub.add_parser("build")
    cb.add_argument("--k", type=int, required=True)
    cb.add_argument("--n", type=int, required=True)
    cb.add_argument("--t", type=str, default="")
    _common_flags(cb)
    ce = csub.add_parser("eval")
    ce.add_argument("--k", type=int, required=True)
    ce.add_argument("--n", type=int, required=True)
    ce.add_argument("--t", type=str, default="")
    ce.add_argument("--x", type=str, required=True)
    ce.add_argument("--rho", type=float, required=True)
    _common_flags(ce)
    cv = csub.add_parser("verify")
    cv.add_argument("--k", type=int, required=True)
    cv.add_argument("--n", type=int, required=True)
    cv.add_argument("--t", type=str, default="")
    cv.add_argument("--trials", type=int, default=50)
    cv.add_argument("--rho-max", type=float, default=0.5)
    cv.add_argument("--order", type=int, default=200)
    _common_flags(cv)

    kb = sub.add_parser("kibble", help="correlation-matrix lattice sums")
    ksub = kb.add_subparsers(dest="action", required=True)
    ke = ksub.add_parser("eval")
    ke.add_argument("--kind", choices=["T", "U"], required=True)
    ke.add_argument("--x", type=str, required=True)
    ke.add_argument("--rho", type=str, required=True,
                    help="pair list like 12=0.6,13=0.8,23=0.9")
    ke.add_argument("--oracle-cutoff", type=int, default=0,
                    help="also sum the truncated lattice to this cutoff")
    _common_flags(ke)
    kv = ksub.add_parser("verify")
    kv.add_argument("--n", type=int, default=3)
    kv.add_argument("--trials", type=int, default=50)
    kv.add_argument("--cutoff", type=int, default=40)
    _common_flags(kv)
    kd = ksub.add_parser("denominator")
    kd.add_argument("--n", type=int, required=True)
    kd.add_argument("--rho", type=str, default="",
                    help="pair list; entries are exact rationals like 12=1/2")
    kd.add_argument("--symbolic", action="store_true")
    _common_flags(kd)

    q = sub.add_parser("q", help="q-deformed families and identities")
    qsub = q.add_subparsers(dest="action", required=True)
    qc = qsub.add_parser("check")
    qc.add_argument("--suite", required=True,
                    choices=["duality", "idb", "chi1t", "d2", "final-identity"])
    qc.add_argument("--q", type=str, default="1/3", help="comma list of rationals")
    qc.add_argument("--nmax", type=int, default=10)
    _common_flags(qc)
    qp = qsub.add_parser("probe")
    qp.add_argument("--conjecture", required=True,
                    choices=["beta", "common-denominator"])
    qp.add_argument("--q", type=str, default="1/2,1/3,2/5,3/7")
    qp.add_argument("--nmax", type=int, default=8)
    qp.add_argument("--rho-order", type=int, default=12)
    _common_flags(qp)

    v = sub.add_parser("verify", help="verification campaigns")
    v.add_argument("what", choices=["all", *camp.ALL_SUITES])
    v.add_argument("--trials", type=int, default=10)
    v.add_argument("--points", type=int, default=20)
    v.add_argument("--rho-max", type=float, default=0.5)
    v.add_argument("--order", type=int, default=150)
    v.add_argument("--cutoff", type=int, default=30)
    v.add_argument("--nodes", type=int, default=128)
    _common_flags(v)
    return top


def _cmd_w(args) -> int:
    if args.action == "build":
        w = build_w(args.n)
        _emit(args, camp.canonical_json(w.poly.to_json_dict()) + "\n")
        print(f"w_{args.n}: {len(w.poly.terms)} terms", file=sys.stderr)
        return 0
    rep = camp.run_campaign(camp.Campaign("w", seed=args.seed, jobs=args.jobs,
                                          tol=args.tol))
    _emit(args, camp.emit_ndjson([rep]))
    _human([rep])
    return 0 if rep.passed else 1


def _cmd_chi(args) -> int:
    t = _parse_int_list(args.t) or (0,) * (args.k + args.n)
    spec = GenSpec(args.k, args.n, t)
    if args.action == "build":
        rf = chi_closed(spec)
        payload = {"l": rf.numerator.to_json_dict(), "w": rf.denominator.to_json_dict()}
        _emit(args, camp.canonical_json(payload) + "\n")
        print(f"chi k={args.k} n={args.n} t={t}: numerator "
              f"{len(rf.numerator.terms)} terms", file=sys.stderr)
        return 0
    if args.action == "eval":
        xs = _parse_float_list(args.x)
        val = chi_closed_value(spec, xs, args.rho)
        _emit(args, camp.canonical_json({"value": val}) + "\n")
        return 0
    # single-spec verify
    import random

    rng = random.Random(f"{args.seed}:chi-verify")
    worst, argmax = 0.0, None
    for _ in range(args.trials):
        xs = [rng.uniform(-1, 1) for _ in range(spec.slots)]
        rho = rng.uniform(-args.rho_max, args.rho_max)
        err = abs(chi_closed_value(spec, xs, rho)
                  - chi_series_oracle(spec, xs, rho, args.order))
        if err > worst:
            worst, argmax = err, {"x": xs, "rho": rho}
    ok = worst <= args.tol
    _emit(args, camp.canonical_json({"max_abs_err": worst, "argmax_point": argmax,
                                     "pass": ok}) + "\n")
    print(f"chi verify k={args.k} n={args.n} t={t}: max err {worst:.3e} "
          f"({'PASS' if ok else 'FAIL'})", file=sys.stderr)
    return 0 if ok else 1


def _cmd_kibble(args) -> int:
    if args.action == "denominator":
        pairs = {k: Fraction(v) for k, v in
                 ((key, val) for key, val in _parse_rho_fractions(args.rho).items())}
        n = args.n
        K = CorrMatrix.from_dict(n, pairs)
        p = kibble_denominator(K, symbolic=args.symbolic)
        _emit(args, camp.canonical_json(p.to_json_dict()) + "\n")
        return 0
    if args.action == "eval":
        xs = _parse_float_list(args.x)
        pairs = _parse_rho_pairs(args.rho)
        n = len(xs)
        K = CorrMatrix.from_dict(n, pairs)
        alphas = [math.acos(v) for v in xs]
        closed = kibble_closed_eval(args.kind, alphas, K)
        payload = {"kind": args.kind, "x": xs, "closed": closed}
        if args.oracle_cutoff:
            payload["oracle"] = kibble_series_oracle(args.kind, xs, K,
                                                     args.oracle_cutoff)
        _emit(args, camp.canonical_json(payload) + "\n")
        return 0
    rep = camp.run_campaign(camp.Campaign("kibble", trials=args.trials,
                                          seed=args.seed, cutoff=args.cutoff,
                                          jobs=args.jobs, tol=args.tol))
    _emit(args, camp.emit_ndjson([rep]))
    _human([rep])
    return 0 if rep.passed else 1


def _parse_rho_fractions(text: str) -> dict[tuple[int, int], Fraction]:
    out = {}
    if not text:
        return out
    for item in text.split(","):
        key, _, val = item.partition("=")
        key = key.strip()
        out[(int(key[0]), int(key[1]))] = Fraction(val)
    return out


def _cmd_q(args) -> int:
    qs = [Fraction(v) for v in args.q.split(",")]
    records = []
    if args.action == "probe":
        if args.conjecture == "beta":
            for n in range(2, args.nmax + 1):
                records.append(conjecture_probe("beta-expansion", n=n, q_values=qs))
        else:
            for (nh, mt) in ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2)):
                records.append(conjecture_probe("common-denominator", n_h=nh,
                                                m_t=mt, q=qs[0],
                                                rho_order=args.rho_order))
        _emit(args, "\n".join(camp.canonical_json(r) for r in records) + "\n")
        return 0
    ok = True
    for qv in qs:
        ctx = QContext(qv)
        if args.suite == "duality":
            for n in range(args.nmax + 1):
                good = d_coeff(ctx, n) == hb_poly(ctx, "b", n)
                records.append({"suite": "duality", "q": str(qv), "n": n, "pass": good})
                ok = ok and good
        elif args.suite == "idb":
            for n in range(min(args.nmax, 6) + 1):
                for k in range(9):
                    good = idb_check(ctx, n, k).passed
                    records.append({"suite": "idb", "q": str(qv), "n": n, "k": k,
                                    "pass": good})
                    ok = ok and good
        elif args.suite == "chi1t":
            for t in range(min(args.nmax, 5) + 1):
                rep = chi1t_check(ctx, t, 0.3, 0.4)
                good = rep.abs_diff <= 1e-9
                records.append({"suite": "chi1t", "q": str(qv), "t": t,
                                "abs_err": rep.abs_diff, "pass": good})
                ok = ok and good
        elif args.suite == "d2":
            for n in range(1, min(args.nmax, 8) + 1):
                p = d2_coeff(ctx, n)
                records.append({"suite": "d2", "q": str(qv), "n": n,
                                "terms": len(p.terms), "pass": True})
        else:  # final-identity
            import random

            rng = random.Random(f"{args.seed}:final:{qv}")
            worst = 0.0
            for _ in range(10):
                rep = final_identity_check(ctx, rng.uniform(-1, 1),
                                           rng.uniform(-1, 1),
                                           rng.uniform(-0.25, 0.25))
                worst = max(worst, rep.abs_diff)
            good = worst <= 1e-8
            records.append({"suite": "final-identity", "q": str(qv),
                            "abs_err": worst, "pass": good})
            ok = ok and good
    _emit(args, "\n".join(camp.canonical_json(r) for r in records) + "\n")
    print(f"q check {args.suite}: {'PASS' if ok else 'FAIL'} "
          f"({len(records)} records)", file=sys.stderr)
    return 0 if ok else 1


def _cmd_verify(args) -> int:
    suites = list(camp.ALL_SUITES) if args.what == "all" else [args.what]
    reports = []
    for s in suites:
        reports.append(camp.run_campaign(camp.Campaign(
            s, trials=args.trials, points=args.points, seed=args.seed,
            rho_max=args.rho_max, order=args.order, tol=args.tol,
            cutoff=args.cutoff, jobs=args.jobs, nodes=args.nodes)))
    _emit(args, camp.emit_ndjson(reports))
    _human(reports)
    return 0 if all(r.passed for r in reports) else 1


def _human(reports) -> None:
    for rep in reports:
        status = "PASS" if rep.passed else "FAIL"
        print(f"{rep.suite}: {len(rep.records)} cases, {rep.failures} failures, "
              f"{status} ({rep.elapsed:.2f}s)", file=sys.stderr)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    # Config file supplies defaults; explicit flags win because they are
    # parsed afterwards.
    if "--config" in argv:
        at = argv.index("--config")
        with open(argv[at + 1]) as fh:
            parser.set_defaults(**json.load(fh))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.command == "w":
            return _cmd_w(args)
        if args.command == "chi":
            return _cmd_chi(args)
        if args.command == "kibble":
            return _cmd_kibble(args)
        if args.command == "q":
            return _cmd_q(args)
        return _cmd_verify(args)
    except ChebsumError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
