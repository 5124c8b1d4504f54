"""Command line interface: ``orbivol jknot | table1 | diagram``."""
import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .cvolume import complex_volume, cs_distance, load_table1, table1_row
from .diagram import generate_j_diagram, parse_pd
from .errors import (ContinuationError, NonHyperbolicError, OrbivolError, ParseError,
                     StructuralError)
from .jknot import JKnotParams, geometric_lambda
from .potential import build_potential
from .records import CSV_FIELDS, ResultRecord, _fmt
from .solver import SolverConfig, solve_complete, solve_orbifold

ROW_TOL = 1e-7
CROSSCHECK_TOL = 1e-6
EXIT_INPUT, EXIT_NUMERIC, EXIT_CONTINUATION = 2, 3, 4


def _threads():
    try:
        return max(1, int(os.environ.get("ORBIVOL_THREADS", "1")))
    except ValueError:
        return 1


def _fail(code, msg):
    print(f"error: {msg}", file=sys.stderr)
    return code


# -- jknot --------------------------------------------------------------------

def cmd_jknot(args):
    if args.n <= 0 or args.m <= 0 or args.n % 2 or args.m % 2:
        return _fail(EXIT_INPUT, "--n and --m must be even positive integers")
    if args.r < 3:
        return _fail(EXIT_INPUT, "--r must be at least 3")
    params = JKnotParams.from_table(args.n, args.m, args.r)
    knot = f"J({args.n},-{args.m})"
    try:
        if args.all_roots:
            lam, _, cands = geometric_lambda(params)
            rows = [{"lambda_re": c.lam.real, "lambda_im": c.lam.imag,
                     "w_re": None if c.w is None else c.w.real,
                     "w_im": None if c.w is None else c.w.imag,
                     "volume": c.volume, "geometric": c.geometric, "error": c.error}
                    for c in cands]
            if args.json:
                print(json.dumps({"knot": knot, "two_n": args.n, "two_m": args.m,
                                  "r": args.r, "candidates": rows}))
            else:
                for d in rows:
                    flag = "*" if d["geometric"] else " "
                    vol = "failed: " + d["error"] if d["volume"] is None else f"volume {_fmt(d['volume'])}"
                    print(f"{flag} lambda {_fmt(d['lambda_re'])} {_fmt(d['lambda_im'])}  {vol}")
            return 0
        inv = table1_row(params)
    except NonHyperbolicError as e:
        return _fail(EXIT_INPUT, f"non-hyperbolic: {e}")
    except OrbivolError as e:
        return _fail(EXIT_NUMERIC, f"numeric failure: {e}")
    rec = ResultRecord.from_invariants(inv, knot, "closed-form", args.n, args.m,
                                       normalize=args.normalize == "cs")
    print(rec.to_json() if args.json else rec.text())
    return 0


# -- table1 -------------------------------------------------------------------

def _row_job(g):
    inv = table1_row(JKnotParams.from_table(g.two_n, g.two_m, g.r))
    return ResultRecord.from_invariants(inv, f"J({g.two_n},-{g.two_m})", "closed-form",
                                        g.two_n, g.two_m)


def _check_row(rec, g):
    errs = []
    if abs(rec.volume - g.cvol.imag) > ROW_TOL:
        errs.append(f"volume {rec.volume!r} vs {g.cvol.imag!r}")
    if cs_distance(rec.cs_rep, -g.cvol.real, rec.modulus) > ROW_TOL:
        errs.append(f"cs {rec.cs_rep!r} vs {-g.cvol.real!r} mod {rec.modulus!r}")
    return errs


def _solver_family(two_n, two_m):
    d = generate_j_diagram(two_n // 2, two_m // 2)
    pf = build_potential(d)
    return d, pf, solve_complete(pf, d)


def _crosscheck(rows):
    """Solver-path complex volume for every row with 2n <= 6."""
    out, fam = {}, {}
    for g in rows:
        if g.two_n > 6:
            continue
        key = (g.two_n, g.two_m)
        if key not in fam:
            fam[key] = _solver_family(*key)
        d, pf, comp = fam[key]
        out[(g.two_n, g.two_m, g.r)] = complex_volume(pf, solve_orbifold(pf, d, g.r, complete=comp), g.r)
    return out


def cmd_table1(args):
    golden = load_table1()
    workers = _threads()
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            recs = list(ex.map(_row_job, golden))
    else:
        recs = [_row_job(g) for g in golden]
    cross = _crosscheck(golden) if args.crosscheck else {}
    failures = []
    extra = []
    for rec, g in zip(recs, golden):
        errs = _check_row(rec, g)
        x = cross.get((g.two_n, g.two_m, g.r))
        if x is not None:
            diff = max(abs(x.volume - rec.volume), cs_distance(x.cs_rep, rec.cs_rep, rec.modulus))
            if diff > CROSSCHECK_TOL:
                errs.append(f"solver disagrees by {diff:.3e}")
            extra.append((x.w_raw.real, x.w_raw.imag, diff))
        else:
            extra.append((None, None, None))
        if errs:
            failures.append(f"{g.two_n} {g.two_m} {g.r}: " + "; ".join(errs))
    buf = io.StringIO()
    if args.format == "csv":
        w = csv.writer(buf, lineterminator="\n")
        head = list(CSV_FIELDS) + (["solver_w_re", "solver_w_im", "crosscheck_diff"] if args.crosscheck else [])
        w.writerow(head)
        for rec, ex in zip(recs, extra):
            w.writerow(rec.csv_row() + ([_fmt(v) for v in ex] if args.crosscheck else []))
    else:
        items = []
        for rec, ex, g in zip(recs, extra, golden):
            d = rec.to_dict()
            d["pass"] = not _check_row(rec, g) and (ex[2] is None or ex[2] <= CROSSCHECK_TOL)
            if args.crosscheck:
                d.update(solver_w_re=ex[0], solver_w_im=ex[1], crosscheck_diff=ex[2])
            items.append(d)
        buf.write(json.dumps(items, indent=1) + "\n")
    if args.out:
        Path(args.out).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    for f in failures:
        print(f"FAIL {f}", file=sys.stderr)
    print(f"{len(recs)} rows, {len(recs) - len(failures)} pass, {len(failures)} fail", file=sys.stderr)
    return 1 if failures else 0


# -- diagram ------------------------------------------------------------------

def _parse_r(text):
    if text.lower() in ("inf", "infinity"):
        return None
    r = int(text)
    if r < 2:
        raise argparse.ArgumentTypeError("r must be >= 2 or 'inf'")
    return r


def cmd_diagram(args):
    try:
        text = Path(args.pd).read_text()
    except OSError as e:
        return _fail(EXIT_INPUT, f"cannot read {args.pd}: {e.strerror}")
    try:
        d = parse_pd(text)
    except (ParseError, StructuralError) as e:
        return _fail(EXIT_INPUT, f"bad diagram: {e}")
    try:
        cfg = SolverConfig(args.tol, args.max_iter, args.steps, args.seed_strategy)
    except ValueError as e:
        return _fail(EXIT_INPUT, str(e))
    z0 = None
    if args.seed_strategy == "given":
        if not args.seed:
            return _fail(EXIT_INPUT, "--seed-strategy given needs --seed FILE")
        try:
            z0 = np.array([complex(a, b) for a, b in json.loads(Path(args.seed).read_text())])
        except (OSError, ValueError, TypeError) as e:
            return _fail(EXIT_INPUT, f"bad seed file: {e}")
        if len(z0) != d.num_segments:
            return _fail(EXIT_INPUT, f"seed has {len(z0)} values, diagram has {d.num_segments} segments")
    pf = build_potential(d)
    try:
        sol = solve_orbifold(pf, d, args.r, cfg, z0=z0)
        inv = complex_volume(pf, sol, args.r, tol=max(1e-9, cfg.tol))
    except ContinuationError as e:
        return _fail(EXIT_CONTINUATION, f"continuation failed (last t = {e.last_t:.6g}): {e}")
    except OrbivolError as e:
        return _fail(EXIT_NUMERIC, f"solver failed: {e}")
    if sol.warning:
        print(f"warning: {sol.warning}", file=sys.stderr)
    rec = ResultRecord.from_invariants(inv, Path(args.pd).stem, "solver",
                                       normalize=args.normalize == "cs")
    print(rec.to_json() if args.json else rec.text())
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="orbivol",
                                description="Complex volumes of alternating knot orbifolds.")
    sub = p.add_subparsers(dest="cmd", required=True)

    j = sub.add_parser("jknot", help="closed-form pipeline for J(2n,-2m)")
    j.add_argument("--n", type=int, required=True, help="2n (even)")
    j.add_argument("--m", type=int, required=True, help="2m (even)")
    j.add_argument("--r", type=int, required=True)
    j.add_argument("--all-roots", action="store_true")
    j.add_argument("--json", action="store_true")
    j.add_argument("--normalize", choices=["cs"])
    j.set_defaults(func=cmd_jknot)

    t = sub.add_parser("table1", help="reproduce and check the 79 tabulated rows")
    t.add_argument("--out")
    t.add_argument("--format", choices=["csv", "json"], default="csv")
    t.add_argument("--crosscheck", action="store_true")
    t.set_defaults(func=cmd_table1)

    d = sub.add_parser("diagram", help="generic solver on a PD file")
    d.add_argument("--pd", required=True)
    d.add_argument("--r", type=_parse_r, required=True, help="cone order, or 'inf'")
    d.add_argument("--tol", type=float, default=SolverConfig.tol)
    d.add_argument("--max-iter", type=int, default=SolverConfig.max_iter)
    d.add_argument("--steps", type=int, default=SolverConfig.continuation_steps)
    d.add_argument("--seed-strategy", choices=["regular", "given"], default="regular")
    d.add_argument("--seed", help="JSON list of [re, im] pairs for --seed-strategy given")
    d.add_argument("--json", action="store_true")
    d.add_argument("--normalize", choices=["cs"])
    d.set_defaults(func=cmd_diagram)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
