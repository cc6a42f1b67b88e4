"""gr-lab command line.

Exit codes: 0 success / claim holds, 1 claim fails, search exhausted or
regime/hypothesis violation, 2 usage or malformed input.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds, lll
from .core import ColorDistribution, FormatError, fmt_real, parse_coloring, parse_graph
from .exact import exact_gr
from .gallai import (GallaiPartition, RainbowTrianglePresent, find_gallai_partition,
                     reduced_coloring, validate_gallai_partition)
from .core import format_coloring
from .probability import (MC_CSV_HEADER, MonoClique, RainbowClique, WholeGraphBad, mc_csv_row,
                          mc_estimate)
from .search import (DEFAULT_MAX_RESAMPLES, DEFAULT_MAX_RESTARTS, DEFAULT_SEED, Exhausted,
                     moser_tardos, read_witness, restart_sample)
from .verify import verify_claim

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

THEOREM_NAMES = {
    "gr-fixed": bounds.T_GR_FIXED,
    "gr-flex": bounds.T_GR_FLEX,
    "gr-lll": bounds.T_GR_LLL,
    "grnum-fixed": bounds.T_GRNUM_FIXED,
    "grnum-lll": bounds.T_GRNUM_LLL,
}


class UsageError(Exception):
    pass


def default_seed() -> int:
    env = os.environ.get("GR_LAB_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"GR_LAB_SEED must be an integer, got {env!r}")


def int_list(text: str) -> list[int]:
    """'5', '3,4,5' or the inclusive range '3:6'."""
    out = []
    for tok in text.split(","):
        if ":" in tok:
            a, b = tok.split(":")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(tok))
    return out


def _emit(text: str, path: str | None):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _dist(args, k):
    if args.dist == "uniform":
        return ColorDistribution.uniform(k)
    if args.p is None:
        raise UsageError("--dist skewed needs --p")
    return ColorDistribution.skewed(k, args.p)


def _claim(args):
    if args.G or args.H:
        if not (args.G and args.H):
            raise UsageError("pattern claims need both --G and --H")
        return parse_graph(args.G), parse_graph(args.H)
    if args.s is None or args.t is None:
        raise UsageError("give -s and -t (or --G and --H)")
    return args.s, args.t


# --------------------------------------------------------------------------
# bound
# --------------------------------------------------------------------------

def _probs(args, k):
    if args.uniform:
        return [Fraction(1, k)] * k
    if args.probs_file:
        raw = Path(args.probs_file).read_text().replace(",", " ").split()
    elif args.probs:
        raw = args.probs.split(",")
    else:
        raise UsageError("gr-flex needs --uniform, --probs or --probs-file")
    return [Fraction(x) for x in raw]


def cmd_bound(args) -> int:
    theorem = args.theorem
    reports, failures = [], []
    if theorem in ("grnum-fixed", "grnum-lll") and not args.G:
        raise UsageError(f"{theorem} needs --G")
    if theorem == "grnum-fixed" and not args.H:
        raise UsageError("grnum-fixed needs --H")
    if theorem in ("gr-lll", "grnum-lll") and args.c2 is None:
        raise UsageError(f"{theorem} needs --c2")
    if theorem == "gr-flex" and args.n is None:
        raise UsageError("gr-flex needs -n")
    s_vals = int_list(args.s) if args.s else [None]
    t_vals = int_list(args.t) if args.t else [None]
    if theorem in ("gr-fixed", "gr-flex", "gr-lll") and None in s_vals + t_vals:
        raise UsageError(f"{theorem} needs -s and -t")
    if theorem == "grnum-lll" and None in t_vals:
        raise UsageError("grnum-lll needs -t")
    for k in int_list(args.k):
        for s in s_vals:
            for t in t_vals:
                try:
                    if theorem == "gr-fixed":
                        rep = bounds.bound_gr_fixed(s, t, k)
                    elif theorem == "gr-flex":
                        rep = bounds.flex_report(args.n, s, t, k, _probs(args, k))
                    elif theorem == "gr-lll":
                        rep = bounds.bound_gr_lll(s, t, k, args.c2)
                    elif theorem == "grnum-fixed":
                        rep = bounds.bound_grnum_fixed(parse_graph(args.G), parse_graph(args.H), k)
                    else:
                        rep = bounds.bound_grnum_lll(parse_graph(args.G), t, k, args.c2)
                except bounds.BoundError as exc:
                    failures.append((s, t, k, exc))
                    continue
                except ValueError as exc:
                    raise UsageError(str(exc))
                reports.append(rep)
    if args.format == "csv":
        sys.stdout.write(bounds.reports_to_csv(reports))
    else:
        sys.stdout.write("\n".join(r.to_text(digits=12) for r in reports))
    for s, t, k, exc in failures:
        print(f"error: {THEOREM_NAMES[theorem]} s={s} t={t} k={k}: {exc}", file=sys.stderr)
        if exc.report is not None and exc.report.intermediates:
            for key, v in exc.report.intermediates.items():
                shown = fmt_real(v) if isinstance(v, float) else v
                print(f"  intermediate.{key}={shown}", file=sys.stderr)
    return EXIT_FAIL if failures else EXIT_OK


# --------------------------------------------------------------------------
# lll
# --------------------------------------------------------------------------

def _lll_mode(args):
    mode = args.mode
    graph = parse_graph(args.G) if args.G else None
    if mode == lll.MODE_NUMBER and graph is None:
        raise UsageError("--mode gr-number needs --G")
    return mode, graph


def cmd_lll(args) -> int:
    if args.lll_cmd == "recheck":
        try:
            cert = lll.LLLCertificate.from_text(Path(args.file).read_text())
        except ValueError as exc:
            raise UsageError(str(exc))
        try:
            ok, margin = lll.recheck_certificate(cert)
        except lll.RegimeRefused as exc:
            print(f"refused: {exc}")
            return EXIT_FAIL
        print(f"valid={'true' if ok else 'false'} margin={fmt_real(margin)}")
        return EXIT_OK if ok else EXIT_FAIL
    if args.lll_cmd == "admissible":
        ok = lll.admissible_constants(args.theorem, args.c1, args.c2, args.c3)
        print(f"admissible={'true' if ok else 'false'}")
        return EXIT_OK if ok else EXIT_FAIL
    mode, graph = _lll_mode(args)
    t = args.t
    s = graph.order if graph is not None and mode == lll.MODE_NUMBER else args.s
    if s is None:
        raise UsageError("give -s (or --G with --mode gr-number)")
    if args.lll_cmd == "feasible":
        try:
            ok, margin = lll.check_two_class(args.n, s, t, args.k, args.p, args.y, args.z, mode,
                                             graph, args.exact_deps)
        except lll.RegimeRefused as exc:
            print(f"refused: {exc}")
            return EXIT_FAIL
        print(f"valid={'true' if ok else 'false'} margin={fmt_real(margin)}")
        if ok:
            cert = lll.LLLCertificate("TwoClassYZ", (args.y, args.z), margin, args.p, args.n, s, t,
                                      args.k, mode, graph.spec() if graph else None,
                                      args.exact_deps)
            if args.output:
                Path(args.output).write_text(cert.to_text())
            else:
                sys.stdout.write(cert.to_text())
        return EXIT_OK if ok else EXIT_FAIL
    # maximize
    seed = args.seed if args.seed is not None else default_seed()
    res = lll.maximize_n_two_class(s, t, args.k, mode, args.budget, seed, graph, args.exact_deps)
    print(f"# seed={seed} budget={args.budget}")
    print(f"n_best={res.n_best} baseline={res.baseline} "
          f"budget_exhausted={'true' if res.budget_exhausted else 'false'}")
    if res.cert is None:
        print("no certificate found")
        return EXIT_FAIL
    if args.output:
        Path(args.output).write_text(res.cert.to_text())
    sys.stdout.write(res.cert.to_text())
    return EXIT_OK


# --------------------------------------------------------------------------
# search / verify / exact
# --------------------------------------------------------------------------

def cmd_search(args) -> int:
    claim = _claim(args)
    seed = args.seed if args.seed is not None else default_seed()
    dist = _dist(args, args.k)
    if args.algo == "restart":
        budget = args.budget or DEFAULT_MAX_RESTARTS
        res = restart_sample(args.n, args.k, claim, dist, budget, seed, args.workers)
    else:
        budget = args.budget or DEFAULT_MAX_RESAMPLES
        res = moser_tardos(args.n, args.k, claim, dist, budget, seed, args.workers)
    if isinstance(res, Exhausted):
        print(f"# seed={seed} algo={args.algo} dist={dist.label()}")
        print(f"exhausted after {res.attempts} {'restarts' if args.algo == 'restart' else 'resamples'}")
        return EXIT_FAIL
    _emit(res.to_text(), args.output)
    if args.output:
        print(f"# seed={seed} algo={args.algo} dist={dist.label()}")
        print(f"witness written to {args.output} (steps={res.steps})")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        wit = read_witness(Path(args.file).read_text())
    except FormatError as exc:
        raise UsageError(f"{args.file}: {exc}")
    claim = _claim(args) if (args.s is not None or args.G) else wit.claim
    if claim is None:
        raise UsageError("witness has no claim line; pass -s/-t or --G/--H")
    verdict = verify_claim(wit.coloring, claim, args.workers)
    if verdict.ok:
        print("verified=true")
        return EXIT_OK
    ev = verdict.counterexample
    print(f"verified=false counterexample={ev.kind} vertices={' '.join(map(str, ev.vertices))}"
          + (f" color={ev.color}" if ev.color is not None else ""))
    return EXIT_FAIL


def cmd_exact(args) -> int:
    res = exact_gr(args.s, args.t, args.k, args.cap, args.semantics, args.budget)
    name = f"GR_{args.k}({args.s},{args.t})"
    if res.resolved:
        print(f"{name} = {res.value}")
    else:
        print(f"{name} unresolved: {res.reason}; {name} > {res.largest_good}")
    print(f"semantics={res.semantics} nodes={res.nodes}")
    if args.output and res.extremal is not None:
        Path(args.output).write_text(res.extremal.to_text())
    return EXIT_OK if res.resolved else EXIT_FAIL


# --------------------------------------------------------------------------
# partition / mc
# --------------------------------------------------------------------------

def _read_coloring(path):
    try:
        return parse_coloring(Path(path).read_text())[0]
    except FormatError as exc:
        raise UsageError(f"{path}: {exc}")


def cmd_partition(args) -> int:
    col = _read_coloring(args.coloring)
    if args.part_cmd == "validate":
        try:
            part = GallaiPartition.from_text(Path(args.partition).read_text())
        except FormatError as exc:
            raise UsageError(f"{args.partition}: {exc}")
        ok, why = validate_gallai_partition(col, part)
        print("valid=true" if ok else f"valid=false violation={why}")
        return EXIT_OK if ok else EXIT_FAIL
    try:
        if args.part_cmd == "reduce" and args.partition:
            part = GallaiPartition.from_text(Path(args.partition).read_text())
        else:
            part = find_gallai_partition(col)
    except RainbowTrianglePresent as exc:
        print(f"not a Gallai coloring: {exc}")
        return EXIT_FAIL
    if args.part_cmd == "find":
        _emit(part.to_text(), args.output)
        return EXIT_OK
    try:
        red = reduced_coloring(col, part)
    except ValueError as exc:
        print(str(exc))
        return EXIT_FAIL
    _emit(format_coloring(red), args.output)
    return EXIT_OK


def cmd_mc(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    if args.event == "rainbow":
        if args.s is None:
            raise UsageError("rainbow event needs -s")
        event = RainbowClique(args.s)
    elif args.event == "mono":
        if args.t is None:
            raise UsageError("mono event needs -t")
        event = MonoClique(args.t)
    else:
        if None in (args.n, args.s, args.t):
            raise UsageError("whole event needs -n, -s and -t")
        event = WholeGraphBad(args.n, args.s, args.t)
    dist = _dist(args, args.k)
    res = mc_estimate(event, dist, args.samples, seed, args.workers)
    if args.format == "csv":
        print(MC_CSV_HEADER)
        print(mc_csv_row(event, dist, res, seed))
    else:
        print(f"# seed={seed} samples={args.samples}")
        print(f"event={event.label()} dist={dist.label()}")
        print(f"estimate={fmt_real(res.estimate)} std_error={fmt_real(res.std_error)}")
    return EXIT_OK


# --------------------------------------------------------------------------

def _add_claim(p, required_st=False):
    p.add_argument("-s", type=int, required=required_st)
    p.add_argument("-t", type=int, required=required_st)
    p.add_argument("--G", help="rainbow pattern (K5, P4, C5, S4 or '<order>:u-v,...')")
    p.add_argument("--H", help="monochromatic pattern")


def _add_dist(p):
    p.add_argument("--dist", choices=["uniform", "skewed"], default="uniform")
    p.add_argument("--p", type=float, help="skew mass for --dist skewed")


def build_parser() -> argparse.ArgumentParser:
    workers = os.cpu_count() or 1
    ap = argparse.ArgumentParser(prog="gr-lab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    b = sub.add_parser("bound", help="closed-form lower bounds")
    b.add_argument("--theorem", choices=sorted(THEOREM_NAMES), required=True)
    b.add_argument("-s", help="int, list '3,4' or range '3:5'")
    b.add_argument("-t", help="int, list or range")
    b.add_argument("-k", required=True, help="int, list or range")
    b.add_argument("-n", type=int)
    b.add_argument("--c2", type=float)
    b.add_argument("--G")
    b.add_argument("--H")
    b.add_argument("--uniform", action="store_true")
    b.add_argument("--probs", help="comma separated color probabilities")
    b.add_argument("--probs-file")
    b.add_argument("--format", choices=["text", "csv"], default="text")
    b.set_defaults(func=cmd_bound)

    lp = sub.add_parser("lll", help="local lemma certificates")
    lsub = lp.add_subparsers(dest="lll_cmd", required=True)
    for name in ("feasible", "maximize"):
        q = lsub.add_parser(name)
        q.add_argument("-s", type=int)
        q.add_argument("-t", type=int, required=True)
        q.add_argument("-k", type=int, required=True)
        q.add_argument("--mode", choices=[lll.MODE_FUNCTION, lll.MODE_NUMBER],
                       default=lll.MODE_FUNCTION)
        q.add_argument("--G")
        q.add_argument("--exact-deps", action="store_true",
                       help="use exact dependency counts instead of C(n,s), C(n,t)")
        q.add_argument("-o", "--output")
        if name == "feasible":
            q.add_argument("-n", type=int, required=True)
            q.add_argument("--p", type=float, required=True)
            q.add_argument("--y", type=float, required=True)
            q.add_argument("--z", type=float, required=True)
        else:
            q.add_argument("--budget", type=int, default=20_000_000)
            q.add_argument("--seed", type=int)
    q = lsub.add_parser("recheck")
    q.add_argument("file")
    q = lsub.add_parser("admissible")
    q.add_argument("--theorem", choices=["T_GRLLL", "T_grLLL"], required=True)
    q.add_argument("--c1", type=float, required=True)
    q.add_argument("--c2", type=float, required=True)
    q.add_argument("--c3", type=float, required=True)
    lp.set_defaults(func=cmd_lll)

    sp = sub.add_parser("search", help="constructive witness search")
    sp.add_argument("--algo", choices=["restart", "mt"], required=True)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-k", type=int, required=True)
    _add_claim(sp)
    _add_dist(sp)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--budget", type=int, help="max restarts / resamples")
    sp.add_argument("--workers", type=int, default=workers)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_search)

    vp = sub.add_parser("verify", help="verify a witness file")
    vp.add_argument("file")
    _add_claim(vp)
    vp.add_argument("--workers", type=int, default=1)
    vp.set_defaults(func=cmd_verify)

    ep = sub.add_parser("exact", help="exact small values by backtracking")
    ep.add_argument("-s", type=int, required=True)
    ep.add_argument("-t", type=int, required=True)
    ep.add_argument("-k", type=int, required=True)
    ep.add_argument("--cap", type=int, required=True)
    ep.add_argument("--budget", type=int, default=200_000_000, help="node budget")
    ep.add_argument("--semantics", choices=["auto", "gallai", "ramsey"], default="auto")
    ep.add_argument("-o", "--output", help="write the extremal witness here")
    ep.set_defaults(func=cmd_exact)

    pp = sub.add_parser("partition", help="Gallai partitions")
    psub = pp.add_subparsers(dest="part_cmd", required=True)
    q = psub.add_parser("find")
    q.add_argument("coloring")
    q.add_argument("-o", "--output")
    q = psub.add_parser("validate")
    q.add_argument("coloring")
    q.add_argument("partition")
    q = psub.add_parser("reduce")
    q.add_argument("coloring")
    q.add_argument("partition", nargs="?")
    q.add_argument("-o", "--output")
    pp.set_defaults(func=cmd_partition)

    mp = sub.add_parser("mc", help="Monte Carlo event probabilities")
    mp.add_argument("--event", choices=["rainbow", "mono", "whole"], required=True)
    mp.add_argument("-n", type=int)
    mp.add_argument("-s", type=int)
    mp.add_argument("-t", type=int)
    mp.add_argument("-k", type=int, required=True)
    _add_dist(mp)
    mp.add_argument("--samples", type=int, default=1_000_000)
    mp.add_argument("--seed", type=int)
    mp.add_argument("--workers", type=int, default=workers)
    mp.add_argument("--format", choices=["text", "csv"], default="text")
    mp.set_defaults(func=cmd_mc)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"gr-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
