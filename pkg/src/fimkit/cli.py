"""Command-line entry point: generate, mine, sample, plan, run, analyze.

Exit codes: 0 success, 1 parameter error, 2 I/O error. All errors land on
stderr with a machine-parsable ``error: <kind>:`` prefix. Every randomized
command takes --seed (default 0) and echoes it on stderr. A key=value
--config file supplies defaults; explicit flags win.
"""

import argparse
import json
import sys

from .core import ParameterError, TransactionDB, minsup_from_relative
from .datagen import (FimiFormatError, GenParams, generate_db, partition_db,
                      read_config, read_fimi, write_fimi)
from .miners import (EclatOpts, MinerStats, RuleRecord, eclat, format_fi,
                     generate_rules, mfi_mine, mine)
from .sampling import (coverage_sample, coverage_sample_size, db_sample_size,
                       reservoir, reservoir_sample_size, write_sample)
from .scheduler import (PbecPlan, db_repl_min, plan_phase2, plan_to_json,
                        replication_factor, share_matrix)
from .cluster import metrics_csv, run_manifest, run_parallel_fimi
from . import stats as _stats

DEFAULTS = dict(alpha=0.3, rho=0.001, damping=0.8, min_edge_weight=0.6,
                tol=0.01, n_db_sample=10000, n_fi_sample=19869)


class _Parser(argparse.ArgumentParser):
    """argparse that reports parameter problems on exit code 1."""

    def error(self, message):
        print(f"error: param: {message}", file=sys.stderr)
        raise SystemExit(1)


def _minsup(text):
    """Integers are absolute supports, decimals are relative thresholds."""
    s = str(text)
    try:
        if any(c in s for c in ".eE"):
            return float(s)
        return int(s)
    except ValueError:
        raise ParameterError(f"bad minsup {text!r}")


def _absolute_minsup(ms, n):
    if isinstance(ms, float):
        return minsup_from_relative(ms, n)
    if ms < 1:
        raise ParameterError("absolute minsup must be >= 1")
    return ms


def _read_itemset_lines(path):
    """Itemset-per-line reader for sample files; '#' lines are comments."""
    out = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            items = []
            for tok in line.split():
                if not tok.isdigit():
                    raise FimiFormatError(lineno, tok)
                items.append(int(tok))
            out.append(tuple(sorted(set(items))))
    return out


def _read_fi_listing(path):
    """Parse 'item item ...:support' lines back into (itemset, support)."""
    out = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            body, _, supp = line.rpartition(":")
            if not body or not supp.isdigit():
                raise FimiFormatError(lineno, line)
            items = tuple(sorted(int(tok) for tok in body.split()))
            out.append((items, int(supp)))
    return out


def _echo_seed(seed):
    print(f"seed={seed}", file=sys.stderr)


def _require(args, *names):
    """Needed flags stay optional in argparse so a --config file can
    supply them; absence is only an error after both sources merge."""
    for name in names:
        if getattr(args, name, None) is None:
            raise ParameterError(f"--{name.replace('_', '-')} is required")


def _out_stream(path):
    return open(path, "w", encoding="ascii") if path else sys.stdout


# ----------------------------------------------------------- commands

def cmd_gen(a):
    p = GenParams(n_items=a.items, n_patterns=a.patterns,
                  avg_pattern_len=a.avg_pattern_len,
                  avg_txn_len=a.avg_txn_len, n_txns=a.txns,
                  corruption_mean=a.corruption_mean,
                  weight_mean=a.weight_mean, seed=a.seed)
    db = generate_db(p)
    _echo_seed(a.seed)
    if a.out:
        write_fimi(db, a.out)
    else:
        for t in db:
            print(" ".join(str(b) for b in t.items))
    return 0


def cmd_mine(a):
    _require(a, "minsup")
    db = read_fimi(a.file)
    ms = _absolute_minsup(a.minsup, len(db))
    st = MinerStats()
    if a.algo == "mfi":
        recs = sorted(mfi_mine(db, ms))
        for m in recs:
            print(" ".join(str(b) for b in m))
    else:
        opts = EclatOpts(use_diffsets=a.diffsets, dynamic_order=a.dynamic_order,
                         closure_opt=a.closure)
        for rec in mine(db, ms, algo=a.algo, opts=opts, stats=st):
            print(format_fi(rec))
    print(f"intersections={st.intersections} "
          f"support_computations={st.support_computations} "
          f"fis_emitted={st.fis_emitted}", file=sys.stderr)
    return 0


def cmd_rules(a):
    _require(a, "minconf")
    fis = _read_fi_listing(a.file)
    print("antecedent,consequent,confidence,support")
    for r in sorted(generate_rules(fis, a.minconf)):
        ant = " ".join(str(b) for b in r.antecedent)
        con = " ".join(str(b) for b in r.consequent)
        print(f"{ant},{con},{r.confidence:.6f},{r.support}")
    return 0


def cmd_sample(a):
    _require(a, "minsup")
    db = read_fimi(a.file)
    ms = _absolute_minsup(a.minsup, len(db))
    out = _out_stream(a.out)
    try:
        print(f"# db_sample_size={db_sample_size(a.eps, a.delta)}", file=out)
        if a.method == "reservoir":
            n = a.n or reservoir_sample_size(a.eps, a.delta, a.rho)
            print(f"# reservoir_sample_size={n}", file=out)
            sample = reservoir(eclat(db, ms), n, a.seed, algo=a.reservoir_algo)
        else:
            n = a.n or coverage_sample_size(a.eps, a.delta, a.rho)
            print(f"# coverage_sample_size={n}", file=out)
            mfis = sorted(mfi_mine(db, ms))
            sample = coverage_sample(mfis, n, a.seed,
                                     exact=(a.method == "coverage-exact"))
        _echo_seed(a.seed)
        write_sample(sample, out, seed=a.seed)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_plan(a):
    _require(a, "P")
    db = read_fimi(a.file)
    fi_sample = _read_itemset_lines(a.sample)
    ms_items = None  # planner defaults to everything the db mentions
    plan = plan_phase2(fi_sample, db, a.alpha, a.P, items=ms_items)
    if a.scheduler == "qkp":
        prefixes = [p.prefix for p in plan.pbecs]
        share = share_matrix(db, prefixes)
        w = [p.est_count for p in plan.pbecs]
        assignment = db_repl_min(list(plan.pbecs), share, w, a.P)
        plan = PbecPlan(plan.pbecs, tuple(tuple(x) for x in assignment),
                        plan.alpha, plan.P, plan.n_sample)
    print(plan_to_json(plan))
    loads = [sum(plan.pbecs[k].est_count for k in idxs)
             for idxs in plan.assignment]
    mean = sum(loads) / len(loads) if loads else 0.0
    ratio = (max(loads) / mean) if mean else 1.0
    print(f"balance: loads={loads} max={max(loads) if loads else 0} "
          f"mean={mean:.2f} ratio={ratio:.3f}", file=sys.stderr)
    print(f"replication={replication_factor(plan, db):.4f}", file=sys.stderr)
    return 0


def cmd_run(a):
    _require(a, "minsup")
    db = read_fimi(a.file)
    ms = _absolute_minsup(a.minsup, len(db))
    parts = partition_db(db, a.P)
    seeds = [int(s) for s in str(a.seeds).split(",") if s != ""]
    if not seeds:
        raise ParameterError("need at least one seed")
    result = None
    for seed in seeds:
        _echo_seed(seed)
        result = run_parallel_fimi(
            parts, a.variant, ms, seed=seed, n_db_sample=a.n_db_sample,
            n_fi_sample=a.n_fi_sample, alpha=a.alpha,
            dynamic_lb=not a.no_dynamic_lb, assign=a.assign,
            threads=a.threads)
        print(run_manifest(result), file=sys.stderr)
        csv = metrics_csv(result)
        if a.metrics_out:
            with open(a.metrics_out, "a", encoding="ascii") as fh:
                fh.write(csv)
        else:
            print(csv, file=sys.stderr, end="")
    for rec in sorted(result.fis):
        print(format_fi(rec))
    if a.verify:
        want = set(eclat(db, ms))
        got = set(result.fis)
        if got == want:
            print("VERIFY: OK")
        else:
            print(f"error: verify: {len(got ^ want)} mismatches",
                  file=sys.stderr)
            return 1
    return 0


def cmd_stats(a):
    _require(a, "which")
    db = read_fimi(a.file)
    if a.which == "fi":
        h = _stats.fi_characteristic(db, a.minsup)
        sys.stdout.write(_stats.histogram_gnuplot(h) if a.gnuplot
                         else _stats.histogram_csv(h))
    elif a.which == "mfi":
        minsups = [_minsup(s) for s in str(a.minsups or a.minsup).split(",")]
        h = _stats.mfi_characteristic(db, minsups)
        sys.stdout.write(_stats.histogram_gnuplot(h) if a.gnuplot
                         else _stats.histogram_csv(h))
    elif a.which == "ci":
        w_hist, size_hist = _stats.ci_extension_stats(db, a.minsup)
        sys.stdout.write(_stats.counts_csv(w_hist, "absorbed"))
        print()
        print("absorbed,closed_size,count")
        for w in sorted(size_hist):
            for size in sorted(size_hist[w]):
                print(f"{w},{size},{size_hist[w][size]}")
    elif a.which == "isect":
        ms = _absolute_minsup(a.minsup, len(db))
        hist = _stats.mfi_intersection_hist(sorted(mfi_mine(db, ms)))
        sys.stdout.write(_stats.counts_csv(hist, "intersection_size", "pairs"))
    else:  # pagerank
        ms = _absolute_minsup(a.minsup, len(db))
        mfis = sorted(mfi_mine(db, ms))
        if a.sample_k:
            _echo_seed(a.seed)
            mfis = _stats.sample_mfis_for_graph(mfis, a.sample_k, a.seed)
        graph = _stats.mfi_graph(mfis, a.min_edge_weight)
        pr, _ = _stats.pagerank(graph, d=a.damping, tol=a.tol)
        sys.stdout.write(_stats.pagerank_csv(graph, pr))
    return 0


# ------------------------------------------------------------- wiring

def build_parser():
    top = _Parser(prog="fimkit", description=__doc__)
    top.add_argument("--config", help="key=value defaults file")
    sub = top.add_subparsers(dest="command", parser_class=_Parser)
    parsers = []

    def add(name, func, **kw):
        p = sub.add_parser(name, **kw)
        p.set_defaults(func=func)
        p.add_argument("--config", help="key=value defaults file")
        parsers.append(p)
        return p

    g = add("gen", cmd_gen, help="generate a synthetic database")
    g.add_argument("--items", type=int, default=100)
    g.add_argument("--patterns", type=int, default=20)
    g.add_argument("--avg-pattern-len", type=float, default=4.0)
    g.add_argument("--avg-txn-len", type=float, default=10.0)
    g.add_argument("--txns", type=int, default=1000)
    g.add_argument("--corruption-mean", type=float, default=0.5)
    g.add_argument("--weight-mean", type=float, default=1.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--out")

    m = add("mine", cmd_mine, help="mine frequent or maximal itemsets")
    m.add_argument("file")
    m.add_argument("--minsup", type=_minsup,
                   help="integer = absolute, decimal = relative")
    m.add_argument("--algo", default="eclat",
                   choices=["apriori", "eclat", "fpgrowth", "mfi"])
    m.add_argument("--diffsets", action="store_true")
    m.add_argument("--dynamic-order", action="store_true")
    m.add_argument("--closure", action="store_true")

    r = add("rules", cmd_rules, help="association rules from a mined listing")
    r.add_argument("file")
    r.add_argument("--minconf", type=float)

    s = add("sample", cmd_sample, help="sample the frequent itemsets")
    s.add_argument("file")
    s.add_argument("--minsup", type=_minsup)
    s.add_argument("--method", default="reservoir",
                   choices=["coverage", "coverage-exact", "reservoir"])
    s.add_argument("--eps", type=float, default=0.005)
    s.add_argument("--delta", type=float, default=0.05)
    s.add_argument("--rho", type=float, default=DEFAULTS["rho"])
    s.add_argument("-n", type=int, help="override the computed sample size")
    s.add_argument("--reservoir-algo", default="simple",
                   choices=["simple", "vitter"])
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--out")

    p = add("plan", cmd_plan, help="split and schedule prefix classes")
    p.add_argument("file", help="database (FIMI)")
    p.add_argument("sample", help="itemset sample (FIMI lines)")
    p.add_argument("--alpha", type=float, default=DEFAULTS["alpha"])
    p.add_argument("-P", type=int)
    p.add_argument("--scheduler", default="lpt", choices=["lpt", "qkp"])

    u = add("run", cmd_run, help="simulate the parallel pipeline")
    u.add_argument("file")
    u.add_argument("--minsup", type=_minsup)
    u.add_argument("--variant", default="reservoir",
                   choices=["seq", "par", "reservoir"])
    u.add_argument("-P", type=int, default=4)
    u.add_argument("--alpha", type=float, default=DEFAULTS["alpha"])
    u.add_argument("--n-db-sample", type=int, default=DEFAULTS["n_db_sample"])
    u.add_argument("--n-fi-sample", type=int, default=DEFAULTS["n_fi_sample"])
    u.add_argument("--seeds", default="0", help="comma-separated run seeds")
    u.add_argument("--assign", default="lpt", choices=["lpt", "random"])
    u.add_argument("--no-dynamic-lb", action="store_true")
    u.add_argument("--threads", action="store_true")
    u.add_argument("--verify", action="store_true",
                   help="compare against a sequential miner")
    u.add_argument("--metrics-out")

    t = add("stats", cmd_stats, help="database characteristics as CSV")
    t.add_argument("file")
    t.add_argument("--which",
                   choices=["fi", "mfi", "ci", "isect", "pagerank"])
    t.add_argument("--minsup", type=_minsup, default=_minsup("0.1"))
    t.add_argument("--minsups", help="comma list for the mfi characteristic")
    t.add_argument("--gnuplot", action="store_true")
    t.add_argument("--sample-k", type=int, default=0)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--min-edge-weight", type=float,
                   default=DEFAULTS["min_edge_weight"])
    t.add_argument("--damping", type=float, default=DEFAULTS["damping"])
    t.add_argument("--tol", type=float, default=DEFAULTS["tol"])

    return top, parsers


def _apply_config(argv, top, parsers):
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None:
        return
    cfg = {k.replace("-", "_"): v for k, v in read_config(path).items()}
    top.set_defaults(**cfg)
    for p in parsers:
        p.set_defaults(**cfg)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    top, parsers = build_parser()
    try:
        _apply_config(argv, top, parsers)
        args = top.parse_args(argv)
        if not getattr(args, "func", None):
            top.print_help()
            return 1
        return args.func(args)
    except SystemExit as e:
        code = e.code if isinstance(e.code, int) else 1
        return code
    except (FimiFormatError, OSError) as e:
        print(f"error: io: {e}", file=sys.stderr)
        return 2
    except (ParameterError, ValueError) as e:
        print(f"error: param: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
