"""Planning: split prefix classes until each fits a per-processor budget,
then assign them, either by longest-processing-time or by a knapsack
heuristic that co-locates classes sharing transactions.

Class sizes are estimated by counting sample itemsets each class contains
(the class prefix itself included); supports that order extension items are
measured on the database sample.
"""

import heapq
import json
from dataclasses import dataclass

from .core import ParameterError, Pbec
from .sampling import FiSample


def _sample_sets(fi_sample):
    items = fi_sample.itemsets if isinstance(fi_sample, FiSample) else fi_sample
    return [frozenset(x) for x in items]


def partition_pbec(prefix, extensions, db_sample, fi_sample):
    """Split [prefix|extensions] into one child class per extension item.

    Extensions are ordered by ascending support of prefix+{b} on db_sample
    (ties by item id); the child for b keeps the items after b, which makes
    the children pairwise disjoint and, short of the prefix itself, a cover
    of the parent class. Returns (child_prefix, child_extensions, est)
    triples in that order.
    """
    prefix = tuple(prefix)
    extensions = tuple(extensions)
    if not extensions:
        raise ParameterError("extensions must be nonempty")
    vert = db_sample.vertical()
    base = None
    for b in prefix:
        ts = vert.get(b, frozenset())
        base = ts if base is None else base & ts

    def supp(b):
        ts = vert.get(b, frozenset())
        return len(ts) if base is None else len(base & ts)

    order = sorted(extensions, key=lambda b: (supp(b), b))
    sample = _sample_sets(fi_sample)
    pset = frozenset(prefix)
    out = []
    for i, b in enumerate(order):
        exts = tuple(order[i + 1:])
        lo = pset | {b}
        hi = lo | frozenset(exts)
        est = sum(1 for x in sample if lo <= x <= hi)
        out.append((tuple(sorted(prefix + (b,))), exts, est))
    return out


@dataclass(frozen=True)
class PbecPlan:
    """The phase-2 product: final classes plus their processor assignment."""
    pbecs: tuple
    assignment: tuple  # per-processor tuples of indexes into pbecs
    alpha: float
    P: int
    n_sample: int

    def __post_init__(self):
        if len(self.assignment) != self.P:
            raise ValueError(f"want {self.P} index sets, got {len(self.assignment)}")
        flat = sorted(k for idxs in self.assignment for k in idxs)
        if flat != list(range(len(self.pbecs))):
            raise ValueError("assignment must cover every class exactly once")
        bound = self.alpha * self.n_sample / self.P
        for p in self.pbecs:
            if p.extensions and p.est_count > bound:
                raise ValueError(f"class {p.prefix} estimate {p.est_count} "
                                 f"exceeds the bound {bound}")


def plan_phase2(fi_sample, db_sample, alpha, P, items=None):
    """Split oversized classes, largest estimate first, then LPT-assign.

    A class whose estimate exceeds alpha * |sample| / P is split (ties by
    prefix); classes with no extension items cannot be split and are
    scheduled as they are. Base items default to everything db_sample
    contains; pass the exact frequent items for planning a real run.
    """
    if alpha <= 0:
        raise ParameterError("alpha must be > 0")
    if P < 1:
        raise ParameterError("P must be >= 1")
    sample = _sample_sets(fi_sample)
    if items is None:
        items = db_sample.labels
    items = tuple(sorted(set(items)))
    if not items:
        return PbecPlan((), tuple(() for _ in range(P)), alpha, P, len(sample))
    pbecs = [Pbec(p, e, est)
             for p, e, est in partition_pbec((), items, db_sample, sample)]
    bound = alpha * len(sample) / P
    while True:
        over = [p for p in pbecs if p.extensions and p.est_count > bound]
        if not over:
            break
        victim = min(over, key=lambda p: (-p.est_count, p.prefix))
        pbecs.remove(victim)
        pbecs.extend(Pbec(p, e, est) for p, e, est in partition_pbec(
            victim.prefix, victim.extensions, db_sample, sample))
    pbecs.sort(key=lambda p: p.prefix)
    assignment = lpt_schedule([p.est_count for p in pbecs], P)
    return PbecPlan(tuple(pbecs), tuple(tuple(a) for a in assignment),
                    alpha, P, len(sample))


def lpt_schedule(sizes, P):
    """Longest processing time: jobs descending, each to the least-loaded
    processor, ties to the lowest processor id. Returns index lists."""
    if P < 1:
        raise ParameterError("P must be >= 1")
    heap = [(0, i) for i in range(P)]
    out = [[] for _ in range(P)]
    for j in sorted(range(len(sizes)), key=lambda j: (-sizes[j], j)):
        load, i = heapq.heappop(heap)
        out[i].append(j)
        heapq.heappush(heap, (load + sizes[j], i))
    return out


def share_matrix(db, prefixes):
    """S[i][j] = transactions containing both prefix i and prefix j."""
    covers = [frozenset(db.tidlist(p)) for p in prefixes]
    k = len(prefixes)
    s = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            s[i][j] = s[j][i] = len(covers[i] & covers[j])
    return s


def db_repl_min(pbecs, share, w, P):
    """Assign classes so that co-assigned ones share transactions.

    P greedy knapsack rounds with capacity sum(w)/P. Each round seeds with
    the class sharing the most with everything still unassigned, grows by
    marginal shared-transactions per unit weight, then tries single swaps;
    the last round absorbs leftovers. Returns index lists.
    """
    k = len(pbecs)
    if P < 1:
        raise ParameterError("P must be >= 1")
    if len(share) != k or any(len(row) != k for row in share):
        raise ParameterError("share matrix shape must match pbecs")
    for i in range(k):
        if share[i][i] != 0:
            raise ParameterError("share diagonal must be zero")
        for j in range(i):
            if share[i][j] != share[j][i]:
                raise ParameterError("share matrix must be symmetric")
    cap = sum(w) / P if P else 0.0
    remaining = set(range(k))
    out = []
    for proc in range(P):
        if not remaining:
            out.append([])
            continue
        if proc == P - 1:
            out.append(sorted(remaining))
            remaining.clear()
            continue
        seed = max(sorted(remaining),
                   key=lambda i: sum(share[i][j] for j in remaining))
        sel = [seed]
        load = w[seed]
        remaining.discard(seed)
        while True:
            best = None
            for cand in sorted(remaining):
                if load + w[cand] > cap:
                    continue
                profit = sum(share[cand][s] for s in sel)
                key = (profit / (1 + w[cand]), profit)
                if best is None or key > best[0]:
                    best = (key, cand)
            if best is None:
                break
            cand = best[1]
            sel.append(cand)
            load += w[cand]
            remaining.discard(cand)
        # single swaps: trade one selected for one outsider when it fits
        # the budget and raises the shared-transaction total
        improved = True
        while improved:
            improved = False
            best = None
            for s in sorted(sel):
                kept = [x for x in sel if x != s]
                prof_s = sum(share[s][x] for x in kept)
                for r in sorted(remaining):
                    if load - w[s] + w[r] > cap:
                        continue
                    gain = sum(share[r][x] for x in kept) - prof_s
                    if gain > 0 and (best is None or gain > best[0]):
                        best = (gain, s, r)
            if best is not None:
                _, s, r = best
                sel.remove(s)
                sel.append(r)
                remaining.discard(r)
                remaining.add(s)
                load += w[r] - w[s]
                improved = True
        out.append(sorted(sel))
    return out


def replication_factor(assignment, db, prefixes=None):
    """Sum over processors of the transactions each must hold, over |db|.

    A processor holds every transaction containing at least one of its
    assigned prefixes. Accepts a PbecPlan or a bare index-set list."""
    if isinstance(assignment, PbecPlan):
        prefixes = [p.prefix for p in assignment.pbecs]
        assignment = assignment.assignment
    total = 0
    for idxs in assignment:
        held = set()
        for j in idxs:
            held.update(db.tidlist(prefixes[j]))
        total += len(held)
    return total / len(db)


# -------------------------------------------------------- serialization

def plan_to_json(plan):
    return json.dumps({
        "alpha": plan.alpha,
        "P": plan.P,
        "n_sample": plan.n_sample,
        "pbecs": [{"prefix": list(p.prefix), "extensions": list(p.extensions),
                   "est": p.est_count} for p in plan.pbecs],
        "assignment": [list(a) for a in plan.assignment],
    }, indent=2)


def plan_from_json(text):
    d = json.loads(text)
    pbecs = tuple(Pbec(tuple(p["prefix"]), tuple(p["extensions"]), p["est"])
                  for p in d["pbecs"])
    return PbecPlan(pbecs, tuple(tuple(a) for a in d["assignment"]),
                    d["alpha"], d["P"], d["n_sample"])
