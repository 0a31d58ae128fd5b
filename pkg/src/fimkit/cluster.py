"""Simulated message-passing cluster running the parallel mining pipeline.

Phases: (1) draw a database sample and build an itemset sample by one of
three strategies (sequential coverage, parallel coverage, reservoir); (2)
plan prefix classes on worker 0 and broadcast the plan; (3) exchange
database partitions along a round-robin tournament; (4) every worker mines
its classes against its exchanged partition, while the plan's prefix
subsets are counted on the original partitions and summed at worker 0.

The simulator is round-based and single-threaded. Workers interact only by
pickled messages (so nothing mutable is ever shared), message and byte
counts are tracked per worker, and runs are reproducible under a fixed
seed. Worker subroutines raising an exception abort the run with the
failing worker's id.
"""

import pickle
import random
import time
from collections import deque
from dataclasses import dataclass

from .core import (FiRecord, ParameterError, Transaction, TransactionDB,
                   pbec_contains, scaled_minsup)
from .miners import (EclatOpts, MaximalSet, MinerStats, _eclat_node, _subsets,
                     eclat, mfi_mine)
from .sampling import (FiSample, ReservoirState, coverage_sample,
                       coverage_sample_size, db_sample_size,
                       multivariate_hypergeom, reservoir_sample_size)
from .scheduler import PbecPlan, plan_phase2


class WorkerPanic(RuntimeError):
    """A worker's subroutine raised; carries the worker id."""

    def __init__(self, worker, cause):
        self.worker = worker
        super().__init__(f"worker {worker} panicked: {cause!r}")


class SimCluster:
    """P workers with FIFO inboxes and per-worker seeded generators.

    Payloads travel pickled, which both isolates worker state and gives
    honest byte counts.
    """

    def __init__(self, P, seed=0):
        if P < 1:
            raise ParameterError("P must be >= 1")
        self.P = P
        self.seed = seed
        self.inboxes = [deque() for _ in range(P)]
        self.rngs = [random.Random(f"{seed}:w{i}") for i in range(P)]
        self.msgs_sent = [0] * P
        self.bytes_sent = [0] * P
        self.msgs_recv = [0] * P

    def send(self, src, dst, tag, payload=None):
        blob = pickle.dumps((tag, payload))
        self.msgs_sent[src] += 1
        self.bytes_sent[src] += len(blob)
        self.inboxes[dst].append((src, blob))

    def recv(self, dst):
        """Pop the oldest message for dst as (src, tag, payload), or None."""
        if not self.inboxes[dst]:
            return None
        src, blob = self.inboxes[dst].popleft()
        self.msgs_recv[dst] += 1
        tag, payload = pickle.loads(blob)
        return src, tag, payload

    def quiescent(self):
        return (all(not q for q in self.inboxes)
                and sum(self.msgs_sent) == sum(self.msgs_recv))

    def assert_quiescent(self):
        if not self.quiescent():
            pending = [len(q) for q in self.inboxes]
            raise RuntimeError(f"cluster not quiescent: inboxes {pending}, "
                               f"sent {sum(self.msgs_sent)} recv {sum(self.msgs_recv)}")


def _gather0(cluster, values):
    """values[w] travels from each worker w to worker 0; returns the list."""
    out = [values[0]]
    for w in range(1, cluster.P):
        cluster.send(w, 0, "GATHER", values[w])
    for _ in range(1, cluster.P):
        out.append(cluster.recv(0)[2])
    return out


def _bcast0(cluster, value):
    """Worker 0 sends value to everyone; returns per-worker (pickled) copies."""
    out = [value]
    for w in range(1, cluster.P):
        cluster.send(0, w, "BCAST", value)
    for w in range(1, cluster.P):
        out.append(cluster.recv(w)[2])
    return out


# ------------------------------------------------- round-robin exchange

@dataclass(frozen=True)
class ExchangeSchedule:
    """Tournament rounds; every unordered worker pair meets exactly once."""
    rounds: tuple

    def __post_init__(self):
        seen = set()
        for rnd in self.rounds:
            busy = set()
            for a, b in rnd:
                if a >= b:
                    raise ValueError(f"pair {(a, b)} not ordered")
                if a in busy or b in busy:
                    raise ValueError("worker paired twice in one round")
                busy |= {a, b}
                if (a, b) in seen:
                    raise ValueError(f"pair {(a, b)} repeated")
                seen.add((a, b))


def exchange_schedule(P):
    """Circle-method tournament: P-1 rounds when P is even, P rounds with
    one idle worker per round when odd."""
    if P < 1:
        raise ParameterError("P must be >= 1")
    if P == 1:
        return ExchangeSchedule(())
    n = P if P % 2 == 0 else P + 1  # odd: add a dummy; its partner idles
    rounds = []
    for r in range(n - 1):
        pairs = [(r, n - 1)]
        for k in range(1, n // 2):
            pairs.append(((r + k) % (n - 1), (r - k) % (n - 1)))
        norm = sorted((min(a, b), max(a, b)) for a, b in pairs
                      if a < P and b < P)
        rounds.append(tuple(norm))
    return ExchangeSchedule(tuple(rounds))


def phase3_exchange(cluster, plan, partitions):
    """Ship each transaction to the owners of the classes it covers.

    Worker q ends up with D'_q = every transaction of the whole database
    containing at least one of q's assigned prefixes. Within a pair the
    lower id sends first; one batch per direction per pair.
    """
    P = cluster.P
    prefixes = [tuple(p.prefix) for p in plan.pbecs]
    want = [[frozenset(prefixes[k]) for k in plan.assignment[q]]
            for q in range(P)]

    def matching(src, dst):
        rows = []
        for t in partitions[src]:
            ts = set(t.items)
            if any(w <= ts for w in want[dst]):
                rows.append((t.tid, t.items))
        return rows

    held = [dict(matching(q, q)) for q in range(P)]
    for rnd in exchange_schedule(P).rounds:
        for a, b in rnd:
            cluster.send(a, b, "TXNS", matching(a, b))
            cluster.send(b, a, "TXNS", matching(b, a))
            for dst in (b, a):
                _, _, payload = cluster.recv(dst)
                for tid, items in payload:
                    held[dst][tid] = tuple(items)
    return [TransactionDB(Transaction(tid, items)
                          for tid, items in sorted(rows.items()))
            for rows in held]


# ------------------------------------------- dynamic balancing machinery

_REQ, _GIVE, _DENY, _TOKEN, _TERM = "REQ", "GIVE", "DENY", "TOKEN", "TERM"


def _dynamic_units(cluster, queues, process_unit):
    """Round-based work stealing with ring-token termination detection.

    An idle worker polls its successors cyclically, one outstanding request
    at a time. A donor first processes one unit from the front of its own
    queue, then yields its last unstarted unit (so a lone unit cannot
    ping-pong). Worker 0 launches a white token when passive; sending work
    blackens the sender, a black worker blackens the token in passing and
    whitens itself, and only a white token returning to a passive white
    worker 0 triggers the termination broadcast.
    """
    P = cluster.P
    if P == 1:
        q = queues[0]
        while q:
            unit = q.popleft()
            try:
                process_unit(0, unit)
            except Exception as e:
                raise WorkerPanic(0, e) from e
        return 0

    color = ["white"] * P
    done = [False] * P
    outstanding = [False] * P
    next_victim = [(i + 1) % P for i in range(P)]
    held = [None] * P  # token color while a worker holds it
    probe_ready = True
    rounds = 0
    cap = 60 * P + 20 * sum(len(q) for q in queues) + 200
    while not all(done):
        rounds += 1
        if rounds > cap:
            raise RuntimeError("work stealing failed to terminate")
        for w in range(P):
            if done[w]:
                while cluster.recv(w) is not None:
                    pass
                continue
            requests = []
            while True:
                m = cluster.recv(w)
                if m is None:
                    break
                src, tag, payload = m
                if tag == _GIVE:
                    queues[w].append(payload)
                    outstanding[w] = False
                elif tag == _DENY:
                    outstanding[w] = False
                elif tag == _REQ:
                    requests.append(src)
                elif tag == _TOKEN:
                    held[w] = payload
                elif tag == _TERM:
                    done[w] = True
            if done[w]:
                continue
            if queues[w]:
                unit = queues[w].popleft()
                try:
                    process_unit(w, unit)
                except Exception as e:
                    raise WorkerPanic(w, e) from e
            for src in requests:
                if queues[w]:
                    cluster.send(w, src, _GIVE, queues[w].pop())
                    color[w] = "black"
                else:
                    cluster.send(w, src, _DENY)
            passive = not queues[w]
            if passive and not outstanding[w]:
                v = next_victim[w]
                cluster.send(w, v, _REQ)
                outstanding[w] = True
                nxt = (v + 1) % P
                next_victim[w] = nxt if nxt != w else (nxt + 1) % P
            if w == 0:
                if held[0] is not None:
                    if passive and held[0] == "white" and color[0] == "white":
                        for o in range(1, P):
                            cluster.send(0, o, _TERM)
                        done[0] = True
                        continue
                    held[0] = None
                    probe_ready = True
                if probe_ready and passive:
                    cluster.send(0, 1, _TOKEN, "white")
                    color[0] = "white"
                    probe_ready = False
            elif held[w] is not None and passive:
                out_color = "black" if color[w] == "black" else held[w]
                cluster.send(w, (w + 1) % P, _TOKEN, out_color)
                color[w] = "white"
                held[w] = None
    for w in range(P):
        while cluster.recv(w) is not None:
            pass
    return rounds


def _static_split(items, P):
    """Block split of b_1..b_n: 1-based item j goes to worker ceil(j*P/n)."""
    queues = [deque() for _ in range(P)]
    n = len(items)
    for j, b in enumerate(items, start=1):
        queues[-(-j * P // n) - 1].append(b)
    return queues


def _parallel_mfi_workers(cluster, dbs, minsup, dynamic_lb):
    """Per-worker maximal-set mining over statically split 1-item roots.

    Every root keeps its global tail (all frequent items above it), so the
    union over workers contains every true maximal itemset; per-worker
    stores stay antichains, which keeps them small even under stealing.
    """
    P = cluster.P
    sup1 = dbs[0].item_supports()
    items = [b for b in sorted(sup1) if sup1[b] >= minsup]
    msets = [MaximalSet() for _ in range(P)]
    if not items:
        return msets
    queues = _static_split(items, P)

    def proc(w, root):
        mfi_mine(dbs[w], minsup, roots=[root], result=msets[w])

    if dynamic_lb and P > 1:
        _dynamic_units(cluster, queues, proc)
    else:
        for w in range(P):
            while queues[w]:
                try:
                    proc(w, queues[w].popleft())
                except Exception as e:
                    raise WorkerPanic(w, e) from e
    return msets


def parallel_mfi(db_sample, minsup, P, dynamic_lb=False, seed=0, cluster=None):
    """Union of the per-worker maximal-set stores.

    The result M satisfies MFI(db_sample) <= M <= FI(db_sample); filtering
    M down to its maximal elements recovers the exact maximal itemsets.
    """
    cl = cluster or SimCluster(P, seed)
    db_sample.vertical()  # prime the shared read-only view
    msets = _parallel_mfi_workers(cl, [db_sample] * cl.P, minsup, dynamic_lb)
    out = set()
    for m in msets:
        out |= m.itemsets()
    return out


# ----------------------------------------------------- phase 1 sampling

def _draw_db_sample(cluster, partitions, n_db_sample):
    """Each worker draws max(1, N/P) transactions i.i.d. with replacement
    from its own partition; worker 0 gathers them into one database."""
    P = cluster.P
    per = max(1, n_db_sample // P)
    local = []
    for w in range(P):
        part = partitions[w]
        rows = []
        if len(part):
            rng = cluster.rngs[w]
            for _ in range(per):
                rows.append(part.transactions[rng.randrange(len(part))].items)
        local.append(rows)
    gathered = _gather0(cluster, local)
    allrows = [tuple(r) for rows in gathered for r in rows]
    return TransactionDB.from_itemlists(allrows)


def _replicate_db(cluster, db_sample):
    rows = tuple(t.items for t in db_sample)
    copies = _bcast0(cluster, rows)
    dbs = [db_sample]
    for rows_w in copies[1:]:
        dbs.append(TransactionDB.from_itemlists([tuple(r) for r in rows_w]))
    return dbs


def phase1_coverage_seq(cluster, partitions, minsup, n_db_sample,
                        n_fi_sample, db_sample=None):
    """Worker 0 mines maximal itemsets on the database sample, then draws
    the itemset sample from their powersets (duplicate-friendly mode)."""
    n_total = sum(len(p) for p in partitions)
    if db_sample is None:
        db_sample = _draw_db_sample(cluster, partitions, n_db_sample)
    ms = scaled_minsup(minsup, n_total, len(db_sample))
    mfis = sorted(mfi_mine(db_sample, ms))
    if not mfis:
        return db_sample, FiSample([], "coverage-modified")
    fi = coverage_sample(mfis, n_fi_sample,
                         seed=f"{cluster.seed}:w0:cov", exact=False)
    return db_sample, fi


def _quotas(total, shares):
    """Largest-remainder split of `total` proportional to `shares`."""
    s = sum(shares)
    if s == 0:
        return [0] * len(shares)
    exact = [total * x / s for x in shares]
    out = [int(e) for e in exact]
    short = total - sum(out)
    order = sorted(range(len(shares)), key=lambda i: (out[i] - exact[i], i))
    for i in order[:short]:
        out[i] += 1
    return out


def phase1_coverage_par(cluster, partitions, minsup, n_db_sample,
                        n_fi_sample, dynamic_lb=True, db_sample=None):
    """Maximal sets are mined cooperatively; each worker then samples from
    its own store in proportion to its powerset mass."""
    n_total = sum(len(p) for p in partitions)
    if db_sample is None:
        db_sample = _draw_db_sample(cluster, partitions, n_db_sample)
    dbs = _replicate_db(cluster, db_sample)
    ms = scaled_minsup(minsup, n_total, len(db_sample))
    msets = _parallel_mfi_workers(cluster, dbs, ms, dynamic_lb)
    mfis = [sorted(m.itemsets()) for m in msets]
    shares = [sum(2 ** len(m) for m in ms_i) for ms_i in mfis]
    shares = _bcast0(cluster, _gather0(cluster, shares))[0]
    quotas = _quotas(n_fi_sample, shares)
    local = []
    for w in range(cluster.P):
        if quotas[w] and mfis[w]:
            s = coverage_sample(mfis[w], quotas[w],
                                seed=f"{cluster.seed}:w{w}:cov", exact=False)
            local.append(s.itemsets)
        else:
            local.append([])
    parts = _gather0(cluster, local)
    items = [tuple(u) for chunk in parts for u in chunk]
    return db_sample, FiSample(items, "coverage-modified")


def phase1_reservoir(cluster, partitions, minsup, n_db_sample, n_fi_sample,
                     db_sample=None):
    """Workers stream their 1-item-prefix classes (stealing enabled) into
    reservoirs; worker 0 downselects hypergeometrically to one sample."""
    n_total = sum(len(p) for p in partitions)
    if db_sample is None:
        db_sample = _draw_db_sample(cluster, partitions, n_db_sample)
    dbs = _replicate_db(cluster, db_sample)
    ms = scaled_minsup(minsup, n_total, len(db_sample))
    P = cluster.P
    sup1 = dbs[0].item_supports()
    items = [b for b in sorted(sup1) if sup1[b] >= ms]
    states = [ReservoirState(n_fi_sample, cluster.rngs[w]) for w in range(P)]
    if items:
        queues = _static_split(items, P)

        def proc(w, root):
            st = states[w]
            for rec in eclat(dbs[w], ms, roots=[root]):
                st.offer(rec.itemset)

        _dynamic_units(cluster, queues, proc)
    counts = _gather0(cluster, [st.seen for st in states])
    n = min(n_fi_sample, sum(counts))
    mvh_seed = random.Random(f"{cluster.seed}:mvh").getrandbits(63)
    draws = multivariate_hypergeom(counts, n, mvh_seed) if n else [0] * P
    draws = _bcast0(cluster, draws)[0]
    local = [cluster.rngs[w].sample(states[w].items, draws[w])
             for w in range(P)]
    parts = _gather0(cluster, local)
    sample = [tuple(u) for chunk in parts for u in chunk]
    return db_sample, FiSample(sample, "reservoir", total_seen=sum(counts))


# --------------------------------------------------- phase 4 execution

class TidlistCache:
    """Per-depth (item, prefix cover, extension covers) entries.

    Advancing to the next prefix keeps the entries along the longest
    common prefix with the previous one; the reuse counter tallies the
    entries kept.
    """

    def __init__(self, db, stats=None):
        self._vert = db.vertical()
        self._all = frozenset(t.tid for t in db)
        self._st = stats
        self.entries = []  # [item, cover, extension cover map]
        self.reuses = 0

    def _intersect(self, base, item):
        if self._st is not None:
            self._st.intersections += 1
        return base & self._vert.get(item, frozenset())

    def advance(self, prefix):
        """Point the cache at prefix; returns the prefix's cover."""
        lcp = 0
        while (lcp < len(self.entries) and lcp < len(prefix)
               and self.entries[lcp][0] == prefix[lcp]):
            lcp += 1
        self.reuses += lcp
        del self.entries[lcp:]
        for d in range(lcp, len(prefix)):
            b = prefix[d]
            if self.entries:
                _, base, extmap = self.entries[-1]
                tids = extmap.get(b)
                if tids is None:
                    tids = self._intersect(base, b)
                    extmap[b] = tids
            else:
                tids = frozenset(self._vert.get(b, frozenset()))
            self.entries.append([b, tids, {}])
        return self.entries[-1][1] if self.entries else self._all

    def ext_cover(self, b):
        """Cover of the current prefix extended by b; cached."""
        if not self.entries:
            return frozenset(self._vert.get(b, frozenset()))
        _, base, extmap = self.entries[-1]
        tids = extmap.get(b)
        if tids is None:
            tids = self._intersect(base, b)
            extmap[b] = tids
        return tids


def exec_eclat(pbecs, dprime, minsup, stats=None, cache=None):
    """Mine each class's strict members on the exchanged partition.

    Classes run in lexicographic prefix order so the tidlist cache reuses
    shared-prefix work. Supports are exact because the partition holds
    every transaction covering each assigned prefix. Returns (records,
    cache); the class prefixes themselves are never emitted here.
    """
    st = stats if stats is not None else MinerStats()
    if cache is None:
        cache = TidlistCache(dprime, st)
    out = set()
    opts = EclatOpts()
    for p in sorted(pbecs, key=lambda p: p.prefix):
        prefix = tuple(p.prefix)
        base = cache.advance(prefix)
        if len(base) < minsup:
            continue
        exts = []
        for e in p.extensions:
            te = cache.ext_cover(e)
            st.support_computations += 1
            if len(te) >= minsup:
                exts.append((e, te, len(te)))
        for rec in _eclat_node(prefix, len(base), (), exts, minsup, opts, st):
            if rec.itemset != prefix:
                out.add(rec)
    return out, cache


def _prefix_candidates(plan):
    """Nonempty subsets of planned prefixes that no class claims strictly."""
    cands = set()
    for p in plan.pbecs:
        for v in _subsets(tuple(p.prefix)):
            if v:
                cands.add(tuple(sorted(v)))
    return sorted(w for w in cands
                  if not any(pbec_contains(p, w) for p in plan.pbecs))


def phase4_prefix_supports(cluster, plan, partitions, minsup):
    """Count every candidate prefix subset on the original partitions and
    sum at worker 0; emits each such itemset at most once, so the union
    with the per-class outputs is duplicate-free."""
    cands = _prefix_candidates(plan)
    local = []
    for q in range(cluster.P):
        part = partitions[q]
        local.append([len(part.tidlist(w)) for w in cands])
    gathered = _gather0(cluster, local)
    out = set()
    for i, w in enumerate(cands):
        total = sum(counts[i] for counts in gathered)
        if total >= minsup:
            out.add(FiRecord(tuple(w), total))
    return out


# ------------------------------------------------------- the full run

@dataclass
class RunMetrics:
    variant: str
    P: int
    seed: object
    minsup: int
    n_db_sample: int
    n_fi_sample: int
    msgs_sent: list
    bytes_sent: list
    work: list          # per-worker phase-4 set operations + support checks
    cache_reuses: list
    replication: float
    wall_time: float


@dataclass
class RunResult:
    fis: set            # FiRecord union over workers
    worker_fis: list    # per-worker outputs; worker 0 holds the prefix pass
    plan: PbecPlan
    metrics: RunMetrics


def run_parallel_fimi(partitions, variant, minsup, seed=0, n_db_sample=10000,
                      n_fi_sample=19869, alpha=0.3, dynamic_lb=True,
                      assign="lpt", threads=False, params=None):
    """Run the four-phase pipeline over disjoint partitions.

    The union of worker outputs equals a sequential miner's output on the
    concatenated database, itemset for itemset and support for support,
    regardless of variant, seed, worker count, or sample quality. With
    params given, sample sizes come from the closed-form bounds instead of
    the explicit counts. assign="random" replaces the final processor
    assignment with a seeded uniform one (the load-balance baseline).
    """
    t0 = time.perf_counter()
    P = len(partitions)
    if P < 1:
        raise ParameterError("need at least one partition")
    if variant not in ("seq", "par", "reservoir"):
        raise ParameterError(f"unknown variant {variant!r}")
    if minsup < 1:
        raise ParameterError("minsup must be >= 1")
    if assign not in ("lpt", "random"):
        raise ParameterError(f"unknown assignment mode {assign!r}")
    tids = [t.tid for part in partitions for t in part]
    if len(set(tids)) != len(tids):
        raise ParameterError("partitions must be disjoint")
    if params is not None:
        n_db_sample = db_sample_size(params.eps_db, params.delta_db)
        if variant == "reservoir":
            n_fi_sample = reservoir_sample_size(params.eps_fi, params.delta_fi,
                                                params.rho)
        else:
            n_fi_sample = coverage_sample_size(params.eps_fi, params.delta_fi,
                                               params.rho)
    cluster = SimCluster(P, seed)
    n_total = sum(len(p) for p in partitions)

    # exact global frequent items: per-partition counts summed at worker 0
    local_counts = []
    for q in range(P):
        counts = {}
        for t in partitions[q]:
            for b in t.items:
                counts[b] = counts.get(b, 0) + 1
        local_counts.append(counts)
    gathered = _gather0(cluster, local_counts)
    totals = {}
    for counts in gathered:
        for b, c in counts.items():
            totals[b] = totals.get(b, 0) + c
    freq_items = tuple(sorted(b for b, c in totals.items() if c >= minsup))
    freq_items = tuple(_bcast0(cluster, freq_items)[0])

    if variant == "seq":
        db_sample, fi_sample = phase1_coverage_seq(
            cluster, partitions, minsup, n_db_sample, n_fi_sample)
    elif variant == "par":
        db_sample, fi_sample = phase1_coverage_par(
            cluster, partitions, minsup, n_db_sample, n_fi_sample, dynamic_lb)
    else:
        db_sample, fi_sample = phase1_reservoir(
            cluster, partitions, minsup, n_db_sample, n_fi_sample)

    plan = plan_phase2(fi_sample, db_sample, alpha, P, items=freq_items)
    if assign == "random":
        rng = random.Random(f"{seed}:assign")
        where = [rng.randrange(P) for _ in plan.pbecs]
        reassigned = tuple(tuple(k for k, q in enumerate(where) if q == i)
                           for i in range(P))
        plan = PbecPlan(plan.pbecs, reassigned, plan.alpha, plan.P,
                        plan.n_sample)
    plan = _bcast0(cluster, plan)[0]

    dprimes = phase3_exchange(cluster, plan, partitions)
    replication = sum(len(d) for d in dprimes) / n_total if n_total else 0.0

    stats = [MinerStats() for _ in range(P)]
    caches = [None] * P

    def mine_worker(q):
        try:
            assigned = [plan.pbecs[k] for k in plan.assignment[q]]
            fis, cache = exec_eclat(assigned, dprimes[q], minsup, stats[q])
            return fis, cache
        except Exception as e:
            raise WorkerPanic(q, e) from e

    worker_fis = [None] * P
    if threads and P > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=P) as pool:
            for q, (fis, cache) in enumerate(pool.map(mine_worker, range(P))):
                worker_fis[q] = fis
                caches[q] = cache
    else:
        for q in range(P):
            worker_fis[q], caches[q] = mine_worker(q)

    prefix_fis = phase4_prefix_supports(cluster, plan, partitions, minsup)
    worker_fis[0] = worker_fis[0] | prefix_fis
    for q in range(1, P):
        cluster.send(q, 0, "FIS", sorted(worker_fis[q]))
    union = set(worker_fis[0])
    for _ in range(1, P):
        _, _, payload = cluster.recv(0)
        union.update(FiRecord(tuple(i), s) for i, s in payload)

    cluster.assert_quiescent()
    metrics = RunMetrics(
        variant=variant, P=P, seed=seed, minsup=minsup,
        n_db_sample=n_db_sample, n_fi_sample=n_fi_sample,
        msgs_sent=list(cluster.msgs_sent), bytes_sent=list(cluster.bytes_sent),
        work=[st.intersections + st.support_computations for st in stats],
        cache_reuses=[c.reuses if c else 0 for c in caches],
        replication=replication, wall_time=time.perf_counter() - t0)
    return RunResult(union, worker_fis, plan, metrics)


# ------------------------------------------------------------ reporting

def run_manifest(result):
    m = result.metrics
    return (f"variant={m.variant} P={m.P} seed={m.seed} minsup={m.minsup} "
            f"n_db_sample={m.n_db_sample} n_fi_sample={m.n_fi_sample} "
            f"alpha={result.plan.alpha} pbecs={len(result.plan.pbecs)} "
            f"replication={m.replication:.4f} wall={m.wall_time:.3f}s")


def metrics_csv(result):
    m = result.metrics
    lines = ["worker,msgs_sent,bytes_sent,work,cache_reuses,replication,wall_time"]
    for w in range(m.P):
        lines.append(f"{w},{m.msgs_sent[w]},{m.bytes_sent[w]},"
                     f"{m.work[w]},{m.cache_reuses[w]},,")
    lines.append(f"all,{sum(m.msgs_sent)},{sum(m.bytes_sent)},{sum(m.work)},"
                 f"{sum(m.cache_reuses)},{m.replication:.6f},{m.wall_time:.6f}")
    return "\n".join(lines) + "\n"
