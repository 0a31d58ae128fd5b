"""Database characteristics: 2-D itemset histograms, closure-extension
statistics, maximal-itemset intersection counts, and a modified pagerank
over the maximal-itemset similarity graph.

Histograms bin itemset length on the x axis and relative support on the
y axis, the unit interval split into 1000 subintervals. CSV output keeps
raw counts; the gnuplot matrix applies log10 (render-time convention).
"""

import math
import random
from dataclasses import dataclass, field

from .core import ParameterError
from .miners import EclatOpts, MinerStats, eclat, mfi_mine

N_SUPPORT_BINS = 1000


def support_bin(s):
    """floor(s * 1000) for relative support s; s = 1 lands in bin 999."""
    if not 0.0 <= s <= 1.0:
        raise ParameterError(f"relative support must be in [0,1], got {s}")
    return min(N_SUPPORT_BINS - 1, int(s * N_SUPPORT_BINS))


@dataclass
class Histogram2D:
    """Counts per (length, support-bin) cell; total equals itemsets counted."""
    cells: dict = field(default_factory=dict)

    def add(self, length, sbin, count=1):
        self.cells[(length, sbin)] = self.cells.get((length, sbin), 0) + count

    def total(self):
        return sum(self.cells.values())

    def lengths(self):
        return sorted({x for x, _ in self.cells})

    def bins(self):
        return sorted({y for _, y in self.cells})


def _absolute(minsup, n):
    if isinstance(minsup, float):
        if not 0 < minsup <= 1:
            raise ParameterError("relative minsup must be in (0, 1]")
        return max(1, math.ceil(minsup * n - 1e-9))
    return minsup


def fi_characteristic(db, minsup):
    """Histogram of every frequent itemset by (length, own-support bin)."""
    n = len(db)
    h = Histogram2D()
    if n == 0:
        return h
    for rec in eclat(db, _absolute(minsup, n)):
        h.add(len(rec.itemset), support_bin(rec.support / n))
    return h


def mfi_characteristic(db, minsups):
    """One histogram row per threshold: maximal-itemset lengths on x, the
    threshold's own support bin on y. Thresholds mapping to the same bin
    share a row."""
    n = len(db)
    h = Histogram2D()
    if n == 0:
        return h
    for ms in minsups:
        ms_abs = _absolute(ms, n)
        if ms_abs > n:
            continue
        row = support_bin(ms_abs / n)
        for m in mfi_mine(db, ms_abs):
            h.add(len(m), row)
    return h


def ci_extension_stats(db, minsup):
    """Closure events of the closure-optimized depth-first search.

    Returns (w_hist, size_hist): occurrences of each absorbed-set size |W|,
    and per |W| the sizes of the closed candidates |prefix ∪ W| (the prefix
    here includes everything absorbed on the path). Totals equal the
    miner's closure-event count.
    """
    st = MinerStats()
    for _ in eclat(db, _absolute(minsup, len(db)),
                   opts=EclatOpts(closure_opt=True), stats=st):
        pass
    w_hist = {}
    size_hist = {}
    for w, size in st.closure_events:
        w_hist[w] = w_hist.get(w, 0) + 1
        per = size_hist.setdefault(w, {})
        per[size] = per.get(size, 0) + 1
    return w_hist, size_hist


def mfi_intersection_hist(mfis):
    """|m_i ∩ m_j| counts over unordered pairs of distinct maximal sets."""
    ms = [set(m) for m in mfis]
    out = {}
    for i in range(len(ms)):
        for j in range(i + 1, len(ms)):
            k = len(ms[i] & ms[j])
            out[k] = out.get(k, 0) + 1
    return out


# ------------------------------------------------------------- pagerank

@dataclass(frozen=True)
class MfiGraph:
    """Nodes are itemsets; edge i -> j holds w_ij = |m_i ∩ m_j| / |m_i|,
    kept only when it clears the weight threshold."""
    nodes: tuple
    edges: dict  # (i, j) -> weight

    def __post_init__(self):
        for (i, j), w in self.edges.items():
            if i == j:
                raise ValueError("self-edges are excluded")
            if not 0.0 <= w <= 1.0:
                raise ValueError(f"edge weight {w} outside [0,1]")
            if not (0 <= i < len(self.nodes) and 0 <= j < len(self.nodes)):
                raise ValueError("edge endpoint out of range")


def mfi_graph(mfis, min_edge_weight=0.6):
    """Similarity graph over the given maximal itemsets."""
    if not 0.0 <= min_edge_weight <= 1.0:
        raise ParameterError("min_edge_weight must be in [0,1]")
    nodes = tuple(tuple(m) for m in mfis)
    sets = [set(m) for m in nodes]
    edges = {}
    for i in range(len(sets)):
        for j in range(len(sets)):
            if i == j:
                continue
            w = len(sets[i] & sets[j]) / len(sets[i])
            if w >= min_edge_weight:
                edges[(i, j)] = w
    return MfiGraph(nodes, edges)


def pagerank(graph, d=0.8, tol=0.01, max_iter=1000):
    """PR(v_i) = (1 - d) + d * sum over in-edges j->i of PR(v_j) * w_ji.

    Weights are used exactly as stored, with no row normalization. The sum
    runs over predecessors. Synchronous iteration from the all-(1-d) start
    until the largest per-node change drops below tol; exceeding max_iter
    raises. Returns (values, D) where D(x) is the fraction of nodes with
    PR <= x.
    """
    if not 0.0 < d < 1.0:
        raise ParameterError("damping d must be in (0,1)")
    if tol <= 0:
        raise ParameterError("tol must be > 0")
    n = len(graph.nodes)
    incoming = [[] for _ in range(n)]
    for (j, i), w in graph.edges.items():
        incoming[i].append((j, w))
    pr = [1.0 - d] * n
    for _ in range(max_iter):
        nxt = [(1.0 - d) + d * sum(pr[j] * w for j, w in incoming[i])
               for i in range(n)]
        delta = max((abs(a - b) for a, b in zip(nxt, pr)), default=0.0)
        pr = nxt
        if delta < tol:
            break
    else:
        raise RuntimeError(f"pagerank did not converge in {max_iter} iterations")
    ordered = sorted(pr)

    def dist(x):
        lo, hi = 0, n
        while lo < hi:
            mid = (lo + hi) // 2
            if ordered[mid] <= x:
                lo = mid + 1
            else:
                hi = mid
        return lo / n if n else 0.0

    return pr, dist


def sample_mfis_for_graph(mfis, k, seed):
    """Uniform without-replacement subset of min(k, |mfis|) itemsets."""
    mfis = list(mfis)
    if k < 0:
        raise ParameterError("k must be >= 0")
    if k == 0:
        return []
    if k >= len(mfis):
        return mfis
    # reservoir over the list: simple replacement rule
    rng = random.Random(seed)
    res = mfis[:k]
    for t in range(k + 1, len(mfis) + 1):
        m = int(t * rng.random())
        if m < k:
            res[m] = mfis[t - 1]
    return res


# ------------------------------------------------------------ emission

def histogram_csv(h):
    """length,support_bin,count rows with raw counts."""
    lines = ["length,support_bin,count"]
    for (x, y), c in sorted(h.cells.items()):
        lines.append(f"{x},{y},{c}")
    return "\n".join(lines) + "\n"


def histogram_gnuplot(h):
    """Nonuniform-matrix format: first row lists the length bins, each
    further row is a support bin followed by log10(count) per length;
    empty cells carry -1 (below any real value, log10(1) = 0)."""
    xs = h.lengths()
    ys = h.bins()
    lines = [" ".join([str(len(xs))] + [str(x) for x in xs])]
    for y in ys:
        row = [str(y)]
        for x in xs:
            c = h.cells.get((x, y), 0)
            row.append(f"{math.log10(c):.6g}" if c else "-1")
        lines.append(" ".join(row))
    return "\n".join(lines) + "\n"


def counts_csv(counts, key_name, value_name="count"):
    """Flat CSV for simple integer-keyed histograms."""
    lines = [f"{key_name},{value_name}"]
    for k in sorted(counts):
        lines.append(f"{k},{counts[k]}")
    return "\n".join(lines) + "\n"


def pagerank_csv(graph, pr):
    lines = ["node,itemset,pagerank"]
    for i, (node, v) in enumerate(zip(graph.nodes, pr)):
        label = " ".join(str(b) for b in node)
        lines.append(f"{i},{label},{v:.8f}")
    return "\n".join(lines) + "\n"
