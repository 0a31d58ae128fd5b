"""Sequential miners: Apriori, Eclat (tidlists or diffsets), FPGrowth, a
depth-first maximal-itemset miner, and association-rule generation.

All miners agree on their output, the exact set of frequent itemsets with
exact supports; they differ in traversal order and in the work they do,
which MinerStats exposes (set operations, support computations, itemsets
emitted). Emission order is algorithm-specific; callers needing a canonical
order sort at report time.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

from .core import FiRecord, ParameterError, canon


@dataclass
class MinerStats:
    """Work counters, the desk-scale proxy for mining cost."""
    intersections: int = 0
    support_computations: int = 0
    fis_emitted: int = 0
    # one (n_absorbed, closed_size) entry per DFS node when closure_opt is on
    closure_events: list = field(default_factory=list)


@dataclass(frozen=True)
class EclatOpts:
    use_diffsets: bool = False
    dynamic_order: bool = False
    closure_opt: bool = False


# ---------------------------------------------------------------- Apriori

class PrefixTrieNode:
    """Candidate-prefix trie; leaves (depth == max_depth) carry supports."""

    __slots__ = ("depth", "max_depth", "support", "children")

    def __init__(self, depth, max_depth):
        self.depth = depth
        self.max_depth = max_depth
        self.support = 0
        self.children = {}


def _trie_insert(root, itemset):
    node = root
    for b in itemset:
        nxt = node.children.get(b)
        if nxt is None:
            nxt = PrefixTrieNode(node.depth + 1, root.max_depth)
            node.children[b] = nxt
        node = nxt


def _trie_count(node, txn, start):
    # walk every embedding of a candidate into the (sorted) transaction
    if node.depth == node.max_depth:
        node.support += 1
        return
    for i in range(start, len(txn)):
        child = node.children.get(txn[i])
        if child is not None:
            _trie_count(child, txn, i + 1)


def _trie_collect(node, path, out):
    if node.depth == node.max_depth:
        out.append((tuple(path), node.support))
        return
    for b in sorted(node.children):
        path.append(b)
        _trie_collect(node.children[b], path, out)
        path.pop()


def _gen_candidates(prev):
    """Join k-1 level itemsets sharing their first k-2 items, subset-prune."""
    prevset = set(prev)
    k1 = len(prev[0])
    out = []
    for i, a in enumerate(prev):
        for b in prev[i + 1:]:
            if a[:-1] != b[:-1]:
                break  # sorted level: the shared-prefix block is contiguous
            cand = a + (b[-1],)
            if all(cand[:j] + cand[j + 1:] in prevset for j in range(k1)):
                out.append(cand)
    return out


def apriori(db, minsup, stats=None):
    """Level-wise mining with trie-based candidate counting."""
    if minsup < 1:
        raise ParameterError("minsup must be >= 1")
    st = stats if stats is not None else MinerStats()
    sup1 = db.item_supports()
    st.support_computations += len(sup1)
    level = [((b,), sup1[b]) for b in sorted(sup1) if sup1[b] >= minsup]
    for iset, s in level:
        st.fis_emitted += 1
        yield FiRecord(iset, s)
    while level:
        prev = [iset for iset, _ in level]
        cands = _gen_candidates(prev)
        if not cands:
            return
        root = PrefixTrieNode(0, len(cands[0]))
        for c in cands:
            _trie_insert(root, c)
        for t in db:
            _trie_count(root, t.items, 0)
        st.support_computations += len(cands)
        found = []
        _trie_collect(root, [], found)
        level = sorted((iset, s) for iset, s in found if s >= minsup)
        for iset, s in level:
            st.fis_emitted += 1
            yield FiRecord(iset, s)


# ------------------------------------------------------------------ Eclat

def _subsets(pool):
    # every subset of a small pool, the empty one first
    out = [()]
    for b in pool:
        out += [s + (b,) for s in out]
    return out


def eclat(db, minsup, opts=None, stats=None, roots=None):
    """Depth-first search over prefix-based equivalence classes.

    `roots` restricts the search to the subtrees of the given items; each
    root keeps its full extension set (all frequent items above it), so
    disjoint root sets partition the output. Default mines everything.

    With use_diffsets, singletons keep tidlists and deeper nodes carry
    difference sets: d(P + {e,f}) = d(P + {f}) - d(P + {e}), with support
    maintained by subtraction. With dynamic_order, each node processes its
    extensions in ascending support of prefix + {e}. With closure_opt,
    extensions whose support equals the prefix support are absorbed into a
    pool and all pool subsets are emitted without deeper recursion.
    """
    if minsup < 1:
        raise ParameterError("minsup must be >= 1")
    opts = opts or EclatOpts()
    st = stats if stats is not None else MinerStats()

    vert = db.vertical()
    sup1 = {b: len(ts) for b, ts in vert.items()}
    st.support_computations += len(sup1)
    freq = [b for b in sorted(sup1) if sup1[b] >= minsup]
    n = len(db)

    pool0 = ()
    if roots is None and opts.closure_opt:
        # items present in every transaction close the (virtual) empty prefix
        pool0 = tuple(b for b in freq if sup1[b] == n)
        st.closure_events.append((len(pool0), len(pool0)))
        for v in _subsets(pool0):
            if v:
                st.fis_emitted += 1
                yield FiRecord(v, n)

    if roots is None:
        root_items = [b for b in freq if b not in pool0]
    else:
        freqset = set(freq)
        root_items = sorted(b for b in roots if b in freqset)
    if opts.dynamic_order:
        root_items.sort(key=lambda b: (sup1[b], b))

    ext_src = [b for b in freq if b not in pool0]
    for r in root_items:
        tid_r = vert[r]
        child_exts = []
        for f in ext_src:
            if f <= r:
                continue
            st.intersections += 1
            st.support_computations += 1
            if opts.use_diffsets:
                d = tid_r - vert[f]
                s = sup1[r] - len(d)
            else:
                d = tid_r & vert[f]
                s = len(d)
            if s >= minsup:
                child_exts.append((f, d, s))
        yield from _eclat_node((r,), sup1[r], pool0, child_exts, minsup, opts, st)


def _eclat_node(spine, supp_u, pool, exts, minsup, opts, st):
    # exts: (item, data, supp) triples, frequent, ascending item order
    if opts.closure_opt:
        absorbed = tuple(b for b, _, s in exts if s == supp_u)
        newpool = pool + absorbed
        st.closure_events.append((len(absorbed), len(spine) + len(newpool)))
        rest = [(b, d, s) for b, d, s in exts if s < supp_u]
    else:
        newpool = pool
        rest = exts
    for v in _subsets(newpool):
        st.fis_emitted += 1
        yield FiRecord(canon(spine + v), supp_u)

    if opts.dynamic_order:
        rest.sort(key=lambda x: (x[2], x[0]))
    for i, (b, data_b, s_b) in enumerate(rest):
        child_exts = []
        for f, data_f, s_f in rest[i + 1:]:
            st.intersections += 1
            st.support_computations += 1
            if opts.use_diffsets:
                d = data_f - data_b
                s = s_b - len(d)
            else:
                d = data_b & data_f
                s = len(d)
            if s >= minsup:
                child_exts.append((f, d, s))
        yield from _eclat_node(spine + (b,), s_b, newpool, child_exts,
                               minsup, opts, st)


# --------------------------------------------------------------- FPGrowth

class FpTreeNode:
    """FP-tree node; `link` chains same-item nodes for the header table."""

    __slots__ = ("item", "support", "parent", "link", "children")

    def __init__(self, item, parent):
        self.item = item
        self.support = 0
        self.parent = parent
        self.link = None
        self.children = {}


def _fp_build(weighted_txns, minsup):
    """Build a tree from (items, count) rows. Returns (root, header, order, freq)."""
    sup = {}
    for items, c in weighted_txns:
        for b in items:
            sup[b] = sup.get(b, 0) + c
    freq = {b: s for b, s in sup.items() if s >= minsup}
    order = sorted(freq, key=lambda b: (-freq[b], b))
    rank = {b: i for i, b in enumerate(order)}
    root = FpTreeNode(None, None)
    header = {}
    tails = {}
    for items, c in weighted_txns:
        node = root
        for b in sorted((b for b in items if b in rank), key=rank.get):
            child = node.children.get(b)
            if child is None:
                child = FpTreeNode(b, node)
                node.children[b] = child
                if b in tails:
                    tails[b].link = child
                else:
                    header[b] = child
                tails[b] = child
            child.support += c
            node = child
    return root, header, order, freq


def _fp_mine(root, header, order, freq, base, minsup, st):
    if not header:
        return
    # single-path shortcut: emit every combination of the path at once
    path = []
    node = root
    while len(node.children) == 1:
        node = next(iter(node.children.values()))
        path.append((node.item, node.support))
    if not node.children:
        for chosen in _subsets(tuple(range(len(path)))):
            if not chosen:
                continue
            supp = path[chosen[-1]][1]  # supports fall along the path
            st.fis_emitted += 1
            yield FiRecord(canon(base + tuple(path[i][0] for i in chosen)), supp)
        return

    for b in reversed(order):  # ascending support
        st.support_computations += 1
        itemset = canon(base + (b,))
        st.fis_emitted += 1
        yield FiRecord(itemset, freq[b])
        cpb = []
        n = header[b]
        while n is not None:
            items = []
            p = n.parent
            while p is not None and p.item is not None:
                items.append(p.item)
                p = p.parent
            if items:
                cpb.append((items, n.support))
            n = n.link
        if cpb:
            sub = _fp_build(cpb, minsup)
            yield from _fp_mine(*sub, itemset, minsup, st)


def fpgrowth(db, minsup, stats=None):
    """Pattern-growth mining: two scans, then conditional-tree recursion."""
    if minsup < 1:
        raise ParameterError("minsup must be >= 1")
    st = stats if stats is not None else MinerStats()
    root, header, order, freq = _fp_build([(t.items, 1) for t in db], minsup)
    yield from _fp_mine(root, header, order, freq, (), minsup, st)


# ------------------------------------------------------- Maximal itemsets

class MaximalSet:
    """Itemsets kept maximal under inclusion."""

    def __init__(self):
        self._sets = []

    def offer(self, u):
        """Add u unless a superset is stored; stored subsets of u are dropped.

        Returns True when u was added.
        """
        fu = frozenset(u)
        for f in self._sets:
            if fu <= f:
                return False
        self._sets = [f for f in self._sets if not f < fu]
        self._sets.append(fu)
        return True

    def __len__(self):
        return len(self._sets)

    def itemsets(self):
        return {tuple(sorted(f)) for f in self._sets}


def mfi_mine(db, minsup, roots=None, result=None):
    """Maximal frequent itemsets by depth-first search.

    A node with no frequent extension left in its inherited tail is a
    candidate; it enters the result unless a superset is already stored.
    With all frequent items as roots (the default, taken in ascending item
    order) the result is exactly the maximal frequent itemsets.
    """
    if minsup < 1:
        raise ParameterError("minsup must be >= 1")
    vert = db.vertical()
    sup1 = {b: len(ts) for b, ts in vert.items()}
    freq = [b for b in sorted(sup1) if sup1[b] >= minsup]
    freqset = set(freq)
    if roots is None:
        roots = freq
    else:
        bad = sorted(set(roots) - freqset)
        if bad:
            raise ParameterError(f"root {bad[0]!r} is not a frequent item")
        roots = sorted(roots)
    m = result if result is not None else MaximalSet()
    for r in roots:
        tail = [b for b in freq if b > r]
        _mfi_dfs((r,), vert[r], tail, vert, minsup, m)
    return m.itemsets()


def _mfi_dfs(u, tids, tail, vert, minsup, m):
    exts = []
    for b in tail:
        ts = tids & vert[b]
        if len(ts) >= minsup:
            exts.append((b, ts))
    if not exts:
        m.offer(u)
        return
    for i, (b, ts) in enumerate(exts):
        _mfi_dfs(u + (b,), ts, [f for f, _ in exts[i + 1:]], vert, minsup, m)


# ----------------------------------------------------- Association rules

class RuleRecord(NamedTuple):
    antecedent: tuple
    consequent: tuple
    confidence: float
    support: int


def generate_rules(fis, minconf):
    """All rules V => U - V with confidence supp(U)/supp(V) >= minconf.

    Antecedents shrink only below successful rules: if V fails, every
    V' < V fails too, since supp(V') >= supp(V) only lowers confidence.
    The input must be subset-closed (every subset's support available).
    """
    supp = {}
    for iset, s in fis:
        supp[tuple(iset)] = s
    rules = set()
    for u, su in sorted(supp.items()):
        if len(u) < 2:
            continue
        seen = set()
        stack = [tuple(x for x in u if x != b) for b in u]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            sv = supp.get(v)
            if sv is None:
                raise ValueError(f"missing support for {v}; input not subset-closed")
            conf = su / sv
            if conf >= minconf:
                cons = tuple(sorted(set(u) - set(v)))
                rules.add(RuleRecord(v, cons, conf, su))
                if len(v) > 1:
                    stack.extend(tuple(x for x in v if x != b) for b in v)
    return rules


# ------------------------------------------------------------- Reporting

def mine(db, minsup, algo="eclat", opts=None, stats=None):
    """Run one miner and return its records sorted lexicographically."""
    if algo == "apriori":
        out = apriori(db, minsup, stats=stats)
    elif algo == "eclat":
        out = eclat(db, minsup, opts=opts, stats=stats)
    elif algo == "fpgrowth":
        out = fpgrowth(db, minsup, stats=stats)
    else:
        raise ParameterError(f"unknown algorithm {algo!r}")
    return sorted(out)


def format_fi(rec):
    return f"{' '.join(str(b) for b in rec.itemset)}:{rec.support}"
