"""Domain types for itemset mining: itemsets, transactions, databases, PBECs.

Itemsets are canonical tuples of item ids, strictly ascending. Plain tuple
comparison is exactly the lexicographic itemset order used everywhere (a
proper prefix sorts before its extensions). Databases keep the horizontal
view and build the vertical (tidlist) view once, on demand.
"""

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple


class ParameterError(ValueError):
    """A caller-supplied parameter is out of its documented range."""


def canon(items) -> tuple:
    """Canonical itemset: duplicates removed, sorted ascending."""
    return tuple(sorted(set(items)))


def is_canonical(u) -> bool:
    return all(u[i] < u[i + 1] for i in range(len(u) - 1))


class Transaction(NamedTuple):
    tid: int
    items: tuple


class FiRecord(NamedTuple):
    """One mined frequent itemset with its exact support."""
    itemset: tuple
    support: int


class TransactionDB:
    """A sequence of transactions with unique tids.

    Item ids keep their external labels; internally a dense 0..n-1 index
    (side table `labels`) backs the array-indexed vertical view. The label
    remap is order-preserving, so label order and dense order agree.
    """

    def __init__(self, transactions: Iterable[Transaction]):
        txns = []
        seen = set()
        for t in transactions:
            if t.tid in seen:
                raise ValueError(f"duplicate tid {t.tid}")
            seen.add(t.tid)
            items = t.items if is_canonical(t.items) else canon(t.items)
            txns.append(Transaction(t.tid, tuple(items)))
        self.transactions = tuple(txns)
        self.labels = tuple(sorted({b for t in self.transactions for b in t.items}))
        self._dense = {b: k for k, b in enumerate(self.labels)}
        self.n_items = len(self.labels)
        self._vertical = None

    @classmethod
    def from_itemlists(cls, rows, tids=None):
        """Build from bare item lists; tids default to 1..n."""
        if tids is None:
            tids = range(1, len(rows) + 1)
        return cls(Transaction(tid, canon(row)) for tid, row in zip(tids, rows))

    def __len__(self):
        return len(self.transactions)

    def __iter__(self):
        return iter(self.transactions)

    def __eq__(self, other):
        return (isinstance(other, TransactionDB)
                and self.transactions == other.transactions)

    def __hash__(self):
        return hash(self.transactions)

    def vertical(self):
        """Label -> frozenset of tids. Built once, cached."""
        if self._vertical is None:
            # dense array first, then exposed keyed by label
            table = [set() for _ in range(self.n_items)]
            for t in self.transactions:
                for b in t.items:
                    table[self._dense[b]].add(t.tid)
            self._vertical = {b: frozenset(table[k]) for k, b in enumerate(self.labels)}
        return self._vertical

    def tidlist(self, u) -> tuple:
        """Ascending tids of transactions containing every item of u."""
        u = tuple(u)
        if not u:
            return tuple(t.tid for t in self.transactions)
        vert = self.vertical()
        if any(b not in vert for b in u):
            return ()
        acc = None
        for b in u:
            acc = vert[b] if acc is None else acc & vert[b]
        return tuple(sorted(acc))

    def support(self, u) -> int:
        u = tuple(u)
        if not u:
            return len(self.transactions)
        vert = self.vertical()
        if any(b not in vert for b in u):
            return 0
        acc = None
        for b in u:
            acc = vert[b] if acc is None else acc & vert[b]
        return len(acc)

    def item_supports(self) -> dict:
        return {b: len(tids) for b, tids in self.vertical().items()}


def support(db: TransactionDB, u) -> int:
    return db.support(u)


def tidlist(db: TransactionDB, u) -> tuple:
    return db.tidlist(u)


def diffset(db: TransactionDB, u, b) -> tuple:
    """d(U ∪ {b}) = tidlist(U) minus tidlist({b}). Support by subtraction."""
    tu = set(db.tidlist(u))
    tb = set(db.tidlist((b,)))
    return tuple(sorted(tu - tb))


def diffset_from_parent(diffset_j, diffset_i) -> tuple:
    """Child diffset from two sibling diffsets over the same parent prefix.

    d(P ∪ {i,j}) = d(P ∪ {j}) minus d(P ∪ {i}); then
    supp(P ∪ {i,j}) = supp(P ∪ {i}) − |result|. Both arguments must be
    diffsets against the same parent, which the caller guarantees.
    """
    return tuple(sorted(set(diffset_j) - set(diffset_i)))


def minsup_from_relative(rminsup: float, n: int) -> int:
    """Absolute minsup = ceil(rminsup * n); ties at minsup count as frequent.

    The small epsilon absorbs float artifacts (0.2 * 15 must give 3, not 4).
    """
    if not 0 < rminsup <= 1:
        raise ParameterError(f"relative minsup must be in (0, 1], got {rminsup}")
    return max(1, math.ceil(rminsup * n - 1e-9))


def scaled_minsup(minsup_abs: int, n_db: int, n_sample: int) -> int:
    """Rescale an absolute threshold to a sample size, exactly in integers."""
    if n_db <= 0:
        return 1
    return max(1, -(-minsup_abs * n_sample // n_db))


@dataclass(frozen=True)
class Pbec:
    """Prefix-based equivalence class [prefix | extensions].

    `extensions` keeps the planner's order (may be support-based, not id
    order). Membership is strict: a member properly extends the prefix.
    est_count is the number of sample hits used for scheduling.
    """
    prefix: tuple
    extensions: tuple = ()
    est_count: int = 0

    def __post_init__(self):
        if set(self.prefix) & set(self.extensions):
            raise ValueError("prefix and extensions overlap")


def pbec_contains(p: Pbec, x) -> bool:
    """Strict membership: prefix ⊊ x and x ∖ prefix ⊆ extensions."""
    px = set(p.prefix)
    xs = set(x)
    return px < xs and xs - px <= set(p.extensions)
