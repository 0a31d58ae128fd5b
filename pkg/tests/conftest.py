"""Shared fixtures: worked-example databases, oracles, and DB builders."""

import itertools
import math
import random

import pytest

from fimkit import Transaction, TransactionDB, GenParams, generate_db


def make_db(rows, start_tid=1):
    txns = tuple(Transaction(start_tid + i, tuple(sorted(set(r))))
                 for i, r in enumerate(rows))
    return TransactionDB(txns)


# Six-item, 15-transaction worked example used throughout the docs.
ROWS15 = [
    [1, 2, 3, 4], [5, 6], [1, 3, 4], [1, 2, 6], [1, 4, 5, 6],
    [1, 2, 3, 4, 5], [2, 3, 4, 5], [2, 3, 4, 5, 6], [3, 4, 5, 6], [2, 4, 5],
    [1, 2, 3, 4, 5], [2, 4, 5, 6], [3, 4, 5, 6], [3, 4, 5, 6], [1, 3, 4, 5, 6],
]

# All 25 frequent itemsets of ROWS15 at minsup=5, derived by hand.
FIS15 = {
    (1,): 7, (2,): 8, (3,): 10, (4,): 13, (5,): 12, (6,): 9,
    (1, 3): 5, (1, 4): 6, (2, 3): 5, (2, 4): 7, (2, 5): 6,
    (3, 4): 10, (3, 5): 8, (3, 6): 5, (4, 5): 11, (4, 6): 7, (5, 6): 8,
    (1, 3, 4): 5, (2, 3, 4): 5, (2, 4, 5): 6, (3, 4, 5): 8,
    (3, 4, 6): 5, (3, 5, 6): 5, (4, 5, 6): 7,
    (3, 4, 5, 6): 5,
}

MFIS15 = {(1, 3, 4), (2, 3, 4), (2, 4, 5), (3, 4, 5, 6)}

# Six-transaction bottom-up example; minsup=2 there.
ROWS6 = [
    [1, 2, 3, 4], [3, 5], [1, 3, 4], [1, 2], [1, 3, 4, 5], [1, 2, 3, 4, 5],
]

# Four-transaction prefix-tree example; {5,6} is frequent at minsup=2.
ROWS_FP4 = [
    [1, 3, 4], [4, 5, 6], [1, 3, 5, 6], [1, 2, 3],
]

# Four-transaction level-wise worked example, as printed and with the
# one-transaction repair that makes the printed run self-consistent.
ROWS_APRIORI4_PRINTED = [[1, 2, 5], [1, 3, 5], [2, 4, 5], [1, 2, 3, 5]]
ROWS_APRIORI4 = [[1, 2, 5], [1, 3], [2, 4, 5], [1, 2, 3, 5]]


@pytest.fixture(scope="session")
def db15():
    return make_db(ROWS15)


@pytest.fixture(scope="session")
def db6():
    return make_db(ROWS6)


@pytest.fixture(scope="session")
def db_fp4():
    return make_db(ROWS_FP4)


@pytest.fixture(scope="session")
def db_apriori4():
    return make_db(ROWS_APRIORI4)


def brute_force_fis(db, minsup):
    """Powerset enumeration oracle; fine for universes up to ~12 items."""
    universe = sorted({b for t in db for b in t.items})
    txns = [set(t.items) for t in db]
    out = set()
    for r in range(1, len(universe) + 1):
        for u in itertools.combinations(universe, r):
            s = sum(1 for t in txns if t.issuperset(u))
            if s >= minsup:
                out.add((u, s))
    return out


def brute_force_mfis(db, minsup):
    fis = {u for u, _ in brute_force_fis(db, minsup)}
    sets = [set(u) for u in fis]
    return {u for u in fis
            if not any(set(u) < v for v in sets)}


def random_small_db(seed, max_items=10, max_txns=40):
    """Nonempty random transactions over a small universe."""
    rng = random.Random(seed)
    n_items = rng.randint(2, max_items)
    n_txns = rng.randint(1, max_txns)
    rows = []
    for _ in range(n_txns):
        size = rng.randint(1, n_items)
        rows.append(rng.sample(range(1, n_items + 1), size))
    return make_db(rows)


def clustered_db(seed, n_txns=1200, n_clusters=4, items_per=10,
                 p_in=0.55, p_noise=0.02):
    """Transactions concentrated on per-cluster item blocks, so prefix
    classes from the same block share most of their transactions."""
    rng = random.Random(seed)
    blocks = [list(range(c * items_per + 1, (c + 1) * items_per + 1))
              for c in range(n_clusters)]
    universe = list(range(1, n_clusters * items_per + 1))
    rows = []
    for _ in range(n_txns):
        c = rng.randrange(n_clusters)
        items = {b for b in blocks[c] if rng.random() < p_in}
        items |= {b for b in universe if rng.random() < p_noise}
        if not items:
            items = {rng.choice(blocks[c])}
        rows.append(sorted(items))
    return make_db(rows)


def relative_minsup(db, r):
    return max(1, math.ceil(r * len(db) - 1e-9))


@pytest.fixture(scope="session")
def generated_dbs():
    """Twenty 2000-transaction, 50-item databases shared by the heavier
    parallel tests."""
    dbs = []
    for seed in range(20):
        p = GenParams(n_items=50, n_patterns=10, avg_pattern_len=4.0,
                      avg_txn_len=8.0, n_txns=2000, seed=seed)
        dbs.append(generate_db(p))
    return dbs
