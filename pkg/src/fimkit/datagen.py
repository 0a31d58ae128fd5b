"""Synthetic transaction generator, FIMI-format I/O, database partitioning.

The generator follows the classic retail-basket recipe: a pool of weighted
patterns is drawn once, then each transaction is filled by picking patterns
(weight-proportional), corrupting each picked instance, and handling the
last, overflowing pattern with a fair coin (keep vs defer to the next
transaction).

All randomness comes from seeded random.Random (Mersenne Twister, 64-bit
seeds); fixed seed means byte-identical output files.
"""

import math
import random
from dataclasses import dataclass

from .core import ParameterError, TransactionDB, canon


@dataclass(frozen=True)
class GenParams:
    n_items: int
    n_patterns: int
    avg_pattern_len: float
    avg_txn_len: float
    n_txns: int
    corruption_mean: float = 0.5
    weight_mean: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if min(self.n_items, self.n_patterns, self.n_txns) < 1:
            raise ParameterError("counts must be >= 1")
        if self.avg_pattern_len <= 0 or self.avg_txn_len <= 0:
            raise ParameterError("means must be > 0")
        if self.corruption_mean < 0 or self.weight_mean <= 0:
            raise ParameterError("corruption_mean >= 0 and weight_mean > 0 required")


def _poisson(rng, mean):
    # Knuth's product method; fine for the desk-scale means used here.
    limit = math.exp(-mean)
    k = 0
    p = 1.0
    while True:
        p *= rng.random()
        if p <= limit:
            return k
        k += 1


def generate_patterns(p: GenParams):
    """The pattern pool: list of (itemset, weight, corruption).

    Lengths are Poisson(avg_pattern_len) clamped to [1, n_items]. Each
    pattern reuses floor(f * len) items of the previous one, f capped at 1
    from an Exponential with mean 0.5. Weights are Exponential(weight_mean)
    normalized to sum 1. Corruption is uniform on [0, min(1, 2*corruption_mean)],
    so the default mean 0.5 reproduces a U[0,1] corruption level.
    """
    rng = random.Random(p.seed)
    universe = list(range(1, p.n_items + 1))
    c_hi = min(1.0, 2.0 * p.corruption_mean)
    patterns = []
    prev = None
    for _ in range(p.n_patterns):
        length = max(1, min(p.n_items, _poisson(rng, p.avg_pattern_len)))
        if prev is None:
            items = rng.sample(universe, length)
        else:
            f = min(1.0, rng.expovariate(1.0 / 0.5))
            n_reuse = min(int(f * length), len(prev), length)
            reused = rng.sample(prev, n_reuse)
            pool = [b for b in universe if b not in set(reused)]
            items = reused + rng.sample(pool, length - n_reuse)
        itemset = canon(items)
        weight = rng.expovariate(1.0 / p.weight_mean)
        corruption = rng.uniform(0.0, c_hi)
        patterns.append([itemset, weight, corruption])
        prev = itemset
    total = sum(w for _, w, _ in patterns)
    return [(items, w / total, c) for items, w, c in patterns]


def _corrupt(rng, pattern, c):
    # drop one uniformly chosen item while a fresh draw is below the
    # corruption level; c=0 never drops, c=1 always empties the instance
    items = list(pattern)
    while items and rng.random() < c:
        items.pop(rng.randrange(len(items)))
    return items


def generate_db(p: GenParams) -> TransactionDB:
    """|D| transactions; tids 1..|D|; no empty transactions."""
    patterns = generate_patterns(p)
    rng = random.Random(f"{p.seed}:txns")
    weights = [w for _, w, _ in patterns]
    cum = []
    acc = 0.0
    for w in weights:
        acc += w
        cum.append(acc)
    idx = list(range(len(patterns)))

    rows = []
    deferred = None
    for _ in range(p.n_txns):
        target = 0
        while target == 0:
            target = _poisson(rng, p.avg_txn_len)
        txn = set()
        picks = 0
        last_inst = None
        while len(txn) < target and picks < 16 + 4 * target:
            if deferred is not None:
                inst = deferred
                deferred = None
            else:
                k = rng.choices(idx, cum_weights=cum, k=1)[0]
                inst = _corrupt(rng, patterns[k][0], patterns[k][2])
                picks += 1
            if not inst:
                continue
            last_inst = inst
            if txn and len(txn | set(inst)) > target:
                if rng.random() < 0.5:
                    txn |= set(inst)  # keep the overflow
                else:
                    deferred = inst   # move it to the next transaction
                break
            txn |= set(inst)
        if not txn:
            # every pick was fully corrupted away; never emit an empty txn
            txn = {last_inst[0]} if last_inst else {rng.randrange(1, p.n_items + 1)}
        rows.append(sorted(txn))
    return TransactionDB.from_itemlists(rows)


class FimiFormatError(ValueError):
    """Malformed FIMI content; carries the 1-based line number."""

    def __init__(self, lineno, token):
        self.lineno = lineno
        super().__init__(f"line {lineno}: bad item token {token!r}")


def read_fimi(path) -> TransactionDB:
    """One transaction per line, space-separated non-negative item ids.

    Items are deduped and sorted per line; an empty line is an empty
    transaction and still counts toward |db|. Tids are the line numbers.
    """
    rows = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                rows.append(())
                continue
            items = []
            for tok in line.split():
                if not tok.isdigit():
                    raise FimiFormatError(lineno, tok)
                items.append(int(tok))
            rows.append(canon(items))
    return TransactionDB.from_itemlists(rows)


def write_fimi(db: TransactionDB, path):
    with open(path, "w", encoding="ascii") as fh:
        for t in db:
            fh.write(" ".join(str(b) for b in t.items))
            fh.write("\n")


def partition_db(db: TransactionDB, P: int):
    """P contiguous partitions, sizes differing by at most 1, tids kept."""
    if P < 1:
        raise ParameterError("P must be >= 1")
    n = len(db)
    base, extra = divmod(n, P)
    parts = []
    start = 0
    for i in range(P):
        size = base + (1 if i < extra else 0)
        parts.append(TransactionDB(db.transactions[start:start + size]))
        start += size
    return parts


def read_config(path) -> dict:
    """key=value lines; '#' starts a comment; values parsed as int/float/str."""
    out = {}
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"config line {lineno}: expected key=value")
            key, val = (s.strip() for s in line.split("=", 1))
            for cast in (int, float):
                try:
                    val = cast(val)
                    break
                except ValueError:
                    continue
            out[key] = val
    return out
