"""Sample-size formulas and the itemset-sampling engines.

Three engines deliver frequent-itemset samples: exact coverage (uniform
over the union of the MFI powersets), modified coverage (uniform over the
disjoint union, so itemsets below many MFIs are preferred), and reservoir
sampling over a miner's output stream. Closed-form sample sizes for each
are exposed alongside two small discrete-distribution helpers.
"""

import math
import random
from dataclasses import dataclass

import numpy as np

from .core import FiRecord, ParameterError


@dataclass(frozen=True)
class SampleParams:
    """Accuracy knobs: (eps_db, delta_db) for the database sample,
    (eps_fi, delta_fi) for the itemset sample, rho the smallest relative
    class size worth resolving."""
    eps_db: float
    delta_db: float
    eps_fi: float
    delta_fi: float
    rho: float

    def __post_init__(self):
        for name in ("eps_db", "delta_db", "eps_fi", "delta_fi", "rho"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ParameterError(f"{name} must be in (0,1), got {v}")


@dataclass
class FiSample:
    itemsets: list
    source: str  # coverage-exact | coverage-modified | reservoir
    total_seen: int = None
    short: bool = False  # reservoir saw fewer elements than requested


# ------------------------------------------------------- size formulas

def db_sample_size(eps, delta):
    """Transactions needed so every support estimate is within eps·|db|
    of truth with probability 1-delta: ceil(ln(2/delta) / (2 eps^2))."""
    if not 0.0 < eps < 1.0 or not 0.0 < delta < 1.0:
        raise ParameterError("eps and delta must be in (0,1)")
    return math.ceil(math.log(2.0 / delta) / (2.0 * eps * eps))


def coverage_sample_size(eps, delta, rho):
    """Draws needed by the coverage sampler to estimate any class of
    relative size >= rho within factor eps: ceil(4 ln(2/delta)/(eps^2 rho))."""
    if eps <= 0.0 or not 0.0 < rho <= 1.0 or not 0.0 < delta < 2.0:
        raise ParameterError("need eps > 0, rho in (0,1], delta in (0,2)")
    return math.ceil(4.0 * math.log(2.0 / delta) / (eps * eps * rho))


def kl(x, y):
    """Kullback-Leibler divergence of Bernoulli(x) from Bernoulli(y),
    with the 0·ln0 = 0 convention."""
    if not 0.0 <= x <= 1.0 or not 0.0 < y < 1.0:
        raise ParameterError("need x in [0,1], y in (0,1)")
    out = 0.0
    if x > 0.0:
        out += x * math.log(x / y)
    if x < 1.0:
        out += (1.0 - x) * math.log((1.0 - x) / (1.0 - y))
    return out


def reservoir_sample_size(eps, delta, rho):
    """Reservoir size guaranteeing relative class estimates within eps:
    ceil(-ln(delta/2) / kl(rho+eps, rho))."""
    if eps <= 0.0:
        raise ParameterError("eps must be > 0 (kl(rho, rho) = 0)")
    if rho <= 0.0 or rho + eps >= 1.0:
        raise ParameterError("need rho > 0 and rho + eps < 1")
    if not 0.0 < delta < 2.0:
        raise ParameterError("delta must be in (0,2)")
    return math.ceil(-math.log(delta / 2.0) / kl(rho + eps, rho))


# ----------------------------------------------------- coverage engine

def _alias_table(weights):
    # Vose's method; O(1) categorical draws afterwards
    n = len(weights)
    total = float(sum(weights))
    prob = [0.0] * n
    alias = [0] * n
    scaled = [w * n / total for w in weights]
    small = [i for i, s in enumerate(scaled) if s < 1.0]
    large = [i for i, s in enumerate(scaled) if s >= 1.0]
    while small and large:
        s = small.pop()
        l = large.pop()
        prob[s] = scaled[s]
        alias[s] = l
        scaled[l] = scaled[l] + scaled[s] - 1.0
        (small if scaled[l] < 1.0 else large).append(l)
    for i in large + small:
        prob[i] = 1.0
    return prob, alias


def _alias_draw(prob, alias, rng):
    i = int(len(prob) * rng.random())
    return i if rng.random() < prob[i] else alias[i]


def coverage_sample(mfis, n, seed, exact=True):
    """n itemsets drawn via MFI powersets.

    An MFI m_i is picked with probability 2^|m_i| / sum 2^|m_j| (alias
    table), then a uniform subset of it by independent fair coins. Exact
    mode keeps a draw only when no earlier-indexed MFI contains it, which
    makes every distinct subset of the union equally likely; modified mode
    keeps everything, so a subset is drawn once per containing MFI.
    """
    mfis = [tuple(m) for m in mfis]
    if not mfis:
        raise ParameterError("mfis must be nonempty")
    if n < 0:
        raise ParameterError("n must be >= 0")
    for m in mfis:
        if len(m) > 62:
            raise ParameterError(f"MFI of size {len(m)} exceeds the 62-item limit")
    rng = random.Random(seed)
    prob, alias = _alias_table([2 ** len(m) for m in mfis])
    msets = [frozenset(m) for m in mfis]
    out = []
    while len(out) < n:
        i = _alias_draw(prob, alias, rng)
        u = tuple(b for b in mfis[i] if rng.random() < 0.5)
        if exact:
            us = frozenset(u)
            if any(us <= msets[l] for l in range(i)):
                continue  # owned by an earlier MFI; redraw
        out.append(u)
    return FiSample(out, "coverage-exact" if exact else "coverage-modified")


# ---------------------------------------------------- reservoir engine

def _payload(x):
    return x.itemset if isinstance(x, FiRecord) else x


def reservoir(stream, n, seed, algo="simple"):
    """Uniform without-replacement sample of an unknown-length stream.

    simple: element t (1-based) replaces slot floor(t·Random()) when that
    lands below n. vitter: skip counts drawn from the matching geometric-like
    law, distribution-equivalent but with far fewer random draws.
    """
    if n < 1:
        raise ParameterError("n must be >= 1")
    if algo not in ("simple", "vitter"):
        raise ParameterError(f"unknown reservoir algo {algo!r}")
    rng = random.Random(seed)
    it = iter(stream)
    res = []
    t = 0
    for x in it:
        t += 1
        res.append(_payload(x))
        if t == n:
            break
    if t < n:
        return FiSample(res, "reservoir", total_seen=t, short=True)

    if algo == "simple":
        for x in it:
            t += 1
            m = int(t * rng.random())
            if m < n:
                res[m] = _payload(x)
    else:
        while True:
            # skip length S: P(S >= s) = prod_{j=1..s} (t+j-n)/(t+j)
            v = rng.random()
            s = 0
            quot = (t + 1 - n) / (t + 1)
            while quot > v:
                s += 1
                quot *= (t + s + 1 - n) / (t + s + 1)
            x = None
            for _ in range(s + 1):
                x = next(it, None)
                if x is None:
                    break
                t += 1
            if x is None:
                break
            res[rng.randrange(n)] = _payload(x)
    return FiSample(res, "reservoir", total_seen=t)


class ReservoirState:
    """Incrementally fed reservoir using the simple replacement rule.

    Feeding the concatenation of several streams through one state is
    equivalent to running `reservoir` over the whole concatenation.
    """

    def __init__(self, n, rng):
        if n < 1:
            raise ParameterError("n must be >= 1")
        self.n = n
        self.rng = rng
        self.items = []
        self.seen = 0

    def offer(self, x):
        self.seen += 1
        if len(self.items) < self.n:
            self.items.append(x)
        else:
            m = int(self.seen * self.rng.random())
            if m < self.n:
                self.items[m] = x


# ------------------------------------------------ distribution helpers

def multivariate_hypergeom(counts, n, seed):
    """Draw n balls without replacement from an urn with counts[i] balls
    of color i; returns the per-color draw counts."""
    counts = [int(c) for c in counts]
    if any(c < 0 for c in counts) or n < 0:
        raise ParameterError("counts and n must be nonnegative")
    if n > sum(counts):
        raise ParameterError(f"cannot draw {n} from {sum(counts)} balls")
    rng = np.random.Generator(np.random.PCG64(seed))
    return [int(x) for x in rng.multivariate_hypergeometric(counts, n)]


def multinomial(p, n, seed):
    """n independent categorical draws with probabilities p; returns counts."""
    p = [float(x) for x in p]
    if any(x < 0 for x in p) or abs(sum(p) - 1.0) > 1e-9:
        raise ParameterError("p must be nonnegative and sum to 1")
    if n < 0:
        raise ParameterError("n must be >= 0")
    rng = np.random.Generator(np.random.PCG64(seed))
    return [int(x) for x in rng.multinomial(n, p)]


def pbec_size_bounds(c_est, eps_fi, a, b):
    """Bracket a class's true relative size from its sampled share c_est.

    a and b bound the fractions wrongly added to / missing from the mined
    superset the sample was drawn from; eps_fi is the sampling error. With
    eps_fi = 0 this is the plain miscount correction."""
    if not 0.0 <= c_est <= 1.0:
        raise ParameterError("c_est must be in [0,1]")
    if not 0.0 <= a < 1.0 or not 0.0 <= b < 1.0:
        raise ParameterError("a and b must be in [0,1)")
    if not 0.0 <= eps_fi < 1.0:
        raise ParameterError("eps_fi must be in [0,1)")
    base = c_est * (1.0 - eps_fi) * (1.0 + a - b)
    return (base - a, base + b)


# --------------------------------------------------------------- dumps

def write_sample(sample, fh, seed=None):
    """FIMI lines behind a header comment recording provenance."""
    total = "" if sample.total_seen is None else f" total_seen={sample.total_seen}"
    seedtxt = "" if seed is None else f" seed={seed}"
    fh.write(f"# source={sample.source}{seedtxt}{total}\n")
    for u in sample.itemsets:
        fh.write(" ".join(str(b) for b in u) + "\n")
