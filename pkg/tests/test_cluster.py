"""The simulated cluster: messaging, exchange, parallel mining, full runs."""

import csv
import io

import pytest

import fimkit.cluster as cluster_mod
from conftest import MFIS15, FIS15, brute_force_mfis, make_db, random_small_db
from fimkit import (ExchangeSchedule, FiRecord, ParameterError, Pbec,
                    PbecPlan, SampleParams, SimCluster, TidlistCache,
                    WorkerPanic, db_sample_size, eclat, exchange_schedule,
                    exec_eclat, metrics_csv, parallel_mfi, partition_db,
                    pbec_contains, phase3_exchange, plan_phase2,
                    reservoir_sample_size, run_manifest, run_parallel_fimi)
from fimkit.cluster import (_prefix_candidates, _quotas, phase1_coverage_seq,
                            phase4_prefix_supports)
from test_scheduler import S10

VARIANTS = ("seq", "par", "reservoir")


def fis15_records():
    return {FiRecord(u, s) for u, s in FIS15.items()}


# ------------------------------------------------------------- messaging

def test_inboxes_are_fifo_and_counted():
    cl = SimCluster(2)
    cl.send(0, 1, "A", [1])
    cl.send(0, 1, "B", [2])
    assert cl.recv(1)[1:] == ("A", [1])
    assert cl.recv(1)[1:] == ("B", [2])
    assert cl.recv(1) is None
    assert cl.msgs_sent == [2, 0] and cl.msgs_recv == [0, 2]
    assert cl.bytes_sent[0] > 0


def test_payloads_travel_by_value():
    cl = SimCluster(2)
    box = [1, 2]
    cl.send(0, 1, "X", box)
    box.append(3)
    assert cl.recv(1)[2] == [1, 2]


def test_quiescence_tracks_unread_messages():
    cl = SimCluster(2)
    assert cl.quiescent()
    cl.send(0, 1, "X")
    assert not cl.quiescent()
    with pytest.raises(RuntimeError):
        cl.assert_quiescent()
    cl.recv(1)
    cl.assert_quiescent()


def test_cluster_needs_a_worker():
    with pytest.raises(ParameterError):
        SimCluster(0)


# ------------------------------------------------------ exchange schedule

@pytest.mark.parametrize("P", range(2, 17))
def test_schedule_meets_every_pair_once(P):
    sched = exchange_schedule(P)
    want_rounds = P - 1 if P % 2 == 0 else P
    assert len(sched.rounds) == want_rounds
    seen = set()
    for rnd in sched.rounds:
        busy = set()
        for a, b in rnd:
            assert 0 <= a < b < P
            busy |= {a, b}
        assert len(busy) == 2 * len(rnd)
        seen.update(rnd)
    assert len(seen) == P * (P - 1) // 2


def test_schedule_first_round_for_fourteen():
    sched = exchange_schedule(14)
    assert sched.rounds[0] == ((0, 13), (1, 12), (2, 11), (3, 10),
                               (4, 9), (5, 8), (6, 7))


def test_schedule_smallest_cases():
    assert exchange_schedule(1).rounds == ()
    assert exchange_schedule(2).rounds == (((0, 1),),)


def test_schedule_type_rejects_bad_rounds():
    with pytest.raises(ValueError):
        ExchangeSchedule((((1, 0),),))
    with pytest.raises(ValueError):
        ExchangeSchedule((((0, 1),), ((0, 1),)))
    with pytest.raises(ValueError):
        ExchangeSchedule((((0, 1), (1, 2)),))


# ------------------------------------------------------------- exchange

def test_exchange_builds_the_covering_partitions(db15):
    P = 3
    parts = partition_db(db15, P)
    plan = plan_phase2(S10, db15, alpha=1.2, P=P)
    cl = SimCluster(P)
    dprimes = phase3_exchange(cl, plan, parts)
    for q in range(P):
        want = {t.tid for t in db15
                if any(set(plan.pbecs[k].prefix) <= set(t.items)
                       for k in plan.assignment[q])}
        assert {t.tid for t in dprimes[q]} == want
        for t in dprimes[q]:
            assert t.items == db15.transactions[t.tid - 1].items
    # every pairing moved one batch in each direction
    assert sum(cl.msgs_sent) == 2 * (P * (P - 1) // 2)
    cl.assert_quiescent()


def test_exchange_single_worker_keeps_own_matches(db15):
    plan = plan_phase2(S10, db15, alpha=1.2, P=1)
    cl = SimCluster(1)
    (dprime,) = phase3_exchange(cl, plan, [db15])
    want = {t.tid for t in db15
            if any(set(p.prefix) <= set(t.items) for p in plan.pbecs)}
    assert {t.tid for t in dprime} == want


# --------------------------------------------------------- parallel MFI

def test_parallel_mfi_single_worker_is_exact(db15):
    assert parallel_mfi(db15, 5, P=1) == MFIS15


def test_parallel_mfi_static_three_workers(db15):
    m = parallel_mfi(db15, 5, P=3, dynamic_lb=False)
    assert MFIS15 <= m
    assert (5, 6) in m
    for u in m:
        assert db15.support(u) >= 5


@pytest.mark.parametrize("dynamic_lb", [False, True])
def test_parallel_mfi_maximal_filter_recovers_truth(dynamic_lb):
    for seed in range(8):
        db = random_small_db(seed)
        truth = brute_force_mfis(db, 2)
        m = parallel_mfi(db, 2, P=3, dynamic_lb=dynamic_lb)
        maximal = {u for u in m
                   if not any(set(u) < set(v) for v in m)}
        assert maximal == truth
        longest = max((len(u) for u in truth), default=0)
        assert len(m) <= min(3, max(longest, 1)) * max(len(truth), 1)


def test_parallel_mfi_deterministic(db15):
    runs = [parallel_mfi(db15, 5, P=4, dynamic_lb=True, seed=9)
            for _ in range(2)]
    assert runs[0] == runs[1]


# --------------------------------------------------------- tidlist cache

def test_cache_reuses_common_prefix_depth(db6):
    cache = TidlistCache(db6)
    assert cache.advance((1, 2)) == frozenset({1, 4, 6})
    assert cache.advance((1, 3)) == frozenset({1, 3, 5, 6})
    assert cache.reuses == 1
    assert cache.ext_cover(4) == frozenset({1, 3, 5, 6})


def test_cache_no_reuse_across_different_roots(db6):
    cache = TidlistCache(db6)
    cache.advance((1,))
    cache.advance((2,))
    assert cache.reuses == 0


def test_cache_empty_prefix_covers_everything(db6):
    cache = TidlistCache(db6)
    assert cache.advance(()) == frozenset(range(1, 7))


# ------------------------------------------------------------ exec_eclat

def test_exec_eclat_mines_strict_members_only(db15):
    out, cache = exec_eclat([Pbec((1, 3), (4,), 0), Pbec((1, 4), (), 0)],
                            db15, 5)
    assert out == {FiRecord((1, 3, 4), 5)}
    assert cache.reuses == 1


def test_exec_eclat_matches_membership_filter(db15):
    for pbec in [Pbec((3,), (4, 5, 6), 0), Pbec((2,), (3, 4, 5), 0),
                 Pbec((4,), (5, 6), 0)]:
        out, _ = exec_eclat([pbec], db15, 5)
        want = {FiRecord(u, s) for u, s in FIS15.items()
                if pbec_contains(pbec, u)}
        assert out == want


def test_exec_eclat_skips_infrequent_prefix(db15):
    out, _ = exec_eclat([Pbec((1, 2), (3, 4), 0)], db15, 5)
    assert out == set()  # support({1,2}) = 3 < 5


# ------------------------------------------------------ prefix support pass

def test_prefix_candidates_exclude_strictly_claimed_subsets():
    plan = PbecPlan((Pbec((2,), (3, 4), 0), Pbec((1, 2, 4), (), 0)),
                    ((0,), (1,)), 1.0, 2, 0)
    # (2,4) sits inside the class [2|{3,4}], so the prefix pass skips it
    assert _prefix_candidates(plan) == [(1,), (1, 2), (1, 2, 4), (1, 4),
                                        (2,), (4,)]


def test_prefix_pass_sums_partition_supports(db15):
    P = 3
    parts = partition_db(db15, P)
    plan = plan_phase2(S10, db15, alpha=1.2, P=P)
    cl = SimCluster(P)
    out = phase4_prefix_supports(cl, plan, parts, 5)
    assert FiRecord((3,), 10) in out
    for rec in out:
        assert rec.support == db15.support(rec.itemset)
    cl.assert_quiescent()


def test_prefix_pass_on_empty_plan(db15):
    plan = PbecPlan((), ((), (), ()), 1.0, 3, 0)
    cl = SimCluster(3)
    assert phase4_prefix_supports(cl, plan, partition_db(db15, 3), 5) == set()


def test_quota_split_is_proportional_and_exact():
    q = _quotas(19, [5, 3, 1])
    assert sum(q) == 19 and q[0] > q[1] > q[2]
    assert _quotas(10, [0, 0]) == [0, 0]
    assert _quotas(10, [2, 2]) == [5, 5]


# -------------------------------------------------------------- full runs

@pytest.mark.parametrize("variant", VARIANTS)
def test_run_recovers_the_exact_frequent_sets(db15, variant):
    parts = partition_db(db15, 3)
    res = run_parallel_fimi(parts, variant, 5, seed=1,
                            n_db_sample=60, n_fi_sample=50)
    assert res.fis == fis15_records()
    # worker outputs are pairwise disjoint thanks to the prefix pass
    assert sum(len(w) for w in res.worker_fis) == len(res.fis)
    assert res.metrics.replication >= 1.0
    assert len(res.metrics.work) == 3


def test_run_single_worker_equals_sequential(db15):
    res = run_parallel_fimi([db15], "reservoir", 5, seed=0,
                            n_db_sample=30, n_fi_sample=20)
    assert res.fis == set(eclat(db15, 5))


def test_run_is_deterministic(db15):
    parts = partition_db(db15, 4)
    a, b = (run_parallel_fimi(parts, "reservoir", 5, seed=7,
                              n_db_sample=40, n_fi_sample=30)
            for _ in range(2))
    assert a.fis == b.fis
    assert a.plan == b.plan
    assert a.metrics.msgs_sent == b.metrics.msgs_sent
    assert a.metrics.bytes_sent == b.metrics.bytes_sent
    assert a.metrics.work == b.metrics.work


def test_run_with_threads_matches_round_based(db15):
    parts = partition_db(db15, 3)
    plain = run_parallel_fimi(parts, "par", 5, seed=3,
                              n_db_sample=40, n_fi_sample=30)
    threaded = run_parallel_fimi(parts, "par", 5, seed=3,
                                 n_db_sample=40, n_fi_sample=30, threads=True)
    assert plain.fis == threaded.fis


def test_run_random_assignment_stays_exact(db15):
    parts = partition_db(db15, 3)
    res = run_parallel_fimi(parts, "reservoir", 5, seed=2,
                            n_db_sample=40, n_fi_sample=30, assign="random")
    assert res.fis == fis15_records()


@pytest.mark.parametrize("variant", VARIANTS)
def test_run_exact_on_random_instances(variant):
    for seed in (0, 5, 9):
        db = random_small_db(seed)
        parts = partition_db(db, 3)
        res = run_parallel_fimi(parts, variant, 3, seed=seed,
                                n_db_sample=30, n_fi_sample=25)
        assert res.fis == set(eclat(db, 3))


def test_run_parameter_errors(db15):
    with pytest.raises(ParameterError):
        run_parallel_fimi([], "seq", 5)
    with pytest.raises(ParameterError):
        run_parallel_fimi([db15], "turbo", 5)
    with pytest.raises(ParameterError):
        run_parallel_fimi([db15], "seq", 0)
    with pytest.raises(ParameterError):
        run_parallel_fimi([db15], "seq", 5, assign="hash")
    with pytest.raises(ParameterError):
        run_parallel_fimi([db15, db15], "seq", 5)  # shared tids


def test_run_derives_sample_sizes_from_bounds(db15):
    params = SampleParams(0.4, 0.5, 0.3, 0.5, 0.05)
    res = run_parallel_fimi(partition_db(db15, 2), "reservoir", 5,
                            seed=0, params=params)
    assert res.metrics.n_db_sample == db_sample_size(0.4, 0.5)
    assert res.metrics.n_fi_sample == reservoir_sample_size(0.3, 0.5, 0.05)
    assert res.fis == fis15_records()


def test_worker_failure_carries_the_id(db15, monkeypatch):
    def boom(*a, **k):
        raise ValueError("mining fell over")
    monkeypatch.setattr(cluster_mod, "exec_eclat", boom)
    with pytest.raises(WorkerPanic) as err:
        run_parallel_fimi(partition_db(db15, 3), "seq", 5,
                          n_db_sample=30, n_fi_sample=20)
    assert err.value.worker == 0
    assert "worker 0" in str(err.value)


def test_phase1_floor_draws_one_row_per_worker(db15):
    cl = SimCluster(3)
    parts = partition_db(db15, 3)
    db_sample, _ = phase1_coverage_seq(cl, parts, 5, n_db_sample=1,
                                       n_fi_sample=10)
    assert len(db_sample) == 3


def test_phase1_seq_sample_lives_in_mfi_powersets(db15):
    cl = SimCluster(3)
    parts = partition_db(db15, 3)
    _, fi = phase1_coverage_seq(cl, parts, 5, n_db_sample=10,
                                n_fi_sample=40, db_sample=db15)
    assert fi.itemsets
    for u in fi.itemsets:
        assert any(set(u) <= set(m) for m in MFIS15)


# -------------------------------------------------------------- reports

def test_run_manifest_line(db15):
    res = run_parallel_fimi(partition_db(db15, 3), "reservoir", 5, seed=4,
                            n_db_sample=40, n_fi_sample=30)
    line = run_manifest(res)
    assert line.startswith("variant=reservoir P=3 seed=4 minsup=5")
    assert "replication=" in line and "wall=" in line


def test_metrics_csv_shape(db15):
    res = run_parallel_fimi(partition_db(db15, 3), "seq", 5, seed=4,
                            n_db_sample=40, n_fi_sample=30)
    rows = list(csv.reader(io.StringIO(metrics_csv(res))))
    assert rows[0] == ["worker", "msgs_sent", "bytes_sent", "work",
                       "cache_reuses", "replication", "wall_time"]
    assert len(rows) == 1 + 3 + 1
    assert rows[-1][0] == "all"
    assert int(rows[-1][1]) == sum(res.metrics.msgs_sent)
    assert float(rows[-1][5]) == pytest.approx(res.metrics.replication)
