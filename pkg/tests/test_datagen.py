"""Generator distribution checks and FIMI/config I/O round trips."""

import math
import statistics

import pytest

from fimkit import (FimiFormatError, GenParams, ParameterError, generate_db,
                    partition_db, read_config, read_fimi, write_fimi)
from fimkit.datagen import generate_patterns, _poisson

from conftest import ROWS15, make_db

import random


def test_params_validation():
    with pytest.raises(ParameterError):
        GenParams(n_items=0, n_patterns=1, avg_pattern_len=2,
                  avg_txn_len=5, n_txns=10)
    with pytest.raises(ParameterError):
        GenParams(n_items=5, n_patterns=1, avg_pattern_len=0,
                  avg_txn_len=5, n_txns=10)
    with pytest.raises(ParameterError):
        GenParams(n_items=5, n_patterns=1, avg_pattern_len=2,
                  avg_txn_len=5, n_txns=10, corruption_mean=-0.1)


def test_poisson_mean():
    rng = random.Random(1)
    draws = [_poisson(rng, 6.0) for _ in range(20000)]
    assert abs(statistics.mean(draws) - 6.0) < 0.1


def test_generator_is_deterministic():
    p = GenParams(n_items=40, n_patterns=8, avg_pattern_len=4,
                  avg_txn_len=9, n_txns=300, seed=7)
    a = generate_db(p)
    b = generate_db(p)
    assert a == b
    c = generate_db(GenParams(n_items=40, n_patterns=8, avg_pattern_len=4,
                              avg_txn_len=9, n_txns=300, seed=8))
    assert a != c


def test_db_shape_and_no_empty_transactions():
    p = GenParams(n_items=30, n_patterns=5, avg_pattern_len=3,
                  avg_txn_len=7, n_txns=500, seed=3)
    db = generate_db(p)
    assert len(db) == 500
    assert [t.tid for t in db] == list(range(1, 501))
    for t in db:
        assert len(t.items) >= 1
        assert all(1 <= b <= 30 for b in t.items)


def test_pattern_weights_normalized_and_lengths_positive():
    p = GenParams(n_items=50, n_patterns=20, avg_pattern_len=4,
                  avg_txn_len=10, n_txns=1, seed=0)
    pats = generate_patterns(p)
    assert len(pats) == 20
    assert abs(sum(w for _, w, _ in pats) - 1.0) < 1e-9
    for items, w, c in pats:
        assert len(items) >= 1 and w > 0 and 0.0 <= c <= 1.0


def test_zero_corruption_single_pattern_means_pattern_everywhere():
    # with one pattern and no corruption every transaction contains it
    p = GenParams(n_items=20, n_patterns=1, avg_pattern_len=5,
                  avg_txn_len=5, n_txns=200, corruption_mean=0.0, seed=2)
    pattern = generate_patterns(p)[0][0]
    db = generate_db(p)
    for t in db:
        assert set(pattern) <= set(t.items)


def test_corruption_lowers_intact_pattern_support():
    # transactions are refilled to the target length either way, so the
    # corruption level shows up as fewer intact pattern occurrences
    def pattern_support(cm, seed=4):
        p = GenParams(n_items=30, n_patterns=1, avg_pattern_len=5,
                      avg_txn_len=8, n_txns=400, corruption_mean=cm, seed=seed)
        pattern = generate_patterns(p)[0][0]
        return generate_db(p).support(pattern)
    assert pattern_support(0.0) == 400
    assert pattern_support(0.45) < 400


def test_avg_txn_len_tracks_parameter():
    p = GenParams(n_items=100, n_patterns=15, avg_pattern_len=4,
                  avg_txn_len=10, n_txns=2000, corruption_mean=0.25, seed=5)
    db = generate_db(p)
    m = statistics.mean(len(t.items) for t in db)
    assert 6.0 < m < 12.0


def test_fimi_round_trip(tmp_path, db15):
    path = tmp_path / "db.fimi"
    write_fimi(db15, path)
    text = path.read_text()
    assert text.splitlines()[0] == "1 2 3 4"
    assert text.endswith("\n")
    back = read_fimi(path)
    assert back == db15


def test_read_fimi_dedupes_and_sorts(tmp_path):
    path = tmp_path / "raw.fimi"
    path.write_text("3 1 3 2\n\n7\n")
    db = read_fimi(path)
    assert db.transactions[0].items == (1, 2, 3)
    assert db.transactions[1].items == ()     # blank line, still a transaction
    assert db.transactions[2].items == (7,)
    assert len(db) == 3


def test_read_fimi_reports_line_and_token(tmp_path):
    path = tmp_path / "bad.fimi"
    path.write_text("1 2\n3 x4\n")
    with pytest.raises(FimiFormatError) as e:
        read_fimi(path)
    assert e.value.lineno == 2
    assert "x4" in str(e.value)
    path.write_text("1 -2\n")
    with pytest.raises(FimiFormatError):
        read_fimi(path)


def test_partition_db_contiguous_cover(db15):
    for P in (1, 2, 3, 4, 7, 15):
        parts = partition_db(db15, P)
        assert len(parts) == P
        sizes = [len(p) for p in parts]
        assert sum(sizes) == 15
        assert max(sizes) - min(sizes) <= 1
        tids = [t.tid for p in parts for t in p]
        assert tids == list(range(1, 16))


def test_partition_db_more_parts_than_transactions():
    db = make_db([[1], [2]])
    parts = partition_db(db, 5)
    assert [len(p) for p in parts] == [1, 1, 0, 0, 0]
    with pytest.raises(ParameterError):
        partition_db(db, 0)


def test_read_config_casts_and_comments(tmp_path):
    path = tmp_path / "gen.cfg"
    path.write_text(
        "n_items = 100   # universe size\n"
        "\n"
        "avg_txn_len=7.5\n"
        "label=dense # trailing\n")
    cfg = read_config(path)
    assert cfg == {"n_items": 100, "avg_txn_len": 7.5, "label": "dense"}


def test_read_config_rejects_bare_lines(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("just words\n")
    with pytest.raises(ParameterError):
        read_config(path)
