import pytest

from wadgelab import automata as am
from wadgelab.automata import LassoWord
from wadgelab.catalog import (
    E,
    catalog,
    delta_ji,
    delta_jr,
    entries,
    function_catalog,
    level_cap,
    pi_complete,
    sigma_complete,
)
from wadgelab.errors import LevelOutOfRange
from wadgelab.wadge import leq_w


def test_sigma_counts_ones():
    s3 = sigma_complete(3)
    for ones, member in [(0, False), (1, True), (2, False), (3, True), (4, True)]:
        assert am.run_lasso(s3, LassoWord([1] * ones, [0])) is member


def test_level_zero_and_one():
    assert am.is_empty(sigma_complete(0))
    assert am.equivalent(pi_complete(0), am.full(2))
    assert am.is_closed(pi_complete(1))
    assert am.equivalent(am.residual(delta_jr(1), [0]), am.empty(2))
    assert am.equivalent(am.residual(delta_jr(1), [1]), am.full(2))


def test_e_is_delta_ji():
    assert E(2) == delta_ji(2)
    assert am.run_lasso(delta_ji(2), LassoWord([0, 0, 1], [0]))
    assert not am.run_lasso(delta_ji(2), LassoWord([1, 0, 1], [0]))


def test_ordering():
    for n in range(1, 4):
        assert leq_w(sigma_complete(n), sigma_complete(n + 1)).holds
        assert not leq_w(sigma_complete(n + 1), sigma_complete(n)).holds
        assert not leq_w(sigma_complete(n), pi_complete(n)).holds
        assert not leq_w(pi_complete(n), sigma_complete(n)).holds


def test_delta_below_both_sides():
    for n in range(1, 5):
        assert leq_w(delta_jr(n), sigma_complete(n)).holds
        assert leq_w(delta_jr(n), pi_complete(n)).holds


def test_cap(monkeypatch):
    assert level_cap() == 5
    with pytest.raises(LevelOutOfRange):
        catalog("sigma_complete", 6)
    with pytest.raises(LevelOutOfRange):
        catalog("delta_jr", 0)
    monkeypatch.setenv("WADGE_LAB_CAP", "7")
    assert catalog("sigma_complete", 7).level == 7
    monkeypatch.setenv("WADGE_LAB_CAP", "2")
    with pytest.raises(LevelOutOfRange):
        sigma_complete(3)


def test_entries_and_serialisation():
    es = entries(2)
    assert [e.label for e in es[:4]] == ["sigma_complete(1)", "pi_complete(1)", "delta_jr(1)", "delta_ji(1)"]
    for e in es:
        assert am.from_json(am.to_json(e.automaton)) == e.automaton


def test_unknown_family():
    with pytest.raises(KeyError):
        catalog("gamma", 1)


def test_function_catalog_size():
    fs = function_catalog()
    assert len(fs) >= 20
    assert {"const0", "cont2", "L4", "R4", "O4", "T4"} <= set(fs)
