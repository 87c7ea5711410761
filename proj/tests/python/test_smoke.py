import pytest

import twosource as ts


def test_schedule_cut_points():
    s = ts.schedule("1", 2, 4)
    assert s["t"] == ["0", "2", "4", "12", "36"]
    assert s["m"] == ["1", "4", "9", "16"]
    assert ts.schedule("1", 2, 4, toy_max_n=4)["n"] == ["2", "2", "4", "4"]


def test_schedule_rejects_tau_out_of_range():
    with pytest.raises(ValueError):
        ts.schedule("3/2", 2, 4)


def test_sources_and_estimates():
    x = ts.seeded_source(7, 4096)
    assert x == ts.seeded_source(7, 4096)
    assert set(x) <= {"0", "1"}
    assert ts.zero_dilute("101", 2) == "100010"
    raw, corrected = ts.khat("0" * 4096)
    assert corrected < 410 and raw - corrected == 64
    [(length, _, ratio)] = ts.rate_profile(x, [4096])
    assert length == 4096 and ratio >= 0.8
    assert ts.dependency(x[:2048], x[:2048], 2048, 2048) > ts.dependency_threshold(2048, 2048)


def test_regularity():
    xor = "regfn n=1 m=1\n0\n1\n1\n0\n"
    assert ts.check_weak(xor, "1/2", "2")["verdict"] == "pass"
    found = ts.find_regular(4, 2, "1/2", "7/2", seed=0)
    assert found["report"]["mode"] == "exact"
    assert found["report"]["verdict"] == "pass"
    with pytest.raises(ts.InfeasibleError):
        ts.find_regular(4, 2, "1/2", "2", seed=0, budget=5)
    holds, lhs, rhs = ts.chernoff_feasible(10, 4, "1/2")
    assert not holds and lhs == pytest.approx(18.56, rel=1e-3) and rhs == pytest.approx(285.8, rel=1e-3)


def test_extract():
    assert ts.required_prefix("1", 2, 14) == (3, "12")
    x, y = ts.seeded_source(1, 64), ts.seeded_source(2, 64)
    r = ts.extract("1", 2, x, y, 14)
    assert len(r["z"]) == 14
    assert r["trace"]["consumed_x"] == 12
    assert r == ts.extract("1", 2, x, y, 14)
    with pytest.raises(IndexError):
        ts.extract("1", 2, x[:11], y, 14)
