import pytest

from octamap.verify import CHECKS, GROUPS, report, run_checks


@pytest.fixture(scope="module")
def results():
    return run_checks(seed=1, trials=10)


def test_every_check_runs(results):
    assert [r.name for r in results] == [c.name for c in CHECKS]


def test_suite_passes_apart_from_known_discrepancies(results):
    rep = report(results)
    assert rep["passed"]
    for r in results:
        assert r.passed != r.known_discrepancy, r.name


def test_known_discrepancies_are_the_printed_forms():
    assert {c.name for c in CHECKS if c.known_discrepancy} == {"V1 = V4 as printed", "W4 as printed"}


def test_filter_by_group_and_name():
    assert {r.group for r in run_checks(["mu"], trials=3)} == {"mu"}
    assert [r.name for r in run_checks(["Poisson bracket"], trials=3)] == ["Poisson bracket"]
    with pytest.raises(ValueError):
        run_checks(["nope"])
    assert "pullback" in GROUPS


def test_mutation_is_detected():
    res = run_checks(["pullback", "poisson"], trials=5, mutate=True)
    assert not report(res)["passed"]
    assert {r.name for r in res if not r.passed} == {"Delta pullback", "T3 pullback", "Poisson bracket"}


def test_same_seed_same_report():
    a = report(run_checks(["invariance", "y"], seed=3, trials=5))
    b = report(run_checks(["invariance", "y"], seed=3, trials=5))
    assert a == b
