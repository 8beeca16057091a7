import math

import pytest

from qedmagic.engine import Process
from qedmagic.tables import (
    ERRATA,
    TABLE_KEYS,
    TABLES,
    approx,
    cross_relation,
    exact,
    half_pi_pm,
    reproduce,
)


@pytest.fixture(scope="module")
def results():
    return {k: reproduce(k) for k in TABLE_KEYS}


def test_targets():
    t = approx("0.44")
    assert t.accepts(0.4449) and t.accepts(0.436) and not t.accepts(0.452)
    # a truncated decimal also covers everything that truncates to it
    assert approx("1.49").accepts(1.4977)
    assert exact(math.pi / 4, "pi/4").accepts(math.pi / 4 + 5e-9)
    assert not exact(math.pi / 4, "pi/4").accepts(math.pi / 4 + 5e-8)
    lo, hi = half_pi_pm("0.42")
    assert lo.value == pytest.approx(math.pi / 2 - 0.42)
    assert hi.value == pytest.approx(math.pi / 2 + 0.42)


def test_every_row_is_unique_and_complete():
    for key, spec in TABLES.items():
        ids = sorted(i for row in spec.rows for i in row.members)
        assert ids == list(range(1, 61)), key


@pytest.mark.parametrize("key", TABLE_KEYS)
def test_table_reproduced(results, key):
    res = results[key]
    assert res.ok, "\n".join(res.lines())
    assert not res.extra


def test_erratum_is_checked(results):
    assert ("V", "F8") in ERRATA
    lines = "\n".join(results["V"].lines())
    assert "erratum" in lines
    row = next(r for r in results["V"].rows if r.row.label == "F8")
    assert all(c.status == "PASS" for c in row.checks)


def test_cross_labels_are_flagged_not_failed(results):
    checks = [c for r in results["VI"].rows for c in r.checks if c.name == "same as table V row"]
    flagged = {c.expected.split()[0] for c in checks if c.status == "FLAG"}
    assert flagged == {"F12", "F~12", "F13", "F~13"}
    assert all(c.actual == "reflected" for c in checks if c.status == "FLAG")
    assert results["VI"].ok


def test_cross_relation():
    assert cross_relation(Process.BHABHA, 7, Process.MOLLER, 5) == "identical"
    assert cross_relation(Process.MOLLER, 13, Process.EMU, 1) == "different"
