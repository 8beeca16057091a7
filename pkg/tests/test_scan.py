import math

import numpy as np
import pytest

from qedmagic.engine import LAMBDA_DEFAULT, Process, Regime, valid_regimes
from qedmagic.limits import closed_form_xi2
from qedmagic.magic import LOG_16_7
from qedmagic.qlinalg import ContractError
from qedmagic.scan import (
    IDS,
    find_maximum,
    g8_max_curve,
    golden_section_max,
    group_rows,
    lambda_maximum,
    magic_distribution,
    richardson,
    scan_all,
    theta_grid,
    theta_maximum,
    xi2_table,
)
from qedmagic.scan import classify

PAIRS = [(p, r) for p in Process for r in valid_regimes(p)]


def test_theta_grid():
    grid = theta_grid()
    assert len(grid) == 179
    assert grid[0] == pytest.approx(math.pi / 180)
    assert grid[-1] == pytest.approx(179 * math.pi / 180)
    with pytest.raises(ContractError):
        theta_grid(1)


def test_golden_section():
    assert golden_section_max(lambda x: -(x - 0.3) ** 2, 0, 1) == pytest.approx(0.3, abs=1e-8)


def test_find_maximum_degenerate_pair():
    m = find_maximum(lambda x: math.sin(2 * x) ** 2, 0, math.pi)
    assert m.value == pytest.approx(1.0)
    assert m.argmax == pytest.approx((math.pi / 4, 3 * math.pi / 4), abs=1e-8)
    assert not m.flat


def test_find_maximum_flat_and_nan():
    flat = find_maximum(lambda x: 0.25, 0, 1)
    assert flat.flat and flat.argmax == () and flat.value == 0.25
    assert math.isnan(find_maximum(lambda x: math.nan, 0, 1).value)
    # an undefined point at the peak is skipped, the peak is still found next to it
    m = find_maximum(lambda x: math.nan if x == 0.5 else -abs(x - 0.5), 0, 1)
    assert m.argmax[0] == pytest.approx(0.5, abs=1e-6)


def test_find_maximum_at_the_boundary():
    m = find_maximum(lambda x: x, 0, 2)
    assert m.argmax == (2.0,)


def test_richardson_removes_leading_orders():
    h = 0.1
    vals = [3 + 2 * (h / 2**k) + 5 * (h / 2**k) ** 2 for k in range(3)]
    assert richardson(vals, 2.0) == pytest.approx(3.0, abs=1e-12)


@pytest.mark.parametrize("process, regime, state, value, argmax", [
    ("moller", "low", 3, math.log(4 / 3), (math.acos(math.sqrt(2) - 1), math.pi - math.acos(math.sqrt(2) - 1))),
    ("moller", "low", 13, math.log(9 / 5), (math.atan(2 * math.sqrt(2)), math.pi - math.atan(2 * math.sqrt(2)))),
    ("ee-mumu", "high", 1, math.log(9 / 5), (math.pi / 4, 3 * math.pi / 4)),
    ("ee-mumu", "high", 3, math.log(4 / 3), tuple(k * math.pi / 8 for k in (1, 3, 5, 7))),
])
def test_known_angular_maxima(process, regime, state, value, argmax):
    m = theta_maximum(process, regime, state, LAMBDA_DEFAULT)
    assert m.value == pytest.approx(value, abs=1e-10)
    assert m.argmax == pytest.approx(argmax, abs=1e-8)


def test_threshold_lambda_maxima():
    g1, g2 = lambda_maximum(7), lambda_maximum(13)
    assert g1.value == pytest.approx(math.log(4 / 3), abs=1e-12)
    assert g1.argmax == pytest.approx((math.sqrt(2) - 1,), abs=1e-8)
    assert g2.value == pytest.approx(math.log(9 / 5), abs=1e-12)
    assert g2.argmax == pytest.approx((1.0,), abs=1e-8)


def test_g8_max_curve_follows_closed_form():
    lams = [0.0, 0.005, 0.1, 0.5, 1.0]
    for lam, value in g8_max_curve(lams):
        assert value == pytest.approx(-math.log(closed_form_xi2("G8max", lam=lam)), abs=1e-9)
    # the curve reaches the two-qubit ceiling only as lambda -> 0
    assert g8_max_curve([0.0])[0][1] == pytest.approx(LOG_16_7, abs=1e-12)


def test_distribution_statuses():
    assert magic_distribution("moller", "low", 1, LAMBDA_DEFAULT).status == "zero_magic"
    assert magic_distribution("moller", "low", 13, LAMBDA_DEFAULT).status == "normal"
    d = magic_distribution("moller", "low", 13, LAMBDA_DEFAULT, thetas=theta_grid(4))
    assert [t for t, _, _ in d.samples] == pytest.approx(theta_grid(4).tolist())
    with pytest.raises(ContractError):
        xi2_table("moller", "low", LAMBDA_DEFAULT, source="oracle")


def test_engine_source_tracks_limit_source():
    grid = theta_grid(12)
    a = xi2_table("bhabha", "low", LAMBDA_DEFAULT, grid, "limit")
    b = xi2_table("bhabha", "low", LAMBDA_DEFAULT, grid, "engine")
    both = np.isfinite(a) & np.isfinite(b)
    assert both.sum() > 0.9 * a.size
    assert np.max(np.abs(np.log(a[both]) - np.log(b[both]))) < 1e-4


def test_group_rows_skips_isolated_gaps():
    rows = np.array([[0.5, np.nan, 0.7], [0.5, 0.6, 0.7], [np.nan] * 3, [0.9, 0.6, 0.7]])
    groups = [g for g, _ in group_rows(rows, ids=(1, 2, 3, 4))]
    assert groups == [[1, 2], [3], [4]]


@pytest.mark.parametrize("process, regime", PAIRS, ids=lambda v: getattr(v, "value", v))
def test_classes_partition_the_catalog(process, regime):
    report = classify(process, regime, with_maxima=False)
    flat = sorted(i for members in report.members() for i in members)
    assert flat == list(IDS)
    for c in report.classes:
        assert c.representative == c.members[0]
    assert report.class_of(1) is report.classes[0]
    with pytest.raises(KeyError):
        report.class_of(61)


def test_classification_is_deterministic():
    a = classify("emu", "high").to_dict()
    b = classify("emu", "high").to_dict()
    assert a == b


def test_threaded_scan_matches_serial():
    grid = theta_grid(18)
    serial = scan_all("moller", "high", LAMBDA_DEFAULT, thetas=grid)
    threaded = scan_all("moller", "high", LAMBDA_DEFAULT, thetas=grid, threads=4)
    for s, t in zip(serial, threaded):
        assert s.initial_id == t.initial_id
        assert np.array_equal(s.m2, t.m2, equal_nan=True)


def test_all_values_inside_bounds():
    for process, regime in PAIRS:
        if regime is Regime.THRESHOLD:
            continue
        m = -np.log(xi2_table(process, regime, LAMBDA_DEFAULT, theta_grid(30)))
        finite = m[np.isfinite(m)]
        assert finite.min() >= -1e-12
        assert finite.max() <= LOG_16_7 + 1e-12
