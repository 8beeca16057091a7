import csv
import math

import pytest

from qedmagic.figures import FIGURES, PANELS, emit
from qedmagic.limits import closed_form_xi2


def _read(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], [[float(x) for x in r] for r in rows[1:]]


def test_angular_panel(tmp_path):
    paths = emit("3", tmp_path, n_theta=36)
    assert [p.name for p in paths] == ["fig3_F2.csv", "fig3_F3.csv"]
    header, rows = _read(paths[0])
    assert header == ["theta_rad", "xi2", "m2_nats"]
    assert len(rows) == 35
    for theta, x, m in rows:
        # files carry 12 significant digits
        assert x == pytest.approx(closed_form_xi2("F2", theta), rel=1e-11)
        assert m == pytest.approx(-math.log(x), rel=1e-10, abs=1e-11)


def test_lambda_panels(tmp_path):
    g1, g2 = emit("2", tmp_path, n_lambda=11)
    header, rows = _read(g1)
    assert header == ["lambda", "m2_nats"]
    assert rows[0] == [0.0, pytest.approx(0.0, abs=1e-12)]
    (g8,) = emit("5", tmp_path, n_lambda=6)
    header, rows = _read(g8)
    assert header == ["lambda", "m2_max_nats", "m2_max_closed_form_nats"]
    for _, m, closed in rows:
        assert m == pytest.approx(closed, abs=1e-9)


def test_all_figures_are_known(tmp_path):
    assert set(PANELS) | {"2", "5"} == set(FIGURES)
    with pytest.raises(ValueError):
        emit("9", tmp_path)


def test_emit_is_deterministic(tmp_path):
    a = emit("6", tmp_path / "a", n_theta=20)
    b = emit("6", tmp_path / "b", n_theta=20)
    assert [p.read_bytes() for p in a] == [p.read_bytes() for p in b]
