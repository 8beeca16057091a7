"""CSV data behind the magic-distribution figures (no rendering).

One CSV per panel. Angular panels sample the limit form on the theta grid;
lambda panels sample [0, 1] uniformly.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .engine import LAMBDA_DEFAULT, Process, Regime
from .limits import closed_form_xi2
from .scan import g8_max_curve, m2_of_lambda, magic_distribution, theta_grid

FIGURES = ("2", "3", "4", "5", "6", "7", "8")


@dataclass(frozen=True)
class Panel:
    figure: str
    label: str
    process: Process | None
    regime: Regime | None
    initial_id: int | None


def _panels(figure, process, regime, pairs):
    return [Panel(figure, label, process, regime, i) for label, i in pairs]


PANELS = {
    "3": _panels("3", Process.MOLLER, Regime.LOW, [("F2", 3), ("F3", 13)]),
    "4": _panels("4", Process.MUMU_TO_EE, Regime.LOW, [
        ("G3", 1), ("G4", 3), ("G5", 5), ("G6", 7), ("G7", 11), ("G8", 13), ("G9", 29), ("G10", 46)]),
    "6": _panels("6", Process.EE_TO_MUMU, Regime.HIGH, [("F4", 1), ("F5", 3)]),
    "7": _panels("7", Process.MOLLER, Regime.HIGH, [
        ("F6", 1), ("F7", 3), ("F8", 5), ("F9", 7), ("F10", 9), ("F11", 13), ("F12", 29), ("F13", 45)]),
    "8": _panels("8", Process.EMU, Regime.HIGH, [
        ("F14", 5), ("F15", 7), ("F16", 9), ("F17", 11), ("F18", 13), ("F19", 29), ("F20", 30),
        ("F21", 45), ("F22", 48)]),
}


def _write(path: Path, header, rows):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([f"{v:.12g}" if isinstance(v, float) else v for v in r])


def emit(which: str, out_dir, lam: float = LAMBDA_DEFAULT, n_theta: int = 180, n_lambda: int = 101):
    """Write the CSV panels of one figure; returns the written paths."""
    if which not in FIGURES:
        raise ValueError(f"figure must be one of {', '.join(FIGURES)}, got {which!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lams = np.linspace(0.0, 1.0, n_lambda)
    written = []

    if which == "2":
        for label, sid in (("G1", 7), ("G2", 13)):
            f = m2_of_lambda(sid)
            p = out / f"fig2_{label}.csv"
            _write(p, ["lambda", "m2_nats"], [(float(x), float(f(x))) for x in lams])
            written.append(p)
        return written
    if which == "5":
        p = out / "fig5_G8max.csv"
        rows = [(x, m, -math.log(closed_form_xi2("G8max", lam=x))) for x, m in g8_max_curve(lams)]
        _write(p, ["lambda", "m2_max_nats", "m2_max_closed_form_nats"], rows)
        return [p]

    grid = theta_grid(n_theta)
    for panel in PANELS[which]:
        d = magic_distribution(panel.process, panel.regime, panel.initial_id, lam, "limit", grid)
        p = out / f"fig{which}_{panel.label}.csv"
        _write(p, ["theta_rad", "xi2", "m2_nats"],
               [(float(t), float(x), float(m)) for t, x, m in d.samples])
        written.append(p)
    return written


def emit_all(out_dir, lam: float = LAMBDA_DEFAULT, **kw):
    return [p for w in FIGURES for p in emit(w, out_dir, lam, **kw)]
