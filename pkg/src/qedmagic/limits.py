"""Analytic low- and high-energy spin amplitudes and closed-form Xi_2 values.

Matrices are returned in the engine layout, element ``(f, i)`` = amplitude
``i -> f``; the 4x4 tables as usually printed have the initial state on the
row, so those are transposed here. Leading powers of ``mu`` and couplings
are dropped since they cancel on normalizing the final state.
"""

from __future__ import annotations

import math

import numpy as np

from .engine import Process, Regime, valid_regimes
from .qlinalg import ContractError

_BASIS = {"uu": 0, "ud": 1, "du": 2, "dd": 3}


def _from_channels(channels: dict) -> np.ndarray:
    """Build ``A[f, i]`` from ``{(initial, final): amplitude}``."""
    a = np.zeros((4, 4), dtype=complex)
    for (ini, fin), val in channels.items():
        a[_BASIS[fin], _BASIS[ini]] = val
    return a


def threshold_ee_mumu(lam: float) -> np.ndarray:
    return _from_channels({
        ("ud", "ud"): -lam, ("du", "du"): -lam,
        ("ud", "du"): lam, ("du", "ud"): lam,
        ("uu", "uu"): -2.0, ("dd", "dd"): -2.0,
    })


def low_moller(theta: float) -> np.ndarray:
    diag = 4 * math.cos(theta) / math.sin(theta) ** 2
    direct = 1 / math.sin(theta / 2) ** 2
    crossed = -1 / math.cos(theta / 2) ** 2
    return _from_channels({
        ("uu", "uu"): diag, ("dd", "dd"): diag,
        ("ud", "ud"): direct, ("du", "du"): direct,
        ("ud", "du"): crossed, ("du", "ud"): crossed,
    })


def low_bhabha(theta: float) -> np.ndarray:
    return 2 / (1 - math.cos(theta)) * np.eye(4, dtype=complex)


def low_emu(theta: float, lam: float) -> np.ndarray:
    return 2 * lam / (math.cos(theta) - 1) * np.eye(4, dtype=complex)


def low_mumu_ee(theta: float, lam: float) -> np.ndarray:
    c2 = math.cos(2 * theta)
    same = 0.5 * (-3 - lam + (lam - 1) * c2)
    flip_both = (1 - lam) * math.sin(theta) ** 2
    mixed = (1 - lam) * math.cos(theta) * math.sin(theta)
    opposite = 0.5 * (-1 - lam + (1 - lam) * c2)
    return _from_channels({
        ("uu", "uu"): same, ("dd", "dd"): same,
        ("uu", "dd"): flip_both, ("dd", "uu"): flip_both,
        ("uu", "ud"): mixed, ("uu", "du"): -mixed,
        ("dd", "ud"): mixed, ("dd", "du"): -mixed,
        ("ud", "uu"): mixed, ("du", "uu"): -mixed,
        ("ud", "dd"): mixed, ("du", "dd"): -mixed,
        ("ud", "ud"): opposite, ("du", "ud"): -opposite,
        ("ud", "du"): -opposite, ("du", "du"): opposite,
    })


def _high_ee_mumu_orders(theta: float, lam: float):
    """``(A0, A1)`` with ``A = A0 + A1 / mu + O(1/mu^2)``, mu = |p|/m_mu."""
    s2, c2 = math.sin(2 * theta), math.cos(2 * theta)
    lead = _from_channels({
        ("uu", "ud"): 0.5 * s2, ("uu", "du"): -0.5 * s2,
        ("dd", "ud"): 0.5 * s2, ("dd", "du"): -0.5 * s2,
        ("uu", "dd"): 0.5 * (1 - c2), ("dd", "uu"): 0.5 * (1 - c2),
        ("uu", "uu"): -0.5 * (3 + c2), ("dd", "dd"): -0.5 * (3 + c2),
    })
    e = lam / 2 * s2
    f = -lam / 2 * (1 - c2)
    sub = _from_channels({
        ("uu", "ud"): -0.5 * s2, ("uu", "du"): 0.5 * s2,
        ("dd", "ud"): -0.5 * s2, ("dd", "du"): 0.5 * s2,
        ("uu", "dd"): -0.5 * (1 - c2), ("dd", "uu"): -0.5 * (1 - c2),
        ("uu", "uu"): 0.5 * (c2 - 1), ("dd", "dd"): 0.5 * (c2 - 1),
        ("ud", "uu"): e, ("du", "uu"): -e, ("ud", "dd"): e, ("du", "dd"): -e,
        ("ud", "ud"): f, ("du", "ud"): -f, ("ud", "du"): -f, ("du", "du"): f,
    })
    return lead, sub


def high_moller(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    c2 = math.cos(2 * theta)
    diag = (7 + c2) * c / s**2
    edge = (3 + c2) / s
    cs2 = 2 / math.sin(theta / 2) ** 2
    sc2 = 2 / math.cos(theta / 2) ** 2
    printed = np.array([
        [diag, edge, edge, 2 * c],
        [-4 / s, cs2, -sc2, 4 / s],
        [-4 / s, -sc2, cs2, 4 / s],
        [2 * c, -edge, -edge, diag],
    ], dtype=complex)
    return printed.T


def high_bhabha(theta: float) -> np.ndarray:
    c = math.cos(theta)
    cot = 1 / math.tan(theta / 2)
    diag = (15 * c + math.cos(3 * theta)) / (4 - 4 * c)
    edge = 0.5 * (3 + math.cos(2 * theta)) * cot
    corner = -2 * math.cos(theta / 2) ** 2 * c
    printed = np.array([
        [diag, -edge, edge, corner],
        [2 * cot, 2 * cot**2, 2, 2 * cot],
        [-2 * cot, 2, 2 * cot**2, -2 * cot],
        [corner, -edge, edge, diag],
    ], dtype=complex)
    return printed.T


def high_emu(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    cot = 1 / math.tan(theta / 2)
    diag = 3 + 4 / (c - 1) + c
    edge = -2 * cot + s
    printed = np.array([
        [diag, edge, edge, -1 - c],
        [2 * cot, -2 * cot**2, 2, -2 * cot],
        [2 * cot, 2, -2 * cot**2, -2 * cot],
        [-1 - c, -edge, -edge, diag],
    ], dtype=complex)
    return printed.T


def _check_theta(theta):
    if not 0.0 < theta < math.pi:
        raise ContractError(f"theta must lie strictly inside (0, pi), got {theta}")


def limit_matrix(process, regime, theta: float, lam: float, order: int = 0) -> np.ndarray:
    """Analytic amplitude matrix of a process in a kinematic limit.

    ``order=1`` returns the coefficient of ``1/mu`` where one is known (the
    s-channel processes at high energy) and zeros otherwise.
    """
    process, regime = Process.parse(process), Regime.parse(regime)
    if regime not in valid_regimes(process):
        raise ContractError(f"no {regime.value}-energy form for {process.value}")
    if not 0.0 <= lam <= 1.0:
        raise ContractError(f"lambda must lie in [0, 1], got {lam}")
    if order not in (0, 1):
        raise ContractError("order must be 0 or 1")
    if regime is Regime.THRESHOLD:
        return threshold_ee_mumu(lam) if order == 0 else np.zeros((4, 4), dtype=complex)

    _check_theta(theta)
    if regime is Regime.HIGH and process in (Process.EE_TO_MUMU, Process.MUMU_TO_EE):
        return _high_ee_mumu_orders(theta, lam)[order]
    if order == 1:
        return np.zeros((4, 4), dtype=complex)
    if regime is Regime.LOW:
        return {
            Process.MOLLER: lambda: low_moller(theta),
            Process.BHABHA: lambda: low_bhabha(theta),
            Process.EMU: lambda: low_emu(theta, lam),
            Process.MUMU_TO_EE: lambda: low_mumu_ee(theta, lam),
        }[process]()
    return {
        Process.MOLLER: high_moller,
        Process.BHABHA: high_bhabha,
        Process.EMU: high_emu,
    }[process](theta)


_GENERIC_THETAS = (0.7, 1.3, 2.1)


def _vanishes(a, psi, rel_eps):
    out = a @ psi
    return np.vdot(out, out).real < rel_eps * max(np.abs(a).max(), 1.0) ** 2


def limit_final_state(process, regime, theta, lam, psi, rel_eps: float = 1e-12):
    """Unnormalized final state in the limit, or ``None`` where it is undefined.

    When the leading order annihilates ``psi`` at every angle, the state is
    produced only at the next order and that order defines the distribution.
    A leading-order zero at an isolated angle is left undefined instead:
    patching a single point with the subleading term would make the
    distribution depend on the expansion parameter at that one angle.
    """
    psi = np.asarray(psi, dtype=complex)
    lead = limit_matrix(process, regime, theta, lam)
    if not _vanishes(lead, psi, rel_eps):
        return lead @ psi
    structural = all(
        _vanishes(limit_matrix(process, regime, t, lam), psi, rel_eps) for t in _GENERIC_THETAS
    )
    if not structural:
        return None
    sub = limit_matrix(process, regime, theta, lam, order=1)
    if not sub.any() or _vanishes(sub, psi, rel_eps):
        return None
    return sub @ psi


# --- closed-form Xi_2 -------------------------------------------------------

def _f2(theta, lam):
    c = math.cos(theta)
    return 16 * (c**8 + 14 * c**4 + 1) / (math.cos(2 * theta) + 3) ** 4


def _f3(theta, lam):
    c2 = math.cos(2 * theta)
    return (993 * c2 + 294 * math.cos(4 * theta) + 15 * math.cos(6 * theta) + 746) / (
        4 * (3 * c2 + 5) ** 3
    )


def _f4(theta, lam):
    c = [math.cos(2 * k * theta) for k in range(9)]
    num = (13336 * c[1] + 5796 * c[2] + 1960 * c[3] + 532 * c[4] + 56 * c[5]
           + 28 * c[6] + 8 * c[7] + c[8] + 11051)
    return num / (128 * (c[1] + 3) ** 4)


def _f5(theta, lam):
    return (math.cos(8 * theta) + 7) / 8


def _g1(theta, lam):
    return (lam**8 + 14 * lam**4 + 1) / (lam**2 + 1) ** 4


def _g2(theta, lam):
    return (lam**8 + 28 * lam**4 + 16) / (lam**2 + 2) ** 4


def _g8max(theta, lam):
    return (lam**8 + 19 * lam**4 + 18 * lam**2 + 7) / (lam**2 + 2) ** 4


CLOSED_FORMS = {
    "F1": lambda theta, lam: 1.0,
    "F2": _f2,
    "F3": _f3,
    "F4": _f4,
    "F5": _f5,
    "G1": _g1,
    "G2": _g2,
    "G8max": _g8max,
}


def closed_form_xi2(name: str, theta: float = math.pi / 4, lam: float = 0.0) -> float:
    """Value of a named closed-form Xi_2 (theta in radians, lam = m_e/m_mu)."""
    try:
        fn = CLOSED_FORMS[name]
    except KeyError:
        raise ContractError(f"unknown closed form {name!r}; have {sorted(CLOSED_FORMS)}") from None
    return float(fn(theta, lam))
