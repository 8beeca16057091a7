"""Final-state magic distributions, equivalence classes and their maxima."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import engine as eng
from .engine import Process, Regime
from .limits import limit_final_state, limit_matrix
from .magic import xi2 as xi2_batch
from .qlinalg import EPS_NORM, ContractError
from .stabilizers import catalog_matrix, get_state

N_GRID = 180
EPS_CLASS = 1e-9
# an engine final state is "vanishing" when |A psi| < VANISH_REL * max|A_fi|;
# this sits far above round-off (~1e-16) yet below any physical subleading
# amplitude reached at the default kinematics
VANISH_REL = 1e-10
ZERO_MAGIC = 1e-10
IDS = tuple(range(1, 61))


def theta_grid(n: int = N_GRID) -> np.ndarray:
    """``k pi / n`` for k = 1..n-1: the open interval without its singular ends."""
    if n < 2:
        raise ContractError("grid needs n >= 2")
    return np.arange(1, n) * math.pi / n


@dataclass
class MagicDistribution:
    process: Process
    regime: Regime
    initial_id: int
    lam: float
    source: str
    theta: np.ndarray
    xi2: np.ndarray
    m2: np.ndarray
    status: str = field(init=False)

    def __post_init__(self):
        finite = np.isfinite(self.m2)
        if not finite.any():
            self.status = "vanishing_amplitude"
        elif np.all(np.abs(self.m2[finite]) < ZERO_MAGIC):
            self.status = "zero_magic"
        else:
            self.status = "normal"

    @property
    def samples(self):
        return list(zip(self.theta.tolist(), self.xi2.tolist(), self.m2.tolist()))


# --- final states for all 60 initial states on a grid ---------------------

def _xi2_from_finals(finals: np.ndarray, scales: np.ndarray) -> np.ndarray:
    """Xi_2 for unnormalized final states ``finals[..., 4]``; NaN where vanishing."""
    norm_sq = np.sum(np.abs(finals) ** 2, axis=-1)
    ok = norm_sq >= VANISH_REL**2 * scales
    safe = np.where(ok[..., None], finals, 1.0) / np.sqrt(np.where(ok, norm_sq, 4.0))[..., None]
    return np.where(ok, xi2_batch(safe), np.nan)


def engine_matrices(process, regime, lam, thetas, mu=None, eps=None) -> np.ndarray:
    return np.array([
        eng.amplitude_matrix(eng.engine_point(process, regime, th, lam, mu=mu, eps=eps)).entries
        for th in thetas
    ])


def richardson(values, q: float) -> np.ndarray:
    """Richardson table on samples at ``h, h/q, h/q^2, ...``; returns the top entry.

    Assumes an error series ``c1 h + c2 h^2 + ...`` in the expansion variable.
    """
    row = [np.asarray(v, dtype=float) for v in values]
    for k in range(1, len(row)):
        row = [row[i] + (row[i] - row[i - 1]) / (q**k - 1) for i in range(1, len(row))]
    return row[0]


def _deeper(regime, mu, eps, k):
    """Kinematics ``k`` halvings deeper into the limit, plus the shrink factor of h."""
    if regime is Regime.THRESHOLD:
        return {"eps": eps / 2**k}, 2.0      # h = eps
    if regime is Regime.LOW:
        return {"mu": mu / 2**k}, 4.0        # h = mu^2: corrections are even in mu
    return {"mu": mu * 2**k}, 2.0            # h = 1/mu


def xi2_table(process, regime, lam, thetas=None, source="limit", ids=IDS, mu=None, eps=None,
              extrapolate: int = 0) -> np.ndarray:
    """``Xi_2`` with shape ``(len(ids), len(thetas))``; NaN where the state vanishes.

    With ``source="engine"`` and ``extrapolate=k > 0`` the engine is evaluated
    at the requested kinematics and ``k`` successive halvings of the expansion
    scale, and ``k`` Richardson steps remove the leading ``k`` correction orders.
    """
    process, regime = Process.parse(process), Regime.parse(regime)
    thetas = theta_grid() if thetas is None else np.asarray(thetas, dtype=float)
    states = np.array([get_state(i) for i in ids])

    if source == "engine":
        if extrapolate:
            mu0 = eng.default_mu(process, regime, lam) if mu is None else mu
            eps0 = eng.EPS_THRESHOLD if eps is None else eps
            samples = []
            for k in range(extrapolate + 1):
                kin, q = _deeper(regime, mu0, eps0, k)
                samples.append(xi2_table(process, regime, lam, thetas, "engine", ids, **kin))
            return richardson(samples, q)
        mats = engine_matrices(process, regime, lam, thetas, mu=mu, eps=eps)
        scales = np.max(np.abs(mats), axis=(1, 2)) ** 2
        finals = np.einsum("tfi,si->stf", mats, states)
        return _xi2_from_finals(finals, scales[None, :])
    if source == "limit":
        out = np.full((len(ids), len(thetas)), np.nan)
        for j, th in enumerate(thetas):
            for k, psi in enumerate(states):
                fin = limit_final_state(process, regime, th, lam, psi)
                if fin is not None:
                    out[k, j] = xi2_batch(fin / np.linalg.norm(fin))
        return out
    raise ContractError(f"source must be 'engine' or 'limit', got {source!r}")


def magic_distribution(process, regime, initial_id: int, lam: float, source: str = "limit",
                       thetas=None, mu=None, eps=None, extrapolate: int = 0) -> MagicDistribution:
    """M_2(theta) of the final state produced from stabilizer state ``initial_id``."""
    process, regime = Process.parse(process), Regime.parse(regime)
    thetas = theta_grid() if thetas is None else np.asarray(thetas, dtype=float)
    x = xi2_table(process, regime, lam, thetas, source, ids=(initial_id,), mu=mu, eps=eps,
                  extrapolate=extrapolate)[0]
    with np.errstate(invalid="ignore"):
        m = 0.0 - np.log(x)
    return MagicDistribution(process, regime, initial_id, lam, source, thetas, x, m)


def scan_all(process, regime, lam, source="limit", thetas=None, threads: int = 1, **kw):
    """Distributions for all 60 initial states, in id order."""
    def one(i):
        return magic_distribution(process, regime, i, lam, source, thetas, **kw)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, IDS))
    return [one(i) for i in IDS]


def m2_function(process, regime, initial_id, lam, source="limit", mu=None, eps=None):
    """Callable ``theta -> M_2`` (NaN where the final state vanishes)."""
    psi = get_state(initial_id)

    def f(theta):
        if source == "limit":
            fin = limit_final_state(process, regime, theta, lam, psi)
        else:
            a = eng.amplitude_matrix(eng.engine_point(process, regime, theta, lam, mu=mu, eps=eps)).entries
            fin = a @ psi
            if np.vdot(fin, fin).real < (VANISH_REL * np.abs(a).max()) ** 2:
                fin = None
        if fin is None:
            return math.nan
        return 0.0 - math.log(xi2_batch(fin / np.linalg.norm(fin)))

    return f


def m2_of_lambda(initial_id, theta=math.pi / 2):
    """Callable ``lam -> M_2`` for ee -> mumu at threshold (theta-independent)."""
    psi = get_state(initial_id)

    def f(lam):
        fin = limit_matrix(Process.EE_TO_MUMU, Regime.THRESHOLD, theta, lam) @ psi
        if np.vdot(fin, fin).real < EPS_NORM:
            return math.nan
        return 0.0 - math.log(xi2_batch(fin / np.linalg.norm(fin)))

    return f


# --- maximum search ----------------------------------------------------------

@dataclass(frozen=True)
class Maximum:
    value: float
    argmax: tuple
    flat: bool = False


_INVPHI = (math.sqrt(5) - 1) / 2


def golden_section_max(f, a, b, tol=1e-10, max_iter=200):
    """Maximizer of a unimodal ``f`` on ``[a, b]`` by golden-section search."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) < tol:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return (a + b) / 2


def _polish(f, x, lo, hi, h=1e-5, span=1e-5):
    """Sharpen a maximizer by locating the zero of the central-difference slope.

    Golden-section alone stalls near sqrt(machine eps) because the function is
    flat at its maximum; the slope has a clean sign change instead.
    """
    def slope(t):
        return (f(t + h) - f(t - h)) / (2 * h)

    a, b = max(lo + h, x - span), min(hi - h, x + span)
    if not a < b:
        return x
    try:
        sa, sb = slope(a), slope(b)
        if np.isfinite(sa) and np.isfinite(sb) and sa > 0 > sb:
            y = brentq(slope, a, b, xtol=1e-14, rtol=1e-15)
            if f(y) >= f(x) - 1e-13:
                return y
    except ValueError:
        pass
    return x


def find_maximum(f, lo, hi, n=720, degenerate=1e-8, flat_tol=1e-12, margin=1e-2) -> Maximum:
    """Global maxima of ``f`` on ``[lo, hi]``.

    Scans ``n + 1`` grid points, refines every grid local maximum within
    ``margin`` of the best by golden-section search (then a slope polish), and
    returns every maximizer within ``degenerate`` of the global maximum. A
    function flat to ``flat_tol`` returns the sentinel ``Maximum(v, (), True)``.
    NaN samples (vanishing final states) are ignored.
    """
    xs = np.linspace(lo, hi, n + 1)
    ys = np.array([f(x) for x in xs], dtype=float)
    finite = np.isfinite(ys)
    if not finite.any():
        return Maximum(math.nan, (), False)
    yv = np.where(finite, ys, -np.inf)
    top = yv.max()
    if top - ys[finite].min() < flat_tol:
        return Maximum(float(top), (), True)

    def g(x):
        v = f(x)
        return v if np.isfinite(v) else -np.inf

    found = []
    for i in range(n + 1):
        left = yv[i - 1] if i > 0 else -np.inf
        right = yv[i + 1] if i < n else -np.inf
        if not (yv[i] >= left and yv[i] >= right and yv[i] >= top - margin):
            continue
        a, b = xs[max(i - 1, 0)], xs[min(i + 1, n)]
        x = golden_section_max(g, a, b)
        if i in (0, n) and g(xs[i]) >= g(x):
            x = xs[i]
        else:
            x = _polish(g, x, lo, hi)
        found.append((x, g(x)))

    best = max(v for _, v in found)
    keep = sorted(x for x, v in found if v >= best - degenerate)
    merged = []
    for x in keep:
        if not merged or abs(x - merged[-1]) > 1e-6:
            merged.append(x)
    return Maximum(float(best), tuple(float(x) for x in merged))


THETA_LO, THETA_HI = 1e-6, math.pi - 1e-6


def theta_maximum(process, regime, initial_id, lam, source="limit", **kw) -> Maximum:
    return find_maximum(m2_function(process, regime, initial_id, lam, source, **kw), THETA_LO, THETA_HI)


def lambda_maximum(initial_id) -> Maximum:
    return find_maximum(m2_of_lambda(initial_id), 0.0, 1.0)


# --- classification ------------------------------------------------------------

@dataclass
class MagicClass:
    representative: int
    members: list
    status: str
    maximum: Maximum | None = None
    variable: str = "theta"

    def to_dict(self):
        out = {"representative": self.representative, "members": self.members, "status": self.status}
        if self.maximum is not None:
            out["m2_max"] = self.maximum.value
            out["flat"] = self.maximum.flat
            out[f"{self.variable}_max"] = list(self.maximum.argmax)
        return out


@dataclass
class ClassificationReport:
    process: Process
    regime: Regime
    lam: float
    classes: list

    def members(self):
        return [c.members for c in self.classes]

    def class_of(self, state_id):
        for c in self.classes:
            if state_id in c.members:
                return c
        raise KeyError(state_id)

    def to_dict(self):
        return {
            "process": self.process.value,
            "regime": self.regime.value,
            "lambda": self.lam,
            "classes": [c.to_dict() for c in self.classes],
        }


def _same_distribution(a, b, eps):
    """Rows agree within ``eps`` wherever both are defined.

    Isolated undefined points (an amplitude zero at, say, theta = pi/2) are
    skipped; a row undefined everywhere only matches another such row.
    """
    fa, fb = np.isfinite(a), np.isfinite(b)
    if not fa.any() or not fb.any():
        return not fa.any() and not fb.any()
    both = fa & fb
    return bool(both.any()) and float(np.max(np.abs(a[both] - b[both]))) <= eps


def group_rows(table: np.ndarray, ids=IDS, eps=EPS_CLASS):
    """Group ids by pointwise M_2 agreement; the first id of a group is its representative."""
    with np.errstate(invalid="ignore", divide="ignore"):
        m = -np.log(table)
    groups = []
    for k, row in zip(ids, m):
        for g in groups:
            if _same_distribution(row, g[1], eps):
                g[0].append(k)
                break
        else:
            groups.append(([k], row))
    return groups


def classify(process, regime, lam=eng.LAMBDA_DEFAULT, source="limit", thetas=None, eps=EPS_CLASS,
             with_maxima=True, **kw) -> ClassificationReport:
    """Partition the 60 stabilizer inputs by their M_2(theta) distribution."""
    process, regime = Process.parse(process), Regime.parse(regime)
    table = xi2_table(process, regime, lam, thetas, source, **kw)
    classes = []
    for members, row in group_rows(table, eps=eps):
        finite = np.isfinite(row)
        if not finite.any():
            status = "vanishing_amplitude"
        elif np.all(np.abs(row[finite]) < ZERO_MAGIC):
            status = "zero_magic"
        else:
            status = "normal"
        c = MagicClass(members[0], members, status)
        if with_maxima and status != "vanishing_amplitude":
            if regime is Regime.THRESHOLD:
                c.maximum, c.variable = lambda_maximum(members[0]), "lambda"
            else:
                c.maximum = theta_maximum(process, regime, members[0], lam, source)
        classes.append(c)
    return ClassificationReport(process, regime, lam, classes)


def g8_max_curve(lams) -> list[tuple[float, float]]:
    """Largest M_2 over theta from state 13 in low-energy mumu -> ee, per lambda."""
    out = []
    for lam in lams:
        m = theta_maximum(Process.MUMU_TO_EE, Regime.LOW, 13, float(lam))
        out.append((float(lam), m.value))
    return out


def catalog_states():
    return catalog_matrix()
