"""Tree-level QED spin-amplitude matrices from Dirac spinors.

Conventions
-----------
* Dirac representation of the gamma matrices, metric ``(+,-,-,-)``.
* CM frame: particle 1 incoming along +z, particle 2 along -z; outgoing
  particle 1 at polar angle ``theta`` with azimuth 0, particle 2 opposite.
* Every spin, incoming or outgoing, is projected on the beam axis z; spinors
  are pure boosts of rest-frame Sigma_z eigenstates (no helicity basis).
* Antiparticle spinors: ``v(p, s) = (-1)**s * C ubar(p, s)^T`` with
  ``C = i gamma^2 gamma^0``, i.e. rest spinors (0,0,0,1) for spin up and
  (0,0,1,0) for spin down.
* Units of the electron mass; ``lam = m_e / m_mu``; ``mu = |p| / m_e``.
* Couplings are stripped: ``A = sum_diagrams (+/-) J1.J2 / q^2`` with
  Feynman-gauge photon propagator.

The amplitude matrix element ``(f, i)`` is the transition amplitude from
basis state ``i`` to basis state ``f`` in ``{|uu>, |ud>, |du>, |dd>}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .qlinalg import ContractError


class KinematicsError(ValueError):
    """The requested kinematic point is unphysical or degenerate."""


class Process(str, Enum):
    EE_TO_MUMU = "ee-mumu"
    MOLLER = "moller"
    BHABHA = "bhabha"
    EMU = "emu"
    MUMU_TO_EE = "mumu-ee"

    @classmethod
    def parse(cls, name) -> "Process":
        if isinstance(name, cls):
            return name
        key = str(name).lower().replace("_", "-")
        aliases = {
            "eetomumu": cls.EE_TO_MUMU, "ee-to-mumu": cls.EE_TO_MUMU,
            "mumutoee": cls.MUMU_TO_EE, "mumu-to-ee": cls.MUMU_TO_EE,
            "emuelastic": cls.EMU, "e-mu": cls.EMU, "møller": cls.MOLLER,
        }
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise ContractError(f"unknown process {name!r}") from None


class Regime(str, Enum):
    THRESHOLD = "threshold"
    LOW = "low"
    HIGH = "high"

    @classmethod
    def parse(cls, name) -> "Regime":
        if isinstance(name, cls):
            return name
        key = str(name).lower()
        key = {"low_energy": "low", "low-energy": "low", "high_energy": "high",
               "high-energy": "high"}.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ContractError(f"unknown regime {name!r}") from None


LAMBDA_DEFAULT = 0.005
LAMBDA_PHYSICAL = 0.004836
MU_LOW = 1e-3
MU_HIGH = 1e3  # in units of the heaviest mass in the process
EPS_THRESHOLD = 1e-6

_WITH_MUONS = {Process.EE_TO_MUMU, Process.MUMU_TO_EE, Process.EMU}


def valid_regimes(process) -> tuple[Regime, ...]:
    process = Process.parse(process)
    if process is Process.EE_TO_MUMU:
        return (Regime.THRESHOLD, Regime.HIGH)
    return (Regime.LOW, Regime.HIGH)


# --- gamma matrices, Dirac representation ---

_I2 = np.eye(2, dtype=complex)
_Z2 = np.zeros((2, 2), dtype=complex)
SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
GAMMA = np.array(
    [np.block([[_I2, _Z2], [_Z2, -_I2]])]
    + [np.block([[_Z2, s], [-s, _Z2]]) for s in SIGMA]
)
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])
C_MATRIX = 1j * GAMMA[2] @ GAMMA[0]
# gamma^0 gamma^mu, so that abar gamma^mu b = a^dagger (g0 g^mu) b
_G0G = np.einsum("ij,mjk->mik", GAMMA[0], GAMMA)

_SPIN_INDEX = {"up": 0, "down": 1, 0: 0, 1: 1, "+": 0, "-": 1}


def _spin(s) -> int:
    try:
        return _SPIN_INDEX[s]
    except (KeyError, TypeError):
        raise ContractError(f"spin must be 'up' or 'down', got {s!r}") from None


def slash(p4) -> np.ndarray:
    """Feynman slash ``gamma^mu p_mu`` of a contravariant four-vector."""
    return np.einsum("m,mij->ij", METRIC @ np.asarray(p4, dtype=float), GAMMA)


def dirac_spinor(mass: float, three_momentum, spin) -> np.ndarray:
    """Particle spinor ``u(p, s)`` with spin projected on z, ``ubar u = 2m``."""
    p = np.asarray(three_momentum, dtype=float)
    energy = math.sqrt(mass * mass + p @ p)
    chi = _I2[_spin(spin)]
    sigma_p = p[0] * SIGMA[0] + p[1] * SIGMA[1] + p[2] * SIGMA[2]
    root = math.sqrt(energy + mass)
    return np.concatenate([root * chi, sigma_p @ chi / root])


def dirac_vspinor(mass: float, three_momentum, spin) -> np.ndarray:
    """Antiparticle spinor ``v(p, s) = (-1)^s C ubar(p, s)^T``, ``vbar v = -2m``."""
    s = _spin(spin)
    u = dirac_spinor(mass, three_momentum, s)
    # C ubar^T = C gamma^0 u* = i gamma^2 u*
    return (-1) ** s * (1j * GAMMA[2] @ u.conj())


def bar(w) -> np.ndarray:
    return np.asarray(w).conj() @ GAMMA[0]


def cm_frame(p1_direction, k1_direction):
    """Axes ``(x, y, z)`` with z along p1 and y along ``k1 x p1``."""
    p1 = np.asarray(p1_direction, dtype=float)
    k1 = np.asarray(k1_direction, dtype=float)
    z = p1 / np.linalg.norm(p1)
    cross = np.cross(k1, p1)
    norm = np.linalg.norm(cross)
    if norm < 1e-12 * np.linalg.norm(k1) * np.linalg.norm(p1):
        raise KinematicsError("collinear momenta: scattering plane undefined")
    y = cross / norm
    x = np.cross(z, y)
    return x, y, z


@dataclass(frozen=True)
class KinematicPoint:
    process: Process
    theta: float
    lam: float
    mu: float

    def __post_init__(self):
        object.__setattr__(self, "process", Process.parse(self.process))
        if not 0.0 < self.theta < math.pi:
            raise KinematicsError(f"theta must lie strictly inside (0, pi), got {self.theta}")
        if not 0.0 < self.lam <= 1.0:
            raise ContractError(f"lambda must lie in (0, 1], got {self.lam}")
        if not self.mu > 0.0:
            raise ContractError(f"mu must be positive, got {self.mu}")
        if self.process is Process.EE_TO_MUMU and self.k_out_sq <= 0.0:
            raise KinematicsError(
                f"below the muon-pair threshold: sqrt_s = {self.sqrt_s:.6g} < {2 / self.lam:.6g}"
            )

    @property
    def masses(self) -> tuple[float, float, float, float]:
        """Masses of (incoming 1, incoming 2, outgoing 1, outgoing 2)."""
        me, mm = 1.0, 1.0 / self.lam
        return {
            Process.EE_TO_MUMU: (me, me, mm, mm),
            Process.MUMU_TO_EE: (mm, mm, me, me),
            Process.MOLLER: (me, me, me, me),
            Process.BHABHA: (me, me, me, me),
            Process.EMU: (me, mm, me, mm),
        }[self.process]

    @property
    def p_in(self) -> float:
        return self.mu

    @property
    def sqrt_s(self) -> float:
        m1, m2, _, _ = self.masses
        return math.hypot(m1, self.mu) + math.hypot(m2, self.mu)

    @property
    def k_out_sq(self) -> float:
        m1, _, m3, _ = self.masses
        if m1 == m3:
            return self.mu * self.mu
        # equal-mass pairs in and out: |k|^2 = |p|^2 + m_in^2 - m_out^2
        return self.mu * self.mu + (m1 - m3) * (m1 + m3)

    @property
    def k_out(self) -> float:
        return math.sqrt(self.k_out_sq)

    def momenta(self):
        """Three-momenta ``(p1, p2, k1, k2)`` in the CM frame."""
        p, k = self.mu, self.k_out
        p1 = np.array([0.0, 0.0, p])
        k1 = k * np.array([math.sin(self.theta), 0.0, math.cos(self.theta)])
        return p1, -p1, k1, -k1

    def four_momenta(self):
        out = []
        for m, v in zip(self.masses, self.momenta()):
            out.append(np.concatenate([[math.sqrt(m * m + v @ v)], v]))
        return tuple(out)

    def mandelstam(self) -> tuple[float, float, float]:
        """``(s, t, u)`` with t = (p1 - k1)^2 and u = (p1 - k2)^2."""
        m1, m2, m3, m4 = self.masses
        s = self.sqrt_s**2
        p, k, c = self.mu, self.k_out, math.cos(self.theta)
        if m1 == m3 and p == k:
            t = -2 * p * p * (1 - c)
        else:
            e1, e3 = math.hypot(m1, p), math.hypot(m3, k)
            t = m1 * m1 + m3 * m3 - 2 * (e1 * e3 - p * k * c)
        if m1 == m4 and p == k:
            u = -2 * p * p * (1 + c)
        else:
            e1, e4 = math.hypot(m1, p), math.hypot(m4, k)
            u = m1 * m1 + m4 * m4 - 2 * (e1 * e4 + p * k * c)
        return s, t, u


def threshold_point(theta: float, lam: float, eps: float = EPS_THRESHOLD) -> KinematicPoint:
    """ee -> mumu at ``sqrt_s = 2 m_mu (1 + eps)``."""
    energy = (1.0 + eps) / lam
    return KinematicPoint(Process.EE_TO_MUMU, theta, lam, math.sqrt(energy * energy - 1.0))


def default_mu(process, regime, lam: float) -> float:
    """Default |p|/m_e for the engine in a low- or high-energy regime.

    High-energy points sit at |p| = 1e3 x the heaviest mass in the process.
    """
    process, regime = Process.parse(process), Regime.parse(regime)
    if regime is Regime.LOW:
        return MU_LOW
    if regime is Regime.HIGH:
        return MU_HIGH / lam if process in _WITH_MUONS else MU_HIGH
    raise ContractError("threshold points are set by eps, not mu")


def engine_point(process, regime, theta, lam, mu=None, eps=None) -> KinematicPoint:
    process, regime = Process.parse(process), Regime.parse(regime)
    if regime not in valid_regimes(process):
        raise ContractError(f"regime {regime.value} not defined for {process.value}")
    if regime is Regime.THRESHOLD:
        return threshold_point(theta, lam, EPS_THRESHOLD if eps is None else eps)
    return KinematicPoint(process, theta, lam, default_mu(process, regime, lam) if mu is None else mu)


def _spinor_pair(kind, mass, momentum):
    make = dirac_spinor if kind == "u" else dirac_vspinor
    return np.array([make(mass, momentum, s) for s in (0, 1)])


def _currents(a, b):
    """``J[sa, sb, mu] = abar(sa) gamma^mu b(sb)`` for spinor pairs ``a``, ``b``."""
    return np.einsum("ai,mij,bj->abm", a.conj(), _G0G, b)


def _exchange(j1, j2, q, q2, xi):
    """Contract two currents through the photon propagator.

    ``j1`` has spin axes (f?, i?) for line 1 and ``j2`` for line 2; the
    result keeps the four spin axes in the order j1 then j2.
    """
    lower = METRIC @ q
    amp = np.einsum("abm,mn,cdn->abcd", j1, METRIC, j2) / q2
    if xi:
        amp = amp - xi * np.einsum("abm,m->ab", j1, lower)[:, :, None, None] * np.einsum(
            "cdm,m->cd", j2, lower
        )[None, None] / (q2 * q2)
    return amp


@dataclass(frozen=True)
class SpinAmplitudeMatrix:
    entries: np.ndarray
    point: KinematicPoint

    def apply(self, psi) -> np.ndarray:
        return self.entries @ np.asarray(psi, dtype=complex)


def amplitude_matrix(point: KinematicPoint, xi: float = 0.0) -> SpinAmplitudeMatrix:
    """4x4 spin amplitude matrix at one kinematic point.

    ``xi`` adds ``xi q^mu q^nu / q^4`` to the Feynman-gauge propagator; the
    result must not depend on it (current conservation).
    """
    m1, m2, m3, m4 = point.masses
    p1, p2, k1, k2 = point.momenta()
    P1, P2, K1, K2 = point.four_momenta()
    s, t, u = point.mandelstam()
    proc = point.process

    if proc in (Process.EE_TO_MUMU, Process.MUMU_TO_EE):
        jin = _currents(_spinor_pair("v", m2, p2), _spinor_pair("u", m1, p1))  # [i2, i1]
        jout = _currents(_spinor_pair("u", m3, k1), _spinor_pair("v", m4, k2))  # [f1, f2]
        amp = _exchange(jin, jout, P1 + P2, s, xi)  # [i2, i1, f1, f2]
        amp = amp.transpose(2, 3, 1, 0)
    elif proc is Process.MOLLER:
        u1, u2 = _spinor_pair("u", m1, p1), _spinor_pair("u", m2, p2)
        w1, w2 = _spinor_pair("u", m3, k1), _spinor_pair("u", m4, k2)
        direct = _exchange(_currents(w1, u1), _currents(w2, u2), P1 - K1, t, xi)  # [f1,i1,f2,i2]
        crossed = _exchange(_currents(w2, u1), _currents(w1, u2), P1 - K2, u, xi)  # [f2,i1,f1,i2]
        amp = direct.transpose(0, 2, 1, 3) - crossed.transpose(2, 0, 1, 3)
    elif proc is Process.BHABHA:
        u1, v2 = _spinor_pair("u", m1, p1), _spinor_pair("v", m2, p2)
        w1, x2 = _spinor_pair("u", m3, k1), _spinor_pair("v", m4, k2)
        scatter = _exchange(_currents(w1, u1), _currents(v2, x2), P1 - K1, t, xi)  # [f1,i1,i2,f2]
        annihilate = _exchange(_currents(v2, u1), _currents(w1, x2), P1 + P2, s, xi)  # [i2,i1,f1,f2]
        amp = -scatter.transpose(0, 3, 1, 2) + annihilate.transpose(2, 3, 1, 0)
    elif proc is Process.EMU:
        u1, u2 = _spinor_pair("u", m1, p1), _spinor_pair("u", m2, p2)
        w1, w2 = _spinor_pair("u", m3, k1), _spinor_pair("u", m4, k2)
        amp = _exchange(_currents(w1, u1), _currents(w2, u2), P1 - K1, t, xi)
        amp = amp.transpose(0, 2, 1, 3)
    else:  # pragma: no cover - Process is closed
        raise ContractError(f"unsupported process {proc}")

    return SpinAmplitudeMatrix(amp.reshape(4, 4), point)


def canonical_form(a) -> np.ndarray:
    """Fix global scale and phase: the largest entry becomes exactly 1.

    Ties within 1e-9 relative are broken by row-major order, so matrices
    that agree up to noise pick the same reference entry.
    """
    a = np.asarray(a, dtype=complex)
    mags = np.abs(a).ravel()
    top = mags.max()
    if top == 0.0:
        raise ContractError("cannot canonicalize the zero matrix")
    ref = a.ravel()[np.flatnonzero(mags >= top * (1 - 1e-9))[0]]
    return a / ref


SWAP = np.eye(4, dtype=complex)[[0, 2, 1, 3]]
FLIP = np.kron(SIGMA[0], SIGMA[0])


@dataclass(frozen=True)
class ExchangeReport:
    theta: float
    mu: float
    deviation: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.deviation <= self.tol


def exchange_antisymmetry_check(point: KinematicPoint, tol: float = 1e-10) -> ExchangeReport:
    """Identical-particle exchange for Moller scattering.

    Swapping the outgoing electrons sends theta to pi - theta; redefining z
    along the new particle 1 flips every spin (X on both qubits). Fermi
    statistics require ``A(theta) = -SWAP X A(pi - theta) X``.
    """
    if point.process is not Process.MOLLER:
        raise ContractError("exchange antisymmetry applies to Moller scattering")
    a = amplitude_matrix(point).entries
    mirrored = KinematicPoint(point.process, math.pi - point.theta, point.lam, point.mu)
    b = amplitude_matrix(mirrored).entries
    image = SWAP @ FLIP @ b @ FLIP
    dev = float(np.abs(a + image).max() / np.abs(a).max())
    return ExchangeReport(point.theta, point.mu, dev, tol)


def gauge_deviation(point: KinematicPoint, xi: float = 1.0) -> float:
    """Largest relative entry change when the gauge term ``xi`` is switched on."""
    a = amplitude_matrix(point).entries
    b = amplitude_matrix(point, xi=xi).entries
    return float(np.abs(a - b).max() / np.abs(a).max())
