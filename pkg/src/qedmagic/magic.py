"""Stabilizer Renyi entropies of pure one- and two-qubit states.

All logarithms are natural, so magic is reported in nats. For a pure state
on ``n`` qubits (``d = 2**n``)::

    Xi_P   = <psi|P|psi>^2 / d
    M_alpha = log(sum_P Xi_P^alpha) / (1 - alpha) - log d

and for alpha = 2 on two qubits, ``M_2 = -log Xi_2`` with
``Xi_2 = sum_P <psi|P|psi>^4 / 4``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qlinalg import ContractError, as_cvec
from .stabilizers import PauliString, pauli_stack

LOG_16_7 = math.log(16 / 7)


@dataclass(frozen=True)
class MagicValue:
    xi2: float
    m2: float


def _n_qubits(psi: np.ndarray) -> int:
    return {2: 1, 4: 2}[psi.shape[-1]]


def pauli_expectations(psi) -> np.ndarray:
    """Real expectation values ``<psi|P|psi>`` over all Pauli strings.

    Accepts a single state of shape ``(d,)`` or a batch ``(..., d)``; the
    Pauli axis is appended last.
    """
    psi = np.asarray(psi, dtype=complex)
    if psi.shape[-1] not in (2, 4):
        raise ContractError(f"state dimension must be 2 or 4, got {psi.shape[-1]}")
    paulis = pauli_stack(_n_qubits(psi))
    return np.einsum("...i,pij,...j->...p", psi.conj(), paulis, psi).real


def xi_p(psi, p: PauliString) -> float:
    psi = as_cvec(psi)
    if p.matrix.shape[0] != psi.size:
        raise ContractError("Pauli string and state act on different numbers of qubits")
    _check_normalized(psi)
    e = np.vdot(psi, p.matrix @ psi).real
    return float(e * e / psi.size)


def xi2(psi) -> np.ndarray | float:
    """``sum_P <psi|P|psi>^4 / d``; vectorized over leading axes."""
    psi = np.asarray(psi, dtype=complex)
    e = pauli_expectations(psi)
    out = np.sum(e**4, axis=-1) / psi.shape[-1]
    return float(out) if out.ndim == 0 else out


def sre(psi, alpha: int = 2) -> float:
    """Stabilizer alpha-Renyi entropy of a normalized pure state."""
    if int(alpha) != alpha or alpha < 2:
        raise ContractError(f"alpha must be an integer >= 2, got {alpha}")
    psi = as_cvec(psi)
    _check_normalized(psi)
    d = psi.size
    e = pauli_expectations(psi)
    total = np.sum(e ** (2 * alpha)) / d
    return float(math.log(total) / (1 - alpha)) + 0.0  # + 0.0 turns -0.0 into 0.0


def magic_value(psi) -> MagicValue:
    x = xi2(as_cvec(psi))
    return MagicValue(x, 0.0 - math.log(x))


def m2(psi) -> np.ndarray | float:
    """``-log Xi_2``, vectorized like :func:`xi2`."""
    return 0.0 - np.log(xi2(psi))


def max_magic_bound(d: int, alpha: int = 2, kind: str = "whmub_value") -> float:
    """Closed-form magic ceilings for dimension ``d``.

    ``sic_bound`` is the general SRE upper bound, saturated only by
    Weyl-Heisenberg SIC states; ``whmub_value`` is the SRE of the
    Weyl-Heisenberg MUB states, the true two-qubit maximum.
    """
    if d < 2 or d & (d - 1):
        raise ContractError(f"d must be a power of two >= 2, got {d}")
    if int(alpha) != alpha or alpha < 2:
        raise ContractError(f"alpha must be an integer >= 2, got {alpha}")
    if kind == "sic_bound":
        inner = (1 + (d - 1) * (d + 1) ** (1 - alpha)) / d
    elif kind == "whmub_value":
        inner = (1 + (d - 1) * float(d) ** (1 - alpha)) / d
    else:
        raise ContractError(f"unknown bound kind {kind!r}")
    return math.log(inner) / (1 - alpha)


def haar_states(rng: np.random.Generator, n: int, dim: int = 4) -> np.ndarray:
    """``n`` Haar-random pure states as rows, from normalized complex Gaussians."""
    z = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
    return z / np.linalg.norm(z, axis=1)[:, None]


def _check_normalized(psi):
    if abs(np.vdot(psi, psi).real - 1.0) > 1e-12:
        raise ContractError("state must be normalized")
