"""Pauli strings and the 60 two-qubit stabilizer states.

The catalog order is the one used by every table in the scattering results
(ids 1..60), so it is stored verbatim rather than generated from a Clifford
orbit; :func:`verify_catalog` then checks it independently.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .qlinalg import ContractError, as_cvec

LABELS = "IXYZ"

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PauliString:
    labels: str
    matrix: np.ndarray = field(repr=False, compare=False)

    def __str__(self):
        return "".join(self.labels)


def pauli_strings(n: int) -> list[PauliString]:
    """All ``4**n`` phase-free Pauli strings, lexicographic in I<X<Y<Z.

    The leftmost label acts on particle 1.
    """
    if n not in (1, 2):
        raise ContractError(f"only n=1 or n=2 qubits supported, got {n}")
    out = []
    for labels in itertools.product(LABELS, repeat=n):
        m = PAULI_1Q[labels[0]]
        for lab in labels[1:]:
            m = np.kron(m, PAULI_1Q[lab])
        out.append(PauliString("".join(labels), m))
    return out


@lru_cache(maxsize=None)
def pauli_stack(n: int) -> np.ndarray:
    """Pauli matrices as one ``(4**n, 2**n, 2**n)`` array, same order."""
    stack = np.array([p.matrix for p in pauli_strings(n)])
    stack.setflags(write=False)
    return stack


def count_stabilizer_states(n: int) -> int:
    """Number of pure n-qubit stabilizer states, ``2^n prod_k (2^(n-k) + 1)``."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ContractError(f"n must be a positive integer, got {n!r}")
    if n > 4096:
        # result has ~n^2/2 bits; refuse before it becomes absurd to print
        raise OverflowError(f"stabilizer count for n={n} is out of supported range")
    total = 2**n
    for k in range(n):
        total *= 2 ** (n - k) + 1
    return total


# Coefficients (c1, c2, c3, c4) of c1|uu> + c2|ud> + c3|du> + c4|dd>, ids 1..60,
# up to normalization and overall phase.
_i = 1j
_COEFFS = (
    (1, 0, 0, 0), (0, 0, 0, 1), (0, 1, 0, 0), (0, 0, 1, 0),
    (1, 1, 1, 1), (1, -1, -1, 1), (1, -1, 1, -1), (1, 1, -1, -1),
    (1, _i, _i, -1), (1, -_i, -_i, -1), (1, -_i, _i, 1), (1, _i, -_i, 1),
    (1, _i, 1, _i), (1, -1, _i, -_i), (1, -_i, -1, _i), (1, 1, -_i, -_i),
    (1, -_i, 1, -_i), (1, -1, -_i, _i), (1, _i, -1, -_i), (1, 1, _i, _i),
    (1, -_i, 0, 0), (0, 1, 0, -_i), (0, 0, 1, _i), (1, 0, _i, 0),
    (1, _i, 0, 0), (0, 1, 0, _i), (0, 0, 1, -_i), (1, 0, -_i, 0),
    (1, 1, 0, 0), (0, 1, 0, 1), (0, 0, 1, -1), (1, 0, -1, 0),
    (1, -1, 0, 0), (0, 1, 0, -1), (0, 0, 1, 1), (1, 0, 1, 0),
    (1, 0, 0, 1), (1, 0, 0, -1), (1, 0, 0, _i), (1, 0, 0, -_i),
    (0, 1, 1, 0), (0, 1, -1, 0), (0, 1, _i, 0), (0, 1, -_i, 0),
    (1, -1, -1, -1), (1, -1, 1, 1), (1, 1, -1, 1), (1, 1, 1, -1),
    (1, -_i, -_i, 1), (1, _i, _i, 1), (1, -1, -_i, -_i), (1, -_i, -1, -_i),
    (1, -1, _i, _i), (1, _i, -1, _i), (1, -_i, 1, _i), (1, _i, 1, -_i),
    (1, 1, -_i, _i), (1, 1, _i, -_i), (1, -_i, _i, -1), (1, _i, -_i, -1),
)

N_PRODUCT = 36


@dataclass(frozen=True)
class StabilizerState:
    id: int
    coeffs: tuple
    state: np.ndarray = field(repr=False, compare=False)
    entangled: bool


def concurrence(psi) -> float:
    """Two-qubit pure-state concurrence ``2|psi_1 psi_4 - psi_2 psi_3|``."""
    psi = as_cvec(psi)
    if psi.size != 4:
        raise ContractError("concurrence needs a two-qubit state")
    psi = psi / np.linalg.norm(psi)
    return float(2 * abs(psi[0] * psi[3] - psi[1] * psi[2]))


@lru_cache(maxsize=None)
def stabilizer_catalog() -> tuple[StabilizerState, ...]:
    out = []
    for k, coeffs in enumerate(_COEFFS, start=1):
        v = np.array(coeffs, dtype=complex)
        # 1, 2 or 4 nonzero unit coefficients -> factor 1, 1/sqrt2, 1/2
        v = v / np.sqrt(np.count_nonzero(v))
        v.setflags(write=False)
        out.append(StabilizerState(k, tuple(complex(c) for c in coeffs), v, k > N_PRODUCT))
    return tuple(out)


def catalog_matrix() -> np.ndarray:
    """The 60 normalized states as rows of a ``(60, 4)`` array."""
    return np.array([s.state for s in stabilizer_catalog()])


def get_state(state_id: int) -> np.ndarray:
    if not 1 <= state_id <= len(_COEFFS):
        raise ContractError(f"stabilizer id must be in 1..60, got {state_id}")
    return stabilizer_catalog()[state_id - 1].state


# --- Clifford generators on two qubits (particle 1 = left factor) ---

H1Q = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S1Q = np.diag([1, 1j])
CNOT12 = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
CNOT21 = np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex)

CLIFFORD_GATES = {
    "H1": np.kron(H1Q, np.eye(2)),
    "H2": np.kron(np.eye(2), H1Q),
    "S1": np.kron(S1Q, np.eye(2)),
    "S2": np.kron(np.eye(2), S1Q),
    "CNOT12": CNOT12,
    "CNOT21": CNOT21,
}


@dataclass
class CatalogReport:
    n_states: int
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self):
        status = "PASS" if self.ok else "FAIL"
        yield f"catalog: {self.n_states} states, {status}"
        yield from (f"  {f}" for f in self.failures)


def _ray_index(vec, states, tol=1e-9):
    overlaps = np.abs(states.conj() @ vec)
    hits = np.flatnonzero(overlaps > 1 - tol)
    return int(hits[0]) if hits.size else None


def verify_catalog(states=None) -> CatalogReport:
    """Check a catalog of two-qubit states for the stabilizer-set properties.

    ``states`` defaults to the built-in catalog; pass a ``(k, 4)`` array (row
    ``j`` has id ``j + 1``) to check a modified set.
    """
    from .magic import sre  # local import: magic depends on this module

    if states is None:
        states = catalog_matrix()
    states = np.asarray(states, dtype=complex)
    states = states / np.linalg.norm(states, axis=1)[:, None]
    failures = []

    if len(states) != count_stabilizer_states(2):
        failures.append(f"count: expected {count_stabilizer_states(2)} states, got {len(states)}")

    for k, psi in enumerate(states, start=1):
        m2 = sre(psi, 2)
        if abs(m2) > 1e-12:
            failures.append(f"state {k}: M2 = {m2:.3e}, not a stabilizer state")

    overlaps = np.abs(states.conj() @ states.T)
    for a, b in zip(*np.triu_indices(len(states), k=1)):
        if overlaps[a, b] >= 1 - 1e-9:
            failures.append(f"states {a + 1} and {b + 1}: same ray")

    for k, psi in enumerate(states, start=1):
        c = concurrence(psi)
        expect_entangled = k > N_PRODUCT
        if expect_entangled and abs(c - 1) >= 1e-9:
            failures.append(f"state {k}: concurrence {c:.6f}, expected maximal")
        if not expect_entangled and c >= 1e-9:
            failures.append(f"state {k}: concurrence {c:.6f}, expected product")

    for name, gate in CLIFFORD_GATES.items():
        for k, psi in enumerate(states, start=1):
            if _ray_index(gate @ psi, states) is None:
                failures.append(f"state {k}: {name} maps it outside the set")

    return CatalogReport(len(states), failures)
