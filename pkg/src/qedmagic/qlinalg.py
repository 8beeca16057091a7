"""Small complex linear algebra for one- and two-qubit spin spaces.

Vectors and matrices are plain ``numpy`` arrays of dtype ``complex128``;
the helpers here only enforce the shapes the rest of the package relies on
(dimension 2 or 4) and the basis ordering
``{|00>, |01>, |10>, |11>} = {|uu>, |ud>, |du>, |dd>}`` with particle 1 as
the left tensor factor.
"""

from __future__ import annotations

import numpy as np

EPS_NORM = 1e-12
ALLOWED_DIMS = (2, 4)


class ContractError(ValueError):
    """An argument violates a shape or range precondition."""


class VanishingState(ArithmeticError):
    """The amplitude annihilates the initial state: nothing to normalize."""

    def __init__(self, norm_sq: float, scale: float = 1.0):
        self.norm_sq = norm_sq
        self.scale = scale
        super().__init__(f"state norm^2 {norm_sq:.3e} below {EPS_NORM:g} x scale {scale:.3e}")


def as_cvec(entries) -> np.ndarray:
    v = np.asarray(entries, dtype=complex).reshape(-1)
    if v.size not in ALLOWED_DIMS:
        raise ContractError(f"vector dimension must be 2 or 4, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise ContractError("vector has non-finite entries")
    return v


def as_cmat(entries) -> np.ndarray:
    m = np.asarray(entries, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in ALLOWED_DIMS:
        raise ContractError(f"matrix must be 2x2 or 4x4, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ContractError("matrix has non-finite entries")
    return m


def tensor(a, b) -> np.ndarray:
    """Kronecker product ``a (x) b`` of two single-qubit operators."""
    a, b = as_cmat(a), as_cmat(b)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ContractError("tensor expects two 2x2 matrices")
    return np.kron(a, b)


def normalize(v, scale: float = 1.0) -> np.ndarray:
    """Return ``v / |v|``.

    ``scale`` is the reference magnitude squared (typically the largest
    ``|A_ij|^2`` of the amplitude matrix that produced ``v``); states with
    ``|v|^2 < EPS_NORM * scale`` raise :class:`VanishingState`.
    """
    v = as_cvec(v)
    norm_sq = float(np.vdot(v, v).real)
    if norm_sq < EPS_NORM * scale or norm_sq == 0.0:
        raise VanishingState(norm_sq, scale)
    return v / np.sqrt(norm_sq)


def expectation(v, m) -> complex:
    """``<v|m|v>`` for a normalized vector ``v``."""
    v, m = as_cvec(v), as_cmat(m)
    if m.shape[0] != v.size:
        raise ContractError("dimension mismatch between state and operator")
    if abs(np.vdot(v, v).real - 1.0) > 1e-12:
        raise ContractError("expectation requires a normalized state")
    return complex(np.vdot(v, m @ v))
