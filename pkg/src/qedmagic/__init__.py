"""Magic (stabilizer Renyi entropy) generated in QED 2 -> 2 scattering of spins."""

from .engine import Process, Regime, amplitude_matrix, engine_point
from .limits import limit_matrix
from .magic import m2, max_magic_bound, sre, xi2
from .stabilizers import get_state, stabilizer_catalog

__version__ = "0.1.0"

__all__ = [
    "Process", "Regime", "amplitude_matrix", "engine_point", "limit_matrix",
    "m2", "max_magic_bound", "sre", "xi2", "get_state", "stabilizer_catalog",
]
