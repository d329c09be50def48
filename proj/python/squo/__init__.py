"""Anisotropic XYZ spin-1/2 chains: ground-state factorization, entanglement
excitation energies, and field sweeps.

Thin wrapper over the C++ core; all heavy lifting happens in `squo._core`
with the GIL released.
"""

from ._core import (
    BracketError,
    SolverFailure,
    factorization_field,
    find_factorization,
    point,
    sweep,
    vn_entropy,
)

__all__ = [
    "BracketError",
    "SolverFailure",
    "factorization_field",
    "find_factorization",
    "point",
    "sweep",
    "vn_entropy",
]
