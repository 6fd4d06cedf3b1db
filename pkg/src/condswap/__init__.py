"""Exact gate library and LOCC simulator built around an If-Then SWAP gate."""
from .statevec import (
    MeasurementOutcome,
    NonUnitaryResult,
    QubitLimitError,
    StateVector,
    Unitary,
    apply,
    basis_state,
    enumerate_branches,
    fidelity,
    measure,
    tensor,
)

__version__ = "0.1.0"
