"""Quantum regression workbench.

Fock-basis continuous-variable simulation, the CVQNN and QBMLP regression
models, fuzzy scaling and two-tailed t-test reporting, backed by a C++ core.
"""

from ._core import (  # noqa: F401
    Beamsplitter,
    DegenerateScaleError,
    DegenerateStateError,
    DimensionError,
    Displacement,
    DivergenceError,
    Error,
    FockState,
    GateMatrix,
    Kerr,
    ParameterError,
    RangeError,
    Rotation,
    SchemaError,
    SizeError,
    Squeeze,
    apply_gate,
    build_gate,
    cvqnn,
    data,
    expectation_x,
    norm,
    photon_distribution,
    qbmlp,
    stats,
    vacuum_state,
)

__version__ = "0.1.0"
