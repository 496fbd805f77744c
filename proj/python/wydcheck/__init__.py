"""Python access to the wydcheck trace-algebra and uncertainty routines.

Operators are built from a TraceAlgebra and one complex numpy array per block.
Library errors raise WydError with args (message, kind).
"""

from ._core import (
    BlockOperator,
    DensityOperator,
    Tolerances,
    TraceAlgebra,
    WydError,
    eigendecompose,
    fractional_power,
    functional_calculus,
    g_curve,
    generate_trial,
    kernel,
    kosaki_gap,
    kosaki_gap_via_measure,
    l2_norm,
    measure_atoms,
    qubit_instance,
    read_instance,
    run_verify,
    trace,
    validate_density,
    wyd_pairing,
)

__all__ = [
    "BlockOperator",
    "DensityOperator",
    "Tolerances",
    "TraceAlgebra",
    "WydError",
    "eigendecompose",
    "fractional_power",
    "functional_calculus",
    "g_curve",
    "generate_trial",
    "kernel",
    "kosaki_gap",
    "kosaki_gap_via_measure",
    "l2_norm",
    "measure_atoms",
    "qubit_instance",
    "read_instance",
    "run_verify",
    "trace",
    "validate_density",
    "wyd_pairing",
]
