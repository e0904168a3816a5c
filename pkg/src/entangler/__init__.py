"""Two qubits in a heavily damped, driven cavity: collective decay plus a
small detuning asymmetry relaxes the atoms to an almost maximally entangled
pure state.  This package simulates that scheme at desk scale.

Layers
------
qops        complex operator algebra on small composite Hilbert spaces
schedules   time profiles for the detuning used to break the symmetry
model       physical parameters, the exact atoms+cavity Lindblad model,
            its reduced two-qubit (Dicke-type) model, analytic steady state
dynamics    Liouvillian matrices, time integration, null-space steady states
analysis    concurrence, fidelity, trajectory comparison, quadratic fits
experiments named sweeps / reproductions with CSV output (CLI: ``entangler``)
"""

__version__ = "0.1.0"

from . import analysis, dynamics, model, qops, schedules  # noqa: F401
