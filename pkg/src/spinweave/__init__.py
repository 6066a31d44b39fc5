"""Simulation and metrology for engineered spin networks.

Modules: ``network`` (graphs and builders), ``dynamics`` (excitation sectors and
propagation), ``protocols`` (loop experiments and error models), ``gates``
(dual-rail gates, CNOT, exchange, holonomy) and ``cli``.
"""
from .dynamics import (
    ExcitationBasis,
    Schedule,
    StateVector,
    SubspaceOperator,
    arrival_probability,
    assemble,
    evolve_time_dependent,
    propagate,
    run_schedule,
    site_amplitude_phase,
)
from .kernels import BACKEND
from .network import DualRailPorts, NetworkError, NetworkSpec, build_pst_chain
from .protocols import ErrorModel, ExperimentRecord

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DualRailPorts",
    "ErrorModel",
    "ExcitationBasis",
    "ExperimentRecord",
    "NetworkError",
    "NetworkSpec",
    "Schedule",
    "StateVector",
    "SubspaceOperator",
    "arrival_probability",
    "assemble",
    "build_pst_chain",
    "evolve_time_dependent",
    "propagate",
    "run_schedule",
    "site_amplitude_phase",
]
