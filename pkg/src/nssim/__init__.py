"""Three-qubit noiseless-subsystem simulation: algebras, channels, the code, tomography."""

from .algebra import OperatorSpan, build_axial_algebra, build_collective_algebra, commutant, span_of
from .channels import KrausChannel, apply, cascade, compose, crusher, weak_collective_dephasing
from .code import build_code_unitaries, build_ns_basis, qec_verify, restricted_action
from .experiments import ExperimentSpec, NoiseBlock, fit_exponential, run, weak_noise_sweep
from .tomography import FidelityReport, diagnostics, process_tomography

__version__ = "0.1.0"

__all__ = [
    "ExperimentSpec",
    "FidelityReport",
    "KrausChannel",
    "NoiseBlock",
    "OperatorSpan",
    "apply",
    "build_axial_algebra",
    "build_code_unitaries",
    "build_collective_algebra",
    "build_ns_basis",
    "cascade",
    "commutant",
    "compose",
    "crusher",
    "diagnostics",
    "fit_exponential",
    "process_tomography",
    "qec_verify",
    "restricted_action",
    "run",
    "span_of",
    "weak_collective_dephasing",
    "weak_noise_sweep",
]
