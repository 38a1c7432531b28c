"""Petermann factors, phase rigidities and spectral response strength near exceptional points."""

__version__ = "0.1.0"

from .ensemble import EnsembleConfig, random_ep_hamiltonian, random_unitary, run_experiment
from .estimator import EstimateConfig, XiEstimator, estimate_xi
from .exceptions import (
    DivergesAtEP,
    EPError,
    InternalError,
    InvalidInput,
    NoEPCandidate,
    NoSolution,
    NotAnEP,
    PairingError,
    TrackingError,
)
from .hatano import HatanoParams, build_model, eigenvector_rigidity, exact_rigidity, exact_shift, rigidity_sweep
from .jordan import EPSpec, JordanChain, build_chain, check_left_orthogonality, xi_from_chain
from .linalg import EigenSystem, eig_full, solve_least_norm, spectral_norm
from .modes import BiorthogonalMode, analyze_modes, perturbation_derivative_check
from .response import bounds, predicted_petermann, predicted_rigidity, response_report, xi_exact

__all__ = [
    "BiorthogonalMode",
    "DivergesAtEP",
    "EPError",
    "EPSpec",
    "EigenSystem",
    "EnsembleConfig",
    "EstimateConfig",
    "HatanoParams",
    "InternalError",
    "InvalidInput",
    "JordanChain",
    "NoEPCandidate",
    "NoSolution",
    "NotAnEP",
    "PairingError",
    "TrackingError",
    "XiEstimator",
    "analyze_modes",
    "bounds",
    "build_chain",
    "build_model",
    "check_left_orthogonality",
    "eig_full",
    "estimate_xi",
    "exact_rigidity",
    "eigenvector_rigidity",
    "exact_shift",
    "rigidity_sweep",
    "perturbation_derivative_check",
    "predicted_petermann",
    "predicted_rigidity",
    "random_ep_hamiltonian",
    "random_unitary",
    "response_report",
    "run_experiment",
    "solve_least_norm",
    "spectral_norm",
    "xi_exact",
    "xi_from_chain",
]
