"""Distillable states with an entanglement cost above their distillable entanglement.

Builds the 3x3 family ``sigma(p) = (1 - p) rho_b + p |psi><psi|`` on top of the
Tiles unextendible product basis and computes the bounds that separate the
two asymptotic measures.
"""
from .linalg import BipartiteOperator, Spectrum, eig_hermitian, kron, partial_transpose, tensor
from .measures import distillability_witness, log_negativity, negativity, schmidt
from .model import fixed_states, rho_b, sigma, upb_projector

__version__ = "0.1.0"

__all__ = [
    "BipartiteOperator",
    "Spectrum",
    "distillability_witness",
    "eig_hermitian",
    "fixed_states",
    "kron",
    "log_negativity",
    "negativity",
    "partial_transpose",
    "rho_b",
    "schmidt",
    "sigma",
    "tensor",
    "upb_projector",
]
