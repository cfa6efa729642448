"""Entanglement measures and criteria, all in ebits (log base 2)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    ZERO_EIG_TOL,
    BipartiteOperator,
    eigvals_hermitian,
    kron,
    partial_transpose,
    sandwich,
)
from .model import StateVector

WITNESS_TOL = 1e-10
STATE_TOL = 1e-10
EC_OVERLAP_BOUND = 0.99


@dataclass(frozen=True)
class WitnessReport:
    min_eigenvalue: float
    is_distillable_certificate: bool
    projected_rank: int


@dataclass(frozen=True)
class SchmidtData:
    coefficients: np.ndarray
    entropy_ebits: float


def _check_state(rho: BipartiteOperator) -> None:
    if not rho.is_hermitian():
        raise ValueError("density matrix must be hermitian")
    if abs(rho.trace() - 1.0) > STATE_TOL:
        raise ValueError(f"density matrix must have unit trace, got {rho.trace():.3g}")


def pt_spectrum(rho: BipartiteOperator) -> np.ndarray:
    """Eigenvalues of the partial transpose, descending."""
    return eigvals_hermitian(partial_transpose(rho).matrix)


def negativity(rho: BipartiteOperator) -> float:
    """Absolute sum of the negative eigenvalues of ``rho^{T_A}``."""
    _check_state(rho)
    w = pt_spectrum(rho)
    return float(-np.sum(w[w < 0.0]))


def log_negativity(rho: BipartiteOperator) -> float:
    return float(np.log2(1.0 + 2.0 * negativity(rho)))


def is_ppt(rho: BipartiteOperator, tol: float = WITNESS_TOL) -> bool:
    if not rho.is_hermitian():
        raise ValueError("operator must be hermitian")
    return bool(pt_spectrum(rho)[-1] >= -tol)


def _check_local_projector(p: BipartiteOperator, tol: float = 1e-10) -> None:
    """Require ``p = pA (x) pB`` with rank-2 projectors on both sides."""
    m = p.matrix
    if not p.is_hermitian() or np.max(np.abs(m @ m - m)) > tol:
        raise ValueError("P must be a hermitian projector")
    t = m.reshape(p.dA, p.dB, p.dA, p.dB)
    red_a = np.einsum("ijkj->ik", t)
    red_b = np.einsum("ijil->jl", t)
    total = np.trace(m).real
    if total < 0.5 or np.max(np.abs(kron(red_a, red_b) / total - m)) > tol:
        raise ValueError("P must be a product of local projectors")
    rank_b = np.trace(red_a @ red_a).real / np.trace(red_a).real
    rank_a = total / rank_b
    if abs(rank_a - 2.0) > tol or abs(rank_b - 2.0) > tol:
        raise ValueError(f"P must have local rank 2 on each side, got ({rank_a:.3g}, {rank_b:.3g})")


def distillability_witness(
    rho: BipartiteOperator, P: BipartiteOperator, tol: float = WITNESS_TOL
) -> WitnessReport:
    """Minimum eigenvalue of ``(P rho P^dagger)^{T_A}`` on the full space.

    A value below ``-tol`` certifies that ``rho`` is distillable.
    """
    _check_local_projector(P)
    w = eigvals_hermitian(partial_transpose(sandwich(P, rho)).matrix)
    n = float(w[-1])
    return WitnessReport(
        min_eigenvalue=n,
        is_distillable_certificate=n < -tol,
        projected_rank=int(np.sum(np.abs(w) > ZERO_EIG_TOL)),
    )


def schmidt(psi: StateVector) -> SchmidtData:
    """Schmidt coefficients (descending) and entanglement entropy of a pure state."""
    norm = psi.norm
    if norm == 0.0:
        raise ValueError("zero vector has no Schmidt decomposition")
    if not psi.is_normalized():
        raise ValueError("state must be normalized")
    amp = psi.amplitudes.reshape(psi.dA, psi.dB)
    reduced = amp @ amp.conj().T if psi.dA <= psi.dB else amp.conj().T @ amp
    lam = np.clip(eigvals_hermitian(reduced), 0.0, None)
    coeffs = np.sqrt(lam)
    coeffs = coeffs[coeffs > ZERO_EIG_TOL]
    lam = coeffs**2
    entropy = float(-np.sum(lam * np.log2(lam)))
    return SchmidtData(coefficients=coeffs, entropy_ebits=max(entropy, 0.0))


def ec_lower_bound_from_overlap(alpha: float) -> float:
    """Entanglement-cost floor ``-log2(alpha)`` from a product-overlap bound."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    return float(-np.log2(alpha))
