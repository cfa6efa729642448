"""Concrete states and projectors for the 3x3 UPB construction.

Nothing here is random: every entry is a small rational times a fixed
normalization, so the whole pipeline is bit-reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .linalg import BipartiteOperator, eigvals_hermitian, kron

ORTHO_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray
    dA: int
    dB: int

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.shape != (self.dA * self.dB,):
            raise ValueError(f"expected {self.dA * self.dB} amplitudes, got shape {amp.shape}")
        object.__setattr__(self, "amplitudes", amp)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(self.norm - 1.0) <= tol

    def projector(self) -> BipartiteOperator:
        v = self.amplitudes
        return BipartiteOperator(np.outer(v, v.conj()), self.dA, self.dB)

    def inner(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class ProductVectorSet:
    """Unnormalized product vectors ``a (x) b`` with integer amplitudes."""

    pairs: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    def composed(self) -> list[np.ndarray]:
        return [np.kron(np.array(a, dtype=float), np.array(b, dtype=float)) for a, b in self.pairs]

    def gram(self) -> np.ndarray:
        vs = np.array(self.composed())
        return vs @ vs.T


def tiles_product_vectors() -> ProductVectorSet:
    """The five-member unextendible product basis on 3x3 ("Tiles")."""
    return ProductVectorSet(
        pairs=(
            ((1, 0, 0), (1, 1, 0)),
            ((1, 1, 0), (0, 0, 1)),
            ((0, 0, 1), (0, 1, 1)),
            ((0, 1, 1), (1, 0, 0)),
            ((1, -1, 1), (1, -1, 1)),
        )
    )


def complement_projector(vs: ProductVectorSet) -> BipartiteOperator:
    """Orthogonal projector onto the complement of the span of ``vs``.

    Built as ``I - sum_i |v_i><v_i| / <v_i|v_i>``, which requires the
    composed vectors to be mutually orthogonal.

    Raises
    ------
    ValueError
        If the vectors are linearly dependent or not mutually orthogonal.
    """
    if not vs.pairs:
        raise ValueError("empty product vector set")
    dA, dB = len(vs.pairs[0][0]), len(vs.pairs[0][1])
    vecs = vs.composed()
    gram = vs.gram()
    if np.sum(eigvals_hermitian(gram) > 1e-10) < len(vecs):
        raise ValueError("product vectors are linearly dependent")
    off = gram - np.diag(np.diag(gram))
    if np.max(np.abs(off)) > ORTHO_TOL:
        raise ValueError("product vectors are not mutually orthogonal")
    proj = np.eye(dA * dB, dtype=complex)
    for v in vecs:
        proj -= np.outer(v, v) / (v @ v)
    return BipartiteOperator(proj, dA, dB)


@lru_cache(maxsize=1)
def upb_projector() -> BipartiteOperator:
    proj = complement_projector(tiles_product_vectors())
    proj.matrix.setflags(write=False)
    return proj


def rho_b() -> BipartiteOperator:
    """The PPT bound entangled state, normalized complement projector."""
    return upb_projector() * 0.25


class FixedStates(NamedTuple):
    psi: StateVector
    phi: StateVector
    tau: StateVector
    P: BipartiteOperator


def fixed_states() -> FixedStates:
    """psi, the two-qubit Phi, the null vector tau and the 2x2 product projector P."""
    psi = np.zeros(9)
    psi[0], psi[1], psi[4] = 1.0, -1.0, -2.0
    phi = np.zeros(4)
    phi[0] = phi[3] = 1.0
    tau = np.zeros(9)
    tau[0] = tau[1] = 1.0
    local = np.diag([1.0, 1.0, 0.0])
    return FixedStates(
        psi=StateVector(psi / np.sqrt(6.0), 3, 3),
        phi=StateVector(phi / np.sqrt(2.0), 2, 2),
        tau=StateVector(tau / np.sqrt(2.0), 3, 3),
        P=BipartiteOperator(kron(local, local), 3, 3),
    )


def psi_projector() -> BipartiteOperator:
    return fixed_states().psi.projector()


def phi_projector() -> BipartiteOperator:
    return fixed_states().phi.projector()


def sigma(p: float) -> BipartiteOperator:
    """Mixture ``(1 - p) rho_b + p |psi><psi|`` for ``0 <= p <= 1``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return rho_b() * (1.0 - p) + psi_projector() * p
