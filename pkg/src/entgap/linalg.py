"""Dense complex linear algebra for small bipartite systems.

Operators are plain ``numpy`` complex arrays. A :class:`BipartiteOperator`
tags one with local dimensions ``(dA, dB)``; the global basis label is
``i = a * dB + b`` everywhere in the package.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

HERMITIAN_TOL = 1e-12
ZERO_EIG_TOL = 1e-10
JACOBI_REL_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True, eq=False)
class BipartiteOperator:
    """Square matrix on C^dA (x) C^dB."""

    matrix: np.ndarray
    dA: int
    dB: int

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got shape {m.shape}")
        if self.dA < 1 or self.dB < 1 or m.shape[0] != self.dA * self.dB:
            raise ValueError(
                f"matrix dimension {m.shape[0]} does not match dA*dB = {self.dA}*{self.dB}"
            )
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.dA * self.dB

    @property
    def dims(self) -> tuple[int, int]:
        return self.dA, self.dB

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return is_hermitian(self.matrix, tol)

    def __matmul__(self, other: "BipartiteOperator") -> "BipartiteOperator":
        _check_same_dims(self, other)
        return BipartiteOperator(self.matrix @ other.matrix, self.dA, self.dB)

    def __add__(self, other: "BipartiteOperator") -> "BipartiteOperator":
        _check_same_dims(self, other)
        return BipartiteOperator(self.matrix + other.matrix, self.dA, self.dB)

    def __sub__(self, other: "BipartiteOperator") -> "BipartiteOperator":
        _check_same_dims(self, other)
        return BipartiteOperator(self.matrix - other.matrix, self.dA, self.dB)

    def __mul__(self, scalar) -> "BipartiteOperator":
        return BipartiteOperator(self.matrix * scalar, self.dA, self.dB)

    __rmul__ = __mul__


class Spectrum(NamedTuple):
    """Eigenvalues sorted descending; ``eigenvectors[:, i]`` belongs to ``eigenvalues[i]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _check_same_dims(x: BipartiteOperator, y: BipartiteOperator) -> None:
    if x.dims != y.dims:
        raise ValueError(f"local dimensions differ: {x.dims} vs {y.dims}")


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and np.max(np.abs(a - a.conj().T), initial=0.0) <= tol


def dagger(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).conj().T


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, ``out[a1*dB + b1, a2*dB + b2] = a[a1, a2] * b[b1, b2]``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    na, nb = a.shape[0], b.shape[0]
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(na * nb, na * nb)


def partial_transpose(op: BipartiteOperator) -> BipartiteOperator:
    """Transpose the A-side indices: ``out[(a1,b1),(a2,b2)] = op[(a2,b1),(a1,b2)]``."""
    dA, dB = op.dims
    t = op.matrix.reshape(dA, dB, dA, dB).transpose(2, 1, 0, 3)
    return BipartiteOperator(t.reshape(dA * dB, dA * dB), dA, dB)


def partial_transpose_b(op: BipartiteOperator) -> BipartiteOperator:
    dA, dB = op.dims
    t = op.matrix.reshape(dA, dB, dA, dB).transpose(0, 3, 2, 1)
    return BipartiteOperator(t.reshape(dA * dB, dA * dB), dA, dB)


def _regroup(matrix: np.ndarray, dims_a: Sequence[int], dims_b: Sequence[int]) -> np.ndarray:
    """Reorder factors A1 B1 A2 B2 ... into (A1 A2 ...)(B1 B2 ...)."""
    k = len(dims_a)
    interleaved = [d for pair in zip(dims_a, dims_b) for d in pair]
    n = int(np.prod(interleaved))
    t = np.asarray(matrix).reshape(interleaved + interleaved)
    order = [2 * i for i in range(k)] + [2 * i + 1 for i in range(k)]
    perm = order + [2 * k + o for o in order]
    return t.transpose(perm).reshape(n, n)


def permute_to_copies_layout(matrix: np.ndarray, dA: int, dB: int, copies: int) -> BipartiteOperator:
    """Regroup the ``copies``-fold power of a (dA, dB) operator into (A-copies, B-copies).

    ``matrix`` is in the interleaved order that repeated :func:`kron` produces.
    """
    if copies not in (1, 2):
        raise ValueError(f"unsupported copy count {copies}; expected 1 or 2")
    n = (dA * dB) ** copies
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got {matrix.shape}")
    out = _regroup(matrix, [dA] * copies, [dB] * copies)
    return BipartiteOperator(out, dA**copies, dB**copies)


def tensor(x: BipartiteOperator, y: BipartiteOperator) -> BipartiteOperator:
    """``x (x) y`` as a bipartite operator on (A_x A_y) | (B_x B_y)."""
    out = _regroup(kron(x.matrix, y.matrix), [x.dA, y.dA], [x.dB, y.dB])
    return BipartiteOperator(out, x.dA * y.dA, x.dB * y.dB)


def sandwich(p: BipartiteOperator, op: BipartiteOperator) -> BipartiteOperator:
    """Return ``p @ op @ p^dagger``."""
    _check_same_dims(p, op)
    return BipartiteOperator(p.matrix @ op.matrix @ dagger(p.matrix), p.dA, p.dB)


@lru_cache(maxsize=None)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Tournament schedule: each round is a set of disjoint index pairs, and
    every pair ``p < q`` appears exactly once per sweep."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(x, y), max(x, y)) for x, y in pairs if max(x, y) < n]
        if pairs:
            ps, qs = zip(*pairs)
            rounds.append((np.array(ps), np.array(qs)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def eig_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> Spectrum:
    """Eigendecomposition of a hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation zeroes one off-diagonal pair ``(p, q)``: a diagonal phase
    makes ``a[p, q]`` real, then a real Givens rotation annihilates it.
    Pairs are visited in round-robin order; the disjoint rotations of one
    round commute and are applied together as a single unitary.
    Sweeps stop once the off-diagonal Frobenius mass drops below
    ``1e-14 * ||a||_F``.

    Raises
    ------
    ValueError
        If ``a`` is not square or not hermitian within ``tol``.
    RuntimeError
        If 100 sweeps do not reach convergence.
    """
    a = np.array(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if not is_hermitian(a, tol):
        raise ValueError("matrix is not hermitian within tolerance")
    a = 0.5 * (a + a.conj().T)
    eye = np.eye(n, dtype=complex)
    v = eye.copy()
    scale = np.linalg.norm(a)
    target = JACOBI_REL_TOL * scale
    skip = target / (2 * n)

    off_mask = ~np.eye(n, dtype=bool)

    def off_norm():
        return np.linalg.norm(a[off_mask])

    sweeps = 0
    while scale > 0 and off_norm() > target:
        if sweeps == JACOBI_MAX_SWEEPS:
            raise RuntimeError(f"Jacobi iteration did not converge in {JACOBI_MAX_SWEEPS} sweeps")
        sweeps += 1
        for ps, qs in _round_robin(n):
            apq = a[ps, qs]
            mag = np.abs(apq)
            # n^2 pivots below target / (2n) leave less than target of off-diagonal mass
            live = mag > skip
            if not live.any():
                continue
            safe = np.where(live, mag, 1.0)
            phase = np.where(live, apq / safe, 1.0)
            app, aqq = a[ps, ps].real, a[qs, qs].real
            theta = (aqq - app) / (2.0 * safe)
            t = np.where(live, np.sign(theta + (theta == 0)) / (np.abs(theta) + np.sqrt(theta * theta + 1.0)), 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            ec = phase.conj()
            # per pair: U = [[c, s], [-s conj(e), c conj(e)]]; a <- U^dagger a U
            g = eye.copy()
            g[ps, ps] = c
            g[ps, qs] = s
            g[qs, ps] = -s * ec
            g[qs, qs] = c * ec
            a = g.conj().T @ a @ g
            v = v @ g
            a[ps, qs] = 0.0
            a[qs, ps] = 0.0
            a[ps, ps] = app - t * mag
            a[qs, qs] = aqq + t * mag

    w = np.real(np.diag(a))
    order = np.argsort(-w, kind="stable")
    return Spectrum(w[order], v[:, order])


def eigvals_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    return eig_hermitian(a, tol).eigenvalues


def rank(a: np.ndarray, threshold: float = ZERO_EIG_TOL) -> int:
    """Number of eigenvalues of the hermitian ``a`` with modulus above ``threshold``."""
    return int(np.sum(np.abs(eigvals_hermitian(a)) > threshold))


def _check_unit(vec: np.ndarray, tol: float) -> np.ndarray:
    vec = np.asarray(vec, dtype=complex)
    if abs(np.linalg.norm(vec) - 1.0) > tol:
        raise ValueError("local vector must be normalized")
    return vec


def overlap_operator_b(pi: BipartiteOperator, b: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """A-side operator ``<b| pi |b>``, so that ``<a|out|a> = <ab|pi|ab>``."""
    b = _check_unit(b, tol)
    if b.shape != (pi.dB,):
        raise ValueError(f"B-side vector must have length {pi.dB}")
    t = pi.matrix.reshape(pi.dA, pi.dB, pi.dA, pi.dB)
    return np.einsum("j,ijkl,l->ik", b.conj(), t, b)


def overlap_operator_a(pi: BipartiteOperator, a: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """B-side operator ``<a| pi |a>``."""
    a = _check_unit(a, tol)
    if a.shape != (pi.dA,):
        raise ValueError(f"A-side vector must have length {pi.dA}")
    t = pi.matrix.reshape(pi.dA, pi.dB, pi.dA, pi.dB)
    return np.einsum("i,ijkl,k->jl", a.conj(), t, a)
