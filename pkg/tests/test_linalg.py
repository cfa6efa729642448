import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from entgap import model
from entgap.linalg import (
    BipartiteOperator,
    eig_hermitian,
    eigvals_hermitian,
    kron,
    overlap_operator_a,
    overlap_operator_b,
    partial_transpose,
    partial_transpose_b,
    permute_to_copies_layout,
    sandwich,
    tensor,
)


def random_hermitian(rng, n):
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (x + x.conj().T)


finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@st.composite
def hermitian_matrices(draw, n=None):
    n = n or draw(st.integers(1, 9))
    re = draw(arrays(np.float64, (n, n), elements=finite))
    im = draw(arrays(np.float64, (n, n), elements=finite))
    x = re + 1j * im
    return 0.5 * (x + x.conj().T)


def pt_loop(m, dA, dB):
    """Index-by-index partial transpose on A."""
    out = np.zeros_like(m)
    for a1, b1, a2, b2 in itertools.product(range(dA), range(dB), range(dA), range(dB)):
        out[a1 * dB + b1, a2 * dB + b2] = m[a2 * dB + b1, a1 * dB + b2]
    return out


# --- kron -----------------------------------------------------------------


def test_kron_identity():
    assert np.array_equal(kron(np.eye(2), np.eye(3)), np.eye(6))


def test_kron_diagonal():
    assert np.array_equal(kron(np.diag([1, 2]), np.diag([3, 4])), np.diag([3, 4, 6, 8]))


def test_kron_index_convention():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((2, 2))
    b = rng.standard_normal((3, 3))
    k = kron(a, b)
    for a1, a2, b1, b2 in itertools.product(range(2), range(2), range(3), range(3)):
        assert k[a1 * 3 + b1, a2 * 3 + b2] == a[a1, a2] * b[b1, b2]


def test_kron_trace_with_phi():
    k = kron(model.sigma(0.3).matrix, model.phi_projector().matrix)
    assert np.trace(k) == pytest.approx(1.0, abs=1e-12)


def test_kron_associative_exact_on_integers():
    rng = np.random.default_rng(3)
    x, y, z = (rng.integers(-9, 10, (2, 2)) + 1j * rng.integers(-9, 10, (2, 2)) for _ in range(3))
    assert np.array_equal(kron(kron(x, y), z), kron(x, kron(y, z)))


@settings(max_examples=30, deadline=None)
@given(hermitian_matrices(n=2), hermitian_matrices(n=3))
def test_kron_trace_multiplicative(x, y):
    assert np.trace(kron(x, y)) == pytest.approx(np.trace(x) * np.trace(y), abs=1e-9)


# --- partial transpose ----------------------------------------------------


def test_partial_transpose_matches_loop_oracle():
    rng = np.random.default_rng(1)
    for dA, dB in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        m = random_hermitian(rng, dA * dB)
        pt = partial_transpose(BipartiteOperator(m, dA, dB)).matrix
        assert np.array_equal(pt, pt_loop(m, dA, dB))


def test_partial_transpose_diagonal_fixed():
    d = np.diag(np.arange(9.0)) / 36
    assert np.array_equal(partial_transpose(BipartiteOperator(d, 3, 3)).matrix, d)


def test_partial_transpose_phi_spectrum():
    # (|Phi><Phi|)^{T_A} is SWAP / 2, written out by hand
    swap_half = 0.5 * np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    pt = partial_transpose(model.phi_projector()).matrix
    assert np.allclose(pt, swap_half, atol=1e-15)
    assert np.allclose(eigvals_hermitian(pt), [0.5, 0.5, 0.5, -0.5], atol=1e-12)


def test_partial_transpose_rho_b_exact():
    rho = model.rho_b()
    assert np.max(np.abs(partial_transpose(rho).matrix - rho.matrix)) <= 1e-12


def test_partial_transpose_dimension_mismatch():
    with pytest.raises(ValueError):
        BipartiteOperator(np.eye(9), 2, 4)


@settings(max_examples=40, deadline=None)
@given(hermitian_matrices(n=6))
def test_partial_transpose_involution_trace_hermiticity(m):
    op = BipartiteOperator(m, 2, 3)
    pt = partial_transpose(op)
    assert np.array_equal(partial_transpose(pt).matrix, op.matrix)
    assert pt.trace() == pytest.approx(op.trace(), abs=1e-12)
    assert pt.is_hermitian()


@pytest.mark.parametrize("p", [0.0, 0.01, 0.3, 0.7, 1.0])
def test_side_independent_spectrum(p):
    s = model.sigma(p)
    wa = eigvals_hermitian(partial_transpose(s).matrix)
    wb = eigvals_hermitian(partial_transpose_b(s).matrix)
    assert np.allclose(wa, wb, atol=1e-12)


# --- permutation / tensor ---------------------------------------------------


def test_permute_single_copy_is_identity():
    m = model.sigma(0.2).matrix
    out = permute_to_copies_layout(m, 3, 3, 1)
    assert np.array_equal(out.matrix, m)
    assert out.dims == (3, 3)


def test_permute_basis_projector():
    e = np.eye(4)
    p01, p10 = np.outer(e[1], e[1]), np.outer(e[2], e[2])  # |01>, |10> with dA = dB = 2
    out = permute_to_copies_layout(kron(p01, p10), 2, 2, 2)
    assert out.dims == (4, 4)
    # A-side copies (0, 1) -> label 1; B-side copies (1, 0) -> label 2
    idx = 1 * 4 + 2
    expected = np.zeros((16, 16))
    expected[idx, idx] = 1.0
    assert np.array_equal(out.matrix, expected)


def test_permute_matches_loop_oracle():
    rng = np.random.default_rng(5)
    x = random_hermitian(rng, 4)
    y = random_hermitian(rng, 4)
    out = permute_to_copies_layout(kron(x, y), 2, 2, 2).matrix
    xt = x.reshape(2, 2, 2, 2)
    yt = y.reshape(2, 2, 2, 2)
    for a1, a2, b1, b2, c1, c2, d1, d2 in itertools.product(range(2), repeat=8):
        # rows (a1 a2 | b1 b2), cols (c1 c2 | d1 d2)
        row = (a1 * 2 + a2) * 4 + (b1 * 2 + b2)
        col = (c1 * 2 + c2) * 4 + (d1 * 2 + d2)
        assert abs(out[row, col] - xt[a1, b1, c1, d1] * yt[a2, b2, c2, d2]) <= 1e-15


def test_permute_preserves_spectrum(pi_b):
    doubled = kron(pi_b.matrix, pi_b.matrix)
    before = eigvals_hermitian(doubled)
    after = eigvals_hermitian(permute_to_copies_layout(doubled, 3, 3, 2).matrix)
    assert np.max(np.abs(before - after)) <= 1e-12


def test_permute_unsupported_copies():
    with pytest.raises(ValueError):
        permute_to_copies_layout(np.eye(729), 3, 3, 3)


def test_tensor_mixed_dims():
    x, y = model.sigma(0.3), model.phi_projector()
    t = tensor(x, y)
    assert t.dims == (6, 6)
    xt, yt = x.matrix.reshape(3, 3, 3, 3), y.matrix.reshape(2, 2, 2, 2)
    for a1, b1, c1, d1 in itertools.product(range(3), repeat=4):
        for a2, b2, c2, d2 in itertools.product(range(2), repeat=4):
            row = (a1 * 2 + a2) * 6 + (b1 * 2 + b2)
            col = (c1 * 2 + c2) * 6 + (d1 * 2 + d2)
            assert abs(t.matrix[row, col] - xt[a1, b1, c1, d1] * yt[a2, b2, c2, d2]) <= 1e-15


# --- eigensolver ------------------------------------------------------------


def test_eig_diagonal():
    spec = eig_hermitian(np.diag([3.0, 1.0, 2.0]))
    assert np.array_equal(spec.eigenvalues, [3.0, 2.0, 1.0])


def test_eig_projector(pi_b):
    w = eig_hermitian(pi_b.matrix).eigenvalues
    assert np.allclose(w, [1, 1, 1, 1, 0, 0, 0, 0, 0], atol=1e-11)


@pytest.mark.parametrize("n", [1, 2, 3, 8, 9, 36])
def test_eig_against_lapack(n):
    rng = np.random.default_rng(n)
    h = random_hermitian(rng, n)
    spec = eig_hermitian(h)
    assert np.allclose(spec.eigenvalues, np.linalg.eigvalsh(h)[::-1], atol=1e-11)
    v, w = spec.eigenvectors, spec.eigenvalues
    assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - h)) <= 1e-11
    assert np.max(np.abs(v.conj().T @ v - np.eye(n))) <= 1e-11


def test_eig_seeded_9x9_residual():
    rng = np.random.default_rng(2024)
    h = random_hermitian(rng, 9)
    w, v = eig_hermitian(h)
    assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - h)) <= 1e-11


def test_eig_deterministic():
    h = random_hermitian(np.random.default_rng(7), 9)
    s1, s2 = eig_hermitian(h), eig_hermitian(h)
    assert np.array_equal(s1.eigenvalues, s2.eigenvalues)
    assert np.array_equal(s1.eigenvectors, s2.eigenvectors)


def test_eig_rejects_non_hermitian():
    with pytest.raises(ValueError):
        eig_hermitian(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_eig_zero_matrix():
    w, v = eig_hermitian(np.zeros((4, 4)))
    assert np.array_equal(w, np.zeros(4))
    assert np.array_equal(v, np.eye(4))


@settings(max_examples=60, deadline=None)
@given(hermitian_matrices())
def test_eig_invariants(h):
    w, v = eig_hermitian(h)
    scale = max(1.0, np.max(np.abs(h)))
    assert np.all(np.diff(w) <= 0)
    assert abs(np.sum(w) - np.trace(h).real) <= 1e-11 * scale
    assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - h)) <= 1e-11 * scale
    assert np.max(np.abs(v.conj().T @ v - np.eye(len(h)))) <= 1e-11


# --- sandwich / overlap operators --------------------------------------------


def test_sandwich_identity():
    s = model.sigma(0.4)
    out = sandwich(BipartiteOperator(np.eye(9), 3, 3), s)
    assert np.array_equal(out.matrix, s.matrix)


def test_sandwich_annihilates_tau():
    fs = model.fixed_states()
    out = sandwich(fs.P, model.rho_b())
    assert np.linalg.norm(out.matrix @ fs.tau.amplitudes) <= 1e-12


def test_sandwich_trace_below_one():
    fs = model.fixed_states()
    out = sandwich(fs.P, model.sigma(0.015))
    tr = out.trace().real
    assert 0.0 < tr < 1.0
    assert out.is_hermitian()


def test_sandwich_dimension_mismatch():
    with pytest.raises(ValueError):
        sandwich(BipartiteOperator(np.eye(4), 2, 2), model.sigma(0.1))


def test_overlap_operator_identity():
    b = np.array([0.6, 0.0, 0.8j])
    assert np.allclose(overlap_operator_b(BipartiteOperator(np.eye(9), 3, 3), b), np.eye(3))


def test_overlap_operator_on_pi_b(pi_b):
    m = overlap_operator_b(pi_b, np.array([0, 0, 1.0]))
    w = eigvals_hermitian(m)
    assert np.all(w >= -1e-12) and np.all(w <= 1 + 1e-12)


def test_overlap_operator_matches_expectation(pi_b):
    rng = np.random.default_rng(11)
    for _ in range(20):
        a = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        b = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        a /= np.linalg.norm(a)
        b /= np.linalg.norm(b)
        ab = np.kron(a, b)
        direct = np.vdot(ab, pi_b.matrix @ ab)
        assert np.vdot(a, overlap_operator_b(pi_b, b) @ a) == pytest.approx(direct, abs=1e-13)
        assert np.vdot(b, overlap_operator_a(pi_b, a) @ b) == pytest.approx(direct, abs=1e-13)


def test_overlap_operator_requires_unit_vector(pi_b):
    with pytest.raises(ValueError):
        overlap_operator_b(pi_b, np.array([1.0, 1.0, 0.0]))


def test_overlap_operators_agree_at_fixed_point(pi_b, seesaw_200):
    a, b = seesaw_200.a_opt, seesaw_200.b_opt
    top_a = eigvals_hermitian(overlap_operator_b(pi_b, b))[0]
    top_b = eigvals_hermitian(overlap_operator_a(pi_b, a))[0]
    assert top_a == pytest.approx(top_b, abs=1e-9)
