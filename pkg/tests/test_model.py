import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entgap import model
from entgap.linalg import eigvals_hermitian, partial_transpose, sandwich, rank


def test_first_and_last_pairs():
    pairs = model.tiles_product_vectors().pairs
    assert len(pairs) == 5
    assert pairs[0] == ((1, 0, 0), (1, 1, 0))
    assert pairs[4] == ((1, -1, 1), (1, -1, 1))
    assert all(set(a) | set(b) <= {-1, 0, 1} for a, b in pairs)


def test_gram_is_diagonal():
    vecs = model.tiles_product_vectors().composed()
    for i, u in enumerate(vecs):
        for j, v in enumerate(vecs):
            if i != j:
                assert abs(u @ v) <= 1e-12


def test_projector_annihilates_members(pi_b):
    for v in model.tiles_product_vectors().composed():
        assert np.linalg.norm(pi_b.matrix @ v) <= 1e-12


def test_projector_properties(pi_b):
    m = pi_b.matrix
    assert pi_b.is_hermitian()
    assert np.max(np.abs(m @ m - m)) <= 1e-12
    assert pi_b.trace().real == pytest.approx(4.0, abs=1e-11)
    assert np.max(np.abs(partial_transpose(pi_b).matrix - m)) <= 1e-12


def test_complement_rejects_dependent_set():
    vs = model.ProductVectorSet(pairs=(((1, 0), (1, 0)), ((2, 0), (1, 0))))
    with pytest.raises(ValueError, match="dependent"):
        model.complement_projector(vs)


def test_complement_rejects_non_orthogonal_set():
    vs = model.ProductVectorSet(pairs=(((1, 0), (1, 0)), ((1, 1), (1, 0))))
    with pytest.raises(ValueError, match="orthogonal"):
        model.complement_projector(vs)


def test_sigma_endpoints(pi_b):
    w0 = eigvals_hermitian(model.sigma(0.0).matrix)
    assert np.allclose(w0, [0.25] * 4 + [0.0] * 5, atol=1e-12)
    assert np.allclose(model.sigma(0.0).matrix, pi_b.matrix / 4, atol=1e-15)
    s1 = model.sigma(1.0).matrix
    w1 = eigvals_hermitian(s1)
    assert np.allclose(w1, [1.0] + [0.0] * 8, atol=1e-12)
    assert np.allclose(s1 @ s1, s1, atol=1e-12)


def test_sigma_half_supported_on_v(pi_b):
    s = model.sigma(0.5).matrix
    assert np.max(np.abs(pi_b.matrix @ s @ pi_b.matrix - s)) <= 1e-12


@pytest.mark.parametrize("p", [-0.1, 1.5])
def test_sigma_out_of_range(p):
    with pytest.raises(ValueError):
        model.sigma(p)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 1.0))
def test_sigma_is_a_state_on_an_affine_path(p):
    s = model.sigma(p)
    s0, s1 = model.sigma(0.0).matrix, model.sigma(1.0).matrix
    assert np.max(np.abs(s.matrix - (s0 + p * (s1 - s0)))) <= 1e-15
    assert s.is_hermitian()
    assert s.trace().real == pytest.approx(1.0, abs=1e-12)
    assert eigvals_hermitian(s.matrix)[-1] >= -1e-12


def test_fixed_states_normalized():
    fs = model.fixed_states()
    for v in (fs.psi, fs.phi, fs.tau):
        assert v.is_normalized()
    assert (fs.psi.dA, fs.psi.dB) == (3, 3)
    assert (fs.phi.dA, fs.phi.dB) == (2, 2)
    m = fs.P.matrix
    assert np.array_equal(m @ m, m)
    assert fs.P.trace().real == 4.0


def test_psi_orthogonal_to_upb_members():
    psi = model.fixed_states().psi.amplitudes
    for v in model.tiles_product_vectors().composed():
        assert abs(np.vdot(v, psi)) <= 1e-12


def test_tau_psi_orthogonal():
    fs = model.fixed_states()
    assert abs(fs.tau.inner(fs.psi)) <= 1e-12


def test_p_fixes_psi():
    fs = model.fixed_states()
    assert np.linalg.norm(fs.P.matrix @ fs.psi.amplitudes - fs.psi.amplitudes) <= 1e-15


def test_psi_in_v(pi_b):
    psi = model.fixed_states().psi.amplitudes
    assert np.linalg.norm(pi_b.matrix @ psi - psi) <= 1e-12


def test_projected_rho_b_rank_three_with_null_tau():
    fs = model.fixed_states()
    block = sandwich(fs.P, model.rho_b())
    assert np.max(np.abs(partial_transpose(block).matrix - block.matrix)) <= 1e-12
    assert rank(block.matrix) == 3
    assert np.linalg.norm(block.matrix @ fs.tau.amplitudes) <= 1e-12
    # the kernel inside range(P) is one-dimensional and spanned by tau
    p_range = np.eye(9)[:, [0, 1, 3, 4]]
    restricted = p_range.T @ block.matrix @ p_range
    assert rank(restricted) == 3


def test_state_vector_shape_check():
    with pytest.raises(ValueError):
        model.StateVector(np.ones(5), 2, 2)
