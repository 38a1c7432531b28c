import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eprigidity.exceptions import InvalidInput, NotAnEP
from eprigidity.hatano import HatanoParams, build_model
from eprigidity.jordan import EPSpec, build_chain, check_left_orthogonality, left_ep_vector, xi_from_chain
from eprigidity.linalg import spectral_norm
from eprigidity.response import xi_exact

from conftest import random_ep

ep_seeds = st.integers(0, 2**32 - 1)


def jordan(n, E=0.0):
    return E * np.eye(n) + np.eye(n, k=1)


def test_canonical_block_chain_is_standard_basis():
    chain = build_chain(EPSpec(jordan(3), 0))
    np.testing.assert_allclose(chain.vectors, np.eye(3), atol=1e-14)
    assert xi_from_chain(chain) == pytest.approx(1.0, rel=1e-14)


def test_hatano_chain():
    H_EP, _ = build_model(HatanoParams(n=3, A=1))
    chain = build_chain(EPSpec(H_EP, 0))
    np.testing.assert_allclose(np.abs(chain.vectors), np.eye(3), atol=1e-14)


def test_hatano_xi_from_chain_a2():
    # hand solve: J_1 = e_1, J_2 = e_2/2, J_3 = e_3/4
    H_EP, _ = build_model(HatanoParams(n=3, A=2))
    chain = build_chain(EPSpec(H_EP, 0))
    assert np.linalg.norm(chain[3]) == pytest.approx(0.25, rel=1e-14)
    assert xi_from_chain(chain) == pytest.approx(4.0, rel=1e-14)


def test_phase_convention(rng):
    chain = build_chain(random_ep(4, rng))
    J1 = chain[1]
    k = np.argmax(np.abs(J1))
    assert J1[k].imag == pytest.approx(0, abs=1e-15) and J1[k].real > 0


@settings(max_examples=40, deadline=None)
@given(ep_seeds, st.integers(2, 6))
def test_chain_invariants(seed, n):
    ep = random_ep(n, np.random.default_rng(seed))
    chain = build_chain(ep)
    scale = spectral_norm(ep.N)
    assert chain.chain_residuals().max() <= 1e-9 * scale
    assert abs(np.vdot(chain[1], chain[1]) - 1) <= 1e-10
    assert chain.last_overlaps().max() <= 1e-10


@settings(max_examples=40, deadline=None)
@given(ep_seeds, st.integers(2, 6))
def test_two_xi_definitions_agree(seed, n):
    ep = random_ep(n, np.random.default_rng(seed))
    xi_norm = xi_exact(ep)
    assert abs(xi_from_chain(build_chain(ep)) - xi_norm) <= 1e-9 * xi_norm


@settings(max_examples=30, deadline=None)
@given(ep_seeds, st.integers(2, 5), st.complex_numbers(min_magnitude=0.1, max_magnitude=10))
def test_xi_scaling(seed, n, c):
    ep = random_ep(n, np.random.default_rng(seed))
    scaled = EPSpec(ep.E_EP * np.eye(n) + c * ep.N, ep.E_EP, n)
    ratio = xi_from_chain(build_chain(scaled)) / xi_from_chain(build_chain(ep))
    assert ratio == pytest.approx(abs(c) ** (n - 1), rel=1e-10)


def test_left_orthogonality_jordan_block_n2():
    chain = build_chain(EPSpec(jordan(2), 0))
    rep = check_left_orthogonality(chain, L_EP=[0, 1])
    assert rep.overlaps[0] == 0 and rep.overlaps[1] == pytest.approx(1.0)
    assert rep.passed


def test_left_orthogonality_hatano():
    H_EP, _ = build_model(HatanoParams(n=3, A=1))
    chain = build_chain(EPSpec(H_EP, 0))
    rep = check_left_orthogonality(chain)
    assert rep.overlaps[:2].max() <= 1e-15
    assert rep.overlaps[2] == pytest.approx(np.linalg.norm(chain[3]), abs=1e-15)


@settings(max_examples=40, deadline=None)
@given(ep_seeds)
def test_left_orthogonality_random_n4(seed):
    chain = build_chain(random_ep(4, np.random.default_rng(seed)))
    assert check_left_orthogonality(chain).passed


def test_left_ep_vector_is_left_eigenvector(rng):
    ep = random_ep(3, rng)
    L = left_ep_vector(ep)
    assert np.linalg.norm(ep.H_EP.conj().T @ L - np.conj(ep.E_EP) * L) <= 1e-12 * spectral_norm(ep.H_EP)


def test_not_an_ep_two_blocks():
    H = np.zeros((4, 4))
    H[0, 1] = H[2, 3] = 1
    with pytest.raises(NotAnEP) as info:
        EPSpec(H, 0)
    assert len(info.value.norms) == 4


def test_not_an_ep_wrong_eigenvalue():
    with pytest.raises(NotAnEP):
        EPSpec(jordan(3), 0.5)


def test_not_an_ep_diagonalizable():
    with pytest.raises(NotAnEP):
        EPSpec(np.zeros((2, 2)), 0)


def test_epspec_shape_errors():
    with pytest.raises(InvalidInput):
        EPSpec(np.zeros((2, 3)), 0)
    with pytest.raises(InvalidInput):
        EPSpec(jordan(3), 0, n=2)


def test_chain_serializes():
    chain = build_chain(EPSpec(jordan(2), 0))
    assert chain.to_json() == [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]


def test_badly_conditioned_ep_needs_looser_tolerance():
    # ||N^2|| = 1 while ||N||^2 ~ 1e10: a genuine order-3 EP below the default relative threshold
    H = np.array([[0, 1, 1e5], [0, 0, 1], [0, 0, 0]])
    with pytest.raises(NotAnEP):
        EPSpec(H, 0)
    assert EPSpec(H, 0, tol_nilp=1e-12).n == 3
