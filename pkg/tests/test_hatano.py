import numpy as np
import pytest

from eprigidity.exceptions import InvalidInput
from eprigidity.hatano import (
    HatanoParams,
    build_model,
    default_eps_grid,
    eigenvector_rigidity,
    exact_rigidity,
    exact_shift,
    rigidity_sweep,
)
from eprigidity.jordan import EPSpec
from eprigidity.linalg import spectral_norm
from eprigidity.response import xi_exact


def test_model_layout():
    H_EP, H_1 = build_model(HatanoParams(n=3, E0=0.5, A=2))
    np.testing.assert_array_equal(H_EP, [[0.5, 2, 0], [0, 0.5, 2], [0, 0, 0.5]])
    np.testing.assert_array_equal(H_1, [[0, 0, 0], [0, 0, 0], [1, 0, 0]])
    assert spectral_norm(H_1) == 1.0


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("A", [0.5, 1, 2, 1 + 1j])
def test_xi_is_power_of_hopping(n, A):
    p = HatanoParams(n=n, A=A)
    H_EP, _ = build_model(p)
    assert abs(xi_exact(EPSpec(H_EP, p.E0)) - p.xi) <= 1e-12 * p.xi
    assert p.xi == pytest.approx(abs(A) ** (n - 1))


@pytest.mark.parametrize("n", [2, 3, 5])
def test_shift_matches_numerical_eigenvalues(n):
    p = HatanoParams(n=n, E0=0.2 - 0.1j, A=1.5)
    H_EP, H_1 = build_model(p)
    eps = 1e-3
    magnitude, branches = exact_shift(p, eps)
    E = np.linalg.eigvals(H_EP + eps * H_1) - p.E0
    np.testing.assert_allclose(np.abs(E), magnitude, rtol=1e-8)
    for z in branches:
        assert np.min(np.abs(E - z)) <= 1e-8


def test_rigidity_hand_value_n3():
    # eps = 1e-9, A = 1: x = 1e-3, r = 3e-6 / (1 + 1e-3 + 1e-6)
    r, K = exact_rigidity(HatanoParams(n=3), 1e-9)
    assert r == pytest.approx(3e-6 / 1.001001, rel=1e-12)
    assert K == pytest.approx(1 / r**2, rel=1e-15)


def test_rigidity_hand_value_n2():
    r, _ = exact_rigidity(HatanoParams(n=2), 1e-8)
    assert r == pytest.approx(2e-4 / 1.0001, rel=1e-12)


def test_eigenvector_form_hand_value():
    # x = 1e-2: 3e-4 / (1 + 1e-4 + 1e-8)
    r, _ = eigenvector_rigidity(HatanoParams(n=3), 1e-6)
    assert r == pytest.approx(3e-4 / 1.00010001, rel=1e-12)


def test_forms_share_leading_order():
    p = HatanoParams(n=4)
    for eps in (1e-12, 1e-10):
        a, _ = exact_rigidity(p, eps)
        b, _ = eigenvector_rigidity(p, eps)
        assert a == pytest.approx(b, rel=1e-2)


def test_prediction_ratio_is_geometric_sum():
    for n in (2, 3, 4):
        table = rigidity_sweep(HatanoParams(n=n))
        s = sum(table.x**j for j in range(n))
        np.testing.assert_allclose(table.r_pred / table.r_exact, s, rtol=1e-10)


def test_relative_gap_small_eps():
    p = HatanoParams(n=3, eps_grid=[1e-9, 1e-6])
    t = rigidity_sweep(p)
    gap = np.abs(t.r_pred - t.r_exact) / t.r_exact
    assert gap[0] <= 2e-3 and gap[1] <= 2e-2


def test_slope_two_thirds():
    p = HatanoParams(n=3, eps_grid=np.logspace(-9, -5, 30))
    t = rigidity_sweep(p)
    slope = np.polyfit(np.log(t.eps), np.log(t.r_exact), 1)[0]
    assert abs(slope - 2 / 3) <= 0.01


def test_csv():
    t = rigidity_sweep(HatanoParams(n=3, eps_grid=default_eps_grid(1e-8, 1e-2, 5)))
    lines = t.to_csv().splitlines()
    assert lines[0] == "eps,r_exact,r_pred,K_exact,K_pred"
    assert len(lines) == 6 and len(t) == 5
    assert float(lines[1].split(",")[0]) == pytest.approx(1e-8)


def test_validation():
    with pytest.raises(InvalidInput):
        HatanoParams(n=1)
    with pytest.raises(InvalidInput):
        HatanoParams(A=0)
    with pytest.raises(InvalidInput):
        HatanoParams(eps_grid=[1e-3, 1e-4])
    with pytest.raises(InvalidInput):
        exact_shift(HatanoParams(), 0.0)
