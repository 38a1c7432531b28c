"""Acceptance suite.

Each test checks one criterion at its stated tolerance and records a
PASS/FAIL line that is printed in the terminal summary. Run alone with
``pytest tests/test_acceptance.py -v``.
"""

import json
import math

import numpy as np
import pytest

from eprigidity.cli import main
from eprigidity.ensemble import EnsembleConfig, run_experiment
from eprigidity.hatano import HatanoParams, build_model, rigidity_sweep
from eprigidity.jordan import EPSpec, build_chain, check_left_orthogonality, xi_from_chain
from eprigidity.modes import analyze_modes, perturbation_derivative_check
from eprigidity.response import bounds, xi_exact

from conftest import random_ep, record, uniform_complex

pytestmark = pytest.mark.slow

ORDERS = (2, 3, 4, 5)


def _mode_invariants(modes):
    r = np.array([m.r for m in modes])
    K = np.array([m.K for m in modes])
    fin = np.isfinite(K)
    return {
        "r_min": float(r.min()),
        "r_max": float(r.max()),
        "K_min_finite": float(K[fin].min()) if fin.any() else math.inf,
        "Kr2_dev_max": float(np.max(np.abs(K[fin] * r[fin] ** 2 - 1))) if fin.any() else 0.0,
    }


def _merge(stats):
    return {
        "r_min": min(s["r_min"] for s in stats),
        "r_max": max(s["r_max"] for s in stats),
        "K_min_finite": min(s["K_min_finite"] for s in stats),
        "Kr2_dev_max": max(s["Kr2_dev_max"] for s in stats),
    }


@pytest.fixture(scope="session")
def dual_xi_specs():
    rng = np.random.default_rng(2024)
    return {n: [random_ep(n, rng) for _ in range(200)] for n in ORDERS}


@pytest.fixture(scope="session")
def hatano_matrices():
    p = HatanoParams(n=3)
    H_EP, H_1 = build_model(p)
    return [H_EP + eps * H_1 for eps in np.logspace(-9, -5, 30)] + [H_EP + 1e-6 * H_1]


@pytest.fixture(scope="session")
def ensemble_n3():
    return run_experiment(EnsembleConfig(m=20, n=3, E_EP=complex(0, -0.05), realizations=10_000, master_seed=1))


@pytest.fixture(scope="session")
def ensemble_n4():
    return run_experiment(EnsembleConfig(m=20, n=4, E_EP=complex(0, -0.05), realizations=10_000, master_seed=2))


def test_c1_dual_formula(dual_xi_specs):
    worst = {}
    for n, specs in dual_xi_specs.items():
        worst[n] = max(abs(xi_from_chain(build_chain(ep)) - xi_exact(ep)) / xi_exact(ep) for ep in specs)
    ok = max(worst.values()) <= 1e-8
    record("C1", "chain and norm formulas for xi agree", ok,
           "max rel gap " + ", ".join(f"n={n}: {v:.1e}" for n, v in worst.items()) + " (tol 1e-8)")
    assert ok


def test_c2_hatano_xi():
    worst = 0.0
    for n in range(2, 7):
        for A in (0.5, 1, 2, 1 + 1j):
            H_EP, _ = build_model(HatanoParams(n=n, A=A))
            worst = max(worst, abs(xi_exact(EPSpec(H_EP, 0)) - abs(A) ** (n - 1)) / abs(A) ** (n - 1))
    ok = worst <= 1e-12
    record("C2", "hopping chain xi = |A|^(n-1)", ok, f"max rel error {worst:.1e} (tol 1e-12)")
    assert ok


def test_c3_exact_vs_predicted():
    t = rigidity_sweep(HatanoParams(n=3, A=1, E0=0, eps_grid=[1e-9, 1e-6]))
    gap = np.abs(t.r_pred - t.r_exact) / t.r_exact
    full = rigidity_sweep(HatanoParams(n=3))
    s = 1 + full.x + full.x**2
    ratio_err = float(np.max(np.abs(full.r_pred / full.r_exact - s) / s))
    ok = gap[0] <= 2e-3 and gap[1] <= 2e-2 and ratio_err <= 1e-10
    record("C3", "exact versus predicted rigidity", ok,
           f"gap {gap[0]:.2e} at 1e-9 (tol 2e-3), {gap[1]:.2e} at 1e-6 (tol 2e-2), "
           f"ratio vs sum x^j {ratio_err:.1e} (tol 1e-10)")
    assert ok


def test_c4_scaling_exponent():
    t = rigidity_sweep(HatanoParams(n=3, eps_grid=np.logspace(-9, -5, 30)))
    slope = float(np.polyfit(np.log(t.eps), np.log(t.r_exact), 1)[0])
    ok = abs(slope - 2 / 3) <= 0.01
    record("C4", "log-log slope of r vs eps", ok, f"slope {slope:.5f} (target 2/3 +- 0.01)")
    assert ok


def test_c5_ensemble_n3(ensemble_n3):
    q = ensemble_n3.quantiles
    ok = not ensemble_n3.failures and q["p99"] < 1e-3 and q["max"] < 1e-2
    record("C5", "ensemble m=20 n=3, 1e4 realizations", ok,
           f"p50 {q['p50']:.2e}, p99 {q['p99']:.2e} (< 1e-3), max {q['max']:.2e} (< 1e-2), "
           f"failures {len(ensemble_n3.failures)}")
    assert ok


def test_c6_ensemble_n4(ensemble_n4):
    q = ensemble_n4.quantiles
    ok = not ensemble_n4.failures and q["p50"] <= 1e-2
    record("C6", "ensemble m=20 n=4, 1e4 realizations", ok,
           f"median {q['p50']:.2e} (<= 1e-2), p99 {q['p99']:.2e}, max {q['max']:.2e}")
    assert ok


def test_c7_left_vector_orthogonality():
    rng = np.random.default_rng(7)
    off, last = 0.0, 0.0
    for n in ORDERS:
        for _ in range(100):
            rep = check_left_orthogonality(build_chain(random_ep(n, rng)), tol=1e-9)
            off, last = max(off, rep.off_diagonal_max), max(last, rep.last_gap)
    ok = off <= 1e-9 and last <= 1e-9
    record("C7", "left EP vector against the chain", ok,
           f"max |<L|J_k>| k<n {off:.1e}, max ||<L|J_n>| - |J_n|| {last:.1e} (tol 1e-9)")
    assert ok


def test_c8_mode_invariants(dual_xi_specs, hatano_matrices, ensemble_n3, ensemble_n4):
    stats = [_mode_invariants(analyze_modes(ep.H_EP)) for specs in dual_xi_specs.values() for ep in specs]
    stats += [_mode_invariants(analyze_modes(H)) for H in hatano_matrices]
    stats += [ensemble_n3.mode_checks, ensemble_n4.mode_checks]
    s = _merge(stats)
    ok = (s["K_min_finite"] >= 1 - 1e-12 and s["r_min"] >= -1e-12 and s["r_max"] <= 1 + 1e-12
          and s["Kr2_dev_max"] <= 1e-12)
    record("C8", "K >= 1, 0 <= r <= 1, K r^2 = 1", ok,
           f"min K {s['K_min_finite']:.6f}, r in [{s['r_min']:.1e}, {s['r_max']:.12f}], "
           f"max |K r^2 - 1| {s['Kr2_dev_max']:.1e}")
    assert ok


def test_c9_resolvable_peak():
    vals = (bounds(2).K_resolvable_peak, bounds(3).K_resolvable_peak)
    ok = vals == (1.0, 4.0)
    record("C9", "resolvable Petermann peak", ok, f"n=2 -> {vals[0]:g}, n=3 -> {vals[1]:g} (expected 1, 4)")
    assert ok


def test_c10_first_order_perturbation():
    rng = np.random.default_rng(10)
    worst, systems = 0.0, 0
    while systems < 50:
        H0, H1 = uniform_complex(rng, (4, 4)), uniform_complex(rng, (4, 4))
        E = np.linalg.eigvals(H0 + 0.1 * H1)
        if np.min(np.abs(E[:, None] - E[None, :]) + np.eye(4)) < 0.05:
            continue
        systems += 1
        for l in range(4):
            worst = max(worst, perturbation_derivative_check(H0, H1, eps=0.1, l=l, h=1e-5).rel_diff)
    ok = worst <= 1e-5
    record("C10", "finite-difference dE/deps vs <L|H1|R>/<L|R>", ok,
           f"max rel diff {worst:.1e} over 50 systems x 4 modes (tol 1e-5)")
    assert ok


def test_c11_determinism(tmp_path):
    paths = []
    for workers in (1, 3):
        path = tmp_path / f"w{workers}.json"
        main(["randexp", "--count", "600", "--seed", "42", "--workers", str(workers), "--out", str(path)])
        paths.append(path)
    a, b = (p.read_bytes() for p in paths)
    ok = a == b and len(json.loads(a)["records"]) == 600
    record("C11", "randexp output independent of worker count", ok,
           f"workers 1 vs 3, {len(a)} bytes, identical={a == b}")
    assert ok

