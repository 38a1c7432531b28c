"""Random m x m Hamiltonians hiding a known EP, and the Monte Carlo harness around them.

Each realization ``i`` draws from its own substream
``SeedSequence([master_seed, i, attempt])`` so results do not depend on
how realizations are distributed over worker processes.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from threadpoolctl import threadpool_limits

from .estimator import DEFAULT_KICK, DEFAULT_TAU, EstimateConfig, estimate_xi, select_from_modes
from .exceptions import EPError, InvalidInput
from .jordan import EPSpec
from .modes import analyze_modes
from .response import xi_exact
from .validation import check_matrix, check_order

__all__ = [
    "MAX_Q_CONDITION",
    "EnsembleConfig",
    "EPSample",
    "EnsembleReport",
    "uniform_complex",
    "random_unitary",
    "jordan_block",
    "random_ep_sample",
    "random_ep_hamiltonian",
    "run_experiment",
    "matrix_heatmap",
]

MAX_Q_CONDITION = 1e12
MAX_RESAMPLES = 100


def uniform_complex(rng, shape):
    """Real and imaginary parts uniform on [-1/2, 1/2]."""
    return rng.uniform(-0.5, 0.5, shape) + 1j * rng.uniform(-0.5, 0.5, shape)


def random_unitary(m, rng):
    """Unitary from the QR decomposition of a random complex matrix.

    The columns are rephased by ``R_ii / |R_ii|`` so the result does not
    inherit the sign convention of the QR routine.
    """
    if m < 1:
        raise InvalidInput("m must be >= 1")
    Q, R = np.linalg.qr(uniform_complex(rng, (m, m)))
    d = np.diag(R)
    return Q * (d / np.abs(d))


def jordan_block(n, E=0j):
    return complex(E) * np.eye(n, dtype=complex) + np.eye(n, k=1, dtype=complex)


@dataclass(frozen=True)
class EnsembleConfig:
    m: int = 20
    n: int = 3
    E_EP: complex = complex(0.0, -0.05)
    realizations: int = 10_000
    master_seed: int = 0
    bins: int = 60
    bin_lo: float = 1e-12
    bin_hi: float = 1.0
    tau: float = DEFAULT_TAU
    degenerate_kick: float = DEFAULT_KICK

    def __post_init__(self):
        object.__setattr__(self, "E_EP", complex(self.E_EP))
        check_order(self.n)
        if not self.n < self.m:
            raise InvalidInput(f"need 2 <= n < m, got n={self.n}, m={self.m}")
        if self.realizations < 1:
            raise InvalidInput("realizations must be >= 1")
        if not (0 < self.bin_lo < self.bin_hi) or self.bins < 1:
            raise InvalidInput("histogram needs 0 < bin_lo < bin_hi and bins >= 1")

    def estimate_config(self):
        return EstimateConfig(E_EP=self.E_EP, n=self.n, tau=self.tau, degenerate_kick=self.degenerate_kick)

    def to_dict(self):
        d = asdict(self)
        d["E_EP"] = [self.E_EP.real, self.E_EP.imag]
        return d


@dataclass(frozen=True, eq=False)
class EPSample:
    """One realization together with its building blocks."""

    H: np.ndarray
    xi_true: float
    H_EP: np.ndarray
    H_a: np.ndarray
    U: np.ndarray
    attempts: int

    @property
    def block_diagonal(self):
        n = self.H_EP.shape[0]
        B = np.zeros_like(self.H)
        B[:n, :n] = self.H_EP
        B[n:, n:] = self.H_a
        return B


def random_ep_sample(cfg, index):
    """Build realization ``index``: ``U blockdiag(Q J Q^-1, H_a) U^†``.

    Ill-conditioned ``Q`` (condition number above ``MAX_Q_CONDITION``) is
    redrawn from the next substream.
    """
    n, m = cfg.n, cfg.m
    J = jordan_block(n, cfg.E_EP)
    for attempt in range(MAX_RESAMPLES):
        key = [cfg.master_seed, index] if attempt == 0 else [cfg.master_seed, index, attempt]
        rng = np.random.default_rng(np.random.SeedSequence(key))
        Q = uniform_complex(rng, (n, n))
        if np.linalg.cond(Q) <= MAX_Q_CONDITION:
            break
    else:
        raise EPError(f"realization {index}: no well-conditioned Q after {MAX_RESAMPLES} draws")
    # Q J Q^-1 without forming the inverse
    H_EP = np.linalg.solve(Q.T, (Q @ J).T).T
    xi_true = xi_exact(EPSpec(H_EP, cfg.E_EP, n))
    H_a = uniform_complex(rng, (m - n, m - n))
    U = random_unitary(m, rng)
    B = np.zeros((m, m), dtype=complex)
    B[:n, :n] = H_EP
    B[n:, n:] = H_a
    H = U @ B @ U.conj().T
    return EPSample(H, xi_true, H_EP, H_a, U, attempt + 1)


def random_ep_hamiltonian(cfg, index):
    """``(H, xi_true)`` for realization ``index``."""
    s = random_ep_sample(cfg, index)
    return s.H, s.xi_true


def _mode_stats(modes):
    r = np.array([mode.r for mode in modes])
    K = np.array([mode.K for mode in modes])
    finite = np.isfinite(K)
    return {
        "r_min": float(r.min()),
        "r_max": float(r.max()),
        "K_min_finite": float(K[finite].min()) if finite.any() else math.inf,
        "Kr2_dev_max": float(np.max(np.abs(K[finite] * r[finite] ** 2 - 1.0))) if finite.any() else 0.0,
        "K_infinite": int((~finite).sum()),
    }


def _run_one(cfg, est_cfg, index):
    try:
        sample = random_ep_sample(cfg, index)
        modes = analyze_modes(sample.H, tol_eig=est_cfg.tol_eig)
        rep = select_from_modes(modes, est_cfg)
        if rep is None:
            rep = estimate_xi(sample.H, est_cfg)
    except EPError as exc:
        return {"index": index, "error": f"{type(exc).__name__}: {exc}"}
    delta = abs(rep.xi_num - sample.xi_true) / sample.xi_true
    return {
        "index": index,
        "xi_true": sample.xi_true,
        "xi_num": rep.xi_num,
        "delta_xi": delta,
        "fallback": rep.fallback_used,
        "modes": _mode_stats(modes),
    }


def _run_chunk(cfg, start, stop):
    est_cfg = cfg.estimate_config()
    # single-threaded BLAS keeps every realization bitwise reproducible
    with threadpool_limits(limits=1):
        return [_run_one(cfg, est_cfg, i) for i in range(start, stop)]


def _histogram(deltas, cfg):
    edges = np.logspace(math.log10(cfg.bin_lo), math.log10(cfg.bin_hi), cfg.bins + 1)
    deltas = np.asarray(deltas, dtype=float)
    overflow = int(np.sum(deltas > cfg.bin_hi))
    inside = np.clip(deltas[deltas <= cfg.bin_hi], cfg.bin_lo, None)
    underflow = int(np.sum(deltas < cfg.bin_lo))
    counts, _ = np.histogram(inside, bins=edges)
    total = counts.sum()
    density = counts / (total * np.diff(edges)) if total else np.zeros(cfg.bins)
    return {
        "edges": edges.tolist(),
        "counts": counts.tolist(),
        "density": density.tolist(),
        "overflow": overflow,
        "clipped_low": underflow,
    }


@dataclass(frozen=True, eq=False)
class EnsembleReport:
    config: EnsembleConfig
    records: list
    failures: list
    histogram: dict
    quantiles: dict
    mode_checks: dict
    fallbacks: int = 0

    @property
    def delta_xi(self):
        return np.array([r["delta_xi"] for r in self.records])

    def histogram_csv(self):
        lines = ["bin_lo,bin_hi,density"]
        e, d = self.histogram["edges"], self.histogram["density"]
        lines += [f"{e[i]!r},{e[i + 1]!r},{float(d[i])!r}" for i in range(len(d))]
        return "\n".join(lines) + "\n"

    def to_dict(self):
        return {
            "config": self.config.to_dict(),
            "records": [[r["xi_true"], r["xi_num"], r["delta_xi"]] for r in self.records],
            "record_fields": ["xi_true", "xi_num", "delta_xi"],
            "failed": len(self.failures),
            "failures": self.failures,
            "fallbacks": self.fallbacks,
            "histogram": self.histogram,
            "quantiles": self.quantiles,
            "mode_checks": self.mode_checks,
        }


def _merge_mode_stats(rows):
    stats = [r["modes"] for r in rows]
    if not stats:
        return {}
    return {
        "r_min": min(s["r_min"] for s in stats),
        "r_max": max(s["r_max"] for s in stats),
        "K_min_finite": min(s["K_min_finite"] for s in stats),
        "Kr2_dev_max": max(s["Kr2_dev_max"] for s in stats),
        "K_infinite": sum(s["K_infinite"] for s in stats),
    }


def run_experiment(cfg, workers=1, chunk_size=250):
    """Estimate xi for every realization and aggregate the relative errors.

    The report is identical for any ``workers``: chunks are keyed by
    realization index and merged in index order.
    """
    bounds = [(a, min(a + chunk_size, cfg.realizations)) for a in range(0, cfg.realizations, chunk_size)]
    if workers <= 1 or len(bounds) == 1:
        chunks = [_run_chunk(cfg, a, b) for a, b in bounds]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_chunk, cfg, a, b) for a, b in bounds]
            chunks = [f.result() for f in futures]
    rows = sorted((row for chunk in chunks for row in chunk), key=lambda r: r["index"])

    ok = [r for r in rows if "error" not in r]
    failures = [{"index": r["index"], "error": r["error"]} for r in rows if "error" in r]
    deltas = np.array([r["delta_xi"] for r in ok])
    if deltas.size:
        quantiles = {
            "p50": float(np.quantile(deltas, 0.5)),
            "p99": float(np.quantile(deltas, 0.99)),
            "max": float(deltas.max()),
        }
    else:
        quantiles = {"p50": None, "p99": None, "max": None}
    return EnsembleReport(
        config=cfg,
        records=ok,
        failures=failures,
        histogram=_histogram(deltas, cfg),
        quantiles=quantiles,
        mode_checks=_merge_mode_stats(ok),
        fallbacks=sum(1 for r in ok if r["fallback"]),
    )


def matrix_heatmap(H):
    """Gray levels in [0, 1] for ``|H_ij|``: 0 is white, 1 is black (the max)."""
    H = check_matrix(H, name="H")
    a = np.abs(H)
    peak = a.max()
    return a / peak if peak > 0 else np.zeros_like(a)
