"""Estimate the spectral response strength of an EP embedded in a larger matrix.

From one biorthogonal eigendecomposition: keep the modes whose phase
rigidity is below ``tau``, pick the one closest to the known EP eigenvalue,
and invert the leading-order rigidity law,
``xi_num = n dE^(n-1) / r``.
"""

from dataclasses import dataclass, field, replace

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .exceptions import InvalidInput, NoEPCandidate
from .linalg import DEFAULT_TOL_EIG, spectral_norm
from .modes import DEGENERATE_OVERLAP, analyze_modes
from .validation import check_matrix, check_order, check_stack

__all__ = [
    "DEFAULT_TAU",
    "DEFAULT_KICK",
    "KICK_SEED",
    "EstimateConfig",
    "EstimateReport",
    "select_from_modes",
    "estimate_xi",
    "XiEstimator",
]

DEFAULT_TAU = 0.1
DEFAULT_KICK = 1e-12
KICK_SEED = 20230401


@dataclass(frozen=True)
class EstimateConfig:
    E_EP: complex
    n: int
    tau: float = DEFAULT_TAU
    degenerate_kick: float = DEFAULT_KICK
    seed: int = KICK_SEED
    average: bool = False
    tol_eig: float = DEFAULT_TOL_EIG

    def __post_init__(self):
        object.__setattr__(self, "E_EP", complex(self.E_EP))
        check_order(self.n)
        if not 0 < self.tau <= 1:
            raise InvalidInput(f"tau must lie in (0, 1], got {self.tau}")
        if not 1e-14 <= self.degenerate_kick <= 1e-8:
            raise InvalidInput(f"degenerate_kick must lie in [1e-14, 1e-8], got {self.degenerate_kick}")


@dataclass(frozen=True)
class EstimateReport:
    xi_num: float
    dE: float
    r_used: float
    l_selected: int
    E_selected: complex
    candidates: list = field(default_factory=list)
    fallback_used: bool = False

    def to_dict(self):
        return {
            "xi_num": self.xi_num,
            "dE": self.dE,
            "r_used": self.r_used,
            "l_selected": self.l_selected,
            "E_selected": [self.E_selected.real, self.E_selected.imag],
            "candidates": [{"E": [E.real, E.imag], "r": r} for E, r in self.candidates],
            "fallback_used": self.fallback_used,
        }


def select_from_modes(modes, cfg):
    """Apply the selection rule to analyzed modes.

    Returns None when nothing qualifies or the spectrum still sits exactly
    on the EP (``dE = 0`` or vanishing overlap).
    """
    cand = [m for m in modes if m.r < cfg.tau]
    if not cand:
        return None
    dist = np.array([abs(m.E - cfg.E_EP) for m in cand])
    best = cand[int(np.argmin(dist))]
    if cfg.average:
        near = [cand[i] for i in np.argsort(dist, kind="stable")[: cfg.n]]
        dE = float(np.mean([abs(m.E - cfg.E_EP) for m in near]))
        r = float(np.mean([m.r for m in near]))
    else:
        dE = float(abs(best.E - cfg.E_EP))
        r = best.r
    if dE == 0 or r < DEGENERATE_OVERLAP:
        return None
    return EstimateReport(
        xi_num=cfg.n * dE ** (cfg.n - 1) / r,
        dE=dE,
        r_used=r,
        l_selected=best.index,
        E_selected=best.E,
        candidates=[(m.E, m.r) for m in cand],
    )


def _kick(H, cfg):
    rng = np.random.default_rng(cfg.seed)
    m = H.shape[0]
    G = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    scale = spectral_norm(H) if np.any(H) else 1.0
    return H + G * (cfg.degenerate_kick * scale / spectral_norm(G))


def estimate_xi(H, cfg):
    """Run the estimator on one square matrix.

    If no mode qualifies (or the selected one is exactly degenerate, so
    that ``dE = 0`` or ``r = 0``) the matrix is kicked once by a seeded
    random perturbation of norm ``degenerate_kick * ||H||``.
    """
    H = check_matrix(H, square=True, name="H")
    if H.shape[0] < cfg.n:
        raise InvalidInput(f"matrix of size {H.shape[0]} cannot host an EP of order {cfg.n}")
    report = select_from_modes(analyze_modes(H, tol_eig=cfg.tol_eig), cfg)
    if report is not None:
        return report
    report = select_from_modes(analyze_modes(_kick(H, cfg), tol_eig=cfg.tol_eig), cfg)
    if report is None:
        raise NoEPCandidate(f"no mode with phase rigidity below tau={cfg.tau} near E_EP={cfg.E_EP}")
    return replace(report, fallback_used=True)


class XiEstimator(BaseEstimator):
    """Estimator-style wrapper around :func:`estimate_xi`.

    Parameters
    ----------
    order : int
        Order n of the embedded EP.
    ep_eigenvalue : complex
        Known EP eigenvalue.
    tau : float
        Phase-rigidity threshold for EP candidates.
    degenerate_kick : float
        Relative size of the fallback perturbation.
    random_state : int
        Seed of the fallback perturbation.
    average : bool
        Average dE and r over the n nearest candidates.

    Attributes
    ----------
    xi_ : ndarray of shape (k,)
        Estimates for the matrices passed to :meth:`fit`.
    reports_ : list of EstimateReport
    """

    def __init__(self, order=2, ep_eigenvalue=0j, tau=DEFAULT_TAU, degenerate_kick=DEFAULT_KICK,
                 random_state=KICK_SEED, average=False):
        self.order = order
        self.ep_eigenvalue = ep_eigenvalue
        self.tau = tau
        self.degenerate_kick = degenerate_kick
        self.random_state = random_state
        self.average = average

    def _config(self):
        return EstimateConfig(
            E_EP=self.ep_eigenvalue,
            n=self.order,
            tau=self.tau,
            degenerate_kick=self.degenerate_kick,
            seed=self.random_state,
            average=self.average,
        )

    def fit(self, X, y=None):
        cfg = self._config()
        self.reports_ = [estimate_xi(H, cfg) for H in check_stack(X)]
        self.xi_ = np.array([rep.xi_num for rep in self.reports_])
        return self

    def predict(self, X):
        """Estimated xi for each matrix in ``X`` (shape (m, m) or (k, m, m))."""
        check_is_fitted(self, "reports_")
        cfg = self._config()
        return np.array([estimate_xi(H, cfg).xi_num for H in check_stack(X)])
