"""Spectral response strength, leading-order rigidity/Petermann predictions, bounds.

Near an EP of order n with spectral response strength ``xi``, a generic
perturbation that moves an eigenvalue by ``dE = |E_l - E_EP|`` gives

    r = n dE^(n-1) / xi,        K = 1 / r^2 = xi^2 / (n^2 dE^(2n-2)).

These are leading-order asymptotics; values with ``r > 1`` (``K < 1``) are
returned unclamped and flagged as outside the asymptotic regime.
"""

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .exceptions import DivergesAtEP, InvalidInput
from .jordan import EPSpec
from .linalg import spectral_norm
from .validation import check_order

__all__ = [
    "xi_exact",
    "predicted_rigidity",
    "predicted_petermann",
    "in_regime",
    "Bounds",
    "bounds",
    "ResponseRow",
    "ResponseReport",
    "response_report",
]


def xi_exact(ep):
    """``||N^(n-1)||`` for ``N = H_EP - E_EP``."""
    if not isinstance(ep, EPSpec):
        raise InvalidInput("xi_exact expects an EPSpec")
    return spectral_norm(np.linalg.matrix_power(ep.N, ep.n - 1))


def _check_xi(xi):
    if not (xi > 0 and math.isfinite(xi)):
        raise InvalidInput(f"xi must be positive and finite, got {xi!r}")


def predicted_rigidity(n, dE, xi):
    """Leading-order phase rigidity ``n dE^(n-1) / xi``."""
    n = check_order(n)
    _check_xi(xi)
    if dE < 0:
        raise InvalidInput("dE must be nonnegative")
    return n * dE ** (n - 1) / xi


def predicted_petermann(n, dE, xi):
    """Leading-order Petermann factor ``xi^2 / (n^2 dE^(2n-2))``."""
    n = check_order(n)
    _check_xi(xi)
    if dE < 0:
        raise InvalidInput("dE must be nonnegative")
    if dE == 0:
        raise DivergesAtEP("the Petermann factor diverges exactly at the EP")
    return xi**2 / (n**2 * dE ** (2 * n - 2))


def in_regime(r):
    """True when a predicted rigidity is a valid rigidity (0 <= r <= 1)."""
    return 0.0 <= r <= 1.0


@dataclass(frozen=True)
class Bounds:
    """Bounds on r, K and xi. ``None`` marks a bound whose inputs were absent."""

    r_upper: float | None = None
    K_lower: float | None = None
    xi_passive_upper: float | None = None
    K_passive_upper: float | None = None
    K_resolvable_peak: float | None = None

    def to_dict(self):
        return {k: ("not computed" if v is None else v) for k, v in asdict(self).items()}


def bounds(n, eps=None, normH1=None, xi=None, imag_E_EP=None, dE=None):
    """Evaluate every bound whose inputs are available.

    Parameters
    ----------
    n : int
        EP order.
    eps, normH1 : float, optional
        Perturbation strength and spectral norm of the perturbation.
    xi : float, optional
        Spectral response strength.
    imag_E_EP : float, optional
        Imaginary part of the EP eigenvalue (passive systems).
    dE : float, optional
        Eigenvalue detuning used in the passive Petermann bound.

    Notes
    -----
    The passive Petermann bound takes the resolvable peak splitting to be
    ``2 dE``, an estimate meant for larger orders; it is still evaluated
    for every ``n >= 2``.
    """
    n = check_order(n)
    if eps is not None and eps < 0:
        raise InvalidInput("eps must be nonnegative")
    if normH1 is not None and not normH1 > 0:
        raise InvalidInput("normH1 must be positive")
    if xi is not None:
        _check_xi(xi)

    r_upper = K_lower = xi_passive = K_passive = None
    if eps is not None and normH1 is not None and xi is not None:
        size = eps * normH1
        r_upper = n * size ** ((n - 1) / n) / xi ** (1 / n)
        K_lower = math.inf if size == 0 else xi ** (2 / n) / (n**2 * size ** ((2 * n - 2) / n))
    peak = 2.0 ** (n - 1) * float(n) ** (n - 3)
    if imag_E_EP is not None:
        g = abs(imag_E_EP)
        xi_passive = (math.sqrt(2 * n) * g) ** (n - 1)
        if dE is not None:
            if not dE > 0:
                raise InvalidInput("dE must be positive for the passive Petermann bound")
            K_passive = peak * (g / dE) ** (2 * n - 2)
    return Bounds(r_upper, K_lower, xi_passive, K_passive, peak)


@dataclass(frozen=True)
class ResponseRow:
    dE: float
    r: float
    K: float
    in_regime: bool


@dataclass(frozen=True)
class ResponseReport:
    xi: float
    n: int
    E_EP: complex
    rows: list = field(default_factory=list)
    bounds: Bounds = field(default_factory=Bounds)

    def to_dict(self):
        return {
            "xi": self.xi,
            "n": self.n,
            "E_EP": [self.E_EP.real, self.E_EP.imag],
            "predictions": [asdict(row) for row in self.rows],
            "bounds": self.bounds.to_dict(),
        }


def response_report(ep, detunings=(), eps=None, normH1=None, dE=None):
    """Bundle xi, tabulated predictions and bounds for one EP."""
    xi = xi_exact(ep)
    rows = []
    for d in detunings:
        if not d > 0:
            raise InvalidInput("tabulated detunings must be positive")
        r = predicted_rigidity(ep.n, d, xi)
        rows.append(ResponseRow(float(d), r, predicted_petermann(ep.n, d, xi), in_regime(r)))
    # the passive bounds only make sense for a decaying EP eigenvalue
    imag = ep.E_EP.imag if ep.E_EP.imag < 0 else None
    b = bounds(ep.n, eps=eps, normH1=normH1, xi=xi, imag_E_EP=imag, dE=dE)
    return ResponseReport(xi, ep.n, ep.E_EP, rows, b)
