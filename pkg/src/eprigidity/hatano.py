"""Fully asymmetric open hopping chain: an exactly solvable EP of order n.

``H_EP`` has ``E0`` on the diagonal and ``A`` on the superdiagonal; the
perturbation ``H_1`` has a single 1 in the lower-left corner. The
perturbed eigenvalues solve ``(E - E0)^n = eps A^(n-1)`` and the phase
rigidity is usually quoted as ``r = n x^(n-1) / sum_{j=1..n} x^(j-1)`` with
``x = |E - E0| / |A|``.

Normalizing the explicit eigenvectors ``R_k = y^(k-1)`` and
``L_k = conj(y)^(n-k)`` (``y = (E - E0)/A``) gives instead
``r = n x^(n-1) / sum_{j=1..n} x^(2(j-1))``; this is what a numerical
eigendecomposition reproduces. Both agree to leading order in ``x``.
"""

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidInput
from .response import predicted_petermann, predicted_rigidity
from .validation import check_order

__all__ = [
    "HatanoParams",
    "default_eps_grid",
    "build_model",
    "exact_shift",
    "exact_rigidity",
    "eigenvector_rigidity",
    "RigiditySweep",
    "rigidity_sweep",
]


def default_eps_grid(lo=1e-10, hi=1e-1, points=40):
    return np.logspace(np.log10(lo), np.log10(hi), points)


@dataclass(frozen=True, eq=False)
class HatanoParams:
    n: int = 3
    E0: complex = 0j
    A: complex = 1 + 0j
    eps_grid: np.ndarray = field(default_factory=default_eps_grid)

    def __post_init__(self):
        check_order(self.n)
        object.__setattr__(self, "E0", complex(self.E0))
        object.__setattr__(self, "A", complex(self.A))
        if self.A == 0:
            raise InvalidInput("hopping A must be nonzero")
        grid = np.asarray(self.eps_grid, dtype=float)
        if grid.ndim != 1 or grid.size == 0:
            raise InvalidInput("eps_grid must be a non-empty 1-D sequence")
        if np.any(grid <= 0) or np.any(np.diff(grid) <= 0) or not np.all(np.isfinite(grid)):
            raise InvalidInput("eps_grid must be positive and strictly increasing")
        object.__setattr__(self, "eps_grid", grid)

    @property
    def xi(self):
        return abs(self.A) ** (self.n - 1)


def build_model(p):
    """Return ``(H_EP, H_1)``."""
    n = p.n
    H_EP = p.E0 * np.eye(n, dtype=complex) + p.A * np.eye(n, k=1, dtype=complex)
    H_1 = np.zeros((n, n), dtype=complex)
    H_1[n - 1, 0] = 1.0
    return H_EP, H_1


def _check_eps(eps):
    if not eps > 0:
        raise InvalidInput(f"eps must be positive, got {eps!r}")


def exact_shift(p, eps):
    """``(|E - E0|, branches)`` where branches are the n perturbed eigenvalues minus E0."""
    _check_eps(eps)
    n = p.n
    magnitude = (eps * abs(p.A) ** (n - 1)) ** (1.0 / n)
    root = (eps * p.A ** (n - 1)) ** (1.0 / n)
    branches = root * np.exp(2j * np.pi * np.arange(1, n + 1) / n)
    return magnitude, branches


def exact_rigidity(p, eps):
    """Closed-form ``(r, K)`` at perturbation strength ``eps``."""
    magnitude, _ = exact_shift(p, eps)
    x = magnitude / abs(p.A)
    r = p.n * x ** (p.n - 1) / sum(x**j for j in range(p.n))
    return r, 1.0 / r**2


def eigenvector_rigidity(p, eps):
    """``(r, K)`` from the normalized explicit eigenvectors of ``H_EP + eps H_1``."""
    magnitude, _ = exact_shift(p, eps)
    x = magnitude / abs(p.A)
    r = p.n * x ** (p.n - 1) / sum(x ** (2 * j) for j in range(p.n))
    return r, 1.0 / r**2


@dataclass(frozen=True, eq=False)
class RigiditySweep:
    eps: np.ndarray
    x: np.ndarray
    r_exact: np.ndarray
    r_pred: np.ndarray
    K_exact: np.ndarray
    K_pred: np.ndarray

    def __len__(self):
        return self.eps.size

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["eps", "r_exact", "r_pred", "K_exact", "K_pred"])
        for row in zip(self.eps, self.r_exact, self.r_pred, self.K_exact, self.K_pred):
            w.writerow([repr(float(v)) for v in row])
        return buf.getvalue()

    def to_dict(self):
        return {
            name: [float(v) for v in getattr(self, name)]
            for name in ("eps", "x", "r_exact", "r_pred", "K_exact", "K_pred")
        }


def rigidity_sweep(p):
    """Exact versus leading-order r and K over ``p.eps_grid``."""
    cols = {k: [] for k in ("x", "r_exact", "r_pred", "K_exact", "K_pred")}
    for eps in p.eps_grid:
        magnitude, _ = exact_shift(p, eps)
        r, K = exact_rigidity(p, eps)
        rp = predicted_rigidity(p.n, magnitude, p.xi)
        cols["x"].append(magnitude / abs(p.A))
        cols["r_exact"].append(r)
        cols["K_exact"].append(K)
        cols["r_pred"].append(rp)
        cols["K_pred"].append(predicted_petermann(p.n, magnitude, p.xi))
    return RigiditySweep(p.eps_grid.copy(), *(np.array(cols[k]) for k in cols))
