"""Per-eigenstate biorthogonal diagnostics.

With unit-norm right and left eigenvectors the phase rigidity is
``r = |<L|R>|`` and the Petermann factor ``K = 1/r^2``.
"""

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInput, TrackingError
from .linalg import DEFAULT_TOL_EIG, eig_full, inner
from .validation import check_matrix

__all__ = [
    "DEGENERATE_OVERLAP",
    "BiorthogonalMode",
    "analyze_modes",
    "modes_to_csv",
    "track_eigenvalue",
    "DerivativeCheck",
    "perturbation_derivative_check",
]

# below this overlap K is reported as +inf
DEGENERATE_OVERLAP = 1e-14


@dataclass(frozen=True, eq=False)
class BiorthogonalMode:
    index: int
    E: complex
    R: np.ndarray
    L: np.ndarray
    overlap: complex
    r: float
    K: float

    @property
    def diverged(self):
        return math.isinf(self.K)


def analyze_modes(H, tol_eig=DEFAULT_TOL_EIG, method="schur"):
    """One :class:`BiorthogonalMode` per eigenvalue, sorted by (Re E, Im E)."""
    system = eig_full(H, tol_eig=tol_eig, method=method)
    ov = system.overlaps()
    modes = []
    for i, (E, c) in enumerate(zip(system.eigenvalues, ov)):
        r = float(abs(c))
        K = math.inf if r < DEGENERATE_OVERLAP else 1.0 / r**2
        modes.append(BiorthogonalMode(i, complex(E), system.right[:, i], system.left[:, i], complex(c), r, K))
    return modes


def modes_to_csv(modes):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["l", "Re(E)", "Im(E)", "r", "K"])
    for m in modes:
        w.writerow([m.index, repr(m.E.real), repr(m.E.imag), repr(m.r), "inf" if m.diverged else repr(m.K)])
    return buf.getvalue()


def track_eigenvalue(E_ref, candidates):
    """Index of the candidate closest to ``E_ref``.

    Raises :class:`TrackingError` when the runner-up is less than twice as
    far away as the winner.
    """
    d = np.abs(np.asarray(candidates) - E_ref)
    order = np.argsort(d, kind="stable")
    if d.size > 1 and d[order[1]] <= 2 * d[order[0]]:
        raise TrackingError(
            f"cannot follow eigenvalue {E_ref:.6g}: nearest candidates at {d[order[0]]:.3e} and {d[order[1]]:.3e}"
        )
    return int(order[0])


@dataclass(frozen=True)
class DerivativeCheck:
    lhs: complex
    rhs: complex
    rel_diff: float


def perturbation_derivative_check(H_EP, H_1, eps, l, h):
    """Compare dE_l/d(eps) by central differences with first-order perturbation theory.

    ``lhs = [E_l(eps+h) - E_l(eps-h)] / 2h`` where ``E_l`` is followed by
    nearest-eigenvalue continuation, and ``rhs = <L|H_1|R>/<L|R>`` at eps.
    """
    H_EP = check_matrix(H_EP, square=True, name="H_EP")
    H_1 = check_matrix(H_1, square=True, name="H_1")
    if H_EP.shape != H_1.shape:
        raise InvalidInput("H_EP and H_1 must have the same shape")
    if not (eps > 0 and 0 < h < eps):
        raise InvalidInput("need eps > 0 and 0 < h < eps")

    modes = analyze_modes(H_EP + eps * H_1)
    mode = modes[l]
    rhs = inner(mode.L, H_1 @ mode.R) / mode.overlap

    E_plus = np.linalg.eigvals(H_EP + (eps + h) * H_1)
    E_minus = np.linalg.eigvals(H_EP + (eps - h) * H_1)
    Ep = E_plus[track_eigenvalue(mode.E, E_plus)]
    Em = E_minus[track_eigenvalue(mode.E, E_minus)]
    lhs = (Ep - Em) / (2 * h)
    return DerivativeCheck(complex(lhs), complex(rhs), float(abs(lhs - rhs) / abs(rhs)))
