"""Dense complex linear algebra used by every other module.

Thin, validated wrappers around LAPACK (through scipy) for the spectral
norm, the biorthogonal eigendecomposition and least-norm solves.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.optimize import linear_sum_assignment

from .exceptions import InternalError, InvalidInput, NoSolution, PairingError
from .validation import check_matrix, check_vector

__all__ = [
    "DEFAULT_TOL_EIG",
    "DEFAULT_RANK_TOL",
    "EigenSystem",
    "spectral_norm",
    "eig_full",
    "solve_least_norm",
    "inner",
]

DEFAULT_TOL_EIG = 1e-9
DEFAULT_RANK_TOL = 1e-10


def inner(u, v):
    """Inner product ``<u|v>``, antilinear in the first argument."""
    return np.vdot(u, v)


def spectral_norm(A):
    """Largest singular value of ``A``.

    >>> spectral_norm([[0, 1], [0, 0]])
    1.0
    """
    A = check_matrix(A)
    return float(sla.svdvals(A)[0])


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues with unit-norm right and left eigenvectors.

    ``right[:, i]`` and ``left[:, i]`` belong to ``eigenvalues[i]``:
    ``H @ right[:, i] = E_i right[:, i]`` and
    ``H^† @ left[:, i] = conj(E_i) left[:, i]``. Entries are ordered
    lexicographically by (Re E, Im E).
    """

    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray

    def __len__(self):
        return self.eigenvalues.shape[0]

    def overlaps(self):
        """``<L_i|R_i>`` for every pair."""
        return np.einsum("ij,ij->j", self.left.conj(), self.right)

    def residuals(self, H):
        """Return (right, left) residual norms for every pair."""
        H = np.asarray(H, dtype=complex)
        E = self.eigenvalues
        res_r = np.linalg.norm(H @ self.right - self.right * E, axis=0)
        res_l = np.linalg.norm(H.conj().T @ self.left - self.left * E.conj(), axis=0)
        return res_r, res_l


def _lexsort(E):
    return np.lexsort((E.imag, E.real))


def _pair_adjoint(E, E_adj, scale, tol):
    """Match conj(E_adj) to E one-to-one; reject near-ties."""
    dist = np.abs(E[:, None] - E_adj.conj()[None, :])
    rows, cols = linear_sum_assignment(dist)
    atol = tol * scale
    for i, j in zip(rows, cols):
        d = dist[i].copy()
        best = d[j]
        d[j] = np.inf
        k = int(np.argmin(d)) if d.size > 1 else None
        if k is not None and d[k] - best <= atol:
            raise PairingError(
                f"eigenvalue {E[i]:.6g} has two equally close adjoint partners",
                (int(i), (int(j), k)),
            )
    perm = np.empty_like(cols)
    perm[rows] = cols
    return perm


def eig_full(H, tol_eig=DEFAULT_TOL_EIG, method="schur"):
    """Biorthogonal eigendecomposition of a square matrix.

    Parameters
    ----------
    H : array_like, shape (m, m)
    tol_eig : float
        Relative residual tolerance, in units of ``||H||``.
    method : {"schur", "adjoint"}
        ``"schur"`` takes left and right eigenvectors from one Schur form
        (LAPACK ``geev``) so that both belong to the same backward-perturbed
        matrix. ``"adjoint"`` diagonalizes ``H^†`` separately and pairs by
        eigenvalue proximity; near a roundoff-split EP the two spectra are
        split differently and the pairing is meaningless.

    Returns
    -------
    EigenSystem
    """
    H = check_matrix(H, square=True, name="H")
    scale = spectral_norm(H) if np.any(H) else 1.0

    if method == "schur":
        E, VL, VR = sla.eig(H, left=True, right=True)
    elif method == "adjoint":
        E, VR = sla.eig(H)
        E_adj, VL = sla.eig(H.conj().T)
        VL = VL[:, _pair_adjoint(E, E_adj, scale, tol_eig)]
    else:
        raise InvalidInput(f"unknown method {method!r}")

    VR = VR / np.linalg.norm(VR, axis=0)
    VL = VL / np.linalg.norm(VL, axis=0)
    order = _lexsort(E)
    system = EigenSystem(E[order], VR[:, order], VL[:, order])

    res_r, res_l = system.residuals(H)
    worst = max(res_r.max(), res_l.max())
    if worst > tol_eig * scale:
        raise InternalError(f"eigenvector residual {worst:.3e} exceeds {tol_eig:.1e}*||H||")
    return system


def solve_least_norm(A, b, rank_tol=DEFAULT_RANK_TOL, require_consistent=True, rank=None):
    """Minimum-norm least-squares solution of ``A x = b``.

    Singular values below ``rank_tol * sigma_max`` are treated as zero;
    passing ``rank`` instead keeps exactly that many singular values.
    With ``require_consistent`` the system must be solvable: the residual
    has to be within ``rank_tol`` in the normwise backward-error sense,
    ``||Ax - b|| <= rank_tol * (||A|| ||x|| + ||b||)``.
    """
    A = check_matrix(A, name="A")
    b = check_vector(b, size=A.shape[0], name="b")
    U, s, Vh = sla.svd(A, full_matrices=False)
    if rank is not None:
        keep = np.arange(s.size) < rank
    elif s[0] > 0:
        keep = s > rank_tol * s[0]
    else:
        keep = np.zeros_like(s, dtype=bool)
    coeff = (U[:, keep].conj().T @ b) / s[keep]
    x = Vh[keep].conj().T @ coeff
    if require_consistent:
        resid = np.linalg.norm(A @ x - b)
        bound = rank_tol * (s[0] * np.linalg.norm(x) + np.linalg.norm(b))
        if resid > bound:
            raise NoSolution(f"residual {resid:.3e} exceeds tolerance {bound:.3e}; b is not in range(A)")
    return x
