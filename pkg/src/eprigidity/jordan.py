"""Jordan chains of a matrix sitting exactly at an exceptional point.

The chain ``J_1 ... J_n`` of ``N = H_EP - E_EP`` satisfies ``N J_1 = 0``,
``N J_k = J_{k-1}``, and is made unique up to a global phase by
``<J_1|J_1> = 1`` and ``<J_n|J_k> = 0`` for ``k < n``. With that gauge the
spectral response strength is ``1 / ||J_n||``.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .exceptions import InternalError, InvalidInput, NotAnEP
from .linalg import DEFAULT_RANK_TOL, inner, solve_least_norm
from .validation import check_matrix, check_order, check_vector

__all__ = [
    "DEFAULT_TOL_NILP",
    "EPSpec",
    "JordanChain",
    "LeftOrthogonalityReport",
    "nilpotency_norms",
    "build_chain",
    "xi_from_chain",
    "left_ep_vector",
    "check_left_orthogonality",
]

DEFAULT_TOL_NILP = 1e-8


def nilpotency_norms(N, n):
    """``[||N^1||, ..., ||N^n||]`` in the spectral norm."""
    out = []
    P = np.eye(N.shape[0], dtype=complex)
    for _ in range(n):
        P = P @ N
        out.append(float(sla.svdvals(P)[0]))
    return out


@dataclass(frozen=True, eq=False)
class EPSpec:
    """An n x n Hamiltonian at an EP of order n with eigenvalue ``E_EP``.

    Construction checks that ``N = H_EP - E_EP`` is nilpotent of index
    ``n`` up to the relative tolerance ``tol_nilp`` and raises
    :class:`NotAnEP` otherwise.
    """

    H_EP: np.ndarray
    E_EP: complex
    n: int = None
    tol_nilp: float = DEFAULT_TOL_NILP
    nilpotency: list = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        H = check_matrix(self.H_EP, square=True, name="H_EP")
        n = H.shape[0] if self.n is None else check_order(self.n)
        if n != H.shape[0]:
            raise InvalidInput(f"order {n} does not match H_EP of size {H.shape[0]}")
        if n < 2:
            raise InvalidInput("an EP needs order n >= 2")
        H.setflags(write=False)
        object.__setattr__(self, "H_EP", H)
        object.__setattr__(self, "E_EP", complex(self.E_EP))
        object.__setattr__(self, "n", n)

        norms = nilpotency_norms(self.N, n)
        object.__setattr__(self, "nilpotency", norms)
        base = norms[0]
        ok = base > 0 and norms[n - 1] <= self.tol_nilp * base**n and norms[n - 2] > self.tol_nilp * base ** (n - 1)
        if not ok:
            raise NotAnEP(
                f"H_EP - E_EP is not nilpotent of index {n} (||N^k|| = {', '.join(f'{v:.3e}' for v in norms)})",
                norms,
            )

    @property
    def N(self):
        return self.H_EP - self.E_EP * np.eye(self.H_EP.shape[0])


@dataclass(frozen=True, eq=False)
class JordanChain:
    """Columns ``vectors[:, k-1]`` hold the Jordan vector ``J_k``."""

    vectors: np.ndarray
    ep: EPSpec

    def __len__(self):
        return self.vectors.shape[1]

    def __getitem__(self, k):
        """1-based access: ``chain[k]`` is ``J_k``."""
        if not 1 <= k <= len(self):
            raise IndexError(k)
        return self.vectors[:, k - 1]

    def chain_residuals(self):
        """``||N J_k - J_{k-1}||`` for k = 1..n with ``J_0 = 0``."""
        N = self.ep.N
        V = self.vectors
        prev = np.concatenate([np.zeros((V.shape[0], 1)), V[:, :-1]], axis=1)
        return np.linalg.norm(N @ V - prev, axis=0)

    def last_overlaps(self):
        """``|<J_n|J_k>|`` for k = 1..n-1."""
        Jn = self.vectors[:, -1]
        return np.abs(self.vectors[:, :-1].conj().T @ Jn)

    def to_json(self):
        return [[[float(z.real), float(z.imag)] for z in self.vectors[:, k]] for k in range(len(self))]


def _regauge(V):
    """Add lower chain members so that J_n is orthogonal to J_1..J_{n-1}.

    Any chain stays a chain under ``J_k -> sum_j c_j J_{k-j}``. With
    ``c_0 = 1`` the remaining coefficients follow from projecting ``J_n``
    onto span(J_1..J_{n-1}).
    """
    n = V.shape[1]
    b, *_ = sla.lstsq(V[:, :-1], V[:, -1])
    c = np.concatenate([[1.0], -b[::-1]])
    out = np.zeros_like(V)
    for k in range(n):
        out[:, k] = V[:, k::-1] @ c[: k + 1]
    return out


def build_chain(ep, rank_tol=DEFAULT_RANK_TOL, refine=1):
    """Construct the normalized Jordan chain of ``ep``.

    ``J_1`` is the unit null vector of ``N``; each following vector is the
    least-norm solution of ``N x = J_{k-1}``. The raw chain is then
    regauged (``refine`` extra passes tighten the orthogonality in the
    presence of roundoff) and the global phase is fixed so that the
    largest-magnitude entry of ``J_1`` is real and positive.
    """
    if not isinstance(ep, EPSpec):
        raise InvalidInput("build_chain expects an EPSpec")
    N = ep.N
    n = ep.n
    _, _, Vh = sla.svd(N)
    V = np.zeros((n, n), dtype=complex)
    V[:, 0] = Vh[-1].conj()
    for k in range(1, n):
        V[:, k] = solve_least_norm(N, V[:, k - 1], rank_tol=rank_tol, rank=n - 1)

    for _ in range(1 + refine):
        V = _regauge(V)
    V = V / np.linalg.norm(V[:, 0])
    pivot = V[np.argmax(np.abs(V[:, 0])), 0]
    V = V * (abs(pivot) / pivot)
    V.setflags(write=False)
    return JordanChain(V, ep)


def xi_from_chain(chain):
    """Spectral response strength as the inverse length of ``J_n``."""
    length = float(np.linalg.norm(chain.vectors[:, -1]))
    if not length > 0:
        raise InternalError("last Jordan vector has zero length")
    return 1.0 / length


def left_ep_vector(ep):
    """Unit left eigenvector of ``H_EP`` at ``E_EP`` (left null vector of N)."""
    U, _, _ = sla.svd(ep.N)
    return U[:, -1]


@dataclass(frozen=True, eq=False)
class LeftOrthogonalityReport:
    """``|<L_EP|J_k>|`` for k = 1..n against the expected ``||J_n|| delta_kn``."""

    overlaps: np.ndarray
    last_length: float
    tol: float

    @property
    def off_diagonal_max(self):
        return float(self.overlaps[:-1].max())

    @property
    def last_gap(self):
        return float(abs(self.overlaps[-1] - self.last_length))

    @property
    def passed(self):
        return self.off_diagonal_max <= self.tol and self.last_gap <= self.tol


def check_left_orthogonality(chain, L_EP=None, tol=1e-9):
    """Check that L_EP is orthogonal to J_1..J_{n-1} and parallel to J_n."""
    if L_EP is None:
        L_EP = left_ep_vector(chain.ep)
    L_EP = check_vector(L_EP, size=chain.vectors.shape[0], name="L_EP")
    L_EP = L_EP / np.linalg.norm(L_EP)
    overlaps = np.array([abs(inner(L_EP, chain.vectors[:, k])) for k in range(len(chain))])
    return LeftOrthogonalityReport(overlaps, float(np.linalg.norm(chain.vectors[:, -1])), tol)
