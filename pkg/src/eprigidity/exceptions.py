"""Exception hierarchy shared by all modules."""


class EPError(Exception):
    """Base class for errors raised by :mod:`eprigidity`."""


class InvalidInput(EPError, ValueError):
    """Raised when an argument has the wrong shape or non-finite entries."""


class PairingError(EPError):
    """Raised when left and right eigenvalues cannot be matched one-to-one.

    The ambiguous (right index, candidate left indices) are kept in
    ``indices``.
    """

    def __init__(self, msg, indices):
        super().__init__(msg)
        self.indices = indices


class NoSolution(EPError):
    """Raised when a linear system has no solution within tolerance."""


class NotAnEP(EPError):
    """Raised when a matrix is not a single Jordan block of the given order.

    ``norms`` holds the sequence ``||N^k||`` for k = 1..n, useful for
    diagnosing what went wrong.
    """

    def __init__(self, msg, norms=()):
        super().__init__(msg)
        self.norms = list(norms)


class DivergesAtEP(EPError, ZeroDivisionError):
    """Raised when a Petermann factor is requested exactly at the EP."""


class TrackingError(EPError):
    """Raised when an eigenvalue cannot be followed unambiguously."""


class NoEPCandidate(EPError):
    """Raised when no eigenstate qualifies as part of the perturbed EP."""


class InternalError(EPError):
    """An invariant that should be guaranteed by construction was violated."""
