"""Input validation helpers.

All public entry points funnel user data through these functions so that
arrays reaching the numerical code are finite complex ndarrays of the
expected rank.
"""

import numbers

import numpy as np

from .exceptions import InvalidInput

__all__ = ["check_matrix", "check_vector", "check_order", "check_stack", "parse_complex"]


def check_matrix(A, *, square=False, name="matrix"):
    """Return ``A`` as a finite 2-D complex ndarray.

    Parameters
    ----------
    A : array_like
        Candidate matrix.
    square : bool
        Require ``A.shape[0] == A.shape[1]``.
    name : str
        Used in error messages.
    """
    try:
        arr = np.asarray(A, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{name}: cannot convert to a complex array ({exc})") from None
    if arr.ndim != 2:
        raise InvalidInput(f"{name}: expected a 2-D array, got ndim={arr.ndim}")
    if arr.size == 0:
        raise InvalidInput(f"{name}: empty matrix")
    if square and arr.shape[0] != arr.shape[1]:
        raise InvalidInput(f"{name}: expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name}: contains NaN or Inf entries")
    return arr


def check_vector(v, *, size=None, name="vector"):
    try:
        arr = np.asarray(v, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{name}: cannot convert to a complex array ({exc})") from None
    if arr.ndim != 1:
        raise InvalidInput(f"{name}: expected a 1-D array, got ndim={arr.ndim}")
    if size is not None and arr.shape[0] != size:
        raise InvalidInput(f"{name}: expected length {size}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name}: contains NaN or Inf entries")
    return arr


def check_stack(X, *, name="X"):
    """Accept one square matrix or a stack of them; always return a 3-D array."""
    arr = np.asarray(X, dtype=complex)
    if arr.ndim == 2:
        arr = arr[np.newaxis]
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise InvalidInput(f"{name}: expected (m, m) or (k, m, m), got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name}: contains NaN or Inf entries")
    return arr


def check_order(n, *, minimum=2, name="order"):
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise InvalidInput(f"{name}: expected an integer, got {n!r}")
    if n < minimum:
        raise InvalidInput(f"{name}: must be >= {minimum}, got {n}")
    return int(n)


def parse_complex(text):
    """Parse ``"RE,IM"`` (or a bare ``"RE"``) into a complex number."""
    parts = [p.strip() for p in str(text).split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise InvalidInput(f"cannot parse complex number from {text!r}; expected 'RE,IM'")
