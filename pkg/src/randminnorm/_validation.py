"""Input validation helpers.

scikit-learn's ``check_array`` rejects complex input, so the estimators and
the functional API share these instead.
"""

import numbers

import numpy as np

from .exceptions import DimensionError


def as_complex_array(X, name="X", ndim=2, copy=False):
    """Convert ``X`` to a finite complex128 ndarray with ``ndim`` dimensions."""
    try:
        arr = np.array(X, dtype=np.complex128, copy=copy or None)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} could not be converted to a complex array") from exc
    if arr.ndim != ndim:
        raise DimensionError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise DimensionError(f"{name} is empty (shape {arr.shape})")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite entries")
    return arr


def as_complex_vector(x, name="x", length=None):
    """Convert ``x`` to a 1-D complex vector, accepting ``(k, 1)`` columns."""
    arr = np.asarray(x)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    arr = as_complex_array(arr, name=name, ndim=1)
    if length is not None and arr.shape[0] != length:
        raise DimensionError(f"{name} has length {arr.shape[0]}, expected {length}")
    return arr


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_sampling(mode):
    """Normalize a sampling mode to ``True`` (with replacement) or ``False``."""
    if mode in ("with", True):
        return True
    if mode in ("without", False):
        return False
    raise ValueError(f"sampling mode must be 'with' or 'without', got {mode!r}")
