"""Input validation helpers.

Small ``check_*`` functions in the scikit-learn spirit: coerce to float64
arrays, verify shapes/ranges, and raise ``ValueError`` with the argument name
in the message. All return the validated (possibly copied) value.
"""

import numpy as np


def check_positive_int(value, name):
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_positive(value, name):
    value = float(value)
    if not np.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be positive and finite, got {value!r}")
    return value


def check_non_negative(value, name, allow_inf=False):
    value = float(value)
    if np.isnan(value) or value < 0.0 or (not allow_inf and np.isinf(value)):
        raise ValueError(f"{name} must be non-negative, got {value!r}")
    return value


def check_vector(x, length, name, dtype=np.float64):
    """Coerce ``x`` to a 1-D array of exactly ``length`` entries."""
    arr = np.asarray(x, dtype=dtype)
    if arr.ndim != 1 or arr.shape[0] != length:
        raise ValueError(f"{name} must be a length-{length} vector, got shape {arr.shape}")
    return arr


def check_finite(arr, name):
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must contain only finite values")
    return arr


def check_gains(gain_mag2, name="gain_mag2"):
    """Squared channel magnitudes: 1-D, finite, non-negative."""
    arr = np.asarray(gain_mag2, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D vector, got shape {arr.shape}")
    check_finite(arr, name)
    if np.any(arr < 0.0):
        raise ValueError(f"{name} entries must be non-negative")
    return arr


def check_power_allocation(rho, n_users, name="rho"):
    """Allocation coefficients: each in [0, 1], summing to at most 1."""
    arr = check_vector(rho, n_users, name)
    check_finite(arr, name)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError(f"{name} entries must lie in [0, 1]")
    if arr.sum() > 1.0 + 1e-9:
        raise ValueError(f"{name} must sum to at most 1, got {arr.sum()!r}")
    return arr


def check_phase_shift(theta, n_elements, name="theta"):
    """Per-element phase angles in [0, 2*pi]."""
    arr = check_vector(theta, n_elements, name)
    check_finite(arr, name)
    if np.any(arr < 0.0) or np.any(arr > 2.0 * np.pi):
        raise ValueError(f"{name} entries must lie in [0, 2*pi]")
    return arr
