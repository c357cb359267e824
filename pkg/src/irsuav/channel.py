"""Rician channel generation and cascaded effective gains for an aerial IRS link.

The base station reaches every user only through the reflecting surface
carried by the UAV, so an effective scalar channel per user is the phase-
steered inner product of the two hops, attenuated by the product-distance
path loss.
"""

from dataclasses import dataclass, field

import numpy as np

from .validation import check_non_negative, check_positive_int, check_vector

TWO_PI = 2.0 * np.pi


def wrap_angle(theta):
    """Wrap angles (radians) into [0, 2*pi)."""
    return np.mod(theta, TWO_PI)


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned service rectangle, coordinates in meters."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self):
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("degenerate rectangle: max bounds must exceed min bounds")

    def contains(self, xy):
        x, y = float(xy[0]), float(xy[1])
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max

    def from_unit(self, z):
        """Affine map of [-1, 1]^2 onto the rectangle (0 maps to the center)."""
        zx = (float(z[0]) + 1.0) / 2.0
        zy = (float(z[1]) + 1.0) / 2.0
        return np.array([
            self.x_min + zx * (self.x_max - self.x_min),
            self.y_min + zy * (self.y_max - self.y_min),
        ])

    @property
    def center(self):
        return np.array([0.5 * (self.x_min + self.x_max), 0.5 * (self.y_min + self.y_max)])


@dataclass(frozen=True, eq=False)
class NetworkGeometry:
    """Node placement and large-scale propagation parameters.

    ``uav_xy`` is only required to lie inside ``area`` once it comes out of an
    action decode; the configured start point (a charge pad) may sit outside.
    """

    bs_xy: np.ndarray
    bs_height: float
    uav_xy: np.ndarray
    uav_height: float
    user_xy: np.ndarray  # (n_users, 2)
    area: Rectangle
    path_loss_exp: float

    def __post_init__(self):
        object.__setattr__(self, "bs_xy", np.asarray(self.bs_xy, dtype=np.float64))
        object.__setattr__(self, "uav_xy", np.asarray(self.uav_xy, dtype=np.float64))
        object.__setattr__(self, "user_xy", np.asarray(self.user_xy, dtype=np.float64))
        if self.bs_xy.shape != (2,) or self.uav_xy.shape != (2,):
            raise ValueError("bs_xy and uav_xy must be 2-vectors")
        if self.user_xy.ndim != 2 or self.user_xy.shape[1] != 2 or self.user_xy.shape[0] < 1:
            raise ValueError("user_xy must have shape (n_users, 2)")
        if not (self.bs_height > 0.0 and self.uav_height > 0.0):
            raise ValueError("bs_height and uav_height must be positive")
        if self.path_loss_exp < 0.0:
            raise ValueError("path_loss_exp must be non-negative")

    @property
    def n_users(self):
        return self.user_xy.shape[0]


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """One episode's small-scale fading state.

    ``bs_irs`` is the vector from the base station to the surface elements;
    column ``k`` of ``irs_users`` is the vector from the elements to user k.
    The ``*_los`` arrays hold the unit-modulus deterministic components.
    """

    bs_irs: np.ndarray        # (n_elements,) complex
    irs_users: np.ndarray     # (n_elements, n_users) complex
    bs_irs_los: np.ndarray
    irs_users_los: np.ndarray
    rician_factor: float

    def __post_init__(self):
        if self.bs_irs.ndim != 1 or self.irs_users.ndim != 2:
            raise ValueError("bs_irs must be 1-D and irs_users 2-D")
        if self.irs_users.shape[0] != self.bs_irs.shape[0]:
            raise ValueError("element counts of bs_irs and irs_users differ")
        for name in ("bs_irs", "irs_users", "bs_irs_los", "irs_users_los"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValueError(f"{name} contains non-finite entries")

    @property
    def n_elements(self):
        return self.bs_irs.shape[0]

    @property
    def n_users(self):
        return self.irs_users.shape[1]


def sample_rician(n_elements, n_users, omega, rng):
    """Draw one channel realization with Rician factor ``omega``.

    Both hops mix a unit-modulus deterministic component (phases uniform,
    drawn once per realization) with a circularly symmetric complex Gaussian
    scattered component of unit power:

        sqrt(omega / (omega + 1)) * los + sqrt(1 / (omega + 1)) * scatter

    so every entry keeps unit second moment for any omega. ``omega`` may be
    ``inf`` (pure deterministic) or 0 (pure Rayleigh). Deterministic given
    the generator state; draw order is fixed (BS-hop LoS, BS-hop scatter,
    user-hop LoS, user-hop scatter).
    """
    n_elements = check_positive_int(n_elements, "n_elements")
    n_users = check_positive_int(n_users, "n_users")
    omega = check_non_negative(omega, "omega", allow_inf=True)

    bs_los = np.exp(1j * rng.uniform(0.0, TWO_PI, size=n_elements))
    bs_scatter = (rng.standard_normal(n_elements) + 1j * rng.standard_normal(n_elements)) / np.sqrt(2.0)
    user_los = np.exp(1j * rng.uniform(0.0, TWO_PI, size=(n_elements, n_users)))
    user_scatter = (
        rng.standard_normal((n_elements, n_users))
        + 1j * rng.standard_normal((n_elements, n_users))
    ) / np.sqrt(2.0)

    if np.isinf(omega):
        w_los, w_scatter = 1.0, 0.0
    else:
        w_los = np.sqrt(omega / (omega + 1.0))
        w_scatter = np.sqrt(1.0 / (omega + 1.0))

    return ChannelRealization(
        bs_irs=w_los * bs_los + w_scatter * bs_scatter,
        irs_users=w_los * user_los + w_scatter * user_scatter,
        bs_irs_los=bs_los,
        irs_users_los=user_los,
        rician_factor=omega,
    )


def link_distances(geom):
    """Distances of the two hops: BS->surface scalar, surface->user vector.

    A coincident BS/UAV placement (zero first-hop distance) is a
    configuration bug, not a channel state, and raises ``ValueError``.
    """
    delta = geom.uav_xy - geom.bs_xy
    d_bs_irs = float(np.sqrt(delta @ delta + (geom.bs_height - geom.uav_height) ** 2))
    if d_bs_irs == 0.0:
        raise ValueError("degenerate geometry: BS and UAV-IRS positions coincide")
    offsets = geom.uav_xy[None, :] - geom.user_xy
    d_irs_users = np.sqrt((offsets ** 2).sum(axis=1) + geom.uav_height ** 2)
    return d_bs_irs, d_irs_users


def effective_gains(realization, theta, geom):
    """Effective complex channel of every user for one phase configuration.

    Entry k is  conj(h_k)^T diag(e^{j theta}) g / (d_bs_irs * d_irs_user_k)^alpha.
    """
    theta = check_vector(theta, realization.n_elements, "theta")
    if geom.n_users != realization.n_users:
        raise ValueError("geometry and realization disagree on the number of users")
    d_bs_irs, d_irs_users = link_distances(geom)
    steered = np.exp(1j * theta) * realization.bs_irs            # (N,)
    cascade = (np.conj(realization.irs_users) * steered[:, None]).sum(axis=0)
    return cascade / (d_bs_irs * d_irs_users) ** geom.path_loss_exp


def effective_gain(realization, theta, geom, user_index):
    """Effective complex channel of a single user (0-based index)."""
    if not 0 <= user_index < realization.n_users:
        raise ValueError(f"user_index out of range: {user_index}")
    theta = check_vector(theta, realization.n_elements, "theta")
    d_bs_irs, d_irs_users = link_distances(geom)
    steered = np.exp(1j * theta) * realization.bs_irs
    cascade = (np.conj(realization.irs_users[:, user_index]) * steered).sum()
    return complex(cascade / (d_bs_irs * d_irs_users[user_index]) ** geom.path_loss_exp)
