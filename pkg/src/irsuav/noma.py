"""Superposition-coding downlink: decoding order, SINRs, rates, feasibility.

All users share the band; the receiver with the j-th weakest effective
channel cancels the signals of the j-1 weaker users before decoding its own,
treating the stronger users' signals as interference. Ordering users by
current channel quality makes the cancellation condition hold automatically,
so ``check_sic`` exists as a runtime assertion and test oracle rather than a
constraint the optimizer has to fight.
"""

from dataclasses import dataclass

import numpy as np

from .validation import check_gains, check_power_allocation, check_positive


@dataclass(frozen=True)
class SystemPower:
    """Linear transmit power budget and linear noise power."""

    p_max: float
    sigma2: float

    def __post_init__(self):
        check_positive(self.p_max, "p_max")
        check_positive(self.sigma2, "sigma2")

    @classmethod
    def from_db(cls, power_db, noise_db):
        return cls(p_max=10.0 ** (power_db / 10.0), sigma2=10.0 ** (noise_db / 10.0))


@dataclass(frozen=True, eq=False)
class RateReport:
    """Per-step decoding outcome.

    Vectors are indexed by decoding position (weakest channel first);
    ``order[i]`` is the original user index decoded at position i.
    """

    order: np.ndarray      # (K,) int
    sinr: np.ndarray       # (K,) SINR of each position decoding its own signal
    rate: np.ndarray       # (K,) bits/s/Hz
    sum_rate: float
    qos_user: np.ndarray   # (K,) bool, rate >= r_min per position
    qos_ok: bool


def decoding_order(gain_mag2):
    """Indices sorted by ascending squared channel magnitude.

    Position 0 is the weakest user. Ties keep the lower original index first.
    """
    gains = check_gains(gain_mag2)
    return np.argsort(gains, kind="stable")


def sinr_own(gain_mag2_sorted, rho_sorted, power, j):
    """SINR of the user at decoding position ``j`` decoding its own signal.

    Inputs must already be permuted into decoding order. Users at later
    positions (stronger channels) remain as interference; for the last
    position the interference sum is empty.
    """
    gains = np.asarray(gain_mag2_sorted, dtype=np.float64)
    rho = np.asarray(rho_sorted, dtype=np.float64)
    signal = gains[j] * power.p_max * rho[j]
    interference = gains[j] * power.p_max * rho[j + 1:].sum()
    return float(signal / (interference + power.sigma2))


def sinr_cross(gain_mag2_sorted, rho_sorted, power, t, j):
    """SINR of the user at position ``j`` decoding position ``t``'s signal, t < j."""
    if t >= j:
        raise ValueError(f"cross decoding requires t < j, got t={t}, j={j}")
    gains = np.asarray(gain_mag2_sorted, dtype=np.float64)
    rho = np.asarray(rho_sorted, dtype=np.float64)
    signal = gains[j] * power.p_max * rho[t]
    interference = gains[j] * power.p_max * rho[t + 1:].sum()
    return float(signal / (interference + power.sigma2))


def rate_report(gain_mag2, rho, power, r_min):
    """Order users by channel quality and evaluate everyone's rate.

    ``rho`` is indexed by decoding position (rho[0] feeds whichever user is
    currently weakest), matching how the control action is laid out. Rates
    are log2(1 + SINR) in bits/s/Hz.
    """
    gains = check_gains(gain_mag2)
    order = np.argsort(gains, kind="stable")
    gains_sorted = gains[order]
    rho = check_power_allocation(rho, gains.shape[0])
    n = gains.shape[0]
    sinr = np.empty(n)
    for j in range(n):
        sinr[j] = sinr_own(gains_sorted, rho, power, j)
    rate = np.log2(1.0 + sinr)
    qos_user = rate >= r_min
    return RateReport(
        order=order,
        sinr=sinr,
        rate=rate,
        sum_rate=float(rate.sum()),
        qos_user=qos_user,
        qos_ok=bool(qos_user.all()),
    )


def check_sic(gain_mag2_sorted, rho_sorted, power):
    """True iff every stronger user can decode every weaker user's signal
    at least as well as the weaker user itself can (vacuous for one user)."""
    n = np.asarray(gain_mag2_sorted).shape[0]
    for t in range(n):
        own = sinr_own(gain_mag2_sorted, rho_sorted, power, t)
        for j in range(t + 1, n):
            if sinr_cross(gain_mag2_sorted, rho_sorted, power, t, j) < own:
                return False
    return True
