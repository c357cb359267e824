import numpy as np
import pytest

from irsuav.noma import (
    RateReport,
    SystemPower,
    check_sic,
    decoding_order,
    rate_report,
    sinr_cross,
    sinr_own,
)

POWER = SystemPower(p_max=10.0, sigma2=1e-6)


def random_instance(rng, k):
    """Random gains, a random allocation summing to <= 1, random powers."""
    gains = rng.lognormal(mean=0.0, sigma=1.5, size=k)
    rho = rng.dirichlet(np.ones(k)) * rng.uniform(0.5, 1.0)
    power = SystemPower(
        p_max=float(10.0 ** rng.uniform(-1.0, 3.0)),
        sigma2=float(10.0 ** rng.uniform(-9.0, 0.0)),
    )
    return gains, rho, power


def test_system_power_from_db():
    p = SystemPower.from_db(10.0, -60.0)
    assert p.p_max == pytest.approx(10.0, rel=1e-15)
    assert p.sigma2 == pytest.approx(1e-6, rel=1e-12)


def test_system_power_rejects_nonpositive():
    with pytest.raises(ValueError):
        SystemPower(p_max=0.0, sigma2=1e-6)
    with pytest.raises(ValueError):
        SystemPower(p_max=1.0, sigma2=-1.0)


def test_decoding_order_sorts_ascending():
    np.testing.assert_array_equal(decoding_order([0.9, 0.1, 0.5]), [1, 2, 0])


def test_decoding_order_breaks_ties_by_index():
    np.testing.assert_array_equal(decoding_order([0.4, 0.4]), [0, 1])
    np.testing.assert_array_equal(decoding_order([0.7, 0.4, 0.4, 0.1]), [3, 1, 2, 0])


def test_decoding_order_singleton():
    np.testing.assert_array_equal(decoding_order([2.5]), [0])


def test_decoding_order_rejects_bad_input():
    with pytest.raises(ValueError):
        decoding_order([0.5, -0.1])
    with pytest.raises(ValueError):
        decoding_order([0.5, np.nan])


def test_sinr_own_reference_instance():
    # sorted gains (0.5, 1.0), split (0.8, 0.2), P=10, sigma2=1e-6
    gains = np.array([0.5, 1.0])
    rho = np.array([0.8, 0.2])
    s0 = sinr_own(gains, rho, POWER, 0)
    s1 = sinr_own(gains, rho, POWER, 1)
    assert s0 == pytest.approx((0.5 * 10 * 0.8) / (0.5 * 10 * 0.2 + 1e-6), rel=1e-15)
    assert s0 == pytest.approx(3.999996, abs=1e-6)
    assert s1 == pytest.approx((1.0 * 10 * 0.2) / 1e-6, rel=1e-15)
    assert s1 == pytest.approx(2e6, rel=1e-9)


def test_sinr_own_zero_allocation():
    assert sinr_own([0.5, 1.0], [0.0, 0.5], POWER, 0) == 0.0


def test_sinr_own_single_user_has_no_interference():
    assert sinr_own([0.3], [1.0], POWER, 0) == pytest.approx(0.3 * 10 / 1e-6, rel=1e-15)


def test_sinr_cross_reference_instance():
    gains = np.array([0.5, 1.0])
    rho = np.array([0.8, 0.2])
    cross = sinr_cross(gains, rho, POWER, 0, 1)
    assert cross == pytest.approx((1.0 * 10 * 0.8) / (1.0 * 10 * 0.2 + 1e-6), rel=1e-15)
    assert cross == pytest.approx(3.999998, abs=1e-6)
    assert cross >= sinr_own(gains, rho, POWER, 0)


def test_sinr_cross_equal_gains_coincide_with_own():
    gains = np.array([0.7, 0.7])
    rho = np.array([0.6, 0.4])
    assert sinr_cross(gains, rho, POWER, 0, 1) == sinr_own(gains, rho, POWER, 0)


def test_sinr_cross_zero_allocation():
    assert sinr_cross([0.5, 1.0], [0.0, 0.5], POWER, 0, 1) == 0.0


def test_sinr_cross_requires_t_before_j():
    with pytest.raises(ValueError):
        sinr_cross([0.5, 1.0], [0.5, 0.5], POWER, 1, 1)
    with pytest.raises(ValueError):
        sinr_cross([0.5, 1.0], [0.5, 0.5], POWER, 1, 0)


def test_cancellation_property_random_instances():
    # whoever decodes later (stronger channel) sees the earlier user's signal
    # at least as cleanly as its owner does; zero violations expected
    rng = np.random.default_rng(2024)
    for _ in range(2000):
        k = int(rng.integers(2, 7))
        gains, rho, power = random_instance(rng, k)
        order = decoding_order(gains)
        gains_sorted = gains[order]
        for t in range(k):
            own = sinr_own(gains_sorted, rho, power, t)
            for j in range(t + 1, k):
                assert sinr_cross(gains_sorted, rho, power, t, j) >= own


def test_check_sic_true_in_decoding_order():
    rng = np.random.default_rng(31)
    for _ in range(200):
        k = int(rng.integers(1, 6))
        gains, rho, power = random_instance(rng, k)
        gains_sorted = gains[decoding_order(gains)]
        assert check_sic(gains_sorted, rho, power)


def test_check_sic_false_when_order_reversed():
    # strongest decoded first with real noise: the weak receiver cannot match
    # the strong receiver's SINR on the shared signal
    power = SystemPower(p_max=10.0, sigma2=1.0)
    gains_desc = np.array([2.0, 0.1])
    rho = np.array([0.5, 0.5])
    assert not check_sic(gains_desc, rho, power)


def test_check_sic_vacuous_single_user():
    assert check_sic([0.4], [1.0], POWER)


def test_sinr_own_monotone_in_allocations():
    rng = np.random.default_rng(64)
    for _ in range(200):
        k = int(rng.integers(2, 6))
        gains, rho, power = random_instance(rng, k)
        gains_sorted = np.sort(gains)
        j = int(rng.integers(0, k))
        base = sinr_own(gains_sorted, rho, power, j)
        bump = 1e-3
        more_own = rho.copy()
        more_own[j] = min(1.0, more_own[j] + bump)
        assert sinr_own(gains_sorted, more_own, power, j) >= base
        if j + 1 < k:
            more_interf = rho.copy()
            more_interf[j + 1] = min(1.0, more_interf[j + 1] + bump)
            assert sinr_own(gains_sorted, more_interf, power, j) <= base


def test_rate_report_fields_and_order():
    gains = np.array([0.9, 0.1, 0.5])
    rho = np.array([0.5, 0.3, 0.2])
    report = rate_report(gains, rho, POWER, r_min=1.2)
    np.testing.assert_array_equal(report.order, [1, 2, 0])
    gains_sorted = gains[report.order]
    for j in range(3):
        assert report.sinr[j] == sinr_own(gains_sorted, rho, POWER, j)
    np.testing.assert_array_equal(report.rate, np.log2(1.0 + report.sinr))
    assert report.sum_rate == pytest.approx(report.rate.sum(), rel=1e-15)
    np.testing.assert_array_equal(report.qos_user, report.rate >= 1.2)
    assert report.qos_ok == bool(report.qos_user.all())


def test_rate_report_qos_threshold_cases():
    # engineer a two-user instance with rates ~(1.25, 1.30): the weak-decoded
    # position needs sinr 2^1.3 - 1 given 90/10 power, the strong position
    # sinr 2^1.25 - 1 from its 10% share
    s_weak = 2.0 ** 1.3 - 1.0
    s_strong = 2.0 ** 1.25 - 1.0
    power = SystemPower(p_max=1.0, sigma2=1.0)
    rho = np.array([0.9, 0.1])
    g_strong = s_strong / 0.1
    g_weak = s_weak / (0.9 - 0.1 * s_weak)
    assert g_weak < g_strong
    report = rate_report(np.array([g_strong, g_weak]), rho, power, r_min=1.2)
    np.testing.assert_allclose(report.rate, [1.3, 1.25], rtol=1e-12)
    assert report.qos_ok
    report = rate_report(np.array([g_strong, g_weak]), rho, power, r_min=1.28)
    assert not report.qos_ok
    np.testing.assert_array_equal(report.qos_user, [True, False])


def test_rate_report_rejects_invalid_allocation():
    with pytest.raises(ValueError):
        rate_report([0.5, 1.0], [0.8, 0.4], POWER, 1.2)
    with pytest.raises(ValueError):
        rate_report([0.5, 1.0], [-0.1, 0.5], POWER, 1.2)


def test_telescoping_sum_rate_equal_channels():
    # identical gains: interference terms cancel pairwise and the sum rate
    # collapses to a single log
    rng = np.random.default_rng(99)
    for _ in range(1000):
        k = int(rng.integers(1, 7))
        g = float(rng.lognormal(0.0, 1.0))
        rho = rng.dirichlet(np.ones(k))
        power = SystemPower(p_max=float(10.0 ** rng.uniform(-1, 2)),
                            sigma2=float(10.0 ** rng.uniform(-8, 0)))
        report = rate_report(np.full(k, g), rho, power, r_min=1.2)
        expect = np.log2(1.0 + g * power.p_max * rho.sum() / power.sigma2)
        assert report.sum_rate == pytest.approx(expect, rel=1e-9)
