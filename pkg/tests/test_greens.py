import numpy as np
import pytest

from qelattice.config import LatticeConfig
from qelattice import greens

CFG05 = LatticeConfig(period_l=0.5)
K0 = 2 * np.pi

# frozen cross-checked value: Re from the damped direct sum (independent
# evaluator), Im from the exact radiative-order identity (3/pi - 1)/3
GBAR_GAMMA_05 = -0.266888 - 0.015023447j


def test_dyadic_self_damping_limit():
    # Im of the projected tensor at r -> 0 approaches k/(6 pi): this is
    # what makes gamma_ii = gamma0 exactly in reduced units
    mu = np.array([1.0, 0.0, 0.0])
    # approach is O((kr)^2); r balances series vs cancellation error
    g = greens.dyadic_green(np.array([1e-4, 0.0, 0.0]))
    assert (mu @ g @ mu).imag == pytest.approx(K0 / (6 * np.pi), rel=1e-5)


def test_pair_coupling_self():
    pc = greens.pair_coupling(np.zeros(3), CFG05)
    assert pc.gamma_ij == pytest.approx(1.0, abs=1e-12)


def test_pair_coupling_far_decay():
    pc = greens.pair_coupling(np.array([1e3, 0.0, 0.0]), CFG05)
    assert abs(pc.g_ij) <= 1e-3
    assert abs(pc.gamma_ij) <= 1e-3


def test_pair_coupling_inversion_symmetry():
    r = np.array([0.37, -0.21, 0.0])
    a = greens.pair_coupling(r, CFG05)
    b = greens.pair_coupling(-r, CFG05)
    assert a.g_ij == pytest.approx(b.g_ij, rel=1e-12)
    assert a.gamma_ij == pytest.approx(b.gamma_ij, rel=1e-12)


def test_ewald_gamma_point():
    res = greens.lattice_sum_ewald((0.0, 0.0), CFG05)
    # single radiative order: gamma_k = 3 pi / (k0 l)^2 * ... = 3/pi exactly
    assert res.gamma_k == pytest.approx(3.0 / np.pi, rel=1e-12)
    assert res.g_bar == pytest.approx(GBAR_GAMMA_05, rel=1e-5)


def test_ewald_m_point_dark():
    res = greens.lattice_sum_ewald((np.pi / 0.5, np.pi / 0.5), CFG05)
    assert abs(res.gamma_k) <= 1e-6


def test_ewald_split_independence():
    a = greens.lattice_sum_ewald((1.3, 0.4), CFG05)
    b = greens.lattice_sum_ewald((1.3, 0.4), CFG05,
                                 split=0.5 * np.sqrt(np.pi) / 0.5)
    assert a.g_bar == pytest.approx(b.g_bar, rel=1e-8)


def test_point_symmetry():
    a = greens.lattice_sum_ewald((1.1, 0.7), CFG05)
    b = greens.lattice_sum_ewald((-1.1, -0.7), CFG05)
    assert a.g_bar == pytest.approx(b.g_bar, rel=1e-10)


def test_gamma_nonnegative_inside_light_cone():
    for kp in [(0.0, 0.0), (2.0, 0.0), (3.0, 2.0), (5.0, 1.0)]:
        res = greens.lattice_sum_ewald(kp, CFG05)
        assert res.gamma_k >= -1e-9


def test_gamma_zero_outside_light_cone():
    # k points beyond k0 with no radiative order (l = 0.5: any |k| > k0
    # inside the BZ)
    for kp in [(5.5, 4.0), (5.0, 5.0), (np.pi / 0.5, 0.9 * np.pi / 0.5)]:
        if np.hypot(*kp) <= K0:
            continue
        res = greens.lattice_sum_ewald(kp, CFG05)
        assert abs(res.gamma_k) <= 1e-6


def test_direct_matches_ewald():
    for kp in [(0.0, 0.0), (2.0, 1.1), (4.0, 0.5)]:
        e = greens.lattice_sum_ewald(kp, CFG05)
        d = greens.lattice_sum_direct(kp, CFG05)
        assert abs(d.g_bar - e.g_bar) <= 1e-5 * abs(e.g_bar)
        assert d.err_estimate > 0


def test_direct_gamma_point_identity():
    d = greens.lattice_sum_direct((0.0, 0.0), CFG05)
    assert d.gamma_k == pytest.approx(3.0 / np.pi, rel=1e-5)


def test_direct_m_point_dark():
    d = greens.lattice_sum_direct((np.pi / 0.5, np.pi / 0.5), CFG05)
    assert abs(d.gamma_k) <= 1e-6


def test_divergence_toward_resonant_period():
    # |Re Gbar| at the zone center grows monotonically as l -> lambda0
    vals = [abs(greens.lattice_sum_ewald((0.0, 0.0),
                                         LatticeConfig(period_l=l)).g_bar.real)
            for l in (0.9, 0.99, 0.999, 0.9999)]
    assert np.all(np.diff(vals) > 0)
    assert vals[-1] > 10.0


def test_near_resonant_period_finite():
    res = greens.lattice_sum_ewald((0.0, 0.0),
                                   LatticeConfig(period_l=0.9999))
    assert np.isfinite(res.g_bar.real) and np.isfinite(res.g_bar.imag)
    assert res.g_bar == pytest.approx(11.103971521834 - 0.253739943905j,
                                      rel=1e-9)


def test_threshold_rejected():
    with pytest.raises(greens.LatticeSumError):
        greens.lattice_sum_ewald((K0, 0.0), CFG05)


def test_radiative_order_identity():
    # gamma_k equals the closed sum over radiative diffraction orders
    from qelattice import emission
    for kp in [(0.0, 0.0), (1.7, 0.6), (3.5, 2.0)]:
        g = greens.lattice_sum_ewald(kp, CFG05).gamma_k
        s = emission.coherent_order_sum(kp, CFG05)
        assert s == pytest.approx(g, rel=1e-5)


def test_collective_dispersion_wiring():
    dk, gk = greens.collective_dispersion((0.9, 0.2), CFG05, delta=0.7)
    res = greens.lattice_sum_ewald((0.9, 0.2), CFG05)
    assert dk == pytest.approx(0.7 + 1.5 * res.g_bar.real, rel=1e-12)
    assert gk == pytest.approx(res.gamma_k, rel=1e-12)


def test_ibz_sample_clears_thresholds():
    for l in (0.5, 0.8, 0.9999):
        pts = greens.ibz_sample(l)
        assert len(pts) == 16
        for kx, ky in pts:
            assert greens.threshold_distance((kx, ky), l) >= 0.08 * K0
