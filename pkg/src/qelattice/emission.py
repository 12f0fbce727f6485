"""Far-field intensity radiated by the driven lattice.

Emission leaves the array only through diffraction orders: reciprocal
vectors g with |k_par + g| <= k propagate with out-of-plane wavevector
k_z = sqrt(k^2 - |k_par + g|^2).  Each order carries a geometric weight
from the transverse projection of the dipole,
F_g = 1 - (mu . (k_par+g))^2 / k^2.

All intensities are reported in units of I_L, the saturated emission of
one emitter per unit cell (P_L / l^2).  In those units the coherent
delta-line weight per order is k_z * M_g = 3*pi*F_g / (k l^2 k_z), whose
sum over radiative orders equals gamma_k / gamma0 — the same Weyl
geometry that fixes the collective decay rate.  k in radians (k0 = 2*pi),
lengths in lambda0, rates in gamma0.
"""

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .config import natural_units
from .spectrum import incoherent_spectrum

TWO_PI = 2.0 * np.pi


class EmissionError(RuntimeError):
    pass


@dataclass(frozen=True)
class DiffractionOrder:
    g: tuple          # reciprocal vector (radians)
    k_z: float
    m_weight: float   # M_g such that k_z * M_g is the I_L-weight


@dataclass(frozen=True)
class IntensityRecord:
    coherent: float            # delta(omega-omega_L) delta(k-k_L) weight, I_L
    incoherent_density: float  # per unit omega and k-area, I_L


def _dipole_factor(kx, ky, k, mu):
    return 1.0 - (mu[0] * kx + mu[1] * ky) ** 2 / k**2


def radiative_orders(k_par, cfg, k=TWO_PI, grazing_eps=1e-9):
    """All propagating diffraction orders at k_par, grazing ones excluded.

    Orders with k_z < grazing_eps * k sit on the light-circle edge where
    the per-order weight diverges (integrably); they are dropped and the
    caller can detect the omission by comparing against gamma_k.
    """
    k_par = np.asarray(k_par, dtype=float)
    l = cfg.period_l
    mu = cfg.mu_hat
    b = TWO_PI / l
    n = int(np.ceil((k + np.hypot(*k_par)) / b)) + 1
    orders = []
    for mx in range(-n, n + 1):
        for my in range(-n, n + 1):
            gx, gy = mx * b, my * b
            q2 = (k_par[0] + gx) ** 2 + (k_par[1] + gy) ** 2
            if q2 > k**2:
                continue
            k_z = np.sqrt(k**2 - q2)
            if k_z < grazing_eps * k:
                continue
            f = _dipole_factor(k_par[0] + gx, k_par[1] + gy, k, mu)
            m = 3.0 * np.pi * f / (k * l**2 * k_z**2)
            orders.append(DiffractionOrder((gx, gy), float(k_z), float(m)))
    return orders


def coherent_order_sum(k_par, cfg, k=TWO_PI):
    """Sum over radiative orders of k_z * M_g; equals gamma_k inside the
    light cone and the I_L normalization of the coherent line."""
    return sum(o.k_z * o.m_weight for o in radiative_orders(k_par, cfg, k))


def intensity_bz(k_par, omega, triplet, drive, cfg, k=TWO_PI):
    """Intensity carried by the Bloch state at k_par, frequency offset omega.

    The coherent part is nonzero only at the laser wavevector (it is a
    delta weight there); the incoherent density is spread over the whole
    light circle through the zeroth diffraction order.
    """
    k_par = np.asarray(k_par, dtype=float)
    k_L = np.asarray(drive.k_par, dtype=float)
    coherent = 0.0
    if np.allclose(k_par, k_L, atol=1e-12 * k):
        coherent = triplet.coherent_weight * coherent_order_sum(k_L, cfg, k)
    q2 = k_par[0] ** 2 + k_par[1] ** 2
    incoh = 0.0
    if q2 < k**2 * (1.0 - 1e-18):
        k_z = np.sqrt(k**2 - q2)
        if k_z >= 1e-9 * k:
            f = _dipole_factor(k_par[0], k_par[1], k, cfg.mu_hat)
            s_i = float(incoherent_spectrum(triplet, np.atleast_1d(omega))[0])
            incoh = 3.0 * f * s_i / (4.0 * np.pi * k * k_z)
    return IntensityRecord(float(coherent), float(incoh))


def intensity_spectrum(omega_grid, triplet, drive, cfg, k=TWO_PI):
    """k-integrated emission spectrum in I_L units.

    Returns (coherent_weight_at_omega_L, incoherent_samples, totals dict).
    The incoherent k-integral over the light circle is exactly 1 by the
    same closed-form integral that normalizes I_L, so the incoherent
    spectral density equals S^I(omega) in I_L units.
    """
    omega_grid = np.asarray(omega_grid, dtype=float)
    coherent = triplet.coherent_weight * coherent_order_sum(
        np.asarray(drive.k_par, dtype=float), cfg, k)
    incoh = incoherent_spectrum(triplet, omega_grid)
    totals = {
        "coherent": float(coherent),
        "incoherent": float(sum(p.L_p for p in triplet.peaks)),
    }
    totals["total"] = totals["coherent"] + totals["incoherent"]
    return coherent, incoh, totals


def _lorentzian_window_integral(peak, lo, hi):
    half = peak.gamma_p / 2.0
    return (peak.L_p / np.pi) * (np.arctan((hi - peak.omega_p) / half)
                                 - np.arctan((lo - peak.omega_p) / half))


def default_windows(triplet, half_width=1.0):
    """Central window around omega_L plus one window per sideband peak."""
    side = sorted({round(p.omega_p, 12) for p in triplet.peaks
                   if abs(p.omega_p) > 10 * half_width * 1e-12},
                  key=abs)
    wins = {"central": (-half_width, half_width)}
    for i, w0 in enumerate(p for p in side):
        wins[f"sideband{i}"] = (w0 - half_width, w0 + half_width)
    return wins


def window_integrals(triplet, windows, drive, cfg, k=TWO_PI):
    """(I_central, I_sidebands) from analytic Lorentzian window integrals.

    windows maps names to (lo, hi) offsets from omega_L; 'central' must be
    present and contain 0, where the coherent delta weight is added.
    Windows may not overlap.
    """
    items = sorted(windows.items(), key=lambda kv: kv[1][0])
    for (n1, w1), (n2, w2) in zip(items, items[1:]):
        if w1[1] > w2[0]:
            raise ValueError(f"windows {n1} and {n2} overlap")
    if "central" not in windows:
        raise ValueError("a 'central' window is required")
    coh_line = triplet.coherent_weight * coherent_order_sum(
        np.asarray(drive.k_par, dtype=float), cfg, k)
    i_central = 0.0
    i_side = 0.0
    for name, (lo, hi) in windows.items():
        val = sum(_lorentzian_window_integral(p, lo, hi)
                  for p in triplet.peaks)
        if name == "central":
            if not lo <= 0.0 <= hi:
                raise ValueError("central window must contain omega_L")
            i_central = val + coh_line
        else:
            i_side += val
    return i_central, i_side


def integral_identity_check(cfg, k=TWO_PI, tol=1e-9):
    """Relative error of the light-circle emission integral.

    Quadrature of (l^2/4pi^2) * integral of k_z |E_0|^2 over |k_par| < k
    against its closed form; the substitution q = k sin(u) removes the
    edge square-root singularity.  Independent of l beyond the explicit
    1/l^2 factor, so the check is l-free after normalization.
    """
    mu = cfg.mu_hat
    mu_sq = natural_units(cfg).mu_sq
    l = cfg.period_l
    pref = (k**2) ** 2 * mu_sq / (4.0 * l**4)  # (k^2 mu / (2 l^2))^2
    closed = k**5 * mu_sq / (12.0 * np.pi * l**2)

    def integrand(u, theta):
        q = k * np.sin(u)
        f = _dipole_factor(q * np.cos(theta), q * np.sin(theta), k, mu)
        # q dq / k_z = k sin(u) du after q = k sin(u)
        return f * k * np.sin(u)

    val, err = integrate.dblquad(integrand, 0.0, TWO_PI, 0.0, np.pi / 2.0,
                                 epsabs=0.0, epsrel=tol)
    if err > 100 * tol * abs(val):
        raise EmissionError(f"quadrature error estimate {err:.2e} too large")
    quad = (l**2 / (4.0 * np.pi**2)) * pref * val
    return abs(quad - closed) / abs(closed)
