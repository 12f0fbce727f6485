"""Steady-state populations and correlators of the driven lattice.

The noninteracting-in-the-effective-drive picture gives every Bloch-state
observable in closed form from x = |Omega_eff|^2 and the saturation scale
a = gamma0^2 + 4 Delta^2.  The momentum distribution splits into a
delta-like coherent part at the laser wavevector and a flat incoherent
background over the Brillouin zone; the classical (bosonic) lattice keeps
only the coherent part.

Rates in gamma0, lengths in lambda0, k in 2*pi/lambda0 radians.
"""

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class BZPopulation:
    """Per-emitter momentum bookkeeping before any display broadening.

    coh_weight is the k-integrated weight of the delta at the laser
    wavevector; incoh_density is the flat density per unit k-area, so the
    per-emitter incoherent total is incoh_density * (2*pi/l)^2.
    """
    coh_weight: float
    incoh_density: float
    k_laser_par: tuple


@dataclass(frozen=True)
class CorrelatorSet:
    sigma_ss: complex        # <sigma> per emitter (phase at r = 0)
    pop_ss: float            # <sigma^dag sigma>
    sdag_sdag: complex       # two-photon amplitude <sigma^dag sigma^dag>
    sdag_O: complex          # excitation-exchange amplitude
    v_ss: tuple              # 3-vector feeding the regression solution


def _xa(omega_eff, delta):
    x = abs(omega_eff) ** 2
    return x, 1.0 + 4.0 * delta**2


def population_per_emitter(omega_eff, delta):
    """(coherent, incoherent, total) excited population per emitter."""
    x, a = _xa(omega_eff, delta)
    den = a + 8.0 * x
    coh = 4.0 * x * a / den**2
    incoh = 32.0 * x**2 / den**2
    return coh, incoh, 4.0 * x / den


def classical_population(omega, delta_k, gamma_k):
    """Bosonic lattice: purely coherent weight, no incoherent part."""
    w = abs(omega) ** 2 / (delta_k**2 + gamma_k**2 / 4.0)
    return w, 0.0


def bz_population(omega_eff, delta, cfg, drive):
    coh, incoh, _ = population_per_emitter(omega_eff, delta)
    l = cfg.period_l
    return BZPopulation(
        coh_weight=coh,
        incoh_density=incoh * (l / TWO_PI) ** 2,
        k_laser_par=tuple(np.asarray(drive.k_par, dtype=float)),
    )


def correlators(omega_eff, delta):
    """Closed-form steady-state correlators at effective drive Omega_eff."""
    x, a = _xa(omega_eff, delta)
    den = a + 8.0 * x
    gm = 1.0 - 2j * delta               # gamma0 - i 2 Delta
    oc = np.conj(omega_eff)
    sigma_ss = -2j * omega_eff * (1.0 + 2j * delta) / den
    v1 = 32.0 * x**2 / den**2
    v2 = 4.0 * oc**2 * gm**2 / den**2
    # the i is required for the regression propagation of (v1, v2, v3) to
    # reproduce the dense Lindblad two-time correlator exactly
    v3 = -8j * oc * x * gm / den**2
    return CorrelatorSet(
        sigma_ss=sigma_ss,
        pop_ss=4.0 * x / den,
        sdag_sdag=v2,
        sdag_O=v3,
        v_ss=(v1, v2, v3),
    )


def broadened_bz_map(pop: BZPopulation, l_eff, kx, ky, cfg):
    """Finite-size display of the momentum distribution over a k-grid.

    The delta at the laser wavevector becomes a normalized 2D Gaussian of
    width 2*pi/l_eff (mimicking an L_eff-sized array) on top of the flat
    incoherent density.  Input kx, ky are broadcastable arrays in radians.
    """
    if l_eff < cfg.period_l:
        raise ValueError("effective size must be at least one period")
    kx = np.asarray(kx, dtype=float)
    ky = np.asarray(ky, dtype=float)
    sigma = TWO_PI / l_eff
    for arr in (kx, ky):
        flat = np.unique(np.ravel(arr))
        if len(flat) > 1 and np.min(np.diff(flat)) > sigma:
            raise ValueError(
                f"k-grid step {np.min(np.diff(flat)):.3g} coarser than the "
                f"Gaussian width {sigma:.3g}; refine the grid")
    kLx, kLy = pop.k_laser_par
    gauss = np.exp(-((kx - kLx) ** 2 + (ky - kLy) ** 2) / (2.0 * sigma**2))
    gauss /= 2.0 * np.pi * sigma**2
    return pop.coh_weight * gauss + pop.incoh_density
