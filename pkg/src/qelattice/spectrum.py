"""Resonance-fluorescence spectrum from the regression matrix.

Two-time correlators of a driven two-level emitter close on a 3-vector
(sigma, sigma^dag, population-like) whose evolution matrix M has three
eigenvalues: their imaginary parts set the Mollow peak positions and their
real parts the widths, while the residues l_p carry the Lorentzian weights
L_p and dispersive weights K_p.  With the mean-field renormalization the
same construction holds with Omega -> Omega_eff.

Rates and frequencies in gamma0, measured from the laser frequency.
"""

from dataclasses import dataclass

import numpy as np

from .observables import correlators, population_per_emitter


class SpectrumError(RuntimeError):
    pass


@dataclass(frozen=True)
class MollowPeak:
    omega_p: float     # center, offset from the laser frequency
    gamma_p: float     # FWHM
    L_p: float         # Lorentzian weight
    K_p: float         # dispersive weight


@dataclass(frozen=True)
class MollowTriplet:
    peaks: tuple               # 3 MollowPeak, central first then sidebands
    coherent_weight: float     # prefactor of delta(omega - omega_L)


def regression_matrix(omega_eff, delta):
    o = complex(omega_eff)
    oc = np.conj(o)
    return np.array([
        [1j * delta - 0.5, 0.0, 2j * o],
        [0.0, -1j * delta - 0.5, -2j * oc],
        [1j * oc, -1j * o, -1.0],
    ])


def mollow_parameters(omega_eff, delta, cond_max=1e8):
    """Peak positions, widths, and weights of the incoherent triplet.

    Eigen-decomposes the regression matrix and contracts the steady-state
    correlator vector through the eigenvector basis:
    l_p = E[0, p] * (E^-1 v_ss)[p].  The eigenvector condition number is
    monitored; near an exceptional point the decomposition is refused
    rather than silently inverted.
    """
    m = regression_matrix(omega_eff, delta)
    lam, evec = np.linalg.eig(m)
    cond = np.linalg.cond(evec)
    if cond > cond_max:
        raise SpectrumError(
            f"regression matrix near-defective (eigenvector condition "
            f"number {cond:.2e}); parameters Omega_eff={omega_eff}, "
            f"delta={delta}")
    v_ss = np.array(correlators(omega_eff, delta).v_ss)
    l_p = evec[0, :] * np.linalg.solve(evec, v_ss)
    gamma_p = -2.0 * lam.real
    omega_p = -lam.imag
    if np.any(gamma_p <= 0):
        raise SpectrumError("nonpositive peak width; the drive terms "
                            "should make the regression matrix strictly "
                            "stable")
    order = np.argsort(np.abs(omega_p), kind="stable")
    peaks = tuple(MollowPeak(float(omega_p[i]), float(gamma_p[i]),
                             float(l_p[i].real), float(l_p[i].imag))
                  for i in order)
    coh, _, _ = population_per_emitter(omega_eff, delta)
    return MollowTriplet(peaks, coh)


def incoherent_spectrum(triplet, omega_grid, include_dispersive=False):
    """Sampled incoherent spectrum S^I(omega) from the triplet parameters.

    Sum of normalized Lorentzians weighted L_p/pi; the odd dispersive
    -K_p/pi terms are added only on request (they integrate to zero but
    can push pointwise values negative).
    """
    w = np.asarray(omega_grid, dtype=float)
    s = np.zeros_like(w)
    for p in triplet.peaks:
        half = p.gamma_p / 2.0
        den = (w - p.omega_p) ** 2 + half**2
        s += (p.L_p / np.pi) * half / den
        if include_dispersive:
            s -= (p.K_p / np.pi) * (w - p.omega_p) / den
    return s


def classical_spectrum(omega, delta_k, gamma_k):
    """Bosonic lattice: a single elastic delta line at the laser frequency."""
    return abs(omega) ** 2 / (delta_k**2 + gamma_k**2 / 4.0)
