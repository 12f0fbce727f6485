# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot loop for the direct (real-space) dipole lattice sum.

The sum runs over a square lattice of in-plane dipoles and accumulates the
mu-projected free-space Green tensor with a Bloch phase, an absorptive
damping factor exp(-k0*eta*r) per damping value, and a smooth radial
truncation window.  Everything is in reduced units (lengths in lambda0).
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport cos, erfc, exp, sin, sqrt


def direct_gbar_sums(double l, double kx, double ky, double k0,
                     double[::1] etas, double mux, double muy,
                     double r_max, double win_center, double win_width):
    """Accumulate sum_{j!=0} mu.G(r_j).mu e^{-i k_par.r_j} for each eta.

    Returns a complex array, one partial sum per damping value.  A smooth
    erfc window centered at ``win_center`` with scale ``win_width`` is
    applied; ``win_width <= 0`` selects a hard cutoff at ``r_max``.
    """
    cdef Py_ssize_t neta = etas.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.zeros(neta, dtype=np.complex128)
    cdef double complex[::1] acc = out
    cdef Py_ssize_t m, n, ie
    cdef long nmax = <long>(r_max / l) + 1
    cdef double x, y, r, w, c2, pr, pi, e0r, e0i, damp, inv4pir
    cdef double complex phase, e0, u, u2, t1, t2, proj, val

    for m in range(-nmax, nmax + 1):
        x = m * l
        for n in range(-nmax, nmax + 1):
            if m == 0 and n == 0:
                continue
            y = n * l
            r = sqrt(x * x + y * y)
            if r > r_max:
                continue
            if win_width > 0.0:
                w = 0.5 * erfc((r - win_center) / win_width)
                if w < 1e-16:
                    continue
            else:
                w = 1.0
            c2 = (mux * x + muy * y) / r
            c2 = c2 * c2
            pr = cos(-(kx * x + ky * y))
            pi = sin(-(kx * x + ky * y))
            phase = pr + 1j * pi
            inv4pir = w / (12.566370614359172 * r)
            e0 = (cos(k0 * r) + 1j * sin(k0 * r)) * inv4pir
            for ie in range(neta):
                damp = exp(-k0 * etas[ie] * r)
                u = 1.0 / (k0 * r * (1.0 + 1j * etas[ie]))
                u2 = u * u
                t1 = 1.0 + 1j * u - u2
                t2 = -1.0 - 3j * u + 3.0 * u2
                proj = t1 + c2 * t2
                val = e0 * damp * proj * phase
                acc[ie] = acc[ie] + val
    return out
