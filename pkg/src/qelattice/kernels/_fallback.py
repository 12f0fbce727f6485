"""Pure-numpy implementation of the direct lattice-sum kernel.

Same contract as the compiled version in ``_kernels.pyx``.  Rows of the
lattice are processed in chunks to keep memory bounded at large cutoff
radii.
"""
import numpy as np
from scipy.special import erfc

_CHUNK = 512


def direct_gbar_sums(l, kx, ky, k0, etas, mux, muy, r_max, win_center, win_width):
    etas = np.asarray(etas, dtype=float)
    nmax = int(r_max / l) + 1
    ms = np.arange(-nmax, nmax + 1)
    out = np.zeros(etas.size, dtype=complex)
    for lo in range(0, ms.size, _CHUNK):
        m = ms[lo:lo + _CHUNK]
        x = (m * l)[:, None]
        y = (ms * l)[None, :]
        r = np.hypot(x, y)
        keep = (r <= r_max) & (r > 0)
        if win_width > 0.0:
            w = np.where(keep, 0.5 * erfc((r - win_center) / win_width), 0.0)
            keep &= w > 1e-16
        else:
            w = np.where(keep, 1.0, 0.0)
        if not np.any(keep):
            continue
        xs = np.broadcast_to(x, r.shape)[keep]
        ys = np.broadcast_to(y, r.shape)[keep]
        rs, ws = r[keep], w[keep]
        c2 = ((mux * xs + muy * ys) / rs) ** 2
        phase = np.exp(-1j * (kx * xs + ky * ys))
        e0 = np.exp(1j * k0 * rs) * ws / (4.0 * np.pi * rs)
        base = e0 * phase
        for ie, eta in enumerate(etas):
            u = 1.0 / (k0 * rs * (1.0 + 1j * eta))
            t1 = 1.0 + 1j * u - u * u
            t2 = -1.0 - 3j * u + 3.0 * u * u
            out[ie] += np.sum(base * np.exp(-k0 * eta * rs) * (t1 + c2 * t2))
    return out
