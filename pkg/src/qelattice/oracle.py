"""Brute-force Lindblad solver for small ensembles, plus a bosonic reference.

Everything here is dense linear algebra on the vectorized density matrix
(column stacking, so A rho B maps to (B^T kron A) vec(rho)).  With N <= 3
emitters the superoperator is at most 64 x 64, which keeps every check
exact to machine precision.  The same file houses the truncated driven
damped bosonic mode used to validate the classical closed forms.

Rates in gamma0; positions in lambda0.
"""

from dataclasses import dataclass, field

import numpy as np

from .config import DriveConfig, LatticeConfig
from .greens import pair_coupling

MAX_EMITTERS = 3

_SIGMA = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |g><e|


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True)
class EmitterEnsemble:
    positions: tuple                 # of 3-vectors, lambda0
    drive: DriveConfig
    cfg: LatticeConfig = field(default_factory=LatticeConfig)
    interactions_enabled: bool = True

    def __post_init__(self):
        pos = [np.asarray(p, dtype=float) for p in self.positions]
        if len(pos) > MAX_EMITTERS:
            raise ValueError(f"at most {MAX_EMITTERS} emitters supported")
        for i, a in enumerate(pos):
            for b_ in pos[i + 1:]:
                if np.linalg.norm(a - b_) < 1e-12:
                    raise ValueError("emitter positions must be distinct")

    @property
    def n(self):
        return len(self.positions)

    def coupling_table(self):
        """(g_ij, gamma_ij) matrices; diagonal gamma_ii = gamma0 = 1."""
        n = self.n
        g = np.zeros((n, n))
        gam = np.eye(n)
        if self.interactions_enabled:
            for i in range(n):
                for j in range(n):
                    if i == j:
                        continue
                    r = (np.asarray(self.positions[i], dtype=float)
                         - np.asarray(self.positions[j], dtype=float))
                    pc = pair_coupling(r, self.cfg)
                    g[i, j] = pc.g_ij
                    gam[i, j] = pc.gamma_ij
        return g, gam


def site_operator(op, i, n):
    """op acting on site i of an n-site register."""
    mats = [np.eye(2, dtype=complex)] * n
    mats[i] = op
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def _vec(rho):
    return rho.reshape(-1, order="F")


def _unvec(v):
    d = int(round(np.sqrt(v.size)))
    return v.reshape(d, d, order="F")


def build_liouvillian(ensemble: EmitterEnsemble):
    """Vectorized Liouvillian with drive phases and the full dissipator."""
    n = ensemble.n
    d = 2**n
    eye = np.eye(d, dtype=complex)
    sig = [site_operator(_SIGMA, i, n) for i in range(n)]
    sdg = [s.conj().T for s in sig]
    g, gam = ensemble.coupling_table()
    delta = ensemble.drive.delta
    omega = complex(ensemble.drive.omega)
    k_par = np.asarray(ensemble.drive.k_par, dtype=float)
    h = np.zeros((d, d), dtype=complex)
    for i in range(n):
        phase = np.exp(1j * (k_par @ np.asarray(ensemble.positions[i])[:2]))
        h += -delta * sdg[i] @ sig[i]
        h += omega * phase * sdg[i] + np.conj(omega * phase) * sig[i]
        for j in range(n):
            if i != j:
                h += g[i, j] * sdg[i] @ sig[j]
    liou = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for i in range(n):
        for j in range(n):
            sij = sdg[i] @ sig[j]
            liou += 0.5 * gam[i, j] * (
                2.0 * np.kron(sig[i].conj(), sig[j])
                - np.kron(eye, sij) - np.kron(sij.T, eye))
    return liou


def steady_state(liouvillian, degeneracy_tol=1e-8):
    """Unique steady density matrix from the Liouvillian null space."""
    _, s, vh = np.linalg.svd(liouvillian)
    if s[-2] < degeneracy_tol:
        raise OracleError(
            f"degenerate steady state: two smallest singular values "
            f"{s[-1]:.2e}, {s[-2]:.2e}")
    rho = _unvec(vh[-1].conj())
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    ev = np.linalg.eigvalsh(rho)
    if ev.min() < -1e-8:
        raise OracleError(f"steady state not positive (min eig {ev.min():.2e})")
    return rho


def expectation(rho, op):
    return complex(np.trace(op @ rho))


def qrt_correlator(liouvillian, rho_ss, op_a, op_b, tau_grid,
                   cond_max=1e10):
    """<A(0) B(tau)> by spectral propagation of B rho_ss.

    Returns (samples, poles, residues): the correlator is
    sum_p residue_p * exp(pole_p * tau).
    """
    tau_grid = np.asarray(tau_grid, dtype=float)
    lam, vmat = np.linalg.eig(liouvillian)
    cond = np.linalg.cond(vmat)
    if cond > cond_max:
        raise OracleError(
            f"Liouvillian near-defective (eigenvector condition {cond:.2e})")
    coeff = np.linalg.solve(vmat, _vec(rho_ss @ op_a))
    residues = np.array([coeff[p] * np.trace(op_b @ _unvec(vmat[:, p]))
                         for p in range(len(lam))])
    samples = np.array([(residues * np.exp(lam * t)).sum() for t in tau_grid])
    return samples, lam, residues


def _single_site_sigma(omega_loc, delta):
    """Closed-form steady <sigma> of one emitter at local drive omega_loc."""
    den = 1.0 + 4.0 * delta**2 + 8.0 * abs(omega_loc) ** 2
    return -2j * omega_loc * (1.0 + 2j * delta) / den


def mf_vs_exact(ensemble: EmitterEnsemble, max_iter=5000, mix=0.3,
                fp_tol=1e-12):
    """Factorized (mean-field) fixed point vs the dense steady state.

    The finite-ensemble mean field closes on the coherences beta_i: each
    site feels the laser plus the field scattered by every other site
    through the pair couplings.  Reports side-by-side observables and the
    connected correlators the factorization discards.
    """
    if ensemble.n < 2:
        raise ValueError("comparison needs N in {2, 3}")
    n = ensemble.n
    g, gam = ensemble.coupling_table()
    delta = ensemble.drive.delta
    omega = complex(ensemble.drive.omega)
    k_par = np.asarray(ensemble.drive.k_par, dtype=float)
    phases = np.array([np.exp(1j * (k_par @ np.asarray(p)[:2]))
                       for p in ensemble.positions])
    beta = np.array([_single_site_sigma(omega * ph, delta) for ph in phases])
    for it in range(max_iter):
        omega_loc = omega * phases + np.array([
            sum((g[i, j] - 0.5j * gam[i, j]) * beta[j]
                for j in range(n) if j != i)
            for i in range(n)])
        new = np.array([_single_site_sigma(o, delta) for o in omega_loc])
        if np.abs(new - beta).max() < fp_tol:
            beta = new
            break
        beta = mix * new + (1.0 - mix) * beta
    else:
        raise OracleError("mean-field fixed point did not converge")
    den = [1.0 + 4.0 * delta**2 + 8.0 * abs(o) ** 2 for o in omega_loc]
    mf_pop = np.array([4.0 * abs(o) ** 2 / d for o, d in zip(omega_loc, den)])
    liou = build_liouvillian(ensemble)
    rho = steady_state(liou)
    sig = [site_operator(_SIGMA, i, n) for i in range(n)]
    exact_pop = np.array([expectation(rho, s.conj().T @ s).real for s in sig])
    exact_coh = np.array([expectation(rho, s) for s in sig])
    cross = {}
    connected = {}
    for i in range(n):
        for j in range(n):
            if i >= j:
                continue
            ss = expectation(rho, sig[i].conj().T @ sig[j])
            cross[(i, j)] = ss
            connected[(i, j)] = ss - np.conj(exact_coh[i]) * exact_coh[j]
    return {
        "mf_coherence": beta,
        "mf_population": mf_pop,
        "exact_coherence": exact_coh,
        "exact_population": exact_pop,
        "population_rel_diff": np.abs(mf_pop - exact_pop)
        / np.maximum(exact_pop, 1e-300),
        "cross_correlator": cross,
        "connected_correlator": connected,
        "iterations": it + 1,
    }


def bosonic_population(omega, delta_k, gamma_k, n_max=None, tol=1e-10):
    """Steady photon number of a driven damped mode, truncated Fock space.

    Adaptive truncation: n_max grows until the population is stable to
    tol.  Validates the closed form |Omega|^2 / (delta_k^2 + gamma_k^2/4).
    """
    def solve(nm):
        a = np.diag(np.sqrt(np.arange(1, nm + 1)), k=1)
        ad = a.conj().T
        h = -delta_k * ad @ a + omega * ad + np.conj(omega) * a
        eye = np.eye(nm + 1, dtype=complex)
        num = ad @ a
        liou = -1j * (np.kron(eye, h) - np.kron(h.T, eye)) \
            + 0.5 * gamma_k * (2.0 * np.kron(a.conj(), a)
                               - np.kron(eye, num) - np.kron(num.T, eye))
        rho = steady_state(liou)
        return expectation(rho, num).real

    if n_max is not None:
        return solve(n_max)
    nm = 20
    prev = solve(nm)
    while nm <= 320:
        nm *= 2
        cur = solve(nm)
        if abs(cur - prev) < tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise OracleError("bosonic truncation did not converge; drive too strong")
