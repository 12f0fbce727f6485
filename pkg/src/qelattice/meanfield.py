"""Self-consistent effective drive for the interacting lattice.

Factorizing inter-emitter correlations maps the driven lattice onto
independent emitters with a renormalized drive Omega_eff.  The lattice sum
feeds back the scattered field of every other emitter, which makes
x = |Omega_eff|^2 a root of a cubic; near the lattice-sum divergence
(period -> lambda0) the cubic develops three positive roots and the optical
response becomes bistable.

Rates are in units of gamma0 throughout.
"""

from dataclasses import dataclass, replace

import numpy as np


class MeanFieldError(RuntimeError):
    pass


@dataclass(frozen=True)
class MeanFieldBranch:
    x: float                 # |Omega_eff|^2
    omega_eff: complex
    stability: str           # "stable" | "metastable"
    branch_id: str           # "lower" | "middle" | "upper"

    def __post_init__(self):
        if self.x < 0:
            raise ValueError("x must be nonnegative")


@dataclass(frozen=True)
class HysteresisTrace:
    omega_grid: np.ndarray
    branches: tuple          # selected MeanFieldBranch per grid point
    direction: str           # "up" | "down"
    jumps: tuple             # |Omega| values where the selected branch folded


def _drive_params(delta, g_bar):
    """Saturation scale a and feedback coefficient C of the cubic."""
    a = 1.0 + 4.0 * delta**2
    c = 1j * 2.0 * (1.0 + 2j * delta) * 1.5 * g_bar
    return a, c


def cubic_coefficients(omega, delta, g_bar):
    """Coefficients (descending powers) of the cubic satisfied by x."""
    a, c = _drive_params(delta, g_bar)
    w = abs(omega) ** 2
    cr, ci = c.real, c.imag
    return np.array([
        64.0,
        16.0 * (a - cr) - 64.0 * w,
        (a - cr) ** 2 + ci**2 - 16.0 * a * w,
        -(a**2) * w,
    ])


def drive_response(x, delta, g_bar):
    """|Omega|^2 required to sustain a given x; the S-curve F(x)."""
    a, c = _drive_params(delta, g_bar)
    den = a + 8.0 * np.asarray(x, dtype=float)
    return x * ((den - c.real) ** 2 + c.imag**2) / den**2


def effective_drive(omega, x, delta, g_bar):
    a, c = _drive_params(delta, g_bar)
    return omega / (1.0 - c / (a + 8.0 * x))


def self_consistency_roots(omega, delta, g_bar, rel_tol=1e-9):
    """All physical branches of the self-consistency cubic.

    Roots come from the companion matrix with a Newton polish; double roots
    (folds hit exactly) collapse to the single-root case.  Returns branches
    sorted by x with stability labels attached.
    """
    coeffs = cubic_coefficients(omega, delta, g_bar)
    scale = np.max(np.abs(coeffs))
    if abs(omega) == 0.0:
        return [MeanFieldBranch(0.0, 0j, "stable", "lower")]
    roots = np.roots(coeffs)
    der = np.polyder(coeffs)
    for _ in range(2):
        p = np.polyval(coeffs, roots)
        dp = np.polyval(der, roots)
        step = np.where(np.abs(dp) > 0, p / np.where(dp == 0, 1, dp), 0)
        roots = roots - step
    real = roots[np.abs(roots.imag)
                 <= 1e-8 * max(1.0, float(np.abs(roots).max()))].real
    real = np.sort(real[real >= -1e-12])
    xs = [float(max(r, 0.0)) for r in real]
    # collapse near-degenerate (double) roots
    kept = []
    for x in xs:
        if kept and abs(x - kept[-1]) <= 1e-7 * (1.0 + abs(x)):
            continue
        kept.append(x)
    if len(kept) == 2:
        # a fold double root survived deduplication asymmetrically
        kept = [min(kept)] if np.polyval(der, max(kept)) < 0 else [max(kept)]
    if not kept:
        raise MeanFieldError(f"no physical root found for |Omega|={abs(omega)}")
    for x in kept:
        resid = abs(np.polyval(coeffs, x))
        # scale by the largest monomial at this root, not just max|coeff|:
        # large-x roots have huge cancelling terms
        term_scale = max(scale, float(
            np.max(np.abs(coeffs) * np.abs(x) ** np.arange(3, -1, -1))))
        if resid > 1e-9 * term_scale:
            raise MeanFieldError(
                f"cubic residual {resid:.2e} above tolerance at x={x}")
    if len(kept) == 3:
        ids = ("lower", "middle", "upper")
    else:
        # locate the single real root relative to the complex pair, so sweeps
        # keep a consistent label on both sides of the bistable window
        others = roots[np.abs(roots.imag) > 1e-8]
        if len(others) == 2 and kept[0] > others.real.mean():
            ids = ("upper",)
        else:
            ids = ("lower",)
    branches = [MeanFieldBranch(x, effective_drive(omega, x, delta, g_bar),
                                "stable", bid)
                for x, bid in zip(kept, ids)]
    return classify_stability(branches, delta, g_bar)


def classify_stability(branches, delta, g_bar):
    """Label branches by the slope of the S-curve |Omega|^2 = F(x).

    On a fold (S-shaped) response the segment where F decreases with x is
    the one that cannot be reached adiabatically; with three roots that is
    always the middle one.
    """
    out = []
    for b in branches:
        h = 1e-7 * (1.0 + b.x)
        slope = (drive_response(b.x + h, delta, g_bar)
                 - drive_response(max(b.x - h, 0.0), delta, g_bar))
        label = "stable" if slope >= 0 else "metastable"
        out.append(replace(b, stability=label))
    return out


def bistable_interval(delta, g_bar, omega_max=10.0, n_scan=2001, refine=1e-10):
    """(Omega_lower, Omega_upper) fold locations, or None if single-valued.

    The folds are located by bisection on the root-count change of the
    cubic along an |Omega| scan.
    """
    grid = np.linspace(0.0, omega_max, n_scan)[1:]
    counts = np.array([len(self_consistency_roots(w, delta, g_bar))
                       for w in grid])
    idx = np.nonzero(np.diff(counts))[0]
    if len(idx) == 0:
        return None
    edges = []
    for i in idx[:2]:
        lo, hi = grid[i], grid[i + 1]
        clo = counts[i]
        while hi - lo > refine:
            mid = 0.5 * (lo + hi)
            if len(self_consistency_roots(mid, delta, g_bar)) == clo:
                lo = mid
            else:
                hi = mid
        edges.append(0.5 * (lo + hi))
    if len(edges) == 1:
        edges.append(grid[-1])
    return tuple(edges)


def hysteresis_sweep(omega_grid, delta, g_bar, direction="up",
                     jump_threshold=0.25):
    """Adiabatic branch following along an |Omega| ramp.

    The stable branch nearest (in x) to the previous point is kept; when it
    disappears at a fold the trace jumps to the remaining stable branch and
    the |Omega| value is recorded.  A large x jump while the previous branch
    still exists means the grid is too coarse and is reported as an error.
    """
    omega_grid = np.asarray(omega_grid, dtype=float)
    if np.any(np.diff(omega_grid) <= 0):
        raise ValueError("omega_grid must be strictly increasing")
    if direction not in ("up", "down"):
        raise ValueError("direction must be 'up' or 'down'")
    order = range(len(omega_grid)) if direction == "up" \
        else range(len(omega_grid) - 1, -1, -1)
    selected = {}
    jumps = []
    x_prev = None
    for i in order:
        stable = [b for b in
                  self_consistency_roots(omega_grid[i], delta, g_bar)
                  if b.stability == "stable"]
        if not stable:
            raise MeanFieldError(f"no stable branch at |Omega|={omega_grid[i]}")
        if x_prev is None:
            pick = stable[0] if direction == "up" else stable[-1]
        else:
            pick = min(stable, key=lambda b: abs(b.x - x_prev))
            rel_jump = abs(pick.x - x_prev) / (1.0 + x_prev)
            if rel_jump > jump_threshold:
                if len(stable) > 1:
                    raise MeanFieldError(
                        f"branch tracking lost at |Omega|={omega_grid[i]}: "
                        f"x jumped {x_prev:.4g} -> {pick.x:.4g} with "
                        "multiple stable branches present (refine the grid)")
                jumps.append(float(omega_grid[i]))
        x_prev = pick.x
        selected[i] = pick
    branches = tuple(selected[i] for i in range(len(omega_grid)))
    return HysteresisTrace(omega_grid, branches, direction, tuple(jumps))
