"""One rendering function per figure preset.

Every function takes the validated column dict and a matplotlib Axes (or
Figure where a panel needs an inset) and draws a publication-style panel.
Axis conventions: drive in gamma0, wavevectors in 2*pi/lambda0,
intensities in I_L, populations per emitter.
"""
import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import LogNorm  # noqa: E402

from .tables import SchemaError  # noqa: E402

_BRANCH_STYLE = {"lower": "-", "middle": ":", "upper": "--"}


def _branch_segments(cols, xkey, ykey):
    """(branch_id, x, y) sorted segments, one per branch label present."""
    for bid in sorted(set(cols["branch_id"])):
        sel = cols["branch_id"] == bid
        x = cols[xkey][sel]
        order = np.argsort(x)
        yield bid, x[order], cols[ykey][sel][order]


def render_fig1b(cols, fig):
    ax = fig.subplots()
    ax.loglog(cols["omega"], cols["n_total"], "g-", lw=2, label="total")
    ax.loglog(cols["omega"], cols["n_coh"], "b--", label="coherent")
    ax.loglog(cols["omega"], cols["n_incoh"], "r-.", label="incoherent")
    ax.loglog(cols["omega"], cols["n_classical"], "k:", label="classical")
    ax.axhline(0.5, color="0.7", lw=0.8)
    ax.set_xlabel(r"$\Omega/\gamma_0$")
    ax.set_ylabel("population per emitter")
    ax.legend(frameon=False, fontsize=8)


def render_fig1b_inset(cols, fig):
    ax = fig.subplots()
    sel = cols["ky"] == cols["ky"][0]
    kx = cols["kx"][sel]
    order = np.argsort(kx)
    ax.semilogy(kx[order], np.maximum(cols["n_total"][sel][order], 1e-300),
                "g-")
    ax.set_xlabel(r"$k_x\ (2\pi/\lambda_0)$")
    ax.set_ylabel("population density")


def _square_grid(cols, zkey):
    kx = np.unique(cols["kx"])
    ky = np.unique(cols["ky"])
    if kx.size * ky.size != cols[zkey].size:
        raise SchemaError(f"map is not a full grid "
                          f"({kx.size}x{ky.size} vs {cols[zkey].size} rows)")
    z = np.full((ky.size, kx.size), np.nan)
    ix = np.searchsorted(kx, cols["kx"])
    iy = np.searchsorted(ky, cols["ky"])
    z[iy, ix] = cols[zkey]
    return kx, ky, z


def render_fig2a(cols, fig):
    ax = fig.subplots()
    kx, ky, z = _square_grid(cols, "i_total")
    mid = np.argmin(np.abs(ky))
    pos = z[z > 0]
    floor = pos.min() if pos.size else 1e-12
    ax.semilogy(kx, np.maximum(z[mid], floor), "k-")
    ax.set_xlabel(r"$k_x\ (2\pi/\lambda_0)$")
    ax.set_ylabel(r"$I(\mathbf{k})\ (I_L)$")
    inset = ax.inset_axes([0.62, 0.55, 0.36, 0.4])
    im = inset.pcolormesh(kx, ky, np.maximum(z, floor),
                          norm=LogNorm(), cmap="inferno", rasterized=True)
    inset.set_xticks([])
    inset.set_yticks([])
    fig.colorbar(im, ax=inset, fraction=0.05)


def render_fig2b(cols, fig):
    ax = fig.subplots()
    for key, style, label in (("i_central_coh", "b-", "central coherent"),
                              ("i_central_incoh", "r--",
                               "central incoherent"),
                              ("i_sidebands", "g-.", "sidebands")):
        for bid, x, y in _branch_segments(cols, "omega_drive", key):
            ax.loglog(x, np.maximum(y, 1e-300), style,
                      label=label if bid == sorted(
                          set(cols["branch_id"]))[0] else None)
    order = np.argsort(cols["omega_drive"])
    ax.loglog(cols["omega_drive"][order],
              np.maximum(cols["i_classical"][order], 1e-300), "k:",
              label="classical")
    ax.set_xlabel(r"$\Omega/\gamma_0$")
    ax.set_ylabel(r"$I\ (I_L)$")
    ax.legend(frameon=False, fontsize=8)


def _per_period(cols):
    for l in sorted(set(cols["period_l"])):
        yield l, {k: v[cols["period_l"] == l] for k, v in cols.items()}


def render_fig3a(cols, fig):
    ax = fig.subplots()
    colors = plt.cm.viridis(np.linspace(0.1, 0.85,
                                        len(set(cols["period_l"]))))
    for (l, sub), color in zip(_per_period(cols), colors):
        for bid, x, y in _branch_segments(sub, "omega", "x"):
            ax.plot(x, y, _BRANCH_STYLE.get(bid, "-"), color=color,
                    label=f"l = {l:g}" if bid == "lower" else None)
    ax.set_xlabel(r"$\Omega/\gamma_0$")
    ax.set_ylabel(r"$x = |\Omega_{\rm eff}/\gamma_0|^2$")
    ax.legend(frameon=False, fontsize=8)


def _render_peaks(cols, fig, ykey, ylabel, logy=False):
    ax = fig.subplots()
    colors = plt.cm.viridis(np.linspace(0.1, 0.85,
                                        len(set(cols["period_l"]))))
    for (l, sub), color in zip(_per_period(cols), colors):
        for ipk in sorted(set(sub["peak_index"])):
            s2 = {k: v[sub["peak_index"] == ipk] for k, v in sub.items()}
            first = ipk == 0
            for bid, x, y in _branch_segments(s2, "omega", ykey):
                style = _BRANCH_STYLE.get(bid, "-")
                (ax.semilogy if logy else ax.plot)(
                    x, y, style, color=color, lw=1,
                    label=f"l = {l:g}" if first and bid == "lower" else None)
                first = False
    ax.set_xlabel(r"$\Omega/\gamma_0$")
    ax.set_ylabel(ylabel)
    ax.legend(frameon=False, fontsize=8)


def render_fig3b(cols, fig):
    _render_peaks(cols, fig, "omega_p",
                  r"$\omega_p - \omega_L\ (\gamma_0)$")


def render_fig3c(cols, fig):
    _render_peaks(cols, fig, "gamma_p", r"$\gamma_p\ (\gamma_0)$")


def _render_hysteresis(cols, fig, xkey, ykeys, ylabel):
    ax = fig.subplots()
    for direction, color in (("up", "C0"), ("down", "C3")):
        sel = cols["direction"] == direction
        x = cols[xkey][sel]
        order = np.argsort(x)
        for key, style in ykeys:
            y = cols[key][sel][order]
            ax.plot(x[order], y, style, color=color,
                    label=f"{key} ({direction})")
        # arrow indicating the sweep direction on the first curve
        y0 = cols[ykeys[0][0]][sel][order]
        i = len(x) // 2
        sgn = 1 if direction == "up" else -1
        ax.annotate("", xy=(x[order][i + sgn], y0[i + sgn]),
                    xytext=(x[order][i], y0[i]),
                    arrowprops=dict(arrowstyle="->", color=color))
    ax.set_xlabel(r"$\Omega/\gamma_0$")
    ax.set_ylabel(ylabel)
    ax.legend(frameon=False, fontsize=7)


def render_fig3d(cols, fig):
    _render_hysteresis(cols, fig, "omega", [("n_total", "-")],
                       "population per emitter")


def render_fig3e(cols, fig):
    _render_hysteresis(cols, fig, "omega_drive",
                       [("i_central_coh", "-"), ("i_sidebands", "--")],
                       r"$I\ (I_L)$")


RENDERERS = {
    "fig1b": render_fig1b,
    "fig1b-inset": render_fig1b_inset,
    "fig2a": render_fig2a,
    "fig2b": render_fig2b,
    "fig3a": render_fig3a,
    "fig3b": render_fig3b,
    "fig3c": render_fig3c,
    "fig3d": render_fig3d,
    "fig3e": render_fig3e,
}
