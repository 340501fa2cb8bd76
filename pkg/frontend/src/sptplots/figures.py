"""Renderers for the three supported figures.

fig2: phase-diagram heatmap over (J, lambda) with magnetization and
      photon-number slice subplots, plus the traced boundary curve.
fig3: critical-field boundary family B_c(T), one curve per filling factor.
fig4: transmission |t| map(s) over (omega_z, omega) with a dotted marker at
      the critical omega_z taken from the manifest.

All units, labels and marker positions come from the artifacts; nothing
physical is computed here.
"""

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .artifacts import (ArtifactError, load_manifest, load_table,
                        manifest_result)
from .recipes import RecipeError

NO_BOUNDARY_NOTE = "no boundary in range"


def _load_group(group):
    manifest = load_manifest(group.manifest)
    tables = [load_table(path, manifest, group.manifest)
              for path in group.csv]
    return manifest, tables


def _table_with(tables, column):
    for table in tables:
        if column in table.header:
            return table
    return None


def _require_table(tables, column, what):
    table = _table_with(tables, column)
    if table is None:
        raise ArtifactError(
            f"no input CSV provides the {what} (missing column {column!r})")
    return table


def _pivot(table, xcol, ycol, values):
    xs, xi = np.unique(table.column(xcol), return_inverse=True)
    ys, yi = np.unique(table.column(ycol), return_inverse=True)
    grid = np.full((len(ys), len(xs)), np.nan)
    grid[yi, xi] = values
    return xs, ys, grid


def _annotate_empty(ax, note=NO_BOUNDARY_NOTE):
    ax.annotate(note, xy=(0.5, 0.5), xycoords="axes fraction",
                ha="center", va="center", fontsize=11, style="italic")


def _apply_scales(ax, style):
    if style.get("log_x"):
        ax.set_xscale("log")
    if style.get("log_y"):
        ax.set_yscale("log")


def _finite(value):
    return value is not None and isinstance(value, (int, float)) \
        and math.isfinite(value)


def _render_fig2(recipe):
    manifest, tables = _load_group(recipe.inputs[0])
    grid_tab = _require_table(tables, "m_uniform", "phase-diagram grid")
    boundary_tab = _table_with(tables, "lambda_c_per_s")
    cmap = recipe.style.get("colormap", "viridis")

    order = np.maximum(np.abs(grid_tab.column("m_uniform")),
                       np.abs(grid_tab.column("m_staggered")))
    xs, ys, zgrid = _pivot(grid_tab, "J_per_s", "lambda_bar_per_s", order)

    fig = plt.figure(figsize=(10, 5))
    gs = fig.add_gridspec(2, 2, width_ratios=(1.6, 1))
    ax_map = fig.add_subplot(gs[:, 0])
    ax_m = fig.add_subplot(gs[0, 1])
    ax_n = fig.add_subplot(gs[1, 1], sharex=ax_m)

    mesh = ax_map.pcolormesh(xs, ys, zgrid, shading="nearest", cmap=cmap)
    fig.colorbar(mesh, ax=ax_map, label="order parameter |m|")
    ax_map.set_xlabel(grid_tab.label("J_per_s"))
    ax_map.set_ylabel(grid_tab.label("lambda_bar_per_s"))
    _apply_scales(ax_map, recipe.style)

    if boundary_tab is not None:
        bj = boundary_tab.column("J_per_s")
        bl = boundary_tab.column("lambda_c_per_s")
        keep = np.isfinite(bl)
        if np.any(keep):
            ax_map.plot(bj[keep], bl[keep], "w.-", lw=1.5,
                        label="phase boundary")
            ax_map.legend(loc="upper right", framealpha=0.6)
        else:
            _annotate_empty(ax_map)
    else:
        _annotate_empty(ax_map)

    # slice subplots at the largest J column
    j_slice = xs[-1]
    mask = grid_tab.column("J_per_s") == j_slice
    lam = grid_tab.column("lambda_bar_per_s")[mask]
    srt = np.argsort(lam)
    ax_m.plot(lam[srt], order[mask][srt], ".-")
    ax_m.set_ylabel("|m|")
    ax_n.plot(lam[srt], grid_tab.column("photons_per_spin")[mask][srt], ".-")
    ax_n.set_ylabel(grid_tab.label("photons_per_spin"))
    ax_n.set_xlabel(grid_tab.label("lambda_bar_per_s"))
    ax_m.set_title(f"slice at {grid_tab.label('J_per_s')} = {j_slice:g}",
                   fontsize=9)

    fig.suptitle(manifest["experiment"])
    return fig


def _render_fig3(recipe):
    manifest, tables = _load_group(recipe.inputs[0])
    boundary_tab = _require_table(tables, "B_c_T", "boundary family")
    tc_tab = _table_with(tables, "T_c_K")

    fig, ax = plt.subplots(figsize=(6, 4.5))
    nus = np.unique(boundary_tab.column("nu"))
    any_points = False
    for nu in nus:
        mask = boundary_tab.column("nu") == nu
        t = boundary_tab.column("T_K")[mask]
        b = boundary_tab.column("B_c_T")[mask]
        keep = np.isfinite(b)
        if not np.any(keep):
            continue
        any_points = True
        srt = np.argsort(t[keep])
        (line,) = ax.plot(t[keep][srt], b[keep][srt], ".-",
                          label=f"nu = {nu:g}")
        if tc_tab is not None:
            tc_mask = (tc_tab.column("nu") == nu) \
                & np.isfinite(tc_tab.column("T_c_K"))
            if np.any(tc_mask):
                ax.plot(tc_tab.column("T_c_K")[tc_mask],
                        np.zeros(int(np.sum(tc_mask))), "o",
                        color=line.get_color(), mfc="none")
    if not any_points:
        _annotate_empty(ax)
    else:
        ax.legend()
    ax.set_xlabel(boundary_tab.label("T_K"))
    ax.set_ylabel(boundary_tab.label("B_c_T"))
    _apply_scales(ax, recipe.style)
    ax.set_title(manifest["experiment"])
    return fig


def _render_fig4(recipe):
    cmap = recipe.style.get("colormap", "inferno")
    n_panels = len(recipe.inputs)
    fig, axes = plt.subplots(1, n_panels, figsize=(5.5 * n_panels, 4.5),
                             squeeze=False)
    for ax, group in zip(axes[0], recipe.inputs):
        manifest, tables = _load_group(group)
        grid_tab = _require_table(tables, "abs_t", "transmission map")
        xs, ys, zgrid = _pivot(grid_tab, "omega_z_per_s", "omega_per_s",
                               grid_tab.column("abs_t"))
        mesh = ax.pcolormesh(xs, ys, zgrid, shading="nearest", cmap=cmap)
        fig.colorbar(mesh, ax=ax, label=grid_tab.label("abs_t"))
        ax.set_xlabel(grid_tab.label("omega_z_per_s"))
        ax.set_ylabel(grid_tab.label("omega_per_s"))
        _apply_scales(ax, recipe.style)

        wzc, _ = manifest_result(manifest, "omega_z_c_per_s")
        if _finite(wzc):
            ax.axvline(wzc, color="black", linestyle=":", lw=1.5)
        t_val, t_unit = manifest_result(manifest, "T_K")
        if t_val is not None:
            ax.set_title(f"T = {t_val:g} {t_unit or ''}".rstrip())
    fig.suptitle("transmission")
    return fig


_RENDERERS = {"fig2": _render_fig2, "fig3": _render_fig3, "fig4": _render_fig4}


def render(recipe):
    """Render `recipe` to its output image; returns the output path."""
    renderer = _RENDERERS.get(recipe.figure_id)
    if renderer is None:
        raise RecipeError(f"unsupported figure id {recipe.figure_id!r}")
    fig = renderer(recipe)
    try:
        fig.savefig(recipe.output, dpi=recipe.style.get("dpi", 150),
                    bbox_inches="tight")
    finally:
        plt.close(fig)
    return recipe.output
