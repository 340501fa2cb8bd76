"""Figure recipes: which artifacts to draw, and how.

A recipe is a small TOML file:

    [figure]
    id = "fig4"            # fig2 | fig3 | fig4
    output = "fig4.png"

    [style]                # optional
    colormap = "viridis"
    log_x = false
    log_y = false

    [[inputs]]             # one group per panel/run
    manifest = "runA_manifest.json"
    csv = ["runA_grid.csv", "runA_columns.csv"]

Relative paths are resolved against the recipe file's directory.
"""

import os
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

FIGURE_IDS = ("fig2", "fig3", "fig4")

_STYLE_KEYS = {"colormap": str, "log_x": bool, "log_y": bool, "dpi": int}


class RecipeError(ValueError):
    """Invalid or unparseable figure recipe."""


@dataclass(frozen=True)
class InputGroup:
    manifest: str
    csv: tuple


@dataclass(frozen=True)
class FigureRecipe:
    figure_id: str
    output: str
    inputs: tuple
    style: dict = field(default_factory=dict)


def _resolve(base_dir, path):
    return path if os.path.isabs(path) else os.path.join(base_dir, path)


def load_recipe(path):
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise RecipeError(f"cannot read recipe {path!r}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise RecipeError(f"recipe {path!r} is not valid TOML: {exc}") from exc

    unknown = set(raw) - {"figure", "style", "inputs"}
    if unknown:
        raise RecipeError(f"unknown recipe sections: {', '.join(sorted(unknown))}")

    figure = raw.get("figure", {})
    fig_id = figure.get("id")
    if fig_id not in FIGURE_IDS:
        raise RecipeError(
            f"figure id must be one of {', '.join(FIGURE_IDS)}, got {fig_id!r}")
    output = figure.get("output")
    if not isinstance(output, str) or not output:
        raise RecipeError("figure.output must be a non-empty path")
    unknown = set(figure) - {"id", "output"}
    if unknown:
        raise RecipeError(f"unknown [figure] keys: {', '.join(sorted(unknown))}")

    style = raw.get("style", {})
    for key, value in style.items():
        want = _STYLE_KEYS.get(key)
        if want is None:
            raise RecipeError(f"unknown [style] key {key!r}")
        if not isinstance(value, want) or (want is int and
                                           isinstance(value, bool)):
            raise RecipeError(
                f"[style] {key} must be a {want.__name__}, got {value!r}")

    groups = raw.get("inputs")
    if not isinstance(groups, list) or not groups:
        raise RecipeError("recipe needs at least one [[inputs]] group")
    base_dir = os.path.dirname(os.path.abspath(path))
    parsed = []
    for i, group in enumerate(groups):
        if not isinstance(group, dict):
            raise RecipeError(f"[[inputs]] group {i} must be a table")
        unknown = set(group) - {"manifest", "csv"}
        if unknown:
            raise RecipeError(
                f"unknown [[inputs]] keys: {', '.join(sorted(unknown))}")
        manifest = group.get("manifest")
        csvs = group.get("csv")
        if not isinstance(manifest, str):
            raise RecipeError(f"[[inputs]] group {i} needs a manifest path")
        if (not isinstance(csvs, list) or not csvs
                or not all(isinstance(c, str) for c in csvs)):
            raise RecipeError(
                f"[[inputs]] group {i} needs a non-empty csv path list")
        parsed.append(InputGroup(
            manifest=_resolve(base_dir, manifest),
            csv=tuple(_resolve(base_dir, c) for c in csvs)))

    return FigureRecipe(
        figure_id=fig_id,
        output=_resolve(base_dir, output),
        inputs=tuple(parsed),
        style=dict(style),
    )
