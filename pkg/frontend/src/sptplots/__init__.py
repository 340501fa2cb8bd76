"""Figure rendering for cavityspt CLI artifacts (CSV files + JSON manifest).

The package is deliberately physics-free: every number it draws, including
axis units and marker positions, comes from the CSV columns and the manifest
metadata written by the primary CLI.
"""

__version__ = "0.1.0"

from .artifacts import ArtifactError, Table, load_manifest, load_table
from .figures import render
from .recipes import FigureRecipe, InputGroup, RecipeError, load_recipe

__all__ = [
    "__version__",
    "ArtifactError",
    "Table",
    "load_manifest",
    "load_table",
    "render",
    "FigureRecipe",
    "InputGroup",
    "RecipeError",
    "load_recipe",
]
