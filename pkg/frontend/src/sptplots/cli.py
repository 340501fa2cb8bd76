"""Command line: render figures from recipe files.

Usage:

    spt-plots render --recipe fig4.toml
"""

import argparse
import sys

from .artifacts import ArtifactError
from .figures import render
from .recipes import RecipeError, load_recipe

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_RECIPE = 2


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="spt-plots",
        description="Render figures from CSV/JSON artifacts.")
    sub = parser.add_subparsers(dest="command", required=True)
    render_parser = sub.add_parser("render", help="render one figure recipe")
    render_parser.add_argument("--recipe", required=True,
                               help="TOML recipe path")
    args = parser.parse_args(argv)

    try:
        recipe = load_recipe(args.recipe)
        output = render(recipe)
    except (RecipeError, ArtifactError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RECIPE
    except Exception as exc:  # noqa: BLE001 - boundary of the CLI
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"wrote {output}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
