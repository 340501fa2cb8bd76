"""Read-only access to the primary CLI's CSV artifacts and JSON manifest.

Every CSV is verified against the SHA-256 checksum recorded in the manifest
before a single value is parsed; a mismatch aborts rendering.  Column units
come from the manifest's per-file metadata, never from this package.
"""

import csv
import hashlib
import json
import os
from dataclasses import dataclass, field

import numpy as np


class ArtifactError(Exception):
    """Artifact missing, corrupt, or inconsistent with its manifest."""


def load_manifest(path):
    try:
        with open(path, encoding="utf-8") as fh:
            manifest = json.load(fh)
    except OSError as exc:
        raise ArtifactError(f"cannot read manifest {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ArtifactError(
            f"manifest {path!r} is not valid JSON: {exc}") from exc
    for key in ("experiment", "files", "results"):
        if key not in manifest:
            raise ArtifactError(f"manifest {path!r} lacks the {key!r} entry")
    return manifest


def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def verify_checksum(csv_path, manifest, manifest_path="<manifest>"):
    """Match `csv_path` against the manifest entry with the same basename."""
    base = os.path.basename(csv_path)
    entry = next((f for f in manifest["files"] if f.get("path") == base), None)
    if entry is None:
        known = ", ".join(f.get("path", "?") for f in manifest["files"])
        raise ArtifactError(
            f"{base!r} is not listed in {manifest_path} (it has: {known})")
    try:
        actual = _sha256(csv_path)
    except OSError as exc:
        raise ArtifactError(f"cannot read {csv_path!r}: {exc}") from exc
    if actual != entry["sha256"]:
        raise ArtifactError(
            f"checksum mismatch for {csv_path!r}: manifest says "
            f"{entry['sha256']}, file hashes to {actual}; refusing to render")
    return entry


@dataclass(frozen=True)
class Table:
    """One verified CSV: named columns plus the manifest's unit metadata."""

    path: str
    header: tuple
    units: dict = field(repr=False)
    data: dict = field(repr=False)  # name -> 1-D array (float or str)

    @property
    def n_rows(self):
        return 0 if not self.header else len(self.data[self.header[0]])

    def column(self, name):
        if name not in self.data:
            raise ArtifactError(
                f"{self.path!r} has no column {name!r} "
                f"(columns: {', '.join(self.header)})")
        return self.data[name]

    def label(self, name):
        """Axis label straight from the manifest metadata."""
        self.column(name)
        unit = self.units.get(name, "")
        return f"{name} [{unit}]" if unit and unit != "1" else name


def load_table(csv_path, manifest, manifest_path="<manifest>"):
    """Checksum-verify then parse one CSV into a Table."""
    entry = verify_checksum(csv_path, manifest, manifest_path)
    with open(csv_path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = tuple(next(reader))
        except StopIteration:
            raise ArtifactError(f"{csv_path!r} is empty") from None
        raw = {name: [] for name in header}
        for row in reader:
            if len(row) != len(header):
                raise ArtifactError(
                    f"{csv_path!r}: row with {len(row)} fields, "
                    f"expected {len(header)}")
            for name, value in zip(header, row):
                raw[name].append(value)
    data = {}
    for name, values in raw.items():
        try:
            data[name] = np.array([float(v) for v in values])
        except ValueError:
            data[name] = np.array(values, dtype=object)
    return Table(path=csv_path, header=header,
                 units=dict(entry.get("columns", {})), data=data)


def manifest_result(manifest, name):
    """A scalar result's (value, unit) from the manifest, or (None, None)."""
    entry = manifest.get("results", {}).get(name)
    if entry is None:
        return None, None
    return entry.get("value"), entry.get("unit")
