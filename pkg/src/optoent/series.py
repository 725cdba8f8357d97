"""Tabular output container with deterministic CSV/JSON writers.

Numbers are rendered with 17 significant digits so files round-trip to the
exact binary doubles; metadata lines carry the resolved configuration and
its hash, never wall-clock content.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import TextIO

import numpy as np

__all__ = ["SpectrumSeries", "config_hash"]


def config_hash(config: dict) -> str:
    """Stable 12-hex-digit digest of a resolved run configuration."""
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


@dataclass
class SpectrumSeries:
    columns: list[str]
    rows: np.ndarray  # shape (n, len(columns)); bool columns stored as 0/1
    meta: dict[str, str] = field(default_factory=dict)

    def write_csv(self, fp: TextIO) -> None:
        for key in sorted(self.meta):
            fp.write(f"# {key}: {self.meta[key]}\n")
        fp.write(",".join(self.columns) + "\n")
        for row in np.atleast_2d(self.rows):
            fp.write(",".join(f"{v:.17g}" for v in row) + "\n")

    def write_json(self, fp: TextIO) -> None:
        payload = {
            "meta": dict(sorted(self.meta.items())),
            "columns": list(self.columns),
            "rows": [[float(f"{v:.17g}") for v in row] for row in np.atleast_2d(self.rows)],
        }
        json.dump(payload, fp, indent=1)
        fp.write("\n")

    def write(self, fp: TextIO, fmt: str) -> None:
        if fmt == "csv":
            self.write_csv(fp)
        elif fmt == "json":
            self.write_json(fp)
        else:
            raise ValueError(f"unknown format {fmt!r}")
