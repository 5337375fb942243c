"""Run reports and spy grids.

A :class:`RunReport` is the JSON record every CLI command writes. Its layout
(``schema_version`` 1) is::

    {
      "schema_version": 1,
      "command": "canon",
      "settings": {"tol": ..., "max_sweeps": ..., ...},
      "input": {"path": ..., "sha256": ..., "rows": ..., "cols": ...},
      "structure": {...},          # StructureReport fields
      "outputs": {...},            # canonical data, eigenvalues, ...
      "sweeps": {...},
      "residuals": {...},
      "seed": null,
      "wall_time": null            # only filled with --timing
    }

Complex numbers are stored as ``[re, im]`` pairs; keys are sorted so equal
runs produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1


def jsonable(obj):
    """Convert numpy scalars/arrays and complex numbers into JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


@dataclass
class RunReport:
    command: str
    settings: dict = field(default_factory=dict)
    input: dict = field(default_factory=dict)
    structure: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    sweeps: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    seed: int | None = None
    wall_time: float | None = None
    schema_version: int = SCHEMA_VERSION

    def to_dict(self):
        return jsonable({
            "schema_version": self.schema_version,
            "command": self.command,
            "settings": self.settings,
            "input": self.input,
            "structure": self.structure,
            "outputs": self.outputs,
            "sweeps": self.sweeps,
            "residuals": self.residuals,
            "seed": self.seed,
            "wall_time": self.wall_time,
        })

    @classmethod
    def from_dict(cls, data):
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema_version {version!r}")
        return cls(
            command=data["command"], settings=data.get("settings", {}),
            input=data.get("input", {}), structure=data.get("structure", {}),
            outputs=data.get("outputs", {}), sweeps=data.get("sweeps", {}),
            residuals=data.get("residuals", {}), seed=data.get("seed"),
            wall_time=data.get("wall_time"), schema_version=version,
        )

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def write(self, path):
        Path(path).write_text(self.to_json())


@dataclass
class SpyGrid:
    """Entry magnitudes of a matrix together with threshold masks.

    ``masks[k][i, j]`` is ``magnitudes[i, j] > thresholds[k]``.
    """

    magnitudes: np.ndarray
    thresholds: tuple

    def __post_init__(self):
        self.magnitudes = np.asarray(self.magnitudes, dtype=float)
        if self.magnitudes.ndim != 2:
            raise ValueError("magnitudes must be a 2-D grid")
        self.thresholds = tuple(float(t) for t in self.thresholds)

    @classmethod
    def of(cls, a, thresholds):
        return cls(np.abs(np.asarray(a)), thresholds)

    @property
    def rows(self):
        return self.magnitudes.shape[0]

    @property
    def cols(self):
        return self.magnitudes.shape[1]

    @property
    def masks(self):
        return [self.magnitudes > t for t in self.thresholds]

    def survivors(self, k=0):
        """``(i, j)`` positions above threshold ``k``."""
        return [tuple(int(v) for v in ij) for ij in np.argwhere(self.masks[k])]

    def to_csv(self):
        return "".join(",".join(repr(float(v)) for v in row) + "\n" for row in self.magnitudes)

    @classmethod
    def from_csv(cls, text, thresholds):
        rows = [line.split(",") for line in text.splitlines() if line.strip()]
        return cls(np.array([[float(v) for v in row] for row in rows]), thresholds)

    def mask_pbm(self, k):
        mask = self.masks[k]
        lines = ["P1", f"# threshold {self.thresholds[k]!r}", f"{self.cols} {self.rows}"]
        lines += [" ".join("1" if v else "0" for v in row) for row in mask]
        return "\n".join(lines) + "\n"

    def write(self, directory, stem):
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        paths = [directory / f"{stem}.csv"]
        paths[0].write_text(self.to_csv())
        for k in range(len(self.thresholds)):
            p = directory / f"{stem}.mask{k}.pbm"
            p.write_text(self.mask_pbm(k))
            paths.append(p)
        return paths


def read_pbm(text):
    """Boolean grid from an ASCII PBM (P1) file."""
    tokens = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        tokens.extend(line.split())
    if not tokens or tokens[0] != "P1":
        raise ValueError("not an ASCII PBM file")
    cols, rows = int(tokens[1]), int(tokens[2])
    bits = [t == "1" for t in tokens[3:]]
    if len(bits) != rows * cols:
        raise ValueError("PBM pixel count does not match its size")
    return np.array(bits, dtype=bool).reshape(rows, cols)
