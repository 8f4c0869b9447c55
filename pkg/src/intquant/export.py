"""Plain-file output: JSON matrix records, CSV tables and run manifests."""
import csv
import json
import platform
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy

from . import kernels

SCHEMA_VERSION = 1


@dataclass
class MatrixRecord:
    """Square complex matrix as row-major ``[re, im]`` pairs."""

    label: str
    matrix: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"matrix must be square, got shape {m.shape}")
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def to_dict(self) -> dict:
        flat = self.matrix.ravel()
        return {
            "label": self.label,
            "dim": self.dim,
            "entries": np.stack([flat.real, flat.imag], axis=1).tolist(),
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, d) -> "MatrixRecord":
        dim = int(d["dim"])
        e = np.asarray(d["entries"], dtype=float)
        if e.shape != (dim * dim, 2):
            raise ValueError(f"expected {dim * dim} [re, im] entries, got {e.shape[0]}")
        return cls(d["label"], (e[:, 0] + 1j * e[:, 1]).reshape(dim, dim), d.get("metadata", {}))

    def write(self, path):
        write_json(self.to_dict(), path)

    @classmethod
    def read(cls, path) -> "MatrixRecord":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    return obj


def write_json(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_clean(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def versions() -> dict:
    from . import __version__
    return {
        "intquant": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "kernel_backend": kernels.BACKEND,
    }


def write_manifest(outdir, command, config, outputs, tolerances, extra=None):
    """``manifest.json``: config echo, versions, tolerances and output files."""
    outdir = Path(outdir)
    body = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "versions": versions(),
        "tolerances": tolerances,
        "outputs": sorted(str(Path(p).name) for p in outputs),
    }
    if extra:
        body.update(extra)
    path = outdir / f"manifest_{command}.json"
    write_json(body, path)
    return path
