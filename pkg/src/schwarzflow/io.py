"""CSV and manifest output; numbers are written with 17 significant digits so they round-trip."""
from __future__ import annotations

import csv
import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def write_csv(path: Path, header: Sequence[str], columns: Sequence[Iterable]) -> Path:
    """Write equal-length columns under a header row."""
    cols = [list(c) for c in columns]
    n = {len(c) for c in cols}
    if len(n) > 1:
        raise ValueError("columns differ in length")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*cols):
            w.writerow([fmt(x) for x in row])
    return path


def read_csv(path: Path) -> Dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    out = {}
    for i, name in enumerate(header):
        vals = [r[i] for r in body]
        try:
            out[name] = np.array([float(v) for v in vals])
        except ValueError:
            out[name] = np.array(vals)
    return out


def write_record(path: Path, record: Dict[str, object]) -> Path:
    """Flat key,value file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in record.items():
            w.writerow([k, fmt(v)])
    return path


def sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    command: str
    config_path: Optional[str]
    output_dir: str
    files: List[Dict[str, str]] = field(default_factory=list)
    status: str = "ok"
    notes: List[str] = field(default_factory=list)

    def add(self, path: Path) -> None:
        path = Path(path)
        rel = os.path.relpath(path, self.output_dir)
        self.files.append({"name": rel, "sha256": sha256(path)})

    def write(self) -> Path:
        self.files.sort(key=lambda f: f["name"])
        path = Path(self.output_dir) / "manifest.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        doc = {"command": self.command, "config_path": self.config_path, "output_dir": self.output_dir,
               "status": self.status, "files": self.files, "notes": self.notes}
        with open(path, "w", newline="\n") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return path


__all__ = ["fmt", "write_csv", "read_csv", "write_record", "sha256", "RunManifest"]
