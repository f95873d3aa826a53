"""CSV and JSON report files.

Every file starts with a provenance record: CSV files with a ``#`` comment
line, JSON files with a leading ``"_meta"`` string carrying the same text.
Floats are written with ``repr`` (shortest round-trip form), so a rerun with
the same inputs reproduces the files byte for byte.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import __version__
from .gevrey import PowerNormCurve
from .spectral import DiagonalVector, Spectrum

SCHEMA_VERSION = 1
TOOL = "gevrey-lab"


def config_hash(payload: Any) -> str:
    """SHA-256 of the canonical JSON form of ``payload``."""
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=_jsonable)
    return hashlib.sha256(text.encode()).hexdigest()


def provenance(config_sha: str) -> str:
    return f"{TOOL} {__version__} config_sha256={config_sha}"


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    return str(x)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence], config_sha: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        fh.write(f"# {provenance(config_sha)}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    with Path(path).open(newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    rows = list(csv.reader(lines))
    return rows[0], rows[1:]


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _clean(obj):
    """Replace non-finite floats by strings, JSON has no spelling for them."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else _fmt(x)
    return obj


def write_json(path: Path, payload: dict, config_sha: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {"_meta": provenance(config_sha), "schema_version": SCHEMA_VERSION}
    doc.update(_clean(payload))
    path.write_text(json.dumps(doc, indent=2, default=_jsonable, allow_nan=False) + "\n")
    return path


def write_curve(path: Path, curve: PowerNormCurve, config_sha: str, key: str = "k") -> Path:
    return write_csv(path, [key, "logM"], zip(curve.ks, curve.log_norms), config_sha)


def read_curve(path: Path, t: float = math.nan) -> PowerNormCurve:
    header, rows = read_csv(path)
    data = np.array([[float(v) for v in r[:2]] for r in rows])
    return PowerNormCurve(t, data[:, 0], data[:, 1])


def write_vector(path: Path, v: DiagonalVector, config_sha: str) -> Path:
    sp = v.spectrum
    rows = zip(range(1, sp.count + 1), sp.eigenvalues, v.sign, v.logmag)
    return write_csv(path, ["n", "lambda", "sign", "logmag"], rows, config_sha)


def read_vector(path: Path) -> DiagonalVector:
    _, rows = read_csv(path)
    lam = [float(r[1]) for r in rows]
    sp = Spectrum.explicit(lam)
    return DiagonalVector.from_log(sp, [int(r[2]) for r in rows], [float(r[3]) for r in rows])
