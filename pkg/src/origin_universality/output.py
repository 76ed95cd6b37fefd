"""Result files: '#'-headed CSV, JSON summaries and a separate metadata file for timestamps."""

from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import io
import json
import math
import platform
from pathlib import Path

import numpy as np

__all__ = ["config_hash", "format_value", "write_csv", "read_csv_body", "write_json", "write_metadata"]


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def config_hash(config: dict) -> str:
    blob = json.dumps(_plain(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    return str(v)


def write_csv(path: Path, digest: str, columns, rows, comments=()) -> Path:
    """First line '# config_sha256=...', further '#' comments, header, then rows."""
    path = Path(path)
    buf = io.StringIO()
    buf.write(f"# config_sha256={digest}\n")
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        if isinstance(row, dict):
            row = [row[c] for c in columns]
        w.writerow([format_value(v) for v in row])
    path.write_text(buf.getvalue())
    return path


def read_csv_body(path: Path) -> str:
    """Everything after the leading '#' comment lines."""
    lines = Path(path).read_text().splitlines(keepends=True)
    k = 0
    while k < len(lines) and lines[k].startswith("#"):
        k += 1
    return "".join(lines[k:])


def write_json(path: Path, digest: str, payload: dict) -> Path:
    path = Path(path)
    body = {"config_sha256": digest, **_plain(payload)}
    path.write_text(json.dumps(body, indent=2, sort_keys=False) + "\n")
    return path


def write_metadata(path: Path, digest: str, command: str, argv, files) -> Path:
    """The only output that carries wall-clock information."""
    from . import __version__

    meta = {
        "config_sha256": digest,
        "command": command,
        "argv": list(argv),
        "created_utc": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "package_version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "files": sorted(str(Path(f).name) for f in files),
    }
    Path(path).write_text(json.dumps(meta, indent=2) + "\n")
    return Path(path)
