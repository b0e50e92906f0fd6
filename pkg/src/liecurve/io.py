"""File formats: curve JSON, Frenet CSV, JSON reports. Writes are atomic."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .frenet import CurveSamples, FrenetData
from .lie_algebra import PRESETS, get_algebra

FRENET_COLUMNS = ["s", "kappa", "tau", "tau_G", "H", "H_prime", "sigma_N"]
FRAME_COLUMNS = [f"{v}{i}" for v in "TNB" for i in (1, 2, 3)]


def atomic_write_text(path, text: str) -> None:
    """Write to a temporary file in the target directory, then rename over."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if np.isfinite(x) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, shortest round-trip floats, NaN/inf as null."""
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path, obj) -> None:
    atomic_write_text(path, dumps(obj))


def read_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _array(data, key, path, width=None):
    try:
        arr = np.asarray(data[key], dtype=float)
    except KeyError:
        raise ValidationError(f"{path}: missing key {key!r}") from None
    except (TypeError, ValueError):
        raise ValidationError(f"{path}: key {key!r} must hold numbers") from None
    if width is None and arr.ndim != 1:
        raise ValidationError(f"{path}: key {key!r} must be a flat list")
    if width is not None and (arr.ndim != 2 or arr.shape[1] not in width):
        raise ValidationError(f"{path}: key {key!r} must be a list of {'/'.join(map(str, width))}-vectors")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{path}: key {key!r} contains non-finite values")
    return arr


def curve_from_json(data: dict, path="<curve>") -> CurveSamples:
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: top level must be an object")
    if "algebra" not in data:
        raise ValidationError(f"{path}: missing key 'algebra' (one of {', '.join(sorted(PRESETS))} or an inline definition)")
    try:
        g = get_algebra(data["algebra"])
    except ValidationError as exc:
        raise ValidationError(f"{path}: key 'algebra': {exc}") from None
    s = _array(data, "s", path)
    tangent = _array(data, "tangent", path, width=(3,))
    position = None
    if data.get("position") is not None:
        position = _array(data, "position", path, width=(3, 4))
    if len(tangent) != len(s):
        raise ValidationError(f"{path}: key 'tangent' has {len(tangent)} rows but 's' has {len(s)}")
    if position is not None and len(position) != len(s):
        raise ValidationError(f"{path}: key 'position' has {len(position)} rows but 's' has {len(s)}")
    meta = {"provenance": data["provenance"]} if "provenance" in data else {}
    try:
        return CurveSamples(g, s, tangent, position, meta)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from None


def read_curve(path) -> CurveSamples:
    return curve_from_json(read_json(path), path)


def curve_to_json(curve: CurveSamples, provenance: dict | None = None) -> dict:
    g = curve.algebra
    algebra = g.name if PRESETS.get(g.name) is g else g.to_json()
    out = {"algebra": algebra, "s": curve.s, "tangent": curve.tangent}
    if curve.position is not None:
        out["position"] = curve.position
    prov = provenance if provenance is not None else curve.metadata.get("provenance") or curve.metadata.get("generator")
    if prov:
        out["provenance"] = prov
    return out


def write_curve(path, curve: CurveSamples, provenance: dict | None = None) -> None:
    write_json(path, curve_to_json(curve, provenance))


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def frenet_csv(fd: FrenetData, frames: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    cols = FRENET_COLUMNS + (FRAME_COLUMNS if frames else [])
    writer.writerow(cols)
    tracks = fd.tracks()
    for i in range(len(fd)):
        row = [_fmt(tracks[c][i]) for c in FRENET_COLUMNS]
        if frames:
            row += [_fmt(v) for v in np.concatenate([fd.T[i], fd.N[i], fd.B[i]])]
        writer.writerow(row)
    return buf.getvalue()


def write_frenet_csv(path, fd: FrenetData, frames: bool = False) -> None:
    atomic_write_text(path, frenet_csv(fd, frames))


def read_frenet_csv(path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    data = np.array([[float(x) for x in r] for r in body])
    return {name: data[:, j] for j, name in enumerate(header)}
