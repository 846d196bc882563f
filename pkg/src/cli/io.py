"""
Reading and writing run artifacts: fields, edge sets, tables and documents
"""
import csv
import json
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Union

import numpy as np
import yaml
from pydantic import BaseModel

from src.connection.base import Connection
from src.core.exceptions import UsageError
from src.core.schemas.enums import FieldFormat
from src.core.schemas.geometry import ConnectionDocument
from src.geom.domain import Point
from src.lifting.grid import EdgeSet, GridField, LatticeGrid

logger = logging.getLogger(__name__)

FIELD_MAGIC = "ferroconnect-field"


def _header(field: GridField, fmt: FieldFormat) -> str:
    grid = field.grid
    comps = field.values.shape[-1]
    return json.dumps(
        {
            "magic": FIELD_MAGIC,
            "format": FieldFormat(fmt).value,
            "origin": list(grid.origin),
            "h": grid.h,
            "dims": list(grid.shape),
            "components": comps,
        },
        sort_keys=True,
    )


def write_field(path: Path, field: GridField, fmt: FieldFormat = FieldFormat.TEXT) -> Path:
    """Header line, then one row per node (mask flag and components), row-major"""
    path = Path(path)
    fmt = FieldFormat(fmt)
    grid = field.grid
    values = field.values.reshape(grid.shape[0] * grid.shape[1], -1)
    mask = grid.mask.ravel()
    if fmt == FieldFormat.TEXT:
        lines = [_header(field, fmt)]
        lines += [" ".join([str(int(m))] + [repr(float(v)) for v in row]) for m, row in zip(mask, values)]
        path.write_text("\n".join(lines) + "\n")
    else:
        with path.open("wb") as fh:
            fh.write((_header(field, fmt) + "\n").encode("utf-8"))
            fh.write(mask.astype(np.uint8).tobytes())
            fh.write(values.astype("<f8").tobytes())
    return path


def read_field(path: Path) -> GridField:
    path = Path(path)
    raw = path.read_bytes()
    newline = raw.index(b"\n")
    try:
        header = json.loads(raw[:newline].decode("utf-8"))
    except ValueError as exc:
        raise UsageError(f"{path} is not a field file", field="field") from exc
    if header.get("magic") != FIELD_MAGIC:
        raise UsageError(f"{path} is not a field file", field="field")

    ny, nx = header["dims"]
    comps = header["components"]
    count = ny * nx
    if header["format"] == FieldFormat.TEXT.value:
        rows = np.loadtxt(raw[newline + 1:].decode("utf-8").splitlines(), ndmin=2)
        mask = rows[:, 0].astype(bool)
        values = rows[:, 1:]
    else:
        body = raw[newline + 1:]
        mask = np.frombuffer(body[:count], dtype=np.uint8).astype(bool)
        values = np.frombuffer(body[count:], dtype="<f8").reshape(count, comps)

    grid = LatticeGrid(tuple(header["origin"]), header["h"], (ny, nx), mask.reshape(ny, nx))
    return GridField(grid, values.reshape(ny, nx, comps).copy())


def write_edges(path: Path, edges: EdgeSet) -> Path:
    """Edge midpoints as `x y` rows for plotting"""
    path = Path(path)
    mids = edges.midpoints()
    lines = [f"# {len(mids)} edges, h={edges.grid.h!r}"] + [f"{x!r} {y!r}" for x, y in mids]
    path.write_text("\n".join(lines) + "\n")
    return path


def write_csv(path: Path, rows: Sequence[Dict]) -> Path:
    path = Path(path)
    rows = list(rows)
    fields: List[str] = []
    for row in rows:
        fields += [k for k in row if k not in fields]
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
    return path


def read_csv(path: Path) -> List[Dict[str, str]]:
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh))


def _plain(obj):
    if isinstance(obj, BaseModel):
        return obj.model_dump(mode="json")
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def write_json(path: Path, data: Union[BaseModel, Dict, List]) -> Path:
    path = Path(path)
    if isinstance(data, BaseModel):
        data = data.model_dump(mode="json")
    path.write_text(json.dumps(data, indent=2, sort_keys=True, default=_plain) + "\n")
    return path


def read_json(path: Path):
    return json.loads(Path(path).read_text())


def read_points(path: Path) -> List[Point]:
    """Array of [x, y] pairs in JSON or YAML"""
    try:
        data = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise UsageError(f"cannot read {path}: {exc}", field="points") from exc
    if isinstance(data, dict):
        data = data.get("points")
    try:
        return [(float(x), float(y)) for x, y in data]
    except (TypeError, ValueError) as exc:
        raise UsageError("points file must hold an array of [x, y] pairs", field="points") from exc


def write_points(path: Path, points: Iterable[Point]) -> Path:
    return write_json(path, [[float(x), float(y)] for x, y in points])


def write_connection(path: Path, connection: Connection, domain_name: str) -> Path:
    path = Path(path)
    path.write_text(connection.to_document(domain_name).model_dump_json(indent=2) + "\n")
    return path


def read_connection(path: Path) -> Connection:
    return Connection.from_document(ConnectionDocument.model_validate_json(Path(path).read_text()))


def write_polylines(path: Path, polylines: Sequence[np.ndarray]) -> Path:
    return write_json(path, [np.asarray(p).tolist() for p in polylines])
