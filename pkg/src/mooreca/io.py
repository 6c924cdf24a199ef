"""File formats: grid text frames, PGM images, matrix CSV and JSON documents.

Every writer goes through :func:`atomic_write`, which writes a sibling
temporary file and renames it over the target.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any

import numpy as np

from .errors import CAError
from .errors import CAErrorCode
from .gfp import FieldSpec
from .grid import Configuration
from .grid import LatticeDims
from .grid import format_grid
from .grid import parse_grid
from .rulematrix import RuleMatrix

PGM_MAXVAL = 255


def atomic_write(path: Path, data: str | bytes) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = data.encode("utf-8") if isinstance(data, str) else data
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(payload)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return path


def dumps_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def write_json(path: Path, obj: Any) -> Path:
    return atomic_write(path, dumps_json(obj))


def load_json(path: Path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise CAError(CAErrorCode.INVALID_FORMAT, f"{path}: invalid JSON: {e}") from e


def write_grid(path: Path, c: Configuration) -> Path:
    return atomic_write(path, format_grid(c))


def read_grid(path: Path) -> Configuration:
    return parse_grid(Path(path).read_text(encoding="utf-8"))


def pgm_scale(p: int) -> int:
    return PGM_MAXVAL // (p - 1)


def pgm_bytes(c: Configuration) -> bytes:
    """Binary P5 image of ``c``, each cell scaled by ⌊255/(p-1)⌋."""
    pixels = (c.cells * pgm_scale(c.field.p)).astype(np.uint8)
    header = f"P5\n{c.dims.n} {c.dims.m}\n{PGM_MAXVAL}\n".encode("ascii")
    return header + pixels.tobytes()


def write_pgm(path: Path, c: Configuration) -> Path:
    return atomic_write(path, pgm_bytes(c))


def parse_pgm(data: bytes) -> np.ndarray[Any, np.dtype[np.uint8]]:
    """Decode a P5 image written by :func:`pgm_bytes` into a (height, width) array."""
    parts = data.split(b"\n", 3)
    if len(parts) != 4 or parts[0] != b"P5":
        raise CAError(CAErrorCode.INVALID_FORMAT, "not a binary PGM (P5) image")
    width, height = (int(tok) for tok in parts[1].split())
    pixels = np.frombuffer(parts[3], dtype=np.uint8)
    if pixels.size != width * height:
        raise CAError(CAErrorCode.INVALID_FORMAT, "PGM pixel data is truncated")
    return pixels.reshape(height, width)


def matrix_csv(T: RuleMatrix) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in T.dense_view:
        writer.writerow(int(v) for v in row)
    return buf.getvalue()


def write_matrix(
    csv_path: Path, header_path: Path, T: RuleMatrix, header: dict[str, Any]
) -> list[Path]:
    """Write the dense CSV and its JSON header."""
    return [atomic_write(csv_path, matrix_csv(T)), write_json(header_path, header)]


def read_matrix(csv_path: Path, header_path: Path) -> RuleMatrix:
    header = load_json(header_path)
    try:
        fld = FieldSpec(int(header["p"]))
        dims = LatticeDims(int(header["m"]), int(header["n"]))
    except (KeyError, TypeError, ValueError) as e:
        raise CAError(CAErrorCode.INVALID_FORMAT, f"{header_path}: bad matrix header: {e}") from e
    with Path(csv_path).open(newline="", encoding="utf-8") as handle:
        rows = [[int(v) for v in row] for row in csv.reader(handle) if row]
    return RuleMatrix.from_dense(
        fld, dims, np.array(rows, dtype=np.int64), str(header.get("spec", "custom")), "csv"
    )
