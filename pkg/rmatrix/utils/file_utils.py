"""File handling utilities for rmatrix.

Reads the JSON input formats (algebras, r-matrices, group elements) and
writes report files atomically.
"""

from pathlib import Path
from typing import Any
import json
import logging
import os
import tempfile

import numpy as np

from rmatrix.algebra.bialgebra import TensorR
from rmatrix.algebra.dialgebra import REndomorphism, r_from_matrix, r_from_split
from rmatrix.algebra.liealg import LieAlgebra, build_algebra
from rmatrix.algebra.standard import by_name
from rmatrix.errors import InputFormatError

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
R_MATRIX_KINDS = ("split", "matrix", "tensor")


def read_json(file_path: Path | str) -> dict[str, Any]:
    """Read a JSON object from disk.

    Raises:
        FileNotFoundError: If the file does not exist
        json.JSONDecodeError: If the content is not valid JSON
        InputFormatError: If the top level is not an object
    """
    path = Path(file_path)
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")

    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)

    if not isinstance(data, dict):
        raise InputFormatError(f"{path}: expected a JSON object, got {type(data).__name__}")
    logger.debug(f"Read {path}")
    return data


def write_text_atomic(output_path: Path | str, content: str) -> None:
    """Write text through a temporary file in the target directory, then rename."""
    path = Path(output_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(content)
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise


def shipped_file(kind: str, name: str) -> Path | None:
    """Path of a shipped example under rmatrix/data/<kind>/, if present."""
    candidate = DATA_DIR / kind / f"{name}.json"
    return candidate if candidate.is_file() else None


def list_shipped(kind: str) -> list[str]:
    folder = DATA_DIR / kind
    if not folder.is_dir():
        return []
    return sorted(p.stem for p in folder.glob("*.json"))


def _require(data: dict[str, Any], key: str, source: str) -> Any:
    if key not in data:
        raise InputFormatError(f"{source}: missing required key '{key}'")
    return data[key]


def algebra_from_dict(
    data: dict[str, Any], source: str = "<dict>", config: dict[str, Any] | None = None
) -> LieAlgebra:
    """Build an algebra from {"name", "matrix_size", "basis": [[row-major reals]]}."""
    size = _require(data, "matrix_size", source)
    basis = _require(data, "basis", source)
    if not isinstance(size, int) or size < 1:
        raise InputFormatError(f"{source}: matrix_size must be a positive integer, got {size!r}")
    if not isinstance(basis, list) or not basis:
        raise InputFormatError(f"{source}: basis must be a non-empty list")

    mats = []
    for index, flat in enumerate(basis):
        if not isinstance(flat, list) or len(flat) != size * size:
            raise InputFormatError(
                f"{source}: basis[{index}] must hold {size * size} row-major entries"
            )
        mats.append(np.asarray(flat, dtype=float).reshape(size, size))

    return build_algebra(mats, name=str(data.get("name", Path(source).stem)), config=config)


def load_algebra(source: Path | str, config: dict[str, Any] | None = None) -> LieAlgebra:
    """Load an algebra from a JSON file or a shipped name (sl3-split, sl2, gl2, ...).

    Raises:
        InputFormatError: If the source is neither a readable file nor a known name
    """
    path = Path(source)
    if path.is_file():
        return algebra_from_dict(read_json(path), str(path), config)

    shipped = shipped_file("algebras", str(source))
    if shipped is not None:
        return algebra_from_dict(read_json(shipped), str(shipped), config)

    try:
        return by_name(str(source), config)
    except KeyError as e:
        raise InputFormatError(f"{source}: not a file and not a known algebra name") from e


def r_matrix_from_dict(
    data: dict[str, Any], algebra: LieAlgebra, source: str = "<dict>", config: dict[str, Any] | None = None
) -> REndomorphism | TensorR:
    """Build an r-matrix from one of the three JSON kinds.

    split:  {"kind": "split", "g_plus": [indices], "g_minus": [indices]}
    matrix: {"kind": "matrix", "entries": [[...]]}
    tensor: {"kind": "tensor", "coeffs": [[r^ij]]}
    """
    kind = _require(data, "kind", source)
    match kind:
        case "split":
            g_plus = _require(data, "g_plus", source)
            g_minus = _require(data, "g_minus", source)
            if not all(isinstance(i, int) for i in [*g_plus, *g_minus]):
                raise InputFormatError(f"{source}: split indices must be integers")
            return r_from_split(algebra, g_plus, g_minus, config)
        case "matrix":
            return r_from_matrix(algebra, _require(data, "entries", source))
        case "tensor":
            return TensorR(algebra, np.asarray(_require(data, "coeffs", source), dtype=float))
        case _:
            raise InputFormatError(
                f"{source}: unknown r-matrix kind {kind!r}, expected one of {', '.join(R_MATRIX_KINDS)}"
            )


def load_r_matrix(
    source: Path | str,
    algebra: LieAlgebra | None = None,
    config: dict[str, Any] | None = None,
) -> tuple[REndomorphism | TensorR, LieAlgebra]:
    """Load an r-matrix from a JSON file or a shipped name.

    Without an explicit algebra the file's "algebra" entry (a path or a
    shipped name) is used.

    Returns:
        (r-matrix, algebra it acts on)
    """
    path = Path(source)
    if not path.is_file():
        shipped = shipped_file("rmatrices", str(source))
        if shipped is None:
            raise InputFormatError(f"{source}: not a file and not a shipped r-matrix")
        path = shipped

    data = read_json(path)
    if algebra is None:
        reference = _require(data, "algebra", str(path))
        candidate = path.parent / str(reference)
        algebra = load_algebra(candidate if candidate.is_file() else reference, config)

    logger.info(f"Loaded {data.get('kind')} r-matrix from {path} on {algebra.name}")
    return r_matrix_from_dict(data, algebra, str(path), config), algebra


def load_matrix(source: Path | str) -> np.ndarray:
    """Load a square matrix from {"matrix": [[...]]}."""
    path = Path(source)
    data = read_json(path)
    matrix = np.asarray(_require(data, "matrix", str(path)), dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InputFormatError(f"{path}: matrix must be square, got shape {matrix.shape}")
    return matrix
