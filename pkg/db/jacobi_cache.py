"""
Plain-text persistence for computed Jacobi matrices.

File layout (UTF-8):

    # minkowski-jacobi v1
    # n=96
    # iterations=143
    # eps=1e-12
    # builder=mink 0.3.0
    0<TAB>0<TAB>0.5
    1<TAB>0.20230293232998067<TAB>0.5
    ...

Row j carries a_j (a_0 = 0 by convention) and b_j, written with 17 significant digits so
that a save/load round trip is bit-exact.
"""
import hashlib
import logging
import os
import tempfile
from typing import Dict, Optional, Tuple

import numpy as np

import config
from jacobi.matrix import JacobiMatrix
from utils.errors import CacheFormatError, CacheMetadataError, CacheMissingError, DataError

logger = logging.getLogger(__name__)


def default_cache_path() -> str:
    return os.path.join(config.MINK_CACHE_DIR, config.CACHE_FILE_NAME)


def _format_float(value: float) -> str:
    return f"{float(value):.17g}"


def save_jacobi(path: str, J: JacobiMatrix, metadata: Optional[Dict[str, object]] = None) -> str:
    """
    Write J with its metadata header; the file appears atomically.

    Args:
        path: Destination file; its directory must exist.
        J: Matrix to store.
        metadata: Extra header entries (iterations, eps, ...). ``n`` and ``builder`` are
            always written.

    Returns:
        str: The path written.
    """
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory):
        raise OSError(f"cache directory does not exist: {directory}")
    header = {"n": J.n}
    header.update(metadata or {})
    header["builder"] = f"mink {config.VERSION}"
    lines = [config.CACHE_HEADER]
    for key, value in header.items():
        lines.append(f"# {key}={value}")
    a_padded = J.a_padded()
    for j in range(J.n):
        lines.append(f"{j}\t{_format_float(a_padded[j])}\t{_format_float(J.b[j])}")
    fd, tmp_path = tempfile.mkstemp(prefix=".jacobi-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write("\n".join(lines) + "\n")
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    logger.info(f"Saved Jacobi matrix of size {J.n} to {path}")
    return path


def load_jacobi(path: str) -> Tuple[JacobiMatrix, Dict[str, str]]:
    """
    Read a cache file written by ``save_jacobi``.

    Returns:
        tuple: (JacobiMatrix, metadata dict with string values).

    Raises:
        CacheMissingError: The file does not exist.
        CacheFormatError: A line cannot be parsed (the error carries its line number).
        CacheMetadataError: The header disagrees with the rows.
    """
    if not os.path.exists(path):
        raise CacheMissingError(f"no Jacobi cache at {path}; run `mink jacobi --n N` or pass --compute")
    metadata: Dict[str, str] = {}
    a_values, b_values = [], []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if lineno == 1:
                if line != config.CACHE_HEADER:
                    raise CacheFormatError(f"expected '{config.CACHE_HEADER}', found '{line}'", lineno)
                continue
            if not line.strip():
                continue
            if line.startswith("#"):
                key, sep, value = line[1:].strip().partition("=")
                if not sep:
                    raise CacheFormatError(f"header line without '=': '{line}'", lineno)
                metadata[key.strip()] = value.strip()
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise CacheFormatError(f"expected 3 tab-separated fields, found {len(fields)}", lineno)
            try:
                index, a_value, b_value = int(fields[0]), float(fields[1]), float(fields[2])
            except ValueError as e:
                raise CacheFormatError(f"cannot parse row: {e}", lineno) from e
            if index != len(b_values):
                raise CacheFormatError(f"row index {index} out of sequence", lineno)
            a_values.append(a_value)
            b_values.append(b_value)
    if not b_values:
        raise CacheMetadataError(f"cache {path} holds no rows")
    declared = metadata.get("n")
    if declared is not None and int(declared) != len(b_values):
        raise CacheMetadataError(f"cache {path} declares n={declared} but holds {len(b_values)} rows")
    try:
        J = JacobiMatrix(np.array(b_values), np.array(a_values[1:]))
    except DataError as e:
        raise CacheMetadataError(f"cache {path} does not hold a valid Jacobi matrix: {e}") from e
    logger.info(f"Loaded Jacobi matrix of size {J.n} from {path}")
    return J, metadata


def file_sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()
