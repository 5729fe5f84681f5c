"""
Binary checkpoint format

Layout::

    8 bytes   magic b"QSTNN\\x00\\x01\\x00"
    4 bytes   header length L, uint32 little-endian
    L bytes   header, UTF-8 JSON:
              {"format_version": 1, "sizes": [...], "seed": ...,
               "payload_bytes": ..., "metadata": {...}}
    payload   per layer: weights (out x in, row-major) then bias,
              float64 little-endian

The loader checks magic, version, declared vs actual payload length and
declared payload vs layer sizes, each with its own exception.
"""

import json
import struct
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from ..errors import (
    CheckpointError,
    CheckpointMagicError,
    CheckpointShapeError,
    CheckpointTruncatedError,
    CheckpointVersionError,
)
from ..log import get_logger
from .network import LayerSpec, ModelParams

log = get_logger(__name__)

MAGIC = b"QSTNN\x00\x01\x00"
CHECKPOINT_VERSION = 1
_LENGTH = struct.Struct("<I")
_FLOAT = np.dtype("<f8")

PathLike = Union[str, Path]


def _payload_size(sizes: List[int]) -> int:
    return sum(n_out * (n_in + 1) for n_in, n_out in zip(sizes[:-1], sizes[1:]))


def save_checkpoint(
    params: ModelParams,
    spec: LayerSpec,
    path: PathLike,
    seed: int = 0,
    metadata: Optional[Dict[str, Any]] = None,
) -> None:
    """Write ``params`` for ``spec``; raises CheckpointShapeError if they disagree"""
    if params.layer_spec != spec:
        raise CheckpointShapeError(f"params have layout {params.layer_spec}, spec says {spec}")
    payload = b"".join(
        np.ascontiguousarray(a, dtype=_FLOAT).tobytes(order="C") for a in params.arrays()
    )
    header = {
        "format_version": CHECKPOINT_VERSION,
        "sizes": list(spec.sizes),
        "seed": seed,
        "payload_bytes": len(payload),
        "metadata": metadata or {},
    }
    header_bytes = json.dumps(header, separators=(",", ":"), allow_nan=False).encode()

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(_LENGTH.pack(len(header_bytes)))
        f.write(header_bytes)
        f.write(payload)
    log.debug("checkpoint_saved", path=str(path), layers=str(spec), bytes=len(payload))


def _read_header(blob: bytes) -> Tuple[Dict[str, Any], int]:
    if len(blob) < len(MAGIC):
        if MAGIC.startswith(blob):
            raise CheckpointTruncatedError("file ends inside the magic bytes")
        raise CheckpointMagicError("not a checkpoint file")
    if blob[: len(MAGIC)] != MAGIC:
        raise CheckpointMagicError(f"bad magic {blob[:len(MAGIC)]!r}")

    offset = len(MAGIC)
    if len(blob) < offset + _LENGTH.size:
        raise CheckpointTruncatedError("file ends before the header length")
    (header_len,) = _LENGTH.unpack_from(blob, offset)
    offset += _LENGTH.size
    if len(blob) < offset + header_len:
        raise CheckpointTruncatedError("file ends inside the header")
    try:
        header = json.loads(blob[offset : offset + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"header is not valid JSON: {exc}") from exc
    if not isinstance(header, dict):
        raise CheckpointError("header is not a JSON object")

    version = header.get("format_version")
    if version != CHECKPOINT_VERSION:
        raise CheckpointVersionError(
            f"unsupported checkpoint version {version!r} (expected {CHECKPOINT_VERSION})"
        )
    for key in ("sizes", "payload_bytes"):
        if key not in header:
            raise CheckpointError(f"header is missing {key!r}")
    return header, offset + header_len


def checkpoint_header(path: PathLike) -> Dict[str, Any]:
    """Header of a checkpoint without decoding the payload"""
    with open(path, "rb") as f:
        blob = f.read()
    header, _ = _read_header(blob)
    return header


def load_checkpoint(path: PathLike) -> Tuple[ModelParams, LayerSpec]:
    with open(path, "rb") as f:
        blob = f.read()
    header, offset = _read_header(blob)

    try:
        spec = LayerSpec(sizes=tuple(header["sizes"]))
    except (TypeError, ValueError) as exc:
        raise CheckpointShapeError(f"invalid layer sizes {header['sizes']!r}") from exc
    declared = header["payload_bytes"]
    if not isinstance(declared, int) or declared < 0:
        raise CheckpointError(f"invalid payload_bytes {declared!r}")

    actual = len(blob) - offset
    if actual < declared:
        raise CheckpointTruncatedError(
            f"payload has {actual} bytes, header declares {declared}"
        )
    if actual > declared:
        raise CheckpointError(f"{actual - declared} trailing bytes after the payload")
    expected = _payload_size(list(spec.sizes)) * _FLOAT.itemsize
    if declared != expected:
        raise CheckpointShapeError(
            f"layer sizes {spec} need {expected} payload bytes, header declares {declared}"
        )

    flat = np.frombuffer(blob, dtype=_FLOAT, offset=offset).astype(np.float64)
    arrays = []
    cursor = 0
    for n_in, n_out in zip(spec.sizes[:-1], spec.sizes[1:]):
        arrays.append(flat[cursor : cursor + n_out * n_in].reshape(n_out, n_in))
        cursor += n_out * n_in
        arrays.append(flat[cursor : cursor + n_out])
        cursor += n_out
    params = ModelParams.from_arrays(arrays)
    if not params.is_finite():
        raise CheckpointError("checkpoint holds non-finite parameters")
    return params, spec
