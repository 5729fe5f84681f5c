"""
Tests for checkpoint files
"""

import json
import struct

import numpy as np
import pytest

from localqst.errors import (
    CheckpointError,
    CheckpointMagicError,
    CheckpointShapeError,
    CheckpointTruncatedError,
    CheckpointVersionError,
)
from localqst.nn import (
    MAGIC,
    LayerSpec,
    checkpoint_header,
    init_params,
    load_checkpoint,
    save_checkpoint,
)


@pytest.fixture
def spec():
    return LayerSpec(sizes=(6, 5, 4))


@pytest.fixture
def saved(tmp_path, spec):
    params = init_params(spec, 9)
    path = tmp_path / "model.qstnn"
    save_checkpoint(params, spec, path, seed=9, metadata={"note": "test"})
    return path, params


def split(blob: bytes):
    (length,) = struct.unpack_from("<I", blob, len(MAGIC))
    start = len(MAGIC) + 4
    return json.loads(blob[start : start + length]), blob[start + length :]


def assemble(header: dict, payload: bytes, magic: bytes = MAGIC) -> bytes:
    encoded = json.dumps(header).encode()
    return magic + struct.pack("<I", len(encoded)) + encoded + payload


class TestCheckpoint:
    """Test save_checkpoint / load_checkpoint"""

    def test_round_trip_is_bitwise(self, saved, spec):
        path, params = saved
        loaded, loaded_spec = load_checkpoint(path)
        assert loaded_spec == spec
        for a, b in zip(params.arrays(), loaded.arrays()):
            assert a.tobytes() == b.tobytes()

    def test_header(self, saved):
        path, _ = saved
        header = checkpoint_header(path)
        assert header["format_version"] == 1
        assert header["sizes"] == [6, 5, 4]
        assert header["seed"] == 9
        assert header["payload_bytes"] == (5 * 7 + 4 * 6) * 8
        assert header["metadata"] == {"note": "test"}

    def test_layout(self, saved):
        path, params = saved
        blob = path.read_bytes()
        assert blob.startswith(b"QSTNN\x00\x01\x00")
        _, payload = split(blob)
        first_weights = np.frombuffer(payload[: 5 * 6 * 8], dtype="<f8").reshape(5, 6)
        np.testing.assert_array_equal(first_weights, params.weights[0])

    def test_truncated(self, saved):
        path, _ = saved
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(CheckpointTruncatedError):
            load_checkpoint(path)

    def test_truncated_header(self, saved):
        path, _ = saved
        path.write_bytes(path.read_bytes()[: len(MAGIC) + 10])
        with pytest.raises(CheckpointTruncatedError):
            load_checkpoint(path)

    def test_bad_magic(self, saved):
        path, _ = saved
        blob = path.read_bytes()
        path.write_bytes(b"NOTQST\x00\x00" + blob[len(MAGIC) :])
        with pytest.raises(CheckpointMagicError):
            load_checkpoint(path)

    def test_unknown_version(self, saved):
        path, _ = saved
        header, payload = split(path.read_bytes())
        header["format_version"] = 2
        path.write_bytes(assemble(header, payload))
        with pytest.raises(CheckpointVersionError):
            load_checkpoint(path)

    def test_sizes_disagree_with_payload(self, saved):
        path, _ = saved
        header, payload = split(path.read_bytes())
        header["sizes"] = [6, 4, 4]
        path.write_bytes(assemble(header, payload))
        with pytest.raises(CheckpointShapeError):
            load_checkpoint(path)

    def test_trailing_bytes(self, saved):
        path, _ = saved
        path.write_bytes(path.read_bytes() + b"\x00" * 8)
        with pytest.raises(CheckpointError) as excinfo:
            load_checkpoint(path)
        assert type(excinfo.value) is CheckpointError

    def test_spec_must_match_params(self, tmp_path, spec):
        params = init_params(spec, 0)
        with pytest.raises(CheckpointShapeError):
            save_checkpoint(params, LayerSpec(sizes=(6, 4)), tmp_path / "bad.qstnn")
