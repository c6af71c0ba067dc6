"""Binary artifact container: byte stability and defensive loading."""

import numpy as np
import pytest

from cuisineshift import artifact_io
from cuisineshift.errors import DataError


def _sample_arrays():
    rng = np.random.default_rng(5)
    return {
        "w": rng.normal(size=(4, 3)),
        "v": rng.normal(size=7).astype(np.float32),
        "idx": np.arange(6, dtype=np.int32).reshape(2, 3),
        "scalar": np.array(2.5),
    }


def test_roundtrip_restores_meta_and_arrays(tmp_path):
    meta = {"kind_detail": "unit", "names": ["a", "b"], "nested": {"x": 1}, "note": "café"}
    arrays = _sample_arrays()
    path = tmp_path / "art.bin"
    artifact_io.save_artifact(path, "test", meta, arrays)
    got_meta, got = artifact_io.load_artifact(path, kind="test")
    assert got_meta == meta
    assert set(got) == set(arrays)
    for name, arr in arrays.items():
        np.testing.assert_array_equal(got[name], arr)
        assert got[name].dtype == arr.dtype
        assert got[name].flags["C_CONTIGUOUS"]


def test_save_load_save_is_byte_identical(tmp_path):
    arrays = _sample_arrays()
    a = tmp_path / "a.bin"
    b = tmp_path / "b.bin"
    artifact_io.save_artifact(a, "test", {"v": 1}, arrays)
    artifact_io.save_artifact(b, "test", {"v": 1}, arrays)
    assert a.read_bytes() == b.read_bytes()

    meta, loaded = artifact_io.load_artifact(a)
    c = tmp_path / "c.bin"
    artifact_io.save_artifact(c, "test", meta, loaded)
    assert c.read_bytes() == a.read_bytes()


def test_layout_quirks_are_normalized(tmp_path):
    f_order = np.asfortranarray(np.arange(12, dtype=np.float64).reshape(3, 4))
    big_endian = np.arange(5, dtype=">f8")
    path = tmp_path / "art.bin"
    artifact_io.save_artifact(path, "test", {}, {"f": f_order, "be": big_endian})
    _, got = artifact_io.load_artifact(path)
    np.testing.assert_array_equal(got["f"], f_order)
    assert got["f"].flags["C_CONTIGUOUS"]
    np.testing.assert_array_equal(got["be"], big_endian.astype("<f8"))
    assert got["be"].dtype == np.dtype("<f8")


def test_load_rejects_foreign_and_damaged_files(tmp_path):
    with pytest.raises(DataError, match="not found"):
        artifact_io.load_artifact(tmp_path / "missing.bin")

    alien = tmp_path / "alien.bin"
    alien.write_bytes(b"GIF89a" + b"\x00" * 64)
    with pytest.raises(DataError, match="not a cuisineshift artifact"):
        artifact_io.load_artifact(alien)

    good = tmp_path / "good.bin"
    artifact_io.save_artifact(good, "test", {}, _sample_arrays())
    with pytest.raises(DataError, match="expected a 'model'"):
        artifact_io.load_artifact(good, kind="model")

    truncated = tmp_path / "short.bin"
    truncated.write_bytes(good.read_bytes()[:-10])
    with pytest.raises(DataError, match="truncated"):
        artifact_io.load_artifact(truncated)

    raw = bytearray(good.read_bytes())
    raw[20] = 0xFF  # stomp on the header JSON
    broken = tmp_path / "broken.bin"
    broken.write_bytes(bytes(raw))
    with pytest.raises(DataError, match="corrupt"):
        artifact_io.load_artifact(broken)


def test_empty_and_zero_length_arrays(tmp_path):
    path = tmp_path / "art.bin"
    artifact_io.save_artifact(path, "test", {}, {"empty": np.zeros((0, 4))})
    _, got = artifact_io.load_artifact(path)
    assert got["empty"].shape == (0, 4)
    assert got["empty"].dtype == np.float64
