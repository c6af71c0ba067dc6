"""Byte-stable binary container for trained artifacts.

np.savez goes through zipfile, which stamps member headers with the
current time, so two saves of identical content differ. Models and
embeddings here must round-trip save -> load -> save to identical bytes,
hence this small fixed-layout container:

    magic (8 bytes) | header length (8-byte LE uint) | header JSON | raw arrays

The header records kind, metadata and an array manifest (name, dtype,
shape, byte offset). Arrays are written in sorted-name order as C-order
little-endian bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import DataError

MAGIC = b"CSHIFT01"


def save_artifact(path, kind: str, meta: dict, arrays: dict) -> None:
    manifest = []
    offset = 0
    names = sorted(arrays)
    blobs = []
    for name in names:
        arr = np.ascontiguousarray(arrays[name])
        if arr.dtype.byteorder == ">":
            arr = arr.astype(arr.dtype.newbyteorder("<"))
        blob = arr.tobytes()
        manifest.append(
            {
                "name": name,
                "dtype": arr.dtype.str,
                "shape": list(arr.shape),
                "offset": offset,
            }
        )
        blobs.append(blob)
        offset += len(blob)
    header = json.dumps(
        {"kind": kind, "meta": meta, "arrays": manifest},
        sort_keys=True,
        separators=(",", ":"),
    ).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(len(header).to_bytes(8, "little"))
        fh.write(header)
        for blob in blobs:
            fh.write(blob)


def load_artifact(path, kind: str | None = None):
    """Return (meta, arrays). Raises DataError on a foreign or truncated file."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"artifact not found: {path}")
    raw = path.read_bytes()
    if len(raw) < 16 or raw[:8] != MAGIC:
        raise DataError(f"not a cuisineshift artifact: {path}")
    hlen = int.from_bytes(raw[8:16], "little")
    try:
        header = json.loads(raw[16 : 16 + hlen].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DataError(f"corrupt artifact header in {path}: {exc}") from exc
    if kind is not None and header.get("kind") != kind:
        raise DataError(
            f"expected a {kind!r} artifact, found {header.get('kind')!r} in {path}"
        )
    base = 16 + hlen
    arrays = {}
    for entry in header["arrays"]:
        dtype = np.dtype(entry["dtype"])
        shape = tuple(entry["shape"])
        nbytes = dtype.itemsize * int(np.prod(shape, dtype=np.int64)) if shape else dtype.itemsize
        start = base + entry["offset"]
        if start + nbytes > len(raw):
            raise DataError(f"truncated artifact: {path}")
        arrays[entry["name"]] = np.frombuffer(
            raw[start : start + nbytes], dtype=dtype
        ).reshape(shape).copy()
    return header["meta"], arrays
