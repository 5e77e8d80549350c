"""Network persistence.

File layout (documented here; see also README):

    bytes 0..3   magic b"VNN1"
    bytes 4..7   uint32 little-endian header length H
    bytes 8..8+H UTF-8 JSON header: {"version", "dtype", "input_shape",
                 "rng_seed", "specs": [{"kind", "params"}...],
                 "tensors": [{"name", "shape", "nbytes"}...], "extras": {...}}
    then         raw little-endian tensor data, concatenated in header order

Round-trips are bit-exact: the header JSON is emitted with sorted keys and
compact separators, and tensors are written in parameter order.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from .layers import LayerSpec
from .network import Network

MAGIC = b"VNN1"


class ModelParseError(ValueError):
    """Raised on malformed model bytes; carries the byte offset of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


def save_network(net: Network, extras: dict | None = None) -> bytes:
    tensors = net.parameters()
    header = {
        "version": 1,
        "dtype": net.dtype.name,
        "input_shape": list(net.input_shape),
        "rng_seed": net.seed,
        "specs": [{"kind": s.kind, "params": s.params} for s in net.specs],
        "tensors": [
            {"name": name, "shape": list(arr.shape), "nbytes": arr.size * arr.dtype.itemsize}
            for name, arr in tensors
        ],
        "extras": extras or {},
    }
    head = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    parts = [MAGIC, struct.pack("<I", len(head)), head]
    le = "<f4" if net.dtype == np.float32 else "<f8"
    for _, arr in tensors:
        parts.append(np.ascontiguousarray(arr, dtype=le).tobytes())
    return b"".join(parts)


def load_network(data: bytes) -> tuple[Network, dict]:
    """Parse VNN1 bytes back into a Network plus its extras record."""
    if len(data) < 8:
        raise ModelParseError("file shorter than fixed header", len(data))
    if data[:4] != MAGIC:
        raise ModelParseError(f"bad magic {data[:4]!r}", 0)
    (head_len,) = struct.unpack("<I", data[4:8])
    if len(data) < 8 + head_len:
        raise ModelParseError("truncated header", len(data))
    try:
        header = json.loads(data[8 : 8 + head_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ModelParseError(f"header is not valid JSON: {exc}", 8) from None

    try:
        dtype = np.dtype(header["dtype"])
        specs = [LayerSpec(s["kind"], dict(s["params"])) for s in header["specs"]]
        net = Network(tuple(header["input_shape"]), specs, int(header["rng_seed"]), dtype)
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelParseError(f"invalid header contents: {exc}", 8) from None

    expected = net.parameters()
    declared = header.get("tensors", [])
    if len(declared) != len(expected):
        raise ModelParseError(
            f"header declares {len(declared)} tensors, network has {len(expected)}", 8
        )

    le = "<f4" if dtype == np.float32 else "<f8"
    offset = 8 + head_len
    values = []
    for rec, (name, arr) in zip(declared, expected):
        if rec["name"] != name or tuple(rec["shape"]) != arr.shape:
            raise ModelParseError(
                f"tensor {rec['name']!r} does not match expected {name} {arr.shape}", offset
            )
        nbytes = int(rec["nbytes"])
        if nbytes != arr.size * dtype.itemsize:
            raise ModelParseError(
                f"tensor {name}: declared {nbytes} bytes, shape implies "
                f"{arr.size * dtype.itemsize}", offset
            )
        chunk = data[offset : offset + nbytes]
        if len(chunk) != nbytes:
            raise ModelParseError(f"tensor {name}: file truncated", offset)
        values.append(np.frombuffer(chunk, dtype=le).reshape(arr.shape))
        offset += nbytes
    if offset != len(data):
        raise ModelParseError(f"{len(data) - offset} trailing bytes", offset)

    net.set_parameters(values)
    return net, dict(header.get("extras", {}))
