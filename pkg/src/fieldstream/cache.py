"""Disk-backed apply: compute a field once, persist it, reload next run.

Cache files are UTF-8 JSON with a one-field version envelope::

    {"v": 1, "value": <encoded value>}

Scalars encode natively. Tensors encode as
``{"t": "tensor", "shape": [...], "data": [...]}``; lists and maps
recurse. Floats round-trip exactly through the shortest-decimal
representation the JSON serializer emits. A map whose keys are exactly
``t``, ``shape`` and ``data`` with ``t == "tensor"`` is indistinguishable
from a tensor and will decode as one; avoid that key combination in
cached maps.

Layout on disk is ``cache_dir/<dst>/<encoded key>.json`` where the key
is the record's key field with every byte outside ``[A-Za-z0-9._-]``
percent-encoded. Writes go through a temp file and an atomic rename,
so concurrent processes sharing a cache directory never observe a
partial file. A file that exists but fails to decode raises
CacheCorrupt naming the path; it is never silently recomputed.
"""

from __future__ import annotations

import json
import math
import os
import tempfile

from .errors import CacheCorrupt
from .record import FieldCell, Value
from .stream import Datastream, claim_iter, pipeable
from .tensor import Tensor

__all__ = ["apply_cached", "encode_value", "decode_value", "to_jsonable", "from_jsonable", "atomic_write_bytes"]

_SAFE_BYTES = frozenset(b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789._-")


def sanitize_key(key: str) -> str:
    """Percent-encode every byte outside [A-Za-z0-9._-]."""
    out = []
    for b in key.encode("utf-8"):
        out.append(chr(b) if b in _SAFE_BYTES else f"%{b:02X}")
    return "".join(out)


def to_jsonable(value: Value):
    """Map a field value onto plain JSON-serializable data."""
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, Tensor):
        return {"t": "tensor", "shape": list(value.shape), "data": list(value.data)}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, dict):
        out = {}
        for k, v in value.items():
            if not isinstance(k, str):
                raise TypeError(f"map keys must be strings, got {k!r}")
            out[k] = to_jsonable(v)
        return out
    raise TypeError(f"{type(value).__name__} is not an encodable value")


def _is_tensor_obj(obj: dict) -> bool:
    return set(obj) == {"t", "shape", "data"} and obj.get("t") == "tensor"


def _tensor_from_obj(obj: dict) -> Tensor:
    shape = obj["shape"]
    data = obj["data"]
    if not isinstance(shape, list) or not isinstance(data, list):
        raise CacheCorrupt("tensor shape and data must be arrays")
    for dim in shape:
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 0:
            raise CacheCorrupt(f"bad tensor dimension {dim!r}")
    if len(data) != math.prod(shape):
        raise CacheCorrupt(
            f"tensor data has {len(data)} elements, shape {shape} needs {math.prod(shape)}"
        )
    for x in data:
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise CacheCorrupt(f"bad tensor element {x!r}")
    return Tensor(shape, [float(x) for x in data])


def from_jsonable(obj) -> Value:
    """Inverse of :func:`to_jsonable`; tensors are recognized structurally."""
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, list):
        return [from_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        if _is_tensor_obj(obj):
            return _tensor_from_obj(obj)
        return {k: from_jsonable(v) for k, v in obj.items()}
    raise CacheCorrupt(f"cannot decode {type(obj).__name__}")


def encode_value(value: Value) -> bytes:
    """Serialize one value to the versioned UTF-8 JSON cache format."""
    payload = {"v": 1, "value": to_jsonable(value)}
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


def decode_value(blob: bytes | str) -> Value:
    """Parse the cache format; any malformation raises CacheCorrupt."""
    if isinstance(blob, bytes):
        try:
            blob = blob.decode("utf-8")
        except UnicodeDecodeError as e:
            raise CacheCorrupt(f"not UTF-8: {e}") from None
    try:
        payload = json.loads(blob)
    except json.JSONDecodeError as e:
        raise CacheCorrupt(f"malformed JSON: {e.msg} at {e.lineno}:{e.colno}") from None
    if not isinstance(payload, dict) or "v" not in payload or "value" not in payload:
        raise CacheCorrupt("missing version envelope")
    if payload["v"] != 1:
        raise CacheCorrupt(f"unsupported version {payload['v']!r}")
    return from_jsonable(payload["value"])


def atomic_write_bytes(path, data: bytes) -> None:
    """Write via a temp file and rename, so readers never see a partial file."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


@pipeable
def apply_cached(s, src, dst: str, f, cache_dir, key_field: str = "filename") -> Datastream:
    """Like an eager ``apply`` whose results persist on disk per record.

    The cache path is derived from ``dst`` and the record's
    ``key_field`` value. On a hit the stored value is loaded and ``f``
    is not invoked; on a miss ``f`` runs and the result is written
    atomically before the record is yielded.
    """
    from .combinators import _reader

    read = _reader(src)
    cache_dir = os.fspath(cache_dir)
    subdir = os.path.join(cache_dir, dst)
    os.makedirs(subdir, exist_ok=True)
    it = claim_iter(s)

    def gen():
        for r in it:
            key = r.get_field(key_field)
            if not isinstance(key, str):
                raise TypeError(f"cache key field {key_field!r} must be text, got {type(key).__name__}")
            path = os.path.join(subdir, sanitize_key(key) + ".json")
            if os.path.exists(path):
                with open(path, "rb") as fh:
                    blob = fh.read()
                try:
                    value = decode_value(blob)
                except CacheCorrupt as e:
                    raise CacheCorrupt(f"{path}: {e}") from None
            else:
                value = f(read(r))
                atomic_write_bytes(path, encode_value(value))
            r.set_field(dst, FieldCell.eager(value))
            yield r

    return Datastream(gen())
