"""A minimal n-dimensional float array: explicit shape, flat row-major data.

This is the unit of windowing and batching. It stores 64-bit floats in a
flat tuple, which keeps serialization exact and equality structural; it
is deliberately not a numerics type.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

from .errors import ShapeMismatch

__all__ = ["Tensor", "as_tensor"]


class Tensor:
    """Immutable row-major float tensor with an explicit shape.

    The empty shape ``()`` denotes a scalar holding exactly one element.
    """

    __slots__ = ("_shape", "_data")

    def __init__(self, shape: Sequence[int], data: Sequence[float]):
        shape = tuple(shape)
        for dim in shape:
            if isinstance(dim, bool) or not isinstance(dim, int) or dim < 0:
                raise ValueError(f"bad tensor dimension {dim!r}")
        flat = tuple(self._as_float(x) for x in data)
        if len(flat) != math.prod(shape):
            raise ValueError(
                f"tensor data has {len(flat)} elements, shape {shape} needs {math.prod(shape)}"
            )
        self._shape = shape
        self._data = flat

    @staticmethod
    def _as_float(x) -> float:
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise ValueError(f"tensor element {x!r} is not a number")
        return float(x)

    @property
    def shape(self) -> tuple[int, ...]:
        return self._shape

    @property
    def data(self) -> tuple[float, ...]:
        return self._data

    @property
    def size(self) -> int:
        return len(self._data)

    @classmethod
    def scalar(cls, x: float) -> "Tensor":
        return cls((), (x,))

    @classmethod
    def from_nested(cls, nested) -> "Tensor":
        """Build a tensor from (possibly nested) lists, inferring the shape."""
        shape = []
        probe = nested
        while isinstance(probe, (list, tuple)):
            shape.append(len(probe))
            probe = probe[0] if probe else None
        flat: list[float] = []

        def walk(node, depth):
            if depth == len(shape):
                flat.append(cls._as_float(node))
                return
            if not isinstance(node, (list, tuple)) or len(node) != shape[depth]:
                raise ValueError("ragged nested data")
            for child in node:
                walk(child, depth + 1)

        walk(nested, 0)
        return cls(shape, flat)

    def to_nested(self):
        """Inverse of :meth:`from_nested`; a scalar comes back as a float."""

        def build(shape, offset):
            if not shape:
                return self._data[offset]
            head, *rest = shape
            step = math.prod(rest)
            return [build(rest, offset + i * step) for i in range(head)]

        return build(list(self._shape), 0)

    def item(self) -> float:
        if len(self._data) != 1:
            raise ValueError(f"item() needs exactly one element, tensor has {len(self._data)}")
        return self._data[0]

    @staticmethod
    def stack(tensors: Sequence["Tensor"]) -> "Tensor":
        """Stack equal-shaped tensors along a new leading axis."""
        tensors = list(tensors)
        if not tensors:
            raise ValueError("cannot stack zero tensors")
        base = tensors[0].shape
        for t in tensors:
            if t.shape != base:
                raise ShapeMismatch(f"cannot stack shape {t.shape} with shape {base}")
        data: list[float] = []
        for t in tensors:
            data.extend(t.data)
        return Tensor((len(tensors),) + base, data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return self._shape == other._shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self._shape, self._data))

    def __repr__(self) -> str:
        if len(self._data) <= 6:
            return f"Tensor(shape={self._shape}, data={list(self._data)})"
        return f"Tensor(shape={self._shape}, <{len(self._data)} floats>)"


def as_tensor(value) -> Tensor:
    """Coerce a field value to a tensor; numeric scalars become rank 0."""
    if isinstance(value, Tensor):
        return value
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return Tensor.scalar(float(value))
    raise TypeError(f"{value!r} is neither a tensor nor a numeric scalar")
