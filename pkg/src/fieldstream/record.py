"""Multi-field records with per-field evaluation strategies.

A :class:`Record` is an ordered collection of named field cells. Each
cell carries one of three strategies:

* ``EAGER``: the value was computed up front and is stored.
* ``LAZY_MEMOIZED``: a thunk runs on the first access, the result is
  stored, and the thunk is never invoked again.
* ``ON_DEMAND``: the thunk runs on every access and nothing is stored,
  so an impure thunk (augmentation, sampling) yields a fresh value per
  read.

Thunks take the whole record and read their inputs through
:meth:`Record.get_field` at force time. Lazy chains therefore force
transitively, and a thunk whose input was deleted in the meantime
raises :class:`~fieldstream.errors.MissingField` naming the deleted
field. Thunks behind LAZY_MEMOIZED cells are expected to be pure; this
is a documented requirement, not an enforced one.

Each cell counts its thunk invocations in ``eval_count``. The counter
is part of the public contract so strategy semantics stay observable in
tests; it is a single integer increment and always on.

A record is confined to one consumer at a time. Records whose cells are
all eager may move freely between threads; records with pending thunks
may move only if the thunks are pure and transferable. No locking is
performed.
"""

from __future__ import annotations

from enum import Enum
from typing import Any, Callable, Mapping

from .errors import MissingField

__all__ = ["EvalStrategy", "FieldCell", "Record", "Value", "Thunk"]

# A field value: None, bool, int, float, str, Tensor, list or dict.
Value = Any
Thunk = Callable[["Record"], Value]

_UNSET = object()


class EvalStrategy(Enum):
    """How a field obtains its value when read."""

    EAGER = "eager"
    LAZY_MEMOIZED = "lazy_memoized"
    ON_DEMAND = "on_demand"


class FieldCell:
    """One field slot: strategy, stored value and/or thunk, eval counter."""

    __slots__ = ("strategy", "eval_count", "_stored", "_thunk")

    def __init__(self, strategy: EvalStrategy, *, stored: Value = _UNSET, thunk: Thunk | None = None):
        if strategy is EvalStrategy.EAGER:
            if stored is _UNSET or thunk is not None:
                raise ValueError("eager cell takes a stored value and no thunk")
        else:
            if stored is not _UNSET or not callable(thunk):
                raise ValueError(f"{strategy.value} cell takes a thunk and no stored value")
        self.strategy = strategy
        self.eval_count = 0
        self._stored = stored
        self._thunk = thunk

    @classmethod
    def eager(cls, value: Value) -> "FieldCell":
        return cls(EvalStrategy.EAGER, stored=value)

    @classmethod
    def lazy_memoized(cls, thunk: Thunk) -> "FieldCell":
        return cls(EvalStrategy.LAZY_MEMOIZED, thunk=thunk)

    @classmethod
    def on_demand(cls, thunk: Thunk) -> "FieldCell":
        return cls(EvalStrategy.ON_DEMAND, thunk=thunk)

    def get(self, record: "Record") -> Value:
        """Produce the value, forcing the thunk as the strategy dictates."""
        if self.strategy is EvalStrategy.EAGER:
            return self._stored
        if self.strategy is EvalStrategy.LAZY_MEMOIZED:
            if self._stored is _UNSET:
                thunk = self._thunk
                self.eval_count += 1
                self._stored = thunk(record)
                self._thunk = None  # release the closure; never invoked again
            return self._stored
        self.eval_count += 1
        return self._thunk(record)

    def clone(self) -> "FieldCell":
        """Fresh cell with the same strategy and payload; eval_count resets."""
        cell = FieldCell.__new__(FieldCell)
        cell.strategy = self.strategy
        cell.eval_count = 0
        cell._stored = self._stored
        cell._thunk = self._thunk
        return cell

    def __repr__(self) -> str:
        if self.strategy is EvalStrategy.EAGER:
            return f"FieldCell.eager({self._stored!r})"
        forced = "" if self._stored is _UNSET else " forced"
        return f"FieldCell({self.strategy.value}{forced})"


class Record:
    """Ordered map of field names to cells; the element type of a stream.

    ``Record(x=1, y=2)`` builds eager fields in keyword order. New
    fields append; replacing a field keeps its position. Field names
    are unique non-empty strings.
    """

    __slots__ = ("_cells",)

    def __init__(self, /, **values: Value):
        self._cells: dict[str, FieldCell] = {}
        for name, value in values.items():
            self.set_value(name, value)

    @classmethod
    def from_values(cls, values: Mapping[str, Value]) -> "Record":
        """Eager record from a mapping; needed when names aren't identifiers."""
        r = cls()
        for name, value in values.items():
            r.set_value(name, value)
        return r

    def get_field(self, name: str) -> Value:
        cell = self._cells.get(name)
        if cell is None:
            raise MissingField(name)
        return cell.get(self)

    def set_field(self, name: str, cell: FieldCell) -> "Record":
        if not isinstance(name, str) or not name:
            raise ValueError(f"field name must be a non-empty string, got {name!r}")
        if not isinstance(cell, FieldCell):
            raise TypeError(f"expected a FieldCell, got {type(cell).__name__}")
        self._cells[name] = cell
        return self

    def set_value(self, name: str, value: Value) -> "Record":
        """Shorthand for installing an eager cell."""
        return self.set_field(name, FieldCell.eager(value))

    def delete_field(self, name: str) -> "Record":
        if name not in self._cells:
            raise MissingField(name, "cannot delete")
        del self._cells[name]
        return self

    def field_names(self) -> list[str]:
        return list(self._cells)

    def cell(self, name: str) -> FieldCell:
        """The raw cell, for strategy or eval_count inspection."""
        cell = self._cells.get(name)
        if cell is None:
            raise MissingField(name)
        return cell

    def has_field(self, name: str) -> bool:
        return name in self._cells

    def to_dict(self) -> dict[str, Value]:
        """Force every field and return name -> value in field order."""
        return {name: self.get_field(name) for name in self._cells}

    def clone(self) -> "Record":
        """New record with cloned cells (same strategies, fresh counters)."""
        r = Record()
        for name, cell in self._cells.items():
            r._cells[name] = cell.clone()
        return r

    def __getitem__(self, name: str) -> Value:
        return self.get_field(name)

    def __setitem__(self, name: str, value: Value) -> None:
        self.set_value(name, value)

    def __contains__(self, name: str) -> bool:
        return name in self._cells

    def __len__(self) -> int:
        return len(self._cells)

    def __repr__(self) -> str:
        parts = []
        for name, cell in self._cells.items():
            if cell.strategy is EvalStrategy.EAGER:
                parts.append(f"{name}={cell._stored!r}")
            else:
                parts.append(f"{name}=<{cell.strategy.value}>")
        return f"Record({', '.join(parts)})"
