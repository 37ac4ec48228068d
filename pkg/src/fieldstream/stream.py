"""Lazy single-use streams and the pipeline composition syntax.

A :class:`Datastream` wraps a pull-based iterator of records (or of
plain values, before ``as_field`` / after ``select_field``). Elements
are produced only when a sink pulls, streams may be infinite, and each
stream is consumed at most once: iterating or composing an already
claimed stream raises ``SingleUseViolation``.

Combinators decorated with :func:`pipeable` support both call shapes::

    take(stream, 3)        # plain function call
    stream | take(3)       # pipeline syntax, reads left to right
    stream | as_list       # zero-argument stages may drop the parens

Either way the stage is lazy: composing performs zero upstream pulls.
Plain iterables (lists, generators) are accepted wherever a stream is
expected.
"""

from __future__ import annotations

import inspect
from collections.abc import Iterable, Iterator, Mapping
from functools import update_wrapper

from .errors import SingleUseViolation
from .record import FieldCell, Record, Value

__all__ = [
    "Datastream",
    "pipeable",
    "ensure_stream",
    "claim_iter",
    "pipe",
    "as_field",
    "select_field",
    "as_list",
    "take",
    "fold",
    "scan",
    "count",
]


class Datastream:
    """Single-consumption lazy stream of records or plain values."""

    __slots__ = ("_it", "_claimed")

    def __init__(self, items: Iterable):
        self._it = iter(items)
        self._claimed = False

    def claim(self) -> Iterator:
        """Hand over the underlying iterator; valid exactly once."""
        if self._claimed:
            raise SingleUseViolation("stream was already consumed or composed")
        self._claimed = True
        return self._it

    def __iter__(self) -> Iterator:
        return self.claim()

    def __or__(self, stage):
        if not callable(stage):
            return NotImplemented
        return stage(self)

    def __repr__(self) -> str:
        state = "claimed" if self._claimed else "fresh"
        return f"<Datastream {state}>"


def _is_stream_like(x) -> bool:
    if isinstance(x, Datastream):
        return True
    return isinstance(x, Iterable) and not isinstance(x, (str, bytes, Mapping))


def ensure_stream(s) -> Datastream:
    """Wrap a plain iterable; pass a Datastream through untouched."""
    if isinstance(s, Datastream):
        return s
    if _is_stream_like(s):
        return Datastream(s)
    raise TypeError(f"expected a stream or iterable, got {type(s).__name__}")


def claim_iter(s) -> Iterator:
    """Claim a stream (or adopt an iterable) without pulling anything."""
    return ensure_stream(s).claim()


class _BoundStage:
    """A combinator with its non-stream arguments already bound."""

    __slots__ = ("_func", "_args", "_kwargs")

    def __init__(self, func, args, kwargs):
        self._func = func
        self._args = args
        self._kwargs = kwargs

    def __call__(self, upstream):
        return self._func(upstream, *self._args, **self._kwargs)

    def __ror__(self, upstream):
        return self(upstream)

    def __repr__(self) -> str:
        return f"<stage {self._func.__name__}>"


class _Pipeable:
    """Dual-mode wrapper produced by :func:`pipeable`.

    Called with a stream first it runs immediately; called with only
    the remaining arguments it returns a stage for use after ``|``.
    """

    def __init__(self, func):
        self._func = func
        self._sig = inspect.signature(func)
        update_wrapper(self, func)

    def _binds_fully(self, args, kwargs) -> bool:
        try:
            self._sig.bind(*args, **kwargs)
        except TypeError:
            return False
        return True

    def __call__(self, *args, **kwargs):
        if args and _is_stream_like(args[0]) and self._binds_fully(args, kwargs):
            return self._func(*args, **kwargs)
        return _BoundStage(self._func, args, kwargs)

    def __ror__(self, upstream):
        return self._func(upstream)

    def __repr__(self) -> str:
        return f"<pipeable {self._func.__name__}>"


def pipeable(func):
    """Make a stream-first function usable after ``|`` with bound args."""
    return _Pipeable(func)


@pipeable
def pipe(s, stage) -> Datastream:
    """Apply one stream transformer; the explicit spelling of ``s | stage``."""
    if not callable(stage):
        raise TypeError(f"stage must be callable, got {type(stage).__name__}")
    result = stage(ensure_stream(s))
    if isinstance(result, Datastream) or not _is_stream_like(result):
        return result
    return Datastream(result)


@pipeable
def as_field(s, name: str) -> Datastream:
    """Lift a stream of plain values into single-field eager records."""
    if not isinstance(name, str) or not name:
        raise ValueError(f"field name must be a non-empty string, got {name!r}")
    it = claim_iter(s)

    def gen():
        for v in it:
            yield Record().set_field(name, FieldCell.eager(v))

    return Datastream(gen())


@pipeable
def select_field(s, names) -> Datastream:
    """Project records back to plain values.

    A single name yields that field's forced values; a sequence of
    names yields one list per record, in the given order. A record
    lacking a requested field fails at its own position in the stream.
    """
    it = claim_iter(s)

    if isinstance(names, str):
        def gen():
            for r in it:
                yield r.get_field(names)
    else:
        wanted = list(names)

        def gen():
            for r in it:
                yield [r.get_field(n) for n in wanted]

    return Datastream(gen())


@pipeable
def as_list(s) -> list:
    """Materialize a finite stream, preserving order."""
    return list(claim_iter(s))


@pipeable
def take(s, n: int) -> Datastream:
    """At most ``n`` elements, pulling upstream exactly min(n, len) times."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValueError(f"take needs a non-negative integer, got {n!r}")
    it = claim_iter(s)

    def gen():
        for _ in range(n):
            try:
                x = next(it)
            except StopIteration:
                return
            yield x

    return Datastream(gen())


@pipeable
def fold(s, field: str, init: Value, f) -> Value:
    """Left-fold the forced values of one field; ``init`` on an empty stream."""
    acc = init
    for r in claim_iter(s):
        acc = f(acc, r.get_field(field))
    return acc


@pipeable
def scan(s, src: str, dst: str, init: Value, f) -> Datastream:
    """Running left-fold: element i gains ``dst`` = fold of values 0..i."""
    it = claim_iter(s)

    def gen():
        acc = init
        for r in it:
            acc = f(acc, r.get_field(src))
            r.set_field(dst, FieldCell.eager(acc))
            yield r

    return Datastream(gen())


@pipeable
def count(s) -> int:
    """Number of elements in a finite stream; forces no fields."""
    return sum(1 for _ in claim_iter(s))
