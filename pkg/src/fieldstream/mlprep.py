"""Train/test splitting, stratification, shuffling and minibatch packing.

Split assignment lives in a per-record ``split`` field holding one of
the labels ``train``, ``valid`` or ``test``. Splits can be drawn at
random (seeded, reproducible), loaded from or saved to a JSON split
file ``{key: label}``, or derived from filename patterns.

Class-count utilities default to the field name ``class_no`` and fall
back to ``class_id`` when only that one is present, since both names
are common for the same thing.
"""

from __future__ import annotations

import json
import os
import random
import re
import sys
from collections import Counter
from dataclasses import dataclass
from enum import Enum

from .cache import atomic_write_bytes
from .errors import (
    BadPattern,
    BadSplitFile,
    EmptyStream,
    NonNumericLabel,
    ShapeMismatch,
    UnknownSplitLabel,
    UnlistedKey,
)
from .record import FieldCell, Record
from .stream import Datastream, claim_iter, pipeable
from .tensor import Tensor, as_tensor

__all__ = [
    "SplitLabel",
    "Batch",
    "datasplit",
    "datasplit_by_pattern",
    "stratify_sample",
    "stratify_sample_tt",
    "summary",
    "make_train_test_split",
    "infshuffle",
    "as_batch",
]

SPLIT_FIELD = "split"


class SplitLabel(str, Enum):
    """Closed set of split labels; members compare equal to their text."""

    TRAIN = "train"
    VALID = "valid"
    TEST = "test"

    @classmethod
    def parse(cls, text) -> "SplitLabel":
        try:
            return cls(text)
        except ValueError:
            raise UnknownSplitLabel(f"unknown split label {text!r}") from None


def _label_text(value) -> str:
    return value.value if isinstance(value, SplitLabel) else str(value)


@dataclass(frozen=True)
class Batch:
    """One minibatch: stacked feature tensors plus a flat label tensor."""

    features: dict[str, Tensor]
    labels: Tensor
    size: int

    def __post_init__(self):
        if self.labels.shape != (self.size,):
            raise ShapeMismatch(f"labels shape {self.labels.shape} != ({self.size},)")
        for name, t in self.features.items():
            if not t.shape or t.shape[0] != self.size:
                raise ShapeMismatch(f"feature {name!r} shape {t.shape} has leading dim != {self.size}")


def _normalize_fractions(split_value):
    if isinstance(split_value, (tuple, list)):
        if len(split_value) != 2:
            raise ValueError(f"expected (valid_fraction, test_fraction), got {split_value!r}")
        valid, test = float(split_value[0]), float(split_value[1])
        if not (0.0 <= valid <= 1.0 and 0.0 <= test <= 1.0 and valid + test <= 1.0):
            raise ValueError(f"fractions must lie in [0, 1] and sum to at most 1: {split_value!r}")
        return valid, test
    p = float(split_value)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"test fraction must lie in [0, 1], got {split_value!r}")
    return None, p


def _draw_label(u: float, valid: float | None, test: float) -> SplitLabel:
    if valid is None:
        return SplitLabel.TEST if u < test else SplitLabel.TRAIN
    if u < valid:
        return SplitLabel.VALID
    if u < valid + test:
        return SplitLabel.TEST
    return SplitLabel.TRAIN


def _load_split_file(path) -> dict[str, SplitLabel]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as e:
        raise BadSplitFile(f"{path}: malformed JSON: {e.msg} at {e.lineno}:{e.colno}") from None
    if not isinstance(data, dict):
        raise BadSplitFile(f"{path}: expected a JSON object of key -> label")
    out = {}
    for key, label in data.items():
        try:
            out[key] = SplitLabel(label)
        except ValueError:
            raise BadSplitFile(f"{path}: unknown label {label!r} for key {key!r}") from None
    return out


def _save_split_file(path, assignments: dict[str, SplitLabel]) -> None:
    plain = {k: v.value for k, v in assignments.items()}
    text = json.dumps(plain, indent=2, sort_keys=True) + "\n"
    atomic_write_bytes(path, text.encode("utf-8"))


@pipeable
def datasplit(s, split_value, seed: int = 0, split_file=None, key_field: str = "filename") -> Datastream:
    """Give every record an eager ``split`` label.

    A scalar ``split_value`` p marks each record test with probability
    p, train otherwise; a pair ``(valid_fraction, test_fraction)``
    splits three ways. Draws come from a seeded generator in arrival
    order, so the assignment depends only on the seed and position,
    never on field values. With ``split_file``: an existing file is
    loaded and applied by ``key_field`` (a key absent from the file
    raises UnlistedKey); a missing file is computed and then written.
    """
    valid, test = _normalize_fractions(split_value)
    it = claim_iter(s)

    if split_file is None:
        def gen():
            rng = random.Random(seed)
            for r in it:
                r.set_field(SPLIT_FIELD, FieldCell.eager(_draw_label(rng.random(), valid, test)))
                yield r
    else:
        import os

        if os.path.exists(split_file):
            def gen():
                table = _load_split_file(split_file)
                for r in it:
                    key = r.get_field(key_field)
                    label = table.get(key)
                    if label is None:
                        raise UnlistedKey(f"key {key!r} not present in {split_file}")
                    r.set_field(SPLIT_FIELD, FieldCell.eager(label))
                    yield r
        else:
            def gen():
                rng = random.Random(seed)
                records = list(it)
                assignments: dict[str, SplitLabel] = {}
                for r in records:
                    label = _draw_label(rng.random(), valid, test)
                    assignments[r.get_field(key_field)] = label
                    r.set_field(SPLIT_FIELD, FieldCell.eager(label))
                _save_split_file(split_file, assignments)
                yield from records

    return Datastream(gen())


@pipeable
def datasplit_by_pattern(s, test_pattern: str, valid_pattern: str | None = None, key_field: str = "filename") -> Datastream:
    """Assign splits by substring-searching patterns against a key field.

    The test pattern wins over the valid pattern; records matching
    neither are train.
    """
    try:
        test_re = re.compile(test_pattern)
        valid_re = re.compile(valid_pattern) if valid_pattern is not None else None
    except re.error as e:
        raise BadPattern(f"bad pattern: {e}") from None
    it = claim_iter(s)

    def gen():
        for r in it:
            key = str(r.get_field(key_field))
            if test_re.search(key):
                label = SplitLabel.TEST
            elif valid_re is not None and valid_re.search(key):
                label = SplitLabel.VALID
            else:
                label = SplitLabel.TRAIN
            r.set_field(SPLIT_FIELD, FieldCell.eager(label))
            yield r

    return Datastream(gen())


def _resolve_class_field(records, requested: str | None) -> str:
    """Honor an explicit name; otherwise prefer class_no, then class_id."""
    if requested is not None:
        return requested
    if records:
        first = records[0]
        if first.has_field("class_no"):
            return "class_no"
        if first.has_field("class_id"):
            return "class_id"
    return "class_no"


def _balanced_indices(records, class_field: str) -> set[int]:
    """Indices of the first m records per class, m = smallest class size."""
    by_class: dict = {}
    for i, r in enumerate(records):
        by_class.setdefault(r.get_field(class_field), []).append(i)
    if not by_class:
        return set()
    m = min(len(v) for v in by_class.values())
    keep: set[int] = set()
    for indices in by_class.values():
        keep.update(indices[:m])
    return keep


@pipeable
def stratify_sample(s, class_field: str | None = None) -> Datastream:
    """Downsample so every class keeps the smallest class's count.

    Keeps the first m records of each class in arrival order, m being
    the size of the smallest class, and emits them in the original
    relative order. Materializes the stream. ``class_field`` defaults
    to ``class_no`` (``class_id`` accepted when only it is present).
    """
    it = claim_iter(s)

    def gen():
        records = list(it)
        field = _resolve_class_field(records, class_field)
        keep = _balanced_indices(records, field)
        for i, r in enumerate(records):
            if i in keep:
                yield r

    return Datastream(gen())


@pipeable
def stratify_sample_tt(s, class_field: str | None = None, split_field: str = SPLIT_FIELD) -> Datastream:
    """Stratify class counts independently inside each split label."""
    it = claim_iter(s)

    def gen():
        records = list(it)
        field = _resolve_class_field(records, class_field)
        by_split: dict = {}
        for i, r in enumerate(records):
            by_split.setdefault(_label_text(r.get_field(split_field)), []).append(i)
        keep: set[int] = set()
        for indices in by_split.values():
            group = [records[i] for i in indices]
            kept_local = _balanced_indices(group, field)
            keep.update(indices[j] for j in kept_local)
        for i, r in enumerate(records):
            if i in keep:
                yield r

    return Datastream(gen())


@pipeable
def summary(s, class_field: str | None = None, sink=None) -> Datastream:
    """Write a class/split count table, then re-emit the records unchanged.

    A pass-through tap for the middle of a pipeline. Rows are
    ``<class>\\t<split or "-">\\t<count>`` after a ``class\\tsplit\\tcount``
    header, sorted; the split column appears per record when a
    ``split`` field exists. Classes are counted by ``class_field`` but
    labelled with the record's ``class_name`` when it carries one.
    Writes to ``sink`` (default stdout) when the first element is
    pulled.
    """
    it = claim_iter(s)

    def gen():
        records = list(it)
        out = sink if sink is not None else sys.stdout
        field = _resolve_class_field(records, class_field)
        counts: Counter = Counter()
        labels: dict = {}
        for r in records:
            key = r.get_field(field)
            if key not in labels:
                labels[key] = (
                    str(r.get_field("class_name")) if r.has_field("class_name") else str(key)
                )
            split = _label_text(r.get_field(SPLIT_FIELD)) if r.has_field(SPLIT_FIELD) else "-"
            counts[(labels[key], split)] += 1
        out.write("class\tsplit\tcount\n")
        for (cls, split), n in sorted(counts.items()):
            out.write(f"{cls}\t{split}\t{n}\n")
        yield from records

    return Datastream(gen())


@pipeable
def make_train_test_split(s, split_field: str = SPLIT_FIELD):
    """Partition a finite stream into (train records, test records).

    Order is preserved within each part. Any label besides train/test,
    including valid, raises UnknownSplitLabel.
    """
    train: list[Record] = []
    test: list[Record] = []
    for r in claim_iter(s):
        label = r.get_field(split_field)
        if label == SplitLabel.TRAIN:
            train.append(r)
        elif label == SplitLabel.TEST:
            test.append(r)
        else:
            raise UnknownSplitLabel(f"expected train or test, got {label!r}")
    return train, test


@pipeable
def infshuffle(s, seed: int = 0) -> Datastream:
    """Infinite stream of shuffled epochs over a materialized input.

    Each epoch is a fresh seeded permutation of the full input, and the
    records are re-emitted by reference, so on-demand fields recompute
    once per epoch occurrence (fresh augmentation every pass).
    """
    it = claim_iter(s)

    def gen():
        records = list(it)
        if not records:
            raise EmptyStream("cannot shuffle an empty stream forever")
        rng = random.Random(seed)
        order = list(range(len(records)))
        while True:
            rng.shuffle(order)
            for i in order:
                yield records[i]

    return Datastream(gen())


@pipeable
def as_batch(s, feature_fields, label_field: str, batch_size: int = 32) -> Datastream:
    """Pack consecutive records into minibatches.

    Each listed feature field is stacked along a new leading axis
    (numeric scalars count as rank-0 tensors); labels must be numeric
    scalars and stack to shape ``[batch]``. A finite stream ends with a
    partial batch; an infinite stream yields batches forever.
    """
    if not isinstance(batch_size, int) or isinstance(batch_size, bool) or batch_size < 1:
        raise ValueError(f"batch_size must be a positive integer, got {batch_size!r}")
    names = [feature_fields] if isinstance(feature_fields, str) else list(feature_fields)
    it = claim_iter(s)

    def gen():
        shapes: dict[str, tuple[int, ...]] = {}

        def feature_tensor(r: Record, name: str) -> Tensor:
            t = as_tensor(r.get_field(name))
            expected = shapes.setdefault(name, t.shape)
            if t.shape != expected:
                raise ShapeMismatch(f"feature {name!r} has shape {t.shape}, expected {expected}")
            return t

        while True:
            chunk: list[Record] = []
            for r in it:
                chunk.append(r)
                if len(chunk) == batch_size:
                    break
            if not chunk:
                return
            features = {
                name: Tensor.stack([feature_tensor(r, name) for r in chunk]) for name in names
            }
            labels = []
            for r in chunk:
                v = r.get_field(label_field)
                if isinstance(v, bool) or not isinstance(v, (int, float)):
                    raise NonNumericLabel(f"label field {label_field!r} holds {v!r}")
                labels.append(float(v))
            yield Batch(features=features, labels=Tensor((len(chunk),), labels), size=len(chunk))
            if len(chunk) < batch_size:
                return

    return Datastream(gen())
