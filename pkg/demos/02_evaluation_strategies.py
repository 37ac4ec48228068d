#!/usr/bin/env python3
# The three evaluation strategies, and why they matter for data prep.
#
# Every field cell is EAGER (value stored), LAZY_MEMOIZED (computed once on
# first access) or ON_DEMAND (recomputed on every access). apply() picks the
# strategy per destination field.

import fieldstream as fs
from fieldstream import EvalStrategy

calls = {"lazy": 0, "demand": 0}


def slow_feature(v):
    calls["lazy"] += 1
    return v * 10


def augmentation(v):
    # imagine a random crop: a fresh result each time it is read
    calls["demand"] += 1
    return v + calls["demand"]


rows = (
    fs.Datastream([1, 2, 3])
    | fs.as_field("x")
    | fs.apply("x", "feature", slow_feature, strategy=EvalStrategy.LAZY_MEMOIZED)
    | fs.apply("x", "augmented", augmentation, strategy=EvalStrategy.ON_DEMAND)
    | fs.as_list
)
print("after materializing the stream, nothing has been computed:", calls)

r = rows[0]
print("feature read twice:", r.get_field("feature"), r.get_field("feature"))
print("lazy ran once:", calls["lazy"] == 1)

print("augmented read twice:", r.get_field("augmented"), r.get_field("augmented"))
print("on-demand ran twice:", r.cell("augmented").eval_count == 2)

# The hazard: lazy thunks read their sources at force time. Deleting a source
# before forcing breaks the chain loudly.
broken = (
    fs.Datastream([5])
    | fs.as_field("x")
    | fs.apply("x", "y", lambda v: v + 1, strategy=EvalStrategy.LAZY_MEMOIZED)
    | fs.delfield("x")
    | fs.as_list
)
try:
    broken[0].get_field("y")
except fs.MissingField as e:
    print("forcing y after deleting x:", e)

# With eager apply the value is computed before the deletion, so this is the
# memory-friendly pattern: compute eagerly, then drop the heavy source field.
fine = (
    fs.Datastream([5])
    | fs.as_field("x")
    | fs.apply("x", "y", lambda v: v + 1)
    | fs.delfield("x")
    | fs.as_list
)
print("eager apply then delfield:", fine[0].to_dict())
