#!/usr/bin/env python3
# End-to-end classification prep over a directory tree: one subdirectory per
# class, one record per file, split, stratify, summarize, batch.

import tempfile
from pathlib import Path

import fieldstream as fs
from fieldstream import EvalStrategy

# Build a tiny synthetic dataset: 8 cats, 5 dogs.
root = Path(tempfile.mkdtemp(prefix="pets-"))
for cls, n in [("cats", 8), ("dogs", 5)]:
    d = root / cls
    d.mkdir()
    for i in range(n):
        (d / f"{cls[0]}{i:02d}.jpg").write_text("")

train, test = (
    fs.get_datastream(root, ext=".jpg")
    | fs.datasplit(0.25, seed=7)
    | fs.stratify_sample_tt()
    | fs.summary()
    | fs.apply("filename", "image", lambda p: float(len(p)), strategy=EvalStrategy.ON_DEMAND)
    | fs.make_train_test_split
)
print("train size:", len(train), " test size:", len(test))

# Infinite shuffled epochs feed the batcher; take() bounds the demo.
batches = (
    train
    | fs.infshuffle(seed=1)
    | fs.as_batch("image", "class_no", batch_size=4)
    | fs.take(3)
    | fs.as_list
)
for b in batches:
    print("batch of", b.size, "feature shape", b.features["image"].shape, "labels", list(b.labels.data))

# Pattern-based splits mark records whose key matches a regular expression.
marked = (
    fs.Datastream(["a_test.jpg", "b.jpg", "c_val.jpg"])
    | fs.as_field("filename")
    | fs.datasplit_by_pattern("_test", valid_pattern="_val")
    | fs.as_list
)
print("pattern splits:", [(r["filename"], r["split"].value) for r in marked])
